//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! criteria 1, 5 and 10 share the same evolution runs and report separately.

use num_complex::Complex64;

use lcuwalk::lcu::{self, SegmentMode};
use lcuwalk::linalg::eigendecompose;
use lcuwalk::plan::LcuPlan;
use lcuwalk::stateprep::{prepare_row_state_cascade, prepare_row_state_direct};
use lcuwalk::sum::norm2;
use lcuwalk::walk::{build_walk, verify_block_encoding, walk_eigenpair_check};
use lcuwalk::{
    bessel, check_sparse_norm_bound, matrix_exponential, rowtree, testgen, validate_hermitian,
    ComplexMatrix, Error, HermitianOperator, PrecisionConfig,
};

fn report(id: &str, description: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id} ({description}): {}{}",
        if pass { "PASS" } else { "FAIL" },
        if detail.is_empty() {
            String::new()
        } else {
            format!(" [{detail}]")
        }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn oracle_state(h: &HermitianOperator, t: f64, psi: &[Complex64]) -> Vec<Complex64> {
    matrix_exponential(h, t).unwrap().matvec(psi)
}

/// Criteria 1 (evolution accuracy), 5 (LCU success amplitude) and 10
/// (resource accounting) over one shared suite of 20 random runs.
#[test]
fn criteria_1_5_10_evolution_suite() {
    let mut rng = testgen::rng(1001);
    let ns = [2usize, 4, 8];
    let ts = [0.1_f64, 1.0, 3.0];
    let es = [1e-4_f64, 1e-6];

    let mut worst_err = 0.0_f64;
    let mut worst_amp_dev = 0.0_f64;
    let mut err_ok = true;
    let mut amp_ok = true;
    let mut counters_ok = true;

    for case in 0..20 {
        let n = ns[case % ns.len()];
        let t = ts[(case / 3) % ts.len()];
        let eps = es[(case / 9) % es.len()];
        let h = testgen::random_hermitian(&mut rng, n);
        let psi0 = testgen::random_state(&mut rng, n);

        let (out, run) = lcu::evolve(&h, t, eps, &psi0, SegmentMode::Circuit, false).unwrap();
        let exact = oracle_state(&h, t, &psi0);
        let err = norm2(
            &out.iter()
                .zip(&exact)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        worst_err = worst_err.max(err / eps);
        if err > eps {
            err_ok = false;
        }

        let eps_segment = eps / run.r as f64;
        for &amp in &run.success_amplitudes {
            let dev = (amp - 0.5).abs();
            worst_amp_dev = worst_amp_dev.max(dev / (10.0 * eps_segment));
            if dev > 10.0 * eps_segment {
                amp_ok = false;
            }
        }

        let est = lcu::estimate_resources(&h, t, eps).unwrap();
        if est.counters != run.counters || est.r != run.r || est.k != run.k {
            counters_ok = false;
        }
    }

    report(
        "1",
        "20 random evolutions match the matrix-exponential oracle within eps",
        err_ok,
        &format!("worst error/eps = {worst_err:.3e}"),
    );
    report(
        "5",
        "success amplitude within 10*eps' of 1/2 in every segment",
        amp_ok,
        &format!("worst deviation / (10*eps') = {worst_amp_dev:.3e}"),
    );
    report(
        "10",
        "run counters equal the closed-form resource estimate exactly",
        counters_ok,
        "",
    );
}

fn suite_matrices(seed: u64) -> Vec<HermitianOperator> {
    let mut rng = testgen::rng(seed);
    let mut out = Vec::new();
    for i in 0..50 {
        let n = [2usize, 4, 8][i % 3];
        let h = testgen::random_hermitian(&mut rng, n);
        if i % 2 == 0 {
            out.push(h);
        } else {
            // Real symmetric with negative entries: the hard branch of the
            // square-root convention.
            let m = ComplexMatrix::from_fn(n, |r, c| Complex64::new(h.matrix().get(r, c).re, 0.0));
            out.push(validate_hermitian(&m, 1e-12).unwrap());
        }
    }
    out
}

/// Criterion 2: block-encoding residual on 50 random matrices.
#[test]
fn criterion_2_block_encoding() {
    let mut worst = 0.0_f64;
    for h in suite_matrices(2002) {
        let w = build_walk(&rowtree::build(&h).unwrap()).unwrap();
        worst = worst.max(verify_block_encoding(&w, &h));
    }
    report(
        "2",
        "block-encoding residual <= 1e-12 on 50 random matrices",
        worst <= 1e-12,
        &format!("worst residual = {worst:.3e}"),
    );
}

/// Criterion 3: walk eigenpair residuals over every eigenpair of every
/// suite matrix, both phase branches.
#[test]
fn criterion_3_walk_spectrum() {
    let mut worst = 0.0_f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for h in suite_matrices(3003) {
        let w = build_walk(&rowtree::build(&h).unwrap()).unwrap();
        let eig = eigendecompose(&h).unwrap();
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            let vec = eig.eigenvector(i);
            for sign in [1i8, -1] {
                match walk_eigenpair_check(&w, &h, lambda, &vec, sign) {
                    Ok(res) => {
                        worst = worst.max(res);
                        checked += 1;
                    }
                    Err(Error::NearDegenerateEigenvalue) => skipped += 1,
                    Err(e) => panic!("unexpected eigenpair failure: {e}"),
                }
            }
        }
    }
    report(
        "3",
        "walk eigen-residuals <= 1e-10 for every eigenpair",
        worst <= 1e-10 && checked > 0,
        &format!("worst residual = {worst:.3e}, checked {checked}, near-degenerate skipped {skipped}"),
    );
}

/// Criterion 4: the truncation bound is never violated empirically.
#[test]
fn criterion_4_truncation_bound() {
    let mut rng = testgen::rng(4004);
    let mut violations = 0usize;
    let mut tested = 0usize;
    let mut worst_margin = 0.0_f64;
    for &z in &[-0.1_f64, -0.25, -0.5] {
        for k in 1..=20usize {
            let plan = LcuPlan::from_parts(z, k, 1, 1e-8, 1.0).unwrap();
            for _ in 0..100 {
                let nu = 2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0;
                let check = lcuwalk::eigenvalue_sum_check(&plan, nu).unwrap();
                let mut fact = 1.0_f64;
                for i in 2..=(k + 1) {
                    fact *= i as f64;
                }
                let bound =
                    8.0 * nu.abs() * (z.abs() / 2.0).powi(k as i32 + 1) * (k as f64 + 2.0) / fact;
                // The analytic bound underflows below double-precision
                // arithmetic noise for large k; floor it at a few ulps.
                let bound = bound.max(8.0 * f64::EPSILON);
                let err = (check.approx - check.exact).norm();
                tested += 1;
                if err > bound {
                    violations += 1;
                }
                worst_margin = worst_margin.max(err / bound);
            }
        }
    }
    report(
        "4",
        "Jacobi-Anger truncation bound holds with zero violations",
        violations == 0,
        &format!("{tested} instances, worst error/bound = {worst_margin:.3e}"),
    );
}

/// Criterion 6: Bessel backward recurrence vs power series, and the
/// truncated-sum identity.
#[test]
fn criterion_6_bessel_cross_validation() {
    let mut worst = 0.0_f64;
    let mut sum_ok = true;
    for &z in &[-0.5_f64, -0.25, -0.1] {
        let table = bessel::bessel_backward(z, 25).unwrap();
        for m in 0..=25usize {
            let series = bessel::bessel_series(m as i64, z).unwrap();
            worst = worst.max((table[m] - series).abs());
        }
        for k in 2..=20usize {
            let t = bessel::bessel_backward(z, k).unwrap();
            let s = bessel::truncated_sum(&t);
            let mut fact = 1.0_f64;
            for i in 2..=(k + 1) {
                fact *= i as f64;
            }
            let bound = (4.0 * (z.abs() / 2.0).powi(k as i32 + 1) / fact).max(4.0 * f64::EPSILON);
            if (s - 1.0).abs() > bound {
                sum_ok = false;
            }
        }
    }
    report(
        "6",
        "Bessel recurrence agrees with the series to 1e-13; truncated sum near 1",
        worst <= 1e-13 && sum_ok,
        &format!("worst recurrence-series gap = {worst:.3e}"),
    );
}

/// Criterion 7: cascade state preparation vs direct construction.
#[test]
fn criterion_7_cascade_fidelity() {
    let mut rng = testgen::rng(7007);
    let mut worst_exact = 0.0_f64;
    let mut worst_quant = 0.0_f64;
    for i in 0..200 {
        let n = [2usize, 4, 8, 16][i % 4];
        let h = testgen::random_hermitian(&mut rng, n);
        let ds = rowtree::build(&h).unwrap();
        for j in 0..n {
            let direct = prepare_row_state_direct(&ds, j).unwrap();
            let exact = prepare_row_state_cascade(&ds, j, PrecisionConfig::Exact).unwrap();
            let quant = prepare_row_state_cascade(&ds, j, PrecisionConfig::Bits(30)).unwrap();
            worst_exact = worst_exact.max(direct.l2_distance(&exact));
            worst_quant = worst_quant.max(direct.l2_distance(&quant));
        }
    }
    report(
        "7",
        "cascade equals direct to 1e-12 exact / 1e-6 at 30-bit angles, 200 matrices",
        worst_exact <= 1e-12 && worst_quant <= 1e-6,
        &format!("worst exact = {worst_exact:.3e}, worst 30-bit = {worst_quant:.3e}"),
    );
}

/// Criterion 8: row-tree integrity across 1000 random updates on N = 16.
#[test]
fn criterion_8_rowtree_updates() {
    let mut rng = testgen::rng(8008);
    let h = testgen::random_hermitian(&mut rng, 16);
    let mut ds = rowtree::build(&h).unwrap();
    let expected_touch = 16f64.log2() as usize + 1;
    let mut touch_ok = true;
    for _ in 0..1000 {
        let j = rand::Rng::gen_range(&mut rng, 0..16);
        let k = rand::Rng::gen_range(&mut rng, 0..16);
        let v = if j == k {
            Complex64::new(2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0, 0.0)
        } else {
            Complex64::new(
                2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0,
                2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0,
            )
        };
        let touched = rowtree::update_entry(&mut ds, j, k, v).unwrap();
        if touched != expected_touch {
            touch_ok = false;
        }
    }
    let residual = rowtree::consistency_residual(&ds);
    report(
        "8",
        "1000 updates on N=16: recomputation matches to 1e-12, log2(N)+1 nodes touched",
        residual <= 1e-12 && touch_ok,
        &format!("relative residual = {residual:.3e}"),
    );
}

/// Criterion 9: the induced-1-norm vs spectral-norm inequality.
#[test]
fn criterion_9_norm_inequality() {
    let mut rng = testgen::rng(9009);
    let n = 16usize;
    let mut violations = 0usize;
    for &d in &[1usize, 2, 4, n] {
        for _ in 0..250 {
            let a = testgen::random_d_sparse(&mut rng, n, d);
            let check = check_sparse_norm_bound(&a, d).unwrap();
            if !check.holds {
                violations += 1;
            }
        }
    }
    report(
        "9",
        "one-norm <= sqrt(d) * spectral norm on 1000 d-sparse draws",
        violations == 0,
        "",
    );
}

/// Criterion 11: time evolution of the Hermitian embedding applies a unitary.
#[test]
fn criterion_11_unitary_embedding() {
    let mut rng = testgen::rng(1111);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let u = testgen::random_unitary(&mut rng, 4);
        let psi = testgen::random_state(&mut rng, 4);
        let got = lcu::apply_unitary_via_embedding(&u, &psi, 1e-5).unwrap();
        let want = u.matvec(&psi);
        let err = norm2(
            &got.iter()
                .zip(&want)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        worst = worst.max(err);
    }
    report(
        "11",
        "embedding reproduces U*psi within 1e-5 for 10 random 4x4 unitaries",
        worst <= 1e-5,
        &format!("worst error = {worst:.3e}"),
    );
}
