//! The acceptance gate: ten numbered end-to-end checks, each reporting a
//! single pass/fail line (visible with `-- --nocapture`). Criteria run
//! sequentially so the per-criterion time budgets are meaningful; the test
//! fails if any criterion fails or overruns its budget.

use std::process::Command;
use std::time::{Duration, Instant};

use isopair::facecoords::{check_positivity, dimension, psi, FreeBlock};
use isopair::honeycomb::{CellKind, TriangleNetwork};
use isopair::laurent::Laurent;
use isopair::matrix::Matrix;
use isopair::polygon::{lattice_census, polygon_for, scott_range};
use isopair::ring::Ring;
use isopair::scalar::Scalar;
use isopair::surfaces::{
    build_surface_gn, build_triangulation, conjugate_surface_invariants,
    eigenvalue_exponent_matrix, verify_independence,
};
use isopair::transfer::{d_matrix_algebraic, left_turn_matrix, right_turn_matrix};
use isopair_cli::sampling::{self, Mode};
use isopair_cli::suites::{
    conjugation_suite, d_oracle_suite, face_roundtrip_suite, psi_suite, glued_spectra_suite,
    SuiteConfig,
};

fn exact_config(seed: u64, n_max: usize, trials: usize) -> SuiteConfig {
    SuiteConfig {
        seed,
        mode: Mode::Exact,
        n_max,
        trials,
        tol: 1e-8,
    }
}

fn laurent_matches(
    got: &Matrix<Laurent>,
    want: &[&[&str]],
    what: &str,
) -> Result<usize, String> {
    if got.n() != want.len() {
        return Err(format!("{}: size {} want {}", what, got.n(), want.len()));
    }
    let mut checked = 0;
    for (i, row) in want.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let expected = Laurent::parse(entry)
                .map_err(|e| format!("{}: entry ({},{}) does not parse: {}", what, i, j, e))?;
            if got[(i, j)].to_string() != expected.to_string() {
                return Err(format!(
                    "{}: entry ({},{}) is {}, want {}",
                    what,
                    i,
                    j,
                    got[(i, j)],
                    expected
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Transfer and signed path matrices over the Laurent ring match the
/// closed forms entry for entry, as normalized strings.
fn c01_symbolic_closed_forms() -> Result<String, String> {
    let lower3 =
        TriangleNetwork::<Laurent>::symbolic(CellKind::Lower, 3).map_err(|e| e.to_string())?;
    let upper4 =
        TriangleNetwork::<Laurent>::symbolic(CellKind::Upper, 4).map_err(|e| e.to_string())?;
    let mut checked = 0;
    checked += laurent_matches(
        &left_turn_matrix(&lower3),
        &[
            &["a11", "0", "0"],
            &["b11*a21", "a22*a21", "0"],
            &["b11*b21*a31", "a22*b21*a31 + b22*a32*a31", "a33*a32*a31"],
        ],
        "left-turn matrix, lower cell, n = 3",
    )?;
    checked += laurent_matches(
        &right_turn_matrix(&upper4),
        &[
            &["a00*a01*a02", "0", "0", "0"],
            &[
                "a00*a01*b02 + a00*b01*a11 + b00*a10*a11",
                "a10*a11",
                "0",
                "0",
            ],
            &[
                "a00*b01*b11 + b00*a10*b11 + b00*b10*a20",
                "b10*a20 + a10*b11",
                "a20",
                "0",
            ],
            &["b00*b10*b20", "b10*b20", "b20", "1"],
        ],
        "right-turn matrix, upper cell, n = 4",
    )?;
    checked += laurent_matches(
        &d_matrix_algebraic(&lower3).map_err(|e| e.to_string())?,
        &[
            &["0", "0", "a31^-1*b31"],
            &["0", "-a21^-1*b21*a32^-1*b32", "a31^-1*a32^-1*b32"],
            &[
                "a11^-1*b11*a22^-1*b22*a33^-1*b33",
                "-a21^-1*a22^-1*b22*a33^-1*b33 - a21^-1*b21*a32^-1*a33^-1*b33",
                "a31^-1*a32^-1*a33^-1*b33",
            ],
        ],
        "signed path matrix, lower cell, n = 3",
    )?;
    Ok(format!(
        "{} symbolic entries string-match the closed forms",
        checked
    ))
}

/// Signed path sums equal the turn-matrix identity exactly for both cell
/// kinds, with the antitriangular zero patterns.
fn c02_path_sum_oracle() -> Result<String, String> {
    let report = d_oracle_suite(&exact_config(2, 5, 50), false);
    if report.ok() {
        Ok(format!(
            "{} aggregated claims, both cell kinds, n ≤ 5, 50 exact trials each",
            report.claims.len()
        ))
    } else {
        Err(report.to_json().to_string())
    }
}

/// Glued pairs carry the three prescribed spectra exactly.
fn c03_glued_spectra() -> Result<String, String> {
    let report = glued_spectra_suite(&exact_config(3, 5, 100));
    if report.ok() {
        Ok("diagonals and D·D' spectrum match the path weights, n ≤ 5, 100 exact trials each".into())
    } else {
        Err(report.to_json().to_string())
    }
}

/// Both conjugation identities hold exactly on the same sampled networks
/// as the glued-spectra suite.
fn c04_conjugation_identities() -> Result<String, String> {
    let report = conjugation_suite(&exact_config(3, 5, 100));
    if report.ok() {
        Ok("A⁻¹B and BA⁻¹ conjugate to the path-matrix products, same trials as criterion 3".into())
    } else {
        Err(report.to_json().to_string())
    }
}

/// The parameterization produces pairs with all three prescribed spectra;
/// at n = 2 the output is conjugation-equivalent to the closed form, and
/// the free count is (n−1)(n−2).
fn c05_parameterization() -> Result<String, String> {
    let report = psi_suite(&exact_config(5, 5, 100));
    if !report.ok() {
        return Err(report.to_json().to_string());
    }

    for trial in 0..25 {
        let mut rng = sampling::trial_rng(5, "closed-form-two", 2, trial);
        let e = sampling::eigen_data(&mut rng, Mode::Exact, 2);
        let y = FreeBlock::unit(2);
        let (a, b) = psi(&e, &y).map_err(|err| err.to_string())?;
        let (al, be, ga) = (&e.alpha, &e.beta, &e.gamma);
        let zero = Scalar::zero_exact();
        let inv = |s: &Scalar, what: &str| {
            s.try_inverse()
                .ok_or_else(|| format!("{} is not invertible", what))
        };
        let a_closed = Matrix::from_rows(vec![
            vec![al[0].clone(), zero.clone()],
            vec![
                al[0].sub(&be[0].mul(&inv(&ga[0], "gamma_1")?)),
                al[1].clone(),
            ],
        ])
        .map_err(|err| err.to_string())?;
        let b_closed = Matrix::from_rows(vec![
            vec![be[0].clone(), be[1].sub(&al[1].mul(&ga[0]))],
            vec![zero.clone(), be[1].clone()],
        ])
        .map_err(|err| err.to_string())?;
        let ratio_closed = Matrix::from_rows(vec![
            vec![ga[0].clone(), zero.clone()],
            vec![
                ga[1].sub(&be[1].mul(&inv(&al[1], "alpha_2")?)),
                ga[1].clone(),
            ],
        ])
        .map_err(|err| err.to_string())?;
        let ba = a
            .inverse()
            .and_then(|ai| b.mat_mul(&ai))
            .map_err(|err| err.to_string())?;
        for (name, got, want) in [
            ("A", a.char_poly(), a_closed.char_poly()),
            ("B", b.char_poly(), b_closed.char_poly()),
            ("BA⁻¹", ba.char_poly(), ratio_closed.char_poly()),
        ] {
            if got != want {
                return Err(format!(
                    "trial {}: {} differs from the n = 2 closed form beyond conjugation",
                    trial, name
                ));
            }
        }
    }
    Ok("spectra exact for n ≤ 5 ×100; n = 2 matches the closed form up to conjugation; free count (n−1)(n−2)".into())
}

/// Face weights and both homology weights survive the round trip through
/// a connection exactly.
fn c06_face_round_trip() -> Result<String, String> {
    let report = face_roundtrip_suite(&exact_config(6, 5, 25));
    if report.ok() {
        Ok("all n² faces and both homology weights reproduced exactly, n ≤ 5".into())
    } else {
        Err(report.to_json().to_string())
    }
}

/// Positive data (negative γ for even sizes) gives positive face charts
/// and real output pairs.
fn c07_positivity() -> Result<String, String> {
    let mut runs = 0;
    for (n, negative_gamma) in [(3usize, false), (5, false), (2, true), (4, true)] {
        for trial in 0..20 {
            let mut rng = sampling::trial_rng(7, "positivity", n, trial);
            let e = sampling::signed_eigen_data(&mut rng, n, negative_gamma);
            let y = sampling::positive_free_block(&mut rng, n);
            let report = check_positivity(&e, &y)
                .map_err(|err| format!("n = {} trial {}: {}", n, trial, err))?;
            if !report.ok() {
                return Err(format!(
                    "n = {} trial {}: {}",
                    n,
                    trial,
                    report.to_json()
                ));
            }
            runs += 1;
        }
    }
    Ok(format!(
        "{} runs: positive face charts and real pairs (γ < 0 for even n)",
        runs
    ))
}

/// Triangulated surfaces across genus and puncture counts: triangle count,
/// conjugate Euler identity, exponent rank, and free parameter count.
fn c08_surfaces() -> Result<String, String> {
    let mut checked = 0;
    for (g, k) in [(0usize, 3usize), (1, 1), (1, 2), (2, 3), (3, 5)] {
        let tri = build_triangulation(g, k).map_err(|e| e.to_string())?;
        if tri.t() != 4 * g + 2 * k - 4 {
            return Err(format!(
                "(g, k) = ({}, {}): {} triangles, want 4g+2k-4 = {}",
                g,
                k,
                tri.t(),
                4 * g + 2 * k - 4
            ));
        }
        let (gc, kc) = conjugate_surface_invariants(&tri).map_err(|e| e.to_string())?;
        let euler = |g: usize, k: usize| 2 - 2 * (g as i64) - (k as i64);
        if euler(g, k) != euler(gc, kc) {
            return Err(format!(
                "(g, k) = ({}, {}): conjugate surface ({}, {}) has a different Euler characteristic",
                g, k, gc, kc
            ));
        }
        for n in 1..=3 {
            let gn = build_surface_gn(&tri, n).map_err(|e| e.to_string())?;
            let em = eigenvalue_exponent_matrix(&gn).map_err(|e| e.to_string())?;
            if em.rows.rank() != k * n - 1 {
                return Err(format!(
                    "(g, k, n) = ({}, {}, {}): exponent rank {}, want kn-1 = {}",
                    g,
                    k,
                    n,
                    em.rows.rank(),
                    k * n - 1
                ));
            }
            let report = verify_independence(&em);
            if !report.ok() {
                return Err(format!(
                    "(g, k, n) = ({}, {}, {}): {}",
                    g,
                    k,
                    n,
                    report.to_json()
                ));
            }
            if g == 0 && k == 3 {
                let free = dimension(g, k, n).map_err(|e| e.to_string())?;
                let want = ((n as i64) - 1) * ((n as i64) - 2);
                if free != want {
                    return Err(format!(
                        "three-punctured sphere at n = {}: free count {}, want (n-1)(n-2) = {}",
                        n, free, want
                    ));
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{} surface/size combinations: triangle count, Euler identity, rank kn-1, free count",
        checked
    ))
}

/// Every admissible interior/boundary census is realized by a constructed
/// polygon, with the interior count invariant under every cut.
fn c09_polygons() -> Result<String, String> {
    let mut built = 0;
    for g in 0..=10usize {
        let (lo, hi) = scott_range(g);
        for k in lo..=hi.unwrap_or(40) {
            let p = polygon_for(g, k).map_err(|e| format!("(g, k) = ({}, {}): {}", g, k, e))?;
            let census = lattice_census(&p);
            if census != (g, k) {
                return Err(format!(
                    "(g, k) = ({}, {}): census came back as {:?}",
                    g, k, census
                ));
            }
            built += 1;
        }
    }
    Ok(format!(
        "{} polygons, census exact, interior count enforced on every cut",
        built
    ))
}

/// Two runs of `verify --seed 42` produce byte-identical reports.
fn c10_determinism() -> Result<String, String> {
    let run = || -> Result<Vec<u8>, String> {
        let output = Command::new(env!("CARGO_BIN_EXE_isopair"))
            .args(["verify", "--seed", "42"])
            .output()
            .map_err(|e| format!("cannot run the binary: {}", e))?;
        if !output.status.success() {
            return Err(format!(
                "verify --seed 42 failed: {}",
                String::from_utf8_lossy(&output.stderr)
            ));
        }
        Ok(output.stdout)
    };
    let first = run()?;
    let second = run()?;
    if first == second {
        Ok(format!("two runs, {} bytes each, byte-identical", first.len()))
    } else {
        Err("the two reports differ".into())
    }
}

#[test]
fn acceptance() {
    let budget = |secs: u64| Some(Duration::from_secs(secs));
    let criteria: [(&str, Option<Duration>, fn() -> Result<String, String>); 10] = [
        ("symbolic closed forms", budget(1), c01_symbolic_closed_forms),
        ("path-sum oracle", budget(30), c02_path_sum_oracle),
        ("glued pair spectra", budget(60), c03_glued_spectra),
        ("conjugation identities", None, c04_conjugation_identities),
        ("parameterization", None, c05_parameterization),
        ("face round trip", None, c06_face_round_trip),
        ("positivity", None, c07_positivity),
        ("surfaces and exponents", budget(120), c08_surfaces),
        ("polygon censuses", budget(10), c09_polygons),
        ("determinism", None, c10_determinism),
    ];

    let mut failures = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_budget = budget.map_or(true, |b| elapsed <= b);
        match outcome {
            Ok(detail) if in_budget => {
                println!(
                    "criterion {:2} [pass] {} — {} ({:.2?})",
                    number, name, detail, elapsed
                );
            }
            Ok(detail) => {
                println!(
                    "criterion {:2} [FAIL] {} — over budget {:?}: {} ({:.2?})",
                    number,
                    name,
                    budget.unwrap(),
                    detail,
                    elapsed
                );
                failures.push(format!("{} ({}) exceeded its time budget", number, name));
            }
            Err(why) => {
                println!(
                    "criterion {:2} [FAIL] {} — {} ({:.2?})",
                    number, name, why, elapsed
                );
                failures.push(format!("{} ({}): {}", number, name, why));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} of 10 criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
