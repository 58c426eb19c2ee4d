//! Invariant suites behind `weil verify`.

use std::path::Path;

use anyhow::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use weil_core::heisenberg::HeisenbergElement;
use weil_core::linalg::{dft_matrix, max_entry_diff};
use weil_core::oscillator::{dot_naive, test_vector_family, FastOscillator};
use weil_core::spectral::{decompose, expected_dimension, generic_dft_eigenvalue_counts};
use weil_core::symplectic::{torus_diagonal, torus_fourier, torus_nonsplit, SL2Element};
use weil_core::tolerances;
use weil_core::weil::{dft_scalar, egorov_residual_with, rho_exact};
use weil_core::PrimeContext;

use crate::io::{emit, to_json};
use crate::{mult_rows, Suite, EXIT_OK, EXIT_VERIFY};

const RANDOM_CASES: usize = 100;

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    suite: &'static str,
    primes: Vec<u64>,
    tolerance: Option<f64>,
    max_residual: Option<f64>,
    pass: bool,
    counterexample: Option<String>,
    notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str, tolerance: Option<f64>) -> Self {
        SuiteReport {
            suite,
            primes: Vec::new(),
            tolerance,
            max_residual: None,
            pass: true,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    /// Records a residual; the first one above tolerance becomes the
    /// counterexample.
    fn residual(&mut self, value: f64, what: impl FnOnce() -> String) {
        self.max_residual = Some(self.max_residual.map_or(value, |m| m.max(value)));
        let tol = self.tolerance.unwrap_or(0.0);
        if value.is_nan() || value >= tol {
            self.fail(format!("{} (residual {value:.3e} >= {tol:.1e})", what()));
        }
    }

    fn fail(&mut self, why: String) {
        self.pass = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(why);
        }
    }
}

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).expect("range contains primes >= 5 only")
}

fn dft_id(ps: &[u64], tol: f64) -> SuiteReport {
    let mut r = SuiteReport::new("dft-id", Some(tol));
    for &p in ps {
        let c = ctx(p);
        let rw = rho_exact(&c, &SL2Element::weyl(&c)).dense.expect("dense");
        let d = max_entry_diff(&dft_matrix(&c), &(rw * dft_scalar(&c)));
        r.residual(d, || format!("p={p}: F != C rho(w)"));
        r.primes.push(p);
    }
    r
}

fn homomorphism(ps: &[u64], tol: f64, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("homomorphism", Some(tol));
    for &p in ps {
        let c = ctx(p);
        for _ in 0..RANDOM_CASES {
            let g1 = SL2Element::random(&c, rng);
            let g2 = SL2Element::random(&c, rng);
            let lhs = rho_exact(&c, &g1).dense.expect("dense") * rho_exact(&c, &g2).dense.expect("dense");
            let rhs = rho_exact(&c, &g1.mul(&c, &g2)).dense.expect("dense");
            r.residual(max_entry_diff(&lhs, &rhs), || format!("p={p}: g1={g1}, g2={g2}"));
        }
        r.primes.push(p);
    }
    r
}

fn egorov(ps: &[u64], tol: f64, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("egorov", Some(tol));
    for &p in ps {
        let c = ctx(p);
        for _ in 0..RANDOM_CASES {
            let g = SL2Element::random(&c, rng);
            let h = HeisenbergElement::new(&c, rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
            let rho_g = rho_exact(&c, &g).dense.expect("dense");
            r.residual(egorov_residual_with(&c, &rho_g, &g, h), || {
                format!("p={p}: g={g}, h=({}, {}, {})", h.t, h.w, h.z)
            });
        }
        r.primes.push(p);
    }
    r
}

fn dims(ps: &[u64]) -> SuiteReport {
    let mut r = SuiteReport::new("dims", None);
    for &p in ps {
        let c = ctx(p);
        for (name, torus) in [
            ("tw", torus_fourier(&c)),
            ("diag", torus_diagonal(&c)),
            ("nonsplit", torus_nonsplit(&c)),
        ] {
            match decompose(&c, &torus) {
                Ok(dec) => {
                    let got = dec.dims();
                    let sigma = torus.sigma();
                    if got[sigma.index] != expected_dimension(torus.kind(), sigma) {
                        r.fail(format!("p={p} {name}: dims {got:?}"));
                    }
                    if name == "tw" {
                        r.notes.push(format!(
                            "p={p}: tw is {}, sigma_T space has dimension {}",
                            torus.kind(),
                            got[sigma.index]
                        ));
                    }
                }
                Err(e) => r.fail(format!("p={p} {name}: {e}")),
            }
        }
        r.primes.push(p);
    }
    r
}

fn mult(ps: &[u64]) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("mult", None);
    let mut printed_mismatch = Vec::new();
    for row in mult_rows(ps)? {
        let p = row.p;
        if !row.closed_form_m || !row.closed_form_n {
            r.fail(format!(
                "p={p}: m={:?}, n={:?} differ from the closed forms",
                row.m, row.n
            ));
        }
        let eig = generic_dft_eigenvalue_counts(&ctx(p));
        if eig != row.n {
            r.fail(format!("p={p}: n={:?} but eigensolver gives {eig:?}", row.n));
        }
        if !row.printed_table_m {
            printed_mismatch.push(p);
        }
        r.primes.push(p);
    }
    if !printed_mismatch.is_empty() {
        r.notes.push(format!(
            "m_1 and m_-1 are swapped relative to the commonly printed m-table at p = {printed_mismatch:?}; \
             those rows are the multiplicities of -rho(w)"
        ));
    }
    Ok(r)
}

fn fot(ps: &[u64], tol: f64, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("fot", Some(tol));
    for &p in ps.iter().filter(|&&p| p % 4 == 1) {
        let c = ctx(p);
        let family = test_vector_family(&c)?;
        let plan = FastOscillator::new(&c)?;
        for _ in 0..3 {
            let f: Vec<Complex64> = (0..p)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let naive = dot_naive(&family, &f)?;
            let fast = plan.fot(&c, &f)?;
            let d = fast.max_abs_diff(&naive).unwrap_or(f64::INFINITY);
            r.residual(d, || format!("p={p}: fast and naive coefficients differ"));
        }
        r.primes.push(p);
    }
    if r.primes.is_empty() {
        r.notes.push("no prime = 1 mod 4 in range".into());
    }
    Ok(r)
}

pub fn run(suite: Suite, ps: &[u64], tol: Option<f64>, seed: u64, output: Option<&Path>) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut reports = Vec::new();
    if want(Suite::DftId) {
        reports.push(dft_id(ps, tol.unwrap_or(tolerances::IDENTITY)));
    }
    if want(Suite::Homomorphism) {
        reports.push(homomorphism(ps, tol.unwrap_or(tolerances::HOMOMORPHISM), &mut rng));
    }
    if want(Suite::Egorov) {
        reports.push(egorov(ps, tol.unwrap_or(tolerances::IDENTITY), &mut rng));
    }
    if want(Suite::Dims) {
        reports.push(dims(ps));
    }
    if want(Suite::Mult) {
        reports.push(mult(ps)?);
    }
    if want(Suite::Fot) {
        reports.push(fot(ps, tol.unwrap_or(tolerances::FOT), &mut rng)?);
    }

    for r in &reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let residual = r
            .max_residual
            .map_or(String::new(), |m| format!(", max residual {m:.3e}"));
        eprintln!("{status} {} over {} primes{residual}", r.suite, r.primes.len());
        for n in &r.notes {
            eprintln!("  note: {n}");
        }
        if let Some(c) = &r.counterexample {
            eprintln!("  counterexample: {c}");
        }
    }
    emit(output, &to_json(&reports)?)?;
    Ok(if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
