//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; the process exits nonzero if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weil_core::bench::bench_point;
use weil_core::heisenberg::{kernel_convolve, pi_extended, weyl_transform, HeisenbergElement, KernelFunction};
use weil_core::linalg::{apply, dft_matrix, max_entry_diff, Operator};
use weil_core::modp::is_prime;
use weil_core::oscillator::{dot_naive, test_vector_family, FastOscillator};
use weil_core::spectral::{
    closed_form_m, closed_form_n, decompose, dft_eigenbasis, expected_dimension, generic_dft_eigenvalue_counts,
    multiplicities_from_dims, printed_table_m,
};
use weil_core::symplectic::{torus_diagonal, torus_fourier, torus_nonsplit, SL2Element};
use weil_core::weil::{dft_scalar, egorov_residual_with, rho_exact, rho_kernel};
use weil_core::PrimeContext;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).expect("prime")
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

fn random_operator(p: usize, rng: &mut ChaCha8Rng) -> Operator {
    Operator::from_fn(p, p, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_signal(p: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..p)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn dft_identification() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in primes(5, 31) {
        let c = ctx(p);
        let rw = rho_exact(&c, &SL2Element::weyl(&c)).dense.unwrap();
        worst = worst.max(max_entry_diff(&dft_matrix(&c), &(rw * dft_scalar(&c))));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst < 1e-9 && elapsed < Duration::from_secs(10),
        detail: format!("max |F - C rho(w)| = {worst:.2e} over 5 <= p <= 31, {elapsed:.2?}"),
    }
}

fn dimension_theorem() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = Vec::new();
    for p in [5u64, 13, 17, 7, 11, 19] {
        let c = ctx(p);
        cases.push((p, torus_fourier(&c)));
    }
    for p in [5u64, 7] {
        let c = ctx(p);
        cases.push((p, torus_diagonal(&c)));
        cases.push((p, torus_nonsplit(&c)));
    }
    for (p, torus) in &cases {
        let c = ctx(*p);
        match decompose(&c, torus) {
            Ok(dec) => {
                let want: Vec<usize> = torus
                    .characters()
                    .into_iter()
                    .map(|chi| expected_dimension(torus.kind(), chi))
                    .collect();
                if dec.dims() != want {
                    failures.push(format!("p={p} {}: {:?}", torus.kind(), dec.dims()));
                }
            }
            Err(e) => failures.push(format!("p={p} {}: {e}", torus.kind())),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} torus decompositions match exactly", cases.len())
        } else {
            failures.join("; ")
        },
    }
}

fn multiplicity_tables() -> Outcome {
    let start = Instant::now();
    let ps = primes(5, 101);
    let mut printed_mismatch = Vec::new();
    let mut derived_mismatch = Vec::new();
    let mut n_mismatch = Vec::new();
    let mut eig_mismatch = Vec::new();
    for &p in &ps {
        let c = ctx(p);
        let torus = torus_fourier(&c);
        let dims = match decompose(&c, &torus) {
            Ok(dec) => dec.dims(),
            Err(e) => {
                derived_mismatch.push(format!("{p} ({e})"));
                continue;
            }
        };
        let mult = multiplicities_from_dims(&c, &torus, &dims);
        if mult.m != printed_table_m(p) {
            printed_mismatch.push(p);
        }
        if mult.m != closed_form_m(p) {
            derived_mismatch.push(p.to_string());
        }
        if mult.n != closed_form_n(p) {
            n_mismatch.push(p);
        }
        if mult.n != generic_dft_eigenvalue_counts(&c) {
            eig_mismatch.push(p);
        }
    }
    let elapsed = start.elapsed();
    let pass = printed_mismatch.is_empty()
        && n_mismatch.is_empty()
        && eig_mismatch.is_empty()
        && derived_mismatch.is_empty()
        && elapsed < Duration::from_secs(120);
    Outcome {
        pass,
        detail: format!(
            "{} primes; m vs printed m-table mismatches at {:?}; m vs dimension-count form mismatches at {:?}; \
             n vs n-table mismatches at {:?}; n vs eigensolver mismatches at {:?}; {elapsed:.2?}",
            ps.len(),
            printed_mismatch,
            derived_mismatch,
            n_mismatch,
            eig_mismatch
        ),
    }
}

fn representation_and_egorov() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hom: f64 = 0.0;
    let mut ego: f64 = 0.0;
    for p in [5u64, 7, 11, 13] {
        let c = ctx(p);
        for _ in 0..100 {
            let g1 = SL2Element::random(&c, &mut rng);
            let g2 = SL2Element::random(&c, &mut rng);
            let r1 = rho_exact(&c, &g1).dense.unwrap();
            let r2 = rho_exact(&c, &g2).dense.unwrap();
            let r12 = rho_exact(&c, &g1.mul(&c, &g2)).dense.unwrap();
            hom = hom.max(max_entry_diff(&(&r1 * &r2), &r12));

            let h = HeisenbergElement::new(&c, rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
            ego = ego.max(egorov_residual_with(&c, &r1, &g1, h));
        }
    }
    let c = ctx(5);
    let all = SL2Element::all(&c);
    let table: HashMap<SL2Element, Operator> = all.iter().map(|g| (*g, rho_exact(&c, g).dense.unwrap())).collect();
    let mut exhaustive: f64 = 0.0;
    for g1 in &all {
        for g2 in &all {
            exhaustive = exhaustive.max(max_entry_diff(&(&table[g1] * &table[g2]), &table[&g1.mul(&c, g2)]));
        }
    }
    Outcome {
        pass: hom < 1e-8 && ego < 1e-9 && exhaustive < 1e-8 && all.len() == 120,
        detail: format!(
            "random homomorphism {hom:.2e}, Egorov {ego:.2e}, exhaustive SL2(F_5) over {} pairs {exhaustive:.2e}",
            all.len() * all.len()
        ),
    }
}

fn kernel_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut op_rt: f64 = 0.0;
    let mut k_rt: f64 = 0.0;
    for p in [5u64, 7] {
        let c = ctx(p);
        for _ in 0..20 {
            let a = random_operator(p as usize, &mut rng);
            let k = weyl_transform(&c, &a).unwrap();
            op_rt = op_rt.max(max_entry_diff(&pi_extended(&c, &k), &a));

            let kernel = KernelFunction::from_fn(&c, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let back = weyl_transform(&c, &pi_extended(&c, &kernel)).unwrap();
            k_rt = k_rt.max(back.max_abs_diff(&kernel));
        }
    }
    let c = ctx(7);
    let mut conv: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 50 {
        let g1 = SL2Element::random(&c, &mut rng);
        let g2 = SL2Element::random(&c, &mut rng);
        let g12 = g1.mul(&c, &g2);
        if !(g1.is_regular(&c) && g2.is_regular(&c) && g12.is_regular(&c)) {
            continue;
        }
        let lhs = kernel_convolve(&c, &rho_kernel(&c, &g1).unwrap(), &rho_kernel(&c, &g2).unwrap());
        conv = conv.max(lhs.max_abs_diff(&rho_kernel(&c, &g12).unwrap()));
        pairs += 1;
    }
    Outcome {
        pass: op_rt < 1e-10 && k_rt < 1e-10 && conv < 1e-9,
        detail: format!(
            "operator roundtrip {op_rt:.2e}, kernel roundtrip {k_rt:.2e}, convolution over {pairs} pairs {conv:.2e}"
        ),
    }
}

fn fot_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for p in [5u64, 13, 29, 101, 1009] {
        let c = ctx(p);
        let family = test_vector_family(&c).unwrap();
        let plan = FastOscillator::new(&c).unwrap();
        let mut local: f64 = 0.0;
        for _ in 0..3 {
            let f = random_signal(p as usize, &mut rng);
            let naive = dot_naive(&family, &f).unwrap();
            let fast = plan.fot(&c, &f).unwrap();
            local = local.max(fast.max_abs_diff(&naive).unwrap_or(f64::INFINITY));
        }
        detail.push(format!("p={p}: {local:.2e}"));
        worst = worst.max(local);
    }
    Outcome {
        pass: worst < 1e-8,
        detail: detail.join(", "),
    }
}

fn fot_performance() -> Outcome {
    let start = Instant::now();
    let c = ctx(10009);
    let row = match bench_point(&c, 5, 0) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let elapsed = start.elapsed();
    Outcome {
        pass: row.ratio() >= 10.0 && row.max_diff < 1e-8 && elapsed < Duration::from_secs(60),
        detail: format!(
            "p=10009: naive {:.3e} s, fast {:.3e} s, ratio {:.1}, paths agree to {:.1e}, run {elapsed:.2?}",
            row.t_naive,
            row.t_fast,
            row.ratio(),
            row.max_diff
        ),
    }
}

fn eigenbasis_quality() -> Outcome {
    let mut residual: f64 = 0.0;
    let mut gram: f64 = 0.0;
    for p in primes(5, 101) {
        let c = ctx(p);
        let basis = dft_eigenbasis(&c).unwrap();
        let f = dft_matrix(&c);
        for (v, mu) in basis.vectors.iter().zip(basis.eigenvalues.as_ref().unwrap()) {
            let rhs: Vec<Complex64> = v.iter().map(|x| x * mu.value()).collect();
            residual = residual.max(weil_core::linalg::norm(
                &apply(&f, v).iter().zip(&rhs).map(|(a, b)| a - b).collect::<Vec<_>>(),
            ));
        }
        gram = gram.max(basis.gram_defect());
        if basis.len() != p as usize {
            return Outcome {
                pass: false,
                detail: format!("p={p}: {} vectors", basis.len()),
            };
        }
    }
    Outcome {
        pass: residual < 1e-9 && gram < 1e-8,
        detail: format!("max |F phi - mu phi| = {residual:.2e}, max Gram defect {gram:.2e}, p <= 101"),
    }
}

fn symmetry_commutation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in [5u64, 7, 13, 17] {
        let c = ctx(p);
        let f = dft_matrix(&c);
        for g in torus_fourier(&c).elements() {
            let r = rho_exact(&c, g).dense.unwrap();
            worst = worst.max(max_entry_diff(&(&r * &f), &(&f * &r)));
            count += 1;
        }
    }
    Outcome {
        pass: worst < 1e-9,
        detail: format!("max |rho(g)F - F rho(g)| = {worst:.2e} over {count} torus elements"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("DFT identification", dft_identification),
        ("dimension theorem", dimension_theorem),
        ("multiplicity tables", multiplicity_tables),
        ("representation and Egorov", representation_and_egorov),
        ("kernel calculus", kernel_calculus),
        ("FOT correctness", fot_correctness),
        ("FOT performance", fot_performance),
        ("eigenbasis quality", eigenbasis_quality),
        ("symmetry commutation", symmetry_commutation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
