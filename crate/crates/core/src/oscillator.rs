//! The discrete oscillator transform: coefficients of a signal against a
//! family of character vectors of a torus.
//!
//! Three evaluations are provided. [`dot_naive`] takes inner products against
//! an explicit family. [`mellin`] composed with [`matrix_coefficient`] gives
//! the same numbers from one test vector and its torus orbit. For the split
//! Fourier torus, [`FastOscillator`] conjugates to the diagonal torus with
//! `rho(s)`, where the orbit is a plain scaling and the whole transform costs
//! two prime-length FFTs and one Mellin transform.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{naive_transform, plan, Sign};
use crate::linalg::{inner, Operator, ZERO};
use crate::modp::PrimeContext;
use crate::spectral::{BasisLabel, EigenBasis};
use crate::symplectic::{conjugator_fourier, torus_diagonal, torus_fourier, Torus, TorusKind};
use crate::weil::{rho_column, rho_exact, rho_fast, WeilOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `F f(y) = p^{-1/2} sum_x psi(yx) f(x)`.
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> Sign {
        match self {
            Direction::Forward => Sign::Positive,
            Direction::Inverse => Sign::Negative,
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

/// Unitary DFT of length `p` in `O(p log p)`.
pub fn prime_dft(ctx: &PrimeContext, f: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    check_len(ctx.size(), f.len())?;
    let scale = 1.0 / (ctx.size() as f64).sqrt();
    let mut out = plan(ctx.size()).transform(f, direction.sign());
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}

/// The same transform by direct summation.
pub fn prime_dft_naive(ctx: &PrimeContext, f: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    check_len(ctx.size(), f.len())?;
    let scale = 1.0 / (ctx.size() as f64).sqrt();
    Ok(naive_transform(f, direction.sign())
        .into_iter()
        .map(|x| x * scale)
        .collect())
}

/// Finite Mellin transform on a cyclic group of order `n = h.len()`, with `h`
/// listed in generator-power order:
/// `M[h](k) = (1/n) sum_j exp(-2 pi i k j / n) h_j`.
pub fn mellin(h: &[Complex64], fast: bool) -> Vec<Complex64> {
    let n = h.len();
    if n == 0 {
        return Vec::new();
    }
    let raw = if fast {
        plan(n).transform(h, Sign::Negative)
    } else {
        naive_transform(h, Sign::Negative)
    };
    raw.into_iter().map(|x| x / n as f64).collect()
}

/// Which test vector produced a family of character vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestVector {
    /// Unit vectors from the spectral decomposition.
    Canonical,
    /// Character components of `rho(s)^{-1} delta_1`.
    RhoSInverseDelta1,
}

impl fmt::Display for TestVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestVector::Canonical => "canonical",
            TestVector::RhoSInverseDelta1 => "rho-s-inv-delta1",
        })
    }
}

impl FromStr for TestVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(TestVector::Canonical),
            "rho-s-inv-delta1" => Ok(TestVector::RhoSInverseDelta1),
            other => Err(Error::Unsupported(format!("test vector {other:?}"))),
        }
    }
}

/// Transform coefficients keyed by basis label, in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct DotCoefficients {
    pub kind: TorusKind,
    pub order: usize,
    pub test_vector: TestVector,
    pub entries: Vec<(BasisLabel, Complex64)>,
}

impl DotCoefficients {
    pub fn get(&self, label: BasisLabel) -> Option<Complex64> {
        self.entries.iter().find(|(l, _)| *l == label).map(|(_, c)| *c)
    }

    /// One coefficient per character: drops the second vector of a
    /// two-dimensional space.
    pub fn one_per_character(&self) -> DotCoefficients {
        DotCoefficients {
            entries: self.entries.iter().filter(|(l, _)| l.slot == 0).copied().collect(),
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &DotCoefficients) -> Option<f64> {
        if self.entries.len() != other.entries.len() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for ((la, a), (lb, b)) in self.entries.iter().zip(&other.entries) {
            if la != lb {
                return None;
            }
            worst = worst.max((a - b).norm());
        }
        Some(worst)
    }
}

/// `Theta[f](chi) = <f, phi_chi>` for every vector of the family, `O(p^2)`.
pub fn dot_naive(basis: &EigenBasis, f: &[Complex64]) -> Result<DotCoefficients> {
    if let Some(v) = basis.vectors.first() {
        check_len(v.len(), f.len())?;
    }
    let entries = basis
        .labels
        .iter()
        .zip(&basis.vectors)
        .map(|(l, v)| (*l, inner(f, v)))
        .collect();
    Ok(DotCoefficients {
        kind: basis.kind,
        order: basis.torus_order,
        test_vector: basis.family,
        entries,
    })
}

/// `sum_chi a_chi phi_chi`. Exact inverse of [`dot_naive`] for an orthonormal
/// family that spans the space.
pub fn reconstruct(basis: &EigenBasis, coeffs: &DotCoefficients) -> Result<Vec<Complex64>> {
    let p = basis.vectors.first().map_or(0, Vec::len);
    let mut out = vec![ZERO; p];
    for (label, a) in &coeffs.entries {
        let v = basis.vector(*label).ok_or(Error::LabelMismatch {
            character: label.character,
            slot: label.slot,
        })?;
        out.iter_mut().zip(v).for_each(|(o, x)| *o += a * x);
    }
    Ok(out)
}

/// `m[f](g_j) = <f, rho(g_j^{-1}) phi>` over the torus, `ops[j] = rho(g_j)`.
pub fn matrix_coefficient_with(ops: &[Operator], phi: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = ops.len();
    check_len(ops[0].nrows(), phi.len())?;
    check_len(ops[0].nrows(), f.len())?;
    let phi = DVector::from_column_slice(phi);
    Ok((0..n)
        .map(|j| {
            let moved = &ops[(n - j) % n] * &phi;
            inner(f, moved.as_slice())
        })
        .collect())
}

pub fn matrix_coefficient(
    ctx: &PrimeContext,
    torus: &Torus,
    phi: &[Complex64],
    f: &[Complex64],
) -> Result<Vec<Complex64>> {
    let ops = crate::spectral::torus_operators(ctx, torus);
    matrix_coefficient_with(&ops, phi, f)
}

/// Character components `phi_chi = P_chi phi` of `phi = rho(s)^{-1} delta_1`
/// for the Fourier torus, by the exact route: one exact column for `phi`,
/// the orbit under the dense exact `rho` of the torus generator, and a
/// Mellin transform across the orbit. `O(p^3)`.
pub fn test_vector_family(ctx: &PrimeContext) -> Result<EigenBasis> {
    let s = conjugator_fourier(ctx)?;
    let torus = torus_fourier(ctx);
    let n = torus.order();
    let p = ctx.size();
    let phi = rho_column(ctx, &s.inverse(ctx), 1);
    let gen = rho_exact(ctx, &torus.generator()).dense.expect("dense");
    let mut orbit = Vec::with_capacity(n);
    let mut v = DVector::from_vec(phi);
    for _ in 0..n {
        let next = &gen * &v;
        orbit.push(std::mem::replace(&mut v, next));
    }
    let per_coordinate: Vec<Vec<Complex64>> = (0..p)
        .into_par_iter()
        .map(|x| {
            let h: Vec<Complex64> = orbit.iter().map(|o| o[x]).collect();
            mellin(&h, true)
        })
        .collect();
    let vectors = (0..n).map(|k| per_coordinate.iter().map(|m| m[k]).collect()).collect();
    Ok(EigenBasis {
        kind: torus.kind(),
        torus_order: n,
        labels: (0..n).map(|k| BasisLabel { character: k, slot: 0 }).collect(),
        vectors,
        eigenvalues: None,
        family: TestVector::RhoSInverseDelta1,
    })
}

/// Precomputed data for the fast oscillator transform of the split Fourier
/// torus with test vector `rho(s)^{-1} delta_1`.
#[derive(Debug, Clone)]
pub struct FastOscillator {
    p: u64,
    rho_s: WeilOperator,
    rho_s_inv: WeilOperator,
    /// `a_j` with `diag(a_j, a_j^{-1})` the `j`-th power of the diagonal
    /// torus generator.
    diagonal: Vec<u64>,
    /// Diagonal-torus character index to Fourier-torus character index.
    relabel: Vec<usize>,
}

impl FastOscillator {
    pub fn new(ctx: &PrimeContext) -> Result<Self> {
        if ctx.p() % 4 == 3 {
            return Err(Error::Unsupported(format!(
                "open problem: no fast transform is known for the non-split Fourier torus (p = {} = 3 mod 4)",
                ctx.p()
            )));
        }
        let s = conjugator_fourier(ctx)?;
        let si = s.inverse(ctx);
        let a = torus_diagonal(ctx);
        let t = torus_fourier(ctx);
        let n = a.order();
        let image = s.mul(ctx, &t.generator()).mul(ctx, &si);
        let alpha = a
            .dlog(&image)
            .ok_or_else(|| Error::Integrity("s T_w s^{-1} is not diagonal".into()))?;
        // chi^A_k(s t s^{-1}) = chi^A_k(gen^alpha), so chi^A_k o Ad_s is chi^T_{k alpha}.
        let relabel = (0..n).map(|k| k * alpha % n).collect();
        Ok(FastOscillator {
            p: ctx.p(),
            rho_s: rho_fast(ctx, &s),
            rho_s_inv: rho_fast(ctx, &si),
            diagonal: a.elements().iter().map(|g| g.entries()[0]).collect(),
            relabel,
        })
    }

    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    fn check(&self, ctx: &PrimeContext, f: &[Complex64]) -> Result<()> {
        if ctx.p() != self.p {
            return Err(Error::Unsupported(format!("plan built for p = {}", self.p)));
        }
        check_len(ctx.size(), f.len())
    }

    /// Coefficients indexed by diagonal-torus characters:
    /// `(1/(p-1)) sum_a sigma(a) chi_k(a) rho(s)[f](a)`.
    pub fn fot_diagonal(&self, ctx: &PrimeContext, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(ctx, f)?;
        let h = self.rho_s.apply(ctx, f)?;
        let n = self.order();
        let weighted: Vec<Complex64> = self
            .diagonal
            .iter()
            .map(|&a| h[a as usize] * ctx.legendre(a) as f64)
            .collect();
        // chi_k enters unconjugated, so read the Mellin transform at -k.
        let m = mellin(&weighted, true);
        Ok((0..n).map(|k| m[(n - k) % n]).collect())
    }

    /// Coefficients relabeled to Fourier-torus characters.
    pub fn fot(&self, ctx: &PrimeContext, f: &[Complex64]) -> Result<DotCoefficients> {
        let raw = self.fot_diagonal(ctx, f)?;
        let mut entries: Vec<(BasisLabel, Complex64)> = raw
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                (
                    BasisLabel {
                        character: self.relabel[k],
                        slot: 0,
                    },
                    c,
                )
            })
            .collect();
        entries.sort_by_key(|(l, _)| *l);
        Ok(DotCoefficients {
            kind: TorusKind::Split,
            order: self.order(),
            test_vector: TestVector::RhoSInverseDelta1,
            entries,
        })
    }

    /// The family `phi_chi = rho(s)^{-1} P^A delta_1` behind [`Self::fot`],
    /// built with the fast operators in `O(p^2 log p)`.
    pub fn family(&self, ctx: &PrimeContext) -> Result<EigenBasis> {
        let n = self.order();
        let p = ctx.size();
        let mut inverse = vec![0; n];
        for (k, &kt) in self.relabel.iter().enumerate() {
            inverse[kt] = k;
        }
        let vectors: Result<Vec<Vec<Complex64>>> = (0..n)
            .into_par_iter()
            .map(|kt| {
                let k = inverse[kt];
                let mut e = vec![ZERO; p];
                for (j, &a) in self.diagonal.iter().enumerate() {
                    let r = (k * j) % n;
                    let chi = Complex64::from_polar(1.0, -2.0 * PI * r as f64 / n as f64);
                    e[a as usize] = chi * ctx.legendre(a) as f64 / n as f64;
                }
                self.rho_s_inv.apply(ctx, &e)
            })
            .collect();
        Ok(EigenBasis {
            kind: TorusKind::Split,
            torus_order: n,
            labels: (0..n).map(|k| BasisLabel { character: k, slot: 0 }).collect(),
            vectors: vectors?,
            eigenvalues: None,
            family: TestVector::RhoSInverseDelta1,
        })
    }
}

/// One-shot [`FastOscillator::fot`].
pub fn fot(ctx: &PrimeContext, f: &[Complex64]) -> Result<DotCoefficients> {
    FastOscillator::new(ctx)?.fot(ctx, f)
}

/// `rho(s)^{-1} delta_1`, the test vector of the fast transform.
pub fn fast_test_vector(ctx: &PrimeContext) -> Result<Vec<Complex64>> {
    let s = conjugator_fourier(ctx)?;
    Ok(rho_column(ctx, &s.inverse(ctx), 1))
}
