//! Character spaces of a torus acting through `rho`, the canonical DFT
//! eigenbasis, and eigenvalue multiplicities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{fix_phase, inner, norm, orthonormal_span, Operator, ZERO};
use crate::modp::PrimeContext;
use crate::oscillator::TestVector;
use crate::symplectic::{torus_fourier, SL2Element, Torus, TorusCharacter, TorusKind};
use crate::tolerances;
use crate::weil::rho_exact;

/// A fourth root of unity `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourthRoot {
    One,
    I,
    MinusOne,
    MinusI,
}

impl FourthRoot {
    pub const ALL: [FourthRoot; 4] = [FourthRoot::One, FourthRoot::I, FourthRoot::MinusOne, FourthRoot::MinusI];

    pub fn from_exponent(k: usize) -> Self {
        Self::ALL[k % 4]
    }

    pub fn exponent(self) -> usize {
        match self {
            FourthRoot::One => 0,
            FourthRoot::I => 1,
            FourthRoot::MinusOne => 2,
            FourthRoot::MinusI => 3,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            FourthRoot::One => Complex64::new(1.0, 0.0),
            FourthRoot::I => Complex64::new(0.0, 1.0),
            FourthRoot::MinusOne => Complex64::new(-1.0, 0.0),
            FourthRoot::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// Nearest fourth root to `z`.
    pub fn nearest(z: Complex64) -> FourthRoot {
        *Self::ALL
            .iter()
            .min_by(|a, b| (z - a.value()).norm().total_cmp(&(z - b.value()).norm()))
            .expect("nonempty")
    }

    pub fn label(self) -> &'static str {
        match self {
            FourthRoot::One => "+1",
            FourthRoot::I => "+i",
            FourthRoot::MinusOne => "-1",
            FourthRoot::MinusI => "-i",
        }
    }
}

impl std::ops::Mul for FourthRoot {
    type Output = FourthRoot;

    // Exponents add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: FourthRoot) -> FourthRoot {
        Self::from_exponent(self.exponent() + o.exponent())
    }
}

impl std::ops::Div for FourthRoot {
    type Output = FourthRoot;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: FourthRoot) -> FourthRoot {
        Self::from_exponent(self.exponent() + 4 - o.exponent())
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FourthRoot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "+1" | "1" => FourthRoot::One,
            "+i" | "i" => FourthRoot::I,
            "-1" => FourthRoot::MinusOne,
            "-i" => FourthRoot::MinusI,
            other => return Err(Error::Unsupported(format!("eigenvalue label {other:?}"))),
        })
    }
}

/// `C = i^{(p-1)/2}`, the scalar in `F = C rho(w)`.
pub fn dft_constant(ctx: &PrimeContext) -> FourthRoot {
    FourthRoot::from_exponent(((ctx.p() - 1) / 2) as usize)
}

/// Position of a basis vector: its character and, for the two-dimensional
/// `sigma_T` space, which of the two vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub character: usize,
    pub slot: usize,
}

/// Dimension of the character space of `chi` under a torus of the given kind.
pub fn expected_dimension(kind: TorusKind, chi: TorusCharacter) -> usize {
    match (kind, chi.is_sigma()) {
        (_, false) => 1,
        (TorusKind::Split, true) => 2,
        (TorusKind::NonSplit, true) => 0,
    }
}

/// Orthonormal bases of the character spaces, indexed by character.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    torus: Torus,
    spaces: Vec<Vec<Vec<Complex64>>>,
    /// `P_chi delta_0, P_chi delta_1, ...` for seeding canonical vectors.
    projectors: Vec<Operator>,
}

impl SpectralDecomposition {
    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn space(&self, chi: TorusCharacter) -> &[Vec<Complex64>] {
        &self.spaces[chi.index]
    }

    pub fn projector(&self, chi: TorusCharacter) -> &Operator {
        &self.projectors[chi.index]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    /// Characters with a nonzero space.
    pub fn support(&self) -> Vec<TorusCharacter> {
        self.torus
            .characters()
            .into_iter()
            .filter(|chi| !self.spaces[chi.index].is_empty())
            .collect()
    }
}

/// Dense `rho(g)` for every torus element, in power order.
pub fn torus_operators(ctx: &PrimeContext, torus: &Torus) -> Vec<Operator> {
    torus
        .elements()
        .par_iter()
        .map(|g| rho_exact(ctx, g).dense.expect("dense"))
        .collect()
}

/// `P_chi = (1/#T) sum_g conj(chi(g)) rho(g)`.
pub fn projector(torus: &Torus, ops: &[Operator], chi: TorusCharacter) -> Operator {
    let p = ops[0].nrows();
    let mut acc = Operator::from_element(p, p, ZERO);
    for (j, op) in ops.iter().enumerate() {
        acc += op * chi.at_power(j).conj();
    }
    acc / Complex64::new(torus.order() as f64, 0.0)
}

pub fn decompose(ctx: &PrimeContext, torus: &Torus) -> Result<SpectralDecomposition> {
    let ops = torus_operators(ctx, torus);
    decompose_with(torus, &ops)
}

/// Decomposition from precomputed torus operators.
pub fn decompose_with(torus: &Torus, ops: &[Operator]) -> Result<SpectralDecomposition> {
    let p = ops[0].nrows();
    let parts: Vec<(Operator, Vec<Vec<Complex64>>)> = torus
        .characters()
        .into_par_iter()
        .map(|chi| {
            let proj = projector(torus, ops, chi);
            let cols = (0..p).map(|c| proj.column(c).iter().copied().collect()).collect();
            let basis = orthonormal_span(cols, tolerances::RANK);
            (proj, basis)
        })
        .collect();
    let (projectors, spaces): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    for chi in torus.characters() {
        let got = spaces[chi.index].len();
        let want = expected_dimension(torus.kind(), chi);
        if got != want {
            return Err(Error::Integrity(format!(
                "{} torus, character {}: space has dimension {got}, expected {want}",
                torus.kind(),
                chi.index
            )));
        }
    }
    Ok(SpectralDecomposition {
        torus: torus.clone(),
        spaces,
        projectors,
    })
}

/// Character vectors, ordered by character index and slot.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub kind: TorusKind,
    pub torus_order: usize,
    pub labels: Vec<BasisLabel>,
    pub vectors: Vec<Vec<Complex64>>,
    /// DFT eigenvalue of each vector; present for the Fourier torus only.
    pub eigenvalues: Option<Vec<FourthRoot>>,
    /// Unit vectors, or components of a single test vector (not normalized).
    pub family: TestVector,
}

impl EigenBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, label: BasisLabel) -> Option<&[Complex64]> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|i| self.vectors[i].as_slice())
    }

    /// Largest entry of `|G - I|` for the Gram matrix `G`.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(u, v) - target).norm());
            }
        }
        worst
    }

    /// How many vectors carry each DFT eigenvalue, indexed by exponent.
    pub fn eigenvalue_counts(&self) -> Option<[usize; 4]> {
        self.eigenvalues.as_ref().map(|ev| {
            let mut counts = [0; 4];
            ev.iter().for_each(|mu| counts[mu.exponent()] += 1);
            counts
        })
    }
}

/// Picks one unit vector per character space.
///
/// Each vector is the normalized projection of the first standard basis
/// vector with a nonzero image; for a two-dimensional space, the projections
/// of `delta_0, delta_1, ...` are orthonormalized in order until two vectors
/// are found. Phases follow [`fix_phase`].
pub fn canonical_basis(ctx: &PrimeContext, dec: &SpectralDecomposition) -> EigenBasis {
    let p = ctx.size();
    let torus = dec.torus();
    let weyl_power = torus.dlog(&SL2Element::weyl(ctx));
    let c = dft_constant(ctx);
    let mut labels = Vec::with_capacity(p);
    let mut vectors = Vec::with_capacity(p);
    let mut eigenvalues = Vec::with_capacity(p);
    for chi in torus.characters() {
        let dim = dec.space(chi).len();
        if dim == 0 {
            continue;
        }
        let proj = dec.projector(chi);
        let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for seed in 0..p {
            if chosen.len() == dim {
                break;
            }
            let mut v: Vec<Complex64> = proj.column(seed).iter().copied().collect();
            for q in &chosen {
                let c = inner(&v, q);
                v.iter_mut().zip(q).for_each(|(x, e)| *x -= c * e);
            }
            let n = norm(&v);
            if n <= tolerances::RANK {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= n);
            chosen.push(v);
        }
        for (slot, mut v) in chosen.into_iter().enumerate() {
            fix_phase(&mut v);
            labels.push(BasisLabel {
                character: chi.index,
                slot,
            });
            vectors.push(v);
            if let Some(j) = weyl_power {
                // w has order 4, so chi(w) = i^{4 k j / #T} exactly.
                let e = 4 * chi.index * j / torus.order();
                eigenvalues.push(c * FourthRoot::from_exponent(e));
            }
        }
    }
    EigenBasis {
        kind: torus.kind(),
        torus_order: torus.order(),
        labels,
        vectors,
        eigenvalues: weyl_power.map(|_| eigenvalues),
        family: TestVector::Canonical,
    }
}

/// The canonical eigenbasis of the unitary DFT, from the Fourier torus.
pub fn dft_eigenbasis(ctx: &PrimeContext) -> Result<EigenBasis> {
    let dec = decompose(ctx, &torus_fourier(ctx))?;
    Ok(canonical_basis(ctx, &dec))
}

/// Eigenvalue multiplicities of `rho(w)` (`m`) and of the DFT (`n`), indexed
/// by the exponent of the fourth root: `[+1, +i, -1, -i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Multiplicities {
    pub m: [usize; 4],
    pub n: [usize; 4],
}

impl Multiplicities {
    pub fn m_of(&self, lambda: FourthRoot) -> usize {
        self.m[lambda.exponent()]
    }

    pub fn n_of(&self, mu: FourthRoot) -> usize {
        self.n[mu.exponent()]
    }
}

/// `m` for `rho(w)` as implied by the dimension theorem: `m_{+-i}` from the
/// characters with `chi(w) = +-i`, and `m_{+-1}` from where `sigma_T(w)`
/// lands.
pub fn closed_form_m(p: u64) -> [usize; 4] {
    let l = ((p - 1) / 4) as usize;
    match p % 8 {
        1 => [l + 1, l, l, l],
        5 => [l, l, l + 1, l],
        3 => [l + 1, l + 1, l, l + 1],
        7 => [l, l + 1, l + 1, l + 1],
        _ => unreachable!("odd prime"),
    }
}

/// The multiplicity table for `rho(w)` in its commonly printed form, with
/// rows keyed by `p mod 8`. For `p = 3 mod 4` its `m_1` and `m_{-1}` columns
/// are the multiplicities of `-rho(w)`, not of `rho(w)`.
pub fn printed_table_m(p: u64) -> [usize; 4] {
    let k = (p / 8) as usize;
    // columns m_1, m_{-1}, m_i, m_{-i}
    let [m1, mm1, mi, mmi] = match p % 8 {
        1 => [2 * k + 1, 2 * k, 2 * k, 2 * k],
        3 => [2 * k, 2 * k + 1, 2 * k + 1, 2 * k + 1],
        5 => [2 * k + 1, 2 * k + 2, 2 * k + 1, 2 * k + 1],
        7 => [2 * k + 2, 2 * k + 1, 2 * k + 2, 2 * k + 2],
        _ => unreachable!("odd prime"),
    };
    [m1, mi, mm1, mmi]
}

/// DFT eigenvalue multiplicities by `p mod 4`.
pub fn closed_form_n(p: u64) -> [usize; 4] {
    let l = (p / 4) as usize;
    match p % 4 {
        1 => [l + 1, l, l, l],
        3 => [l + 1, l + 1, l + 1, l],
        _ => unreachable!("odd prime"),
    }
}

/// `m` from character-space dimensions of the Fourier torus, and
/// `n_mu = m_{mu / C}` from `F = C rho(w)`.
pub fn multiplicities_from_dims(ctx: &PrimeContext, torus: &Torus, dims: &[usize]) -> Multiplicities {
    let j = torus
        .dlog(&SL2Element::weyl(ctx))
        .expect("the Weyl element lies in its own centralizer");
    let mut m = [0; 4];
    for chi in torus.characters() {
        m[(4 * chi.index * j / torus.order()) % 4] += dims[chi.index];
    }
    let c = dft_constant(ctx);
    let mut n = [0; 4];
    for mu in FourthRoot::ALL {
        n[mu.exponent()] = m[(mu / c).exponent()];
    }
    Multiplicities { m, n }
}

/// Multiplicities computed from the decomposition and checked against the
/// closed forms.
pub fn multiplicities(ctx: &PrimeContext) -> Result<Multiplicities> {
    let torus = torus_fourier(ctx);
    let dec = decompose(ctx, &torus)?;
    let mult = multiplicities_from_dims(ctx, &torus, &dec.dims());
    if mult.m != closed_form_m(ctx.p()) || mult.n != closed_form_n(ctx.p()) {
        return Err(Error::Integrity(format!(
            "p = {}: computed m = {:?}, n = {:?}",
            ctx.p(),
            mult.m,
            mult.n
        )));
    }
    Ok(mult)
}

/// Eigenvalue counts of the dense DFT matrix from a general-purpose
/// eigensolver, each eigenvalue rounded to the nearest fourth root. Used as
/// an independent oracle.
pub fn generic_dft_eigenvalue_counts(ctx: &PrimeContext) -> [usize; 4] {
    let f = crate::linalg::dft_matrix(ctx);
    let eig = f
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut counts = [0; 4];
    for z in eig.iter() {
        counts[FourthRoot::nearest(*z).exponent()] += 1;
    }
    counts
}
