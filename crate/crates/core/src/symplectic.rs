//! `SL_2(F_p)`: elements, the Cayley transform, Bruhat factorization and the
//! maximal tori with their character groups.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::modp::{prime_factors, Elem, PrimeContext};

/// A 2x2 matrix over `F_p`, row-major `[a, b, c, d]`, with no determinant
/// constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2(pub [Elem; 4]);

impl Mat2 {
    pub fn det(&self, ctx: &PrimeContext) -> Elem {
        let [a, b, c, d] = self.0;
        ctx.sub(ctx.mul(a, d), ctx.mul(b, c))
    }

    pub fn mul(&self, ctx: &PrimeContext, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([
            ctx.add(ctx.mul(a, e), ctx.mul(b, g)),
            ctx.add(ctx.mul(a, f), ctx.mul(b, h)),
            ctx.add(ctx.mul(c, e), ctx.mul(d, g)),
            ctx.add(ctx.mul(c, f), ctx.mul(d, h)),
        ])
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Option<Mat2> {
        let di = ctx.inv(self.det(ctx))?;
        let [a, b, c, d] = self.0;
        Some(Mat2([
            ctx.mul(d, di),
            ctx.mul(ctx.neg(b), di),
            ctx.mul(ctx.neg(c), di),
            ctx.mul(a, di),
        ]))
    }

    /// `M (t, w)^T`.
    pub fn act(&self, ctx: &PrimeContext, (t, w): (Elem, Elem)) -> (Elem, Elem) {
        let [a, b, c, d] = self.0;
        (
            ctx.add(ctx.mul(a, t), ctx.mul(b, w)),
            ctx.add(ctx.mul(c, t), ctx.mul(d, w)),
        )
    }

    fn shift_diagonal(&self, ctx: &PrimeContext, s: Elem) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([ctx.add(a, s), b, c, ctx.add(d, s)])
    }
}

/// An element of `SL_2(F_p)`; the determinant is checked on construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SL2Element([Elem; 4]);

impl fmt::Debug for SL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a} {b}; {c} {d})")
    }
}

impl fmt::Display for SL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl SL2Element {
    pub fn new(ctx: &PrimeContext, a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        let m = Mat2([ctx.reduce(a), ctx.reduce(b), ctx.reduce(c), ctx.reduce(d)]);
        if m.det(ctx) != 1 {
            return Err(Error::NotInSl2 { p: ctx.p() });
        }
        Ok(SL2Element(m.0))
    }

    fn from_mat_unchecked(m: Mat2) -> Self {
        SL2Element(m.0)
    }

    pub fn identity() -> Self {
        SL2Element([1, 0, 0, 1])
    }

    pub fn minus_identity(ctx: &PrimeContext) -> Self {
        let m = ctx.neg(1);
        SL2Element([m, 0, 0, m])
    }

    /// The Weyl element `(0 1; -1 0)`.
    pub fn weyl(ctx: &PrimeContext) -> Self {
        SL2Element([0, 1, ctx.neg(1), 0])
    }

    /// `D_a = diag(a, a^{-1})`.
    pub fn diagonal(ctx: &PrimeContext, a: Elem) -> Result<Self> {
        let ai = ctx.inv(a).ok_or(Error::ZeroScaling)?;
        Ok(SL2Element([ctx.reduce(a), 0, 0, ai]))
    }

    /// `U_b = (1 0; b 1)`.
    pub fn lower_unipotent(ctx: &PrimeContext, b: Elem) -> Self {
        SL2Element([1, 0, ctx.reduce(b), 1])
    }

    pub fn entries(&self) -> [Elem; 4] {
        self.0
    }

    pub fn as_mat(&self) -> Mat2 {
        Mat2(self.0)
    }

    pub fn mul(&self, ctx: &PrimeContext, other: &SL2Element) -> SL2Element {
        Self::from_mat_unchecked(self.as_mat().mul(ctx, &other.as_mat()))
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> SL2Element {
        let [a, b, c, d] = self.0;
        SL2Element([d, ctx.neg(b), ctx.neg(c), a])
    }

    pub fn pow(&self, ctx: &PrimeContext, mut e: u64) -> SL2Element {
        let mut acc = SL2Element::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            base = base.mul(ctx, &base);
            e >>= 1;
        }
        acc
    }

    /// Action on the `V`-coordinate.
    pub fn act(&self, ctx: &PrimeContext, v: (Elem, Elem)) -> (Elem, Elem) {
        self.as_mat().act(ctx, v)
    }

    /// `det(g - I) != 0`, i.e. the Cayley transform is defined.
    pub fn is_regular(&self, ctx: &PrimeContext) -> bool {
        self.as_mat().shift_diagonal(ctx, ctx.neg(1)).det(ctx) != 0
    }

    /// Uniform sample from `SL_2(F_p)`.
    pub fn random<R: Rng + ?Sized>(ctx: &PrimeContext, rng: &mut R) -> Self {
        let p = ctx.p();
        loop {
            let a = rng.gen_range(0..p);
            let c = rng.gen_range(0..p);
            if a == 0 && c == 0 {
                continue;
            }
            let (b, d) = if a != 0 {
                let b = rng.gen_range(0..p);
                (b, ctx.div(ctx.add(1, ctx.mul(b, c)), a).unwrap())
            } else {
                (ctx.neg(ctx.inv(c).unwrap()), rng.gen_range(0..p))
            };
            return SL2Element([a, b, c, d]);
        }
    }

    /// Every element of `SL_2(F_p)`, in lexicographic order of `(a, b, c, d)`.
    pub fn all(ctx: &PrimeContext) -> Vec<SL2Element> {
        let p = ctx.p();
        let mut out = Vec::with_capacity((p * (p * p - 1)) as usize);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    if a != 0 {
                        let d = ctx.div(ctx.add(1, ctx.mul(b, c)), a).unwrap();
                        out.push(SL2Element([a, b, c, d]));
                    } else if ctx.mul(b, c) == ctx.neg(1) {
                        for d in 0..p {
                            out.push(SL2Element([a, b, c, d]));
                        }
                    }
                }
            }
        }
        out
    }

    /// Multiplicative order.
    pub fn order(&self, ctx: &PrimeContext) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while x != SL2Element::identity() {
            x = x.mul(ctx, self);
            k += 1;
        }
        k
    }

    fn has_exact_order(&self, ctx: &PrimeContext, n: u64) -> bool {
        self.pow(ctx, n) == SL2Element::identity()
            && prime_factors(n)
                .into_iter()
                .all(|q| self.pow(ctx, n / q) != SL2Element::identity())
    }
}

/// `kappa(g) = (g + I)(g - I)^{-1}`.
pub fn cayley(ctx: &PrimeContext, g: &SL2Element) -> Result<Mat2> {
    let m = g.as_mat();
    let minus = m.shift_diagonal(ctx, ctx.neg(1));
    let inv = minus.inverse(ctx).ok_or(Error::SingularCayley)?;
    Ok(m.shift_diagonal(ctx, 1).mul(ctx, &inv))
}

/// `g = U_b D_a` (lower cell) or `g = U_{b2} w U_{b1} D_a` (big cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruhatFactorization {
    Lower { b: Elem, a: Elem },
    BigCell { b1: Elem, b2: Elem, a: Elem },
}

impl BruhatFactorization {
    pub fn torus_parameter(&self) -> Elem {
        match *self {
            BruhatFactorization::Lower { a, .. } | BruhatFactorization::BigCell { a, .. } => a,
        }
    }

    pub fn reassemble(&self, ctx: &PrimeContext) -> SL2Element {
        match *self {
            BruhatFactorization::Lower { b, a } => {
                SL2Element::lower_unipotent(ctx, b).mul(ctx, &SL2Element::diagonal(ctx, a).expect("a is a unit"))
            }
            BruhatFactorization::BigCell { b1, b2, a } => SL2Element::lower_unipotent(ctx, b2)
                .mul(ctx, &SL2Element::weyl(ctx))
                .mul(ctx, &SL2Element::lower_unipotent(ctx, b1))
                .mul(ctx, &SL2Element::diagonal(ctx, a).expect("a is a unit")),
        }
    }
}

pub fn bruhat(ctx: &PrimeContext, g: &SL2Element) -> BruhatFactorization {
    let [a, b, c, d] = g.entries();
    if b == 0 {
        // (a 0; c a^{-1}) = U_{c/a} D_a, and c/a = c d.
        BruhatFactorization::Lower { b: ctx.mul(c, d), a }
    } else {
        // U_{b2} w U_{b1} D_t = (b1 t, t^{-1}; (b1 b2 - 1) t, b2 t^{-1}).
        BruhatFactorization::BigCell {
            a: ctx.inv(b).expect("nonzero"),
            b1: ctx.mul(a, b),
            b2: ctx.div(d, b).expect("nonzero"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusKind {
    Split,
    NonSplit,
}

impl fmt::Display for TorusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusKind::Split => "split",
            TorusKind::NonSplit => "nonsplit",
        })
    }
}

/// A maximal torus, listed in powers of a fixed generator.
#[derive(Debug, Clone)]
pub struct Torus {
    kind: TorusKind,
    generator: SL2Element,
    elements: Vec<SL2Element>,
    dlog: HashMap<SL2Element, usize>,
}

impl Torus {
    /// Picks the lexicographically first element of exact order `#T` as
    /// generator.
    fn from_members(ctx: &PrimeContext, kind: TorusKind, mut members: Vec<SL2Element>) -> Torus {
        members.sort();
        let n = members.len() as u64;
        let generator = *members
            .iter()
            .find(|g| g.has_exact_order(ctx, n))
            .expect("maximal tori are cyclic");
        let mut elements = Vec::with_capacity(members.len());
        let mut x = SL2Element::identity();
        for _ in 0..n {
            elements.push(x);
            x = x.mul(ctx, &generator);
        }
        let dlog = elements.iter().enumerate().map(|(j, g)| (*g, j)).collect();
        Torus {
            kind,
            generator,
            elements,
            dlog,
        }
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator(&self) -> SL2Element {
        self.generator
    }

    /// `elements()[j] = generator^j`.
    pub fn elements(&self) -> &[SL2Element] {
        &self.elements
    }

    pub fn contains(&self, g: &SL2Element) -> bool {
        self.dlog.contains_key(g)
    }

    /// Exponent `j` with `generator^j = g`.
    pub fn dlog(&self, g: &SL2Element) -> Option<usize> {
        self.dlog.get(g).copied()
    }

    pub fn character(&self, index: usize) -> TorusCharacter {
        TorusCharacter {
            index: index % self.order(),
            order: self.order(),
        }
    }

    pub fn characters(&self) -> Vec<TorusCharacter> {
        (0..self.order()).map(|k| self.character(k)).collect()
    }

    /// The unique character of order two.
    pub fn sigma(&self) -> TorusCharacter {
        self.character(self.order() / 2)
    }

    /// `chi(g)` for a torus element, `None` if `g` is not in the torus.
    pub fn eval(&self, chi: TorusCharacter, g: &SL2Element) -> Option<Complex64> {
        self.dlog(g).map(|j| chi.at_power(j))
    }
}

/// `chi_k(generator^j) = exp(2 pi i k j / #T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusCharacter {
    pub index: usize,
    pub order: usize,
}

impl TorusCharacter {
    pub fn at_power(&self, j: usize) -> Complex64 {
        let r = (self.index * (j % self.order)) % self.order;
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / self.order as f64)
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn is_sigma(&self) -> bool {
        2 * self.index == self.order
    }
}

/// The standard diagonal torus `A = { diag(a, a^{-1}) }`.
pub fn torus_diagonal(ctx: &PrimeContext) -> Torus {
    let members = (1..ctx.p())
        .map(|a| SL2Element::diagonal(ctx, a).expect("nonzero"))
        .collect();
    Torus::from_members(ctx, TorusKind::Split, members)
}

/// The centralizer of the Weyl element, `{ (a b; -b a) : a^2 + b^2 = 1 }`.
pub fn torus_fourier(ctx: &PrimeContext) -> Torus {
    let mut members = Vec::with_capacity(ctx.size() + 1);
    for a in 0..ctx.p() {
        let rest = ctx.sub(1, ctx.mul(a, a));
        if let Some(b) = ctx.sqrt(rest) {
            members.push(SL2Element([a, b, ctx.neg(b), a]));
            if b != 0 {
                let nb = ctx.neg(b);
                members.push(SL2Element([a, nb, b, a]));
            }
        }
    }
    let kind = if ctx.p() % 4 == 1 {
        TorusKind::Split
    } else {
        TorusKind::NonSplit
    };
    Torus::from_members(ctx, kind, members)
}

/// Norm-one elements of `F_p(sqrt(D))` for the smallest non-residue `D`,
/// embedded as `x + y sqrt(D) -> (x yD; y x)`.
pub fn torus_nonsplit(ctx: &PrimeContext) -> Torus {
    let delta = ctx.smallest_nonresidue();
    let mut members = Vec::with_capacity(ctx.size() + 1);
    for y in 0..ctx.p() {
        let rest = ctx.add(1, ctx.mul(delta, ctx.mul(y, y)));
        if let Some(x) = ctx.sqrt(rest) {
            members.push(SL2Element([x, ctx.mul(y, delta), y, x]));
            if x != 0 {
                let nx = ctx.neg(x);
                members.push(SL2Element([nx, ctx.mul(y, delta), y, nx]));
            }
        }
    }
    Torus::from_members(ctx, TorusKind::NonSplit, members)
}

/// `s = (1/2 eps/2; eps 1)`, which conjugates the Fourier torus onto the
/// diagonal torus. Requires `p = 1 mod 4`.
pub fn conjugator_fourier(ctx: &PrimeContext) -> Result<SL2Element> {
    let eps = ctx
        .eps()
        .ok_or_else(|| Error::Unsupported(format!("p = {} is 3 mod 4; the Fourier torus is non-split", ctx.p())))?;
    SL2Element::new(ctx, ctx.inv2(), ctx.mul(eps, ctx.inv2()), eps, 1)
}
