//! The Heisenberg group `H = V x F_p`, its standard realization on `C(F_p)`
//! and the Weyl transform between operators and kernels on `H`.
//!
//! Conventions used throughout the crate:
//!
//! * `(v, z) . (v', z') = (v + v', z + z' + omega(v, v') / 2)` with
//!   `omega((t, w), (t', w')) = t w' - w t'`.
//! * `pi(t, w, z) f(x) = psi(z) psi(w (x + t / 2)) f(x + t)`, i.e. translation
//!   by `t` composed with modulation by `w`, corrected by the central phase
//!   the group law produces.
//! * Kernels are stored on the `z = 0` section. On all of `H` they extend by
//!   `K(v, z) = psi(-z) K(v, 0)`, which is what the trace formula for the
//!   Weyl transform yields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{plan, Sign};
use crate::linalg::{Operator, ZERO};
use crate::modp::{Elem, PrimeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub t: Elem,
    pub w: Elem,
    pub z: Elem,
}

impl HeisenbergElement {
    pub fn new(ctx: &PrimeContext, t: u64, w: u64, z: u64) -> Self {
        HeisenbergElement {
            t: ctx.reduce(t),
            w: ctx.reduce(w),
            z: ctx.reduce(z),
        }
    }

    pub fn identity() -> Self {
        HeisenbergElement { t: 0, w: 0, z: 0 }
    }

    pub fn central(ctx: &PrimeContext, z: u64) -> Self {
        Self::new(ctx, 0, 0, z)
    }

    pub fn inverse(&self, ctx: &PrimeContext) -> Self {
        HeisenbergElement {
            t: ctx.neg(self.t),
            w: ctx.neg(self.w),
            z: ctx.neg(self.z),
        }
    }

    pub fn v(&self) -> (Elem, Elem) {
        (self.t, self.w)
    }
}

/// The symplectic form on `V = F_p^2`.
pub fn omega(ctx: &PrimeContext, (t1, w1): (Elem, Elem), (t2, w2): (Elem, Elem)) -> Elem {
    ctx.sub(ctx.mul(t1, w2), ctx.mul(w1, t2))
}

pub fn h_mul(ctx: &PrimeContext, h1: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement {
    let twist = ctx.mul(ctx.inv2(), omega(ctx, h1.v(), h2.v()));
    HeisenbergElement {
        t: ctx.add(h1.t, h2.t),
        w: ctx.add(h1.w, h2.w),
        z: ctx.add(ctx.add(h1.z, h2.z), twist),
    }
}

fn check_len(ctx: &PrimeContext, got: usize) -> Result<()> {
    if got != ctx.size() {
        return Err(Error::LengthMismatch {
            expected: ctx.size(),
            got,
        });
    }
    Ok(())
}

pub fn pi_apply(ctx: &PrimeContext, h: HeisenbergElement, f: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(ctx, f.len())?;
    let shift = ctx.mul(h.t, ctx.inv2());
    let central = ctx.psi(h.z);
    Ok((0..ctx.p())
        .map(|x| {
            let phase = ctx.psi(ctx.mul(h.w, ctx.add(x, shift)));
            central * phase * f[ctx.add(x, h.t) as usize]
        })
        .collect())
}

/// Dense matrix of `pi(h)`.
pub fn pi_matrix(ctx: &PrimeContext, h: HeisenbergElement) -> Operator {
    let p = ctx.size();
    let shift = ctx.mul(h.t, ctx.inv2());
    let central = ctx.psi(h.z);
    let mut m = Operator::zeros(p, p);
    for x in 0..ctx.p() {
        let col = ctx.add(x, h.t) as usize;
        m[(x as usize, col)] = central * ctx.psi(ctx.mul(h.w, ctx.add(x, shift)));
    }
    m
}

/// A `psi^{-1}`-equivariant function on `H`, stored on the `z = 0` section as
/// a `p x p` table indexed by `v = (t, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    p: usize,
    values: Vec<Complex64>,
}

impl KernelFunction {
    pub fn zeros(ctx: &PrimeContext) -> Self {
        let p = ctx.size();
        KernelFunction {
            p,
            values: vec![ZERO; p * p],
        }
    }

    pub fn from_fn(ctx: &PrimeContext, mut f: impl FnMut(Elem, Elem) -> Complex64) -> Self {
        let p = ctx.size();
        let mut values = Vec::with_capacity(p * p);
        for t in 0..ctx.p() {
            for w in 0..ctx.p() {
                values.push(f(t, w));
            }
        }
        KernelFunction { p, values }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Value on the section, `K(v, 0)`.
    pub fn at(&self, t: Elem, w: Elem) -> Complex64 {
        self.values[t as usize * self.p + w as usize]
    }

    pub fn set(&mut self, t: Elem, w: Elem, value: Complex64) {
        self.values[t as usize * self.p + w as usize] = value;
    }

    /// Value at an arbitrary group element, via `K(v, z) = psi(-z) K(v, 0)`.
    pub fn eval(&self, ctx: &PrimeContext, h: HeisenbergElement) -> Complex64 {
        ctx.psi(ctx.neg(h.z)) * self.at(h.t, h.w)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs_diff(&self, other: &KernelFunction) -> f64 {
        crate::linalg::max_abs_diff(&self.values, &other.values)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &KernelFunction, b: Complex64) -> KernelFunction {
        KernelFunction {
            p: self.p,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }
}

/// `K_A(v) = (1/p) Tr(A pi((v, 0)^{-1}))` for every `v` in `V`.
///
/// Writing `u = x + t/2`, the trace collapses to
/// `(1/p) sum_u A[u - t/2, u + t/2] psi(-w u)`, one length-`p` transform per
/// `t`.
pub fn weyl_transform(ctx: &PrimeContext, a: &Operator) -> Result<KernelFunction> {
    let p = ctx.size();
    if a.nrows() != p || a.ncols() != p {
        return Err(Error::LengthMismatch {
            expected: p,
            got: if a.nrows() != p { a.nrows() } else { a.ncols() },
        });
    }
    let engine = plan(p);
    let scale = 1.0 / p as f64;
    let mut kernel = KernelFunction::zeros(ctx);
    for t in 0..ctx.p() {
        let half = ctx.mul(t, ctx.inv2());
        let diagonal: Vec<Complex64> = (0..ctx.p())
            .map(|u| a[(ctx.sub(u, half) as usize, ctx.add(u, half) as usize)])
            .collect();
        for (w, value) in engine.transform(&diagonal, Sign::Negative).into_iter().enumerate() {
            kernel.set(t, w as Elem, value * scale);
        }
    }
    Ok(kernel)
}

/// `pi(K) = sum_v K(v) pi(v, 0)`.
///
/// No extra `1/p` appears: summing the equivariant extension over the full
/// group would only multiply by `|Z| = p`, and the normalization here is the
/// one that inverts [`weyl_transform`] exactly.
pub fn pi_extended(ctx: &PrimeContext, kernel: &KernelFunction) -> Operator {
    let p = ctx.size();
    let engine = plan(p);
    let mut out = Operator::zeros(p, p);
    for t in 0..ctx.p() {
        let row: Vec<Complex64> = (0..ctx.p()).map(|w| kernel.at(t, w)).collect();
        let spectrum = engine.transform(&row, Sign::Positive);
        let half = ctx.mul(t, ctx.inv2());
        for x in 0..ctx.p() {
            out[(x as usize, ctx.add(x, t) as usize)] = spectrum[ctx.add(x, half) as usize];
        }
    }
    out
}

/// Twisted convolution, normalized so that
/// `pi_extended(K1 * K2) = pi_extended(K1) pi_extended(K2)`:
/// `(K1 * K2)(v) = sum_u K1(u) K2(v - u) psi(omega(u, v) / 2)`.
pub fn kernel_convolve(ctx: &PrimeContext, k1: &KernelFunction, k2: &KernelFunction) -> KernelFunction {
    KernelFunction::from_fn(ctx, |t, w| {
        let mut acc = ZERO;
        for t1 in 0..ctx.p() {
            for w1 in 0..ctx.p() {
                let a = k1.at(t1, w1);
                if a == ZERO {
                    continue;
                }
                let b = k2.at(ctx.sub(t, t1), ctx.sub(w, w1));
                let twist = ctx.mul(ctx.inv2(), omega(ctx, (t1, w1), (t, w)));
                acc += a * b * ctx.psi(twist);
            }
        }
        acc
    })
}
