//! The Weil representation `rho` of `SL_2(F_p)` on `C(F_p)`.
//!
//! Two constructions are provided. [`rho_exact`] evaluates the invariant
//! kernel formula and pushes it through the Heisenberg representation, which
//! gives the unique linear lift as a dense matrix. [`rho_fast`] factors `g`
//! through the Bruhat decomposition into scalings, chirps and one Fourier
//! transform, and pins the leftover scalar against the exact operator.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::heisenberg::{omega, pi_extended, pi_matrix, HeisenbergElement, KernelFunction};
use crate::linalg::{delta, max_entry_diff, Operator};
use crate::modp::{Elem, PrimeContext};
use crate::oscillator::{prime_dft, Direction};
use crate::symplectic::{bruhat, cayley, torus_fourier, BruhatFactorization, Mat2, SL2Element};

/// Building blocks of the factored form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    /// `S_a f(x) = sigma(a) f(a^{-1} x)`.
    Scaling(Elem),
    /// `M_b f(x) = psi(-(b/2) x^2) f(x)`.
    Chirp(Elem),
    /// `F f(y) = p^{-1/2} sum_x psi(yx) f(x)`.
    Fourier,
    Scalar(Complex64),
}

pub fn primitive_apply(ctx: &PrimeContext, prim: &Primitive, f: &[Complex64]) -> Result<Vec<Complex64>> {
    if f.len() != ctx.size() {
        return Err(Error::LengthMismatch {
            expected: ctx.size(),
            got: f.len(),
        });
    }
    Ok(match *prim {
        Primitive::Scaling(a) => {
            let ai = ctx.inv(a).ok_or(Error::ZeroScaling)?;
            let sign = ctx.legendre(a) as f64;
            (0..ctx.p()).map(|x| f[ctx.mul(ai, x) as usize] * sign).collect()
        }
        Primitive::Chirp(b) => {
            let coef = ctx.neg(ctx.mul(b, ctx.inv2()));
            (0..ctx.p())
                .map(|x| f[x as usize] * ctx.psi(ctx.mul(coef, ctx.mul(x, x))))
                .collect()
        }
        Primitive::Fourier => prime_dft(ctx, f, Direction::Forward)?,
        Primitive::Scalar(c) => f.iter().map(|x| x * c).collect(),
    })
}

/// `rho(g)`, held as a dense matrix, as primitives in application order, or
/// both.
#[derive(Debug, Clone)]
pub struct WeilOperator {
    pub element: SL2Element,
    pub dense: Option<Operator>,
    pub factored: Option<Vec<Primitive>>,
}

impl WeilOperator {
    /// Applies the operator, using the factored form when present.
    pub fn apply(&self, ctx: &PrimeContext, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != ctx.size() {
            return Err(Error::LengthMismatch {
                expected: ctx.size(),
                got: f.len(),
            });
        }
        if let Some(prims) = &self.factored {
            let mut v = f.to_vec();
            for prim in prims {
                v = primitive_apply(ctx, prim, &v)?;
            }
            return Ok(v);
        }
        let m = self.dense.as_ref().expect("operator has a representation");
        Ok(crate::linalg::apply(m, f))
    }

    pub fn to_dense(&self, ctx: &PrimeContext) -> Operator {
        if let Some(m) = &self.dense {
            return m.clone();
        }
        let p = ctx.size();
        let mut m = Operator::zeros(p, p);
        for y in 0..p {
            let col = self.apply(ctx, &delta(p, y)).expect("length matches");
            for (x, v) in col.into_iter().enumerate() {
                m[(x, y)] = v;
            }
        }
        m
    }
}

struct KernelData {
    prefix: Complex64,
    kappa: Mat2,
}

fn kernel_data(ctx: &PrimeContext, g: &SL2Element) -> Result<KernelData> {
    let kappa = cayley(ctx, g)?;
    let [a, b, c, d] = kappa.0;
    let shifted = Mat2([ctx.add(a, 1), b, c, ctx.add(d, 1)]);
    let sign = ctx.legendre(ctx.neg(shifted.det(ctx))) as f64;
    Ok(KernelData {
        prefix: Complex64::new(sign / ctx.size() as f64, 0.0),
        kappa,
    })
}

impl KernelData {
    fn value(&self, ctx: &PrimeContext, v: (Elem, Elem)) -> Complex64 {
        let phase = ctx.mul(ctx.inv4(), omega(ctx, self.kappa.act(ctx, v), v));
        self.prefix * ctx.psi(phase)
    }
}

/// `K_g(v) = (1/p) sigma(-det(kappa + I)) psi(omega(kappa v, v) / 4)` with
/// `kappa` the Cayley transform of `g`.
pub fn rho_kernel(ctx: &PrimeContext, g: &SL2Element) -> Result<KernelFunction> {
    let data = kernel_data(ctx, g)?;
    Ok(KernelFunction::from_fn(ctx, |t, w| data.value(ctx, (t, w))))
}

/// Deterministic split `g = (g r^{-1}) r` with both factors off the singular
/// locus, `r` running over the Fourier torus in power order.
pub fn singular_split(ctx: &PrimeContext, g: &SL2Element) -> (SL2Element, SL2Element) {
    let torus = torus_fourier(ctx);
    for r in torus.elements() {
        let left = g.mul(ctx, &r.inverse(ctx));
        if r.is_regular(ctx) && left.is_regular(ctx) {
            return (left, *r);
        }
    }
    unreachable!("the Fourier torus always contains a usable splitting element for p >= 5")
}

/// Dense `rho(g)` from the kernel formula, falling back to a product of two
/// regular factors when `g - I` is singular.
pub fn rho_exact(ctx: &PrimeContext, g: &SL2Element) -> WeilOperator {
    let dense = if g.is_regular(ctx) {
        pi_extended(ctx, &rho_kernel(ctx, g).expect("regular element"))
    } else {
        let (left, right) = singular_split(ctx, g);
        let l = pi_extended(ctx, &rho_kernel(ctx, &left).expect("regular element"));
        let r = pi_extended(ctx, &rho_kernel(ctx, &right).expect("regular element"));
        l * r
    };
    WeilOperator {
        element: *g,
        dense: Some(dense),
        factored: None,
    }
}

/// One entry `rho(g)[x, y]` in `O(p)` without building the kernel table.
///
/// Singular elements go through the same split as [`rho_exact`] and cost
/// `O(p^2)`.
pub fn rho_entry(ctx: &PrimeContext, g: &SL2Element, x: Elem, y: Elem) -> Complex64 {
    if !g.is_regular(ctx) {
        let (left, right) = singular_split(ctx, g);
        return (0..ctx.p())
            .map(|z| rho_entry(ctx, &left, x, z) * rho_entry(ctx, &right, z, y))
            .sum();
    }
    let data = kernel_data(ctx, g).expect("regular element");
    // pi(K)[x, x + t] = sum_w K(t, w) psi(w (x + t/2))
    let t = ctx.sub(y, x);
    let mid = ctx.add(x, ctx.mul(t, ctx.inv2()));
    (0..ctx.p())
        .map(|w| data.value(ctx, (t, w)) * ctx.psi(ctx.mul(w, mid)))
        .sum()
}

/// Column `rho(g) delta_y` in `O(p^2)`.
pub fn rho_column(ctx: &PrimeContext, g: &SL2Element, y: Elem) -> Vec<Complex64> {
    (0..ctx.p()).map(|x| rho_entry(ctx, g, x, y)).collect()
}

fn bruhat_primitives(f: &BruhatFactorization) -> Vec<Primitive> {
    match *f {
        BruhatFactorization::Lower { b, a } => {
            let mut v = vec![Primitive::Scaling(a)];
            if b != 0 {
                v.push(Primitive::Chirp(b));
            }
            v
        }
        BruhatFactorization::BigCell { b1, b2, a } => {
            let mut v = vec![Primitive::Scaling(a)];
            if b1 != 0 {
                v.push(Primitive::Chirp(b1));
            }
            v.push(Primitive::Fourier);
            if b2 != 0 {
                v.push(Primitive::Chirp(b2));
            }
            v
        }
    }
}

type ScalarMemo = RwLock<HashMap<(u64, SL2Element), Complex64>>;

fn scalar_memo() -> &'static ScalarMemo {
    static MEMO: OnceLock<ScalarMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Factored `rho(g)`: Bruhat primitives followed by the scalar that makes the
/// product equal the exact lift.
///
/// The scalar is found by comparing both operators on `delta_0` at the
/// coordinate where the factored image is largest, and is memoized per
/// `(p, g)`.
pub fn rho_fast(ctx: &PrimeContext, g: &SL2Element) -> WeilOperator {
    let mut prims = bruhat_primitives(&bruhat(ctx, g));
    let key = (ctx.p(), *g);
    let cached = scalar_memo().read().expect("memo poisoned").get(&key).copied();
    let c = cached.unwrap_or_else(|| {
        let mut image = delta(ctx.size(), 0);
        for prim in &prims {
            image = primitive_apply(ctx, prim, &image).expect("length matches");
        }
        let (x, _) = image.iter().enumerate().fold(
            (0, -1.0),
            |acc, (i, v)| if v.norm() > acc.1 { (i, v.norm()) } else { acc },
        );
        let exact = rho_entry(ctx, g, x as Elem, 0);
        let c = exact / image[x];
        // Identical values race harmlessly here.
        scalar_memo().write().expect("memo poisoned").insert(key, c);
        c
    });
    prims.push(Primitive::Scalar(c));
    WeilOperator {
        element: *g,
        dense: None,
        factored: Some(prims),
    }
}

/// `rho(g) pi(h) rho(g)^{-1} - pi(g v, z)`, max-entry norm, with `rho(g)`
/// supplied by the caller.
pub fn egorov_residual_with(ctx: &PrimeContext, rho_g: &Operator, g: &SL2Element, h: HeisenbergElement) -> f64 {
    let (t, w) = g.act(ctx, h.v());
    let lhs = rho_g * pi_matrix(ctx, h) * rho_g.adjoint();
    max_entry_diff(&lhs, &pi_matrix(ctx, HeisenbergElement { t, w, z: h.z }))
}

pub fn egorov_residual(ctx: &PrimeContext, g: &SL2Element, h: HeisenbergElement) -> f64 {
    let rho_g = rho_exact(ctx, g).dense.expect("dense");
    egorov_residual_with(ctx, &rho_g, g, h)
}

/// `i^{(p-1)/2}`, the scalar with `F = C rho(w)`.
pub fn dft_scalar(ctx: &PrimeContext) -> Complex64 {
    match (ctx.p() - 1) / 2 % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
