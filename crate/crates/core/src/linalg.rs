//! Dense complex operators on `C(F_p)` and the vector helpers shared by the
//! transforms.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A dense `p x p` operator acting on column vectors.
pub type Operator = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hermitian product, conjugate-linear in the second argument.
pub fn inner(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(f: &[Complex64]) -> f64 {
    f.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn delta(p: usize, at: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; p];
    v[at] = ONE;
    v
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn apply(op: &Operator, f: &[Complex64]) -> Vec<Complex64> {
    let n = op.nrows();
    (0..n)
        .map(|r| (0..op.ncols()).map(|c| op[(r, c)] * f[c]).sum())
        .collect()
}

/// Max-entry deviation of `A^* A` from the identity.
pub fn unitarity_defect(a: &Operator) -> f64 {
    let n = a.nrows();
    max_entry_diff(&(a.adjoint() * a), &Operator::identity(n, n))
}

/// The unitary DFT matrix `F[y, x] = p^{-1/2} psi(xy)` used as a reference.
pub fn dft_matrix(ctx: &crate::PrimeContext) -> Operator {
    let p = ctx.size();
    let scale = 1.0 / (p as f64).sqrt();
    Operator::from_fn(p, p, |y, x| ctx.psi(ctx.mul(x as u64, y as u64)) * scale)
}

/// Rotates `v` so that its first coordinate of (numerically) largest modulus
/// is real and nonnegative.
pub fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.norm() >= max * (1.0 - 1e-9))
        .expect("maximum is attained");
    let phase = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|x| *x *= phase);
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

/// Orthonormal basis of the span of `columns`, extracted by pivoted
/// Gram-Schmidt. Columns whose residual norm falls below `tol` are treated
/// as dependent; callers pass a cutoff on the scale of their inputs.
pub fn orthonormal_span(mut columns: Vec<Vec<Complex64>>, tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    loop {
        let (idx, best) = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c)))
            .fold((usize::MAX, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if idx == usize::MAX || best <= tol {
            return basis;
        }
        let q: Vec<Complex64> = columns[idx].iter().map(|x| x / best).collect();
        for c in columns.iter_mut() {
            let proj = inner(c, &q);
            c.iter_mut().zip(&q).for_each(|(x, e)| *x -= proj * e);
        }
        basis.push(q);
    }
}
