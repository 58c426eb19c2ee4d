//! Arithmetic in the prime field F_p.
//!
//! [`PrimeContext`] owns every table the rest of the crate reads: the
//! quadratic character, a multiplicative generator with its discrete
//! logarithm, square roots, and the additive character
//! `psi(z) = exp(2 pi i z / p)`. Field elements are plain `u64` values kept
//! in canonical form `[0, p)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A canonical representative in `[0, p)`.
pub type Elem = u64;

const NO_ROOT: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    gen: Elem,
    /// `powers[k] = gen^k` for `k` in `0..p-1`.
    powers: Vec<Elem>,
    /// `dlog[a]` for `a != 0`; `dlog[0]` is unused.
    dlog: Vec<u32>,
    legendre: Vec<i8>,
    sqrt: Vec<u64>,
    eps: Option<Elem>,
    inv2: Elem,
    inv4: Elem,
    psi: Vec<Complex64>,
    smallest_nonresidue: Elem,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl PrimeContext {
    /// Builds all tables for the odd prime `p >= 5`.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenModulus(p));
        }
        if p < 5 {
            return Err(Error::BelowMinimum(p));
        }
        // Bounded so that products of two elements fit comfortably in u64
        // and the lookup tables stay addressable.
        if p > u32::MAX as u64 {
            return Err(Error::Unsupported(format!("prime {p} exceeds 32 bits")));
        }

        let order = p - 1;
        let factors = prime_factors(order);
        let gen = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
            .expect("F_p^x is cyclic");

        let n = p as usize;
        let mut powers = Vec::with_capacity(n - 1);
        let mut dlog = vec![0u32; n];
        let mut x = 1;
        for k in 0..order {
            powers.push(x);
            dlog[x as usize] = k as u32;
            x = x * gen % p;
        }

        let mut legendre = vec![0i8; n];
        for a in 1..n {
            legendre[a] = if dlog[a].is_multiple_of(2) { 1 } else { -1 };
        }

        let mut sqrt = vec![NO_ROOT; n];
        for x in 0..p {
            let sq = (x * x % p) as usize;
            if sqrt[sq] == NO_ROOT {
                sqrt[sq] = x;
            }
        }

        let eps = if p % 4 == 1 {
            let r = sqrt[(p - 1) as usize];
            Some(r.min(p - r))
        } else {
            None
        };

        let inv2 = p.div_ceil(2);
        let inv4 = inv2 * inv2 % p;
        let psi = (0..p)
            .map(|z| Complex64::from_polar(1.0, 2.0 * PI * z as f64 / p as f64))
            .collect();
        let smallest_nonresidue = (2..p)
            .find(|&a| legendre[a as usize] == -1)
            .expect("half of F_p^x are non-residues");

        Ok(PrimeContext {
            p,
            gen,
            powers,
            dlog,
            legendre,
            sqrt,
            eps,
            inv2,
            inv4,
            psi,
            smallest_nonresidue,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.p as usize
    }

    /// Smallest generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        self.gen
    }

    /// Square root of -1, the smaller of the two; present iff `p = 1 mod 4`.
    pub fn eps(&self) -> Option<Elem> {
        self.eps
    }

    pub fn inv2(&self) -> Elem {
        self.inv2
    }

    pub fn inv4(&self) -> Elem {
        self.inv4
    }

    pub fn smallest_nonresidue(&self) -> Elem {
        self.smallest_nonresidue
    }

    /// Exponent `k` with `gen^k = a`, or `None` for `a = 0`.
    pub fn dlog(&self, a: Elem) -> Option<usize> {
        let a = self.reduce(a);
        (a != 0).then(|| self.dlog[a as usize] as usize)
    }

    /// `gen^k`, exponent taken mod `p - 1`.
    pub fn gen_pow(&self, k: usize) -> Elem {
        self.powers[k % (self.size() - 1)]
    }

    pub fn legendre(&self, a: Elem) -> i8 {
        self.legendre[self.reduce(a) as usize]
    }

    /// Some square root of `a`, if one exists.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        let r = self.sqrt[self.reduce(a) as usize];
        (r != NO_ROOT).then_some(r)
    }

    /// The central character `exp(2 pi i z / p)`.
    #[inline]
    pub fn psi(&self, z: Elem) -> Complex64 {
        self.psi[(z % self.p) as usize]
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> Elem {
        a % self.p
    }

    /// Canonical representative of a signed integer.
    pub fn from_i64(&self, a: i64) -> Elem {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        a * b % self.p
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let k = self.dlog(a)?;
        let order = self.size() - 1;
        Some(self.powers[(order - k) % order])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        pow_mod(a, e, self.p)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }
}
