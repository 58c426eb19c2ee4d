//! Arbitrary-length DFT through a chirp reduction.
//!
//! A length-`n` transform is rewritten as a linear convolution against a
//! quadratic-phase sequence, which is evaluated with power-of-two FFTs. The
//! same engine serves the prime-length Fourier transform (`n = p`) and the
//! Mellin transform over `F_p^x` (`n = p - 1`).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Sign of the exponent in `sum_j x_j exp(sign * 2 pi i jk / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

pub struct ChirpPlan {
    len: usize,
    conv_len: usize,
    /// `exp(-i pi m^2 / n)` for `m` in `0..n`.
    chirp: Vec<Complex64>,
    /// Forward FFT of the wrapped conjugate chirp, pre-scaled by `1 / conv_len`.
    kernel: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ChirpPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChirpPlan")
            .field("len", &self.len)
            .field("conv_len", &self.conv_len)
            .finish()
    }
}

impl ChirpPlan {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let conv_len = (2 * len - 1).next_power_of_two();
        let two_n = 2 * len as u128;
        let chirp: Vec<Complex64> = (0..len)
            .map(|m| {
                // m^2 mod 2n keeps the phase argument small and exact.
                let r = (m as u128 * m as u128 % two_n) as f64;
                Complex64::from_polar(1.0, -PI * r / len as f64)
            })
            .collect();

        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(conv_len);
        let inverse = planner.plan_fft_inverse(conv_len);

        let mut kernel = vec![Complex64::new(0.0, 0.0); conv_len];
        kernel[0] = chirp[0].conj();
        for m in 1..len {
            kernel[m] = chirp[m].conj();
            kernel[conv_len - m] = chirp[m].conj();
        }
        forward.process(&mut kernel);
        let scale = 1.0 / conv_len as f64;
        kernel.iter_mut().for_each(|k| *k *= scale);

        ChirpPlan {
            len,
            conv_len,
            chirp,
            kernel,
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized transform `X_k = sum_j x_j exp(sign 2 pi i jk / n)`.
    pub fn transform(&self, input: &[Complex64], sign: Sign) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len, "input length does not match plan");
        match sign {
            Sign::Negative => self.negative(input.iter().copied()),
            Sign::Positive => {
                let mut out = self.negative(input.iter().map(|x| x.conj()));
                out.iter_mut().for_each(|x| *x = x.conj());
                out
            }
        }
    }

    fn negative(&self, input: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.conv_len];
        for ((slot, x), c) in buf.iter_mut().zip(input).zip(&self.chirp) {
            *slot = x * c;
        }
        self.forward.process(&mut buf);
        buf.iter_mut().zip(&self.kernel).for_each(|(b, k)| *b *= k);
        self.inverse.process(&mut buf);
        buf.truncate(self.len);
        buf.iter_mut().zip(&self.chirp).for_each(|(b, c)| *b *= c);
        buf
    }
}

fn cache() -> &'static RwLock<HashMap<usize, Arc<ChirpPlan>>> {
    static PLANS: OnceLock<RwLock<HashMap<usize, Arc<ChirpPlan>>>> = OnceLock::new();
    PLANS.get_or_init(Default::default)
}

/// Shared plan for length `len`; built on first use and read-only afterwards.
pub fn plan(len: usize) -> Arc<ChirpPlan> {
    if let Some(p) = cache().read().expect("plan cache poisoned").get(&len) {
        return Arc::clone(p);
    }
    let built = Arc::new(ChirpPlan::new(len));
    let mut w = cache().write().expect("plan cache poisoned");
    Arc::clone(w.entry(len).or_insert(built))
}

/// Direct `O(n^2)` evaluation of the same sum, used as a reference.
pub fn naive_transform(input: &[Complex64], sign: Sign) -> Vec<Complex64> {
    let n = input.len();
    let s = match sign {
        Sign::Positive => 1.0,
        Sign::Negative => -1.0,
    };
    let roots: Vec<Complex64> = (0..n)
        .map(|r| Complex64::from_polar(1.0, s * 2.0 * PI * r as f64 / n as f64))
        .collect();
    (0..n)
        .map(|k| input.iter().enumerate().map(|(j, x)| x * roots[j * k % n]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3 + 0.2).cos()))
            .collect()
    }

    #[test]
    fn matches_naive_for_many_lengths() {
        for n in [1, 2, 3, 4, 5, 7, 12, 13, 16, 29, 100, 101, 257] {
            let x = signal(n);
            for sign in [Sign::Positive, Sign::Negative] {
                let fast = plan(n).transform(&x, sign);
                let slow = naive_transform(&x, sign);
                let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(err < 1e-9 * n as f64, "n={n} err={err}");
            }
        }
    }

    #[test]
    fn plans_are_shared() {
        let a = plan(31);
        let b = plan(31);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.len(), 31);
    }
}
