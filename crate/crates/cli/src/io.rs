//! On-disk formats. Complex numbers are `[re, im]` pairs; floats are written
//! in shortest round-trip form.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use weil_core::linalg::inner;
use weil_core::oscillator::DotCoefficients;
use weil_core::spectral::{BasisLabel, EigenBasis};
use weil_core::tolerances;

/// A real sample or an `[re, im]` pair. Reals are promoted on read.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sample {
    Pair([f64; 2]),
    Real(f64),
}

impl Sample {
    pub fn value(self) -> Complex64 {
        match self {
            Sample::Pair([re, im]) => Complex64::new(re, im),
            Sample::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalFile {
    pub p: u64,
    pub values: Vec<Sample>,
}

impl SignalFile {
    pub fn new(p: u64, values: &[Complex64]) -> Self {
        SignalFile {
            p,
            values: values.iter().map(|z| Sample::Pair(pair(*z))).collect(),
        }
    }

    pub fn samples(&self) -> Result<Vec<Complex64>> {
        if self.values.len() as u64 != self.p {
            bail!("signal has {} values but p = {}", self.values.len(), self.p);
        }
        let v: Vec<Complex64> = self.values.iter().map(|s| s.value()).collect();
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            bail!("signal contains non-finite values");
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub character: usize,
    pub slot: usize,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub p: u64,
    pub torus: String,
    pub test_vector: String,
    pub coefficients: Vec<CoefficientRecord>,
}

impl CoefficientFile {
    pub fn new(p: u64, torus: &str, coeffs: &DotCoefficients) -> Self {
        CoefficientFile {
            p,
            torus: torus.to_string(),
            test_vector: coeffs.test_vector.to_string(),
            coefficients: coeffs
                .entries
                .iter()
                .map(|(l, z)| CoefficientRecord {
                    character: l.character,
                    slot: l.slot,
                    value: pair(*z),
                })
                .collect(),
        }
    }

    pub fn entries(&self) -> Vec<(BasisLabel, Complex64)> {
        self.coefficients
            .iter()
            .map(|r| {
                (
                    BasisLabel {
                        character: r.character,
                        slot: r.slot,
                    },
                    Complex64::new(r.value[0], r.value[1]),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisRecord {
    pub character: usize,
    pub slot: usize,
    pub eigenvalue: String,
    pub vector: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub p: u64,
    pub torus: String,
    pub records: Vec<BasisRecord>,
}

impl BasisFile {
    pub fn new(p: u64, basis: &EigenBasis) -> Self {
        let eig = basis.eigenvalues.as_ref();
        BasisFile {
            p,
            torus: basis.kind.to_string(),
            records: basis
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| BasisRecord {
                    character: l.character,
                    slot: l.slot,
                    eigenvalue: eig.map_or_else(String::new, |e| e[i].to_string()),
                    vector: basis.vectors[i].iter().map(|z| pair(*z)).collect(),
                })
                .collect(),
        }
    }

    pub fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.records
            .iter()
            .map(|r| r.vector.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .collect()
    }

    /// Record count equals `p` and the vectors are orthonormal.
    pub fn validate(&self) -> Result<()> {
        if self.records.len() as u64 != self.p {
            bail!("basis has {} records but p = {}", self.records.len(), self.p);
        }
        let vs = self.vectors();
        if vs.iter().any(|v| v.len() as u64 != self.p) {
            bail!("basis vector of wrong length");
        }
        for (i, u) in vs.iter().enumerate() {
            for (j, v) in vs.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let dev = (inner(u, v) - target).norm();
                if dev > tolerances::GRAM {
                    bail!("records {i} and {j} are not orthonormal (deviation {dev:.3e})");
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("character,slot,eigenvalue,x,re,im\n");
        for r in &self.records {
            for (x, [re, im]) in r.vector.iter().enumerate() {
                out.push_str(&format!("{},{},{},{x},{re},{im}\n", r.character, r.slot, r.eigenvalue));
            }
        }
        out
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
