//! Spread-spectrum embedding simulator.
//!
//! A codeword `c` is embedded into a host `h` as `y = h + alpha * sum_i c(i) u_i`
//! over an orthonormal basis `u_1..u_n`. Averaging `t` marked copies and
//! projecting `(y - h) / alpha` onto the basis yields the generated word as
//! floats; [`rationalize`] snaps it back to exact fractions.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::attack::averaging_attack;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sets::IndexSet;
use crate::word::GeneratedWord;

/// Stream selector for the host signal, kept apart from the basis stream.
const HOST_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub dim: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Standard deviation of additive Gaussian noise on the colluded signal.
    #[serde(default)]
    pub noise: f64,
}

impl EmbeddingParams {
    pub fn new(dim: usize, alpha: f64, seed: u64) -> Result<Self> {
        let p = EmbeddingParams {
            dim,
            alpha,
            seed,
            noise: 0.0,
        };
        p.validate(1)?;
        Ok(p)
    }

    pub fn with_noise(mut self, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma {sigma} must be >= 0"
            )));
        }
        self.noise = sigma;
        Ok(self)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} must be positive",
                self.alpha
            )));
        }
        if self.dim < n || self.dim == 0 {
            return Err(Error::InvalidParameter(format!(
                "dim {} must be at least n = {n}",
                self.dim
            )));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `n` orthonormal vectors of length `dim`, from seeded Gaussian draws
/// orthogonalised by modified Gram-Schmidt (two passes).
pub fn make_basis(n: usize, dim: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n > dim {
        return Err(Error::InvalidParameter(format!(
            "cannot fit {n} orthonormal vectors in dimension {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for u in &basis {
                let p = dot(&v, u);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= p * b);
            }
        }
        let norm = dot(&v, &v).sqrt();
        // A near-dependent draw is discarded; practically never happens.
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= norm);
        basis.push(v);
    }
    Ok(basis)
}

/// Seeded host signal with entries uniform in `[-1, 1)`.
pub fn host_signal(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(HOST_STREAM);
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `y = h + alpha * sum_i c(i) u_i`.
pub fn embed(host: &[f64], basis: &[Vec<f64>], codeword: &[u8], alpha: f64) -> Result<Vec<f64>> {
    check_dim(basis.len(), codeword.len())?;
    let mut y = host.to_vec();
    for (u, &c) in basis.iter().zip(codeword) {
        check_dim(host.len(), u.len())?;
        match c {
            0 => {}
            1 => y.iter_mut().zip(u).for_each(|(a, b)| *a += alpha * b),
            s => return Err(Error::NonBinary(s as usize + 1)),
        }
    }
    Ok(y)
}

/// Entrywise mean of the colluders' marked signals.
pub fn collude_average(signals: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = signals.first().ok_or(Error::Empty("signal list"))?;
    let mut sum = vec![0.0; first.len()];
    for s in signals {
        check_dim(first.len(), s.len())?;
        sum.iter_mut().zip(s).for_each(|(a, b)| *a += b);
    }
    let t = signals.len() as f64;
    sum.iter_mut().for_each(|a| *a /= t);
    Ok(sum)
}

/// `x(i) = <(y - h) / alpha, u_i>`.
pub fn extract(y: &[f64], host: &[f64], basis: &[Vec<f64>], alpha: f64) -> Result<Vec<f64>> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} must be positive"
        )));
    }
    check_dim(host.len(), y.len())?;
    let diff: Vec<f64> = y.iter().zip(host).map(|(a, b)| (a - b) / alpha).collect();
    basis
        .iter()
        .map(|u| {
            check_dim(diff.len(), u.len())?;
            Ok(dot(&diff, u))
        })
        .collect()
}

/// Snaps each value to the unique fraction `a/t` in `[0, 1]` with
/// `t <= t_max` lying within `tol`.
pub fn rationalize(xs: &[f64], t_max: u64, tol: f64) -> Result<GeneratedWord> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol {tol} must be positive"
        )));
    }
    let entries = xs
        .iter()
        .map(|&x| snap(x, t_max, tol))
        .collect::<Result<Vec<_>>>()?;
    GeneratedWord::new(entries)
}

fn snap(x: f64, t_max: u64, tol: f64) -> Result<Rational> {
    let mut found: Option<Rational> = None;
    for t in 1..=t_max {
        let a = (x * t as f64).round().clamp(0.0, t as f64) as u64;
        if (x - a as f64 / t as f64).abs() > tol {
            continue;
        }
        let r = Rational::new(a, t)?;
        match &found {
            None => found = Some(r),
            Some(prev) if *prev == r => {}
            Some(prev) => {
                return Err(Error::AmbiguousRational {
                    value: x,
                    tol,
                    first: prev.to_string(),
                    second: r.to_string(),
                })
            }
        }
    }
    found.ok_or(Error::NoRationalCandidate {
        value: x,
        t_max,
        tol,
    })
}

/// One end-to-end run of embed, average, extract and snap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    pub params: EmbeddingParams,
    pub colluders: IndexSet,
    pub extracted: Vec<f64>,
    pub recovered: GeneratedWord,
    pub expected: GeneratedWord,
    /// Largest `|extracted(i) - expected(i)|`.
    pub max_error: f64,
    /// The colluded signal `y`.
    #[serde(skip)]
    pub signal: Vec<f64>,
}

impl Simulation {
    pub fn exact(&self) -> bool {
        self.recovered == self.expected
    }
}

/// Runs the pipeline for `colluders`, snapping with denominators up to
/// `t_max` (the detector's coalition bound) and tolerance `tol`.
pub fn simulate(
    code: &Code,
    colluders: &IndexSet,
    params: &EmbeddingParams,
    t_max: u64,
    tol: f64,
) -> Result<Simulation> {
    params.validate(code.n())?;
    let expected = averaging_attack(code, colluders)?;
    let basis = make_basis(code.n(), params.dim, params.seed)?;
    let host = host_signal(params.dim, params.seed);
    let signals = colluders
        .iter()
        .map(|j| embed(&host, &basis, code.codeword(j), params.alpha))
        .collect::<Result<Vec<_>>>()?;
    let mut y = collude_average(&signals)?;
    if params.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(HOST_STREAM + 1);
        for v in &mut y {
            let z: f64 = rng.sample(StandardNormal);
            *v += params.noise * z;
        }
    }
    let extracted = extract(&y, &host, &basis, params.alpha)?;
    let max_error = extracted
        .iter()
        .zip(expected.to_f64())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let recovered = rationalize(&extracted, t_max, tol)?;
    Ok(Simulation {
        params: *params,
        colluders: colluders.clone(),
        extracted,
        recovered,
        expected,
        max_error,
        signal: y,
    })
}

/// Writes a `u64` little-endian length followed by `f64` little-endian samples.
pub fn write_signal<W: Write>(mut w: W, signal: &[f64]) -> Result<()> {
    w.write_all(&(signal.len() as u64).to_le_bytes())?;
    for v in signal {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_signal<R: Read>(mut r: R) -> Result<Vec<f64>> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    let len = u64::from_le_bytes(buf);
    let mut out = Vec::with_capacity(len.min(1 << 20) as usize);
    for _ in 0..len {
        r.read_exact(&mut buf)?;
        out.push(f64::from_le_bytes(buf));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Io("trailing bytes after signal".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::example_code;

    fn gram_error(basis: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - want).abs());
            }
        }
        worst
    }

    #[test]
    fn basis_is_orthonormal_and_deterministic() {
        let b = make_basis(4, 64, 1).unwrap();
        assert_eq!(b.len(), 4);
        assert!(gram_error(&b) < 1e-10);
        assert_eq!(b, make_basis(4, 64, 1).unwrap());
        assert_ne!(b, make_basis(4, 64, 2).unwrap());
        let square = make_basis(16, 16, 7).unwrap();
        assert!(gram_error(&square) < 1e-10);
        assert!(make_basis(5, 4, 0).is_err());
    }

    #[test]
    fn embed_linearity() {
        let b = make_basis(4, 32, 3).unwrap();
        let h = host_signal(32, 3);
        assert_eq!(embed(&h, &b, &[0, 0, 0, 0], 0.1).unwrap(), h);
        let y = embed(&h, &b, &[0, 0, 1, 0], 0.5).unwrap();
        for k in 0..32 {
            assert!((y[k] - h[k] - 0.5 * b[2][k]).abs() < 1e-15);
        }
        assert!(embed(&h, &b, &[0, 1], 0.1).is_err());
        assert!(embed(&h, &b, &[0, 2, 0, 0], 0.1).is_err());
    }

    #[test]
    fn single_user_round_trip() {
        let c = example_code();
        let b = make_basis(4, 64, 11).unwrap();
        let h = host_signal(64, 11);
        let y = embed(&h, &b, c.codeword(1), 0.1).unwrap();
        let x = extract(&y, &h, &b, 0.1).unwrap();
        for (got, &want) in x.iter().zip(c.codeword(1)) {
            assert!((got - want as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn averaging() {
        let s = vec![1.0, -2.0, 3.5];
        assert_eq!(collude_average(std::slice::from_ref(&s)).unwrap(), s);
        assert_eq!(collude_average(&[s.clone(), s.clone()]).unwrap(), s);
        assert!(collude_average(&[]).is_err());
        assert!(collude_average(&[s, vec![1.0]]).is_err());
    }

    #[test]
    fn example_pipeline() {
        let c = example_code();
        let params = EmbeddingParams::new(64, 0.1, 5).unwrap();
        let sim = simulate(&c, &IndexSet::from([1, 2, 3]), &params, 3, 1e-6).unwrap();
        assert!(sim.max_error < 1e-9, "{}", sim.max_error);
        assert_eq!(
            sim.recovered,
            GeneratedWord::from_fractions(&[(0, 1), (2, 3), (2, 3), (1, 3)]).unwrap()
        );
        assert!(sim.exact());
    }

    #[test]
    fn snapping() {
        let w = rationalize(&[0.333333333, 0.0, 1.0, 0.6], 5, 1e-6).unwrap();
        assert_eq!(
            w,
            GeneratedWord::from_fractions(&[(1, 3), (0, 1), (1, 1), (3, 5)]).unwrap()
        );
        assert_eq!(w.get(1).denom_u64(), 1);
        assert!(matches!(
            rationalize(&[0.45], 3, 1e-6),
            Err(Error::NoRationalCandidate { .. })
        ));
        assert!(matches!(
            rationalize(&[0.34], 4, 0.1),
            Err(Error::AmbiguousRational { .. })
        ));
        assert!(rationalize(&[1.5], 3, 1e-6).is_err());
        assert!(rationalize(&[0.5], 0, 1e-6).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(EmbeddingParams::new(64, 0.0, 1).is_err());
        assert!(EmbeddingParams::new(0, 0.1, 1).is_err());
        let p = EmbeddingParams::new(3, 0.1, 1).unwrap();
        assert!(simulate(&example_code(), &IndexSet::from([1]), &p, 3, 1e-6).is_err());
        assert!(p.with_noise(-1.0).is_err());
    }

    #[test]
    fn noise_option_perturbs() {
        let c = example_code();
        let p = EmbeddingParams::new(64, 0.1, 5)
            .unwrap()
            .with_noise(1e-4)
            .unwrap();
        let sim = simulate(&c, &IndexSet::from([1, 2]), &p, 2, 1e-1).unwrap();
        assert!(sim.max_error > 1e-9);
        assert!(sim.exact());
    }

    #[test]
    fn signal_io_round_trip() {
        let s = vec![0.0, -1.25, f64::MAX, 1e-300];
        let mut buf = Vec::new();
        write_signal(&mut buf, &s).unwrap();
        assert_eq!(buf.len(), 8 + 8 * 4);
        assert_eq!(&buf[..8], &4u64.to_le_bytes());
        assert_eq!(read_signal(buf.as_slice()).unwrap(), s);
        assert!(read_signal(&buf[..20]).is_err());
        buf.push(0);
        assert!(read_signal(buf.as_slice()).is_err());
    }
}
