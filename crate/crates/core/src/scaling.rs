//! Timing of soft tracing as the number of codewords grows.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attack::averaging_attack;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::props::has_udc;
use crate::sets::IndexSet;
use crate::trace::soft_trace;
use crate::word::GeneratedWord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingConfig {
    pub n: usize,
    pub t: usize,
    pub sizes: Vec<usize>,
    /// Attacks traced per timed batch.
    pub attacks: usize,
    /// Timed batches per size; the median is reported.
    pub reps: usize,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            n: 64,
            t: 2,
            sizes: vec![64, 128, 256, 512],
            attacks: 64,
            reps: 15,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub m: usize,
    /// Median seconds per traced attack.
    pub median_secs: f64,
    /// Random draws needed to find a code with the uniqueness property.
    pub code_attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub config: ScalingConfig,
    pub points: Vec<ScalingPoint>,
    /// Time ratio between consecutive sizes.
    pub ratios: Vec<f64>,
}

impl ScalingReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

const MAX_ATTEMPTS: usize = 64;

/// A random binary `(n, m)` code with `t`-uniqueness descendant code.
pub fn random_udc_code(n: usize, m: usize, t: usize, rng: &mut impl Rng) -> Result<(Code, usize)> {
    for attempt in 1..=MAX_ATTEMPTS {
        let code = Code::random(n, m, 2, rng)?;
        if has_udc(&code, t)?.holds {
            return Ok((code, attempt));
        }
    }
    Err(Error::InvalidParameter(format!(
        "no ({n}, {m}) binary code with {t}-uniqueness found in {MAX_ATTEMPTS} draws"
    )))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

pub fn run(cfg: &ScalingConfig) -> Result<ScalingReport> {
    if cfg.t == 0 || cfg.attacks == 0 || cfg.reps == 0 || cfg.sizes.is_empty() {
        return Err(Error::InvalidParameter(
            "t, attacks, reps and sizes must be non-empty".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = Vec::with_capacity(cfg.sizes.len());
    for &m in &cfg.sizes {
        let (code, code_attempts) = random_udc_code(cfg.n, m, cfg.t, &mut rng)?;
        let cases: Vec<(IndexSet, GeneratedWord)> = (0..cfg.attacks)
            .map(|_| {
                let k = rng.random_range(1..=cfg.t.min(m));
                let s = IndexSet::new(sample(&mut rng, m, k).into_iter().map(|j| j + 1))?;
                let x = averaging_attack(&code, &s)?;
                Ok((s, x))
            })
            .collect::<Result<_>>()?;
        let mut samples = Vec::with_capacity(cfg.reps);
        for _ in 0..cfg.reps {
            let start = Instant::now();
            for (s, x) in &cases {
                let out = soft_trace(&code, x, cfg.t)?;
                if out.colluders.as_ref() != Some(s) {
                    return Err(Error::InvalidParameter(format!(
                        "soft tracing missed coalition {s} on a verified code"
                    )));
                }
            }
            samples.push(start.elapsed().as_secs_f64() / cfg.attacks as f64);
        }
        points.push(ScalingPoint {
            m,
            median_secs: median(samples),
            code_attempts,
        });
    }
    let ratios = points
        .windows(2)
        .map(|w| w[1].median_secs / w[0].median_secs)
        .collect();
    Ok(ScalingReport {
        config: cfg.clone(),
        points,
        ratios,
    })
}
