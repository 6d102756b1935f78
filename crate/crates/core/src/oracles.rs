//! Slow independent verifiers: Monte-Carlo and lattice covolume estimates
//! and a numeric integrability probe. These never feed exact verdicts; the
//! test suite uses them as one-sided cross-checks.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polyhedron::NewtonPolyhedron;
use crate::rat::{rat_to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub lambda: f64,
    /// One partial integral per requested truncation depth (nondecreasing).
    pub partial_integrals: Vec<f64>,
    pub verdict: Verdict,
}

fn max_intercept(p: &NewtonPolyhedron) -> Result<f64> {
    let mut m = 0f64;
    for i in p.axis_intercepts() {
        match i {
            None => {
                return Err(Error::UnboundedCovolume(
                    "oracle needs a bounded complement".into(),
                ))
            }
            Some(c) => m = m.max(rat_to_f64(&c)),
        }
    }
    Ok(m)
}

/// Monte-Carlo covolume: M^n times the fraction of uniform samples of
/// [0, M]^n falling outside Gamma. Deterministic for a fixed seed.
pub fn covol_mc(p: &NewtonPolyhedron, samples: u64, seed: u64) -> Result<f64> {
    let n = p.n();
    let m = max_intercept(p)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let facets: Vec<(Vec<f64>, f64)> = p
        .hull()?
        .facets
        .iter()
        .map(|f| {
            (
                f.normal.iter().map(rat_to_f64).collect(),
                rat_to_f64(&f.offset),
            )
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside = 0u64;
    let mut x = vec![0f64; n];
    for _ in 0..samples {
        for c in &mut x {
            *c = rng.gen::<f64>() * m;
        }
        let inside = facets
            .iter()
            .all(|(w, h)| w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() >= *h);
        if !inside {
            outside += 1;
        }
    }
    Ok(m.powi(n as i32) * outside as f64 / samples as f64)
}

/// Lattice covolume: counts points of (1/m) Z^n in [0, M)^n outside Gamma;
/// returns count / m^n. Error is O(1/m) against the exact covolume.
pub fn covol_lattice(p: &NewtonPolyhedron, resolution: u64) -> Result<Rat> {
    if resolution == 0 {
        return Err(Error::Validation("resolution must be positive".into()));
    }
    let n = p.n();
    let mut big_m = Rat::zero();
    for i in p.axis_intercepts() {
        match i {
            None => {
                return Err(Error::UnboundedCovolume(
                    "oracle needs a bounded complement".into(),
                ))
            }
            Some(c) => {
                if c > big_m {
                    big_m = c;
                }
            }
        }
    }
    let facets = p.hull()?.facets.clone();
    let res = Rat::from_integer(BigInt::from(resolution));
    // Grid indices 0 <= i < M * resolution per axis.
    let limit = (&big_m * &res)
        .ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Capability("lattice grid too large".into()))?;
    let mut count: u64 = 0;
    let mut idx = vec![0u64; n];
    let total_cells = (limit as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total_cells > 200_000_000 {
        return Err(Error::Capability("lattice grid too large".into()));
    }
    if limit == 0 {
        return Ok(Rat::zero());
    }
    'outer: loop {
        // Indices run to ceil(M m) - 1, so every point satisfies i/m < M.
        let x: Vec<Rat> = idx
            .iter()
            .map(|&i| Rat::from_integer(BigInt::from(i)) / &res)
            .collect();
        let inside = facets.iter().all(|f| {
            f.normal.iter().zip(&x).map(|(a, b)| a * b).sum::<Rat>() >= f.offset
        });
        if !inside {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == n {
                break 'outer;
            }
            idx[j] += 1;
            if idx[j] < limit {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
    let mut denom = Rat::from_integer(BigInt::from(1));
    for _ in 0..n {
        denom *= &res;
    }
    Ok(Rat::from_integer(BigInt::from(count)) / denom)
}

/// Numeric integrability probe for exp(-2 Psi / lambda) near the origin:
/// integrates exp(2 (sum_j t_j - Psi(t) / lambda)) over [-T, 0]^n on a
/// fixed geometric partition refined near 0, for each requested depth T.
///
/// The partition is global (independent of T), so deeper truncations add
/// cells and the partial integrals are nondecreasing by construction.
pub fn integrability_probe(
    p: &NewtonPolyhedron,
    lambda: f64,
    depths: &[f64],
) -> Result<ProbeResult> {
    if lambda <= 0.0 {
        return Err(Error::Domain("probe requires lambda > 0".into()));
    }
    if depths.is_empty() || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation(
            "depths must be strictly increasing and nonempty".into(),
        ));
    }
    let n = p.n();
    let gens: Vec<Vec<f64>> = p
        .generators()
        .iter()
        .map(|g| g.iter().map(rat_to_f64).collect())
        .collect();
    let support = |t: &[f64]| -> f64 {
        gens.iter()
            .map(|g| g.iter().zip(t).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    };

    // Geometric cut points 0 = s_0 < h < h g < ... covering the largest T.
    let h = 1.0 / 32.0;
    let ratio = if n >= 3 { 1.15 } else { 1.08 };
    let t_max = *depths.last().unwrap();
    let mut cuts = vec![0.0, h];
    while *cuts.last().unwrap() < t_max {
        let next = cuts.last().unwrap() * ratio;
        cuts.push(next);
    }
    // Per-axis cells fully inside depth T: (cuts[i], cuts[i+1]) with
    // cuts[i+1] <= T; midpoints and widths are shared across depths.
    let cells: Vec<(f64, f64, f64)> = cuts
        .windows(2)
        .map(|w| (w[0], w[1], 0.5 * (w[0] + w[1])))
        .collect();

    let mut partials = Vec::with_capacity(depths.len());
    let mut total = 0.0f64;
    let mut covered = 0usize; // number of per-axis cells already summed
    for &depth in depths {
        let usable = cells.iter().take_while(|c| c.1 <= depth + 1e-12).count();
        // Sum over all n-tuples of cells where at least one index is new.
        total += sum_region(n, &cells[..usable], covered, &support, lambda);
        covered = usable;
        partials.push(total);
    }

    let verdict = classify(&partials);
    Ok(ProbeResult {
        lambda,
        partial_integrals: partials,
        verdict,
    })
}

/// Adds every cell tuple from the first `limit` per-axis cells that uses at
/// least one cell with index >= `old` (the increment of the truncated box).
fn sum_region(
    n: usize,
    cells: &[(f64, f64, f64)],
    old: usize,
    support: &impl Fn(&[f64]) -> f64,
    lambda: f64,
) -> f64 {
    let mut acc = 0.0;
    let mut idx = vec![0usize; n];
    let mut t = vec![0.0f64; n];
    if cells.is_empty() {
        return 0.0;
    }
    'outer: loop {
        if idx.iter().any(|&i| i >= old) {
            let mut weight = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                let (a, b, mid) = cells[i];
                weight *= b - a;
                t[k] = -mid;
            }
            let exponent = 2.0 * (t.iter().sum::<f64>() - support(&t) / lambda);
            acc += weight * exponent.exp();
        }
        let mut j = 0;
        loop {
            if j == n {
                break 'outer;
            }
            idx[j] += 1;
            if idx[j] < cells.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
    acc
}

fn classify(partials: &[f64]) -> Verdict {
    if partials.len() < 3 {
        return Verdict::Inconclusive;
    }
    let last = partials[partials.len() - 1];
    let prev = partials[partials.len() - 2];
    let before = partials[partials.len() - 3];
    let inc_last = last - prev;
    let inc_prev = prev - before;
    if last > 0.0 && inc_last / last < 1e-4 {
        return Verdict::Converging;
    }
    if inc_prev > 0.0 && inc_last / inc_prev >= 1.5 {
        return Verdict::Diverging;
    }
    Verdict::Inconclusive
}

impl ProbeResult {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda,
            "partial_integrals": self.partial_integrals,
            "verdict": match self.verdict {
                Verdict::Converging => "converging",
                Verdict::Diverging => "diverging",
                Verdict::Inconclusive => "inconclusive",
            },
        })
    }
}
