//! Covolumes Covol(A) = Vol(R^n_+ \ A), mixed covolumes by polarization,
//! the partial functionals Covol_k (k copies of Gamma, n-k copies of the
//! corner simplex Delta), and higher Lelong numbers L_k = n! Covol_k.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::NewtonPolyhedron;
use crate::rat::{binomial, factorial, Rat};
use crate::volume::polytope_volume_with_facets;

/// Result of a Covol_k evaluation with stabilization metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovolumeValue {
    pub value: Rat,
    /// Truncation radius at which two consecutive doublings agreed; None
    /// when the complement was bounded and no truncation was needed.
    pub stabilized_at_r: Option<Rat>,
    /// Number of plain covolumes evaluated (polarization bookkeeping).
    pub terms_evaluated: usize,
}

pub const MAX_DOUBLINGS: u32 = 20;

/// The corner simplex diagram Delta = {a : sum a_j >= 1}, generators e_j.
pub fn unit_simplex(n: usize) -> NewtonPolyhedron {
    let gens = (0..n)
        .map(|j| {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            e
        })
        .collect();
    NewtonPolyhedron::from_generators(n, gens).expect("simplex generators are valid")
}

/// Exact covolume of a bounded-complement polyhedron: with M the largest
/// axis intercept the complement lies in [0, M]^n, so
/// covol = M^n - Vol(Gamma ∩ [0, M]^n).
pub fn covol(p: &NewtonPolyhedron) -> Result<Rat> {
    let n = p.n();
    let intercepts = p.axis_intercepts();
    let mut m = Rat::zero();
    for i in &intercepts {
        match i {
            None => {
                return Err(Error::UnboundedCovolume(
                    "complement of the polyhedron is unbounded".into(),
                ))
            }
            Some(c) => {
                if c > &m {
                    m = c.clone();
                }
            }
        }
    }
    if m.is_zero() {
        return Ok(Rat::zero()); // 0 in Gamma: complement is empty
    }
    let verts = p.truncated_vertices(&m)?;
    // The truncated region's facets are already known (hull facets plus the
    // box walls), so the volume call can skip its own hull computation.
    let mut rows: Vec<(Vec<Rat>, Rat)> = p
        .hull()?
        .facets
        .iter()
        .map(|f| (f.normal.clone(), f.offset.clone()))
        .collect();
    for j in 0..n {
        let mut neg = vec![Rat::zero(); n];
        neg[j] = -Rat::one();
        rows.push((neg, -m.clone()));
    }
    let inside = polytope_volume_with_facets(&verts, &rows, n)?;
    let mut box_vol = Rat::one();
    for _ in 0..n {
        box_vol *= &m;
    }
    Ok(box_vol - inside)
}

/// Mixed covolume of n polyhedra in dimension n via polarization:
/// (1/n!) sum over nonempty S of (-1)^{n-|S|} covol(sum_{i in S} A_i).
pub fn mixed_covol(args: &[&NewtonPolyhedron]) -> Result<Rat> {
    let n = args
        .first()
        .ok_or_else(|| Error::Validation("mixed covolume needs arguments".into()))?
        .n();
    if args.len() != n || args.iter().any(|a| a.n() != n) {
        return Err(Error::Validation(format!(
            "mixed covolume in dimension {n} needs exactly {n} arguments of that dimension"
        )));
    }
    for a in args {
        if !a.is_bounded_complement() {
            return Err(Error::UnboundedCovolume(
                "every mixed covolume argument must have bounded complement".into(),
            ));
        }
    }
    let mut total = Rat::zero();
    for s in 1u32..(1 << n) {
        let members: Vec<&NewtonPolyhedron> = (0..n)
            .filter(|i| s >> i & 1 == 1)
            .map(|i| args[i])
            .collect();
        let mut sum = members[0].clone();
        for m in &members[1..] {
            sum = sum.minkowski_sum(m)?;
        }
        let sign = if (n - s.count_ones() as usize) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        total += sign * covol(&sum)?;
    }
    Ok(total / factorial(n))
}

/// Covol_k on a bounded-complement polyhedron, via the collapsed
/// polarization: with i copies of Gamma and j copies of Delta in a subset,
/// the Minkowski sum is i*Gamma + j*Delta (convexity), so the 2^n - 1
/// subset terms group into (i, j) pairs with binomial multiplicities.
///
/// Dilation shrinks the work further: covol(i Gamma + j Delta) =
/// i^n covol(Gamma + (j/i) Delta) and covol(j Delta) = j^n / n!, so the
/// cache (keyed by the ratio j/i) is shared across the whole L_k ladder.
fn covol_k_bounded(
    p: &NewtonPolyhedron,
    k: usize,
    cache: &mut BTreeMap<Rat, Rat>,
    terms: &mut usize,
) -> Result<Rat> {
    let n = p.n();
    let mut total = Rat::zero();
    for i in 0..=k {
        for j in 0..=(n - k) {
            if i + j == 0 {
                continue;
            }
            let value = if i == 0 {
                // Pure corner term: covol(j Delta) = j^n / n!.
                let mut v = Rat::one();
                for _ in 0..n {
                    v *= Rat::from_integer(j.into());
                }
                v / factorial(n)
            } else {
                let t = Rat::from_integer(j.into()) / Rat::from_integer(i.into());
                let base = match cache.get(&t) {
                    Some(v) => v.clone(),
                    None => {
                        let sum = if j == 0 {
                            p.clone()
                        } else {
                            p.minkowski_sum(&unit_simplex(n).scale(&t)?)?
                        };
                        let v = covol(&sum)?;
                        *terms += 1;
                        cache.insert(t, v.clone());
                        v
                    }
                };
                let mut scale = Rat::one();
                for _ in 0..n {
                    scale *= Rat::from_integer(i.into());
                }
                scale * base
            };
            let mult = Rat::from_integer(binomial(k, i) * binomial(n - k, j));
            let sign = if (n - i - j) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            total += sign * mult * value;
        }
    }
    Ok(total / factorial(n))
}

/// Covol_k(Gamma): mixed covolume of k copies of Gamma and n-k copies of
/// Delta. Unbounded complements are handled by truncating Gamma at
/// r = r_0 2^m until two consecutive evaluations agree exactly.
pub fn covol_k(p: &NewtonPolyhedron, k: usize) -> Result<CovolumeValue> {
    let _ = p.n();
    let l = p.codim_unbounded_locus();
    if k == 0 || k > l {
        return Err(Error::Capability(format!(
            "Covol_k requires 1 <= k <= codim of the unbounded locus ({l}), got {k}"
        )));
    }
    let mut terms = 0usize;
    if p.is_bounded_complement() {
        let value = covol_k_bounded(p, k, &mut BTreeMap::new(), &mut terms)?;
        return Ok(CovolumeValue {
            value,
            stabilized_at_r: None,
            terms_evaluated: terms,
        });
    }
    let mut r0 = Rat::one();
    for i in p.axis_intercepts().into_iter().flatten() {
        if i > r0 {
            r0 = i;
        }
    }
    for g in p.generators() {
        for c in g {
            if c > &r0 {
                r0 = c.clone();
            }
        }
    }
    let mut r = r0;
    let mut prev: Option<(Rat, Rat)> = None; // (radius, value)
    for _ in 0..=MAX_DOUBLINGS {
        let value = covol_k_bounded(&p.truncate(&r)?, k, &mut BTreeMap::new(), &mut terms)?;
        if let Some((pr, pv)) = prev {
            if pv == value {
                return Ok(CovolumeValue {
                    value,
                    stabilized_at_r: Some(pr),
                    terms_evaluated: terms,
                });
            }
        }
        prev = Some((r.clone(), value));
        r *= Rat::from_integer(2.into());
    }
    Err(Error::NonStabilization(MAX_DOUBLINGS))
}

/// Higher Lelong number L_k = n! Covol_k. For k = 1 the closed form
/// min_i |g_i|_1 is cross-checked internally.
pub fn lelong_k(p: &NewtonPolyhedron, k: usize) -> Result<Rat> {
    let value = factorial(p.n()) * covol_k(p, k)?.value;
    if k == 1 {
        check_l1_closed_form(p, &value)?;
    }
    Ok(value)
}

/// The whole ladder L_1, ..., L_l at once. For bounded complements the
/// covolume cache is shared across k, which is several times cheaper than
/// calling lelong_k per level.
pub fn lelong_ladder(p: &NewtonPolyhedron) -> Result<Vec<(usize, Rat)>> {
    let l = p.codim_unbounded_locus();
    if !p.is_bounded_complement() {
        return (1..=l).map(|k| Ok((k, lelong_k(p, k)?))).collect();
    }
    let mut cache = BTreeMap::new();
    let mut terms = 0usize;
    let mut out = Vec::with_capacity(l);
    for k in 1..=l {
        let value = factorial(p.n()) * covol_k_bounded(p, k, &mut cache, &mut terms)?;
        if k == 1 {
            check_l1_closed_form(p, &value)?;
        }
        out.push((k, value));
    }
    Ok(out)
}

fn check_l1_closed_form(p: &NewtonPolyhedron, value: &Rat) -> Result<()> {
    let closed: Rat = p
        .generators()
        .iter()
        .map(|g| g.iter().sum::<Rat>())
        .min()
        .expect("nonempty generators");
    if &closed != value {
        return Err(Error::Internal(format!(
            "L_1 mismatch: covolume engine {value}, closed form {closed}"
        )));
    }
    Ok(())
}
