//! Multiplier ideals of multi-circled singularities: membership by the
//! interior criterion (z^alpha is in J(c u) iff alpha + 1 lies in the
//! interior of c Gamma_u) and minimal monomial generator enumeration.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::expr::MonomialIdealPresentation;
use crate::polyhedron::NewtonPolyhedron;
use crate::rat::{rat_ceil, rat_int, Rat};

/// z^alpha in J(c u)?
pub fn member(p: &NewtonPolyhedron, alpha: &[u64], c: &Rat) -> Result<bool> {
    if !c.is_positive() {
        return Err(Error::Validation("multiplier scale must be positive".into()));
    }
    if alpha.len() != p.n() {
        return Err(Error::Domain("exponent vector dimension mismatch".into()));
    }
    let scaled = p.scale(c)?;
    let shifted: Vec<Rat> = alpha.iter().map(|&a| rat_int(a as i64 + 1)).collect();
    scaled.interior_contains(&shifted)
}

/// Minimal monomial generators of J(c u), in lexicographic order.
///
/// Box-and-verify: scan the lattice box with B_j the ceiling of the largest
/// vertex coordinate of c Gamma (minimal members provably fit: a member
/// with a coordinate beyond every vertex stays a member after decrementing
/// it), reduce to componentwise-minimal members, then assert that every
/// member on the outer box faces is dominated by a collected generator —
/// enlarging the box on failure.
pub fn generators(p: &NewtonPolyhedron, c: &Rat) -> Result<MonomialIdealPresentation> {
    if !c.is_positive() {
        return Err(Error::Validation("multiplier scale must be positive".into()));
    }
    let n = p.n();
    let scaled = p.scale(c)?;
    let mut bounds: Vec<u64> = (0..n)
        .map(|j| {
            let m = scaled
                .generators()
                .iter()
                .map(|g| rat_ceil(&g[j]))
                .max()
                .expect("nonempty generators");
            m.to_u64().unwrap_or(u64::MAX)
        })
        .collect();

    for _attempt in 0..4 {
        let mut members: Vec<Vec<u64>> = Vec::new();
        let mut alpha = vec![0u64; n];
        loop {
            let shifted: Vec<Rat> = alpha.iter().map(|&a| rat_int(a as i64 + 1)).collect();
            if scaled.interior_contains(&shifted)? {
                members.push(alpha.clone());
            }
            // Odometer over the box [0, B_1] x ... x [0, B_n].
            let mut j = 0;
            loop {
                if j == n {
                    break;
                }
                if alpha[j] < bounds[j] {
                    alpha[j] += 1;
                    break;
                }
                alpha[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
        let minimal: Vec<Vec<u64>> = members
            .iter()
            .filter(|a| {
                !members
                    .iter()
                    .any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y))
            })
            .cloned()
            .collect();
        let complete = members.iter().all(|m| {
            if (0..n).all(|j| m[j] < bounds[j]) {
                return true; // interior of the box; only faces are probed
            }
            minimal
                .iter()
                .any(|g| g.iter().zip(m).all(|(x, y)| x <= y))
        });
        if complete {
            let mut sorted = minimal;
            sorted.sort();
            let exponents = sorted
                .into_iter()
                .map(|a| a.into_iter().map(|x| rat_int(x as i64)).collect())
                .collect();
            return MonomialIdealPresentation::new(n, exponents);
        }
        for b in &mut bounds {
            *b = b.saturating_mul(2).max(1);
        }
    }
    Err(Error::Internal(
        "multiplier ideal box enumeration failed to close".into(),
    ))
}

pub fn generators_json(c: &Rat, m: &MonomialIdealPresentation) -> serde_json::Value {
    serde_json::json!({
        "scale": crate::rat::format_rat(c),
        "generators": m
            .exponents
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.to_integer().to_u64().unwrap_or(0))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    })
}
