//! Integrability index, log canonical threshold, Skoda-type inequality
//! chains, equality-case classification, and the refined valuative bound.

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::covolume::{lelong_k, lelong_ladder};
use crate::error::{Error, Result};
use crate::polyhedron::NewtonPolyhedron;
use crate::rat::{format_rat, rat_to_f64, Rat};
use crate::simplex::{Lp, LpOutcome, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainVerdict {
    pub holds: bool,
    pub equality: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkodaVerdict {
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub lower_equality: bool,
}

#[derive(Clone, Debug)]
pub struct RefinedBound {
    pub value: f64,
    /// Direction a attaining the reported value (a feasible certificate:
    /// any positive a yields a valid lower bound for the supremum).
    pub direction: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub nu: Rat,
    pub lambda: Rat,
    /// None encodes +infinity (lambda = 0).
    pub lct: Option<Rat>,
    pub codim_l: usize,
    /// (k, L_k) for 1 <= k <= codim_l.
    pub lelong: Vec<(usize, Rat)>,
    pub chain_verdicts: Vec<(usize, ChainVerdict)>,
    pub skoda: SkodaVerdict,
    /// (B, J) when Gamma = B * Delta_J; J is 1-based.
    pub mceq_class: Option<(Rat, Vec<usize>)>,
    pub refined_bounds: Vec<(usize, RefinedBound)>,
}

/// lambda via the direct LP: maximize lambda subject to
/// lambda <= <g_i, a> for every generator, sum a_j = 1, a >= 0.
pub fn lambda_lp(p: &NewtonPolyhedron) -> Result<Rat> {
    Ok(lambda_lp_with_direction(p)?.0)
}

fn lambda_lp_with_direction(p: &NewtonPolyhedron) -> Result<(Rat, Vec<Rat>)> {
    let n = p.n();
    let mut lp = Lp::new(n + 1); // a_1..a_n, lambda
    for g in p.generators() {
        let mut row: Vec<Rat> = g.iter().map(|x| -x).collect();
        row.push(Rat::one());
        lp.add_row(row, Rel::Le, Rat::zero());
    }
    let mut ones = vec![Rat::one(); n];
    ones.push(Rat::zero());
    lp.add_row(ones, Rel::Eq, Rat::one());
    lp.objective = vec![Rat::zero(); n + 1];
    lp.objective[n] = Rat::one();
    match lp.maximize()? {
        LpOutcome::Optimal { value, point } => Ok((value, point[..n].to_vec())),
        other => Err(Error::Internal(format!("lambda LP did not optimize: {other:?}"))),
    }
}

/// lambda via the diagonal ray: min { s >= 0 : s (1,...,1) in Gamma },
/// solved as minimize s subject to sum lam_i g_ij <= s, sum lam_i = 1.
pub fn lambda_ray(p: &NewtonPolyhedron) -> Result<Rat> {
    let n = p.n();
    let m = p.generators().len();
    let mut lp = Lp::new(m + 1); // lam_1..lam_m, s
    for j in 0..n {
        let mut row: Vec<Rat> = p.generators().iter().map(|g| g[j].clone()).collect();
        row.push(-Rat::one());
        lp.add_row(row, Rel::Le, Rat::zero());
    }
    let mut ones = vec![Rat::one(); m];
    ones.push(Rat::zero());
    lp.add_row(ones, Rel::Eq, Rat::one());
    lp.objective = vec![Rat::zero(); m + 1];
    lp.objective[m] = -Rat::one();
    match lp.maximize()? {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        other => Err(Error::Internal(format!("ray LP did not optimize: {other:?}"))),
    }
}

/// Log canonical threshold 1/lambda; None is the +infinity sentinel.
pub fn lct(p: &NewtonPolyhedron) -> Result<Option<Rat>> {
    let lambda = lambda_lp(p)?;
    Ok(if lambda.is_zero() {
        None
    } else {
        Some(lambda.recip())
    })
}

/// Gamma = B * Delta_J exactly: generators are {B e_j : j in J}.
pub fn classify_mceq(p: &NewtonPolyhedron) -> Option<(Rat, Vec<usize>)> {
    let mut b: Option<Rat> = None;
    let mut j_set = Vec::new();
    for g in p.generators() {
        let mut nonzero = g.iter().enumerate().filter(|(_, x)| !x.is_zero());
        let (j, v) = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        match &b {
            None => b = Some(v.clone()),
            Some(prev) if prev == v => {}
            _ => return None,
        }
        j_set.push(j + 1);
    }
    j_set.sort_unstable();
    b.map(|b| (b, j_set))
}

/// Whether lambda sits at the Skoda lower bound nu/n, tested geometrically:
/// the point (nu/n)(1,...,1) lies on the boundary of Gamma.
pub fn skoda_lower_equality(p: &NewtonPolyhedron) -> Result<bool> {
    let n = p.n();
    let nu = lelong_k(p, 1)?;
    let point = vec![nu / Rat::from_integer(n.into()); n];
    p.boundary_contains(&point)
}

/// Computes nu, lambda, lct, the L_k ladder, and all verdicts. Skoda and
/// the generalized chain are theorems; a false verdict aborts.
pub fn verify_chain(p: &NewtonPolyhedron) -> Result<ThresholdReport> {
    let n = p.n();
    let lambda = lambda_lp(p)?;
    let ray = lambda_ray(p)?;
    if lambda != ray {
        return Err(Error::Internal(format!(
            "lambda mismatch: LP {} vs ray {}",
            format_rat(&lambda),
            format_rat(&ray)
        )));
    }
    let codim_l = p.codim_unbounded_locus();
    let lelong = lelong_ladder(p)?;
    let nu = lelong[0].1.clone();

    let n_rat = Rat::from_integer(n.into());
    let skoda = SkodaVerdict {
        lower_holds: &nu <= &(&n_rat * &lambda),
        upper_holds: lambda <= nu,
        lower_equality: nu == &n_rat * &lambda,
    };
    if !skoda.lower_holds || !skoda.upper_holds {
        return Err(Error::Internal(
            "Skoda chain violated - this is a theorem, so the engine is wrong".into(),
        ));
    }

    let mut chain_verdicts = Vec::new();
    for (k, l_k) in &lelong {
        // Root-free form of lambda <= k^{-1} L_k^{1/k}: k^k lambda^k <= L_k.
        let mut lhs = Rat::one();
        let k_rat = Rat::from_integer((*k).into());
        for _ in 0..*k {
            lhs *= &k_rat * &lambda;
        }
        let verdict = ChainVerdict {
            holds: &lhs <= l_k,
            equality: &lhs == l_k,
        };
        if !verdict.holds {
            return Err(Error::Internal(format!(
                "generalized chain violated at k = {k} - theorem, engine bug"
            )));
        }
        chain_verdicts.push((*k, verdict));
    }

    Ok(ThresholdReport {
        nu,
        lct: if lambda.is_zero() {
            None
        } else {
            Some(lambda.recip())
        },
        lambda,
        codim_l,
        lelong,
        chain_verdicts,
        skoda,
        mceq_class: classify_mceq(p),
        refined_bounds: Vec::new(),
    })
}

/// Refined valuative bound: numerically maximizes
/// k^{-1} nu_Gamma(a) / (max_{|J|=k} prod_{j in J} a_j)^{1/k} over a > 0.
///
/// Deterministic multi-start pattern search (uniform direction, the lambda
/// LP optimum, facet normals). The result is certified to lie in
/// [lambda, k^{-1} L_k^{1/k}] up to 1e-9; starting from the LP optimum
/// guarantees the lower end by AM-GM.
pub fn refined_bound(p: &NewtonPolyhedron, k: usize) -> Result<RefinedBound> {
    let n = p.n();
    let codim_l = p.codim_unbounded_locus();
    if k == 0 || k > codim_l {
        return Err(Error::Capability(format!(
            "refined bound requires 1 <= k <= codim of the unbounded locus ({codim_l}), got {k}"
        )));
    }
    let gens: Vec<Vec<f64>> = p
        .generators()
        .iter()
        .map(|g| g.iter().map(rat_to_f64).collect())
        .collect();
    let objective = |a: &[f64]| -> f64 {
        let nu = gens
            .iter()
            .map(|g| g.iter().zip(a).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let mut sorted = a.to_vec();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let prod: f64 = sorted[..k].iter().product();
        nu / (k as f64 * prod.powf(1.0 / k as f64))
    };

    let mut starts: Vec<Vec<f64>> = vec![vec![1.0; n]];
    let (lambda, a_star) = lambda_lp_with_direction(p)?;
    starts.push(a_star.iter().map(|x| rat_to_f64(x).max(1e-9)).collect());
    if let Ok(hull) = p.hull() {
        for f in &hull.facets {
            starts.push(f.normal.iter().map(|x| rat_to_f64(x).max(1e-9)).collect());
        }
    }

    let mut best_val = f64::NEG_INFINITY;
    let mut best_dir = vec![1.0; n];
    for start in starts {
        let mut a = start;
        let mut val = objective(&a);
        let mut step = 0.5;
        while step > 1e-12 {
            let mut improved = false;
            for j in 0..n {
                for factor in [1.0 + step, 1.0 / (1.0 + step)] {
                    let old = a[j];
                    a[j] = (old * factor).max(1e-12);
                    let cand = objective(&a);
                    if cand > val {
                        val = cand;
                        improved = true;
                    } else {
                        a[j] = old;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if val > best_val {
            best_val = val;
            best_dir = a;
        }
    }

    let l_k = lelong_k(p, k)?;
    let cap = rat_to_f64(&l_k).powf(1.0 / k as f64) / k as f64;
    let floor = rat_to_f64(&lambda);
    if best_val < floor - 1e-9 || best_val > cap + 1e-9 {
        return Err(Error::Internal(format!(
            "refined bound {best_val} escaped its certificate interval [{floor}, {cap}]"
        )));
    }
    // Normalize the certificate direction for stable reporting.
    let sum: f64 = best_dir.iter().sum();
    for x in &mut best_dir {
        *x /= sum;
    }
    Ok(RefinedBound {
        value: best_val,
        direction: best_dir,
    })
}

impl ThresholdReport {
    pub fn to_json(&self) -> Value {
        let mut lelong = Map::new();
        for (k, v) in &self.lelong {
            lelong.insert(k.to_string(), Value::String(format_rat(v)));
        }
        let mut chain = Map::new();
        for (k, v) in &self.chain_verdicts {
            chain.insert(
                k.to_string(),
                json!({ "holds": v.holds, "equality": v.equality }),
            );
        }
        let mut refined = Map::new();
        for (k, b) in &self.refined_bounds {
            refined.insert(
                k.to_string(),
                json!({
                    "value": b.value,
                    "approx": true,
                    "direction": b.direction,
                }),
            );
        }
        json!({
            "nu": format_rat(&self.nu),
            "lambda": format_rat(&self.lambda),
            "lct": match &self.lct {
                Some(v) => Value::String(format_rat(v)),
                None => Value::String("inf".into()),
            },
            "codim_l": self.codim_l,
            "lelong": lelong,
            "chain_verdicts": chain,
            "skoda": {
                "lower_holds": self.skoda.lower_holds,
                "upper_holds": self.skoda.upper_holds,
                "lower_equality": self.skoda.lower_equality,
            },
            "mceq_class": match &self.mceq_class {
                Some((b, j)) => json!({ "B": format_rat(b), "J": j }),
                None => Value::Null,
            },
            "refined_bounds": refined,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covolume::unit_simplex;
    use crate::rat::{rat, rat_int};

    fn gamma(gens: &[&[i64]]) -> NewtonPolyhedron {
        let n = gens[0].len();
        NewtonPolyhedron::from_generators(
            n,
            gens.iter()
                .map(|g| g.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn remark_diagram() -> NewtonPolyhedron {
        NewtonPolyhedron::from_generators(
            2,
            vec![
                vec![rat_int(1), rat_int(0)],
                vec![rat(1, 4), rat(1, 4)],
                vec![rat_int(0), rat_int(1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn lambda_examples() {
        for n in 2..=4 {
            let d = unit_simplex(n);
            assert_eq!(lambda_lp(&d).unwrap(), Rat::from_integer(1.into()) / Rat::from_integer(n.into()));
            assert_eq!(lambda_ray(&d).unwrap(), lambda_lp(&d).unwrap());
        }
        assert_eq!(lambda_lp(&remark_diagram()).unwrap(), rat(1, 4));
        assert_eq!(lambda_ray(&gamma(&[&[2, 0], &[0, 3]])).unwrap(), rat(6, 5));
        assert_eq!(lambda_ray(&gamma(&[&[1, 1]])).unwrap(), rat_int(1));
    }

    #[test]
    fn lambda_of_phi_weight_diagram() {
        // phi_a diagram {a_k^{-1} e_k}: lambda = 1 / sum a_k.
        let p = NewtonPolyhedron::from_generators(
            3,
            vec![
                vec![rat_int(2), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1), rat_int(0)],
                vec![rat_int(0), rat_int(0), rat(1, 4)],
            ],
        )
        .unwrap();
        assert_eq!(lambda_lp(&p).unwrap(), rat(2, 11));
        assert_eq!(lambda_ray(&p).unwrap(), rat(2, 11));
    }

    #[test]
    fn lct_examples() {
        assert_eq!(lct(&unit_simplex(3)).unwrap(), Some(rat_int(3)));
        assert_eq!(lct(&gamma(&[&[2, 0], &[0, 3]])).unwrap(), Some(rat(5, 6)));
        let with_zero = gamma(&[&[0, 0]]);
        assert_eq!(lct(&with_zero).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_mceq(&unit_simplex(3)),
            Some((rat_int(1), vec![1, 2, 3]))
        );
        assert_eq!(
            classify_mceq(&gamma(&[&[3, 0], &[0, 3]])),
            Some((rat_int(3), vec![1, 2]))
        );
        assert_eq!(classify_mceq(&gamma(&[&[2, 0], &[0, 3]])), None);
        assert_eq!(
            classify_mceq(&gamma(&[&[0, 2, 0], &[0, 0, 2]])),
            Some((rat_int(2), vec![2, 3]))
        );
    }

    #[test]
    fn skoda_equality_examples() {
        assert!(skoda_lower_equality(&gamma(&[&[1, 1]])).unwrap());
        assert!(skoda_lower_equality(&unit_simplex(2)).unwrap());
        assert!(!skoda_lower_equality(&gamma(&[&[2, 0], &[0, 3]])).unwrap());
    }

    #[test]
    fn chain_report_contents() {
        let report = verify_chain(&gamma(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(report.nu, rat_int(2));
        assert_eq!(report.lambda, rat(6, 5));
        assert_eq!(report.lct, Some(rat(5, 6)));
        assert_eq!(report.codim_l, 2);
        assert_eq!(report.lelong, vec![(1, rat_int(2)), (2, rat_int(6))]);
        let (_, v2) = report.chain_verdicts[1];
        assert!(v2.holds && !v2.equality); // 4 (6/5)^2 = 144/25 < 6
        assert!(report.skoda.lower_holds && report.skoda.upper_holds);
        assert!(!report.skoda.lower_equality);
        assert!(report.mceq_class.is_none());
    }

    #[test]
    fn chain_equality_on_simplex() {
        let report = verify_chain(&unit_simplex(3)).unwrap();
        let eqs: Vec<bool> = report
            .chain_verdicts
            .iter()
            .map(|(_, v)| v.equality)
            .collect();
        assert_eq!(eqs, vec![false, false, true]); // only k = n
        assert!(report.skoda.lower_equality);
        assert_eq!(report.mceq_class, Some((rat_int(1), vec![1, 2, 3])));
    }

    #[test]
    fn refined_bound_on_simplex() {
        let b = refined_bound(&unit_simplex(2), 2).unwrap();
        assert!((b.value - 0.5).abs() < 1e-9);
        let b3 = refined_bound(&unit_simplex(3), 3).unwrap();
        assert!((b3.value - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn refined_bound_certified_interval() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        let b = refined_bound(&p, 2).unwrap();
        assert!(b.value >= 1.2 - 1e-9);
        assert!(b.value <= 6f64.sqrt() / 2.0 + 1e-9);
    }

    #[test]
    fn report_json_shape() {
        let report = verify_chain(&remark_diagram()).unwrap();
        let v = report.to_json();
        assert_eq!(v["nu"], "1/2");
        assert_eq!(v["lambda"], "1/4");
        assert_eq!(v["lct"], "4");
        assert_eq!(v["lelong"]["2"], "1/2");
        assert_eq!(v["skoda"]["lower_equality"], true);
        assert!(v["mceq_class"].is_null());
    }
}
