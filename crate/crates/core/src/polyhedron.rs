//! Newton polyhedra: up-closed convex sets `conv(G) + R^n_+` in the
//! nonnegative orthant, stored by their generator set.
//!
//! Generators are pruned to the vertex set on construction (a generator is
//! redundant exactly when it lies in the hull of the others), so structural
//! equality of two polyhedra is equality of the sorted generator lists.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;
use serde_json::{json, Value};

use crate::dd;
use crate::error::{Error, Result};
use crate::expr::{Node, SingularityExpr};
use crate::rat::{dot, format_rat, parse_rat, Rat};
use crate::simplex::{Lp, LpOutcome, Rel};

static MAX_HULL_DIM: AtomicUsize = AtomicUsize::new(6);

/// Dimension cap for facet/vertex enumeration (default 6). Membership,
/// support values, covolumes and thresholds do not go through the hull and
/// ignore the cap.
pub fn set_max_hull_dim(d: usize) {
    MAX_HULL_DIM.store(d, Ordering::SeqCst);
}

pub fn max_hull_dim() -> usize {
    MAX_HULL_DIM.load(Ordering::SeqCst)
}

/// One facet `normal . x >= offset` with a primitive nonnegative normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronHull {
    pub facets: Vec<Facet>,
    pub vertices: Vec<Vec<Rat>>,
}

#[derive(Debug)]
pub struct NewtonPolyhedron {
    n: usize,
    generators: Vec<Vec<Rat>>,
    hull: OnceCell<PolyhedronHull>,
}

impl Clone for NewtonPolyhedron {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            generators: self.generators.clone(),
            hull: self.hull.clone(),
        }
    }
}

impl PartialEq for NewtonPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl Eq for NewtonPolyhedron {}

impl NewtonPolyhedron {
    pub fn from_generators(n: usize, generators: Vec<Vec<Rat>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::Validation("generator list is empty".into()));
        }
        for g in &generators {
            if g.len() != n {
                return Err(Error::Validation(format!(
                    "generator has length {} but n = {n}",
                    g.len()
                )));
            }
            if g.iter().any(Signed::is_negative) {
                return Err(Error::Validation("negative generator coordinate".into()));
            }
        }
        let generators = prune(n, generators)?;
        Ok(Self {
            n,
            generators,
            hull: OnceCell::new(),
        })
    }

    /// Diagram of a homogeneous piecewise-linear expression (the output of
    /// the indicator operation): the Newton polyhedron whose support
    /// function on the negative orthant is the expression.
    pub fn diagram_of(expr: &SingularityExpr) -> Result<Self> {
        let canon = expr.canonical();
        if !expr.is_piecewise_linear_homogeneous() {
            return Err(Error::Validation(
                "diagram requires a homogeneous piecewise-linear expression \
                 (powers 1, no nonzero constants); take the indicator first"
                    .into(),
            ));
        }
        if matches!(canon.root(), Node::Const(_)) {
            return Err(Error::Validation(
                "diagram of a constant expression is the whole orthant".into(),
            ));
        }
        let gens = node_generators(canon.root(), canon.n())?;
        Self::from_generators(canon.n(), gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pruned generators — exactly the vertices of the polyhedron.
    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    /// Facets and vertices; subject to the hull dimension cap.
    pub fn hull(&self) -> Result<&PolyhedronHull> {
        self.hull.get_or_try_init(|| {
            let cap = max_hull_dim();
            if self.n > cap {
                return Err(Error::Capability(format!(
                    "hull enumeration capped at dimension {cap} (requested {})",
                    self.n
                )));
            }
            let rec: Vec<Vec<Rat>> = (0..self.n).map(|j| unit(self.n, j)).collect();
            let facets = dd::facets_of_hull(&self.generators, &rec)?
                .into_iter()
                .map(|(normal, offset)| Facet { normal, offset })
                .collect();
            Ok(PolyhedronHull {
                facets,
                vertices: self.generators.clone(),
            })
        })
    }

    /// Support function value sup_{x in Gamma} <x, t> for nonpositive t
    /// (the sup over the up-closed set is attained on the generators).
    pub fn support_value(&self, t: &[Rat]) -> Result<Rat> {
        if t.len() != self.n {
            return Err(Error::Domain(format!(
                "direction has length {}, expected {}",
                t.len(),
                self.n
            )));
        }
        if t.iter().any(Signed::is_positive) {
            return Err(Error::Domain(
                "support values require a nonpositive direction".into(),
            ));
        }
        Ok(self
            .generators
            .iter()
            .map(|g| dot(t, g))
            .max()
            .expect("nonempty generators"))
    }

    /// Directional Lelong number nu_Gamma(a) = min_i <g_i, a> for a in the
    /// closed positive orthant; equals -support_value(-a).
    pub fn directional_number(&self, a: &[Rat]) -> Result<Rat> {
        if a.len() != self.n {
            return Err(Error::Domain(format!(
                "direction has length {}, expected {}",
                a.len(),
                self.n
            )));
        }
        if a.iter().any(Signed::is_negative) {
            return Err(Error::Domain(
                "directional numbers require a nonnegative direction".into(),
            ));
        }
        Ok(self
            .generators
            .iter()
            .map(|g| dot(a, g))
            .min()
            .expect("nonempty generators"))
    }

    /// Truncation: the diagram of `I + m^r`, i.e. the generators augmented
    /// with the axis points r e_j. Always has bounded complement.
    pub fn truncate(&self, r: &Rat) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Validation("truncation radius must be positive".into()));
        }
        let mut gens = self.generators.clone();
        for j in 0..self.n {
            let mut e = vec![Rat::zero(); self.n];
            e[j] = r.clone();
            gens.push(e);
        }
        Self::from_generators(self.n, gens)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Validation("dimension mismatch in Minkowski sum".into()));
        }
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for g in &self.generators {
            for h in &other.generators {
                gens.push(g.iter().zip(h).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_generators(self.n, gens)
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::Validation("negative scale factor".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.iter().map(|x| c * x).collect())
            .collect();
        Self::from_generators(self.n, gens)
    }

    /// Membership via LP (no hull, no dimension cap).
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Domain("point dimension mismatch".into()));
        }
        self.membership_lp(x, false)
            .map(|v| !matches!(v, LpOutcome::Infeasible))
    }

    /// Strict interior membership: x - eps * 1 still in Gamma for some
    /// eps > 0 (up-closedness makes this equivalent to the usual interior).
    pub fn interior_contains(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Domain("point dimension mismatch".into()));
        }
        match self.membership_lp(x, true)? {
            LpOutcome::Optimal { value, .. } => Ok(value.is_positive()),
            LpOutcome::Infeasible => Ok(false),
            LpOutcome::Unbounded => Err(Error::Internal("interior LP unbounded".into())),
        }
    }

    pub fn boundary_contains(&self, x: &[Rat]) -> Result<bool> {
        Ok(self.contains(x)? && !self.interior_contains(x)?)
    }

    /// Variables: convex weights per generator, plus a slack margin when
    /// `with_margin`; constraints sum(lam) = 1 and sum(lam g) + eps <= x.
    fn membership_lp(&self, x: &[Rat], with_margin: bool) -> Result<LpOutcome> {
        let m = self.generators.len();
        let vars = m + usize::from(with_margin);
        let mut lp = Lp::new(vars);
        let mut ones = vec![Rat::one(); m];
        ones.resize(vars, Rat::zero());
        lp.add_row(ones, Rel::Eq, Rat::one());
        for j in 0..self.n {
            let mut row: Vec<Rat> = self.generators.iter().map(|g| g[j].clone()).collect();
            if with_margin {
                row.push(Rat::one());
            }
            lp.add_row(row, Rel::Le, x[j].clone());
        }
        if with_margin {
            lp.objective = vec![Rat::zero(); vars];
            lp.objective[m] = Rat::one();
        }
        lp.maximize()
    }

    /// True when the complement `orthant \ Gamma` is bounded: every
    /// coordinate axis must carry a generator.
    pub fn is_bounded_complement(&self) -> bool {
        (0..self.n).all(|j| {
            self.generators
                .iter()
                .any(|g| g.iter().enumerate().all(|(k, x)| k == j || x.is_zero()))
        })
    }

    /// Codimension of the unbounded part of the complement: the minimum size
    /// of a coordinate set hitting the support of every generator. Equals n
    /// exactly when the complement is bounded (empty hitting locus).
    pub fn codim_unbounded_locus(&self) -> usize {
        if self.is_bounded_complement() {
            return self.n;
        }
        let supports: Vec<u64> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .fold(0u64, |m, (j, _)| m | (1 << j))
            })
            .collect();
        // A generator with empty support (the origin) makes Gamma the whole
        // orthant; complement empty, handled by the bounded branch above.
        for size in 1..=self.n {
            let mut found = None;
            subsets_of_size(self.n, size, &mut |mask| {
                if found.is_none() && supports.iter().all(|s| s & mask != 0) {
                    found = Some(size);
                }
            });
            if let Some(q) = found {
                return q;
            }
        }
        self.n
    }

    /// Per-axis intercepts: least t with t e_j in Gamma, None when the axis
    /// misses the polyhedron.
    pub fn axis_intercepts(&self) -> Vec<Option<Rat>> {
        (0..self.n)
            .map(|j| {
                self.generators
                    .iter()
                    .filter(|g| g.iter().enumerate().all(|(k, x)| k == j || x.is_zero()))
                    .map(|g| g[j].clone())
                    .min()
            })
            .collect()
    }

    /// Vertices of the truncation `Gamma ∩ [0, r]^n` (empty when r is too
    /// small to reach the polyhedron). Subject to the hull dimension cap.
    pub fn truncated_vertices(&self, r: &Rat) -> Result<Vec<Vec<Rat>>> {
        let hull = self.hull()?;
        let mut rows: Vec<(Vec<Rat>, Rat)> = hull
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        for j in 0..self.n {
            let mut neg = vec![Rat::zero(); self.n];
            neg[j] = -Rat::one();
            rows.push((neg, -r.clone()));
        }
        match dd::vertices_of(&rows) {
            Ok((verts, rec)) => {
                if !rec.is_empty() {
                    return Err(Error::Internal("truncation is not bounded".into()));
                }
                Ok(verts)
            }
            // A line-free certificate failure here means the truncated region
            // is empty (r below every generator).
            Err(Error::Degenerate(_)) => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "generators": self
                .generators
                .iter()
                .map(|g| g.iter().map(format_rat).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Accepts `{"n", "generators"}` or `{"n", "facets": [{"normal",
    /// "offset"}]}`; the facet form goes through vertex enumeration and must
    /// describe an up-closed region inside the orthant.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field 'n'".into()))? as usize;
        if let Some(gens) = obj.get("generators") {
            let gens = parse_matrix(gens, "generators")?;
            return Self::from_generators(n, gens);
        }
        let facets = obj
            .get("facets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("need 'generators' or 'facets'".into()))?;
        let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for f in facets {
            let fo = f
                .as_object()
                .ok_or_else(|| Error::Parse("facet must be an object".into()))?;
            let normal = parse_vector(
                fo.get("normal")
                    .ok_or_else(|| Error::Parse("facet missing 'normal'".into()))?,
            )?;
            if normal.len() != n {
                return Err(Error::Validation("facet normal length mismatch".into()));
            }
            if normal.iter().any(Signed::is_negative) {
                return Err(Error::Validation(
                    "facet normals of a Newton polyhedron must be nonnegative".into(),
                ));
            }
            let offset = fo
                .get("offset")
                .and_then(Value::as_str)
                .map(parse_rat)
                .transpose()?
                .ok_or_else(|| Error::Parse("facet missing string 'offset'".into()))?;
            rows.push((normal, offset));
        }
        if n > max_hull_dim() {
            return Err(Error::Capability(format!(
                "vertex enumeration capped at dimension {} (requested {n})",
                max_hull_dim()
            )));
        }
        // Make the region live in the orthant before enumerating.
        for j in 0..n {
            rows.push((unit(n, j), Rat::zero()));
        }
        let (verts, rec) = dd::vertices_of(&rows)?;
        if verts.is_empty() {
            return Err(Error::Validation("facet system has no vertices".into()));
        }
        let mut expected: Vec<Vec<Rat>> = (0..n).map(|j| unit(n, j)).collect();
        expected.sort();
        if rec != expected {
            return Err(Error::Validation(
                "facet system is not up-closed (recession cone is not the orthant)".into(),
            ));
        }
        Self::from_generators(n, verts)
    }
}

fn unit(n: usize, j: usize) -> Vec<Rat> {
    let mut e = vec![Rat::zero(); n];
    e[j] = Rat::one();
    e
}

fn parse_vector(v: &Value) -> Result<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected array of rationals".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_owned)
                .or_else(|| x.as_i64().map(|i| i.to_string()))
                .ok_or_else(|| Error::Parse("coordinates must be rational strings".into()))
                .and_then(|s| parse_rat(&s))
        })
        .collect()
}

fn parse_matrix(v: &Value, what: &str) -> Result<Vec<Vec<Rat>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("'{what}' must be an array")))?
        .iter()
        .map(parse_vector)
        .collect()
}

/// Drops every generator lying in the hull of the others; the survivors are
/// the vertices. Ties (duplicate points) keep one copy.
fn prune(n: usize, mut gens: Vec<Vec<Rat>>) -> Result<Vec<Vec<Rat>>> {
    gens.sort();
    gens.dedup();
    let mut keep: Vec<bool> = vec![true; gens.len()];
    for i in 0..gens.len() {
        let others: Vec<&Vec<Rat>> = (0..gens.len())
            .filter(|&k| k != i && keep[k])
            .map(|k| &gens[k])
            .collect();
        if others.is_empty() {
            continue;
        }
        if in_hull(n, &others, &gens[i])? {
            keep[i] = false;
        }
    }
    Ok(gens
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect())
}

fn in_hull(n: usize, gens: &[&Vec<Rat>], x: &[Rat]) -> Result<bool> {
    let m = gens.len();
    let mut lp = Lp::new(m);
    lp.add_row(vec![Rat::one(); m], Rel::Eq, Rat::one());
    for j in 0..n {
        let row: Vec<Rat> = gens.iter().map(|g| g[j].clone()).collect();
        lp.add_row(row, Rel::Le, x[j].clone());
    }
    lp.is_feasible()
}

/// Generators of the diagram of a canonical piecewise-linear node.
fn node_generators(node: &Node, n: usize) -> Result<Vec<Vec<Rat>>> {
    match node {
        Node::Const(v) => {
            if !v.is_zero() {
                return Err(Error::Internal("nonzero constant in indicator".into()));
            }
            Ok(vec![vec![Rat::zero(); n]])
        }
        Node::Atom { index, power, coeff } => {
            if !power.is_one() {
                return Err(Error::Internal("sublinear atom in indicator".into()));
            }
            let mut g = vec![Rat::zero(); n];
            g[*index - 1] = coeff.clone();
            Ok(vec![g])
        }
        // Sum of functions is Minkowski sum of diagrams.
        Node::Sum(ch) => {
            let mut acc = vec![vec![Rat::zero(); n]];
            for c in ch {
                let part = node_generators(c, n)?;
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        next.push(a.iter().zip(p).map(|(x, y)| x + y).collect());
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        // Max of functions is the hull of the union of diagrams.
        Node::Max(ch) => {
            let mut acc = Vec::new();
            for c in ch {
                acc.extend(node_generators(c, n)?);
            }
            Ok(acc)
        }
        Node::Scale(f, ch) => Ok(node_generators(ch, n)?
            .into_iter()
            .map(|g| g.into_iter().map(|x| f * x).collect())
            .collect()),
    }
}

fn subsets_of_size(n: usize, size: usize, f: &mut impl FnMut(u64)) {
    fn rec(n: usize, size: usize, start: usize, mask: u64, f: &mut impl FnMut(u64)) {
        if size == 0 {
            f(mask);
            return;
        }
        for j in start..=n.saturating_sub(size) {
            rec(n, size - 1, j + 1, mask | (1 << j), f);
        }
    }
    rec(n, size, 0, 0, f);
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn pruning_removes_dominated_and_interior_points() {
        let p = gamma(&[&[2, 0], &[0, 3], &[3, 3], &[2, 1]]);
        assert_eq!(
            p.generators(),
            &[vec![rat_int(0), rat_int(3)], vec![rat_int(2), rat_int(0)]]
        );
    }

    #[test]
    fn diagram_of_max_expression() {
        let e = SingularityExpr::parse("max(2*x1, 3*x2)").unwrap();
        let p = NewtonPolyhedron::diagram_of(&e).unwrap();
        assert_eq!(
            p.generators(),
            &[vec![rat_int(0), rat_int(3)], vec![rat_int(2), rat_int(0)]]
        );
    }

    #[test]
    fn diagram_of_sum_is_minkowski() {
        // (x1 + x2) + max(x1, x2): Minkowski sum of {(1,1)} and the simplex.
        let e = SingularityExpr::parse("x1 + x2 + max(x1, x2)").unwrap();
        let p = NewtonPolyhedron::diagram_of(&e).unwrap();
        assert_eq!(
            p.generators(),
            &[vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(1)]]
        );
    }

    #[test]
    fn diagram_rejects_non_homogeneous_input() {
        let e = SingularityExpr::parse("x1^(1/2) + max(x1, x2)").unwrap();
        assert!(matches!(
            NewtonPolyhedron::diagram_of(&e),
            Err(Error::Validation(_))
        ));
        let p = NewtonPolyhedron::diagram_of(&e.indicator()).unwrap();
        assert_eq!(
            p.generators(),
            &[vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(0)]]
        );
    }

    #[test]
    fn support_values() {
        let d = gamma(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            d.support_value(&[rat_int(-1), rat_int(-1)]).unwrap(),
            rat_int(-1)
        );
        let p = NewtonPolyhedron::from_generators(
            2,
            vec![
                vec![rat_int(1), rat_int(0)],
                vec![rat(1, 4), rat(1, 4)],
                vec![rat_int(0), rat_int(1)],
            ],
        )
        .unwrap();
        assert_eq!(
            p.support_value(&[rat_int(-1), rat_int(-1)]).unwrap(),
            rat(-1, 2)
        );
        assert_eq!(
            p.support_value(&[rat_int(0), rat_int(0)]).unwrap(),
            rat_int(0)
        );
        assert!(p.support_value(&[rat_int(1), rat_int(-1)]).is_err());
    }

    #[test]
    fn directional_numbers() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            p.directional_number(&[rat_int(1), rat_int(1)]).unwrap(),
            rat_int(2)
        );
        assert_eq!(
            p.directional_number(&[rat_int(3), rat_int(1)]).unwrap(),
            rat_int(3)
        );
        assert!(p.directional_number(&[rat_int(-1), rat_int(1)]).is_err());
    }

    #[test]
    fn truncate_examples() {
        let p = gamma(&[&[1, 1]]);
        let t = p.truncate(&rat_int(2)).unwrap();
        assert_eq!(
            t.generators(),
            // (1, 1) is the midpoint of the two axis points, so it prunes.
            &[
                vec![rat_int(0), rat_int(2)],
                vec![rat_int(2), rat_int(0)],
            ]
        );
        assert!(t.is_bounded_complement());

        let d = gamma(&[&[1, 0], &[0, 1]]);
        assert_eq!(d.truncate(&rat_int(1)).unwrap(), d);
        assert_eq!(gamma(&[&[2, 0], &[0, 3]]).truncate(&rat_int(1)).unwrap(), d);
    }

    #[test]
    fn minkowski_sum_of_simplices() {
        let d = gamma(&[&[1, 0], &[0, 1]]);
        let s = d.minkowski_sum(&d).unwrap();
        assert_eq!(
            s.generators(),
            &[vec![rat_int(0), rat_int(2)], vec![rat_int(2), rat_int(0)]]
        );
    }

    #[test]
    fn membership_and_interior() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        assert!(p.contains(&[rat_int(2), rat_int(0)]).unwrap());
        assert!(p.contains(&[rat_int(1), rat(3, 2)]).unwrap());
        assert!(!p.contains(&[rat_int(1), rat_int(1)]).unwrap());
        assert!(p.interior_contains(&[rat_int(2), rat_int(2)]).unwrap());
        assert!(!p.interior_contains(&[rat_int(2), rat_int(0)]).unwrap());
        assert!(p.boundary_contains(&[rat_int(1), rat(3, 2)]).unwrap());
        assert!(p.boundary_contains(&[rat_int(3), rat_int(0)]).unwrap());
        assert!(!p.boundary_contains(&[rat_int(1), rat_int(4)]).unwrap());
    }

    #[test]
    fn bounded_complement_and_codim() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        assert!(p.is_bounded_complement());
        assert_eq!(p.codim_unbounded_locus(), 2);

        let q = gamma(&[&[1, 1]]);
        assert!(!q.is_bounded_complement());
        assert_eq!(q.codim_unbounded_locus(), 1);

        let r = gamma(&[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(r.codim_unbounded_locus(), 1); // hit both with {2}

        let s = gamma(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(s.codim_unbounded_locus(), 2);
    }

    #[test]
    fn axis_intercepts_found() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            p.axis_intercepts(),
            vec![Some(rat_int(2)), Some(rat_int(3))]
        );
        let q = gamma(&[&[1, 1]]);
        assert_eq!(q.axis_intercepts(), vec![None, None]);
    }

    #[test]
    fn hull_facets() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        let hull = p.hull().unwrap();
        assert_eq!(hull.facets.len(), 3);
        assert!(hull.facets.contains(&Facet {
            normal: vec![rat_int(3), rat_int(2)],
            offset: rat_int(6),
        }));
    }

    #[test]
    fn hull_dimension_cap() {
        let gens = vec![vec![rat_int(1); 7]];
        let p = NewtonPolyhedron::from_generators(7, gens).unwrap();
        assert!(matches!(p.hull(), Err(Error::Capability(_))));
    }

    #[test]
    fn truncation_vertices() {
        let p = gamma(&[&[1, 1]]);
        let mut v = p.truncated_vertices(&rat_int(3)).unwrap();
        v.sort();
        assert_eq!(
            v,
            vec![
                vec![rat_int(1), rat_int(1)],
                vec![rat_int(1), rat_int(3)],
                vec![rat_int(3), rat_int(1)],
                vec![rat_int(3), rat_int(3)],
            ]
        );
    }

    #[test]
    fn json_round_trip_generators() {
        let p = gamma(&[&[2, 0], &[0, 3]]);
        let q = NewtonPolyhedron::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn json_from_facets() {
        let v = json!({
            "n": 2,
            "facets": [
                {"normal": ["3", "2"], "offset": "6"},
            ]
        });
        let p = NewtonPolyhedron::from_json(&v).unwrap();
        assert_eq!(
            p.generators(),
            &[vec![rat_int(0), rat_int(3)], vec![rat_int(2), rat_int(0)]]
        );
    }

    #[test]
    fn json_rejects_negative_normal() {
        let v = json!({
            "n": 2,
            "facets": [
                {"normal": ["-1", "2"], "offset": "0"},
            ]
        });
        assert!(NewtonPolyhedron::from_json(&v).is_err());
    }
}
