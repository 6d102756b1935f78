//! Exact Euclidean volume of bounded rational polytopes.
//!
//! The facet description is computed once; after that the triangulation is
//! purely combinatorial. Every face of a face G is an intersection G ∩ F
//! with a facet F of the whole polytope, so the recursive cone
//! decomposition (apex over the sub-faces avoiding it) needs only set
//! intersections and small rank tests, never another hull. Volumes are
//! accumulated as |det| / n! over the resulting simplices.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::dd;
use crate::error::Error;
use crate::rat::{dot, Rat};
use crate::Result;

/// Volume of `conv(points)` in R^dim; 0 for lower-dimensional hulls.
pub fn polytope_volume(points: &[Vec<Rat>], dim: usize) -> Result<Rat> {
    if points.is_empty() || dim == 0 {
        return Ok(Rat::zero());
    }
    debug_assert!(points.iter().all(|p| p.len() == dim));
    if dim == 1 {
        let min = points.iter().map(|p| &p[0]).min().unwrap();
        let max = points.iter().map(|p| &p[0]).max().unwrap();
        return Ok(max - min);
    }
    if points.len() <= dim {
        return Ok(Rat::zero());
    }
    let facets = match dd::facets_of_hull(points, &[]) {
        Ok(f) => f,
        // Rank deficiency of the lifted cone means the hull is not
        // full-dimensional, hence has zero volume.
        Err(Error::Degenerate(_)) => return Ok(Rat::zero()),
        Err(e) => return Err(e),
    };
    polytope_volume_with_facets(points, &facets, dim)
}

/// Volume when a facet description `dot(w, x) >= h` of `conv(points)` is
/// already known; skips the hull computation. Redundant or slack rows are
/// harmless (their incidence sets are duplicates or rank-deficient).
pub fn polytope_volume_with_facets(
    points: &[Vec<Rat>],
    facets: &[(Vec<Rat>, Rat)],
    dim: usize,
) -> Result<Rat> {
    if points.is_empty() || dim == 0 || points.len() <= dim {
        return Ok(Rat::zero());
    }
    if dim == 1 {
        let min = points.iter().map(|p| &p[0]).min().unwrap();
        let max = points.iter().map(|p| &p[0]).max().unwrap();
        return Ok(max - min);
    }
    // Vertex incidence per facet (includes non-extreme points lying on it;
    // they only refine the triangulation).
    let incidence: Vec<Vec<usize>> = facets
        .iter()
        .map(|(w, h)| {
            (0..points.len())
                .filter(|&i| dot(w, &points[i]) == *h)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..points.len()).collect();
    let mut total = Rat::zero();
    let mut factorial = Rat::one();
    for k in 2..=dim {
        factorial *= Rat::from_integer(k.into());
    }
    for simplex in triangulate(&all, dim, &incidence, points) {
        total += simplex_det(&simplex, points).abs();
    }
    Ok(total / factorial)
}

/// Triangulates a d-dimensional face (given by the indices of the input
/// points lying on it) into d-simplices, coning from its first point over
/// the recursively triangulated sub-faces that avoid it.
fn triangulate(
    face: &[usize],
    d: usize,
    incidence: &[Vec<usize>],
    points: &[Vec<Rat>],
) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for inc in incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|i| inc.contains(i)).collect();
        // Skip the empty cut, the face itself, cuts through the apex, and
        // anything too small to span dimension d - 1.
        if sub.len() < d || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        if !seen.insert(sub.clone()) {
            continue;
        }
        if affine_rank(&sub, points) != d - 1 {
            continue;
        }
        for mut simplex in triangulate(&sub, d - 1, incidence, points) {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    out
}

/// Affine rank of the indexed points (dimension of their affine hull).
fn affine_rank(idx: &[usize], points: &[Vec<Rat>]) -> usize {
    let base = &points[idx[0]];
    let mut rows: Vec<Vec<Rat>> = idx[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(x, b)| x - b).collect())
        .collect();
    let cols = base.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot;
            for k in c..cols {
                let sub = &f * &rows[rank][k];
                rows[r][k] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// det of the edge matrix of a simplex given by point indices (last = apex).
fn simplex_det(simplex: &[usize], points: &[Vec<Rat>]) -> Rat {
    let apex = &points[*simplex.last().unwrap()];
    let n = apex.len();
    let mut m: Vec<Vec<Rat>> = simplex[..simplex.len() - 1]
        .iter()
        .map(|&i| points[i].iter().zip(apex).map(|(x, a)| x - a).collect())
        .collect();
    debug_assert_eq!(m.len(), n);
    // Fraction-free-ish Gaussian elimination; exact over rationals.
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn unit_square_and_cube() {
        let sq = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(polytope_volume(&sq, 2).unwrap(), rat_int(1));
        let cube: Vec<Vec<Rat>> = (0..8)
            .map(|m| (0..3).map(|j| rat_int((m >> j) & 1)).collect())
            .collect();
        assert_eq!(polytope_volume(&cube, 3).unwrap(), rat_int(1));
    }

    #[test]
    fn triangle() {
        let t = pts(&[&[0, 0], &[2, 0], &[0, 3]]);
        assert_eq!(polytope_volume(&t, 2).unwrap(), rat_int(3));
    }

    #[test]
    fn simplex_in_4d() {
        let mut s = vec![vec![rat_int(0); 4]];
        for j in 0..4 {
            let mut e = vec![rat_int(0); 4];
            e[j] = rat_int(1);
            s.push(e);
        }
        assert_eq!(polytope_volume(&s, 4).unwrap(), rat(1, 24));
    }

    #[test]
    fn degenerate_sets() {
        assert_eq!(polytope_volume(&[], 3).unwrap(), rat_int(0));
        let seg = pts(&[&[0, 0], &[5, 5]]);
        assert_eq!(polytope_volume(&seg, 2).unwrap(), rat_int(0));
        let flat = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(polytope_volume(&flat, 3).unwrap(), rat_int(0));
    }

    #[test]
    fn interior_points_ignored() {
        let sq = pts(&[&[0, 0], &[4, 0], &[0, 4], &[4, 4], &[2, 2], &[1, 3]]);
        assert_eq!(polytope_volume(&sq, 2).unwrap(), rat_int(16));
    }

    #[test]
    fn shifted_irregular_pentagon() {
        // Shoelace check: (1,1),(4,1),(5,3),(3,5),(1,4) has area 12.
        let p = pts(&[&[1, 1], &[4, 1], &[5, 3], &[3, 5], &[1, 4]]);
        assert_eq!(polytope_volume(&p, 2).unwrap(), rat_int(12));
    }

    #[test]
    fn hypercube_in_4d() {
        let cube: Vec<Vec<Rat>> = (0..16)
            .map(|m| (0..4).map(|j| rat_int((m >> j) & 1)).collect())
            .collect();
        assert_eq!(polytope_volume(&cube, 4).unwrap(), rat_int(1));
    }

    #[test]
    fn points_on_edges_ignored() {
        let t = pts(&[&[0, 0], &[4, 0], &[0, 4], &[2, 0], &[2, 2], &[0, 1]]);
        assert_eq!(polytope_volume(&t, 2).unwrap(), rat_int(8));
    }
}
