//! Double description: extreme rays of pointed polyhedral cones, used both
//! for facet enumeration (V-to-H, via the dual cone) and vertex enumeration
//! (H-to-V, via homogenization).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{dot, primitive, Rat};

/// Extreme rays of the pointed cone `{x : rows . x >= 0}`.
///
/// Rays come back as primitive integer vectors. Fails with `Degenerate` when
/// the cone contains a line (row rank below the ambient dimension).
pub fn extreme_rays(rows: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let d = rows
        .first()
        .ok_or_else(|| Error::Degenerate("no constraint rows".into()))?
        .len();
    let (init, binv_cols) = initial_basis(rows, d)?;

    let mut rays: Vec<Vec<Rat>> = binv_cols.into_iter().map(|c| primitive(&c)).collect();
    let mut processed: Vec<usize> = init.clone();

    for ri in 0..rows.len() {
        if init.contains(&ri) {
            continue;
        }
        let row = &rows[ri];
        let vals: Vec<Rat> = rays.iter().map(|r| dot(row, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            processed.push(ri);
            continue;
        }
        let masks: Vec<Vec<u64>> = rays
            .iter()
            .map(|r| zero_mask(r, &processed, rows))
            .collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut next: Vec<Vec<Rat>> = (0..rays.len())
            .filter(|&i| !vals[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        for &p in &plus {
            for &q in &minus {
                if !adjacent(p, q, &masks) {
                    continue;
                }
                // Positive combination vanishing on the new row.
                let combo: Vec<Rat> = rays[p]
                    .iter()
                    .zip(&rays[q])
                    .map(|(xp, xq)| &vals[p] * xq - &vals[q] * xp)
                    .collect();
                if combo.iter().any(|x| !x.is_zero()) {
                    next.push(primitive(&combo));
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(ri);
    }
    rays.sort();
    Ok(rays)
}

/// Facets of `conv(generators) + cone(recession)` in `a . x >= h` form.
pub fn facets_of_hull(
    generators: &[Vec<Rat>],
    recession: &[Vec<Rat>],
) -> Result<Vec<(Vec<Rat>, Rat)>> {
    let n = generators
        .first()
        .ok_or_else(|| Error::Validation("no generators".into()))?
        .len();
    // Dual cone in R^{n+1}: (a, b) with a.g + b >= 0 and a.r >= 0.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for g in generators {
        let mut row = g.clone();
        row.push(Rat::one());
        rows.push(row);
    }
    for r in recession {
        let mut row = r.clone();
        row.push(Rat::zero());
        rows.push(row);
    }
    let mut facets = Vec::new();
    for ray in extreme_rays(&rows)? {
        let (a, b) = ray.split_at(n);
        if a.iter().all(Zero::is_zero) {
            continue; // the w = 0 facet of the homogenization
        }
        facets.push((a.to_vec(), -b[0].clone()));
    }
    facets.sort();
    Ok(facets)
}

/// Vertices and extreme recession rays of `{x : a_i . x >= h_i}`.
pub fn vertices_of(facets: &[(Vec<Rat>, Rat)]) -> Result<(Vec<Vec<Rat>>, Vec<Vec<Rat>>)> {
    let n = facets
        .first()
        .ok_or_else(|| Error::Validation("no facets".into()))?
        .0
        .len();
    // Homogenization cone in R^{n+1}: a.x - h w >= 0 plus w >= 0.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (a, h) in facets {
        let mut row = a.clone();
        row.push(-h);
        rows.push(row);
    }
    let mut w_row = vec![Rat::zero(); n];
    w_row.push(Rat::one());
    rows.push(w_row);

    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    for ray in extreme_rays(&rows)? {
        let (x, w) = ray.split_at(n);
        if w[0].is_zero() {
            recession.push(x.to_vec());
        } else {
            vertices.push(x.iter().map(|c| c / &w[0]).collect());
        }
    }
    vertices.sort();
    recession.sort();
    Ok((vertices, recession))
}

/// Zero set of `ray` over the processed rows, packed into 64-bit words.
fn zero_mask(ray: &[Rat], processed: &[usize], rows: &[Vec<Rat>]) -> Vec<u64> {
    let mut mask = vec![0u64; (processed.len() + 63) / 64];
    for (bit, &ri) in processed.iter().enumerate() {
        if dot(&rows[ri], ray).is_zero() {
            mask[bit / 64] |= 1 << (bit % 64);
        }
    }
    mask
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Combinatorial adjacency: no third ray's zero set contains the
/// intersection of the pair's zero sets.
fn adjacent(p: usize, q: usize, masks: &[Vec<u64>]) -> bool {
    let inter: Vec<u64> = masks[p]
        .iter()
        .zip(&masks[q])
        .map(|(x, y)| x & y)
        .collect();
    !(0..masks.len()).any(|s| s != p && s != q && is_subset(&inter, &masks[s]))
}

/// Picks `d` linearly independent rows and returns (their indices, columns
/// of the inverse of that submatrix) — the initial simplicial cone.
fn initial_basis(rows: &[Vec<Rat>], d: usize) -> Result<(Vec<usize>, Vec<Vec<Rat>>)> {
    // Gauss-Jordan on [B | I] where B is built row by row.
    let mut chosen: Vec<usize> = Vec::new();
    let mut mat: Vec<Vec<Rat>> = Vec::new(); // each row: d coeffs + d identity tail
    for (ri, row) in rows.iter().enumerate() {
        if chosen.len() == d {
            break;
        }
        let mut aug: Vec<Rat> = row.clone();
        aug.extend(vec![Rat::zero(); d]);
        aug[d + chosen.len()] = Rat::one();
        // Reduce against rows already in echelon form.
        for m in &mat {
            let lead = pivot_col(m, d);
            if !aug[lead].is_zero() {
                let f = aug[lead].clone() / m[lead].clone();
                for (x, y) in aug.iter_mut().zip(m) {
                    *x -= &f * y;
                }
            }
        }
        if aug[..d].iter().all(Zero::is_zero) {
            continue;
        }
        chosen.push(ri);
        mat.push(aug);
    }
    if chosen.len() < d {
        return Err(Error::Degenerate(
            "cone contains a line (constraint rows do not span)".into(),
        ));
    }
    // Finish Gauss-Jordan to get the inverse of the chosen submatrix.
    for i in 0..d {
        let lead = pivot_col(&mat[i], d);
        let inv = mat[i][lead].recip();
        for x in mat[i].iter_mut() {
            *x *= &inv;
        }
        let row_i = mat[i].clone();
        for (k, m) in mat.iter_mut().enumerate() {
            if k != i && !m[lead].is_zero() {
                let f = m[lead].clone();
                for (x, y) in m.iter_mut().zip(&row_i) {
                    *x -= &f * y;
                }
            }
        }
    }
    // Reorder rows so row i has its pivot in column i, then read off B^{-1}.
    let mut ordered = vec![Vec::new(); d];
    for m in &mat {
        ordered[pivot_col(m, d)] = m[d..].to_vec();
    }
    // ordered is B^{-1} in row form (B^{-1} B = I); its columns solve
    // B c_j = e_j, so c_j satisfies every chosen row with equality but one.
    let cols: Vec<Vec<Rat>> = (0..d)
        .map(|j| (0..d).map(|i| ordered[i][j].clone()).collect())
        .collect();
    Ok((chosen, cols))
}

fn pivot_col(row: &[Rat], d: usize) -> usize {
    (0..d)
        .find(|&j| !row[j].is_zero())
        .expect("nonzero row in echelon form")
}
