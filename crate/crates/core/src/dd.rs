//! Double description: extreme rays of pointed polyhedral cones given by
//! homogeneous inequalities, in exact rational arithmetic.

use crate::linalg::{primitive_integer, row_reduce};
use crate::scalar::Rat;
use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
struct Ray {
    dir: Vec<Rat>,
    /// Indices of the inequalities active (tight) on this ray.
    active: BTreeSet<usize>,
}

/// Extreme rays of the cone `{x : a.x >= 0 for all a in ineqs, e.x = 0 for
/// all e in eqs}`. The cone must be pointed; the rays are returned as
/// primitive integer vectors in a canonical order.
pub fn extreme_rays(dim: usize, ineqs: &[Vec<Rat>], eqs: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    // Equalities become inequality pairs.
    let mut rows: Vec<Vec<Rat>> = ineqs.to_vec();
    for e in eqs {
        rows.push(e.clone());
        rows.push(e.iter().map(|x| -x.clone()).collect());
    }
    let m = rows.len();

    // Initial simplicial cone from a maximal independent subset of rows.
    // Pointedness of the target cone means rank(rows) == dim; otherwise the
    // cone contains a line and we return no rays (callers guard against it).
    let mut red = rows.clone();
    let mut chosen: Vec<usize> = Vec::new();
    {
        // Track which original rows form a basis by reducing incrementally.
        let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
        for (i, r) in red.iter().enumerate() {
            let mut trial = basis_rows.clone();
            trial.push(r.clone());
            let mut t2 = trial.clone();
            if row_reduce(&mut t2).len() == trial.len() {
                basis_rows = trial;
                chosen.push(i);
                if basis_rows.len() == dim {
                    break;
                }
            }
        }
        if basis_rows.len() < dim {
            return Vec::new(); // cone not pointed
        }
        red = basis_rows;
    }

    // Rays of the initial cone: columns of the inverse of the basis matrix.
    let mut aug: Vec<Vec<Rat>> = red
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            for j in 0..dim {
                row.push(if i == j { Rat::from_integer(1.into()) } else { Rat::zero() });
            }
            row
        })
        .collect();
    row_reduce(&mut aug);
    let inv: Vec<Vec<Rat>> = (0..dim)
        .map(|j| (0..dim).map(|i| aug[i][dim + j].clone()).collect())
        .collect();

    let dot = |a: &[Rat], b: &[Rat]| -> Rat {
        let mut s = Rat::zero();
        for (x, y) in a.iter().zip(b) {
            s = s + x * y;
        }
        s
    };

    // Active sets only refer to inequalities processed so far; otherwise the
    // combinatorial adjacency test would see constraints not yet imposed.
    let mut processed: Vec<usize> = chosen.clone();
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            // `inv[j]` is the j-th column of the basis inverse: the ray on
            // which all basis inequalities but the j-th are tight.
            let dir: Vec<Rat> = inv[j].clone();
            let active = processed
                .iter()
                .copied()
                .filter(|&i| dot(&rows[i], &dir).is_zero())
                .collect();
            Ray { dir, active }
        })
        .collect();

    let remaining: Vec<usize> = (0..m).filter(|i| !chosen.contains(i)).collect();
    for &idx in &remaining {
        let a = &rows[idx];
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.dir)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.active.insert(idx);
                }
            }
            processed.push(idx);
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                let mut r = r.clone();
                if v.is_zero() {
                    r.active.insert(idx);
                }
                next.push(r);
            }
        }
        for (i, ri) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, rj) in rays.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                if !adjacent(&rays, i, j) {
                    continue;
                }
                // Combination lands on the hyperplane a.x = 0.
                let dir: Vec<Rat> = ri
                    .dir
                    .iter()
                    .zip(&rj.dir)
                    .map(|(x, y)| &vals[i] * y - &vals[j] * x)
                    .collect();
                let mut active: BTreeSet<usize> = BTreeSet::from([idx]);
                for &t in &processed {
                    if dot(&rows[t], &dir).is_zero() {
                        active.insert(t);
                    }
                }
                next.push(Ray { dir, active });
            }
        }
        rays = next;
        processed.push(idx);
    }

    let mut out: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for r in &rays {
        if let Some(p) = primitive_integer(&r.dir) {
            out.insert(p);
        }
    }
    out.into_iter().collect()
}

/// Combinatorial adjacency: rays i and j are adjacent iff no third ray's
/// active set contains the intersection of theirs.
fn adjacent(rays: &[Ray], i: usize, j: usize) -> bool {
    let common: BTreeSet<usize> = rays[i].active.intersection(&rays[j].active).copied().collect();
    for (t, r) in rays.iter().enumerate() {
        if t != i && t != j && common.is_subset(&r.active) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_i;

    fn r(v: i64) -> Rat {
        rat_i(v)
    }

    #[test]
    fn orthant_rays() {
        // {x >= 0, y >= 0}: rays e1, e2
        let rays = extreme_rays(2, &[vec![r(1), r(0)], vec![r(0), r(1)]], &[]);
        assert_eq!(
            rays,
            vec![
                vec![BigInt::from(0), BigInt::from(1)],
                vec![BigInt::from(1), BigInt::from(0)],
            ]
        );
    }

    #[test]
    fn halfplane_in_3d_with_equality() {
        // {z = 0, x >= 0, x - y >= 0}: rays (1,1,0)? no: cone x>=0, y<=x in plane.
        let rays = extreme_rays(
            3,
            &[vec![r(1), r(0), r(0)], vec![r(1), r(-1), r(0)]],
            &[vec![r(0), r(0), r(1)]],
        );
        // Extreme rays: (0,-1,0) and (1,1,0).
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&vec![BigInt::from(0), BigInt::from(-1), BigInt::from(0)]));
        assert!(rays.contains(&vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn octant_in_3d() {
        let rays = extreme_rays(
            3,
            &[
                vec![r(1), r(0), r(0)],
                vec![r(0), r(1), r(0)],
                vec![r(0), r(0), r(1)],
                vec![r(1), r(1), r(1)], // redundant
            ],
            &[],
        );
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn non_pointed_cone_rejected() {
        // Full plane: no inequalities of rank 2.
        let rays = extreme_rays(2, &[vec![r(1), r(0)]], &[]);
        assert!(rays.is_empty());
    }

    #[test]
    fn zero_cone() {
        // x >= 0, -x >= 0, y >= 0, -y >= 0: only the origin.
        let rays = extreme_rays(
            2,
            &[],
            &[vec![r(1), r(0)], vec![r(0), r(1)]],
        );
        assert!(rays.is_empty());
    }
}
