//! The dual subdivision C(F): convex polyhedral cones of directions with
//! some negative coordinate, on which the minimizing-face tuple of the
//! component Newton polyhedra is constant.
//!
//! Cells are the normal cones of the Minkowski sum of the component
//! polyhedra and the unit cube; the cube summand keeps coordinate signs
//! constant on every cell. Cells are enumerated by sign pattern and
//! per-component face choice, with exact LP feasibility pruning.

use crate::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::poly::PolyMap;
use crate::polytope::NewtonPolyhedron;
use crate::scalar::Rat;
use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// One closed convex cone of the subdivision, with its constant face tuple
/// and index-set classification.
#[derive(Clone, Debug)]
pub struct ConeRecord {
    pub id: usize,
    /// Primitive integer generators of the closed cone.
    pub rays: Vec<Vec<BigInt>>,
    /// Integer point in the relative interior (sum of the primitive rays);
    /// has a negative coordinate.
    pub interior_rep: Vec<BigInt>,
    /// Per-component face index into the corresponding polytope's lattice.
    pub face_tuple: Vec<usize>,
    /// Minimum of `l_p` over each component's support hull at the interior
    /// representative.
    pub d_supp: Vec<Rat>,
    /// Coordinate signs on the relative interior (-1, 0, +1).
    pub signs: Vec<i8>,
    pub i_sigma: BTreeSet<usize>,
    pub j_sigma: BTreeSet<usize>,
    pub i_sigma_c: BTreeSet<usize>,
    pub exceptional: bool,
    pub atypical: bool,
    /// H-representation: rows `a` with `a.p >= 0` on the cone.
    pub ineqs: Vec<Vec<BigInt>>,
    /// Rows `e` with `e.p = 0` on the cone.
    pub eqs: Vec<Vec<BigInt>>,
}

impl ConeRecord {
    /// Closed-cone membership.
    pub fn contains(&self, p: &[BigInt]) -> bool {
        self.ineqs.iter().all(|a| dot(a, p) >= BigInt::zero())
            && self.eqs.iter().all(|e| dot(e, p).is_zero())
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A deduplicated face tuple with the cones realizing it.
#[derive(Clone, Debug)]
pub struct TupleClass {
    pub face_tuple: Vec<usize>,
    pub cones: Vec<usize>,
}

#[derive(Debug)]
pub struct DualSubdivision {
    pub polyhedra: Vec<NewtonPolyhedron>,
    pub cones: Vec<ConeRecord>,
    pub tuple_classes: Vec<TupleClass>,
}

impl DualSubdivision {
    pub fn build(map: &PolyMap) -> Result<DualSubdivision> {
        let n = map.n;
        let polyhedra: Vec<NewtonPolyhedron> = map
            .components
            .iter()
            .map(NewtonPolyhedron::from_polynomial)
            .collect::<Result<_>>()?;
        let k = polyhedra.len();

        let mut cones: Vec<ConeRecord> = Vec::new();
        let mut signs = vec![0i8; n];
        enumerate_signs(0, &mut signs, &mut |s| {
            if !s.contains(&-1) {
                return Ok(());
            }
            let mut eqs: Vec<Vec<BigInt>> = Vec::new();
            let mut stricts: Vec<Vec<BigInt>> = Vec::new();
            for (i, &sg) in s.iter().enumerate() {
                let mut row = vec![BigInt::zero(); n];
                match sg {
                    0 => {
                        row[i] = BigInt::from(1);
                        eqs.push(row);
                    }
                    1 => {
                        row[i] = BigInt::from(1);
                        stricts.push(row);
                    }
                    _ => {
                        row[i] = BigInt::from(-1);
                        stricts.push(row);
                    }
                }
            }
            // Rays of the sign cone itself: +/- unit vectors on the
            // non-zero coordinates.
            let root_rays: Vec<Vec<BigInt>> = s
                .iter()
                .enumerate()
                .filter(|(_, &sg)| sg != 0)
                .map(|(i, &sg)| {
                    let mut r = vec![BigInt::zero(); n];
                    r[i] = BigInt::from(sg as i64);
                    r
                })
                .collect();
            let mut tuple = Vec::with_capacity(k);
            descend(
                n,
                &polyhedra,
                0,
                &mut eqs,
                &mut stricts,
                &root_rays,
                &mut tuple,
                s,
                &mut cones,
            )?;
            Ok(())
        })?;

        // Classify and identify.
        for (id, c) in cones.iter_mut().enumerate() {
            c.id = id;
        }
        let mut class_map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for c in &cones {
            class_map.entry(c.face_tuple.clone()).or_default().push(c.id);
        }
        let tuple_classes = class_map
            .into_iter()
            .map(|(face_tuple, cones)| TupleClass { face_tuple, cones })
            .collect();
        Ok(DualSubdivision { polyhedra, cones, tuple_classes })
    }

    /// Cones whose closed cone contains `p`.
    pub fn cones_containing(&self, p: &[BigInt]) -> Vec<&ConeRecord> {
        self.cones.iter().filter(|c| c.contains(p)).collect()
    }

    /// Remark 3.6: the inclusion N(F) ⊂ A^k \ (A^*)^k is strict iff some
    /// component index j is realized by no cone with J_σ = {j}. Returns the
    /// witness index (0-based) if so.
    pub fn strictness_check(&self) -> Result<(bool, Option<usize>)> {
        let k = self.polyhedra.len();
        if k < 2 {
            return Err(Error::NotApplicable("strictness characterisation needs k >= 2"));
        }
        for j in 0..k {
            let singleton = BTreeSet::from([j]);
            if !self.cones.iter().any(|c| c.j_sigma == singleton) {
                return Ok((true, Some(j)));
            }
        }
        Ok((false, None))
    }
}

fn enumerate_signs(
    i: usize,
    signs: &mut Vec<i8>,
    f: &mut impl FnMut(&[i8]) -> Result<()>,
) -> Result<()> {
    if i == signs.len() {
        return f(signs);
    }
    for s in [-1i8, 0, 1] {
        signs[i] = s;
        enumerate_signs(i + 1, signs, f)?;
    }
    Ok(())
}

/// DFS over per-component face choices with exact feasibility pruning.
/// `parent_rays` generate the closed cone cut out by the constraints
/// accumulated so far; they make two cheap necessary tests possible before
/// the exact double-description run:
/// - a new strict row must be positive on some parent ray (otherwise it is
///   nonpositive on the whole parent cone);
/// - a new equality row must either vanish on all parent rays or take both
///   signs (otherwise it is strictly one-signed on the relative interior).
#[allow(clippy::too_many_arguments)]
fn descend(
    n: usize,
    polyhedra: &[NewtonPolyhedron],
    level: usize,
    eqs: &mut Vec<Vec<BigInt>>,
    stricts: &mut Vec<Vec<BigInt>>,
    parent_rays: &[Vec<BigInt>],
    tuple: &mut Vec<usize>,
    signs: &[i8],
    out: &mut Vec<ConeRecord>,
) -> Result<()> {
    if level == polyhedra.len() {
        finish_cell(polyhedra, eqs, stricts, parent_rays, tuple, signs, out);
        return Ok(());
    }
    let poly = &polyhedra[level];
    'faces: for (fi, face) in poly.faces.iter().enumerate() {
        let base = face.slice.iter().next().expect("faces are nonempty");
        let mut new_eqs: Vec<Vec<BigInt>> = Vec::new();
        let mut new_stricts: Vec<Vec<BigInt>> = Vec::new();
        for g in &face.slice {
            if g != base {
                new_eqs.push(diff(g, base));
            }
        }
        for g in &poly.generators {
            if !face.slice.contains(g) {
                new_stricts.push(diff(g, base));
            }
        }
        for row in &new_stricts {
            if !parent_rays.iter().any(|r| dot(row, r).is_positive()) {
                continue 'faces;
            }
        }
        for row in &new_eqs {
            let mut pos = false;
            let mut neg = false;
            for r in parent_rays {
                let v = dot(row, r);
                pos |= v.is_positive();
                neg |= v.is_negative();
            }
            if pos != neg {
                continue 'faces;
            }
        }
        let added_eq = new_eqs.len();
        let added_strict = new_stricts.len();
        eqs.append(&mut new_eqs);
        stricts.append(&mut new_stricts);
        if let Some(rays) = relint_rays(n, eqs, stricts) {
            tuple.push(fi);
            descend(n, polyhedra, level + 1, eqs, stricts, &rays, tuple, signs, out)?;
            tuple.pop();
        }
        eqs.truncate(eqs.len() - added_eq);
        stricts.truncate(stricts.len() - added_strict);
    }
    Ok(())
}

fn diff(a: &[u32], b: &[u32]) -> Vec<BigInt> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| BigInt::from(x as i64 - y as i64))
        .collect()
}

/// Is there a point with all strict inequalities strictly positive and all
/// equalities zero? The sign constraints are always among the rows, so the
/// closed cone sits inside an orthant and is pointed; its relative interior
/// (with every inequality strict) is nonempty iff no inequality vanishes on
/// the whole cone, i.e. every strict row is positive on some extreme ray.
/// Returns the extreme rays when feasible.
fn relint_rays(n: usize, eqs: &[Vec<BigInt>], stricts: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let to_rat = |v: &[BigInt]| -> Vec<Rat> {
        v.iter().map(|x| Rat::from_integer(x.clone())).collect()
    };
    let ineqs_rat: Vec<Vec<Rat>> = stricts.iter().map(|s| to_rat(s)).collect();
    let eqs_rat: Vec<Vec<Rat>> = eqs.iter().map(|e| to_rat(e)).collect();
    let rays = extreme_rays(n, &ineqs_rat, &eqs_rat);
    if rays.is_empty() {
        return None;
    }
    let ok = stricts
        .iter()
        .all(|row| rays.iter().any(|r| dot(row, r).is_positive()));
    ok.then_some(rays)
}

fn finish_cell(
    polyhedra: &[NewtonPolyhedron],
    eqs: &[Vec<BigInt>],
    stricts: &[Vec<BigInt>],
    cell_rays: &[Vec<BigInt>],
    tuple: &[usize],
    signs: &[i8],
    out: &mut Vec<ConeRecord>,
) {
    let n = signs.len();
    let rays = cell_rays.to_vec();
    debug_assert!(!rays.is_empty(), "cells with nonempty relative interior have rays");
    let mut interior = vec![BigInt::zero(); n];
    for r in &rays {
        for (a, b) in interior.iter_mut().zip(r) {
            *a += b;
        }
    }
    debug_assert!(interior.iter().any(|x| x.is_negative()));

    let k = polyhedra.len();
    let mut d_supp = Vec::with_capacity(k);
    let mut face_tuple = Vec::with_capacity(k);
    for (j, poly) in polyhedra.iter().enumerate() {
        let q = poly
            .min_face(&interior)
            .expect("interior representative is nonzero");
        debug_assert_eq!(q.face, tuple[j], "face tuple must match the DFS choice");
        face_tuple.push(q.face);
        d_supp.push(q.d_supp);
    }
    let i_sigma: BTreeSet<usize> =
        (0..k).filter(|&j| d_supp[j].is_negative()).collect();
    let j_sigma: BTreeSet<usize> =
        (0..k).filter(|&j| d_supp[j].is_positive()).collect();
    let i_sigma_c: BTreeSet<usize> = (0..k).filter(|j| !i_sigma.contains(j)).collect();
    let exceptional = !j_sigma.is_empty();
    let atypical = j_sigma.is_empty() && !i_sigma_c.is_empty();
    out.push(ConeRecord {
        id: 0,
        rays,
        interior_rep: interior,
        face_tuple,
        d_supp,
        signs: signs.to_vec(),
        i_sigma,
        j_sigma,
        i_sigma_c,
        exceptional,
        atypical,
        ineqs: stricts.to_vec(),
        eqs: eqs.to_vec(),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial_map;

    fn fan(src: &str) -> DualSubdivision {
        DualSubdivision::build(&parse_polynomial_map(src).unwrap()).unwrap()
    }

    #[test]
    fn quadric_has_three_tuple_classes() {
        let s = fan("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        // Distinct minimizing faces off the nonnegative orthant: vertex
        // (2,0), vertex (0,2), and the edge between them.
        let mut kinds = BTreeSet::new();
        for tc in &s.tuple_classes {
            let face = &s.polyhedra[0].faces[tc.face_tuple[0]];
            kinds.insert(face.slice.clone());
        }
        assert_eq!(kinds.len(), 3);
        assert!(kinds.contains(&BTreeSet::from([vec![2, 0]])));
        assert!(kinds.contains(&BTreeSet::from([vec![0, 2]])));
        assert!(kinds.contains(&BTreeSet::from([vec![2, 0], vec![0, 2]])));
    }

    #[test]
    fn ex54_all_cones_have_full_i_sigma() {
        let s = fan(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1 + conj(z2)\ng2 = z1 - conj(z2)\n",
        );
        for c in &s.cones {
            assert_eq!(c.i_sigma, BTreeSet::from([0, 1]));
            assert!(!c.exceptional);
            assert!(!c.atypical);
        }
    }

    #[test]
    fn ex55_classifications() {
        let s = fan(
            "setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\nf2 = y\nf3 = x*y + z\n",
        );
        // p = (-1,1,1): d-values (-1, +1, 0): I={0}, J={1}, exceptional.
        let p: Vec<BigInt> = [-1i64, 1, 1].iter().map(|&v| BigInt::from(v)).collect();
        let hits = s.cones_containing(&p);
        assert!(!hits.is_empty());
        let interior_hit = hits
            .iter()
            .find(|c| {
                // p should be interior to exactly the cell whose tuple
                // matches direct queries; any containing cone works for the
                // classification checks below when its tuple matches.
                (0..3).all(|j| {
                    s.polyhedra[j].min_face(&p).unwrap().face == c.face_tuple[j]
                })
            })
            .expect("some containing cone carries p's own face tuple");
        assert_eq!(interior_hit.i_sigma, BTreeSet::from([0]));
        assert_eq!(interior_hit.j_sigma, BTreeSet::from([1]));
        assert!(interior_hit.exceptional);

        // p = (2,-1,1): d-values (0,-1,+1): J={2}, exceptional.
        let p: Vec<BigInt> = [2i64, -1, 1].iter().map(|&v| BigInt::from(v)).collect();
        let hit = s
            .cones_containing(&p)
            .into_iter()
            .find(|c| (0..3).all(|j| s.polyhedra[j].min_face(&p).unwrap().face == c.face_tuple[j]))
            .unwrap();
        assert_eq!(hit.j_sigma, BTreeSet::from([2]));
        assert_eq!(hit.i_sigma, BTreeSet::from([1]));
        assert!(hit.exceptional);
    }

    #[test]
    fn ex55_strictness_witness_is_first_component() {
        let s = fan(
            "setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\nf2 = y\nf3 = x*y + z\n",
        );
        let (strict, witness) = s.strictness_check().unwrap();
        assert!(strict);
        assert_eq!(witness, Some(0));
    }

    #[test]
    fn coordinate_pair_is_not_strict() {
        let s = fan("setting: real\nvars: x y\nmap:\nf1 = x\nf2 = y\n");
        let (strict, witness) = s.strictness_check().unwrap();
        assert!(!strict);
        assert_eq!(witness, None);
    }

    #[test]
    fn coverage_of_random_directions() {
        use rand::{Rng, SeedableRng};
        let s = fan("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let p: Vec<BigInt> =
                (0..2).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
            if p.iter().min().unwrap() >= &BigInt::zero() {
                continue;
            }
            checked += 1;
            let hits = s.cones_containing(&p);
            assert!(!hits.is_empty(), "direction {p:?} not covered");
            // Every containing cone whose relative interior holds p gives
            // p's own tuple; at least one containing cone must.
            assert!(hits.iter().any(|c| {
                s.polyhedra[0].min_face(&p).unwrap().face == c.face_tuple[0]
            }));
        }
    }

    #[test]
    fn tuple_constancy_at_interior_reps() {
        let s = fan(
            "setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\nf2 = y\nf3 = x*y + z\n",
        );
        for c in &s.cones {
            for (j, poly) in s.polyhedra.iter().enumerate() {
                assert_eq!(poly.min_face(&c.interior_rep).unwrap().face, c.face_tuple[j]);
            }
        }
    }
}
