//! Newton polyhedra: exact lattice polytopes with full face lattices and
//! directional minimizing-face queries.

use crate::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::linalg::{in_convex_hull, primitive_integer, row_reduce};
use crate::poly::{Polynomial, MAX_DIM, MAX_SUPPORT};
use crate::scalar::Rat;
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A face of a Newton polyhedron, stored by its support slice on the
/// generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Generators lying on the face.
    pub slice: BTreeSet<Vec<u32>>,
    /// Integer direction whose argmin over the generators is exactly
    /// `slice` (all-zero for the polyhedron itself).
    pub witness: Vec<BigInt>,
    pub contains_origin: bool,
    /// Affine dimension of the face.
    pub dim: usize,
}

/// The Newton polyhedron `conv({0} ∪ supp(f))` with its face lattice.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    pub n: usize,
    pub generators: BTreeSet<Vec<u32>>,
    pub vertices: BTreeSet<Vec<u32>>,
    /// All nonempty faces, the whole polyhedron included (it is the entry
    /// with the zero witness).
    pub faces: Vec<Face>,
    pub dim: usize,
    slice_index: BTreeMap<Vec<Vec<u32>>, usize>,
}

/// Result of a directional minimizing-face query.
#[derive(Clone, Debug)]
pub struct FaceQueryResult {
    pub face: usize,
    /// Minimum of `l_p` over the convex hull of supp(f).
    pub d_supp: Rat,
    /// Minimum of `l_p` over the Newton polyhedron: `min(0, d_supp)`.
    pub d_gamma: Rat,
}

fn to_rat_point(v: &[u32]) -> Vec<Rat> {
    v.iter().map(|&e| Rat::from_integer(BigInt::from(e))).collect()
}

fn dot_big(p: &[BigInt], v: &[u32]) -> BigInt {
    p.iter().zip(v).map(|(a, &b)| a * BigInt::from(b)).sum()
}

impl NewtonPolyhedron {
    pub fn from_polynomial(f: &Polynomial) -> Result<Self> {
        if f.terms.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        if f.n > MAX_DIM {
            return Err(Error::DimensionTooLarge { what: "variables", value: f.n, limit: MAX_DIM });
        }
        let supp = f.support();
        if supp.len() > MAX_SUPPORT {
            return Err(Error::DimensionTooLarge {
                what: "support size",
                value: supp.len(),
                limit: MAX_SUPPORT,
            });
        }
        let mut generators = supp;
        generators.insert(vec![0; f.n]);
        Self::from_generators(f.n, generators)
    }

    pub fn from_generators(n: usize, generators: BTreeSet<Vec<u32>>) -> Result<Self> {
        let gens: Vec<Vec<u32>> = generators.iter().cloned().collect();
        let rat_gens: Vec<Vec<Rat>> = gens.iter().map(|g| to_rat_point(g)).collect();

        // Hull vertices by exact LP membership tests.
        let mut vertices = BTreeSet::new();
        for (i, g) in gens.iter().enumerate() {
            let others: Vec<Vec<Rat>> = rat_gens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            if !in_convex_hull(&rat_gens[i], &others) {
                vertices.insert(g.clone());
            }
        }

        let dim = affine_dim(&rat_gens);
        let faces = build_face_lattice(n, &gens, dim)?;
        let mut slice_index = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            slice_index.insert(slice_key(&f.slice), i);
        }
        Ok(NewtonPolyhedron { n, generators, vertices, faces, dim, slice_index })
    }

    /// Faces not containing the origin: the Newton boundary at infinity.
    pub fn faces_at_infinity(&self) -> Vec<&Face> {
        self.faces.iter().filter(|f| !f.contains_origin).collect()
    }

    /// The maximal face of the polyhedron minimizing `l_p`, plus the minima
    /// over the support hull and over the polyhedron.
    pub fn min_face(&self, p: &[BigInt]) -> Result<FaceQueryResult> {
        if p.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroDirection);
        }
        if p.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: p.len() });
        }
        let origin = vec![0u32; self.n];
        let mut min_all: Option<BigInt> = None;
        let mut min_supp: Option<BigInt> = None;
        for g in &self.generators {
            let v = dot_big(p, g);
            if min_all.as_ref().map_or(true, |m| v < *m) {
                min_all = Some(v.clone());
            }
            if *g != origin && min_supp.as_ref().map_or(true, |m| v < *m) {
                min_supp = Some(v);
            }
        }
        let min_all = min_all.unwrap();
        let slice: BTreeSet<Vec<u32>> = self
            .generators
            .iter()
            .filter(|g| dot_big(p, g) == min_all)
            .cloned()
            .collect();
        let face = *self
            .slice_index
            .get(&slice_key(&slice))
            .expect("argmin slice is a face of the lattice");
        let d_supp = Rat::from_integer(min_supp.expect("polynomial has support"));
        let d_gamma = if d_supp.is_negative() { d_supp.clone() } else { Rat::zero() };
        Ok(FaceQueryResult { face, d_supp, d_gamma })
    }

    pub fn face_by_slice(&self, slice: &BTreeSet<Vec<u32>>) -> Option<usize> {
        self.slice_index.get(&slice_key(slice)).copied()
    }
}

fn slice_key(s: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    s.iter().cloned().collect()
}

fn affine_dim(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    crate::linalg::rank(&rows)
}

/// Enumerates all nonempty faces: facets from the dual cone of the lifted
/// generators, then closure under intersection.
fn build_face_lattice(n: usize, gens: &[Vec<u32>], dim: usize) -> Result<Vec<Face>> {
    let rat_gens: Vec<Vec<Rat>> = gens.iter().map(|g| to_rat_point(g)).collect();
    let all_slice: BTreeSet<Vec<u32>> = gens.iter().cloned().collect();
    let origin = vec![0u32; n];

    let mut faces: Vec<Face> = vec![Face {
        slice: all_slice.clone(),
        witness: vec![BigInt::zero(); n],
        contains_origin: all_slice.contains(&origin),
        dim,
    }];
    if dim == 0 {
        return Ok(faces);
    }

    // Coordinates within the affine hull.
    let base = rat_gens[0].clone();
    let mut dirs: Vec<Vec<Rat>> = Vec::new();
    for p in &rat_gens[1..] {
        let d: Vec<Rat> = p.iter().zip(&base).map(|(a, b)| a - b).collect();
        let mut trial = dirs.clone();
        trial.push(d.clone());
        if crate::linalg::rank(&trial) == trial.len() {
            dirs = trial;
            if dirs.len() == dim {
                break;
            }
        }
    }
    // u-coordinates: solve B u = p - base for each generator (B columns are
    // the chosen directions).
    let coords: Vec<Vec<Rat>> = rat_gens
        .iter()
        .map(|p| {
            let rhs: Vec<Rat> = p.iter().zip(&base).map(|(a, b)| a - b).collect();
            solve_exact(&dirs, &rhs)
        })
        .collect();

    // Facet normals of the full-dimensional polytope in u-coordinates are
    // the extreme rays of {(q, b) : q.u + b >= 0 for all generators u}.
    let ineqs: Vec<Vec<Rat>> = coords
        .iter()
        .map(|u| {
            let mut row = u.clone();
            row.push(Rat::one());
            row
        })
        .collect();
    let rays = extreme_rays(dim + 1, &ineqs, &[]);

    let mut seen: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    seen.insert(slice_key(&all_slice));
    let mut facet_faces: Vec<Face> = Vec::new();
    for ray in rays {
        let q: Vec<Rat> = ray[..dim].iter().map(|x| Rat::from_integer(x.clone())).collect();
        // Lift the functional q (on u-space) to an integer direction on the
        // ambient space: w with w.x = q.u(x) + const on the affine hull.
        let w = lift_functional(&dirs, &q, n);
        let Some(w) = w else { continue };
        // Argmin slice under w.
        let vals: Vec<BigInt> = gens.iter().map(|g| dot_big(&w, g)).collect();
        let min = vals.iter().min().unwrap().clone();
        let slice: BTreeSet<Vec<u32>> = gens
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == min)
            .map(|(g, _)| g.clone())
            .collect();
        if slice.len() == gens.len() {
            continue; // the trivial inequality, not a proper facet
        }
        if seen.insert(slice_key(&slice)) {
            let fdim = affine_dim(
                &slice.iter().map(|g| to_rat_point(g)).collect::<Vec<_>>(),
            );
            facet_faces.push(Face {
                contains_origin: slice.contains(&origin),
                dim: fdim,
                witness: w,
                slice,
            });
        }
    }

    // Closure under intersection; the witness of an intersection is the sum
    // of the witnesses of all facets containing it.
    let mut work: Vec<BTreeSet<Vec<u32>>> = facet_faces.iter().map(|f| f.slice.clone()).collect();
    let mut all_slices: BTreeSet<Vec<Vec<u32>>> = work.iter().map(|s| slice_key(s)).collect();
    let mut frontier = work.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &work {
                let inter: BTreeSet<Vec<u32>> = a.intersection(b).cloned().collect();
                if inter.is_empty() {
                    continue;
                }
                if all_slices.insert(slice_key(&inter)) {
                    next.push(inter);
                }
            }
        }
        work.extend(next.iter().cloned());
        frontier = next;
    }

    for slice in &work {
        if facet_faces.iter().any(|f| f.slice == *slice) {
            continue;
        }
        let mut witness = vec![BigInt::zero(); n];
        for f in &facet_faces {
            if slice.is_subset(&f.slice) {
                for (wi, fi) in witness.iter_mut().zip(&f.witness) {
                    *wi += fi;
                }
            }
        }
        let fdim = affine_dim(&slice.iter().map(|g| to_rat_point(g)).collect::<Vec<_>>());
        faces.push(Face {
            contains_origin: slice.contains(&origin),
            dim: fdim,
            witness,
            slice: slice.clone(),
        });
    }
    faces.extend(facet_faces);
    faces.sort_by(|a, b| (a.dim, slice_key(&a.slice)).cmp(&(b.dim, slice_key(&b.slice))));
    Ok(faces)
}

/// Solves `A x = b` exactly for a consistent system with independent
/// columns given as `cols`.
fn solve_exact(cols: &[Vec<Rat>], rhs: &[Rat]) -> Vec<Rat> {
    let n = rhs.len();
    let d = cols.len();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    let mut x = vec![Rat::zero(); d];
    for (r, &c) in pivots.iter().enumerate() {
        if c < d {
            x[c] = aug[r][d].clone();
        }
    }
    x
}

/// Integer direction on the ambient space inducing the functional `q` on
/// affine-hull coordinates: `w = B (B^T B)^{-1} q` made primitive.
fn lift_functional(dirs: &[Vec<Rat>], q: &[Rat], n: usize) -> Option<Vec<BigInt>> {
    let d = dirs.len();
    // Solve (B^T B) y = q.
    let mut gram: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rat> = (0..d)
                .map(|j| {
                    let mut s = Rat::zero();
                    for t in 0..n {
                        s = s + &dirs[i][t] * &dirs[j][t];
                    }
                    s
                })
                .collect();
            row.push(q[i].clone());
            row
        })
        .collect();
    row_reduce(&mut gram);
    let y: Vec<Rat> = (0..d).map(|i| gram[i][d].clone()).collect();
    let w: Vec<Rat> = (0..n)
        .map(|t| {
            let mut s = Rat::zero();
            for i in 0..d {
                s = s + &dirs[i][t] * &y[i];
            }
            s
        })
        .collect();
    primitive_integer(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial_map;

    fn poly(src: &str) -> Polynomial {
        parse_polynomial_map(src).unwrap().components[0].clone()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_of_quadric() {
        let f = poly("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(
            p.vertices,
            BTreeSet::from([vec![0, 0], vec![2, 0], vec![0, 2]])
        );
        // Faces: 3 vertices + 3 edges + the triangle itself.
        assert_eq!(p.faces.len(), 7);
        let at_inf: Vec<_> = p.faces_at_infinity();
        assert_eq!(at_inf.len(), 3);
    }

    #[test]
    fn segment_for_single_variable() {
        let f = poly("setting: real\nvars: x y z\nmap:\nf = y\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.faces.len(), 3); // two vertices and the segment
        let at_inf = p.faces_at_infinity();
        assert_eq!(at_inf.len(), 1);
        assert_eq!(at_inf[0].slice, BTreeSet::from([vec![0, 1, 0]]));
    }

    #[test]
    fn ex55_f1_is_a_simplex() {
        let f = poly("setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        // Oracle: the three nonzero generators plus the origin are affinely
        // independent, so all four are vertices.
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.dim, 3);
        // 3-simplex: 4 + 6 + 4 + 1 faces.
        assert_eq!(p.faces.len(), 15);
    }

    #[test]
    fn min_face_edge_and_vertex() {
        let f = poly("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        let q = p.min_face(&big(&[-1, -1])).unwrap();
        assert_eq!(q.d_supp, crate::scalar::rat_i(-2));
        assert_eq!(
            p.faces[q.face].slice,
            BTreeSet::from([vec![2, 0], vec![0, 2]])
        );
        let q = p.min_face(&big(&[-1, 0])).unwrap();
        assert_eq!(q.d_supp, crate::scalar::rat_i(-2));
        assert_eq!(p.faces[q.face].slice, BTreeSet::from([vec![2, 0]]));
    }

    #[test]
    fn min_face_on_ex55_f2() {
        let f = poly("setting: real\nvars: x y z\nmap:\nf2 = y\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        let q = p.min_face(&big(&[2, -1, 1])).unwrap();
        assert_eq!(q.d_supp, crate::scalar::rat_i(-1));
        assert_eq!(p.faces[q.face].slice, BTreeSet::from([vec![0, 1, 0]]));
    }

    #[test]
    fn trichotomy_on_random_directions() {
        use rand::{Rng, SeedableRng};
        let f = poly("setting: real\nvars: x y\nmap:\nf = x^2 - y^2 + x*y\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let origin = vec![0u32; 2];
        for _ in 0..100 {
            let dir: Vec<BigInt> =
                (0..2).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
            if dir.iter().all(|x| x.is_zero()) {
                continue;
            }
            let q = p.min_face(&dir).unwrap();
            let face = &p.faces[q.face];
            // Brute-force oracle over the support.
            let supp = f.support();
            let min = supp.iter().map(|v| dot_big(&dir, v)).min().unwrap();
            assert_eq!(q.d_supp, Rat::from_integer(min));
            if q.d_supp.is_negative() {
                assert!(!face.slice.contains(&origin));
            } else if q.d_supp.is_positive() {
                assert_eq!(face.slice, BTreeSet::from([origin.clone()]));
            } else {
                assert!(face.slice.contains(&origin) && face.slice.len() > 1);
            }
        }
    }

    #[test]
    fn witness_recovers_slice() {
        let f = poly("setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\n");
        let p = NewtonPolyhedron::from_polynomial(&f).unwrap();
        for face in &p.faces {
            if face.witness.iter().all(|x| x.is_zero()) {
                continue;
            }
            let min = p.generators.iter().map(|g| dot_big(&face.witness, g)).min().unwrap();
            let slice: BTreeSet<Vec<u32>> = p
                .generators
                .iter()
                .filter(|g| dot_big(&face.witness, g) == min)
                .cloned()
                .collect();
            assert_eq!(slice, face.slice);
        }
    }
}
