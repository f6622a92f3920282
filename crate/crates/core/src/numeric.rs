//! Numerical layer: the distance-to-critical function nu (smallest singular
//! value of the realified Jacobian), the Milnor-set residual, a multistart
//! sphere search for empirical asymptotic values, and inclusion
//! cross-checks between the numeric findings and the exact bounds.

use crate::bounds::{central_gradient, BoundReport};
use crate::error::{Error, Result};
use crate::poly::{NumericPoint, PolyMap, Polynomial, Setting};
use num::complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// One evaluation of nu along the search.
#[derive(Clone, Debug)]
pub struct NuSample {
    pub x: Vec<f64>,
    pub nu: f64,
    /// (1 + |x|) * nu, the decay-detection objective.
    pub scaled: f64,
    /// Value of the (realified) map at x.
    pub f_value: Vec<f64>,
    /// Index into the radius schedule.
    pub radius_index: usize,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub r0: f64,
    pub factor: f64,
    pub count: usize,
    pub restarts: usize,
    /// Acceptance tolerance on the scaled objective.
    pub tol_kinf: f64,
    /// Value-space radius used to merge samples into candidates.
    pub cluster_radius: f64,
    pub seed: u64,
    /// Soft cap on total descent iterations across the whole search.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let r0 = 10.0;
        SearchConfig {
            r0,
            factor: 10f64.sqrt(),
            count: 5,
            restarts: 20,
            tol_kinf: 1e-3 * (1.0 + r0),
            cluster_radius: 1e-2,
            seed: 0,
            budget: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    Kinf,
    S,
}

impl std::fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CandidateKind::Kinf => write!(f, "Kinf"),
            CandidateKind::S => write!(f, "S"),
        }
    }
}

/// An empirical asymptotic value: a cluster of low-objective samples whose
/// map values agree across at least two increasing radii. Evidence, not a
/// certificate.
#[derive(Clone, Debug)]
pub struct CandidateValue {
    pub center: Vec<f64>,
    pub kind: CandidateKind,
    pub evidence: Vec<NuSample>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub candidates: Vec<CandidateValue>,
    pub budget_exceeded: bool,
    /// All below-tolerance samples, including unclustered ones.
    pub samples: Vec<(CandidateKind, NuSample)>,
}

/// Smallest singular value of the realified Jacobian at x; the infimum
/// over unit covectors of the adjoint image norm.
pub fn rabier_nu(map: &PolyMap, x: &NumericPoint) -> Result<f64> {
    let j = map.jacobian(x)?;
    Ok(j.singular_values().as_slice().iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Independent evaluation of nu from the adjoint formulation: minimize
/// |dF^* phi| over sampled unit covectors, then refine the best sample by
/// inverse power iteration. For complex and mixed maps the covector is
/// a complex k-vector and the adjoint image is assembled from the
/// Wirtinger derivatives; the sampled minimum converges to nu from above.
pub fn nu_adjoint_sampled(map: &PolyMap, x: &NumericPoint, samples: usize, seed: u64) -> Result<f64> {
    let a = adjoint_matrix(map, x)?; // rows index covector coords, |phi^T A|
    let dim = a.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm_of = |phi: &nalgebra::DVector<f64>| -> f64 { (a.transpose() * phi).norm() };
    let mut best: Option<nalgebra::DVector<f64>> = None;
    let mut best_val = f64::INFINITY;
    for _ in 0..samples {
        let mut phi = nalgebra::DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0f64));
        let n = phi.norm();
        if n < 1e-9 {
            continue;
        }
        phi /= n;
        let v = norm_of(&phi);
        if v < best_val {
            best_val = v;
            best = Some(phi);
        }
    }
    let Some(mut phi) = best else { return Ok(0.0) };
    // Inverse power iteration on the Gram matrix drives the best sample to
    // the smallest singular direction; the shift keeps the solve well posed
    // when the Gram matrix is singular (nu = 0).
    let gram = &a * a.transpose();
    let scale = gram.diagonal().sum().max(1.0);
    let shifted = &gram + nalgebra::DMatrix::identity(dim, dim) * (scale * 1e-14);
    if let Some(chol) = shifted.clone().cholesky() {
        for _ in 0..200 {
            let mut next = chol.solve(&phi);
            let n = next.norm();
            if !n.is_finite() || n < 1e-300 {
                break;
            }
            next /= n;
            let done = (&next - &phi).norm() < 1e-14 || (&next + &phi).norm() < 1e-14;
            phi = next;
            if done {
                break;
            }
        }
        best_val = best_val.min(norm_of(&phi));
    }
    Ok(best_val)
}

/// Matrix A with rows indexed by the real covector coordinates such that
/// |dF^* phi| = |phi^T A|.
fn adjoint_matrix(map: &PolyMap, x: &NumericPoint) -> Result<nalgebra::DMatrix<f64>> {
    match (map.setting, x) {
        (Setting::Real, NumericPoint::Real(coords)) => {
            if coords.len() != map.n {
                return Err(Error::DimensionMismatch { expected: map.n, got: coords.len() });
            }
            Ok(map.jacobian_real(coords))
        }
        (_, NumericPoint::Complex(z)) => {
            if z.len() != map.n {
                return Err(Error::DimensionMismatch { expected: map.n, got: z.len() });
            }
            // Covector mu in C^k as (Re mu, Im mu); the adjoint image in
            // C^n ~ R^2n is sum_i conj(mu_i) df_i + mu_i conj(dbar f_i).
            let k = map.k();
            let n = map.n;
            let mut a = nalgebra::DMatrix::zeros(2 * k, 2 * n);
            for (i, f) in map.components.iter().enumerate() {
                let (dz, dzbar) = wirtinger_gradients(f, z);
                for j in 0..n {
                    // Contribution of mu_i = s + t*i to coordinate j:
                    // conj(mu_i) dz_j + mu_i conj(dzbar_j)
                    //   = s (dz_j + conj(dzbar_j)) + t (-i dz_j + i conj(dzbar_j)).
                    let re_part = dz[j] + dzbar[j].conj();
                    let im_part = Complex64::new(0.0, -1.0) * dz[j]
                        + Complex64::new(0.0, 1.0) * dzbar[j].conj();
                    a[(i, j)] = re_part.re;
                    a[(i, n + j)] = re_part.im;
                    a[(k + i, j)] = im_part.re;
                    a[(k + i, n + j)] = im_part.im;
                }
            }
            Ok(a)
        }
        _ => Err(Error::DimensionMismatch { expected: map.n, got: 0 }),
    }
}

/// Wirtinger gradients (df/dz_j, df/dzbar_j) of a complex or mixed
/// polynomial at z.
pub fn wirtinger_gradients(f: &Polynomial, z: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = f.n;
    let mut dz = vec![Complex64::new(0.0, 0.0); n];
    let mut dzbar = vec![Complex64::new(0.0, 0.0); n];
    for t in &f.terms {
        let c = t.coeff.to_complex();
        // Forward products of z^nu and conj(z)^mu with one factor removed.
        for j in 0..n {
            if t.nu[j] > 0 {
                let mut v = c * (t.nu[j] as f64);
                for (i, &e) in t.nu.iter().enumerate() {
                    let e = if i == j { e - 1 } else { e };
                    v *= z[i].powu(e);
                }
                for (i, &e) in t.mu.iter().enumerate() {
                    v *= z[i].conj().powu(e);
                }
                dz[j] += v;
            }
            if t.mu[j] > 0 {
                let mut v = c * (t.mu[j] as f64);
                for (i, &e) in t.nu.iter().enumerate() {
                    v *= z[i].powu(e);
                }
                for (i, &e) in t.mu.iter().enumerate() {
                    let e = if i == j { e - 1 } else { e };
                    v *= z[i].conj().powu(e);
                }
                dzbar[j] += v;
            }
        }
    }
    (dz, dzbar)
}

/// Residual of membership in the Milnor set: the (k'+1)-th singular value
/// of the realified Jacobian stacked with the unit radial row; zero iff
/// the point is a critical point of (F, distance-to-origin).
pub fn milnor_residual(map: &PolyMap, x: &NumericPoint) -> Result<f64> {
    let coords = x.realified();
    let r = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::OriginPoint);
    }
    let j = map.jacobian(x)?;
    let kp = j.nrows();
    let np = j.ncols();
    if kp + 1 > np {
        // The stack cannot have rank k'+1: the residual vanishes
        // identically (the Milnor set is everything).
        return Ok(0.0);
    }
    let mut stacked = nalgebra::DMatrix::zeros(kp + 1, np);
    stacked.view_mut((0, 0), (kp, np)).copy_from(&j);
    for c in 0..np {
        stacked[(kp, c)] = coords[c] / r;
    }
    let sv = stacked.singular_values();
    Ok(sv.as_slice().iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Multistart sphere-constrained search for empirical asymptotic values.
/// Kind Kinf minimizes (1+|x|) nu on spheres of increasing radius; kind S
/// minimizes the Milnor residual with map-value tracking. Below-tolerance
/// samples whose map values agree across at least two radii are clustered
/// into candidates. Deterministic for a fixed seed.
pub fn search_asymptotic_values(map: &PolyMap, cfg: &SearchConfig) -> Result<SearchResult> {
    let real = map.as_real()?;
    let np = real.n;
    let hash = {
        let digest = Sha256::digest(map.print().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().unwrap())
    };
    let mut samples: Vec<(CandidateKind, NuSample)> = Vec::new();
    let mut spent = 0usize;
    let mut budget_exceeded = false;

    'outer: for (kind_id, kind) in [CandidateKind::Kinf, CandidateKind::S].into_iter().enumerate() {
        for ridx in 0..cfg.count {
            let radius = cfg.r0 * cfg.factor.powi(ridx as i32);
            for restart in 0..cfg.restarts {
                if spent >= cfg.budget {
                    budget_exceeded = true;
                    break 'outer;
                }
                let seed = hash
                    .wrapping_mul(0x9e3779b97f4a7c15)
                    ^ (kind_id as u64).wrapping_mul(0xd6e8feb86659fd93)
                    ^ (ridx as u64).wrapping_mul(0xbf58476d1ce4e5b9)
                    ^ (restart as u64).wrapping_mul(0x94d049bb133111eb)
                    ^ cfg.seed;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut x: Vec<f64> = (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-9);
                for c in x.iter_mut() {
                    *c *= radius / norm;
                }
                let obj = |x: &[f64]| -> f64 {
                    let p = NumericPoint::Real(x.to_vec());
                    match kind {
                        CandidateKind::Kinf => {
                            let nu = rabier_nu(&real, &p).unwrap_or(f64::INFINITY);
                            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                            (1.0 + r) * nu
                        }
                        CandidateKind::S => {
                            milnor_residual(&real, &p).unwrap_or(f64::INFINITY)
                        }
                    }
                };
                let iters = 150usize;
                spent += iters;
                let mut fx = obj(&x);
                let mut step = radius * 0.1;
                for _ in 0..iters {
                    if fx == 0.0 {
                        break;
                    }
                    let grad = central_gradient(&obj, &x);
                    // Project onto the sphere tangent space.
                    let xn = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                    let dot = grad.iter().zip(&x).map(|(g, c)| g * c).sum::<f64>() / (xn * xn);
                    let tangent: Vec<f64> =
                        grad.iter().zip(&x).map(|(g, c)| g - dot * c).collect();
                    let tn = tangent.iter().map(|g| g * g).sum::<f64>().sqrt();
                    if tn < 1e-14 {
                        break;
                    }
                    let mut trial: Vec<f64> = x
                        .iter()
                        .zip(&tangent)
                        .map(|(c, t)| c - step * t / tn)
                        .collect();
                    let trn = trial.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
                    for c in trial.iter_mut() {
                        *c *= radius / trn;
                    }
                    let ft = obj(&trial);
                    if ft < fx {
                        x = trial;
                        fx = ft;
                        step = (step * 1.5).min(radius * 0.2);
                    } else {
                        step *= 0.5;
                        if step < radius * 1e-14 {
                            break;
                        }
                    }
                }
                let p = NumericPoint::Real(x.clone());
                let nu = rabier_nu(&real, &p)?;
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                let scaled = (1.0 + r) * nu;
                let accept = match kind {
                    CandidateKind::Kinf => scaled <= cfg.tol_kinf,
                    CandidateKind::S => fx <= 1e-6,
                };
                if accept {
                    samples.push((
                        kind,
                        NuSample {
                            f_value: real.eval_f64(&x),
                            x,
                            nu,
                            scaled,
                            radius_index: ridx,
                        },
                    ));
                }
            }
        }
    }

    let mut candidates = Vec::new();
    for kind in [CandidateKind::Kinf, CandidateKind::S] {
        candidates.extend(cluster(
            samples.iter().filter(|(k, _)| *k == kind).map(|(_, s)| s.clone()).collect(),
            kind,
            cfg.cluster_radius,
        ));
    }
    Ok(SearchResult { candidates, budget_exceeded, samples })
}

/// Greedy clustering by map value; a cluster becomes a candidate only when
/// it contains samples from at least two distinct radii (the asymptotic
/// signature: values must persist as the sphere grows).
fn cluster(samples: Vec<NuSample>, kind: CandidateKind, radius: f64) -> Vec<CandidateValue> {
    // Single-linkage union-find: values approaching the same limit from
    // different sides chain together through the larger radii.
    let n = samples.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist(&samples[i].f_value, &samples[j].f_value) <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<NuSample>> =
        std::collections::BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(samples[i].clone());
    }
    groups
        .into_values()
        .filter(|g| {
            let mut radii: Vec<usize> = g.iter().map(|s| s.radius_index).collect();
            radii.sort_unstable();
            radii.dedup();
            radii.len() >= 2
        })
        .map(|g| CandidateValue { center: value_center(&g), kind, evidence: g })
        .collect()
}

/// Cluster center: mean of the values observed at the largest radius,
/// where the asymptotic limit is best approximated.
fn value_center(g: &[NuSample]) -> Vec<f64> {
    let top = g.iter().map(|s| s.radius_index).max().unwrap();
    let sel: Vec<&NuSample> = g.iter().filter(|s| s.radius_index == top).collect();
    let dim = sel[0].f_value.len();
    let mut c = vec![0.0; dim];
    for s in &sel {
        for (ci, vi) in c.iter_mut().zip(&s.f_value) {
            *ci += vi;
        }
    }
    for ci in c.iter_mut() {
        *ci /= sel.len() as f64;
    }
    c
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Verification of the expected inclusions between numeric findings and the
/// exact bound: every S-candidate should sit near a Kinf-candidate, and
/// every Kinf-candidate should sit near the coordinate-subspace union or
/// the sampled discriminant evidence.
#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    pub s_in_kinf: bool,
    pub kinf_in_bound: bool,
    pub violations: Vec<String>,
}

pub fn cross_check_inclusions(
    map: &PolyMap,
    result: &SearchResult,
    bound: &BoundReport,
    cluster_radius: f64,
) -> CrossCheckReport {
    let tol = (2.0 * cluster_radius).max(0.05);
    let mut violations = Vec::new();
    let kinf: Vec<&CandidateValue> = result
        .candidates
        .iter()
        .filter(|c| c.kind == CandidateKind::Kinf)
        .collect();
    let mut s_in_kinf = true;
    for c in result.candidates.iter().filter(|c| c.kind == CandidateKind::S) {
        if !kinf.iter().any(|k| dist(&k.center, &c.center) <= tol) {
            s_in_kinf = false;
            violations.push(format!(
                "S-candidate at {:?} has no nearby Kinf-candidate",
                c.center
            ));
        }
    }
    let k = map.k();
    let pairs = map.setting != Setting::Real;
    let mut kinf_in_bound = true;
    for c in &kinf {
        // Distance to a piece {z_j = 0, j in J}: norm of the J-components
        // of the value (both real parts for complex components).
        let n_dist = bound
            .n_set
            .pieces
            .iter()
            .map(|piece| {
                piece
                    .iter()
                    .map(|&j| {
                        if pairs {
                            c.center[j].powi(2) + c.center[k + j].powi(2)
                        } else {
                            c.center[j].powi(2)
                        }
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        let a_dist = bound
            .a_set
            .iter()
            .flat_map(|d| d.disc_samples.iter())
            .map(|s| dist(s, &c.center))
            .fold(f64::INFINITY, f64::min);
        if n_dist.min(a_dist) > tol {
            kinf_in_bound = false;
            violations.push(format!(
                "Kinf-candidate at {:?} is {:.3e} away from N and {:.3e} from the \
                 sampled A evidence",
                c.center, n_dist, a_dist
            ));
        }
    }
    CrossCheckReport { s_in_kinf, kinf_in_bound, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::DualSubdivision;
    use crate::nondegeneracy::NdConfig;
    use crate::parse::parse_polynomial_map;

    fn pm(src: &str) -> PolyMap {
        parse_polynomial_map(src).unwrap()
    }

    #[test]
    fn nu_of_identity_is_one() {
        let map = pm("setting: real\nvars: x\nmap:\nf = x\n");
        let nu = rabier_nu(&map, &NumericPoint::Real(vec![3.7])).unwrap();
        assert!((nu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nu_of_quadric_at_ones() {
        let map = pm("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let nu = rabier_nu(&map, &NumericPoint::Real(vec![1.0, 1.0])).unwrap();
        assert!((nu - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nu_constant_for_linear_mixed_pair() {
        let map = pm(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1 + conj(z2)\ng2 = z1 - conj(z2)\n",
        );
        for z in [
            vec![Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)],
            vec![Complex64::new(-4.0, 0.1), Complex64::new(0.0, 3.0)],
        ] {
            let nu = rabier_nu(&map, &NumericPoint::Complex(z)).unwrap();
            assert!((nu - 2f64.sqrt()).abs() < 1e-9, "nu = {nu}");
        }
    }

    #[test]
    fn adjoint_formula_matches_singular_value() {
        let map = pm(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1^2 + conj(z2)\ng2 = z2 + z1*conj(z1)\n",
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let z: Vec<Complex64> = (0..2)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let p = NumericPoint::Complex(z);
            let nu = rabier_nu(&map, &p).unwrap();
            let sampled = nu_adjoint_sampled(&map, &p, 10_000, 1000 + trial).unwrap();
            assert!(
                (nu - sampled).abs() < 1e-6,
                "trial {trial}: nu {nu} vs sampled {sampled}"
            );
            assert!(sampled >= nu - 1e-9, "sampled minimum must bound nu from above");
        }
    }

    #[test]
    fn milnor_residual_on_quadric() {
        let map = pm("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        // The Milnor set is {xy = 0}: the stacked determinant of
        // (2x, -2y) and (x, y) is 4xy.
        let on = milnor_residual(&map, &NumericPoint::Real(vec![1.0, 0.0])).unwrap();
        assert!(on < 1e-12);
        let off = milnor_residual(&map, &NumericPoint::Real(vec![1.0, 1.0])).unwrap();
        assert!(off > 0.5);
        assert!(matches!(
            milnor_residual(&map, &NumericPoint::Real(vec![0.0, 0.0])),
            Err(Error::OriginPoint)
        ));
    }

    #[test]
    fn milnor_residual_vanishes_for_square_maps() {
        let map = pm(
            "setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\nf2 = y\nf3 = x*y + z\n",
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            if x.iter().all(|c| c.abs() < 1e-3) {
                continue;
            }
            let res = milnor_residual(&map, &NumericPoint::Real(x)).unwrap();
            assert_eq!(res, 0.0);
        }
    }

    #[test]
    fn curve_with_vanishing_value_yields_one_small_candidate() {
        let map = pm("setting: real\nvars: x y\nmap:\nf = x + x^2*y\n");
        let cfg = SearchConfig { restarts: 12, ..Default::default() };
        let res = search_asymptotic_values(&map, &cfg).unwrap();
        let kinf: Vec<&CandidateValue> = res
            .candidates
            .iter()
            .filter(|c| c.kind == CandidateKind::Kinf)
            .collect();
        assert_eq!(kinf.len(), 1, "candidates: {:?}", res.candidates);
        assert!(kinf[0].center[0].abs() <= 1e-2);
    }

    #[test]
    fn linear_mixed_pair_has_no_candidates() {
        let map = pm(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1 + conj(z2)\ng2 = z1 - conj(z2)\n",
        );
        let cfg = SearchConfig { restarts: 6, ..Default::default() };
        let res = search_asymptotic_values(&map, &cfg).unwrap();
        assert!(
            res.candidates.iter().all(|c| c.kind != CandidateKind::Kinf),
            "nu is constant sqrt(2): the scaled objective grows with the radius"
        );
    }

    #[test]
    fn cross_check_passes_on_curve_fixture() {
        let map = pm("setting: real\nvars: x y\nmap:\nf = x + x^2*y\n");
        let sub = DualSubdivision::build(&map).unwrap();
        let ndcfg = NdConfig::default();
        let nd = crate::nondegeneracy::is_nondegenerate_at_infinity(&map, &sub, &ndcfg);
        let bound = crate::bounds::kinf_bound(&map, &sub, nd.tag, &ndcfg).unwrap();
        let cfg = SearchConfig { restarts: 12, ..Default::default() };
        let res = search_asymptotic_values(&map, &cfg).unwrap();
        let cc = cross_check_inclusions(&map, &res, &bound, cfg.cluster_radius);
        assert!(cc.s_in_kinf && cc.kinf_in_bound, "violations: {:?}", cc.violations);
    }
}
