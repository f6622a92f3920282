//! Bounds on the set of asymptotic critical values: the coordinate-subspace
//! union N(F) from exceptional cones, sampled discriminant evidence A(F)
//! from atypical cones, the combined bound report, and the global
//! invertibility verdict for square maps.

use crate::error::Result;
use crate::fan::DualSubdivision;
use crate::nondegeneracy::{NdConfig, VerdictTag};
use crate::poly::{PolyMap, Polynomial, Setting};
use crate::scalar::{rat_to_f64, Rat};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

/// Union of coordinate subspaces {z_j = 0 for all j in piece}, collected
/// from the exceptional cones and reduced to inclusion-minimal pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSet {
    /// Inclusion-minimal index sets (0-based component indices).
    pub pieces: Vec<BTreeSet<usize>>,
    /// Strictness of the inclusion into the union of coordinate hyperplanes
    /// (only defined for k >= 2): (is_strict, witness component).
    pub strictness: Option<(bool, Option<usize>)>,
}

impl NSet {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Euclidean distance from a value point to the union of pieces
    /// (distance to {z_j = 0, j in J} is the norm of the J-coordinates).
    pub fn distance(&self, value: &[f64]) -> Option<f64> {
        self.pieces
            .iter()
            .map(|piece| {
                piece
                    .iter()
                    .map(|&j| value[j] * value[j])
                    .sum::<f64>()
                    .sqrt()
            })
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }
}

pub fn compute_n(map: &PolyMap, sub: &DualSubdivision) -> NSet {
    let mut raw: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for tc in &sub.tuple_classes {
        let cone = &sub.cones[tc.cones[0]];
        if cone.exceptional {
            raw.insert(cone.j_sigma.clone());
        }
    }
    let pieces: Vec<BTreeSet<usize>> = raw
        .iter()
        .filter(|p| !raw.iter().any(|q| *q != **p && q.is_subset(p)))
        .cloned()
        .collect();
    let strictness = if map.k() >= 2 {
        sub.strictness_check().ok()
    } else {
        None
    };
    NSet { pieces, strictness }
}

/// One atypical face tuple class with sampled critical-value evidence for
/// the projection components.
#[derive(Clone, Debug)]
pub struct AtypicalDescriptor {
    pub cone_id: usize,
    pub face_tuple: Vec<usize>,
    /// Components whose face restriction cuts out the zero set G.
    pub zero_components: Vec<usize>,
    /// Components restricted to G whose critical values are sampled.
    pub projection_components: Vec<usize>,
    /// Face restrictions for both groups, in cut-out order then projection
    /// order (original setting).
    pub system: Vec<Polynomial>,
    /// Sampled near-critical values of the projection components, as
    /// realified value vectors.
    pub disc_samples: Vec<Vec<f64>>,
    /// True when the search budget ran without finding critical points.
    pub no_critical_points_found: bool,
}

pub fn compute_a(
    map: &PolyMap,
    sub: &DualSubdivision,
    cfg: &NdConfig,
) -> Vec<AtypicalDescriptor> {
    let mut out = Vec::new();
    for tc in &sub.tuple_classes {
        let cone = &sub.cones[tc.cones[0]];
        if !cone.atypical {
            continue;
        }
        let zero_components: Vec<usize> = cone.i_sigma.iter().copied().collect();
        let projection_components: Vec<usize> = cone.i_sigma_c.iter().copied().collect();
        let mut faces = Vec::new();
        for &j in zero_components.iter().chain(&projection_components) {
            let face = &sub.polyhedra[j].faces[cone.face_tuple[j]];
            faces.push(
                map.components[j]
                    .face_restriction(&face.slice)
                    .expect("face slices index into the support"),
            );
        }
        let samples = sample_discriminant(map, &faces, zero_components.len(), cone.id, cfg);
        out.push(AtypicalDescriptor {
            cone_id: cone.id,
            face_tuple: cone.face_tuple.clone(),
            zero_components,
            projection_components,
            system: faces,
            no_critical_points_found: samples.is_empty(),
            disc_samples: samples,
        });
    }
    out
}

/// Realify a list of face restrictions into a flat real system.
fn realified_system(map: &PolyMap, faces: &[Polynomial]) -> (Vec<Polynomial>, usize, bool) {
    match map.setting {
        Setting::Real => (faces.to_vec(), map.n, false),
        _ => {
            let mut polys = Vec::new();
            for f in faces {
                let (g, h) = f.realify();
                polys.push(g);
                polys.push(h);
            }
            (polys, 2 * map.n, true)
        }
    }
}

fn in_torus(x: &[f64], m: usize, pairs: bool, delta: f64) -> bool {
    if pairs {
        let n = m / 2;
        (0..n).all(|i| x[i].hypot(x[n + i]) >= delta)
    } else {
        x.iter().all(|c| c.abs() >= delta)
    }
}

/// Coordinate floor for discriminant sampling. Objectives built from
/// weighted-homogeneous faces decay towards the coordinate hyperplanes
/// without any genuine critical point there, so the search stays away from
/// them; sampled evidence is explicitly incomplete.
const SAMPLE_FLOOR: f64 = 0.01;

/// Multistart search for rank-deficient points of the stacked face system
/// on the toroidal zero set; records the projection values at hits.
fn sample_discriminant(
    map: &PolyMap,
    faces: &[Polynomial],
    zero_count: usize,
    cone_id: usize,
    cfg: &NdConfig,
) -> Vec<Vec<f64>> {
    let (polys, m, pairs) = realified_system(map, faces);
    let real_zero_count = if pairs { 2 * zero_count } else { zero_count };
    let need = polys.len(); // required rank for a regular point
    let partials: Vec<Vec<Polynomial>> = polys
        .iter()
        .map(|f| (0..m).map(|i| f.partial(i)).collect())
        .collect();
    let jac = |x: &[f64]| {
        let mut mt = nalgebra::DMatrix::zeros(polys.len(), m);
        for (r, row) in partials.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                mt[(r, c)] = p.eval_f64(x);
            }
        }
        mt
    };
    let sigma_need = |x: &[f64]| -> f64 {
        if need > m.min(polys.len()) {
            return 0.0;
        }
        jac(x)
            .singular_values()
            .as_slice()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    };
    let obj = |x: &[f64]| -> f64 {
        let mut v: f64 = polys[..real_zero_count]
            .iter()
            .map(|f| f.eval_f64(x).powi(2))
            .sum();
        v += sigma_need(x).powi(2);
        v
    };
    let hash = {
        let digest = Sha256::digest(map.print().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().unwrap())
    };

    let mut samples: Vec<Vec<f64>> = Vec::new();
    for restart in 0..cfg.restarts {
        let seed = hash
            .wrapping_mul(0x9e3779b97f4a7c15)
            ^ (cone_id as u64).wrapping_mul(0xbf58476d1ce4e5b9)
            ^ (restart as u64).wrapping_mul(0x94d049bb133111eb)
            ^ cfg.seed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: Vec<f64> = (0..m)
            .map(|_| {
                let mut v: f64 = rng.gen_range(-2.0..2.0);
                while v.abs() < 0.2 {
                    v = rng.gen_range(-2.0..2.0);
                }
                v
            })
            .collect();
        let mut fx = obj(&x);
        let mut step = 0.1;
        for _ in 0..cfg.iterations {
            let grad = central_gradient(&obj, &x);
            let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gn < 1e-14 {
                break;
            }
            let trial: Vec<f64> =
                x.iter().zip(&grad).map(|(xi, gi)| xi - step * gi / gn).collect();
            let ft = obj(&trial);
            if ft < fx && in_torus(&trial, m, pairs, SAMPLE_FLOOR) {
                x = trial;
                fx = ft;
                step = (step * 1.5).min(0.5);
            } else {
                step *= 0.5;
                if step < 1e-16 {
                    break;
                }
            }
            if fx < 1e-16 {
                break;
            }
        }
        let zero_res: f64 = polys[..real_zero_count]
            .iter()
            .map(|f| f.eval_f64(&x).abs())
            .fold(0.0, f64::max);
        if zero_res <= 1e-6
            && sigma_need(&x) <= 1e-6
            && in_torus(&x, m, pairs, SAMPLE_FLOOR)
        {
            let value: Vec<f64> =
                polys[real_zero_count..].iter().map(|f| f.eval_f64(&x)).collect();
            let dup = samples.iter().any(|s| {
                s.iter()
                    .zip(&value)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    < 1e-4
            });
            if !dup {
                samples.push(value);
            }
        }
    }
    samples
}

pub(crate) fn central_gradient(obj: &impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-6 * (1.0 + x[i].abs());
        xp[i] = x[i] + h;
        let fp = obj(&xp);
        xp[i] = x[i] - h;
        let fm = obj(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// The combined bound on asymptotic critical values.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n_set: NSet,
    pub a_set: Vec<AtypicalDescriptor>,
    pub nd_tag: VerdictTag,
    pub all_convenient: bool,
    pub kinf_bound_empty: bool,
    pub narrative: Vec<String>,
}

pub fn kinf_bound(
    map: &PolyMap,
    sub: &DualSubdivision,
    nd_tag: VerdictTag,
    cfg: &NdConfig,
) -> Result<BoundReport> {
    let n_set = compute_n(map, sub);
    let a_set = compute_a(map, sub, cfg);
    let all_convenient = map
        .components
        .iter()
        .map(|f| f.is_convenient())
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let mut narrative = Vec::new();
    if !map.effective_variables().iter().all(|&e| e) {
        narrative.push(
            "warning: some variables never occur; the bound assumes an effective map"
                .to_string(),
        );
    }
    let kinf_bound_empty =
        all_convenient && nd_tag == VerdictTag::NonDegenerate && n_set.is_empty() && a_set.is_empty();
    if kinf_bound_empty {
        narrative.push(
            "all components convenient and non-degenerate at infinity: the set of \
             asymptotic critical values is empty"
                .to_string(),
        );
    } else {
        match nd_tag {
            VerdictTag::NonDegenerate => narrative.push(
                "asymptotic critical values are contained in the union of the \
                 exceptional coordinate subspaces and the sampled atypical evidence"
                    .to_string(),
            ),
            _ => narrative.push(format!(
                "non-degeneracy is {nd_tag}: the containment of asymptotic critical \
                 values in N union A is conditional and not established"
            )),
        }
        if !n_set.is_empty() {
            narrative.push(format!(
                "N is not empty: {} coordinate-subspace piece(s)",
                n_set.pieces.len()
            ));
        }
    }
    Ok(BoundReport { n_set, a_set, nd_tag, all_convenient, kinf_bound_empty, narrative })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertibilityTag {
    CertifiedDiffeo,
    ConditionalDiffeo,
    SingularityFound,
    Inconclusive,
    NotApplicable,
}

impl std::fmt::Display for InvertibilityTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InvertibilityTag::CertifiedDiffeo => "CertifiedDiffeo",
            InvertibilityTag::ConditionalDiffeo => "ConditionalDiffeo",
            InvertibilityTag::SingularityFound => "SingularityFound",
            InvertibilityTag::Inconclusive => "Inconclusive",
            InvertibilityTag::NotApplicable => "NotApplicable",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct InvertibilityVerdict {
    pub tag: InvertibilityTag,
    pub evidence: Vec<String>,
    /// Constant value of the (realified) Jacobian determinant, when constant.
    pub det_constant: Option<Rat>,
    /// A point where the determinant (numerically) vanishes.
    pub singular_witness: Option<Vec<f64>>,
}

/// Global invertibility for square maps: the symbolic Jacobian determinant
/// decides the singular set exactly when constant; a nonconstant
/// determinant gets a bounded numeric zero search. The final verdict
/// combines the singular-set status with convenience, non-degeneracy, and
/// optional empirical evidence that no asymptotic critical values exist.
pub fn invertibility_verdict(
    map: &PolyMap,
    nd_tag: Option<VerdictTag>,
    all_convenient: bool,
    empirical_kinf_empty: Option<bool>,
    cfg: &NdConfig,
) -> Result<InvertibilityVerdict> {
    let mut evidence = Vec::new();
    if map.n != map.k() {
        evidence.push(format!(
            "source and target dimensions differ (n = {}, k = {})",
            map.n,
            map.k()
        ));
        return Ok(InvertibilityVerdict {
            tag: InvertibilityTag::NotApplicable,
            evidence,
            det_constant: None,
            singular_witness: None,
        });
    }
    let real = map.as_real()?;
    let det = real.jacobian_determinant()?;
    let det_terms_nonconst: usize = det
        .terms
        .iter()
        .filter(|t| t.combined().iter().any(|&e| e > 0))
        .count();
    let is_constant = det_terms_nonconst == 0;

    if is_constant {
        let c = det.constant_term();
        evidence.push(format!("Jacobian determinant is the constant {c}"));
        if c.is_zero() {
            evidence.push("the map is singular everywhere".to_string());
            return Ok(InvertibilityVerdict {
                tag: InvertibilityTag::SingularityFound,
                evidence,
                det_constant: Some(c.re),
                singular_witness: Some(vec![0.0; real.n]),
            });
        }
        evidence.push("singular set is empty (certified)".to_string());
        let nd_ok = nd_tag == Some(VerdictTag::NonDegenerate);
        if all_convenient && nd_ok {
            evidence.push(
                "all components convenient and non-degenerate at infinity".to_string(),
            );
            return Ok(InvertibilityVerdict {
                tag: InvertibilityTag::CertifiedDiffeo,
                evidence,
                det_constant: Some(c.re),
                singular_witness: None,
            });
        }
        if empirical_kinf_empty == Some(true) {
            evidence.push(
                "no asymptotic critical values found empirically (not a certificate)"
                    .to_string(),
            );
            return Ok(InvertibilityVerdict {
                tag: InvertibilityTag::ConditionalDiffeo,
                evidence,
                det_constant: Some(c.re),
                singular_witness: None,
            });
        }
        evidence.push(
            "no evidence about asymptotic critical values was supplied".to_string(),
        );
        return Ok(InvertibilityVerdict {
            tag: InvertibilityTag::Inconclusive,
            evidence,
            det_constant: Some(c.re),
            singular_witness: None,
        });
    }

    evidence.push("Jacobian determinant is nonconstant".to_string());
    // Bounded multistart zero search on the determinant.
    let obj = |x: &[f64]| det.eval_f64(x).powi(2);
    let hash = {
        let digest = Sha256::digest(map.print().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().unwrap())
    };
    for restart in 0..cfg.restarts.max(8) {
        let mut rng = ChaCha8Rng::seed_from_u64(
            hash ^ (restart as u64).wrapping_mul(0x94d049bb133111eb) ^ cfg.seed,
        );
        let mut x: Vec<f64> = (0..real.n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut fx = obj(&x);
        let mut step = 0.2;
        for _ in 0..cfg.iterations {
            let grad = central_gradient(&obj, &x);
            let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gn < 1e-14 || fx < 1e-24 {
                break;
            }
            let trial: Vec<f64> =
                x.iter().zip(&grad).map(|(xi, gi)| xi - step * gi / gn).collect();
            let ft = obj(&trial);
            if ft < fx {
                x = trial;
                fx = ft;
                step = (step * 1.5).min(0.5);
            } else {
                step *= 0.5;
                if step < 1e-16 {
                    break;
                }
            }
        }
        let scale: f64 = det
            .terms
            .iter()
            .map(|t| {
                let mut v = rat_to_f64(&t.coeff.re).abs();
                for (i, &e) in t.nu.iter().enumerate() {
                    v *= x[i].abs().powi(e as i32);
                }
                v
            })
            .sum::<f64>()
            + 1.0;
        if det.eval_f64(&x).abs() <= 1e-9 * scale {
            evidence.push(format!("determinant vanishes numerically at {x:?}"));
            return Ok(InvertibilityVerdict {
                tag: InvertibilityTag::SingularityFound,
                evidence,
                det_constant: None,
                singular_witness: Some(x),
            });
        }
    }
    evidence.push(
        "bounded zero search found no determinant zero; singular-set status unknown"
            .to_string(),
    );
    Ok(InvertibilityVerdict {
        tag: InvertibilityTag::Inconclusive,
        evidence,
        det_constant: None,
        singular_witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial_map;
    use crate::scalar::rat_i;

    fn setup(src: &str) -> (PolyMap, DualSubdivision) {
        let map = parse_polynomial_map(src).unwrap();
        let sub = DualSubdivision::build(&map).unwrap();
        (map, sub)
    }

    const EX55: &str =
        "setting: real\nvars: x y z\nmap:\nf1 = x + y*z + x*y^2\nf2 = y\nf3 = x*y + z\n";

    #[test]
    fn three_component_fixture_n_pieces() {
        let (map, sub) = setup(EX55);
        let n = compute_n(&map, &sub);
        assert_eq!(
            n.pieces,
            vec![BTreeSet::from([1usize]), BTreeSet::from([2usize])]
        );
        assert_eq!(n.strictness, Some((true, Some(0))));
    }

    #[test]
    fn convenient_maps_have_empty_n() {
        let (map, sub) = setup("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let n = compute_n(&map, &sub);
        assert!(n.is_empty());
    }

    #[test]
    fn nonconvenient_univariate_component_gives_origin() {
        let (map, sub) = setup("setting: real\nvars: x y\nmap:\nf = x + x^2*y\n");
        let n = compute_n(&map, &sub);
        assert_eq!(n.pieces, vec![BTreeSet::from([0usize])]);
    }

    #[test]
    fn quadric_has_no_atypical_cones() {
        let (map, sub) = setup("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n");
        let a = compute_a(&map, &sub, &NdConfig::default());
        assert!(a.is_empty());
    }

    #[test]
    fn nonconvenient_curve_atypical_without_critical_points() {
        let (map, sub) = setup("setting: real\nvars: x y\nmap:\nf = x + x^2*y\n");
        let a = compute_a(&map, &sub, &NdConfig::default());
        // The direction class with face conv{0, (2,1)} is atypical; its
        // projection x^2 y is a monomial with no torus critical points.
        assert!(!a.is_empty());
        for d in &a {
            assert!(d.no_critical_points_found, "unexpected samples: {:?}", d.disc_samples);
        }
    }

    #[test]
    fn mixed_pair_bound_is_empty() {
        let (map, sub) = setup(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1 + conj(z2)\ng2 = z1 - conj(z2)\n",
        );
        let cfg = NdConfig::default();
        let nd = crate::nondegeneracy::is_nondegenerate_at_infinity(&map, &sub, &cfg);
        let rep = kinf_bound(&map, &sub, nd.tag, &cfg).unwrap();
        assert!(rep.kinf_bound_empty);
        assert!(rep.n_set.is_empty());
        assert!(rep.a_set.is_empty());
    }

    #[test]
    fn mixed_pair_is_certified_diffeo() {
        let map = parse_polynomial_map(
            "setting: mixed\nvars: z1 z2\nmap:\ng1 = z1 + conj(z2)\ng2 = z1 - conj(z2)\n",
        )
        .unwrap();
        let v = invertibility_verdict(
            &map,
            Some(VerdictTag::NonDegenerate),
            true,
            None,
            &NdConfig::default(),
        )
        .unwrap();
        assert_eq!(v.tag, InvertibilityTag::CertifiedDiffeo);
        assert_eq!(v.det_constant, Some(rat_i(-4)));
    }

    #[test]
    fn three_component_fixture_is_conditional_diffeo() {
        let map = parse_polynomial_map(EX55).unwrap();
        let v = invertibility_verdict(
            &map,
            Some(VerdictTag::Unknown),
            false,
            Some(true),
            &NdConfig::default(),
        )
        .unwrap();
        assert_eq!(v.tag, InvertibilityTag::ConditionalDiffeo);
        assert_eq!(v.det_constant, Some(rat_i(1)));
    }

    #[test]
    fn univariate_square_has_singularity_at_zero() {
        let map =
            parse_polynomial_map("setting: real\nvars: x\nmap:\nf = x^2\n").unwrap();
        let v = invertibility_verdict(&map, None, true, None, &NdConfig::default())
            .unwrap();
        assert_eq!(v.tag, InvertibilityTag::SingularityFound);
        let w = v.singular_witness.unwrap();
        assert!(w[0].abs() < 1e-4, "witness near 0, got {w:?}");
    }

    #[test]
    fn rectangular_map_is_not_applicable() {
        let map = parse_polynomial_map("setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n")
            .unwrap();
        let v = invertibility_verdict(&map, None, true, None, &NdConfig::default())
            .unwrap();
        assert_eq!(v.tag, InvertibilityTag::NotApplicable);
    }
}
