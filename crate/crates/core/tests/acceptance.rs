//! Acceptance suite: nine end-to-end criteria covering the example
//! fixtures, the randomized property suites and CLI-level reproducibility.
//! Each test prints a single PASS line on success; a failed assertion
//! yields the corresponding FAIL line instead.

use atinfinity::nondegeneracy::{compare_definitions, is_nondegenerate_at_infinity, NdConfig};
use atinfinity::numeric::{
    cross_check_inclusions, nu_adjoint_sampled, rabier_nu, search_asymptotic_values,
    CandidateKind, SearchConfig,
};
use atinfinity::{
    compute_a, compute_n, invertibility_verdict, kinf_bound, parse_polynomial_map,
    run_pipeline, Config, DualSubdivision, InvertibilityTag, NumericPoint, PolyMap,
    VerdictTag,
};
use num::bigint::BigInt;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn load(name: &str) -> PolyMap {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    parse_polynomial_map(&text).unwrap()
}

fn setup(name: &str) -> (PolyMap, DualSubdivision) {
    let map = load(name);
    let sub = DualSubdivision::build(&map).unwrap();
    (map, sub)
}

/// Runs `body`, printing a single PASS/FAIL line for the criterion, and
/// re-raises the panic so the test harness records the failure.
fn criterion(number: usize, description: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {number}: PASS - {description}"),
        Err(e) => {
            println!("criterion {number}: FAIL - {description}");
            std::panic::resume_unwind(e);
        }
    }
}

#[test]
fn criterion_1_quadric_form_comparison() {
    criterion(
        1,
        "x^2 - y^2 is convenient, non-degenerate in the singular-locus form, \
         degenerate in the zero-set form with a confirmed torus witness",
        || {
            let (map, sub) = setup("ex53.map");
            assert!(map.components[0].is_convenient().unwrap());
            let rep = compare_definitions(&map, &sub, &NdConfig::default()).unwrap();
            assert_eq!(rep.singular_locus.tag, VerdictTag::NonDegenerate);
            assert_eq!(rep.zero_set.tag, VerdictTag::Degenerate);
            let (_, w) = rep.zero_set.witness().expect("degenerate verdict carries a witness");
            assert!(w.confirmed, "witness must be confirmed by exact re-evaluation");
            assert!(w.sys_residual <= 1e-9, "system residual {} > 1e-9", w.sys_residual);
            if let Some(r) = w.rank_residual {
                assert!(r <= 1e-9, "rank residual {r} > 1e-9");
            }
        },
    );
}

#[test]
fn criterion_2_mixed_pair_certified_diffeo() {
    criterion(
        2,
        "mixed pair (z1 + conj(z2), z1 - conj(z2)): convenient, non-degenerate, \
         constant realified Jacobian determinant -4, CertifiedDiffeo, and all \
         realified components non-convenient",
        || {
            let (map, sub) = setup("ex54.map");
            for f in &map.components {
                assert!(f.is_convenient().unwrap());
            }
            let cfg = NdConfig::default();
            let nd = is_nondegenerate_at_infinity(&map, &sub, &cfg);
            assert_eq!(nd.tag, VerdictTag::NonDegenerate);
            let v = invertibility_verdict(&map, Some(nd.tag), true, None, &cfg).unwrap();
            assert_eq!(v.tag, InvertibilityTag::CertifiedDiffeo);
            let det = v.det_constant.expect("constant determinant");
            assert_eq!(det, atinfinity::scalar::rat_i(-4));
            let real = map.realify().unwrap();
            assert_eq!(real.k(), 4);
            for f in &real.components {
                assert!(!f.is_convenient().unwrap(), "realified components are non-convenient");
            }
        },
    );
}

#[test]
fn criterion_3_three_component_conditional_diffeo() {
    criterion(
        3,
        "(x + yz + xy^2, y, xy + z): determinant 1, N pieces {{2},{3}}, strictness \
         witness j = 1, empty numeric search to radius 1000, ConditionalDiffeo",
        || {
            let (map, sub) = setup("ex55.map");
            let cfg = NdConfig::default();
            let n = compute_n(&map, &sub);
            // 0-based component indices: pieces {1} and {2} are the second
            // and third components.
            let expected: Vec<BTreeSet<usize>> =
                vec![BTreeSet::from([1]), BTreeSet::from([2])];
            assert_eq!(n.pieces, expected);
            let (strict, witness) = sub.strictness_check().unwrap();
            assert!(strict);
            assert_eq!(witness, Some(0), "strictness witness is the first component");

            let scfg = SearchConfig::default();
            assert!(scfg.r0 * scfg.factor.powi(scfg.count as i32 - 1) >= 1e3 - 1.0);
            assert!(scfg.restarts >= 20);
            let res = search_asymptotic_values(&map, &scfg).unwrap();
            assert!(
                !res.candidates.iter().any(|c| c.kind == CandidateKind::Kinf),
                "no empirical asymptotic critical value below tolerance"
            );

            let nd = is_nondegenerate_at_infinity(&map, &sub, &cfg);
            let v = invertibility_verdict(&map, Some(nd.tag), false, Some(true), &cfg).unwrap();
            assert_eq!(v.tag, InvertibilityTag::ConditionalDiffeo);
            let det = v.det_constant.expect("constant determinant");
            assert_eq!(det, atinfinity::scalar::rat_i(1));
        },
    );
}

/// Generates a random map source: k components over n variables, up to
/// `max_terms` terms each, individual exponents <= 2 and no constant term.
fn random_map_source(rng: &mut ChaCha8Rng, n: usize, k: usize, max_terms: usize) -> String {
    let vars: Vec<String> = (0..n).map(|i| format!("x{}", i + 1)).collect();
    let mut out = format!("setting: real\nvars: {}\nmap:\n", vars.join(" "));
    for j in 0..k {
        // Exponents are capped at 2, so only 3^n - 1 distinct nonzero
        // monomials exist; don't ask for more.
        let available = 3usize.pow(n as u32) - 1;
        let terms = rng.gen_range(1..=max_terms.min(available));
        let mut monomials = BTreeSet::new();
        while monomials.len() < terms {
            let expo: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            if expo.iter().all(|&e| e == 0) {
                continue;
            }
            monomials.insert(expo);
        }
        let body: Vec<String> = monomials
            .iter()
            .map(|expo| {
                let coeff: i64 = *[-3, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
                let mono: Vec<String> = expo
                    .iter()
                    .zip(&vars)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                format!("{coeff}*{}", mono.join("*"))
            })
            .collect();
        out.push_str(&format!("f{} = {}\n", j + 1, body.join(" + ")));
    }
    out
}

/// Brute-force oracle: does some integer direction with min p_i < 0 give a
/// component whose support minimum is positive (face at the origin only)?
fn oracle_has_exceptional_direction(map: &PolyMap, box_radius: i64) -> bool {
    let n = map.n;
    let supports: Vec<Vec<Vec<i64>>> = map
        .components
        .iter()
        .map(|f| {
            f.support()
                .iter()
                .map(|nu| nu.iter().map(|&e| e as i64).collect())
                .collect()
        })
        .collect();
    let mut p = vec![-box_radius; n];
    loop {
        if p.iter().any(|&x| x < 0) && p.iter().any(|&x| x != 0) {
            let exceptional = supports.iter().any(|supp| {
                supp.iter()
                    .map(|nu| nu.iter().zip(&p).map(|(a, b)| a * b).sum::<i64>())
                    .min()
                    .expect("nonempty support")
                    > 0
            });
            if exceptional {
                return true;
            }
        }
        // Odometer increment over the box [-r, r]^n.
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            p[i] += 1;
            if p[i] <= box_radius {
                break;
            }
            p[i] = -box_radius;
            i += 1;
        }
    }
}

#[test]
fn criterion_4_n_set_empty_iff_convenient() {
    criterion(
        4,
        "N(F) is empty exactly when all components are convenient (50 random maps \
         vs direction-enumeration oracle), and N(f) = {0} for non-convenient k = 1 maps",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(40);
            let mut done = 0;
            while done < 50 {
                let n = rng.gen_range(1..=4usize);
                let k = rng.gen_range(1..=n);
                let src = random_map_source(&mut rng, n, k, 6);
                let Ok(map) = parse_polynomial_map(&src) else { continue };
                let sub = DualSubdivision::build(&map).unwrap();
                let nset = compute_n(&map, &sub);
                let all_convenient = map
                    .components
                    .iter()
                    .all(|f| f.is_convenient().unwrap());
                // With individual exponents <= 2, a direction with -1 on a
                // missing axis and 3 elsewhere already certifies a
                // non-convenient component, so a box of radius 4 contains a
                // witness direction whenever one exists.
                let oracle = oracle_has_exceptional_direction(&map, 4);
                assert_eq!(
                    nset.is_empty(),
                    all_convenient,
                    "N emptiness vs convenience mismatch for:\n{src}"
                );
                assert_eq!(
                    oracle,
                    !nset.is_empty(),
                    "oracle vs computed N mismatch for:\n{src}"
                );
                done += 1;
            }

            for src in [
                "setting: real\nvars: x y\nmap:\nf = x + x^2*y\n",
                "setting: real\nvars: x y\nmap:\nf = x*y\n",
                "setting: real\nvars: x y z\nmap:\nf = x^2*y + x*y^2 + z*x\n",
            ] {
                let map = parse_polynomial_map(src).unwrap();
                let sub = DualSubdivision::build(&map).unwrap();
                let nset = compute_n(&map, &sub);
                assert_eq!(nset.pieces, vec![BTreeSet::from([0])], "for {src}");
            }
        },
    );
}

#[test]
fn criterion_5_convenient_nondegenerate_bound_is_empty() {
    criterion(
        5,
        "convenient + non-degenerate fixtures have empty N and A and an empty \
         asymptotic-critical-value bound",
        || {
            for name in ["ex53.map", "ex54.map"] {
                let (map, sub) = setup(name);
                let cfg = NdConfig::default();
                let nd = is_nondegenerate_at_infinity(&map, &sub, &cfg);
                assert_eq!(nd.tag, VerdictTag::NonDegenerate, "{name}");
                assert!(map.components.iter().all(|f| f.is_convenient().unwrap()));
                let nset = compute_n(&map, &sub);
                let aset = compute_a(&map, &sub, &cfg);
                assert!(nset.is_empty(), "{name}: N must be empty");
                assert!(aset.is_empty(), "{name}: A must be empty");
                let bound = kinf_bound(&map, &sub, nd.tag, &cfg).unwrap();
                assert!(bound.kinf_bound_empty, "{name}: bound must be empty");
            }
        },
    );
}

/// Random convenient real map with n = k = 2: pure powers on both axes in
/// each component plus up to two extra small terms.
fn random_convenient_source(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::from("setting: real\nvars: x y\nmap:\n");
    for j in 0..2 {
        let coeffs = [-2i64, -1, 1, 2];
        let ax = coeffs[rng.gen_range(0..4)];
        let ay = coeffs[rng.gen_range(0..4)];
        let dx = rng.gen_range(1..=3u32);
        let dy = rng.gen_range(1..=3u32);
        let mut body = vec![
            format!("{ax}*x^{dx}"),
            format!("{ay}*y^{dy}"),
        ];
        let mut used = BTreeSet::from([(dx, 0u32), (0u32, dy)]);
        for _ in 0..rng.gen_range(0..=2usize) {
            let c = coeffs[rng.gen_range(0..4)];
            let ex = rng.gen_range(0..=2u32);
            let ey = rng.gen_range(0..=2u32);
            if (ex, ey) == (0, 0) || !used.insert((ex, ey)) {
                continue;
            }
            body.push(format!("{c}*x^{ex}*y^{ey}"));
        }
        out.push_str(&format!("f{} = {}\n", j + 1, body.join(" + ")));
    }
    out
}

#[test]
fn criterion_6_square_convenient_forms_agree() {
    criterion(
        6,
        "on random convenient real 2x2 maps the two non-degeneracy forms agree \
         whenever both decide, and every zero-set witness transfers to a \
         Jacobian kernel vector with residual <= 1e-9",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(60);
            let cfg = NdConfig::default();
            let mut decided_pairs = 0;
            let mut transfers = 0;
            for _ in 0..30 {
                let src = random_convenient_source(&mut rng);
                let map = parse_polynomial_map(&src).unwrap();
                let sub = DualSubdivision::build(&map).unwrap();
                let rep = compare_definitions(&map, &sub, &cfg).unwrap();
                let a = rep.singular_locus.tag;
                let b = rep.zero_set.tag;
                if a != VerdictTag::Unknown && b != VerdictTag::Unknown {
                    decided_pairs += 1;
                    assert_eq!(a, b, "form disagreement for:\n{src}");
                }
                if let Some(t) = &rep.transfer {
                    transfers += 1;
                    assert!(
                        t.max_residual <= 1e-9,
                        "transfer residual {} > 1e-9 for:\n{src}",
                        t.max_residual
                    );
                }
            }
            assert!(decided_pairs >= 15, "only {decided_pairs} decided pairs");
            let _ = transfers;
        },
    );
}

#[test]
fn criterion_7_fan_coverage_and_tuple_constancy() {
    criterion(
        7,
        "1000 random negative-somewhere integer directions per fixture each lie in \
         a cone whose stored face tuple matches the direct minimizing-face tuple",
        || {
            for name in ["ex53.map", "ex54.map", "ex55.map", "curve.map"] {
                let (map, sub) = setup(name);
                let n = map.n;
                let mut rng = ChaCha8Rng::seed_from_u64(70);
                let mut tried = 0;
                while tried < 1000 {
                    let p: Vec<BigInt> =
                        (0..n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
                    if !p.iter().any(|x| x < &BigInt::from(0)) {
                        continue;
                    }
                    tried += 1;
                    let direct: Vec<usize> = sub
                        .polyhedra
                        .iter()
                        .map(|poly| poly.min_face(&p).unwrap().face)
                        .collect();
                    let containing = sub.cones_containing(&p);
                    assert!(!containing.is_empty(), "{name}: direction {p:?} uncovered");
                    assert!(
                        containing.iter().any(|c| c.face_tuple == direct),
                        "{name}: no containing cone stores the direct tuple for {p:?}"
                    );
                }
            }
        },
    );
}

fn random_mixed_source(rng: &mut ChaCha8Rng) -> String {
    let coeffs = [-2i64, -1, 1, 2];
    let mut out = String::from("setting: mixed\nvars: z1 z2\nmap:\n");
    for j in 0..2 {
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(1..=3usize) {
            let c = coeffs[rng.gen_range(0..4)];
            let mut factors = Vec::new();
            for v in ["z1", "z2"] {
                let holo = rng.gen_range(0..=1u32);
                let anti = rng.gen_range(0..=1u32);
                for _ in 0..holo {
                    factors.push(v.to_string());
                }
                for _ in 0..anti {
                    factors.push(format!("conj({v})"));
                }
            }
            if factors.is_empty() {
                continue;
            }
            body.push(format!("{c}*{}", factors.join("*")));
        }
        if body.is_empty() {
            body.push("z1".to_string());
        }
        out.push_str(&format!("g{} = {}\n", j + 1, body.join(" + ")));
    }
    out
}

#[test]
fn criterion_8_nu_and_curve_candidate() {
    criterion(
        8,
        "adjoint-formula nu agrees with the realified smallest singular value to \
         1e-6; nu = sqrt(2) on the mixed pair; x + x^2*y yields exactly one \
         empirical asymptotic value near 0 and the inclusion cross-check passes",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(80);
            let mut compared = 0;
            while compared < 15 {
                let src = random_mixed_source(&mut rng);
                let Ok(map) = parse_polynomial_map(&src) else { continue };
                for trial in 0..3 {
                    let z: Vec<Complex64> = (0..2)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
                        })
                        .collect();
                    let x = NumericPoint::Complex(z);
                    let a = rabier_nu(&map, &x).unwrap();
                    let b = nu_adjoint_sampled(&map, &x, 10_000, 1234 + trial).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-6,
                        "nu mismatch {a} vs {b} for:\n{src}"
                    );
                }
                compared += 1;
            }

            let pair = load("ex54.map");
            for trial in 0..10 {
                let z: Vec<Complex64> = (0..2)
                    .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                    .collect();
                let nu = rabier_nu(&pair, &NumericPoint::Complex(z)).unwrap();
                assert!(
                    (nu - 2f64.sqrt()).abs() <= 1e-9,
                    "trial {trial}: nu {nu} != sqrt(2)"
                );
            }

            let curve = load("curve.map");
            let scfg = SearchConfig::default();
            let res = search_asymptotic_values(&curve, &scfg).unwrap();
            let kinf: Vec<_> =
                res.candidates.iter().filter(|c| c.kind == CandidateKind::Kinf).collect();
            assert_eq!(kinf.len(), 1, "expected exactly one empirical value cluster");
            assert!(
                kinf[0].center[0].abs() <= 1e-2,
                "cluster center {} not near 0",
                kinf[0].center[0]
            );

            let sub = DualSubdivision::build(&curve).unwrap();
            let cfg = NdConfig::default();
            let nd = is_nondegenerate_at_infinity(&curve, &sub, &cfg);
            let bound = kinf_bound(&curve, &sub, nd.tag, &cfg).unwrap();
            assert_eq!(bound.n_set.pieces, vec![BTreeSet::from([0])]);
            let cc = cross_check_inclusions(&curve, &res, &bound, scfg.cluster_radius);
            assert!(cc.violations.is_empty(), "violations: {:?}", cc.violations);
            assert!(cc.kinf_in_bound && cc.s_in_kinf);
        },
    );
}

#[test]
fn criterion_9_reproducible_json() {
    criterion(
        9,
        "repeated analysis with identical seed and configuration produces \
         byte-identical JSON on every fixture",
        || {
            for (name, numeric) in [
                ("ex53.map", false),
                ("ex54.map", true),
                ("ex55.map", false),
                ("curve.map", true),
            ] {
                let cfg = Config {
                    input: fixture(name),
                    check_nd: true,
                    bound: true,
                    compare_definitions: name == "ex53.map",
                    numeric,
                    seed: 7,
                    radii: (10.0, 10f64.sqrt(), 3),
                    restarts: 8,
                    ..Config::default()
                };
                let a = run_pipeline(&cfg).unwrap();
                let b = run_pipeline(&cfg).unwrap();
                let ja = serde_json::to_string(&a.json).unwrap();
                let jb = serde_json::to_string(&b.json).unwrap();
                assert_eq!(ja, jb, "{name}: JSON not byte-identical");
            }
        },
    );
}
