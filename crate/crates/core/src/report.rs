//! Pipeline orchestration and report assembly: run the analysis stages on
//! a parsed mapping, emit a key-sorted JSON document (byte-reproducible
//! for a fixed seed and configuration) and a human-readable summary.

use crate::bounds::{self, BoundReport, InvertibilityVerdict};
use crate::error::{Error, Result};
use crate::fan::DualSubdivision;
use crate::nondegeneracy::{
    self, Certificate, ComparisonReport, NdConfig, NdReport, Verdict, VerdictTag, Witness,
};
use crate::numeric::{self, CandidateKind, SearchConfig, SearchResult};
use crate::parse::{parse_with_options, ParseOptions};
use crate::poly::{print_poly, NumericPoint, PolyMap, Polynomial, Setting};
use crate::scalar::rat_to_string;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct Config {
    pub input: PathBuf,
    pub json_out: Option<PathBuf>,
    pub check_nd: bool,
    pub bound: bool,
    pub compare_definitions: bool,
    pub numeric: bool,
    pub export_systems: Option<PathBuf>,
    /// Translate away constant terms instead of rejecting them.
    pub translate: bool,
    pub seed: u64,
    pub tol: Option<f64>,
    /// Radius schedule (r0, factor, count) for the numeric search.
    pub radii: (f64, f64, usize),
    pub restarts: usize,
}

impl Default for Config {
    fn default() -> Self {
        let s = SearchConfig::default();
        Config {
            input: PathBuf::new(),
            json_out: None,
            check_nd: false,
            bound: false,
            compare_definitions: false,
            numeric: false,
            export_systems: None,
            translate: false,
            seed: 0,
            tol: None,
            radii: (s.r0, s.factor, s.count),
            restarts: s.restarts,
        }
    }
}

#[derive(Debug)]
pub struct AnalysisReport {
    pub json: Value,
    pub human: String,
}

/// Exit code classification: 2 for input errors, 3 for guard violations.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::DimensionTooLarge { .. } => 3,
        _ => 2,
    }
}

fn exact(v: Value) -> Value {
    json!({ "provenance": "exact", "value": v })
}

fn float(v: f64) -> Value {
    json!({ "provenance": "float", "value": v })
}

fn empirical(v: Value) -> Value {
    json!({ "provenance": "empirical", "value": v })
}

fn poly_str(map: &PolyMap, f: &Polynomial) -> String {
    print_poly(f, &map.var_names)
}

fn point_value(p: &NumericPoint) -> Value {
    match p {
        NumericPoint::Real(v) => json!(v),
        NumericPoint::Complex(v) => {
            json!(v.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>())
        }
    }
}

fn witness_value(w: &Witness) -> Value {
    json!({
        "confirmed": w.confirmed,
        "point": point_value(&w.point),
        "rank_residual": w.rank_residual,
        "sys_residual": w.sys_residual,
    })
}

fn verdict_value(v: &Verdict) -> Value {
    match v {
        Verdict::NonDegenerate(c) => json!({
            "certificate": match c {
                Certificate::EmptyToroidZeroSet => "EmptyToroidZeroSet",
                Certificate::MonomialFace => "MonomialFace",
                Certificate::ExhaustiveSmallCase => "ExhaustiveSmallCase",
            },
            "tag": "NonDegenerate",
        }),
        Verdict::Degenerate(w) => json!({
            "tag": "Degenerate",
            "witness": witness_value(w),
        }),
        Verdict::Unknown { strategies } => json!({
            "strategies": strategies,
            "tag": "Unknown",
        }),
    }
}

fn nd_report_value(map: &PolyMap, rep: &NdReport) -> Value {
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "cone": c.cone_id,
                "face_tuple": c.face_tuple,
                "strategy_log": c.strategy_log,
                "system": c.system.iter().map(|f| poly_str(map, f)).collect::<Vec<_>>(),
                "system_components": c.system_components,
                "verdict": verdict_value(&c.verdict),
            })
        })
        .collect();
    json!({
        "checked_classes": rep.checked_classes,
        "checks": checks,
        "tag": rep.tag.to_string(),
    })
}

fn fan_value(map: &PolyMap, sub: &DualSubdivision) -> Value {
    let cones: Vec<Value> = sub
        .cones
        .iter()
        .map(|c| {
            json!({
                "atypical": c.atypical,
                "d_supp": exact(json!(c
                    .d_supp
                    .iter()
                    .map(rat_to_string)
                    .collect::<Vec<_>>())),
                "exceptional": c.exceptional,
                "face_tuple": c.face_tuple,
                "i_sigma": c.i_sigma.iter().collect::<Vec<_>>(),
                "i_sigma_c": c.i_sigma_c.iter().collect::<Vec<_>>(),
                "id": c.id,
                "interior_rep": c.interior_rep.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "j_sigma": c.j_sigma.iter().collect::<Vec<_>>(),
                "rays": c
                    .rays
                    .iter()
                    .map(|r| r.iter().map(|b| b.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let classes: Vec<Value> = sub
        .tuple_classes
        .iter()
        .map(|tc| {
            let rep = &sub.cones[tc.cones[0]];
            let faces: Vec<String> = (0..map.k())
                .map(|j| {
                    let face = &sub.polyhedra[j].faces[tc.face_tuple[j]];
                    let f = map.components[j]
                        .face_restriction(&face.slice)
                        .expect("face slices index into the support");
                    poly_str(map, &f)
                })
                .collect();
            json!({
                "cones": tc.cones,
                "face_restrictions": faces,
                "face_tuple": tc.face_tuple,
                "representative": rep.id,
            })
        })
        .collect();
    json!({ "cones": cones, "tuple_classes": classes })
}

fn bound_value(rep: &BoundReport) -> Value {
    let a: Vec<Value> = rep
        .a_set
        .iter()
        .map(|d| {
            json!({
                "cone": d.cone_id,
                "disc_samples": empirical(json!(d.disc_samples)),
                "no_critical_points_found": d.no_critical_points_found,
                "projection_components": d.projection_components,
                "zero_components": d.zero_components,
            })
        })
        .collect();
    let pieces: Vec<Vec<usize>> = rep
        .n_set
        .pieces
        .iter()
        .map(|p| p.iter().copied().collect())
        .collect();
    let strictness = rep.n_set.strictness.map(|(s, w)| {
        json!({ "strict": s, "witness_component": w })
    });
    json!({
        "A": a,
        "N": { "pieces": pieces, "strictness": strictness },
        "all_convenient": rep.all_convenient,
        "kinf_bound_empty": rep.kinf_bound_empty,
        "narrative": rep.narrative,
        "nd_tag": rep.nd_tag.to_string(),
    })
}

fn invertibility_value(rep: &InvertibilityVerdict) -> Value {
    json!({
        "det_constant": rep.det_constant.as_ref().map(|c| exact(json!(rat_to_string(c)))),
        "evidence": rep.evidence,
        "singular_witness": rep.singular_witness.as_ref().map(|w| float_vec(w)),
        "tag": rep.tag.to_string(),
    })
}

fn float_vec(v: &[f64]) -> Value {
    json!(v.iter().map(|&x| float(x)).collect::<Vec<_>>())
}

fn search_value(res: &SearchResult) -> Value {
    json!({
        "budget_exceeded": res.budget_exceeded,
        "candidates": res
            .candidates
            .iter()
            .map(|c| {
                let mut radii: Vec<usize> =
                    c.evidence.iter().map(|s| s.radius_index).collect();
                radii.sort_unstable();
                radii.dedup();
                json!({
                    "center": empirical(json!(c.center)),
                    "evidence_count": c.evidence.len(),
                    "kind": c.kind.to_string(),
                    "radius_indices": radii,
                })
            })
            .collect::<Vec<_>>(),
        "samples_below_tolerance": res.samples.len(),
    })
}

fn comparison_value(map: &PolyMap, rep: &ComparisonReport) -> Value {
    json!({
        "all_convenient": rep.all_convenient,
        "singular_locus_form": nd_report_value(map, &rep.singular_locus),
        "transfer": rep.transfer.as_ref().map(|t| json!({
            "direction": t.direction.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "kernel_vector": float_vec(&t.kernel_vector),
            "max_residual": float(t.max_residual),
        })),
        "zero_set_form": nd_report_value(map, &rep.zero_set),
    })
}

pub fn run_pipeline(cfg: &Config) -> Result<AnalysisReport> {
    let text = std::fs::read_to_string(&cfg.input)?;
    run_pipeline_on_text(&text, cfg)
}

/// Run the full pipeline on already-loaded mapping source text.
pub fn run_pipeline_on_text(text: &str, cfg: &Config) -> Result<AnalysisReport> {
    let parsed = parse_with_options(
        text,
        ParseOptions { translate_constant_terms: cfg.translate },
    )?;
    let map = parsed.map;
    let mut ndcfg = NdConfig { seed: cfg.seed, ..NdConfig::default() };
    if let Some(t) = cfg.tol {
        ndcfg.eps_sys = t;
        ndcfg.eps_rank = t;
    }

    let mut root = Map::new();
    let mut human = String::new();
    root.insert("schema_version".into(), json!(SCHEMA_VERSION));
    root.insert("seed".into(), json!(cfg.seed));
    root.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));

    // Input echo and per-component tables.
    let canonical = map.print();
    root.insert(
        "input".into(),
        json!({
            "canonical_text": canonical,
            "k": map.k(),
            "n": map.n,
            "setting": map.setting.to_string(),
            "translated_shifts": parsed
                .shifts
                .iter()
                .map(|(name, c)| json!({ "component": name, "shift": c.to_string() }))
                .collect::<Vec<_>>(),
        }),
    );
    let convenient: Vec<bool> = map
        .components
        .iter()
        .map(|f| f.is_convenient())
        .collect::<Result<_>>()?;
    let effective = map.effective_variables();
    root.insert(
        "components".into(),
        json!(map
            .component_names
            .iter()
            .zip(&map.components)
            .zip(&convenient)
            .map(|((name, f), conv)| json!({
                "convenient": conv,
                "degree": f.degree(),
                "name": name,
                "support_size": f.support().len(),
            }))
            .collect::<Vec<_>>()),
    );
    root.insert(
        "effective_variables".into(),
        json!(map.var_names.iter().zip(&effective).map(|(v, e)| json!({
            "effective": e,
            "variable": v,
        })).collect::<Vec<_>>()),
    );
    if map.setting != Setting::Real {
        let real = map.realify()?;
        let rconv: Vec<bool> = real
            .components
            .iter()
            .map(|f| f.is_convenient())
            .collect::<Result<_>>()?;
        root.insert(
            "realified_components".into(),
            json!(real
                .component_names
                .iter()
                .zip(&rconv)
                .map(|(name, conv)| json!({ "convenient": conv, "name": name }))
                .collect::<Vec<_>>()),
        );
    }

    writeln!(human, "mapping: {} -> {} ({} setting)", map.n, map.k(), map.setting).ok();
    writeln!(human, "{}", canonical.trim_end()).ok();
    writeln!(human).ok();
    for (name, conv) in map.component_names.iter().zip(&convenient) {
        writeln!(human, "component {name}: convenient = {conv}").ok();
    }

    // Newton polyhedra and the dual subdivision.
    let sub = DualSubdivision::build(&map)?;
    root.insert(
        "polyhedra".into(),
        json!(sub
            .polyhedra
            .iter()
            .zip(&map.component_names)
            .map(|(p, name)| json!({
                "component": name,
                "dim": p.dim,
                "faces": p.faces.len(),
                "faces_at_infinity": p.faces_at_infinity().len(),
                "vertices": p.vertices.len(),
            }))
            .collect::<Vec<_>>()),
    );
    root.insert("dual_subdivision".into(), fan_value(&map, &sub));
    writeln!(
        human,
        "dual subdivision: {} cones, {} distinct face tuples",
        sub.cones.len(),
        sub.tuple_classes.len()
    )
    .ok();

    let need_nd = cfg.check_nd || cfg.bound || cfg.numeric;
    let nd = need_nd.then(|| nondegeneracy::is_nondegenerate_at_infinity(&map, &sub, &ndcfg));
    if let Some(nd) = &nd {
        root.insert("nondegeneracy".into(), nd_report_value(&map, nd));
        writeln!(human, "non-degeneracy at infinity: {}", nd.tag).ok();
        if let Some((check, w)) = nd.witness() {
            writeln!(
                human,
                "  degeneracy witness on cone {} (system residual {:.3e})",
                check.cone_id, w.sys_residual
            )
            .ok();
        }
        if let Some(dir) = &cfg.export_systems {
            let mut exported = Vec::new();
            std::fs::create_dir_all(dir)?;
            for check in &nd.checks {
                if matches!(check.verdict, Verdict::Unknown { .. }) {
                    let path = dir.join(format!("system_cone_{}.txt", check.cone_id));
                    let mut body = String::new();
                    writeln!(body, "# undecided face system (cone {})", check.cone_id).ok();
                    writeln!(body, "# variables: {}", map.var_names.join(" ")).ok();
                    writeln!(
                        body,
                        "# question: does the system below have a solution with all \
                         variables nonzero where its Jacobian drops rank?"
                    )
                    .ok();
                    for (j, f) in check.system_components.iter().zip(&check.system) {
                        writeln!(body, "{} = {}", map.component_names[*j], poly_str(&map, f))
                            .ok();
                    }
                    std::fs::write(&path, body)?;
                    exported.push(path.display().to_string());
                }
            }
            root.insert("exported_systems".into(), json!(exported));
        }
    }

    let comparison = if cfg.compare_definitions {
        let rep = nondegeneracy::compare_definitions(&map, &sub, &ndcfg)?;
        root.insert("definition_comparison".into(), comparison_value(&map, &rep));
        writeln!(
            human,
            "non-degeneracy comparison: singular-locus form = {}, zero-set form = {}",
            rep.singular_locus.tag, rep.zero_set.tag
        )
        .ok();
        if let Some((_, w)) = rep.zero_set.witness() {
            writeln!(
                human,
                "  zero-set form witness: {:?} (confirmed: {})",
                w.point, w.confirmed
            )
            .ok();
        }
        Some(rep)
    } else {
        None
    };
    let _ = &comparison;

    let bound = if cfg.bound || cfg.numeric {
        let nd_tag = nd.as_ref().map(|r| r.tag).unwrap_or(VerdictTag::Unknown);
        let rep = bounds::kinf_bound(&map, &sub, nd_tag, &ndcfg)?;
        root.insert("bound".into(), bound_value(&rep));
        writeln!(
            human,
            "bound: N pieces = {:?}, atypical descriptors = {}, empty = {}",
            rep.n_set.pieces,
            rep.a_set.len(),
            rep.kinf_bound_empty
        )
        .ok();
        for line in &rep.narrative {
            writeln!(human, "  {line}").ok();
        }
        Some(rep)
    } else {
        None
    };

    // Numeric search and cross-checks.
    let search = if cfg.numeric {
        let scfg = SearchConfig {
            r0: cfg.radii.0,
            factor: cfg.radii.1,
            count: cfg.radii.2,
            restarts: cfg.restarts,
            seed: cfg.seed,
            tol_kinf: cfg.tol.map(|t| t * 1e6).unwrap_or(1e-3 * (1.0 + cfg.radii.0)),
            ..SearchConfig::default()
        };
        let res = numeric::search_asymptotic_values(&map, &scfg)?;
        root.insert("numeric_search".into(), search_value(&res));
        writeln!(
            human,
            "numeric search: {} candidate value(s), {} below-tolerance sample(s)",
            res.candidates.len(),
            res.samples.len()
        )
        .ok();
        for c in &res.candidates {
            writeln!(human, "  {} candidate near {:?} (empirical)", c.kind, c.center).ok();
        }
        if let Some(bound) = &bound {
            let cc = numeric::cross_check_inclusions(&map, &res, bound, scfg.cluster_radius);
            root.insert(
                "cross_checks".into(),
                json!({
                    "kinf_within_bound": cc.kinf_in_bound,
                    "s_within_kinf": cc.s_in_kinf,
                    "violations": cc.violations,
                }),
            );
            if !cc.violations.is_empty() {
                writeln!(human, "cross-check violations:").ok();
                for v in &cc.violations {
                    writeln!(human, "  {v}").ok();
                }
            }
        }
        Some(res)
    } else {
        None
    };

    if cfg.bound || cfg.numeric {
        let nd_tag = nd.as_ref().map(|r| r.tag);
        let all_conv = convenient.iter().all(|&b| b);
        let empirical_empty = search.as_ref().map(|res| {
            !res.candidates.iter().any(|c| c.kind == CandidateKind::Kinf)
        });
        let inv = bounds::invertibility_verdict(&map, nd_tag, all_conv, empirical_empty, &ndcfg)?;
        root.insert("invertibility".into(), invertibility_value(&inv));
        writeln!(human, "invertibility: {}", inv.tag).ok();
        for e in &inv.evidence {
            writeln!(human, "  {e}").ok();
        }
    }

    let json = Value::Object(root);
    if let Some(path) = &cfg.json_out {
        std::fs::write(path, serde_json::to_string_pretty(&json).expect("serializable"))?;
    }
    Ok(AnalysisReport { json, human })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_fixture(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join("atinfinity-report-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn pipeline_produces_sorted_reproducible_json() {
        let input = write_fixture(
            "quadric.map",
            "setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n",
        );
        let cfg = Config {
            input,
            check_nd: true,
            bound: true,
            compare_definitions: true,
            ..Config::default()
        };
        let a = run_pipeline(&cfg).unwrap();
        let b = run_pipeline(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a.json).unwrap(),
            serde_json::to_string(&b.json).unwrap()
        );
        // Top-level keys arrive sorted from the BTreeMap-backed serializer.
        let s = serde_json::to_string(&a.json).unwrap();
        let bound_pos = s.find("\"bound\"").unwrap();
        let input_pos = s.find("\"input\"").unwrap();
        assert!(bound_pos < input_pos);
    }

    #[test]
    fn missing_file_maps_to_input_error() {
        let cfg = Config {
            input: PathBuf::from("/nonexistent/definitely-missing.map"),
            ..Config::default()
        };
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);
    }

    #[test]
    fn constant_term_is_an_input_error() {
        let input = write_fixture("bad.map", "setting: real\nvars: x\nmap:\nf = x + 1\n");
        let cfg = Config { input, ..Config::default() };
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);
        assert!(matches!(err, Error::NonzeroConstantTerm { .. }));
    }
}
