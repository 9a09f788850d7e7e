use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use super::spec::{parse_spec, parse_spec_unchecked, ParsedSpec};
use super::{digest, resolve_seed, BettiMethodArg, Command, CommandOutput, InputSummary, QsimAlgorithm, QsimFlags};
use super::{ReportDocument, SchemeArg};
use crate::circuits::{
    attach_group_structure, circuit_from_morphism, homology_action, multiplication_morphism, validate_circuit,
};
use crate::encoding::{
    census, complex_register_encoding, enumerative_encoding, nerve_register_encoding, register_width,
};
use crate::error::{Error, Result};
use crate::hilbert::{defect, perfectness_class, DefectKind};
use crate::homology::{betti_numbers, BettiMethod};
use crate::qsim::{grover_project, qpe_betti, quantum_count, QpeConfig};
use crate::sset::{SimplicialMorphismTable, TruncatedSimplicialSet};

/// Largest unitarity defect accepted for a circuit's action on homology.
const ACTION_TOL: f64 = 1e-10;

const DEFAULT_COUNT_BITS: u32 = 6;
const DEFAULT_QPE_BITS: u32 = 8;

pub(crate) fn describe(cmd: &Command) -> (&'static str, BTreeMap<&'static str, Value>) {
    let mut args = BTreeMap::new();
    let name = match cmd {
        Command::Validate { .. } => "validate",
        Command::Census { .. } => "census",
        Command::Betti {
            methods,
            max_degree,
            qsim,
            ..
        } => {
            args.insert("methods", json!(betti_methods(methods)));
            args.insert("max_degree", json!(max_degree));
            if methods.contains(&BettiMethodArg::Qsim) {
                args.insert("shots", json!(qsim.shots));
                args.insert("clock_bits", json!(qsim.clock_bits.unwrap_or(DEFAULT_QPE_BITS)));
            }
            "betti"
        }
        Command::Defects { scan_depth, .. } => {
            args.insert("scan_depth", json!(scan_depth));
            "defects"
        }
        Command::Perfectness { scan_depth, .. } => {
            args.insert("scan_depth", json!(scan_depth));
            "perfectness"
        }
        Command::Encode {
            scheme,
            slot_bits,
            degree_bits,
            ..
        } => {
            args.insert("scheme", json!(scheme));
            args.insert("slot_bits", json!(slot_bits));
            args.insert("degree_bits", json!(degree_bits));
            "encode"
        }
        Command::Circuit { .. } => "circuit",
        Command::Qsim {
            algorithm,
            degree,
            flags,
            max_iters,
            ..
        } => {
            args.insert("algorithm", json!(algorithm));
            args.insert("degree", json!(degree));
            match algorithm {
                QsimAlgorithm::Grover => {
                    args.insert("max_iters", json!(max_iters));
                }
                QsimAlgorithm::Count => {
                    args.insert("clock_bits", json!(flags.clock_bits.unwrap_or(DEFAULT_COUNT_BITS)));
                }
                QsimAlgorithm::Qpe => {
                    args.insert("clock_bits", json!(flags.clock_bits.unwrap_or(DEFAULT_QPE_BITS)));
                    args.insert("shots", json!(flags.shots));
                }
            }
            "qsim"
        }
    };
    (name, args)
}

fn betti_methods(requested: &[BettiMethodArg]) -> Vec<BettiMethodArg> {
    let mut m = if requested.is_empty() {
        vec![BettiMethodArg::Exact, BettiMethodArg::Hodge, BettiMethodArg::Normalized]
    } else {
        requested.to_vec()
    };
    m.sort();
    m.dedup();
    m
}

fn summary(x: &TruncatedSimplicialSet) -> InputSummary {
    InputSummary {
        cutoff: x.cutoff(),
        counts: x.counts(),
        nondegenerate: x.nondegenerate_counts(),
    }
}

fn seed(flags: &QsimFlags, env_seed: Option<&str>, report: &mut ReportDocument) -> Result<u64> {
    let s = resolve_seed(flags.seed, env_seed)?;
    report.command.args.insert("seed", json!(s));
    Ok(s)
}

pub(crate) fn run(
    cmd: &Command,
    text: &str,
    env_seed: Option<&str>,
    report: &mut ReportDocument,
) -> Result<CommandOutput> {
    if let Command::Validate { .. } = cmd {
        let parsed = parse_spec_unchecked(text)?;
        report.input = Some(summary(&parsed.set));
        let v = parsed.set.validate();
        let results = json!({
            "method": "exhaustive",
            "valid": v.is_valid(),
            "checked": v.checked,
            "violations": v.violations,
        });
        return Ok(CommandOutput {
            results,
            failure: v.into_result().err(),
        });
    }
    let parsed = parse_spec(text)?;
    let x = &parsed.set;
    report.input = Some(summary(x));
    match cmd {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Census { .. } => {
            let c = census(x)?;
            let mut v = serde_json::to_value(c).expect("census serializes");
            v["method"] = json!("enumeration");
            Ok(CommandOutput { results: v, failure: None })
        }
        Command::Betti {
            methods,
            max_degree,
            qsim,
            ..
        } => {
            let seed = if methods.contains(&BettiMethodArg::Qsim) {
                Some(seed(qsim, env_seed, report)?)
            } else {
                None
            };
            betti_command(x, &betti_methods(methods), *max_degree, qsim, seed)
        }
        Command::Defects { scan_depth, .. } => defects_command(x, *scan_depth),
        Command::Perfectness { scan_depth, .. } => {
            let depth = scan_depth_or_default(x, *scan_depth)?;
            let r = perfectness_class(x, depth)?;
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["method"] = json!("exact_defect_scan");
            Ok(CommandOutput { results: v, failure: None })
        }
        Command::Encode {
            scheme,
            slot_bits,
            degree_bits,
            ..
        } => encode_command(&parsed, *scheme, *slot_bits, *degree_bits),
        Command::Circuit { from_morphism, .. } => {
            let morphism = match from_morphism {
                None => None,
                Some(path) => {
                    let bytes = std::fs::read(path)
                        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
                    report.command.args.insert("morphism_digest", json!(digest(&bytes)));
                    Some(String::from_utf8(bytes).map_err(|_| Error::invalid("morphism file is not UTF-8"))?)
                }
            };
            circuit_command(x, morphism.as_deref())
        }
        Command::Qsim {
            algorithm,
            degree,
            flags,
            max_iters,
            ..
        } => {
            let degrees: Vec<usize> = match degree {
                Some(n) if *n > x.cutoff() => return Err(Error::out_of_range("qsim", *n, x.cutoff())),
                Some(n) => vec![*n],
                None => (0..=x.cutoff()).collect(),
            };
            let seed = match algorithm {
                QsimAlgorithm::Qpe => seed(flags, env_seed, report)?,
                _ => 0,
            };
            qsim_command(x, *algorithm, &degrees, flags, seed, *max_iters)
        }
    }
}

fn method_tag(m: BettiMethodArg) -> &'static str {
    match m {
        BettiMethodArg::Exact => "exact_rank",
        BettiMethodArg::Hodge => "hodge",
        BettiMethodArg::Normalized => "normalized_hodge",
        BettiMethodArg::Qsim => "qsim_phase_estimation",
    }
}

fn betti_command(
    x: &TruncatedSimplicialSet,
    methods: &[BettiMethodArg],
    max_degree: Option<usize>,
    flags: &QsimFlags,
    seed: Option<u64>,
) -> Result<CommandOutput> {
    let big_n = x.cutoff();
    let top = max_degree.unwrap_or(big_n);
    if top > big_n {
        return Err(Error::out_of_range("Betti table", top, big_n));
    }
    let mut tables = Vec::new();
    let mut values: BTreeMap<&'static str, Vec<usize>> = BTreeMap::new();
    for &m in methods {
        let rows: Vec<Value> = match m {
            BettiMethodArg::Qsim => {
                let cfg = QpeConfig::new(flags.clock_bits.unwrap_or(DEFAULT_QPE_BITS), flags.shots, seed.unwrap_or(0));
                (0..=top)
                    .map(|n| match qpe_betti(x, n, &cfg) {
                        Ok(out) => {
                            let r = out.report;
                            Ok(json!({
                                "degree": n,
                                "value": r.betti_estimate,
                                "method": method_tag(m),
                                "truncation_sensitive": r.truncation_sensitive,
                                "p_zero": r.p_zero,
                                "sampled_p_zero": r.sampled_p_zero,
                                "kernel_fraction": r.kernel_fraction,
                                "leakage_bound": r.leakage_bound,
                                "tau": r.tau,
                            }))
                        }
                        Err(Error::NoTarget(msg)) => Ok(json!({
                            "degree": n,
                            "value": 0,
                            "method": method_tag(m),
                            "truncation_sensitive": n == big_n,
                            "note": msg,
                        })),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<_>>()?
            }
            _ => {
                let method = match m {
                    BettiMethodArg::Exact => BettiMethod::ExactRank,
                    BettiMethodArg::Hodge => BettiMethod::Hodge,
                    _ => BettiMethod::NormalizedHodge,
                };
                betti_numbers(x, method)?
                    .into_iter()
                    .take(top + 1)
                    .map(|r| {
                        json!({
                            "degree": r.degree,
                            "value": r.value,
                            "method": method_tag(m),
                            "truncation_sensitive": r.truncation_sensitive,
                        })
                    })
                    .collect()
            }
        };
        values.insert(
            method_tag(m),
            rows.iter().map(|r| r["value"].as_u64().expect("integer") as usize).collect(),
        );
        tables.push(json!({ "method": method_tag(m), "values": rows }));
    }
    // degrees below the cutoff are unaffected by the truncation and must agree
    let checked_up_to = big_n.checked_sub(1).map(|d| d.min(top));
    let mut disagreements = Vec::new();
    if let Some(limit) = checked_up_to {
        for n in 0..=limit {
            let column: BTreeMap<&str, usize> = values.iter().map(|(k, v)| (*k, v[n])).collect();
            let mut distinct: Vec<usize> = column.values().copied().collect();
            distinct.dedup();
            if distinct.len() > 1 {
                disagreements.push(json!({ "degree": n, "values": column }));
            }
        }
    }
    let failure = disagreements.first().map(|d| {
        Error::invariant(format!(
            "Betti numbers disagree across methods in degree {}: {}",
            d["degree"], d["values"]
        ))
    });
    Ok(CommandOutput {
        results: json!({
            "max_degree": top,
            "agreement_checked_up_to": checked_up_to,
            "agree": disagreements.is_empty(),
            "disagreements": disagreements,
            "betti": values,
            "tables": tables,
        }),
        failure,
    })
}

fn scan_depth_or_default(x: &TruncatedSimplicialSet, depth: Option<usize>) -> Result<usize> {
    match depth {
        Some(d) => Ok(d),
        None => x
            .cutoff()
            .checked_sub(2)
            .ok_or_else(|| Error::out_of_range("defect scan", 2, x.cutoff())),
    }
}

fn defects_command(x: &TruncatedSimplicialSet, depth: Option<usize>) -> Result<CommandOutput> {
    let depth = scan_depth_or_default(x, depth)?;
    if depth + 2 > x.cutoff() {
        return Err(Error::out_of_range(format!("defect scan to depth {depth}"), depth + 2, x.cutoff()));
    }
    let mut rows = Vec::new();
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for kind in DefectKind::ALL {
        for n in 0..=depth {
            if !kind.degree_in_range(n, x.cutoff()) {
                continue;
            }
            for j in 0..=n {
                for i in (0..=j).filter(|&i| kind.index_allowed(i, j)) {
                    let d = defect(x, kind, n, i, j)?;
                    let nnz = d.matrix.nnz();
                    let t = tally.entry(format!("{kind:?}")).or_default();
                    t.0 += 1;
                    t.1 += usize::from(!d.is_zero);
                    rows.push(json!({
                        "kind": kind,
                        "n": n,
                        "i": i,
                        "j": j,
                        "is_zero": d.is_zero,
                        "nonzeros": nnz,
                    }));
                }
            }
        }
    }
    let totals: BTreeMap<String, Value> = tally
        .into_iter()
        .map(|(k, (all, nonzero))| (k, json!({ "computed": all, "nonzero": nonzero })))
        .collect();
    Ok(CommandOutput::ok(json!({
        "method": "exchange_identity_and_fiber_count",
        "scan_depth": depth,
        "totals": totals,
        "defects": rows,
    })))
}

fn encode_command(
    parsed: &ParsedSpec,
    scheme: SchemeArg,
    slot_bits: Option<u32>,
    degree_bits: Option<u32>,
) -> Result<CommandOutput> {
    let x = &parsed.set;
    let big_n = x.cutoff();
    let table = match scheme {
        SchemeArg::Enumerative => enumerative_encoding(x)?,
        SchemeArg::Nerve => {
            let g = parsed
                .nerve_group()
                .ok_or_else(|| Error::Unsupported("the nerve scheme needs a group nerve spec".into()))?;
            let q = slot_bits.unwrap_or_else(|| register_width(g.order() as u64));
            let r = degree_bits.unwrap_or_else(|| register_width(big_n as u64 + 1));
            nerve_register_encoding(g, big_n, q, r)?
        }
        SchemeArg::Complex => {
            let cx = parsed.complex.as_ref().ok_or_else(|| {
                Error::Unsupported("the complex scheme needs a top-level ordered_complex spec".into())
            })?;
            let r = slot_bits.unwrap_or_else(|| register_width(big_n as u64 + 2));
            complex_register_encoding(cx, big_n, r)?
        }
    };
    let check = table.verify()?;
    let kappa = census(x)?.kappa;
    let failure = (!check.passed())
        .then(|| Error::invariant(format!("{scheme:?} encoding fails its bit-level checks: {check:?}")));
    Ok(CommandOutput {
        results: json!({
            "method": table.scheme(),
            "width": table.width(),
            "kappa": kappa,
            "check": check,
            "listing": table.listing(),
        }),
        failure,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismFile {
    target: Value,
    maps: Vec<Vec<usize>>,
}

fn circuit_command(x: &TruncatedSimplicialSet, morphism: Option<&str>) -> Result<CommandOutput> {
    let (source, space, circuit) = match morphism {
        None => {
            let grp = attach_group_structure(x)?;
            let (pairs, mu) = multiplication_morphism(x, &grp)?;
            let (space, c) = circuit_from_morphism(&mu, &pairs, x, &grp)?;
            ("multiplication", space, c)
        }
        Some(text) => {
            let file: MorphismFile = serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_str(text))
                .map_err(|e| Error::invalid(format!("morphism file at {}: {}", e.path(), e.inner())))?;
            let target = parse_spec(&file.target.to_string())
                .map_err(|e| match e {
                    Error::InvalidInput(m) => Error::invalid(format!("morphism target: {m}")),
                    other => other,
                })?
                .set;
            let phi = SimplicialMorphismTable::new(file.maps, x, &target)?;
            let grp = attach_group_structure(&target)?;
            let (space, c) = circuit_from_morphism(&phi, x, &target, &grp)?;
            ("file", space, c)
        }
    };
    let validation = validate_circuit(&space, &circuit)?;
    let mut actions = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 0..space.cutoff() {
        let a = homology_action(&space, &circuit, n)?;
        let residual = a.unitarity_residual();
        worst = worst.max(residual);
        actions.push(json!({
            "degree": n,
            "kernel_dim": a.on_kernel.ncols(),
            "normalized_kernel_dim": a.on_normalized_kernel.ncols(),
            "unitarity_residual": residual,
        }));
    }
    let failure = if !validation.passed() {
        Some(Error::invariant(format!(
            "circuit fails validation: {:?}",
            validation.violations.first()
        )))
    } else if worst > ACTION_TOL {
        Some(Error::invariant(format!("action on homology is not unitary: residual {worst:e}")))
    } else {
        None
    };
    Ok(CommandOutput {
        results: json!({
            "method": "exhaustive",
            "morphism": source,
            "space_counts": space.counts(),
            "permutations": (0..=circuit.cutoff()).map(|n| circuit.permutation(n).to_vec()).collect::<Vec<_>>(),
            "validation": validation,
            "homology_action": actions,
        }),
        failure,
    })
}

fn qsim_command(
    x: &TruncatedSimplicialSet,
    algorithm: QsimAlgorithm,
    degrees: &[usize],
    flags: &QsimFlags,
    seed: u64,
    max_iters: Option<usize>,
) -> Result<CommandOutput> {
    let mut runs = Vec::new();
    for &n in degrees {
        let run = match algorithm {
            QsimAlgorithm::Grover => grover_project(x, n, max_iters).map(|r| json!(r)),
            QsimAlgorithm::Count => {
                quantum_count(x, n, flags.clock_bits.unwrap_or(DEFAULT_COUNT_BITS)).map(|r| json!(r))
            }
            QsimAlgorithm::Qpe => {
                let cfg = QpeConfig::new(flags.clock_bits.unwrap_or(DEFAULT_QPE_BITS), flags.shots, seed);
                qpe_betti(x, n, &cfg).map(|o| json!(o.report))
            }
        };
        runs.push(match run {
            Ok(v) => v,
            Err(Error::NoTarget(msg)) => json!({ "degree": n, "skipped": msg }),
            Err(e) => return Err(e),
        });
    }
    let method = match algorithm {
        QsimAlgorithm::Grover => "grover_statevector",
        QsimAlgorithm::Count => "quantum_counting_statevector",
        QsimAlgorithm::Qpe => "phase_estimation_exact_evolution",
    };
    Ok(CommandOutput::ok(json!({ "method": method, "runs": runs })))
}
