use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use wehrl_core::channels::{
    cloning_apply, coherence_defect, coherent_output_spectrum, decomposition_constants_in, decomposition_residual,
    measure_prepare, normalized_cloning, trace_gain, HermitianOperator,
};
use wehrl_core::fock::coherent_vector;
use wehrl_core::linalg::hermitian_eigenvalues;
use wehrl_core::majorization::{majorizes, spectrum, ConcaveFn, SpectrumSequence, Verdict};
use wehrl_core::random::{label_hash, random_density, random_state, sample_haar_state, stream};
use wehrl_core::rep::commutant_dimension;
use wehrl_core::wehrl::{
    berezin_lieb_gap, coherent_wehrl_closed_form, resolution_residual_in, semiclassical_trace, wehrl_entropy,
    wehrl_sample, Method, MonteCarloEstimate,
};
use wehrl_core::{Error as CoreError, SymmetricSpace};

use crate::config::{CommandKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::fspec;
use crate::output::{fmt, Report, Table};
use crate::state::{self, Input};

/// Refuse sample counts whose value buffer would not fit comfortably in memory.
pub const MAX_SAMPLES: usize = 100_000_000;
/// Largest k accepted by limit-scan rows.
pub const MAX_SCAN_K: usize = 10_000_000;

pub fn run(config: &RunConfig) -> CliResult<Report> {
    match config.command {
        CommandKind::Spectrum => cmd_spectrum(config),
        CommandKind::Majorize => cmd_majorize(config),
        CommandKind::Verify => cmd_verify(config),
        CommandKind::Entropy => cmd_entropy(config),
        CommandKind::LimitScan => cmd_limit_scan(config),
    }
}

fn space(cfg: &RunConfig, level: usize) -> CliResult<Arc<SymmetricSpace>> {
    Ok(SymmetricSpace::with_limit(cfg.n, level, cfg.max_dim)?)
}

/// Independent per-trial root seed.
fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    label_hash(&format!("{label}/{seed}/{index}"))
}

fn levels_json(s: &SpectrumSequence) -> (Vec<f64>, Vec<u64>) {
    s.levels().iter().copied().unzip()
}

/// Round values within `eps` of zero to exactly zero for display.
fn tidy(s: &SpectrumSequence, eps: f64) -> SpectrumSequence {
    SpectrumSequence::from_levels(s.levels().iter().map(|&(v, m)| (if v.abs() <= eps { 0.0 } else { v }, m)).collect())
}

pub fn cmd_spectrum(cfg: &RunConfig) -> CliResult<Report> {
    let source = state::parse(&cfg.state)?;
    let base = space(cfg, cfg.m)?;
    base.at_level(cfg.m + cfg.k)?;
    let input = source.draw(&base, cfg.seed, "spectrum", 0)?;
    let out = cloning_apply(&input.operator(), cfg.k)?;
    let spec = spectrum(&out)?;
    let scale = spec.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let grouped = tidy(&spec.grouped(1e-9 * scale), 1e-12 * scale);
    let (values, multiplicities) = levels_json(&grouped);

    let tol = cfg.tol.unwrap_or(1e-10);
    let (closed, deviation) = if source.is_coherent() {
        let c = coherent_output_spectrum(cfg.n, cfg.m, cfg.k)?;
        let dev = spec.iter().zip(c.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        (Some(c), Some(dev))
    } else {
        (None, None)
    };
    let passed = deviation.is_none_or(|d| d <= tol * scale);
    let mut table = Table::new(&["value", "multiplicity"]);
    for (v, m) in values.iter().zip(&multiplicities) {
        table.push(vec![fmt(*v), m.to_string()]);
    }
    let result = json!({
        "dimension": out.space().dim(),
        "values": values,
        "multiplicities": multiplicities,
        "sum": spec.total(),
        "expected_sum": trace_gain(cfg.n, cfg.m, cfg.k) * input.operator().trace(),
        "closed_form": closed.as_ref().map(|c| {
            let (v, m) = levels_json(c);
            json!({"values": v, "multiplicities": m})
        }),
        "max_deviation": deviation,
    });
    Ok(Report { result, table, passed, warnings: Vec::new() })
}

#[derive(Debug, Serialize)]
struct TrialRecord {
    trial: u64,
    verdict: &'static str,
    margin: f64,
    worst: f64,
    first_violation: Option<usize>,
    coherence_defect: Option<f64>,
    coherent_input: bool,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Strict => "strict",
        Verdict::Equal => "equal",
        Verdict::Weak => "weak",
        Verdict::No => "no",
    }
}

pub fn cmd_majorize(cfg: &RunConfig) -> CliResult<Report> {
    if cfg.trials == 0 {
        return Err(CliError::validation("--trials must be at least 1"));
    }
    let source = state::parse(&cfg.state)?;
    let base = space(cfg, cfg.m)?;
    base.at_level(cfg.m + cfg.k)?;
    let coh = coherent_output_spectrum(cfg.n, cfg.m, cfg.k)?.scaled(1.0 / trace_gain(cfg.n, cfg.m, cfg.k));
    let tol = cfg.tol.unwrap_or(1e-9);
    let records = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| -> CliResult<TrialRecord> {
            let input = source.draw(&base, cfg.seed, "majorize", t)?;
            let out = spectrum(&normalized_cloning(&input.operator(), cfg.k)?)?;
            let r = majorizes(&coh, &out, tol)?;
            let (defect, coherent) = match &input {
                Input::Pure(psi) if cfg.m >= 1 => {
                    let d = coherence_defect(psi)?;
                    (Some(d), d <= 1e-6)
                }
                Input::Pure(_) => (Some(0.0), true),
                Input::Mixed(_) => (None, base.dim() == 1),
            };
            Ok(TrialRecord {
                trial: t,
                verdict: verdict_name(r.verdict),
                margin: r.margin,
                worst: r.worst,
                first_violation: r.first_violation,
                coherence_defect: defect,
                coherent_input: coherent,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let violations = records.iter().filter(|r| r.verdict == "no").count();
    let strict = records.iter().filter(|r| r.verdict == "strict").count();
    let min_margin = records.iter().filter(|r| !r.coherent_input).map(|r| r.margin).reduce(f64::min);
    let mut table = Table::new(&["trial", "verdict", "margin", "worst", "coherence_defect"]);
    for r in &records {
        table.push(vec![
            r.trial.to_string(),
            r.verdict.into(),
            fmt(r.margin),
            fmt(r.worst),
            r.coherence_defect.map(fmt).unwrap_or_default(),
        ]);
    }
    let result = json!({
        "tolerance": tol,
        "violations": violations,
        "strict": strict,
        "min_margin_non_coherent": min_margin,
        "trials": records,
    });
    Ok(Report { result, table, passed: violations == 0, warnings: Vec::new() })
}

pub const CHECKS: [&str; 7] = ["identity", "gram", "trace", "resolution", "berezin-lieb", "irreducible", "defect"];

struct CheckOutcome {
    passed: bool,
    metrics: Map<String, Value>,
}

fn outcome(passed: bool, metrics: Value) -> CheckOutcome {
    match metrics {
        Value::Object(metrics) => CheckOutcome { passed, metrics },
        _ => unreachable!("metrics are objects"),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Report> {
    let requested: Vec<&str> = cfg.check.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let run_all = requested.contains(&"all");
    let names: Vec<&str> = if run_all { CHECKS.to_vec() } else { requested };
    if names.is_empty() {
        return Err(CliError::validation("--check is empty"));
    }
    for name in &names {
        if !CHECKS.contains(name) {
            return Err(CliError::validation(format!(
                "unknown check {name:?}; expected one of {} or all",
                CHECKS.join(", ")
            )));
        }
    }
    let mut warnings = Vec::new();
    let mut checks = Map::new();
    let mut table = Table::new(&["check", "passed", "metric", "value"]);
    let mut all_passed = true;
    for name in names {
        let skip = match name {
            "identity" if cfg.k > cfg.m => Some("needs k <= M"),
            "defect" if cfg.m == 0 => Some("needs M >= 1"),
            _ => None,
        };
        if let Some(reason) = skip {
            if run_all {
                warnings.push(format!("skipped {name}: {reason}"));
                continue;
            }
            return Err(CliError::validation(format!("check {name} {reason}")));
        }
        let o = run_check(cfg, name)?;
        all_passed &= o.passed;
        for (metric, value) in &o.metrics {
            let cell = match value {
                Value::Number(n) => n.to_string(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            table.push(vec![name.into(), o.passed.to_string(), metric.clone(), cell]);
        }
        let mut entry = o.metrics;
        entry.insert("passed".into(), Value::Bool(o.passed));
        checks.insert(name.into(), Value::Object(entry));
    }
    let result = json!({ "checks": checks });
    Ok(Report { result, table, passed: all_passed, warnings })
}

fn run_check(cfg: &RunConfig, name: &str) -> CliResult<CheckOutcome> {
    let (n, m, k) = (cfg.n, cfg.m, cfg.k);
    let base = space(cfg, m)?;
    let trials = cfg.trials.max(1) as u64;
    match name {
        "identity" => {
            base.at_level(k)?;
            let fit = decomposition_constants_in(&base, k, cfg.trials, cfg.seed)?;
            let held_out = (0..10u64)
                .map(|i| {
                    let psi = random_state(&base, &mut stream(cfg.seed, "verify-identity-holdout", i));
                    decomposition_residual(&psi, &fit.values)
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let tol = cfg.tol.unwrap_or(1e-8);
            Ok(outcome(
                held_out <= tol,
                json!({
                    "constants": fit.values,
                    "fit_residual": fit.residual,
                    "condition": fit.condition,
                    "held_out_residual": held_out,
                    "tolerance": tol,
                }),
            ))
        }
        "gram" => {
            base.at_level(m + k)?;
            let worst = (0..trials)
                .into_par_iter()
                .map(|t| -> CliResult<f64> {
                    let psi = random_state(&base, &mut stream(cfg.seed, "verify-gram", t));
                    let w = hermitian_eigenvalues(measure_prepare(&psi, k)?.matrix())?;
                    let c = hermitian_eigenvalues(cloning_apply(&HermitianOperator::pure(&psi), k)?.matrix())?;
                    Ok((0..w.len().max(c.len()))
                        .map(|i| (w.get(i).unwrap_or(&0.0) - c.get(i).unwrap_or(&0.0)).abs())
                        .fold(0.0, f64::max))
                })
                .collect::<CliResult<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let tol = cfg.tol.unwrap_or(1e-9);
            Ok(outcome(worst <= tol, json!({ "max_spectral_mismatch": worst, "trials": trials, "tolerance": tol })))
        }
        "trace" => {
            base.at_level(m + k)?;
            let expected = trace_gain(n, m, k);
            let ratios = (0..trials)
                .into_par_iter()
                .map(|t| -> CliResult<f64> {
                    let rho = random_density(&base, &mut stream(cfg.seed, "verify-trace", t)).scaled(1.0 + t as f64);
                    Ok(cloning_apply(&rho, k)?.trace() / rho.trace())
                })
                .collect::<CliResult<Vec<_>>>()?;
            let worst = ratios.iter().map(|r| (r - expected).abs() / expected).fold(0.0, f64::max);
            let tol = cfg.tol.unwrap_or(1e-10);
            Ok(outcome(
                worst <= tol,
                json!({ "ratio": ratios[0], "expected_ratio": expected, "max_relative_error": worst, "tolerance": tol }),
            ))
        }
        "resolution" => {
            let residual = resolution_residual_in(&base, cfg.samples, cfg.seed)?;
            let tol = cfg.tol.unwrap_or(0.05);
            Ok(outcome(residual <= tol, json!({ "residual": residual, "samples": cfg.samples, "tolerance": tol })))
        }
        "berezin-lieb" => {
            base.at_level(m + k)?;
            let f = fspec::parse(&cfg.f)?;
            let slacks = (0..trials)
                .into_par_iter()
                .map(|t| -> CliResult<(f64, bool)> {
                    let gamma = random_density(&base, &mut stream(cfg.seed, "verify-berezin-lieb", t));
                    let bl = berezin_lieb_gap(&gamma, k, &f, cfg.samples, derive_seed(cfg.seed, "berezin-lieb", t))?;
                    Ok((bl.rhs.mean + 3.0 * bl.rhs.stderr - bl.lhs, bl.holds()))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let failures = slacks.iter().filter(|s| !s.1).count();
            let min_slack = slacks.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
            Ok(outcome(
                failures == 0,
                json!({ "failures": failures, "trials": trials, "min_slack": min_slack, "samples_per_trial": cfg.samples }),
            ))
        }
        "irreducible" => {
            let d = commutant_dimension(&base)?;
            Ok(outcome(d == 1, json!({ "commutant_dimension": d, "space_dimension": base.dim() })))
        }
        "defect" => {
            let tol = cfg.tol.unwrap_or(1e-10);
            let mut max_coherent = 0.0f64;
            let mut min_random: Option<f64> = None;
            for t in 0..trials {
                let u = sample_haar_state(n, &mut stream(cfg.seed, "verify-defect-u", t));
                max_coherent = max_coherent.max(coherence_defect(&coherent_vector(&base, &u)?)?);
                if m >= 2 && base.dim() > n {
                    let psi = random_state(&base, &mut stream(cfg.seed, "verify-defect-psi", t));
                    let d = coherence_defect(&psi)?;
                    min_random = Some(min_random.map_or(d, |x| x.min(d)));
                }
            }
            let passed = max_coherent <= tol && min_random.is_none_or(|d| d > 1e-6);
            Ok(outcome(
                passed,
                json!({ "max_coherent_defect": max_coherent, "min_random_defect": min_random, "tolerance": tol }),
            ))
        }
        _ => unreachable!("names validated by the caller"),
    }
}

fn monte_carlo(rho: &HermitianOperator, f: &ConcaveFn, samples: usize, seed: u64) -> CliResult<MonteCarloEstimate> {
    if samples > MAX_SAMPLES {
        return Err(CliError::Resource(format!("{samples} samples exceeds the limit of {MAX_SAMPLES}")));
    }
    if !rho.is_density() {
        return Err(CoreError::NotDensity("a density matrix").into());
    }
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| wehrl_sample(rho, f, seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonteCarloEstimate::from_samples(&values, seed)?)
}

pub fn cmd_entropy(cfg: &RunConfig) -> CliResult<Report> {
    let f = fspec::parse(&cfg.f)?;
    let source = state::parse(&cfg.state)?;
    let base = space(cfg, cfg.m)?;
    let rho = source.draw(&base, cfg.seed, "entropy-state", 0)?.operator();
    let reference = coherent_wehrl_closed_form(cfg.n, cfg.m, &f)?;
    let closed = || wehrl_entropy(&rho, &f, Method::ClosedForm);
    let (value, stderr, samples, used) = match cfg.method.as_str() {
        "closed-form" => {
            let v = closed()?;
            (v.value, 0.0, 0, "closed-form")
        }
        "mc" => {
            let e = monte_carlo(&rho, &f, cfg.samples, cfg.seed)?;
            (e.mean, e.stderr, e.samples, "mc")
        }
        _ => match closed() {
            Ok(v) => (v.value, 0.0, 0, "closed-form"),
            Err(CoreError::Invalid(_)) => {
                let e = monte_carlo(&rho, &f, cfg.samples, cfg.seed)?;
                (e.mean, e.stderr, e.samples, "mc")
            }
            Err(e) => return Err(e.into()),
        },
    };
    let gap = value - reference;
    let passed = gap >= -3.0 * stderr - 1e-12;
    let mut table = Table::new(&["method", "value", "stderr", "samples", "coherent_value", "gap"]);
    table.push(vec![used.into(), fmt(value), fmt(stderr), samples.to_string(), fmt(reference), fmt(gap)]);
    let result = json!({
        "method": used,
        "value": value,
        "stderr": stderr,
        "samples": samples,
        "coherent_value": reference,
        "gap": gap,
    });
    Ok(Report { result, table, passed, warnings: Vec::new() })
}

pub fn cmd_limit_scan(cfg: &RunConfig) -> CliResult<Report> {
    let f = fspec::parse(&cfg.f)?;
    let limit = coherent_wehrl_closed_form(cfg.n, cfg.m, &f)?;
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    let mut previous: Option<f64> = None;
    for &k in &cfg.ks {
        if k > MAX_SCAN_K {
            warnings.push(format!("skipped k = {k}: above the scan limit {MAX_SCAN_K}"));
            continue;
        }
        let finite = match semiclassical_trace(cfg.n, cfg.m, k, &f) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                warnings.push(format!("skipped k = {k}: non-finite trace {v}"));
                continue;
            }
            Err(e) => {
                warnings.push(format!("skipped k = {k}: {e}"));
                continue;
            }
        };
        let gap = finite - limit;
        let non_increasing = previous.map(|p| gap.abs() <= p.abs());
        previous = Some(gap);
        rows.push((k, finite, gap, non_increasing));
    }
    let mut table = Table::new(&["k", "finite_trace", "limit_value", "gap", "gap_non_increasing"]);
    for &(k, finite, gap, flag) in &rows {
        table.push(vec![k.to_string(), fmt(finite), fmt(limit), fmt(gap), flag.map(|b| b.to_string()).unwrap_or_default()]);
    }
    let pairs = rows.iter().filter(|r| r.3.is_some()).count();
    let shrinking = rows.iter().filter(|r| r.3 == Some(true)).count();
    let result = json!({
        "limit_value": limit,
        "rows": rows.iter().map(|&(k, finite, gap, flag)| json!({
            "k": k, "finite_trace": finite, "limit_value": limit, "gap": gap, "gap_non_increasing": flag,
        })).collect::<Vec<_>>(),
        "non_increasing_pairs": shrinking,
        "pairs": pairs,
        "trend_non_increasing": shrinking == pairs,
    });
    Ok(Report { result, table, passed: true, warnings })
}
