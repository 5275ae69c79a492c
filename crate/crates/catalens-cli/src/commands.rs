//! Subcommand handlers. Each one writes a JSON report (plus CSVs where the
//! output is plottable), prints a one-line summary, and returns whether
//! the check passed. Input problems surface as errors (exit 2); negative
//! verdicts return Ok(false) (exit 1).

use crate::report::{csv_f64, write_csv, write_json};
use crate::{Command, CounterexampleCommand, SearchArgs};
use anyhow::{bail, Context, Result};
use catalens::asymptotics::{
    dilation_sum_check, dilation_sum_check_exact, dixmier_envelope, weighted_square_sum,
    weighted_square_sum_exact, DyadicOperatorB, LazySpectrum, SpectrumDescriptor,
    SubsequenceStrategy,
};
use catalens::catalysis::{
    find_catalyst, l1_approximate, pm_check, strict_lp_dominance, verify_catalysis,
    CatalysisError, PGrid, PmVerdict, SearchOptions, StrictVerdict,
};
use catalens::counterexample::{self, RunAllConfig, SGrid};
use catalens::numeric::rational_to_estimate;
use catalens::spectra::{parse_rational, parse_spectrum_str, render_rational};
use catalens::{Rational, Spectrum};
use std::path::Path;

pub fn dispatch(command: Command, out_dir: &Path, precision: u32) -> Result<bool> {
    match command {
        Command::Majorize { a, b } => majorize(&a, &b, out_dir),
        Command::Tensor { a, c, top_k } => tensor(&a, &c, top_k, out_dir),
        Command::PmCheck { a, b, p_grid } => pm(&a, &b, p_grid, out_dir),
        Command::StrictDominance { a, b, p_grid } => strict(&a, &b, p_grid, out_dir),
        Command::FindCatalyst { a, b, search } => find(&a, &b, &search, out_dir),
        Command::VerifyCatalyst { a, b, c } => verify(&a, &b, &c, out_dir),
        Command::L1Approximate {
            a,
            b,
            epsilon,
            p_grid,
            search,
        } => l1(&a, &b, &epsilon, p_grid, &search, out_dir),
        Command::DixmierEstimate {
            spec,
            strategy,
            min_exp,
            max_exp,
            n_max,
            budget,
        } => dixmier(&spec, &strategy, min_exp, max_exp, n_max, budget, out_dir),
        Command::IdentityCheck {
            s,
            x,
            weighted_square,
        } => identity(&s, x.as_deref(), weighted_square, out_dir),
        Command::Counterexample(CounterexampleCommand::RunAll {
            alpha,
            s_grid,
            n_max,
            gap_margin,
            density_m_max,
            seed,
        }) => run_all(
            alpha,
            s_grid,
            n_max,
            gap_margin,
            density_m_max,
            seed,
            precision,
            out_dir,
        ),
    }
}

fn load_spectrum(path: &Path) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading spectrum file {}", path.display()))?;
    parse_spectrum_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn spectrum_strings(s: &Spectrum) -> Vec<String> {
    s.values().iter().map(render_rational).collect()
}

fn majorize(a_path: &Path, b_path: &Path, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let check = a.submajorizes(&b);
    let report = serde_json::json!({
        "command": "majorize",
        "a": spectrum_strings(&a),
        "b": spectrum_strings(&b),
        "b_submajorized_by_a": check.holds,
        "first_violation": check.first_violation.as_ref().map(|v| serde_json::json!({
            "index": v.index,
            "partial_sum_a": render_rational(&v.dominating_sum),
            "partial_sum_b": render_rational(&v.dominated_sum),
        })),
    });
    let path = write_json(out_dir, "majorize.json", &report)?;
    match &check.first_violation {
        None => println!("b ≺≺ a holds (report: {})", path.display()),
        Some(v) => println!(
            "b ≺≺ a fails at n = {} ({} > {}) (report: {})",
            v.index,
            render_rational(&v.dominated_sum),
            render_rational(&v.dominating_sum),
            path.display()
        ),
    }
    Ok(check.holds)
}

fn tensor(a_path: &Path, c_path: &Path, top_k: Option<usize>, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let c = load_spectrum(c_path)?;
    let values: Vec<Rational> = match top_k {
        Some(k) => a.tensor_prefix(&c, k),
        None => a.tensor(&c)?.values().to_vec(),
    };
    let rendered: Vec<String> = values.iter().map(render_rational).collect();
    let report = serde_json::json!({
        "command": "tensor",
        "type": "finite",
        "values": rendered,
    });
    let json_path = write_json(out_dir, "tensor.json", &report)?;
    let rows: Vec<String> = rendered.clone();
    write_csv(out_dir, "tensor.csv", "value", &rows)?;
    println!(
        "tensor spectrum with {} entries (report: {})",
        rendered.len(),
        json_path.display()
    );
    Ok(true)
}

fn pm(a_path: &Path, b_path: &Path, grid: Option<PGrid>, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let grid = grid.unwrap_or_default();
    let report = pm_check(&a, &b, &grid);
    let passed = report.verdict == PmVerdict::Pass;
    let doc = serde_json::json!({
        "command": "pm-check",
        "a": spectrum_strings(&a),
        "b": spectrum_strings(&b),
        "report": serde_json::to_value(&report)?,
    });
    let path = write_json(out_dir, "pm-check.json", &doc)?;
    println!("pm-check verdict: {:?} (report: {})", report.verdict, path.display());
    Ok(passed)
}

fn strict(a_path: &Path, b_path: &Path, grid: Option<PGrid>, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let grid = grid.unwrap_or_default();
    let report = strict_lp_dominance(&a, &b, &grid);
    let passed = report.verdict == StrictVerdict::StrictPass;
    let doc = serde_json::json!({
        "command": "strict-dominance",
        "a": spectrum_strings(&a),
        "b": spectrum_strings(&b),
        "report": serde_json::to_value(&report)?,
    });
    let path = write_json(out_dir, "strict-dominance.json", &doc)?;
    println!(
        "strict-dominance verdict: {:?} (report: {})",
        report.verdict,
        path.display()
    );
    Ok(passed)
}

fn search_options(args: &SearchArgs) -> SearchOptions {
    SearchOptions {
        max_dim: args.max_dim,
        budget: args.budget,
        seed: args.seed,
    }
}

fn find(a_path: &Path, b_path: &Path, args: &SearchArgs, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let options = search_options(args);
    let outcome = find_catalyst(&a, &b, &options);
    let doc = serde_json::json!({
        "command": "find-catalyst",
        "options": serde_json::to_value(options)?,
        "found": outcome.certificate.is_some(),
        "evaluations": outcome.evaluations,
        "best_violation_per_dim": outcome.best_violation_per_dim,
        "obstruction": outcome.obstruction,
        "certificate": outcome.certificate.as_ref().map(|c| c.to_json()),
    });
    let path = write_json(out_dir, "find-catalyst.json", &doc)?;
    match &outcome.certificate {
        Some(cert) => println!(
            "catalyst found: c = [{}] (report: {})",
            spectrum_strings(&cert.c).join(", "),
            path.display()
        ),
        None => println!(
            "catalyst not found within budget{} (report: {})",
            outcome
                .obstruction
                .as_deref()
                .map(|o| format!(" — {o}"))
                .unwrap_or_default(),
            path.display()
        ),
    }
    Ok(outcome.certificate.is_some())
}

fn verify(a_path: &Path, b_path: &Path, c_path: &Path, out_dir: &Path) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let c = load_spectrum(c_path)?;
    let cert = verify_catalysis(&a, &b, &c)?;
    let doc = serde_json::json!({
        "command": "verify-catalyst",
        "certificate": cert.to_json(),
    });
    let path = write_json(out_dir, "certificate.json", &doc)?;
    if cert.valid {
        println!(
            "certificate valid; tight prefixes at {:?} (report: {})",
            cert.tight_indices(),
            path.display()
        );
    } else {
        println!(
            "catalysis fails at n = {:?} (report: {})",
            cert.first_violation(),
            path.display()
        );
    }
    Ok(cert.valid)
}

fn l1(
    a_path: &Path,
    b_path: &Path,
    epsilon: &str,
    grid: Option<PGrid>,
    args: &SearchArgs,
    out_dir: &Path,
) -> Result<bool> {
    let a = load_spectrum(a_path)?;
    let b = load_spectrum(b_path)?;
    let eps: Rational = parse_rational(epsilon)
        .map_err(|e| anyhow::anyhow!("bad --epsilon: {e}"))?;
    let grid = grid.unwrap_or_default();
    let options = search_options(args);
    let report = match l1_approximate(&a, &b, &eps, &grid, &options) {
        Ok(report) => report,
        Err(err @ (CatalysisError::PmFails { .. } | CatalysisError::StrictFails { .. })) => {
            let doc = serde_json::json!({
                "command": "l1-approximate",
                "epsilon": render_rational(&eps),
                "failed_precondition": err.to_string(),
                "seed": args.seed,
            });
            let path = write_json(out_dir, "l1-approximate.json", &doc)?;
            println!("l1-approximate: {err} (report: {})", path.display());
            return Ok(false);
        }
        Err(err) => return Err(err.into()),
    };
    let found = report.search.certificate.is_some();
    let doc = serde_json::json!({
        "command": "l1-approximate",
        "epsilon": render_rational(&eps),
        "n": report.n,
        "scale_factor": render_rational(&report.scale_factor),
        "truncated_scaled_b": spectrum_strings(&report.truncated_scaled_b),
        "distance_bound": report.distance_bound_string(),
        "pm_verdict": serde_json::to_value(&report.pm.verdict)?,
        "strict_verdict": serde_json::to_value(&report.strict.verdict)?,
        "catalyst_found": found,
        "certificate": report.search.certificate.as_ref().map(|c| c.to_json()),
        "seed": args.seed,
    });
    let path = write_json(out_dir, "l1-approximate.json", &doc)?;
    println!(
        "l1-approximate: n = {}, distance bound {}, catalyst {} (report: {})",
        report.n,
        report.distance_bound_string(),
        if found { "found" } else { "not found within budget" },
        path.display()
    );
    Ok(found)
}

fn dixmier(
    spec_path: &Path,
    strategy: &str,
    min_exp: u32,
    max_exp: u32,
    n_max: u32,
    budget: u64,
    out_dir: &Path,
) -> Result<bool> {
    let text = std::fs::read_to_string(spec_path)
        .with_context(|| format!("reading descriptor {}", spec_path.display()))?;
    let descriptor: SpectrumDescriptor =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", spec_path.display()))?;
    let spec: LazySpectrum = descriptor.to_lazy()?;
    let strategy = match strategy {
        "auto" => SubsequenceStrategy::Auto,
        "dyadic" => SubsequenceStrategy::Dyadic { min_exp, max_exp },
        "blocks" => SubsequenceStrategy::BlockBoundaries { n_max },
        other => bail!("unknown strategy {other:?}: use auto, dyadic, or blocks"),
    };
    let envelope = dixmier_envelope(&spec, strategy, budget)?;
    let doc = serde_json::json!({
        "command": "dixmier-estimate",
        "descriptor": serde_json::to_value(&descriptor)?,
        "envelope": serde_json::to_value(&envelope)?,
    });
    let path = write_json(out_dir, "dixmier.json", &doc)?;
    let rows: Vec<String> = envelope
        .samples
        .iter()
        .map(|s| format!("{},{},{}", csv_f64(s.log2_n), csv_f64(s.x.value), csv_f64(s.x.bound)))
        .collect();
    write_csv(out_dir, "envelope.csv", "n_bits,x_n,error_bound", &rows)?;
    println!(
        "envelope [{:.6}, {:.6}] over {} samples (report: {})",
        envelope.lower,
        envelope.upper,
        envelope.samples.len(),
        path.display()
    );
    Ok(true)
}

fn parse_sequence(text: &str) -> Result<Vec<i64>> {
    if text == "delta0" {
        return Ok(vec![1]);
    }
    if let Some(len) = text.strip_prefix("chi-I:") {
        let len: u64 = len.parse().context("bad chi-I length")?;
        return Ok((0..len)
            .map(|m| if DyadicOperatorB::contains(m) { 1 } else { 0 })
            .collect());
    }
    text.split(',')
        .map(|part| part.trim().parse::<i64>().context("bad sequence entry"))
        .collect()
}

fn identity(s_text: &str, x: Option<&str>, weighted: bool, out_dir: &Path) -> Result<bool> {
    if x.is_none() && !weighted {
        bail!("identity-check needs --x and/or --weighted-square");
    }
    let mut passed = true;
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), "identity-check".into());
    doc.insert("s".into(), s_text.into());

    let s_int: Option<u32> = s_text.parse().ok();
    let s_f64: f64 = s_text
        .parse()
        .map_err(|e| anyhow::anyhow!("bad --s: {e}"))?;
    if !s_f64.is_finite() || s_f64 <= 0.0 {
        bail!("--s must be positive");
    }

    if let Some(x_text) = x {
        let x = parse_sequence(x_text)?;
        match s_int {
            Some(s) if s >= 1 => {
                let rats: Vec<Rational> = x
                    .iter()
                    .map(|&v| Rational::from_integer(v.into()))
                    .collect();
                let check = dilation_sum_check_exact(&rats, s);
                let exact_equal = check.discrepancy == Rational::from_integer(0.into());
                passed &= exact_equal;
                doc.insert(
                    "dilation".into(),
                    serde_json::json!({
                        "mode": "exact-rational",
                        "lhs": render_rational(&check.lhs),
                        "rhs": render_rational(&check.rhs),
                        "discrepancy": render_rational(&check.discrepancy),
                        "equal": exact_equal,
                    }),
                );
                println!(
                    "dilation identity (exact): lhs = {} rhs = {} ({})",
                    render_rational(&check.lhs),
                    render_rational(&check.rhs),
                    if exact_equal { "equal" } else { "NOT EQUAL" }
                );
            }
            _ => {
                let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
                let check = dilation_sum_check(&xf, s_f64)?;
                let rel = check.discrepancy.abs() / check.lhs.abs().max(1.0);
                let ok = rel <= 1e-10;
                passed &= ok;
                doc.insert(
                    "dilation".into(),
                    serde_json::json!({
                        "mode": "float",
                        "lhs": check.lhs,
                        "rhs": check.rhs,
                        "discrepancy": check.discrepancy,
                        "relative": rel,
                        "relative_tolerance": 1e-10,
                        "within_tolerance": ok,
                    }),
                );
                println!(
                    "dilation identity (float): lhs = {} rhs = {} rel = {:e}",
                    check.lhs, check.rhs, rel
                );
            }
        }
    }

    if weighted {
        let est = weighted_square_sum(s_f64)?;
        let mut entry = serde_json::json!({
            "closed_form": { "value": est.value, "error_bound": est.bound },
        });
        if let Some(s) = s_int.filter(|&s| s >= 1) {
            let exact = weighted_square_sum_exact(s);
            let exact_f = rational_to_estimate(&exact);
            let ok = (est.value - exact_f.value).abs() <= est.bound + exact_f.bound + 1e-12;
            passed &= ok;
            entry["exact"] = serde_json::json!(render_rational(&exact));
            entry["agrees"] = serde_json::json!(ok);
            println!(
                "weighted square sum: {} (exact {})",
                est.value,
                render_rational(&exact)
            );
        } else {
            println!("weighted square sum: {} ± {:e}", est.value, est.bound);
        }
        doc.insert("weighted_square_sum".into(), entry);
    }

    let path = write_json(out_dir, "identity-check.json", &serde_json::Value::Object(doc))?;
    println!("report: {}", path.display());
    Ok(passed)
}

#[allow(clippy::too_many_arguments)]
fn run_all(
    alpha: Option<f64>,
    s_grid: Option<SGrid>,
    n_max: u32,
    gap_margin: f64,
    density_m_max: u64,
    seed: u64,
    precision: u32,
    out_dir: &Path,
) -> Result<bool> {
    let config = RunAllConfig {
        alpha,
        sweep_grid: s_grid.clone().unwrap_or_else(SGrid::default_sweep),
        membership_grid: SGrid::default_membership(),
        n_max,
        gap_margin,
        precision_bits: precision,
        density_m_max,
        ..RunAllConfig::default()
    };
    let run = counterexample::run_all(&config)?;

    let sweep_rows: Vec<String> = run
        .sweep
        .rows
        .iter()
        .map(|r| format!("{},{},{}", csv_f64(r.s), csv_f64(r.value.value), csv_f64(r.value.bound)))
        .collect();
    let sweep_csv = write_csv(out_dir, "sweep.csv", "s,value,error_bound", &sweep_rows)?;

    let lower_rows: Vec<String> = run
        .lower
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n,
                r.n_bits,
                r.numerator,
                csv_f64(r.x.value),
                csv_f64(r.x_pow2_convention),
                csv_f64(r.closed_form)
            )
        })
        .collect();
    let lower_csv = write_csv(
        out_dir,
        "lower.csv",
        "n,n_bits,numerator,x,x_pow2_convention,closed_form",
        &lower_rows,
    )?;

    let gap_rows: Vec<String> = run
        .gap
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n,
                csv_f64(r.log2_n),
                csv_f64(r.x_b.value),
                csv_f64(r.x_a_at_matched_scale.value),
                csv_f64(r.gap_to_limit),
                csv_f64(r.gap_at_matched_scale)
            )
        })
        .collect();
    write_csv(
        out_dir,
        "gap.csv",
        "n,log2_n,x_b,x_a_at_matched_scale,gap_to_limit,gap_at_matched_scale",
        &gap_rows,
    )?;

    let density_rows: Vec<String> = run
        .density
        .samples
        .iter()
        .map(|(t, f)| format!("{},{}", csv_f64(*t), csv_f64(*f)))
        .collect();
    write_csv(out_dir, "density.csv", "t,f", &density_rows)?;

    let passed = run.pm.all_nonnegative
        && run.gap.witnessed_from.is_some_and(|n| n <= 2)
        && run.density.continuous_at_two
        && run.density.endpoints_equal
        && run.density.critical_point_exact
        && run.density.discrete_within_bound
        && run.sweep.max_value < counterexample::upper_limsup_constant();

    let doc = serde_json::json!({
        "command": "counterexample run-all",
        "seed": seed,
        "alpha": {
            "value": run.alpha,
            "bracket_lower": run.alpha_bracket.0,
            "bracket_upper": run.alpha_bracket.1,
        },
        "delta": run.delta_report.delta,
        "b_norm_one_plus_delta": serde_json::to_value(run.params.b_norm)?,
        "bounds": {
            "upper_sweep_max": run.sweep.max_value,
            "upper_sweep_argmax_s": run.sweep.argmax_s,
            "upper_limsup_constant": counterexample::upper_limsup_constant(),
            "lower_limit_constant": counterexample::lower_limit_constant(),
            "lower_last_x": run.lower.last().map(|r| r.x.value),
            "pm_all_nonnegative": run.pm.all_nonnegative,
            "delta_all_certified": run.delta_report.all_certified,
        },
        "sweep_csv_path": sweep_csv
            .file_name()
            .map(|n| n.to_string_lossy().into_owned()),
        "lower_csv_path": lower_csv
            .file_name()
            .map(|n| n.to_string_lossy().into_owned()),
        "gap_table": serde_json::to_value(&run.gap)?,
        "density_profile": serde_json::to_value(&run.density)?,
        "passed": passed,
    });
    let path = write_json(out_dir, "counterexample.json", &doc)?;
    println!(
        "α = {:.6}, δ = {}, sweep max = {:.6}, gap witnessed from n = {:?} (report: {})",
        run.alpha,
        run.delta_report.delta,
        run.sweep.max_value,
        run.gap.witnessed_from,
        path.display()
    );
    Ok(passed)
}
