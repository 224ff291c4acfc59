use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::Serialize;

use qstar_core::problem::{preset_params, resolve_document_text, resolve_problem, ProblemSource};
use qstar_core::solvers::{
    bellman_expectation_residual, estimate_return, truncation_horizon, SolveReportDocument,
};
use qstar_core::sweep::{sweep_1d, sweep_2d, Axis, DEFAULT_STEPS_1D, DEFAULT_STEPS_2D};
use qstar_core::{
    classify_regions, evaluate_policy, export_transition_graph, find_boundary, preset, presets,
    solve_exact, sweep_to_csv, BoundaryRequest, DeterministicPolicy, Error, Mdp, SolverConfig,
    SweepSpec,
};

use crate::documents::{EvalDocument, McCheck, McCheckDocument, ValidateDocument};
use crate::{
    BoundaryArgs, Command, Failure, Format, McCheckArgs, Output, Overrides, Source, SweepArgs,
    EXIT_FAILURE, EXIT_OK,
};

/// Bias bound for truncating Monte Carlo episodes.
const MC_TRUNCATION_BIAS: f64 = 1e-6;

type Outcome = Result<i32, Failure>;

pub(crate) fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { path, source, output } => validate(path, &source, &output, stdout),
        Command::Solve { source, output } => {
            let format = pick(&output, &[Format::Json, Format::Text], "solve")?;
            let mdp = load(&source)?;
            let report = solve_exact(&mdp, &SolverConfig::default())?;
            let doc = SolveReportDocument::new(&mdp, &report);
            let text = match format {
                Format::Text => doc.to_text(),
                _ => json(&doc),
            };
            emit(&output, &text, stdout)
        }
        Command::Eval { source, actions, output } => {
            let format = pick(&output, &[Format::Json, Format::Text], "eval")?;
            let mdp = load(&source)?;
            let pi = DeterministicPolicy::from_labels(&mdp, &actions)?;
            let q = evaluate_policy(&mdp, &pi)?;
            let doc = EvalDocument::new(&mdp, &pi, &q, bellman_expectation_residual(&mdp, &pi, &q));
            let text = match format {
                Format::Text => doc.to_text(),
                _ => json(&doc),
            };
            emit(&output, &text, stdout)
        }
        Command::Sweep1d(args) => sweep(&args, 1, stdout),
        Command::Sweep2d(args) => sweep(&args, 2, stdout),
        Command::Regions { sweep, state } => {
            let format = pick(&sweep.output, &[Format::Json, Format::Text], "regions")?;
            let spec = sweep_spec(&sweep, None)?;
            let result = match spec.axes.len() {
                1 => sweep_1d(&spec)?,
                _ => sweep_2d(&spec)?,
            };
            let regions = classify_regions(&result, state.as_deref())?;
            let text = match format {
                Format::Text => regions.to_text(),
                _ => json(&regions),
            };
            emit(&sweep.output, &text, stdout)
        }
        Command::Boundary(args) => boundary(&args, stdout, stderr),
        Command::Presets { output } => {
            let format = pick(&output, &[Format::Json, Format::Text], "presets")?;
            let all = presets();
            let text = match format {
                Format::Text => {
                    let mut out = String::new();
                    for p in &all {
                        let ranges: Vec<String> = p
                            .swept
                            .iter()
                            .map(|r| format!("{} in [{}, {}]", r.param, r.min, r.max))
                            .collect();
                        out.push_str(&format!("{}: {}\n", p.name, ranges.join(", ")));
                    }
                    out
                }
                _ => json(&all),
            };
            emit(&output, &text, stdout)
        }
        Command::Graph { source, output } => {
            pick(&output, &[Format::Dot], "graph")?;
            let mdp = load(&source)?;
            emit(&output, &export_transition_graph(&mdp), stdout)
        }
        Command::McCheck(args) => mc_check(&args, stdout),
        Command::Serve { port, static_dir } => {
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::Io(e.to_string()))?;
            let _ = writeln!(stderr, "serving on http://0.0.0.0:{port}");
            runtime
                .block_on(qstar_server::serve(port, static_dir))
                .map_err(|e| Failure::Io(format!("server: {e}")))?;
            Ok(EXIT_OK)
        }
    }
}

fn validate(
    path: Option<PathBuf>,
    source: &Source,
    output: &Output,
    stdout: &mut dyn Write,
) -> Outcome {
    let format = pick(output, &[Format::Text, Format::Json], "validate")?;
    let loaded = match path {
        Some(_) if source.mdp.is_some() || source.preset.is_some() => {
            return Err(Failure::Usage("give the document either as PATH or via --mdp".into()))
        }
        Some(p) => load_document(&p, &source.overrides),
        None => load(source),
    };
    let (doc, code) = match loaded {
        Ok(mdp) => (ValidateDocument::valid(&mdp), EXIT_OK),
        // Located violations are the command's output, not an internal error.
        Err(Failure::Core(Error::Validation(v))) if format == Format::Json => {
            (ValidateDocument::invalid(v), EXIT_FAILURE)
        }
        Err(e) => return Err(e),
    };
    let text = match format {
        Format::Json => json(&doc),
        _ => format!(
            "valid: {} states, {} state-action pairs, {} transitions\n",
            doc.states.unwrap_or(0),
            doc.pairs.unwrap_or(0),
            doc.transitions.unwrap_or(0)
        ),
    };
    emit(output, &text, stdout)?;
    Ok(code)
}

fn sweep(args: &SweepArgs, dims: usize, stdout: &mut dyn Write) -> Outcome {
    let name = if dims == 1 { "sweep1d" } else { "sweep2d" };
    let format = pick(&args.output, &[Format::Json, Format::Csv], name)?;
    let spec = sweep_spec(args, Some(dims))?;
    let result = if dims == 1 { sweep_1d(&spec)? } else { sweep_2d(&spec)? };
    let text = match format {
        Format::Csv => sweep_to_csv(&result)?,
        _ => json(&result),
    };
    emit(&args.output, &text, stdout)
}

fn boundary(args: &BoundaryArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let format = pick(&args.output, &[Format::Text, Format::Json], "boundary")?;
    let [a1, a2] = <[String; 2]>::try_from(args.actions.clone())
        .map_err(|_| Failure::Usage("--actions takes exactly two labels: A,B".into()))?;
    let experiment = preset(&args.preset)?;
    let parameter = match &args.param {
        Some(p) => p.clone(),
        None => match experiment.swept.as_slice() {
            [only] => only.param.clone(),
            _ => {
                return Err(Failure::Usage(format!(
                    "preset {} sweeps several parameters; choose one with --param",
                    experiment.name
                )))
            }
        },
    };
    let interval = match args.range.as_slice() {
        [] => {
            let r = experiment.swept_range(&parameter).ok_or_else(|| {
                Failure::Usage(format!(
                    "preset {} has no range for {parameter}; pass --range LO,HI",
                    experiment.name
                ))
            })?;
            [r.min, r.max]
        }
        &[lo, hi] => [lo, hi],
        _ => return Err(Failure::Usage("--range takes LO,HI".into())),
    };
    let req = BoundaryRequest {
        base: preset_params(&args.preset, &overrides(&args.overrides))?,
        parameter,
        state: args.state.clone(),
        actions: [a1, a2],
        interval,
        tol: args.tol,
        solver: SolverConfig::default(),
    };
    let result = find_boundary(&req)?;
    let text = match format {
        Format::Json => json(&result),
        _ => {
            for w in &result.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            format!("{:.6}\n", result.location)
        }
    };
    emit(&args.output, &text, stdout)
}

fn mc_check(args: &McCheckArgs, stdout: &mut dyn Write) -> Outcome {
    let format = pick(&args.output, &[Format::Json, Format::Text], "mc-check")?;
    let mdp = load(&args.source)?;
    let pi = if args.actions.is_empty() {
        solve_exact(&mdp, &SolverConfig::default())?.representative_policy()
    } else {
        DeterministicPolicy::from_labels(&mdp, &args.actions)?
    };
    let only = args.state.as_deref().map(|s| mdp.resolve_state(s)).transpose()?;
    let q = evaluate_policy(&mdp, &pi)?;
    let horizon = truncation_horizon(&mdp, MC_TRUNCATION_BIAS);
    let mut checks = Vec::new();
    for (i, (s, a)) in mdp.pairs().enumerate() {
        if only.is_some_and(|o| o != s) {
            continue;
        }
        // Each pair gets its own stream so adding a filter keeps the numbers.
        let seed = args.seed.wrapping_add(i as u64);
        let est = estimate_return(&mdp, &pi, s, a, args.episodes, horizon, seed)?;
        checks.push(McCheck::new(mdp.state_label(s), mdp.action_label(s, a), q.get(s, a), &est, seed));
    }
    let doc = McCheckDocument {
        policy: crate::documents::policy_labels(&mdp, &pi),
        episodes: args.episodes,
        horizon,
        checks,
    };
    let text = match format {
        Format::Text => doc.to_text(),
        _ => json(&doc),
    };
    emit(&args.output, &text, stdout)
}

/// Axes from `--param/--range/--steps`, falling back to the preset's swept
/// parameters and ranges. `dims = None` takes however many were selected.
fn sweep_spec(args: &SweepArgs, dims: Option<usize>) -> Result<SweepSpec, Failure> {
    let experiment = preset(&args.preset)?;
    let params: Vec<String> = if args.param.is_empty() {
        experiment.swept.iter().map(|r| r.param.clone()).collect()
    } else {
        args.param.clone()
    };
    let n = params.len();
    if let Some(d) = dims {
        if n != d {
            return Err(Failure::Usage(format!(
                "this sweep needs {d} parameter(s), {} selects {n}; choose with --param",
                if args.param.is_empty() { "the preset" } else { "--param" }
            )));
        }
    } else if !(1..=2).contains(&n) {
        return Err(Failure::Usage(format!("sweeps take 1 or 2 parameters, got {n}")));
    }

    let ranges: Vec<[f64; 2]> = if args.range.is_empty() {
        params
            .iter()
            .map(|p| {
                experiment.swept_range(p).map(|r| [r.min, r.max]).ok_or_else(|| {
                    Failure::Usage(format!(
                        "preset {} has no range for {p}; pass --range",
                        experiment.name
                    ))
                })
            })
            .collect::<Result<_, _>>()?
    } else if args.range.len() == 2 * n {
        args.range.chunks(2).map(|c| [c[0], c[1]]).collect()
    } else {
        return Err(Failure::Usage(format!("--range needs LO,HI for each of {n} axis(es)")));
    };

    let steps: Vec<usize> = match args.steps.len() {
        0 => vec![if n == 1 { DEFAULT_STEPS_1D } else { DEFAULT_STEPS_2D }; n],
        k if k == n => args.steps.clone(),
        _ => return Err(Failure::Usage(format!("--steps needs one count per axis ({n})"))),
    };

    let axes = params
        .into_iter()
        .zip(ranges)
        .zip(steps)
        .map(|((param, [min, max]), steps)| Axis { param, min, max, steps })
        .collect();
    Ok(SweepSpec {
        base: preset_params(&args.preset, &overrides(&args.overrides))?,
        axes,
        solver: SolverConfig::default(),
    })
}

fn overrides(o: &Overrides) -> IndexMap<String, f64> {
    o.set.iter().cloned().collect()
}

fn load(source: &Source) -> Result<Mdp, Failure> {
    match (&source.preset, &source.mdp) {
        (Some(name), _) => Ok(resolve_problem(
            &ProblemSource::Preset(name.clone()),
            &overrides(&source.overrides),
        )?),
        (None, Some(path)) => load_document(path, &source.overrides),
        (None, None) => Err(Failure::Usage("one of --preset or --mdp is required".into())),
    }
}

fn load_document(path: &Path, o: &Overrides) -> Result<Mdp, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(resolve_document_text(&text, &overrides(o))?)
}

/// The requested format if the command supports it; else the command's
/// default (first entry).
fn pick(output: &Output, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    match output.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => {
            let names: Vec<String> = allowed.iter().map(Format::to_string).collect();
            Err(Failure::Usage(format!(
                "{command} does not support --format {f} (use {})",
                names.join(" or ")
            )))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Outcome {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok(EXIT_OK)
}
