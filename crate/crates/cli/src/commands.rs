use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chafee_core::census::{census_entry, random_corpus, Census, CensusConfig};
use chafee_core::connections::{connect_mode_j, no_homoclinic_probe, Connection, ConnectionConfig, ProbeConfig};
use chafee_core::equilibria::{enumerate_equilibria, mode_count, Equilibrium, ShootingConfig, Sign};
use chafee_core::io;
use chafee_core::pullback::{attractor_section, morse_inventory, pullback_equilibrium, NonAutEquilibrium, PullbackConfig};
use chafee_core::structure::{classify_oscillation, lap_number, ClassifyConfig};
use chafee_core::{evolve, Error as CoreError, Field64, Grid64};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::manifest::{self, Artifact, ArtifactLog, Certification, RunError};
use crate::svg::{self, Series};
use crate::{CliError, Command, RunOptions};

const EQUILIBRIUM_RESIDUAL_TOL: f64 = 1e-8;

/// What a command hands back for the manifest.
pub struct CommandOutput {
    pub artifacts: Vec<Artifact>,
    pub certifications: Vec<Certification>,
    pub errors: Vec<RunError>,
    pub summary: Value,
}

pub fn dispatch(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    match opts.command {
        Command::Equilibria => cmd_equilibria(opts),
        Command::Evolve => cmd_evolve(opts),
        Command::Pullback => cmd_pullback(opts),
        Command::Connect => cmd_connect(opts),
        Command::Omega => cmd_omega(opts),
        Command::Report => cmd_report(opts),
    }
}

fn grid(opts: &RunOptions) -> Result<Grid64, CliError> {
    Grid64::new(opts.config.solver.n_modes).map_err(CliError::config)
}

fn cert(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Certification {
    Certification {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn run_error(what: impl Into<String>, err: &CoreError) -> RunError {
    RunError {
        what: what.into(),
        message: err.to_string(),
        exit_code: crate::core_exit_code(err),
    }
}

fn modes_for(lambda: f64, requested: &Option<Vec<usize>>) -> Result<Vec<usize>, CliError> {
    morse_inventory(lambda)?;
    let n = mode_count(lambda);
    match requested {
        None => Ok((1..=n).collect()),
        Some(list) => {
            if let Some(&j) = list.iter().find(|&&j| j == 0 || j > n) {
                return Err(CliError::from(CoreError::NoSuchEquilibrium { lambda, j }));
            }
            Ok(list.clone())
        }
    }
}

fn tasks(modes: &[usize]) -> Vec<(usize, Sign)> {
    modes.iter().flat_map(|&j| [(j, Sign::Plus), (j, Sign::Minus)]).collect()
}

fn lambda_dir(lambda: f64) -> String {
    format!("lambda_{lambda}")
}

fn cmd_equilibria(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    let cfg = &opts.config.equilibria;
    let grid = grid(opts)?;
    let shooting = ShootingConfig::default();
    let results: Vec<(f64, Result<Vec<Equilibrium<f64>>, CoreError>)> = cfg
        .lambdas
        .par_iter()
        .map(|&lambda| (lambda, enumerate_equilibria(&grid, lambda, cfg.beta, &shooting)))
        .collect();

    let mut log = ArtifactLog::new(&opts.out);
    let mut certifications = Vec::new();
    let mut errors = Vec::new();
    let mut counts = serde_json::Map::new();
    for (lambda, res) in results {
        let eqs = match res {
            Ok(eqs) => eqs,
            Err(e) => {
                errors.push(run_error(format!("lambda {lambda}"), &e));
                continue;
            }
        };
        let dir = opts.out.join("equilibria").join(lambda_dir(lambda));
        for e in &eqs {
            log.record_all(&io::write_equilibrium(&dir, &e.label(), e)?)?;
        }
        let n = mode_count(lambda);
        let worst = eqs.iter().map(|e| e.residual).fold(0.0, f64::max);
        let zeros_ok = eqs.iter().all(|e| e.zeros.len() == e.j.saturating_sub(1));
        certifications.push(cert(
            format!("equilibria lambda={lambda}"),
            eqs.len() == 2 * n + 1 && worst <= EQUILIBRIUM_RESIDUAL_TOL && zeros_ok,
            format!("{} states, max residual {worst:.3e}, zero counts ok: {zeros_ok}", eqs.len()),
        ));
        counts.insert(
            lambda.to_string(),
            json!({
                "count": eqs.len(),
                "labels": eqs.iter().map(|e| e.label()).collect::<Vec<_>>(),
                "max_residual": worst,
            }),
        );
    }
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications,
        errors,
        summary: json!({ "beta": cfg.beta, "lambdas": counts }),
    })
}

fn cmd_evolve(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    let cfg = &opts.config.evolve;
    let grid = grid(opts)?;
    let forcing = opts.config.forcing.build()?;
    let solver = opts.config.solver.build(cfg.lambda)?;
    let u0 = match &cfg.initial_csv {
        Some(path) => {
            let f = io::read_field_csv(Path::new(path)).map_err(|e| CliError::Config(e.to_string()))?;
            if f.len() != grid.n_modes() {
                return Err(CliError::Config(format!(
                    "{path} has {} interior points, the grid has {}",
                    f.len(),
                    grid.n_modes()
                )));
            }
            Field64::new(&grid, f.into_values()).map_err(CliError::config)?
        }
        None => Field64::from_sine_series(&grid, &cfg.coefficients),
    };
    let traj = evolve(&u0, cfg.t0, cfg.t1, &forcing, &solver)?;
    let mut log = ArtifactLog::new(&opts.out);
    log.record_all(&io::write_trajectory(&opts.out.join("trajectory"), &traj)?)?;
    let last = traj.final_state();
    let laps: Vec<usize> = traj.states.iter().map(|s| lap_number(s).cyclic).collect();
    let class = classify_oscillation(last, &ClassifyConfig::default());
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications: Vec::new(),
        errors: Vec::new(),
        summary: json!({
            "lambda": cfg.lambda,
            "snapshots": traj.len(),
            "final_time": traj.final_time(),
            "final_sup_norm": last.sup_norm(),
            "max_sup_norm": traj.max_sup_norm(),
            "lap_numbers": laps,
            "final_class": class,
        }),
    })
}

fn pullback_config(opts: &RunOptions) -> Result<PullbackConfig, CliError> {
    let p = &opts.config.pullback;
    Ok(PullbackConfig {
        tol: p.tol,
        stride: p.stride,
        k_max: p.k_max,
        solver: opts.config.solver.build(p.lambda)?,
        ..PullbackConfig::default()
    })
}

fn cmd_pullback(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    let p = &opts.config.pullback;
    let grid = grid(opts)?;
    let forcing = opts.config.forcing.build()?;
    let cfg = pullback_config(opts)?;
    let modes = modes_for(p.lambda, &p.modes)?;
    let results: Vec<((usize, Sign), Result<NonAutEquilibrium, CoreError>)> = tasks(&modes)
        .into_par_iter()
        .map(|(j, sign)| ((j, sign), pullback_equilibrium(&grid, j, sign, p.lambda, &forcing, (p.t_a, p.t_b), &cfg)))
        .collect();

    let root = opts.out.join("pullback");
    let mut log = ArtifactLog::new(&opts.out);
    let mut certifications = Vec::new();
    let mut errors = Vec::new();
    let mut summary = serde_json::Map::new();
    let mut built = Vec::new();
    for ((j, sign), res) in results {
        let name = format!("xi_{j}_{}", sign.label());
        match res {
            Ok(xi) => {
                log.record_all(&io::write_nonaut_equilibrium(&root.join(&name), &xi)?)?;
                let c = &xi.certificate;
                certifications.push(cert(
                    format!("pullback {name}"),
                    c.certified,
                    format!(
                        "delta {:.3e}, invariance {:.3e}, zero error {:.3e}, strip violation {:.3e}, monotone {}",
                        c.final_delta, c.invariance_error, c.zero_error, c.strip_violation, c.monotone
                    ),
                ));
                summary.insert(name, serde_json::to_value(c).map_err(|e| CliError::Io(e.to_string()))?);
                built.push(xi);
            }
            Err(e) => {
                if let CoreError::NonConvergence { history, .. } = &e {
                    let path = root.join(&name).join("convergence.csv");
                    write_history(&path, history)?;
                    log.record(&path)?;
                }
                errors.push(run_error(name, &e));
            }
        }
    }

    let mut section_labels = Value::Null;
    if errors.is_empty() && p.modes.is_none() {
        let section = attractor_section(&grid, p.t_a, p.lambda, &built, &[])?;
        let dir = root.join("section");
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let mut members = Vec::new();
        for (member, field) in &section.members {
            let stem = match member {
                chafee_core::pullback::SectionMember::Equilibrium { label } => label.to_string(),
                chafee_core::pullback::SectionMember::UnstableManifold { index } => format!("orbit_{index}"),
            };
            let path = dir.join(format!("{stem}.csv"));
            io::write_field_csv(&path, field)?;
            log.record(&path)?;
            members.push(json!({ "member": member, "file": format!("{stem}.csv"), "sup_norm": field.sup_norm() }));
        }
        let path = dir.join("section.json");
        io::write_json(&path, &json!({ "time": section.time, "lambda": section.lambda, "members": members }))?;
        log.record(&path)?;
        section_labels = json!(section.labels());
    }
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications,
        errors,
        summary: json!({ "lambda": p.lambda, "window": [p.t_a, p.t_b], "equilibria": summary, "section": section_labels }),
    })
}

fn write_history(path: &Path, history: &[(f64, f64)]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut text = String::from("s_k,delta_k\n");
    for (s, d) in history {
        text.push_str(&format!("{s},{d}\n"));
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn cmd_connect(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    let c = &opts.config.connect;
    let grid = grid(opts)?;
    let forcing = opts.config.forcing.build()?;
    let solver = opts.config.solver.build(c.lambda)?;
    let modes = modes_for(c.lambda, &c.modes)?;
    let cfg = ConnectionConfig {
        epsilon: c.epsilon,
        s0: c.s0,
        horizon: c.horizon,
        solver,
        pullback: PullbackConfig {
            solver,
            ..pullback_config(opts)?
        },
        ..ConnectionConfig::default()
    };
    let results: Vec<((usize, Sign), Result<Connection, CoreError>)> = tasks(&modes)
        .into_par_iter()
        .map(|(j, sign)| ((j, sign), connect_mode_j(&grid, j, sign, c.lambda, &forcing, &cfg)))
        .collect();

    let root = opts.out.join("connect");
    let mut log = ArtifactLog::new(&opts.out);
    let mut certifications = Vec::new();
    let mut errors = Vec::new();
    let mut summary = serde_json::Map::new();
    for ((j, sign), res) in results {
        let name = format!("zeta_{j}_{}", sign.label());
        match res {
            Ok(conn) => {
                log.record_all(&io::write_connection(&root.join(&name), &conn)?)?;
                let k = &conn.certificate;
                certifications.push(cert(
                    format!("connection {name}"),
                    k.certified,
                    format!(
                        "recession {:.3e}, halving {:.3e}, forward {:.3e}, lap constant {}",
                        k.recession_discrepancy, k.halving_discrepancy, k.forward_final, k.lap_constant
                    ),
                ));
                summary.insert(name, serde_json::to_value(k).map_err(|e| CliError::Io(e.to_string()))?);
            }
            Err(e) => errors.push(run_error(name, &e)),
        }
    }

    let probe = ProbeConfig {
        epsilon: c.epsilon,
        horizon: c.probe_horizon,
        random_trials: c.probe_trials,
        seed: opts.config.seed,
        solver,
        ..ProbeConfig::default()
    };
    let report = no_homoclinic_probe(&grid, c.lambda, &forcing, &probe)?;
    let path = root.join("no_homoclinic.json");
    fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
    io::write_json(&path, &report)?;
    log.record(&path)?;
    certifications.push(cert(
        "no homoclinic orbit to zero",
        report.all_clear(),
        format!("{} trials", report.trials.len()),
    ));
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications,
        errors,
        summary: json!({ "lambda": c.lambda, "connections": summary, "probe_all_clear": report.all_clear() }),
    })
}

fn cmd_omega(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    let o = &opts.config.omega;
    let grid = grid(opts)?;
    let forcing = opts.config.forcing.build()?;
    let mut cfg = CensusConfig::new(o.lambda, forcing);
    cfg.runs = o.runs;
    cfg.seed = opts.config.seed;
    cfg.horizon = o.horizon;
    cfg.sample_count = o.sample_count;
    cfg.antisymmetric = o.antisymmetric;
    cfg.solver = opts.config.solver.build(o.lambda)?.with_stride(o.snapshot_stride);
    morse_inventory(o.lambda)?;

    let corpus = random_corpus(cfg.seed, cfg.runs, cfg.antisymmetric);
    let entries = corpus
        .par_iter()
        .enumerate()
        .map(|(i, c)| census_entry(&grid, i, c, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let census = Census::from_entries(o.lambda, cfg.seed, entries)?;

    let dir = opts.out.join("omega");
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut log = ArtifactLog::new(&opts.out);
    let corpus_path = dir.join("corpus.csv");
    let width = corpus.first().map_or(0, Vec::len);
    let mut text = String::from("run");
    for n in 1..=width {
        text.push_str(&format!(",c{n}"));
    }
    text.push('\n');
    for (i, c) in corpus.iter().enumerate() {
        text.push_str(&i.to_string());
        for v in c {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    fs::write(&corpus_path, text).map_err(|e| CliError::io(&corpus_path, e))?;
    log.record(&corpus_path)?;
    let census_path = dir.join("census.json");
    io::write_json(&census_path, &census)?;
    log.record(&census_path)?;

    let certifications = vec![
        cert(
            "omega classifications unmixed",
            census.mixed == 0,
            format!("{} of {} runs mixed", census.mixed, census.entries.len()),
        ),
        cert(
            "omega runs assigned to inventory",
            census.unassigned == 0,
            format!("{} of {} runs unassigned", census.unassigned, census.entries.len()),
        ),
    ];
    let nonempty: Vec<&String> = census.counts.iter().filter(|(_, &n)| n > 0).map(|(k, _)| k).collect();
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications,
        errors: Vec::new(),
        summary: json!({
            "lambda": o.lambda,
            "runs": census.entries.len(),
            "counts": census.counts,
            "observed": nonempty,
            "unassigned": census.unassigned,
            "mixed": census.mixed,
        }),
    })
}

#[derive(Deserialize)]
struct ConnectionJson {
    j: usize,
    sign: Sign,
    forward_distance: Vec<f64>,
    lap_sequence: Vec<usize>,
}

#[derive(Deserialize)]
struct CensusJson {
    lambda: f64,
    counts: BTreeMap<String, usize>,
}

/// Verifies the given manifests and renders consolidated JSON plus SVG plots.
fn cmd_report(opts: &RunOptions) -> Result<CommandOutput, CliError> {
    if opts.manifests.is_empty() {
        return Err(CliError::Config("report needs at least one manifest".into()));
    }
    let mut loaded = Vec::new();
    for path in &opts.manifests {
        let m = manifest::load(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        manifest::verify(&m, base)?;
        loaded.push((path.clone(), base.to_path_buf(), m));
    }

    let mut log = ArtifactLog::new(&opts.out);
    let mut plots: Vec<PathBuf> = Vec::new();
    // label -> (pullback certified, census count) per lambda
    let mut inventories: BTreeMap<String, (f64, BTreeMap<String, (Option<bool>, Option<usize>)>)> = BTreeMap::new();
    let mut entries = Vec::new();

    for (idx, (path, base, m)) in loaded.iter().enumerate() {
        let tag = format!("{idx}_{}", m.command);
        match m.command.as_str() {
            "equilibria" => plots.extend(equilibrium_profiles(&opts.out, &tag, base, &m.artifacts)?),
            "pullback" => {
                let lambda = m.config.pullback.lambda;
                let mut series = Vec::new();
                for a in m.artifacts.iter().filter(|a| a.path.ends_with("convergence.csv")) {
                    let pts = io::read_convergence(&base.join(&a.path))?;
                    series.push(Series {
                        name: parent_name(&a.path),
                        points: pts,
                    });
                }
                let svg_text = svg::line_chart(
                    &format!("pullback convergence, lambda = {lambda}"),
                    "s_k",
                    "delta_k",
                    &series,
                    true,
                );
                plots.push(write_text(&opts.out.join(format!("convergence_{tag}.svg")), &svg_text)?);
                let inv = inventory_slot(&mut inventories, lambda)?;
                for c in &m.certifications {
                    if let Some(name) = c.name.strip_prefix("pullback ") {
                        inv.entry(name.to_string()).or_default().0 = Some(c.passed);
                    }
                }
                if m.errors.is_empty() {
                    inv.entry("zero".to_string()).or_default().0 = Some(true);
                }
                for e in &m.errors {
                    inv.entry(e.what.clone()).or_default().0 = Some(false);
                }
            }
            "connect" => {
                let mut laps = Vec::new();
                let mut dist = Vec::new();
                for a in m.artifacts.iter().filter(|a| a.path.ends_with("connection.json")) {
                    let c: ConnectionJson = io::read_json(&base.join(&a.path))?;
                    let name = format!("zeta_{}_{}", c.j, c.sign.label());
                    laps.push(Series {
                        name: name.clone(),
                        points: c.lap_sequence.iter().enumerate().map(|(i, &l)| (i as f64, l as f64)).collect(),
                    });
                    dist.push(Series {
                        name,
                        points: c.forward_distance.iter().enumerate().map(|(i, &d)| (i as f64, d)).collect(),
                    });
                }
                let lambda = m.config.connect.lambda;
                plots.push(write_text(
                    &opts.out.join(format!("laps_{tag}.svg")),
                    &svg::line_chart(
                        &format!("lap numbers after escape, lambda = {lambda}"),
                        "sample",
                        "lap number",
                        &laps,
                        false,
                    ),
                )?);
                plots.push(write_text(
                    &opts.out.join(format!("forward_distance_{tag}.svg")),
                    &svg::line_chart(
                        &format!("H1 distance to target, lambda = {lambda}"),
                        "sample",
                        "distance",
                        &dist,
                        true,
                    ),
                )?);
            }
            "omega" => {
                if let Some(a) = m.artifacts.iter().find(|a| a.path.ends_with("census.json")) {
                    let c: CensusJson = io::read_json(&base.join(&a.path))?;
                    let inv = inventory_slot(&mut inventories, c.lambda)?;
                    for (label, n) in c.counts {
                        let slot = inv.entry(label).or_default();
                        slot.1 = Some(slot.1.unwrap_or(0) + n);
                    }
                }
            }
            _ => {}
        }
        entries.push(json!({
            "manifest": path.display().to_string(),
            "command": m.command,
            "all_certified": m.all_certified(),
            "certifications": m.certifications,
            "errors": m.errors,
            "summary": m.summary,
        }));
    }

    let mut inventory_json = Vec::new();
    for (key, (lambda, rows)) in &inventories {
        let table_rows: Vec<Vec<String>> = rows
            .iter()
            .map(|(label, (certified, count))| {
                vec![
                    label.clone(),
                    certified.map_or("-".into(), |c| if c { "yes".into() } else { "no".into() }),
                    count.map_or("-".into(), |n| n.to_string()),
                ]
            })
            .collect();
        plots.push(write_text(
            &opts.out.join(format!("morse_inventory_{key}.svg")),
            &svg::table(
                &format!("Morse inventory, lambda = {lambda}"),
                &["label", "pullback certified", "omega census count"],
                &table_rows,
            ),
        )?);
        inventory_json.push(json!({
            "lambda": lambda,
            "rows": rows.iter().map(|(l, (c, n))| json!({ "label": l, "pullback_certified": c, "census_count": n })).collect::<Vec<_>>(),
        }));
    }

    let report_path = opts.out.join("report.json");
    let plot_names: Vec<String> = plots
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    io::write_json(
        &report_path,
        &json!({ "manifests": entries, "morse_inventories": inventory_json, "plots": plot_names }),
    )?;
    log.record(&report_path)?;
    log.record_all(&plots)?;

    let all_ok = loaded.iter().all(|(_, _, m)| m.all_certified() && m.errors.is_empty());
    Ok(CommandOutput {
        artifacts: log.into_entries(),
        certifications: vec![cert(
            "artifact hashes verified",
            true,
            format!("{} manifests", loaded.len()),
        )],
        errors: Vec::new(),
        summary: json!({ "manifests": loaded.len(), "inputs_all_certified": all_ok, "plots": plot_names }),
    })
}

type InventoryRows = BTreeMap<String, (Option<bool>, Option<usize>)>;

fn inventory_slot(
    inventories: &mut BTreeMap<String, (f64, InventoryRows)>,
    lambda: f64,
) -> Result<&mut InventoryRows, CliError> {
    let labels = morse_inventory(lambda)?;
    let slot = inventories.entry(lambda_dir(lambda)).or_insert_with(|| {
        let rows = labels.iter().map(|l| (l.to_string(), (None, None))).collect();
        (lambda, rows)
    });
    Ok(&mut slot.1)
}

fn parent_name(path: &str) -> String {
    let mut parts = path.rsplit('/');
    parts.next();
    parts.next().unwrap_or(path).to_string()
}

fn equilibrium_profiles(out: &Path, tag: &str, base: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    let mut by_lambda: BTreeMap<String, Vec<Series>> = BTreeMap::new();
    for a in artifacts.iter().filter(|a| a.path.ends_with(".csv")) {
        let parts: Vec<&str> = a.path.split('/').collect();
        if parts.len() < 3 {
            continue;
        }
        let field = io::read_field_csv(&base.join(&a.path))?;
        let mut points = vec![(0.0, 0.0)];
        points.extend(field.grid().points().iter().copied().zip(field.values().iter().copied()));
        points.push((std::f64::consts::PI, 0.0));
        by_lambda.entry(parts[parts.len() - 2].to_string()).or_default().push(Series {
            name: parts[parts.len() - 1].trim_end_matches(".csv").to_string(),
            points,
        });
    }
    let mut written = Vec::new();
    for (dir, series) in by_lambda {
        let title = format!("equilibrium profiles, {}", dir.replace('_', " = "));
        let svg_text = svg::line_chart(&title, "x", "phi(x)", &series, false);
        written.push(write_text(&out.join(format!("profiles_{tag}_{dir}.svg")), &svg_text)?);
    }
    Ok(written)
}

fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

/// Error report written when a command aborts before producing a manifest.
pub fn write_error_report(out: &Path, command: Command, err: &CliError) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let path = out.join("error.json");
    io::write_json(
        &path,
        &json!({
            "command": command.name(),
            "kind": err.kind(),
            "message": err.to_string(),
            "exit_code": err.exit_code(),
        }),
    )?;
    Ok(path)
}
