//! On-disk formats: field CSVs, trajectory directories and JSON sidecars.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading a
//! file back reproduces the values bit for bit and equal inputs give
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::connections::{Connection, ConnectionCertificate};
use crate::equilibria::{Equilibrium, Sign};
use crate::error::{Error, Result};
use crate::evolution::{Scheme, SolverConfig, Trajectory};
use crate::field::{Field, Grid};
use crate::forcing::Forcing;
use crate::pullback::{NonAutEquilibrium, PullbackCertificate};

type Field64 = Field<f64>;
type Trajectory64 = Trajectory<f64>;

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn parse(path: &Path, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format_error(path, format!("bad number {s:?}: {e}")))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// `x,value` rows including the boundary points `0` and `π`.
pub fn write_field_csv(path: &Path, field: &Field64) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "value"])?;
    let pi = std::f64::consts::PI;
    w.write_record(["0".to_string(), "0".to_string()])?;
    for (x, v) in field.grid().points().iter().zip(field.values()) {
        w.write_record([x.to_string(), v.to_string()])?;
    }
    w.write_record([pi.to_string(), "0".to_string()])?;
    w.flush()?;
    Ok(())
}

pub fn read_field_csv(path: &Path) -> Result<Field64> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "value"] {
        return Err(format_error(path, "expected header x,value"));
    }
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(format_error(path, "expected two columns"));
        }
        values.push(parse(path, &rec[1])?);
    }
    if values.len() < 3 {
        return Err(format_error(path, "need boundary rows and at least one interior point"));
    }
    let (first, last) = (values[0], values[values.len() - 1]);
    if first != 0.0 || last != 0.0 {
        return Err(format_error(path, "boundary values must be zero"));
    }
    let interior = values[1..values.len() - 1].to_vec();
    let grid = Grid::new(interior.len())?;
    Field::new(&grid, interior)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub t0: f64,
    pub times: Vec<f64>,
    pub lambda: f64,
    pub forcing: Forcing<f64>,
    pub scheme: Scheme,
    pub n_modes: usize,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub mode_stride: usize,
    pub dealias: bool,
}

/// `meta.json` plus `snapshots.csv` (time followed by the interior values).
pub fn write_trajectory(dir: &Path, traj: &Trajectory64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let cfg = &traj.config;
    let meta = TrajectoryMeta {
        t0: traj.t0,
        times: traj.times.clone(),
        lambda: cfg.lambda,
        forcing: traj.forcing,
        scheme: cfg.scheme,
        n_modes: traj.grid().n_modes(),
        dt: cfg.dt,
        snapshot_stride: cfg.snapshot_stride,
        mode_stride: cfg.mode_stride,
        dealias: cfg.dealias,
    };
    let meta_path = dir.join("meta.json");
    write_json(&meta_path, &meta)?;
    let snap_path = dir.join("snapshots.csv");
    let mut w = csv::Writer::from_path(&snap_path)?;
    let mut header = vec!["time".to_string()];
    header.extend((1..=meta.n_modes).map(|i| format!("u{i}")));
    w.write_record(&header)?;
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let mut row = Vec::with_capacity(u.len() + 1);
        row.push(t.to_string());
        row.extend(u.values().iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(vec![meta_path, snap_path])
}

pub fn read_trajectory(dir: &Path) -> Result<Trajectory64> {
    let meta_path = dir.join("meta.json");
    let meta: TrajectoryMeta = read_json(&meta_path)?;
    let grid = Grid::new(meta.n_modes)?;
    let snap_path = dir.join("snapshots.csv");
    let mut r = csv::Reader::from_path(&snap_path)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != meta.n_modes + 1 {
            return Err(format_error(&snap_path, format!("row has {} columns", rec.len())));
        }
        times.push(parse(&snap_path, &rec[0])?);
        let vals = rec.iter().skip(1).map(|s| parse(&snap_path, s)).collect::<Result<Vec<_>>>()?;
        states.push(Field::new(&grid, vals)?);
    }
    if times != meta.times {
        return Err(format_error(&snap_path, "snapshot times disagree with meta.json"));
    }
    if states.is_empty() {
        return Err(format_error(&snap_path, "no snapshots"));
    }
    let config = SolverConfig {
        dt: meta.dt,
        lambda: meta.lambda,
        scheme: meta.scheme,
        dealias: meta.dealias,
        snapshot_stride: meta.snapshot_stride,
        mode_stride: meta.mode_stride,
        ..SolverConfig::new(meta.lambda)
    };
    Ok(Trajectory {
        t0: meta.t0,
        times,
        states,
        forcing: meta.forcing,
        config,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumMeta {
    pub label: String,
    pub j: usize,
    pub sign: Option<Sign>,
    pub lambda: f64,
    pub beta: f64,
    pub slope_at_0: f64,
    pub zeros: Vec<f64>,
    pub residual: f64,
}

impl From<&Equilibrium<f64>> for EquilibriumMeta {
    fn from(e: &Equilibrium<f64>) -> Self {
        Self {
            label: e.label(),
            j: e.j,
            sign: e.sign,
            lambda: e.lambda,
            beta: e.beta,
            slope_at_0: e.slope_at_0,
            zeros: e.zeros.clone(),
            residual: e.residual,
        }
    }
}

/// `<stem>.csv` profile and `<stem>.json` metadata.
pub fn write_equilibrium(dir: &Path, stem: &str, e: &Equilibrium<f64>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    write_field_csv(&csv_path, &e.profile)?;
    write_json(&json_path, &EquilibriumMeta::from(e))?;
    Ok(vec![csv_path, json_path])
}

pub fn read_equilibrium(dir: &Path, stem: &str) -> Result<(EquilibriumMeta, Field64)> {
    let meta = read_json(&dir.join(format!("{stem}.json")))?;
    let profile = read_field_csv(&dir.join(format!("{stem}.csv")))?;
    Ok((meta, profile))
}

#[derive(Clone, Debug, Serialize)]
struct NonAutSidecar<'a> {
    j: usize,
    sign: Sign,
    lambda: f64,
    certificate: &'a PullbackCertificate,
}

/// Trajectory directory plus `convergence.csv` and `certificate.json`.
pub fn write_nonaut_equilibrium(dir: &Path, xi: &NonAutEquilibrium) -> Result<Vec<PathBuf>> {
    let mut out = write_trajectory(dir, &xi.as_trajectory())?;
    let conv = dir.join("convergence.csv");
    let mut w = csv::Writer::from_path(&conv)?;
    w.write_record(["s_k", "delta_k"])?;
    for (s, d) in &xi.convergence_history {
        w.write_record([s.to_string(), d.to_string()])?;
    }
    w.flush()?;
    out.push(conv);
    let cert = dir.join("certificate.json");
    write_json(
        &cert,
        &NonAutSidecar {
            j: xi.j,
            sign: xi.sign,
            lambda: xi.lambda,
            certificate: &xi.certificate,
        },
    )?;
    out.push(cert);
    Ok(out)
}

pub fn read_convergence(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(format_error(path, "expected s_k,delta_k"));
        }
        out.push((parse(path, &rec[0])?, parse(path, &rec[1])?));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
struct ConnectionSidecar<'a> {
    j: usize,
    sign: Sign,
    lambda: f64,
    epsilon: f64,
    s0: f64,
    certificate: &'a ConnectionCertificate,
    backward_norms: &'a [f64],
    forward_distance: &'a [f64],
    lap_sequence: &'a [usize],
}

/// Trajectory directory plus `connection.json`.
pub fn write_connection(dir: &Path, c: &Connection) -> Result<Vec<PathBuf>> {
    let mut out = write_trajectory(dir, &c.trajectory)?;
    let path = dir.join("connection.json");
    write_json(
        &path,
        &ConnectionSidecar {
            j: c.j,
            sign: c.sign,
            lambda: c.lambda,
            epsilon: c.epsilon,
            s0: c.launch_time,
            certificate: &c.certificate,
            backward_norms: &c.backward_norms,
            forward_distance: &c.forward_distance,
            lap_sequence: &c.lap_sequence,
        },
    )?;
    out.push(path);
    Ok(out)
}
