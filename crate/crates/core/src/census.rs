//! Random-corpus ω-limit census: forward runs from seeded random data,
//! classified and assigned to members of the Morse decomposition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equilibria::Sign;
use crate::error::{Error, Result};
use crate::evolution::{evolve, SolverConfig};
use crate::field::{Field, Grid};
use crate::forcing::{Direction, Forcing};
use crate::pullback::{morse_inventory, MorseLabel};
use crate::structure::{estimate_limit_set, LimitSetOptions, OscillationClass, OscillationKind};

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub lambda: f64,
    pub forcing: Forcing<f64>,
    pub runs: usize,
    pub seed: u64,
    pub horizon: f64,
    /// Late snapshots used for the ω-estimate.
    pub sample_count: usize,
    /// Draw only data odd about π/2 and evolve in that invariant subspace.
    pub antisymmetric: bool,
    pub solver: SolverConfig<f64>,
    pub limit: LimitSetOptions,
}

impl CensusConfig {
    pub fn new(lambda: f64, forcing: Forcing<f64>) -> Self {
        Self {
            lambda,
            forcing,
            runs: 50,
            seed: 0,
            horizon: 50.0,
            sample_count: 12,
            antisymmetric: false,
            solver: SolverConfig::new(lambda).with_stride(50),
            limit: LimitSetOptions::default(),
        }
    }
}

/// Six sine coefficients `c_n ~ U(-2/n, 2/n)` per run, over even `n` only for
/// antisymmetric data. The whole corpus depends only on `seed`.
pub fn random_corpus(seed: u64, runs: usize, antisymmetric: bool) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..runs)
        .map(|_| {
            let len = if antisymmetric { 12 } else { 6 };
            (1..=len)
                .map(|n| {
                    if antisymmetric && n % 2 == 1 {
                        0.0
                    } else {
                        rng.gen_range(-1.0..1.0) * 2.0 / n as f64
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub index: usize,
    pub coefficients: Vec<f64>,
    pub classification: OscillationClass,
    pub mixed: bool,
    pub strip_violation: Option<f64>,
    pub label: Option<MorseLabel>,
}

/// One forward run, classified. Assigned to `ξ_m^±` only when the ω-samples
/// agree on `𝔉_m^±` and lie in the strip `Y_m^±`.
pub fn census_entry(grid: &Grid<f64>, index: usize, coefficients: &[f64], cfg: &CensusConfig) -> Result<CensusEntry> {
    let u0 = Field::from_sine_series(grid, coefficients);
    let mut solver = cfg.solver;
    solver.lambda = cfg.lambda;
    if cfg.antisymmetric {
        solver.mode_stride = 2;
    }
    let traj = evolve(&u0, 0.0, cfg.horizon, &cfg.forcing, &solver)?;
    let est = estimate_limit_set(&traj, Direction::Plus, cfg.sample_count, &cfg.limit)?;
    let label = if est.mixed {
        None
    } else {
        match (est.classification.kind, est.strip) {
            (OscillationKind::Zero, _) => Some(MorseLabel::Zero),
            (OscillationKind::FmPlus, Some((j, Sign::Plus))) => Some(MorseLabel::Xi { j, sign: Sign::Plus }),
            (OscillationKind::FmMinus, Some((j, Sign::Minus))) => Some(MorseLabel::Xi { j, sign: Sign::Minus }),
            _ => None,
        }
    };
    Ok(CensusEntry {
        index,
        coefficients: coefficients.to_vec(),
        classification: est.classification,
        mixed: est.mixed,
        strip_violation: est.strip_violation,
        label,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub lambda: f64,
    pub seed: u64,
    pub inventory: Vec<MorseLabel>,
    pub entries: Vec<CensusEntry>,
    /// Runs per inventory label (keyed by its display name).
    pub counts: BTreeMap<String, usize>,
    pub unassigned: usize,
    pub mixed: usize,
}

impl Census {
    pub fn from_entries(lambda: f64, seed: u64, entries: Vec<CensusEntry>) -> Result<Self> {
        let inventory = morse_inventory(lambda)?;
        let mut counts: BTreeMap<String, usize> = inventory.iter().map(|l| (l.to_string(), 0)).collect();
        let mut unassigned = 0;
        for e in &entries {
            match e.label {
                Some(l) => match counts.get_mut(&l.to_string()) {
                    Some(c) => *c += 1,
                    None => {
                        return Err(Error::invalid(format!("run {} assigned to {l}, outside the inventory", e.index)));
                    }
                },
                None => unassigned += 1,
            }
        }
        let mixed = entries.iter().filter(|e| e.mixed).count();
        Ok(Self {
            lambda,
            seed,
            inventory,
            entries,
            counts,
            unassigned,
            mixed,
        })
    }
}

/// Serial census over the seeded corpus.
pub fn omega_census(grid: &Grid<f64>, cfg: &CensusConfig) -> Result<Census> {
    let corpus = random_corpus(cfg.seed, cfg.runs, cfg.antisymmetric);
    let entries = corpus
        .iter()
        .enumerate()
        .map(|(i, c)| census_entry(grid, i, c, cfg))
        .collect::<Result<Vec<_>>>()?;
    Census::from_entries(cfg.lambda, cfg.seed, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        assert_eq!(random_corpus(3, 4, false), random_corpus(3, 4, false));
        assert_ne!(random_corpus(3, 4, false), random_corpus(4, 4, false));
        for c in random_corpus(1, 5, true) {
            assert!(c.iter().step_by(2).all(|&v| v == 0.0));
        }
    }

    #[test]
    fn empty_census() {
        let g = Grid::new(31).unwrap();
        let mut cfg = CensusConfig::new(2.0, Forcing::constant(1.0).unwrap());
        cfg.runs = 0;
        let c = omega_census(&g, &cfg).unwrap();
        assert!(c.entries.is_empty());
        assert_eq!(c.inventory.len(), 3);
    }

    #[test]
    fn subcritical_runs_go_to_zero() {
        let g = Grid::new(63).unwrap();
        let mut cfg = CensusConfig::new(0.5, Forcing::sinusoidal(2.0, 0.5, 1.0).unwrap());
        cfg.runs = 3;
        cfg.horizon = 80.0;
        let c = omega_census(&g, &cfg).unwrap();
        assert_eq!(c.counts["zero"], 3);
    }
}
