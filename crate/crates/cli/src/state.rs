//! `--state` sources.
//!
//! State files are JSON objects holding either `"vector"`, a list of
//! `[re, im]` pairs in canonical basis order, or `"matrix"`, a list of rows
//! of such pairs.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Deserialize;
use wehrl_core::channels::HermitianOperator;
use wehrl_core::fock::{StateVector, SymmetricSpace};
use wehrl_core::linalg::CMatrix;
use wehrl_core::random::{random_density, random_state, stream};
use wehrl_core::Complex64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// The highest-weight vector `|M, 0, ..., 0>`.
    Coherent,
    /// `I / dim`.
    Mixed,
    /// Uniformly random pure state; an explicit seed overrides the run seed.
    Random(Option<u64>),
    /// Hilbert-Schmidt random density matrix.
    Density(Option<u64>),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub enum Input {
    Pure(StateVector),
    Mixed(HermitianOperator),
}

impl Input {
    pub fn operator(&self) -> HermitianOperator {
        match self {
            Self::Pure(psi) => HermitianOperator::pure(psi),
            Self::Mixed(rho) => rho.clone(),
        }
    }

    pub fn pure(&self) -> Option<&StateVector> {
        match self {
            Self::Pure(psi) => Some(psi),
            Self::Mixed(_) => None,
        }
    }
}

pub fn parse(spec: &str) -> CliResult<Source> {
    let (head, arg) = match spec.trim().split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec.trim(), None),
    };
    let seed = |a: Option<&str>| -> CliResult<Option<u64>> {
        a.map(|s| s.parse().map_err(|_| CliError::validation(format!("state seed {s:?} is not an integer"))))
            .transpose()
    };
    match head {
        "coherent" if arg.is_none() => Ok(Source::Coherent),
        "mixed" if arg.is_none() => Ok(Source::Mixed),
        "random" => Ok(Source::Random(seed(arg)?)),
        "density" => Ok(Source::Density(seed(arg)?)),
        "file" => match arg {
            Some(p) if !p.is_empty() => Ok(Source::File(PathBuf::from(p))),
            _ => Err(CliError::validation("state file:PATH needs a path")),
        },
        _ => Err(CliError::validation(format!(
            "unknown state {spec:?}; expected coherent, mixed, random[:SEED], density[:SEED] or file:PATH"
        ))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    vector: Option<Vec<[f64; 2]>>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn pair(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Source {
    /// Draw input `index` for a run rooted at `seed`; `label` separates the
    /// streams of different commands.
    pub fn draw(&self, space: &Arc<SymmetricSpace>, seed: u64, label: &str, index: u64) -> CliResult<Input> {
        Ok(match self {
            Self::Coherent => {
                let mut counts = vec![0u32; space.n_modes()];
                counts[0] = space.level() as u32;
                Input::Pure(StateVector::basis_state(space.clone(), &counts)?)
            }
            Self::Mixed => Input::Mixed(HermitianOperator::maximally_mixed(space.clone())),
            Self::Random(s) => Input::Pure(random_state(space, &mut stream(s.unwrap_or(seed), label, index))),
            Self::Density(s) => Input::Mixed(random_density(space, &mut stream(s.unwrap_or(seed), label, index))),
            Self::File(path) => read_file(space, path)?,
        })
    }

    pub fn is_coherent(&self) -> bool {
        matches!(self, Self::Coherent)
    }
}

fn read_file(space: &Arc<SymmetricSpace>, path: &PathBuf) -> CliResult<Input> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read state file {}: {e}", path.display())))?;
    let parsed: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("state file {}: {e}", path.display())))?;
    match (parsed.vector, parsed.matrix) {
        (Some(v), None) => {
            let psi = StateVector::new(space.clone(), v.iter().map(pair).collect())?;
            psi.require_normalized()?;
            Ok(Input::Pure(psi))
        }
        (None, Some(rows)) => {
            let d = space.dim();
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(CliError::validation(format!(
                    "state file {}: matrix must be {d} x {d}",
                    path.display()
                )));
            }
            let m = CMatrix::from_fn(d, d, |i, j| pair(&rows[i][j]));
            Ok(Input::Mixed(HermitianOperator::density(space.clone(), m)?))
        }
        _ => Err(CliError::validation(format!(
            "state file {} must contain exactly one of \"vector\" or \"matrix\"",
            path.display()
        ))),
    }
}
