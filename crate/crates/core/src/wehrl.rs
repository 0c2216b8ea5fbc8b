//! Husimi functions and Wehrl-type entropies `S_f(rho) = int f(<u^M|rho|u^M>) du`
//! over the normalized unit sphere of `C^N`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::{cloning_apply, coherence_defect, HermitianOperator};
use crate::error::{Error, Result};
use crate::fock::{coherent_coeffs, coherent_vector, StateVector, SymmetricSpace};
use crate::linalg::{self, CMatrix};
use crate::majorization::{spectrum, ConcaveFn};
use crate::quad;
use crate::random::{self, sample_haar_state};
use crate::special;

pub const HUSIMI_SLACK: f64 = 1e-12;
/// Absolute error target for the one-dimensional coherent-state integral.
pub const QUAD_TOL: f64 = 1e-13;
pub const QUAD_MAX_PANELS: usize = 4000;
/// How close `rho` must be to `I / dim`, entry-wise, for the exact
/// constant-Husimi evaluation.
pub const MIXED_TOL: f64 = 1e-12;

const WEHRL_LABEL: &str = "wehrl";
const RESOLUTION_LABEL: &str = "resolution";

/// `<u^M| rho |u^M>` clamped to `[0, 1]`.
pub fn husimi(rho: &HermitianOperator, u: &[Complex64]) -> Result<f64> {
    if !rho.is_density() {
        return Err(Error::NotDensity("a density matrix"));
    }
    let coh = coherent_vector(rho.space(), u)?;
    clamp_husimi(rho.matrix().quadratic_form(coh.coeffs()).re)
}

fn clamp_husimi(h: f64) -> Result<f64> {
    if !(-HUSIMI_SLACK..=1.0 + HUSIMI_SLACK).contains(&h) {
        return Err(Error::Domain { value: h });
    }
    Ok(h.clamp(0.0, 1.0))
}

fn husimi_raw(matrix: &CMatrix, space: &SymmetricSpace, u: &[Complex64]) -> f64 {
    matrix.quadratic_form(&coherent_coeffs(space, u)).re
}

/// Sum by recursive halving.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Sample standard deviation (with `n - 1`) over `sqrt(n)`.
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Two-pass mean and standard error. Samples are expected in index
    /// order so that the result does not depend on how they were produced.
    pub fn from_samples(values: &[f64], seed: u64) -> Result<Self> {
        let n = values.len();
        if n <= 1 {
            return Err(Error::Invalid("Monte Carlo needs at least two samples"));
        }
        if values.iter().all(|&v| v == values[0]) {
            return Ok(Self { mean: values[0], stderr: 0.0, samples: n, seed });
        }
        let mean = pairwise_sum(values) / n as f64;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        Ok(Self { mean, stderr: libm::sqrt(var / n as f64), samples: n, seed })
    }
}

/// `f(husimi(rho, u_i))` for the `i`-th sphere sample of `seed`.
pub fn wehrl_sample(rho: &HermitianOperator, f: &ConcaveFn, seed: u64, index: u64) -> Result<f64> {
    let space = rho.space();
    let u = sample_haar_state(space.n_modes(), &mut random::stream(seed, WEHRL_LABEL, index));
    f.eval_clamped(clamp_husimi(husimi_raw(rho.matrix(), space, &u))?)
}

/// Monte Carlo estimate of `S_f(rho)`.
pub fn wehrl_integral_mc(rho: &HermitianOperator, f: &ConcaveFn, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    if !rho.is_density() {
        return Err(Error::NotDensity("a density matrix"));
    }
    if samples <= 1 {
        return Err(Error::Invalid("Monte Carlo needs at least two samples"));
    }
    let values = (0..samples as u64).map(|i| wehrl_sample(rho, f, seed, i)).collect::<Result<Vec<_>>>()?;
    MonteCarloEstimate::from_samples(&values, seed)
}

/// `S_f` of a coherent state: `(N - 1) int_0^1 f(s^M) (1 - s)^{N-2} ds`.
pub fn coherent_wehrl_closed_form(n_modes: usize, level: usize, f: &ConcaveFn) -> Result<f64> {
    if n_modes == 0 {
        return Err(Error::Invalid("number of modes must be at least 1"));
    }
    if n_modes == 1 || level == 0 {
        return Ok(f.eval(1.0));
    }
    let m = level as f64;
    let weight_power = (n_modes - 2) as i32;
    let cuts: Vec<f64> = f.breakpoints().iter().map(|&x| libm::pow(x, 1.0 / m)).collect();
    let integrand = |s: f64| {
        let x = if s <= 0.0 { 0.0 } else { libm::pow(s, m) };
        f.eval(x) * libm::pow(1.0 - s, weight_power as f64)
    };
    let q = quad::integrate(integrand, 0.0, 1.0, &cuts, QUAD_TOL / (n_modes - 1) as f64, QUAD_MAX_PANELS)?;
    Ok((n_modes - 1) as f64 * q.value)
}

/// `(1 / dim H_{M+k}) Tr f((M!/(M+k)!) T^k(|u^M><u^M|))`, including the
/// zero eigenvalues of the coherent output.
pub fn semiclassical_trace(n_modes: usize, level: usize, k: usize, f: &ConcaveFn) -> Result<f64> {
    if n_modes == 0 {
        return Err(Error::Invalid("number of modes must be at least 1"));
    }
    if n_modes == 1 {
        return Ok(f.eval(1.0));
    }
    let (n, m0, k) = (n_modes as u64, level as u64, k as u64);
    let top = m0 + k + n - 1;
    let ln_dim = special::ln_binomial(top, n - 1);
    let mut total = 0.0;
    for j in 0..=k {
        let m = m0 + k - j;
        let lambda = special::binomial_ratio(m, m0 + k, m0);
        let weight = if n == 2 { libm::exp(-ln_dim) } else { libm::exp(special::ln_binomial(j + n - 2, n - 2) - ln_dim) };
        total += weight * f.eval_clamped(lambda)?;
    }
    let zero_weight = 1.0 - special::binomial_ratio(k + n - 1, top, n - 1);
    Ok(total + zero_weight * f.eval(0.0))
}

/// Both sides of the Berezin-Lieb comparison for a PSD operator `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerezinLieb {
    /// `(1 / dim H_{M+k}) Tr f((M!/(M+k)!) T^k(gamma))`.
    pub lhs: f64,
    /// Monte Carlo estimate of `int f(<u^M|gamma|u^M>) du`.
    pub rhs: MonteCarloEstimate,
}

/// Absolute slack for rounding when the Husimi function is constant.
pub const BEREZIN_LIEB_SLACK: f64 = 1e-10;

impl BerezinLieb {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs.mean + 3.0 * self.rhs.stderr + BEREZIN_LIEB_SLACK
    }
}

pub fn berezin_lieb_gap(
    gamma: &HermitianOperator,
    k: usize,
    f: &ConcaveFn,
    samples: usize,
    seed: u64,
) -> Result<BerezinLieb> {
    if !gamma.flags().psd {
        return Err(Error::NotDensity("positive semi-definite"));
    }
    if samples <= 1 {
        return Err(Error::Invalid("Monte Carlo needs at least two samples"));
    }
    let space = gamma.space();
    let m = space.level();
    let out = cloning_apply(gamma, k)?;
    let scale = 1.0 / special::rising_ratio(m as u64, k as u64);
    let lhs = spectrum(&out)?.scaled(scale).trace_fn(f)? / out.space().dim() as f64;
    let values = (0..samples as u64)
        .map(|i| {
            let u = sample_haar_state(space.n_modes(), &mut random::stream(seed, WEHRL_LABEL, i));
            f.eval_clamped(husimi_raw(gamma.matrix(), space, &u))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BerezinLieb { lhs, rhs: MonteCarloEstimate::from_samples(&values, seed)? })
}

/// Max-entry norm of `dim * mean(|u^M><u^M|) - I` over `samples` sphere
/// points.
pub fn resolution_residual(n_modes: usize, level: usize, samples: usize, seed: u64) -> Result<f64> {
    resolution_residual_in(&*SymmetricSpace::new(n_modes, level)?, samples, seed)
}

/// [`resolution_residual`] on an existing space.
pub fn resolution_residual_in(space: &SymmetricSpace, samples: usize, seed: u64) -> Result<f64> {
    if samples < 10 {
        return Err(Error::Invalid("resolution check needs at least 10 samples"));
    }
    let n_modes = space.n_modes();
    let d = space.dim();
    let mut acc = CMatrix::zeros(d, d);
    for i in 0..samples as u64 {
        let u = sample_haar_state(n_modes, &mut random::stream(seed, RESOLUTION_LABEL, i));
        acc.add_scaled(&CMatrix::outer(&coherent_coeffs(space, &u)), 1.0)?;
    }
    let avg = acc.scale(d as f64 / samples as f64);
    Ok(avg.sub(&CMatrix::identity(d))?.max_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact evaluation; only available for `I / dim` and coherent states.
    ClosedForm,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WehrlValue {
    pub value: f64,
    /// Zero for exact evaluations.
    pub stderr: f64,
    pub samples: usize,
}

fn is_maximally_mixed(rho: &HermitianOperator) -> bool {
    let d = rho.space().dim();
    let target = CMatrix::identity(d).scale(1.0 / d as f64);
    rho.matrix().sub(&target).map(|m| m.max_abs() <= MIXED_TOL).unwrap_or(false)
}

/// Normalized top eigenvector if `rho` is a coherent projector.
fn coherent_state_of(rho: &HermitianOperator) -> Result<Option<StateVector>> {
    let eig = linalg::hermitian_eigen(rho.matrix())?;
    if (eig.values[0] - 1.0).abs() > 1e-10 {
        return Ok(None);
    }
    let psi = StateVector::new(rho.space().clone(), eig.vectors.column(0))?.normalized()?;
    if rho.space().level() == 0 || coherence_defect(&psi)? <= 1e-10 {
        Ok(Some(psi))
    } else {
        Ok(None)
    }
}

/// `S_f(rho)` by the requested method.
pub fn wehrl_entropy(rho: &HermitianOperator, f: &ConcaveFn, method: Method) -> Result<WehrlValue> {
    if !rho.is_density() {
        return Err(Error::NotDensity("a density matrix"));
    }
    match method {
        Method::ClosedForm => {
            let space = rho.space();
            if is_maximally_mixed(rho) {
                let value = f.eval_clamped(1.0 / space.dim() as f64)?;
                return Ok(WehrlValue { value, stderr: 0.0, samples: 0 });
            }
            if coherent_state_of(rho)?.is_some() {
                let value = coherent_wehrl_closed_form(space.n_modes(), space.level(), f)?;
                return Ok(WehrlValue { value, stderr: 0.0, samples: 0 });
            }
            Err(Error::Invalid("closed form is only available for I/dim and coherent states; use Monte Carlo"))
        }
        Method::MonteCarlo { samples, seed } => {
            let est = wehrl_integral_mc(rho, f, samples, seed)?;
            Ok(WehrlValue { value: est.mean, stderr: est.stderr, samples })
        }
    }
}

/// `S_f(rho) - S_f(coherent)`, with the coherent value from
/// [`coherent_wehrl_closed_form`].
pub fn wehrl_gap(rho: &HermitianOperator, f: &ConcaveFn, method: Method) -> Result<WehrlValue> {
    let space = rho.space();
    let reference = coherent_wehrl_closed_form(space.n_modes(), space.level(), f)?;
    let s = wehrl_entropy(rho, f, method)?;
    Ok(WehrlValue { value: s.value - reference, ..s })
}
