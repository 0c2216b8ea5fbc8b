//! Universal cloning maps and the operators built from them.
//!
//! * `T^k(G) = sum_{i_1..i_k} a*_{i_1}...a*_{i_k} G a_{i_k}...a_{i_1}` maps
//!   operators on `H_M` to operators on `H_{M+k}`. Ordered index tuples are
//!   grouped by occupation type `m` (with `|m| = k`) and weighted by the
//!   multinomial `k! / prod m_i!`.
//! * `gamma^(l)` is the `l`-particle reduced density matrix, normalized to
//!   trace `M! / (M - l)!`.
//! * `W_k` is the measure-and-prepare operator on `H_k`. Both `gamma` and
//!   `W_k` are assembled as scaled Gram matrices of ladder images of the
//!   state, so they are positive semi-definite by construction.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{StateVector, SymmetricSpace};
use crate::linalg::{self, CMatrix, RealColumns};
use crate::majorization::{spectrum, SpectrumSequence};
use crate::random;
use crate::special;

pub const HERMITIAN_TOL: f64 = 1e-11;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

/// Largest acceptable residual (relative to the fitted operators) for the
/// decomposition constants, and the most negative acceptable constant.
pub const FIT_RESIDUAL_TOL: f64 = 1e-8;
pub const FIT_NEGATIVITY_TOL: f64 = 1e-9;
/// Condition numbers above this make the fit unusable.
pub const FIT_MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorFlags {
    pub hermitian: bool,
    pub psd: bool,
    pub unit_trace: bool,
}

/// A dense Hermitian operator on one symmetric space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    space: Arc<SymmetricSpace>,
    matrix: CMatrix,
    flags: OperatorFlags,
}

impl HermitianOperator {
    /// Checks shape and Hermiticity; positivity and trace are left unknown.
    pub fn new(space: Arc<SymmetricSpace>, matrix: CMatrix) -> Result<Self> {
        check_shape(&space, &matrix)?;
        if matrix.hermiticity_defect() > HERMITIAN_TOL * matrix.max_abs().max(1.0) {
            return Err(Error::NotDensity("Hermitian"));
        }
        Ok(Self { space, matrix, flags: OperatorFlags { hermitian: true, ..Default::default() } })
    }

    /// Positive semi-definite operator (checked through the spectrum).
    pub fn psd(space: Arc<SymmetricSpace>, matrix: CMatrix) -> Result<Self> {
        let mut op = Self::new(space, matrix)?;
        let min = linalg::hermitian_eigenvalues(&op.matrix)?.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotDensity("positive semi-definite"));
        }
        op.flags.psd = true;
        op.flags.unit_trace = (op.trace() - 1.0).abs() <= TRACE_TOL;
        Ok(op)
    }

    /// Density matrix: PSD with unit trace.
    pub fn density(space: Arc<SymmetricSpace>, matrix: CMatrix) -> Result<Self> {
        let op = Self::psd(space, matrix)?;
        if !op.flags.unit_trace {
            return Err(Error::NotDensity("of unit trace"));
        }
        Ok(op)
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        let unit_trace = psi.is_normalized();
        Self {
            space: psi.space().clone(),
            matrix: psi.projector(),
            flags: OperatorFlags { hermitian: true, psd: true, unit_trace },
        }
    }

    /// `I / dim`.
    pub fn maximally_mixed(space: Arc<SymmetricSpace>) -> Self {
        let d = space.dim();
        Self {
            matrix: CMatrix::identity(d).scale(1.0 / d as f64),
            space,
            flags: OperatorFlags { hermitian: true, psd: true, unit_trace: true },
        }
    }

    pub(crate) fn trusted(space: Arc<SymmetricSpace>, matrix: CMatrix, flags: OperatorFlags) -> Self {
        Self { space, matrix, flags }
    }

    pub(crate) fn force_unit_trace(&mut self) {
        self.flags.unit_trace = true;
    }

    pub fn space(&self) -> &Arc<SymmetricSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags.hermitian
    }

    pub fn is_density(&self) -> bool {
        self.flags.psd && self.flags.unit_trace
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Multiply by `s >= 0`; positivity is kept, the unit-trace flag is
    /// recomputed.
    pub fn scaled(&self, s: f64) -> Self {
        let matrix = self.matrix.scale(s);
        let trace = matrix.trace().re;
        Self {
            space: self.space.clone(),
            matrix,
            flags: OperatorFlags {
                hermitian: self.flags.hermitian,
                psd: self.flags.psd && s >= 0.0,
                unit_trace: (trace - 1.0).abs() <= TRACE_TOL,
            },
        }
    }

    /// `U A U*` for a unitary `U` on the same space.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        check_shape(&self.space, u)?;
        let matrix = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self { space: self.space.clone(), matrix, flags: self.flags })
    }

    /// Convex combination `lambda A + (1 - lambda) B`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: other.space.dim() });
        }
        let mut matrix = self.matrix.scale(lambda);
        matrix.add_scaled(&other.matrix, 1.0 - lambda)?;
        let both_psd = self.flags.psd && other.flags.psd && (0.0..=1.0).contains(&lambda);
        let trace = matrix.trace().re;
        Ok(Self {
            space: self.space.clone(),
            matrix,
            flags: OperatorFlags {
                hermitian: true,
                psd: both_psd,
                unit_trace: (trace - 1.0).abs() <= TRACE_TOL,
            },
        })
    }
}

fn check_shape(space: &SymmetricSpace, m: &CMatrix) -> Result<()> {
    if m.rows() != space.dim() || m.cols() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: m.rows() });
    }
    Ok(())
}

/// `prod_i sqrt(n_i! / (n_i - m_i)!)`, the weight of `prod a_i^{m_i}` on `|n>`.
fn ladder_weight(n: &[u32], m: &[u32]) -> f64 {
    let mut acc = 1.0;
    for (&ni, &mi) in n.iter().zip(m) {
        for t in 0..mi {
            acc *= (ni - t) as f64;
        }
    }
    libm::sqrt(acc)
}

fn multinomial_f64(m: &[u32]) -> f64 {
    match special::multinomial(m) {
        Ok(w) => w as f64,
        Err(_) => {
            let k: u64 = m.iter().map(|&c| c as u64).sum();
            libm::exp(
                special::ln_factorial(k) - m.iter().map(|&c| special::ln_factorial(c as u64)).sum::<f64>(),
            )
        }
    }
}

fn factorial_product(counts: &[u32]) -> f64 {
    counts.iter().map(|&c| special::rising_ratio(0, c as u64)).product()
}

/// `T^k(gamma)` on `H_{M+k}`.
pub fn cloning_apply(gamma: &HermitianOperator, k: usize) -> Result<HermitianOperator> {
    let source = gamma.space();
    if k == 0 {
        return Ok(gamma.clone());
    }
    let target = source.at_level(source.level() + k)?;
    let types = source.at_level(k)?;
    let g = gamma.matrix();
    let mut out = CMatrix::zeros(target.dim(), target.dim());
    let mut scratch = vec![0u32; source.n_modes()];
    let mut terms: Vec<(usize, usize, f64)> = Vec::new();
    for m in types.basis() {
        let w = multinomial_f64(m);
        terms.clear();
        for (p, occ) in target.basis().enumerate() {
            if occ.iter().zip(m).any(|(a, b)| a < b) {
                continue;
            }
            for ((s, &a), &b) in scratch.iter_mut().zip(occ).zip(m) {
                *s = a - b;
            }
            let src = source.index_of(&scratch).expect("p - m lies in the source basis");
            terms.push((p, src, ladder_weight(occ, m)));
        }
        for &(p, sp, cp) in &terms {
            for &(q, sq, cq) in &terms {
                out[(p, q)] += g[(sp, sq)] * (w * cp * cq);
            }
        }
    }
    let flags = OperatorFlags { hermitian: true, psd: gamma.flags().psd, unit_trace: false };
    Ok(HermitianOperator::trusted(target, out, flags))
}

/// `(M + k + N - 1)! / (M + N - 1)!`, the trace gain of `T^k`.
pub fn trace_gain(n_modes: usize, level: usize, k: usize) -> f64 {
    special::rising_ratio((level + n_modes - 1) as u64, k as u64)
}

/// The trace-preserving cloning channel `T^k / trace_gain`.
pub fn normalized_cloning(rho: &HermitianOperator, k: usize) -> Result<HermitianOperator> {
    if !rho.is_density() {
        return Err(Error::NotDensity("a density matrix"));
    }
    let s = rho.space();
    let out = cloning_apply(rho, k)?;
    let mut out = out.scaled(1.0 / trace_gain(s.n_modes(), s.level(), k));
    out.force_unit_trace();
    Ok(out)
}

/// Reduced density matrix; `vanishes` is set (and the operator is zero)
/// when the requested order exceeds the particle number.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub gamma: HermitianOperator,
    pub vanishes: bool,
}

/// `gamma^(l)_psi` on `H_l`, entry `(p, q) = l! <A(q) psi, A(p) psi> /
/// sqrt(prod p_i! prod q_i!)` with `A(m) = prod a_i^{m_i}`.
pub fn reduced_density(psi: &StateVector, ell: usize) -> Result<ReducedDensity> {
    psi.require_normalized()?;
    let space = psi.space();
    let target = space.at_level(ell)?;
    let flags = OperatorFlags { hermitian: true, psd: true, unit_trace: false };
    if ell > space.level() {
        let zero = CMatrix::zeros(target.dim(), target.dim());
        return Ok(ReducedDensity { gamma: HermitianOperator::trusted(target, zero, flags), vanishes: true });
    }
    let lower = space.at_level(space.level() - ell)?;
    let ell_fact = special::rising_ratio(0, ell as u64);
    let mut scratch = vec![0u32; space.n_modes()];
    // images[p][r] = sqrt(l!/prod p!) * <r| A(p) psi>
    let images: Vec<Vec<Complex64>> = target
        .basis()
        .map(|p| {
            let scale = libm::sqrt(ell_fact / factorial_product(p));
            lower
                .basis()
                .map(|r| {
                    for ((s, &a), &b) in scratch.iter_mut().zip(r).zip(p) {
                        *s = a + b;
                    }
                    let src = space.index_of(&scratch).expect("r + p lies in H_M");
                    psi.coeffs()[src] * (scale * ladder_weight(&scratch, p))
                })
                .collect()
        })
        .collect();
    let d = target.dim();
    let matrix = CMatrix::from_fn(d, d, |p, q| linalg::inner(&images[q], &images[p]));
    Ok(ReducedDensity { gamma: HermitianOperator::trusted(target, matrix, flags), vanishes: false })
}

/// `W_k(|psi><psi|)` on `H_k`, entry `(p, q) = k! <A*(p) psi, A*(q) psi> /
/// sqrt(prod p_i! prod q_i!)`.
pub fn measure_prepare(psi: &StateVector, k: usize) -> Result<HermitianOperator> {
    psi.require_normalized()?;
    let space = psi.space();
    let target = space.at_level(k)?;
    let upper = space.at_level(space.level() + k)?;
    let k_fact = special::rising_ratio(0, k as u64);
    let mut scratch = vec![0u32; space.n_modes()];
    let images: Vec<Vec<Complex64>> = target
        .basis()
        .map(|p| {
            let scale = libm::sqrt(k_fact / factorial_product(p));
            let mut v = vec![Complex64::new(0.0, 0.0); upper.dim()];
            for (r, occ) in space.basis().enumerate() {
                for ((s, &a), &b) in scratch.iter_mut().zip(occ).zip(p) {
                    *s = a + b;
                }
                let t = upper.index_of(&scratch).expect("r + p lies in H_{M+k}");
                v[t] = psi.coeffs()[r] * (scale * ladder_weight(&scratch, p));
            }
            v
        })
        .collect();
    let d = target.dim();
    let matrix = CMatrix::from_fn(d, d, |p, q| linalg::inner(&images[p], &images[q]));
    let flags = OperatorFlags { hermitian: true, psd: true, unit_trace: false };
    Ok(HermitianOperator::trusted(target, matrix, flags))
}

/// Fitted constants `C_0..C_k` in `W_k = sum_l C_l T^l(gamma^(k-l))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionConstants {
    pub k: usize,
    pub values: Vec<f64>,
    /// Largest entry-wise residual over all fitted states, relative to the
    /// largest entry of the fitted operators.
    pub residual: f64,
    pub condition: f64,
}

/// The operators `T^l(gamma^(k-l)_psi)` on `H_k`, for `l = 0..=k`.
pub fn decomposition_terms(psi: &StateVector, k: usize) -> Result<Vec<HermitianOperator>> {
    (0..=k)
        .map(|ell| cloning_apply(&reduced_density(psi, k - ell)?.gamma, ell))
        .collect()
}

/// Max-entry residual of `W_k - sum C_l T^l(gamma^(k-l))` for one state,
/// relative to the largest entry of `W_k`.
pub fn decomposition_residual(psi: &StateVector, constants: &[f64]) -> Result<f64> {
    let k = constants.len().checked_sub(1).ok_or(Error::Invalid("no constants"))?;
    let w = measure_prepare(psi, k)?;
    let mut fit = CMatrix::zeros(w.matrix().rows(), w.matrix().cols());
    for (c, term) in constants.iter().zip(decomposition_terms(psi, k)?) {
        fit.add_scaled(term.matrix(), *c)?;
    }
    Ok(w.matrix().sub(&fit)?.max_abs() / w.matrix().max_abs().max(f64::MIN_POSITIVE))
}

/// Least-squares fit of the normal-ordering constants over `trials` random
/// states drawn from the `"decomposition"` stream of `seed`.
pub fn decomposition_constants(
    n_modes: usize,
    level: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<DecompositionConstants> {
    decomposition_constants_in(&SymmetricSpace::new(n_modes, level)?, k, trials, seed)
}

/// [`decomposition_constants`] on an existing space (and its resource guard).
pub fn decomposition_constants_in(
    space: &Arc<SymmetricSpace>,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<DecompositionConstants> {
    if k > space.level() {
        return Err(Error::Invalid("decomposition fit needs k <= M"));
    }
    if trials < k + 2 {
        return Err(Error::Invalid("decomposition fit needs at least k + 2 trials"));
    }
    let mut states = Vec::with_capacity(trials);
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); k + 1];
    let mut rhs = Vec::new();
    for t in 0..trials {
        let mut rng = random::stream(seed, "decomposition", t as u64);
        let psi = random::random_state(space, &mut rng);
        let w = measure_prepare(&psi, k)?;
        let terms = decomposition_terms(&psi, k)?;
        for (idx, z) in w.matrix().as_slice().iter().enumerate() {
            rhs.push(z.re);
            rhs.push(z.im);
            for (col, term) in terms.iter().enumerate() {
                let e = term.matrix().as_slice()[idx];
                rows[col].push(e.re);
                rows[col].push(e.im);
            }
        }
        states.push(psi);
    }
    let a = RealColumns { rows: rhs.len(), columns: rows };
    let (values, sigma) = linalg::least_squares(&a, &rhs)?;
    let smin = sigma.last().copied().unwrap_or(0.0);
    let condition = if smin > 0.0 { sigma[0] / smin } else { f64::INFINITY };
    if condition > FIT_MAX_CONDITION {
        return Err(Error::IllConditioned { cond: condition });
    }
    let mut residual = 0.0f64;
    for psi in &states {
        residual = residual.max(decomposition_residual(psi, &values)?);
    }
    if residual > FIT_RESIDUAL_TOL {
        return Err(Error::FitResidual { residual });
    }
    if let Some(&c) = values.iter().find(|&&c| c < -FIT_NEGATIVITY_TOL) {
        return Err(Error::NegativeConstant { value: c });
    }
    Ok(DecompositionConstants { k, values, residual, condition })
}

/// Spectrum of `T^k(|u^M><u^M|)`: eigenvalue `k! m! / (M! (m - M)!)` for
/// `m = M..=M+k` with multiplicity `binomial(M + k - m + N - 2, N - 2)`,
/// plus zero with multiplicity `dim H_{M+k} - dim H_k`.
pub fn coherent_output_spectrum(n_modes: usize, level: usize, k: usize) -> Result<SpectrumSequence> {
    if n_modes == 0 {
        return Err(Error::Invalid("number of modes must be at least 1"));
    }
    let (n, m0, k64) = (n_modes as u64, level as u64, k as u64);
    let dim_total = special::dimension(n_modes, level + k)?;
    let dim_k = special::dimension(n_modes, k)?;
    let mut levels = Vec::with_capacity(k + 2);
    for j in 0..=k64 {
        let m = m0 + k64 - j;
        let mult = if n == 1 {
            u64::from(j == 0)
        } else {
            special::binomial(j + n - 2, n - 2)?
        };
        let value = match (special::factorial(k64), special::binomial(m, m0)) {
            (Ok(f), Ok(b)) if f.checked_mul(b).is_some_and(|v| v < (1u64 << 53)) => (f * b) as f64,
            _ => libm::exp(special::ln_factorial(k64) + special::ln_binomial(m, m0)),
        };
        levels.push((value, mult));
    }
    levels.push((0.0, dim_total - dim_k));
    Ok(SpectrumSequence::from_levels(levels))
}

/// `f_l(m) = l! m! / (m - (k - l))!` for `m >= k - l`, else 0: the spectrum
/// of `T^l(a*(u)^{k-l} a(u)^{k-l})` as a function of the number of quanta
/// along `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionalSpectrum {
    pub k: usize,
    pub ell: usize,
}

pub fn directional_spectrum_fn(k: usize, ell: usize) -> Result<DirectionalSpectrum> {
    if ell > k {
        return Err(Error::Invalid("need 0 <= l <= k"));
    }
    Ok(DirectionalSpectrum { k, ell })
}

impl DirectionalSpectrum {
    pub fn eval(&self, m: usize) -> f64 {
        let shift = self.k - self.ell;
        if m < shift {
            return 0.0;
        }
        special::rising_ratio(0, self.ell as u64) * special::rising_ratio((m - shift) as u64, shift as u64)
    }
}

/// `M - lambda_max(gamma^(1))`: zero exactly for coherent vectors.
pub fn coherence_defect(psi: &StateVector) -> Result<f64> {
    let m = psi.space().level();
    if m == 0 {
        return Err(Error::Invalid("coherence defect needs M >= 1"));
    }
    let g = reduced_density(psi, 1)?.gamma;
    let top = spectrum(&g)?.max().unwrap_or(0.0);
    Ok((m as f64 - top).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_vector, enumerate_basis};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.sub(b).unwrap().max_abs() <= tol
    }

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn cloning_of_basis_projector() {
        let s = enumerate_basis(2, 1).unwrap();
        let psi = StateVector::basis_state(s, &[1, 0]).unwrap();
        let out = cloning_apply(&HermitianOperator::pure(&psi), 1).unwrap();
        assert!(close(out.matrix(), &diag(&[2.0, 1.0, 0.0]), 1e-15));
        let norm = normalized_cloning(&HermitianOperator::pure(&psi), 1).unwrap();
        assert!(close(norm.matrix(), &diag(&[2.0 / 3.0, 1.0 / 3.0, 0.0]), 1e-15));
        assert!(norm.is_density());
    }

    #[test]
    fn cloning_with_k_zero_is_identity_map() {
        let s = enumerate_basis(3, 2).unwrap();
        let rho = HermitianOperator::maximally_mixed(s);
        assert_eq!(cloning_apply(&rho, 0).unwrap(), rho);
        assert_eq!(normalized_cloning(&rho, 0).unwrap().matrix(), rho.matrix());
    }

    #[test]
    fn reduced_density_examples() {
        let s = enumerate_basis(2, 2).unwrap();
        let psi = StateVector::basis_state(s.clone(), &[1, 1]).unwrap();
        let g = reduced_density(&psi, 1).unwrap();
        assert!(close(g.gamma.matrix(), &diag(&[1.0, 1.0]), 1e-15));
        let g0 = reduced_density(&psi, 0).unwrap();
        assert!(close(g0.gamma.matrix(), &diag(&[1.0]), 1e-15));
        let g3 = reduced_density(&psi, 3).unwrap();
        assert!(g3.vanishes && g3.gamma.matrix().max_abs() == 0.0);
    }

    #[test]
    fn measure_prepare_examples() {
        let s = enumerate_basis(2, 1).unwrap();
        let psi = StateVector::basis_state(s, &[1, 0]).unwrap();
        assert!(close(measure_prepare(&psi, 1).unwrap().matrix(), &diag(&[2.0, 1.0]), 1e-15));
        assert!(close(measure_prepare(&psi, 0).unwrap().matrix(), &diag(&[1.0]), 1e-15));
    }

    #[test]
    fn coherent_spectra() {
        let s = coherent_output_spectrum(2, 1, 1).unwrap();
        assert_eq!(s.levels(), &[(2.0, 1), (1.0, 1), (0.0, 1)]);
        let s = coherent_output_spectrum(3, 1, 2).unwrap();
        assert_eq!(s.to_vec(), vec![6.0, 4.0, 4.0, 2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.total(), 20.0);
        let s = coherent_output_spectrum(4, 3, 0).unwrap();
        assert_eq!(s.levels(), &[(1.0, 1), (0.0, 19)]);
        let s = coherent_output_spectrum(1, 2, 3).unwrap();
        assert_eq!(s.levels(), &[(60.0, 1)]);
    }

    #[test]
    fn directional_spectrum_examples() {
        let f = directional_spectrum_fn(3, 3).unwrap();
        assert!((0..6).all(|m| f.eval(m) == 6.0));
        let f = directional_spectrum_fn(2, 1).unwrap();
        assert_eq!([f.eval(0), f.eval(1), f.eval(2), f.eval(5)], [0.0, 1.0, 2.0, 5.0]);
        let f = directional_spectrum_fn(5, 2).unwrap();
        assert_eq!(f.eval(3), 2.0 * 6.0);
        assert!(directional_spectrum_fn(2, 3).is_err());
    }

    #[test]
    fn coherence_defect_examples() {
        let s = enumerate_basis(2, 2).unwrap();
        let psi = StateVector::basis_state(s.clone(), &[1, 1]).unwrap();
        assert!((coherence_defect(&psi).unwrap() - 1.0).abs() < 1e-14);
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!(coherence_defect(&coherent_vector(&s, &u).unwrap()).unwrap() < 1e-12);
        let s1 = enumerate_basis(3, 1).unwrap();
        let v = StateVector::new(s1, vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, -0.8)]).unwrap();
        assert!(coherence_defect(&v).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_non_density_input() {
        let s = enumerate_basis(2, 1).unwrap();
        let op = HermitianOperator::new(s.clone(), diag(&[2.0, 1.0])).unwrap();
        assert!(matches!(normalized_cloning(&op, 1), Err(Error::NotDensity(_))));
        assert!(HermitianOperator::density(s.clone(), diag(&[1.5, -0.5])).is_err());
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(HermitianOperator::new(s, m).is_err());
    }

    #[test]
    fn fit_preconditions() {
        assert!(decomposition_constants(2, 1, 2, 10, 0).is_err());
        assert!(decomposition_constants(2, 3, 2, 3, 0).is_err());
    }
}
