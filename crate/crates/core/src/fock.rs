//! Occupation-number bases of the symmetric spaces `H_M`, bosonic ladder
//! operators and coherent (highest-weight) vectors.
//!
//! Basis vectors of `H_M` for `N` modes are labelled by occupation vectors
//! `(n_1, ..., n_N)` with `sum n_i = M`, ordered reverse-lexicographically so
//! that `(M, 0, ..., 0)` has index 0 and `(0, ..., 0, M)` is last.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::special;
use crate::DEFAULT_MAX_DIM;

/// Tolerance on `| |v| - 1 |` for anything that must be a unit vector.
pub const NORM_TOL: f64 = 1e-12;

/// Mode counts of one basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    counts: Vec<u32>,
}

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn level(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn n_modes(&self) -> usize {
        self.counts.len()
    }
}

impl Ord for OccupationVector {
    /// Canonical order: larger counts in earlier modes come first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.counts.cmp(&self.counts)
    }
}

impl PartialOrd for OccupationVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The catalogue of one symmetric space: mode count, level, the ordered
/// basis and the index map.
#[derive(Debug, PartialEq, Eq)]
pub struct SymmetricSpace {
    n_modes: usize,
    level: usize,
    dim: usize,
    max_dim: u64,
    /// Flattened basis, `dim * n_modes` counts.
    counts: Vec<u32>,
    /// `table[t][r]` = number of occupation vectors of `t` modes at level `r`.
    table: Vec<Vec<usize>>,
}

/// Enumerate the basis of `H_M` for `n_modes` modes at `level`, using the
/// default resource guard.
pub fn enumerate_basis(n_modes: usize, level: usize) -> Result<Arc<SymmetricSpace>> {
    SymmetricSpace::with_limit(n_modes, level, DEFAULT_MAX_DIM)
}

pub fn dimension(n_modes: usize, level: usize) -> Result<u64> {
    special::dimension(n_modes, level)
}

impl SymmetricSpace {
    pub fn new(n_modes: usize, level: usize) -> Result<Arc<Self>> {
        Self::with_limit(n_modes, level, DEFAULT_MAX_DIM)
    }

    pub fn with_limit(n_modes: usize, level: usize, max_dim: u64) -> Result<Arc<Self>> {
        let dim = special::dimension(n_modes, level)?;
        if dim > max_dim {
            return Err(Error::Resource { dim, limit: max_dim });
        }
        let dim = dim as usize;

        let mut table = vec![vec![0usize; level + 1]; n_modes + 1];
        for (t, row) in table.iter_mut().enumerate().skip(1) {
            for (r, slot) in row.iter_mut().enumerate() {
                *slot = special::dimension(t, r)? as usize;
            }
        }

        let mut counts = Vec::with_capacity(dim * n_modes);
        let mut cur = vec![0u32; n_modes];
        cur[0] = level as u32;
        loop {
            counts.extend_from_slice(&cur);
            // Successor in reverse-lexicographic order: move one quantum out
            // of the last non-empty mode before the final one and collect the
            // tail into the next mode.
            let Some(i) = (0..n_modes.saturating_sub(1)).rev().find(|&i| cur[i] > 0) else {
                break;
            };
            let tail: u32 = cur[i + 1..].iter().sum::<u32>() + 1;
            cur[i] -= 1;
            cur[i + 1] = tail;
            for c in &mut cur[i + 2..] {
                *c = 0;
            }
        }
        debug_assert_eq!(counts.len(), dim * n_modes);

        Ok(Arc::new(Self { n_modes, level, dim, max_dim, counts, table }))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_dim(&self) -> u64 {
        self.max_dim
    }

    /// Counts of basis vector `i`.
    pub fn occupation(&self, i: usize) -> &[u32] {
        &self.counts[i * self.n_modes..(i + 1) * self.n_modes]
    }

    pub fn vector(&self, i: usize) -> OccupationVector {
        OccupationVector::new(self.occupation(i).to_vec())
    }

    pub fn basis(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.counts.chunks_exact(self.n_modes.max(1)).take(self.dim)
    }

    /// Position of `counts` in the canonical basis, computed by ranking
    /// rather than by lookup.
    pub fn index_of(&self, counts: &[u32]) -> Option<usize> {
        if counts.len() != self.n_modes {
            return None;
        }
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total != self.level {
            return None;
        }
        let mut remaining = self.level;
        let mut index = 0;
        for (i, &c) in counts.iter().enumerate().take(self.n_modes - 1) {
            let c = c as usize;
            // Every vector with a larger count in mode i (and the same
            // prefix) precedes this one.
            if remaining > c {
                index += self.table[self.n_modes - i][remaining - c - 1];
            }
            remaining -= c;
        }
        Some(index)
    }

    /// The space with the same modes and guard at another level.
    pub fn at_level(&self, level: usize) -> Result<Arc<SymmetricSpace>> {
        Self::with_limit(self.n_modes, level, self.max_dim)
    }

    fn check_same(&self, other: &SymmetricSpace) -> Result<()> {
        if self.n_modes != other.n_modes || self.level != other.level {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

/// Coefficients of a vector in `H_M`, in canonical basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: Arc<SymmetricSpace>,
    coeffs: Vec<Complex64>,
}

impl StateVector {
    pub fn new(space: Arc<SymmetricSpace>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: coeffs.len() });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("state coefficients must be finite"));
        }
        Ok(Self { space, coeffs })
    }

    pub fn basis_state(space: Arc<SymmetricSpace>, counts: &[u32]) -> Result<Self> {
        let idx = space
            .index_of(counts)
            .ok_or(Error::Invalid("occupation vector does not belong to the space"))?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); space.dim()];
        coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &Arc<SymmetricSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coeffs)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Invalid("cannot normalize the zero vector"));
        }
        for z in &mut self.coeffs {
            *z /= n;
        }
        Ok(self)
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.space.check_same(&other.space)?;
        Ok(linalg::inner(&self.coeffs, &other.coeffs))
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        for z in &mut self.coeffs {
            *z *= s;
        }
        self
    }

    /// `|self><self|` as a dense matrix.
    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.coeffs)
    }
}

fn check_unit(u: &[Complex64]) -> Result<()> {
    let n = linalg::norm(u);
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(())
}

/// `|u^{(x) M}>` in the occupation basis: the coefficient at `n` is
/// `sqrt(M! / prod n_i!) prod u_i^{n_i}`.
pub fn coherent_vector(space: &Arc<SymmetricSpace>, u: &[Complex64]) -> Result<StateVector> {
    if u.len() != space.n_modes() {
        return Err(Error::DimensionMismatch { expected: space.n_modes(), found: u.len() });
    }
    check_unit(u)?;
    Ok(StateVector { space: space.clone(), coeffs: coherent_coeffs(space, u) })
}

/// Coefficients of the coherent vector without the unit-norm check; used by
/// sampling loops that produce unit vectors by construction.
pub fn coherent_coeffs(space: &SymmetricSpace, u: &[Complex64]) -> Vec<Complex64> {
    let m = space.level();
    let powers: Vec<Vec<Complex64>> = u
        .iter()
        .map(|&ui| {
            let mut row = Vec::with_capacity(m + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=m {
                row.push(acc);
                acc *= ui;
            }
            row
        })
        .collect();
    let ln_m = special::ln_factorial(m as u64);
    space
        .basis()
        .map(|occ| {
            let weight = match special::multinomial(occ) {
                Ok(w) if w < (1u64 << 53) => libm::sqrt(w as f64),
                _ => {
                    let ln = ln_m - occ.iter().map(|&c| special::ln_factorial(c as u64)).sum::<f64>();
                    libm::exp(0.5 * ln)
                }
            };
            occ.iter()
                .zip(&powers)
                .fold(Complex64::new(weight, 0.0), |acc, (&c, row)| acc * row[c as usize])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Which ladder operator to apply: a single mode, or the combination
/// `a*(w) = sum w_i a_i*` / `a(w) = sum conj(w_i) a_i`.
#[derive(Debug, Clone, Copy)]
pub enum Direction<'a> {
    Mode(usize),
    Vector(&'a [Complex64]),
}

pub fn apply_ladder(kind: Ladder, direction: Direction<'_>, state: &StateVector) -> Result<StateVector> {
    let space = state.space();
    let n = space.n_modes();
    let weights: Vec<Complex64> = match direction {
        Direction::Mode(i) => {
            if i >= n {
                return Err(Error::Invalid("mode index out of range"));
            }
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            w[i] = Complex64::new(1.0, 0.0);
            w
        }
        Direction::Vector(w) => {
            if w.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: w.len() });
            }
            match kind {
                Ladder::Create => w.to_vec(),
                Ladder::Annihilate => w.iter().map(|z| z.conj()).collect(),
            }
        }
    };
    let target = match kind {
        Ladder::Create => space.at_level(space.level() + 1)?,
        Ladder::Annihilate => {
            if space.level() == 0 {
                return Err(Error::Invalid("cannot annihilate on the vacuum level"));
            }
            space.at_level(space.level() - 1)?
        }
    };
    let coeffs = ladder_coeffs(kind, &weights, space, &target, state.coeffs());
    Ok(StateVector { space: target, coeffs })
}

/// Core ladder loop shared by `apply_ladder` and the representation code.
pub(crate) fn ladder_coeffs(
    kind: Ladder,
    weights: &[Complex64],
    source: &SymmetricSpace,
    target: &SymmetricSpace,
    coeffs: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); target.dim()];
    let mut scratch = vec![0u32; source.n_modes()];
    for (idx, occ) in source.basis().enumerate() {
        let c = coeffs[idx];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (mode, &w) in weights.iter().enumerate() {
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            scratch.copy_from_slice(occ);
            let factor = match kind {
                Ladder::Create => {
                    scratch[mode] += 1;
                    libm::sqrt(scratch[mode] as f64)
                }
                Ladder::Annihilate => {
                    if occ[mode] == 0 {
                        continue;
                    }
                    scratch[mode] -= 1;
                    libm::sqrt(occ[mode] as f64)
                }
            };
            let t = target.index_of(&scratch).expect("ladder image stays in the target basis");
            out[t] += c * w * factor;
        }
    }
    out
}

/// Matrix of `a_i*` from `space` (level M) to level M + 1.
pub fn creation_matrix(space: &Arc<SymmetricSpace>, mode: usize) -> Result<CMatrix> {
    if mode >= space.n_modes() {
        return Err(Error::Invalid("mode index out of range"));
    }
    let target = space.at_level(space.level() + 1)?;
    let mut m = CMatrix::zeros(target.dim(), space.dim());
    let mut scratch = vec![0u32; space.n_modes()];
    for (j, occ) in space.basis().enumerate() {
        scratch.copy_from_slice(occ);
        scratch[mode] += 1;
        let i = target.index_of(&scratch).expect("creation stays in the basis");
        m[(i, j)] = Complex64::new(libm::sqrt(scratch[mode] as f64), 0.0);
    }
    Ok(m)
}

/// Matrix of `a_i` from `space` (level M >= 1) to level M - 1.
pub fn annihilation_matrix(space: &Arc<SymmetricSpace>, mode: usize) -> Result<CMatrix> {
    if space.level() == 0 {
        return Err(Error::Invalid("cannot annihilate on the vacuum level"));
    }
    let lower = space.at_level(space.level() - 1)?;
    Ok(creation_matrix(&lower, mode)?.adjoint())
}
