//! The SU(N) action on `H_M`, the weight generators `E_ij = a_i* a_j`, and
//! an irreducibility check through the dimension of the commutant.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ladder_coeffs, Ladder, SymmetricSpace};
use crate::linalg::{self, CMatrix, RealColumns};
use crate::special;

/// Tolerance on `max |U*U - I|` for a matrix to count as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Relative singular-value cutoff used by [`commutant_dimension`].
pub const NULL_SPACE_TOL: f64 = 1e-8;

/// Most unknowns (`dim^2`) the commutant system may have.
pub const COMMUTANT_MAX_UNKNOWNS: usize = 4_000_000;

/// An `N x N` complex matrix acting on the one-body space. Determinants are
/// not checked: a global phase acts trivially on everything computed here.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: CMatrix,
    unitary: bool,
}

impl GroupElement {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let unitary = unitarity_defect(&matrix) <= UNITARY_TOL;
        Ok(Self { matrix, unitary })
    }

    /// Like [`GroupElement::new`] but refuses non-unitary input.
    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        let g = Self::new(matrix)?;
        if !g.unitary {
            return Err(Error::Invalid("matrix is not unitary"));
        }
        Ok(g)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    match u.adjoint().matmul(u) {
        Ok(p) => p.sub(&CMatrix::identity(u.cols())).map(|d| d.max_abs()).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// `pi(U)` on `H_M`: the restriction of `U (x) ... (x) U`.
///
/// Column `n` is built as `prod_i (b_i*)^{n_i} |vac> / sqrt(prod n_i!)`
/// with `b_i* = sum_j U_ji a_j*`.
pub fn symmetric_power(space: &Arc<SymmetricSpace>, g: &GroupElement) -> Result<CMatrix> {
    let n = space.n_modes();
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.n() });
    }
    let m = space.level();
    let levels: Vec<Arc<SymmetricSpace>> =
        (0..=m).map(|l| space.at_level(l)).collect::<Result<_>>()?;
    let columns_of_u: Vec<Vec<Complex64>> = (0..n).map(|i| g.matrix().column(i)).collect();

    let mut out = CMatrix::zeros(space.dim(), space.dim());
    for (col, occ) in space.basis().enumerate() {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        let mut level = 0;
        let mut norm = 1.0;
        for (mode, &count) in occ.iter().enumerate() {
            for k in 1..=count {
                v = ladder_coeffs(Ladder::Create, &columns_of_u[mode], &levels[level], &levels[level + 1], &v);
                level += 1;
                norm *= k as f64;
            }
        }
        let scale = 1.0 / libm::sqrt(norm);
        for (row, z) in v.into_iter().enumerate() {
            out[(row, col)] = z * scale;
        }
    }
    Ok(out)
}

/// Matrix of `E_ij = a_i* a_j` on `H_M` (modes are 0-based here).
pub fn weight_generator(space: &SymmetricSpace, i: usize, j: usize) -> Result<CMatrix> {
    let n = space.n_modes();
    if i >= n || j >= n {
        return Err(Error::Invalid("mode index out of range"));
    }
    let mut out = CMatrix::zeros(space.dim(), space.dim());
    for (col, (row, value)) in generator_entries(space, i, j).into_iter().enumerate() {
        if let Some(row) = row {
            out[(row, col)] = Complex64::new(value, 0.0);
        }
    }
    Ok(out)
}

/// For every basis column `p`, the single row `r` with `E_ij |p> = value |r>`.
fn generator_entries(space: &SymmetricSpace, i: usize, j: usize) -> Vec<(Option<usize>, f64)> {
    let mut scratch = vec![0u32; space.n_modes()];
    space
        .basis()
        .map(|occ| {
            if occ[j] == 0 {
                return (None, 0.0);
            }
            scratch.copy_from_slice(occ);
            let mut value = scratch[j] as f64;
            scratch[j] -= 1;
            scratch[i] += 1;
            value *= scratch[i] as f64;
            (space.index_of(&scratch), libm::sqrt(value))
        })
        .collect()
}

/// Dimension of `{A : [A, E_ij] = 0 for all i, j}`.
///
/// The stacked linear map `A -> ([E_ij, A])_ij` only couples entries
/// `A_pq` that share the weight difference `p - q`, so it splits into
/// independent blocks. Each block's singular values come from a one-sided
/// Jacobi SVD; values below `NULL_SPACE_TOL` times the largest one overall
/// count as zero.
pub fn commutant_dimension(space: &SymmetricSpace) -> Result<usize> {
    let dim = space.dim();
    let n = space.n_modes();
    if dim.checked_mul(dim).is_none_or(|u| u > COMMUTANT_MAX_UNKNOWNS) {
        return Err(Error::Resource {
            dim: (dim as u64).saturating_mul(dim as u64),
            limit: COMMUTANT_MAX_UNKNOWNS as u64,
        });
    }
    // (column of E_ij) and (row of E_ij) lookups for all generators.
    let mut col_maps = Vec::with_capacity(n * n);
    let mut row_maps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let entries = generator_entries(space, i, j);
            let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
            for (p, &(r, v)) in entries.iter().enumerate() {
                if let Some(r) = r {
                    rows[r].push((p, v));
                }
            }
            col_maps.push(entries);
            row_maps.push(rows);
        }
    }

    let mut blocks: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
    for p in 0..dim {
        for q in 0..dim {
            let key: Vec<i64> = space
                .occupation(p)
                .iter()
                .zip(space.occupation(q))
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect();
            blocks.entry(key).or_default().push((p, q));
        }
    }

    let mut per_block: Vec<(usize, Vec<f64>)> = Vec::with_capacity(blocks.len());
    for unknowns in blocks.values() {
        // Rows are (generator, r, s) triples touched by this block.
        let mut row_ids: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        let mut entries: Vec<Vec<(usize, f64)>> = Vec::with_capacity(unknowns.len());
        for &(p, q) in unknowns {
            let mut col = Vec::new();
            for g in 0..n * n {
                // (E A) picks up E[r, p] at (r, q).
                if let (Some(r), v) = col_maps[g][p] {
                    let next = row_ids.len();
                    let id = *row_ids.entry((g, r, q)).or_insert(next);
                    col.push((id, v));
                }
                // -(A E) picks up -E[q, t] at (p, t).
                for &(t, v) in &row_maps[g][q] {
                    let next = row_ids.len();
                    let id = *row_ids.entry((g, p, t)).or_insert(next);
                    col.push((id, -v));
                }
            }
            entries.push(col);
        }
        let mut a = RealColumns::new(row_ids.len(), unknowns.len());
        for (c, col) in entries.into_iter().enumerate() {
            for (r, v) in col {
                a.columns[c][r] += v;
            }
        }
        per_block.push((unknowns.len(), linalg::singular_values(&a)));
    }

    let smax = per_block
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .fold(0.0, f64::max);
    let cutoff = NULL_SPACE_TOL * smax;
    Ok(per_block
        .iter()
        .map(|(unknowns, s)| unknowns - s.iter().filter(|&&x| x > cutoff).count())
        .sum())
}

/// Number operator along the unit vector `u`, `a*(u) a(u)`, on `space`.
pub fn directional_number(space: &Arc<SymmetricSpace>, u: &[Complex64]) -> Result<CMatrix> {
    let n = space.n_modes();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    let mut out = CMatrix::zeros(space.dim(), space.dim());
    for i in 0..n {
        for j in 0..n {
            let w = u[i] * u[j].conj();
            if w.norm() == 0.0 {
                continue;
            }
            let e = weight_generator(space, i, j)?;
            for r in 0..space.dim() {
                for c in 0..space.dim() {
                    out[(r, c)] += w * e[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// `dim(H_M) * M / N`, the trace of every diagonal generator.
pub fn diagonal_generator_trace(n_modes: usize, level: usize) -> Result<f64> {
    Ok(special::dimension(n_modes, level)? as f64 * level as f64 / n_modes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_vector, enumerate_basis};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Real rotation in the (0, 1) plane times a phase on mode 2.
    fn sample_unitary(n: usize, theta: f64) -> CMatrix {
        let mut u = CMatrix::identity(n);
        let (s, co) = (libm::sin(theta), libm::cos(theta));
        u[(0, 0)] = c(co, 0.0);
        u[(0, 1)] = c(-s, 0.0);
        u[(1, 0)] = c(0.0, s);
        u[(1, 1)] = c(0.0, co);
        if n > 2 {
            u[(2, 2)] = c(libm::cos(0.3), libm::sin(0.3));
        }
        u
    }

    #[test]
    fn identity_maps_to_identity() {
        let s = enumerate_basis(3, 3).unwrap();
        let g = GroupElement::unitary(CMatrix::identity(3)).unwrap();
        let p = symmetric_power(&s, &g).unwrap();
        assert!(p.sub(&CMatrix::identity(s.dim())).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn fundamental_representation() {
        let s = enumerate_basis(2, 1).unwrap();
        let u = sample_unitary(2, 0.7);
        let p = symmetric_power(&s, &GroupElement::unitary(u.clone()).unwrap()).unwrap();
        assert!(p.sub(&u).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn diagonal_group_element() {
        let s = enumerate_basis(3, 3).unwrap();
        let d = [c(2.0, 0.0), c(0.5, 1.0), c(-1.0, 0.25)];
        let g = GroupElement::new(CMatrix::from_diagonal(&d)).unwrap();
        assert!(!g.is_unitary());
        let p = symmetric_power(&s, &g).unwrap();
        for (i, occ) in s.basis().enumerate() {
            let expect = occ.iter().zip(&d).fold(c(1.0, 0.0), |acc, (&n, &di)| acc * di.powu(n));
            for j in 0..s.dim() {
                let want = if i == j { expect } else { c(0.0, 0.0) };
                assert!((p[(j, i)] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn intertwines_coherent_vectors() {
        let s = enumerate_basis(3, 4).unwrap();
        let u = sample_unitary(3, 1.1);
        let v = [c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)];
        let p = symmetric_power(&s, &GroupElement::unitary(u.clone()).unwrap()).unwrap();
        let lhs = p.mul_vec(coherent_vector(&s, &v).unwrap().coeffs()).unwrap();
        let uv = u.mul_vec(&v).unwrap();
        let rhs = coherent_vector(&s, &uv).unwrap();
        for (a, b) in lhs.iter().zip(rhs.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(unitarity_defect(&p) < 1e-12);
    }

    #[test]
    fn generator_examples() {
        let s = enumerate_basis(2, 2).unwrap();
        let e11 = weight_generator(&s, 0, 0).unwrap();
        assert_eq!(e11, CMatrix::from_diagonal(&[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));

        let s1 = enumerate_basis(2, 1).unwrap();
        let e12 = weight_generator(&s1, 0, 1).unwrap();
        let mut expect = CMatrix::zeros(2, 2);
        expect[(0, 1)] = c(1.0, 0.0);
        assert_eq!(e12, expect);

        assert!(weight_generator(&s, 2, 0).is_err());
    }

    #[test]
    fn diagonal_generator_trace_by_symmetry() {
        for (n, m) in [(2, 3), (3, 2), (4, 3)] {
            let s = enumerate_basis(n, m).unwrap();
            let expect = diagonal_generator_trace(n, m).unwrap();
            for i in 0..n {
                let direct: f64 = s.basis().map(|o| o[i] as f64).sum();
                assert!((weight_generator(&s, i, i).unwrap().trace().re - expect).abs() < 1e-12);
                assert!((direct - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant_dimension(&enumerate_basis(2, 3).unwrap()), Ok(1));
        assert_eq!(commutant_dimension(&enumerate_basis(1, 4).unwrap()), Ok(1));
        assert_eq!(commutant_dimension(&enumerate_basis(3, 2).unwrap()), Ok(1));
    }
}
