//! Seeded random ensembles.
//!
//! Every draw comes from a ChaCha8 stream keyed by `(root seed, label,
//! index)`, so sample `i` of a run is the same no matter how many workers
//! produced the others.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{HermitianOperator, OperatorFlags};
use crate::fock::{StateVector, SymmetricSpace};
use crate::linalg::{self, CMatrix};

pub type Stream = ChaCha8Rng;

const STREAM_TAG: u64 = 0x5745_4852_4c5f_7631;

/// 64-bit FNV-1a.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The stream for draw `index` of purpose `label` under `seed`.
pub fn stream(seed: u64, label: &str, index: u64) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&label_hash(label).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    key[24..].copy_from_slice(&STREAM_TAG.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Uniform point on the unit sphere of `C^n`.
pub fn sample_haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut v = gaussian_vector(rng, n);
        let r = linalg::norm(&v);
        if r > 1e-150 {
            for z in &mut v {
                *z /= r;
            }
            return v;
        }
    }
}

/// Uniformly random normalized vector in the given space.
pub fn random_state<R: Rng + ?Sized>(space: &Arc<SymmetricSpace>, rng: &mut R) -> StateVector {
    let coeffs = sample_haar_state(space.dim(), rng);
    StateVector::new(space.clone(), coeffs).expect("dimension matches the space")
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// `G G*` for a square complex Gaussian `G`, left unnormalized.
pub fn random_psd<R: Rng + ?Sized>(space: &Arc<SymmetricSpace>, rng: &mut R) -> HermitianOperator {
    let g = ginibre(rng, space.dim());
    let m = g.matmul(&g.adjoint()).expect("square");
    let m = symmetrize(m);
    let flags = OperatorFlags { hermitian: true, psd: true, unit_trace: false };
    HermitianOperator::trusted(space.clone(), m, flags)
}

/// Hilbert-Schmidt random density matrix.
pub fn random_density<R: Rng + ?Sized>(space: &Arc<SymmetricSpace>, rng: &mut R) -> HermitianOperator {
    let op = random_psd(space, rng);
    let t = op.trace();
    let mut out = op.scaled(1.0 / t);
    out.force_unit_trace();
    out
}

fn symmetrize(m: CMatrix) -> CMatrix {
    let n = m.rows();
    CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a Ginibre
/// matrix, which leaves `R` with a positive diagonal.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let g = ginibre(rng, n);
        let mut q = CMatrix::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            // two passes keep orthogonality at machine precision
            for _ in 0..2 {
                for i in 0..j {
                    let qi = q.column(i);
                    let c = linalg::inner(&qi, &v);
                    for (x, y) in v.iter_mut().zip(&qi) {
                        *x -= c * y;
                    }
                }
            }
            let r = linalg::norm(&v);
            if r < 1e-12 {
                ok = false;
                break;
            }
            for x in &mut v {
                *x /= r;
            }
            q.set_column(j, &v);
        }
        if ok {
            return q;
        }
    }
}
