//! Classical reference results: DOCI exact diagonalization in the
//! fixed-pair-number basis, the RHF energy, dense hard-core boson operator
//! algebra and dense matrix exponentials of the pUCCD generator.
//!
//! Nothing here goes through the Pauli-string or circuit code paths, so the
//! results can be used to check them.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::ansatz::PuccdParameters;
use crate::error::{Error, Result};
use crate::integrals::SeniorityZeroCoeffs;

/// Largest orbital count handled by the dense oracle.
pub const MAX_DENSE_ORBITALS: usize = 16;

/// All occupation masks with `n_pairs` bits set among `n_orbitals`, in
/// increasing numeric order.
#[derive(Debug, Clone)]
pub struct SeniorityZeroBasis {
    n_orbitals: usize,
    n_pairs: usize,
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SeniorityZeroBasis {
    pub fn new(n_orbitals: usize, n_pairs: usize) -> Result<Self> {
        if n_pairs > n_orbitals {
            return Err(Error::InvalidInput(format!("{n_pairs} pairs exceed {n_orbitals} orbitals")));
        }
        if n_orbitals > MAX_DENSE_ORBITALS {
            return Err(Error::SizeOverflow(binomial(n_orbitals, n_pairs)));
        }
        let masks: Vec<u64> = (0u64..1 << n_orbitals).filter(|m| m.count_ones() as usize == n_pairs).collect();
        let index = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Ok(Self { n_orbitals, n_pairs, masks, index })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    /// Embeds a sector vector into the full `2^N` register.
    pub fn embed(&self, v: &DVector<f64>) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); 1 << self.n_orbitals];
        for (k, m) in self.masks.iter().enumerate() {
            full[*m as usize] = v[k].into();
        }
        full
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn diagonal_element(coeffs: &SeniorityZeroCoeffs, mask: u64) -> f64 {
    let n = coeffs.n_orbitals();
    let occupied: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
    let mut e = coeffs.constant;
    for &p in &occupied {
        e += coeffs.h_r1[(p, p)];
        for &q in &occupied {
            if p != q {
                e += coeffs.h_r2[(p, q)];
            }
        }
    }
    e
}

/// Hamiltonian matrix in the seniority-zero basis. Off-diagonal elements
/// connect masks that differ by moving one pair `q → p` and equal
/// `h_r1[p,q]`; hard-core bosons carry no exchange sign.
pub fn doci_matrix(coeffs: &SeniorityZeroCoeffs, basis: &SeniorityZeroBasis) -> Result<DMatrix<f64>> {
    if coeffs.n_orbitals() != basis.n_orbitals {
        return Err(Error::InvalidInput("basis and coefficients disagree on the orbital count".into()));
    }
    let n = basis.n_orbitals;
    let dim = basis.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (col, &m) in basis.masks.iter().enumerate() {
        h[(col, col)] = diagonal_element(coeffs, m);
        for q in (0..n).filter(|q| m >> q & 1 == 1) {
            for p in (0..n).filter(|p| m >> p & 1 == 0) {
                let target = m & !(1 << q) | 1 << p;
                let row = basis.index[&target];
                h[(row, col)] = coeffs.h_r1[(p, q)];
            }
        }
    }
    Ok(h)
}

/// Lowest eigenpair of the DOCI matrix. The eigenvector is normalized with
/// its largest-magnitude component positive.
pub fn doci_ground(coeffs: &SeniorityZeroCoeffs, basis: &SeniorityZeroBasis) -> Result<(f64, DVector<f64>)> {
    let h = doci_matrix(coeffs, basis)?;
    let eig = h.symmetric_eigen();
    let (k, energy) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, e)| (k, *e)).expect("non-empty basis");
    let mut v = eig.eigenvectors.column(k).into_owned();
    v /= v.norm();
    let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
    if pivot < 0.0 {
        v = -v;
    }
    Ok((energy, v))
}

/// Energy of the closed-shell determinant with the lowest `n_pairs`
/// orbitals doubly occupied.
pub fn rhf_energy(coeffs: &SeniorityZeroCoeffs, n_pairs: usize) -> f64 {
    diagonal_element(coeffs, (1u64 << n_pairs) - 1)
}

/// Single-qubit operator `op` on qubit `k` of an `n`-qubit register
/// (qubit `k` is bit `k` of the basis index).
pub fn embed_single(op: &DMatrix<Complex64>, k: usize, n: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::<Complex64>::identity(1, 1);
    for q in (0..n).rev() {
        let factor = if q == k { op.clone() } else { DMatrix::identity(2, 2) };
        out = out.kronecker(&factor);
    }
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Pair annihilation operators `b_p = (X_p + iY_p)/2`, `p = 0..n`.
pub fn hcb_annihilators(n: usize) -> Vec<DMatrix<Complex64>> {
    let local = (pauli_x() + pauli_y() * c(0., 1.)) * c(0.5, 0.);
    (0..n).map(|p| embed_single(&local, p, n)).collect()
}

/// `C + Σ h_r1[p,q] b†_p b_q + Σ_{p≠q} h_r2[p,q] b†_p b_p b†_q b_q` as a dense
/// matrix built from operator products.
pub fn dense_hcb_hamiltonian(coeffs: &SeniorityZeroCoeffs) -> DMatrix<Complex64> {
    let n = coeffs.n_orbitals();
    let b = hcb_annihilators(n);
    let bd: Vec<_> = b.iter().map(|m| m.adjoint()).collect();
    let num: Vec<_> = (0..n).map(|p| &bd[p] * &b[p]).collect();
    let dim = 1 << n;
    let mut h = DMatrix::<Complex64>::identity(dim, dim) * c(coeffs.constant, 0.);
    for p in 0..n {
        for q in 0..n {
            h += (&bd[p] * &b[q]) * c(coeffs.h_r1[(p, q)], 0.);
            if p != q {
                h += (&num[p] * &num[q]) * c(coeffs.h_r2[(p, q)], 0.);
            }
        }
    }
    h
}

/// `T = Σ t[i,j] (b†_i b_j − b†_j b_i)` as a dense matrix.
pub fn dense_puccd_generator(params: &PuccdParameters) -> DMatrix<Complex64> {
    let n = params.n_orbitals();
    let b = hcb_annihilators(n);
    let dim = 1 << n;
    let mut t = DMatrix::<Complex64>::zeros(dim, dim);
    for ((i, j), theta) in params.iter() {
        let up = b[i].adjoint() * &b[j];
        let down = b[j].adjoint() * &b[i];
        t += (up - down) * c(theta, 0.);
    }
    t
}

/// `exp(T)|HF⟩` by dense matrix exponential.
pub fn exact_puccd_state(params: &PuccdParameters) -> Vec<Complex64> {
    let u = dense_puccd_generator(params).exp();
    let hf = (1usize << params.n_pairs()) - 1;
    u.column(hf).iter().copied().collect()
}

/// Largest violation of the hard-core boson relations found by
/// [`hcb_operator_check`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HcbReport {
    pub n_modes: usize,
    /// `[b_p, b_q†]`, `[b_p†, b_q†]`, `[b_p, b_q]` for `p ≠ q`.
    pub max_commutator: f64,
    /// `{b_p, b_p}` and `{b_p†, b_p†}`.
    pub max_anticommutator_same: f64,
    /// `{b_p, b_p†} − 1`.
    pub max_anticommutator_unit: f64,
}

impl HcbReport {
    pub fn max_violation(&self) -> f64 {
        self.max_commutator.max(self.max_anticommutator_same).max(self.max_anticommutator_unit)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Verifies the hard-core boson (anti-)commutation relations for the qubit
/// representation of `b_p` on up to four modes.
pub fn hcb_operator_check(n: usize) -> Result<HcbReport> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidInput(format!("operator check supports 1..=4 modes, got {n}")));
    }
    let b = hcb_annihilators(n);
    let bd: Vec<_> = b.iter().map(|m| m.adjoint()).collect();
    let id = DMatrix::<Complex64>::identity(1 << n, 1 << n);
    let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
    let anti = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b + b * a;
    let mut report = HcbReport { n_modes: n, max_commutator: 0.0, max_anticommutator_same: 0.0, max_anticommutator_unit: 0.0 };
    for p in 0..n {
        report.max_anticommutator_same = report.max_anticommutator_same.max(max_abs(&anti(&b[p], &b[p]))).max(max_abs(&anti(&bd[p], &bd[p])));
        report.max_anticommutator_unit = report.max_anticommutator_unit.max(max_abs(&(anti(&b[p], &bd[p]) - &id)));
        for q in (0..n).filter(|&q| q != p) {
            let worst = max_abs(&comm(&b[p], &bd[q])).max(max_abs(&comm(&bd[p], &bd[q]))).max(max_abs(&comm(&b[p], &b[q])));
            report.max_commutator = report.max_commutator.max(worst);
        }
    }
    Ok(report)
}
