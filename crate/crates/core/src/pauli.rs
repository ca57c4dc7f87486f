//! Qubit form of the hard-core boson Hamiltonian and its measurement plans.
//!
//! With `b_p = (X_p + iY_p)/2` the Hamiltonian becomes a sum of `Z_p`,
//! `Z_pZ_q`, `X_pX_q` and `Y_pY_q` strings plus a constant. Term strings are
//! written with qubit 0 as the leftmost character.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::SeniorityZeroCoeffs;

/// Terms whose weight falls below this magnitude (Hartree) are dropped.
pub const WEIGHT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, used as a term key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliOps(Vec<Pauli>);

impl PauliOps {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// The string with `op` on each listed qubit and identity elsewhere.
    pub fn on(n: usize, qubits: &[usize], op: Pauli) -> Self {
        let mut ops = vec![Pauli::I; n];
        for &q in qubits {
            ops[q] = op;
        }
        Self(ops)
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::InvalidInput(format!("bad Pauli character {c:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// Qubits carrying a non-identity operator, with that operator.
    pub fn support(&self) -> Vec<(usize, Pauli)> {
        self.0.iter().enumerate().filter(|(_, p)| **p != Pauli::I).map(|(q, p)| (q, *p)).collect()
    }

    /// Qubit-wise commutation: on every qubit the two operators are equal or
    /// one of them is the identity.
    pub fn qubitwise_commutes(&self, other: &PauliOps) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == Pauli::I || *b == Pauli::I || a == b)
    }

    /// Bit masks `(x, z)` of the symplectic representation, qubit `k` on bit `k`.
    pub fn masks(&self) -> (usize, usize) {
        let mut x = 0;
        let mut z = 0;
        for (q, p) in self.0.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q
                }
                Pauli::Z => z |= 1 << q,
            }
        }
        (x, z)
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩` for computational basis index `b`.
    pub fn act(&self, b: usize) -> (usize, Complex64) {
        let (x, z) = self.masks();
        let n_y = (x & z).count_ones();
        // Y = i X Z: collect i^{#Y} and the sign from Z acting on |b⟩ first.
        let mut phase = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if (b & z).count_ones() % 2 == 1 {
            phase = -phase;
        }
        (b ^ x, phase)
    }
}

impl fmt::Display for PauliOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub ops: PauliOps,
    pub weight: f64,
}

/// The role a non-constant term plays in the seniority-zero Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    Z(usize),
    ZZ(usize, usize),
    XX(usize, usize),
    YY(usize, usize),
}

impl PauliString {
    pub fn kind(&self) -> Result<TermKind> {
        let support = self.ops.support();
        match support.as_slice() {
            [(p, Pauli::Z)] => Ok(TermKind::Z(*p)),
            [(p, Pauli::Z), (q, Pauli::Z)] => Ok(TermKind::ZZ(*p, *q)),
            [(p, Pauli::X), (q, Pauli::X)] => Ok(TermKind::XX(*p, *q)),
            [(p, Pauli::Y), (q, Pauli::Y)] => Ok(TermKind::YY(*p, *q)),
            _ => Err(Error::UnexpectedTerm(self.ops.to_string())),
        }
    }
}

/// Real-weighted Pauli strings with unique keys plus an identity coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliString>,
    pub constant: f64,
}

impl QubitHamiltonian {
    /// Builds a Hamiltonian, merging duplicate keys and folding identity
    /// strings into the constant.
    pub fn new(n_qubits: usize, constant: f64, terms: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut merged: BTreeMap<PauliOps, f64> = BTreeMap::new();
        let mut constant = constant;
        for t in terms {
            if t.ops.len() != n_qubits {
                return Err(Error::InvalidInput(format!("term {} does not act on {n_qubits} qubits", t.ops)));
            }
            if !t.weight.is_finite() {
                return Err(Error::InvalidInput(format!("term {} has non-finite weight", t.ops)));
            }
            if t.ops.support().is_empty() {
                constant += t.weight;
            } else {
                *merged.entry(t.ops).or_insert(0.0) += t.weight;
            }
        }
        let terms = merged.into_iter().filter(|(_, w)| w.abs() >= WEIGHT_CUTOFF).map(|(ops, weight)| PauliString { ops, weight }).collect();
        Ok(Self { n_qubits, terms, constant })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn weight_of(&self, ops: &PauliOps) -> f64 {
        self.terms.iter().find(|t| &t.ops == ops).map_or(0.0, |t| t.weight)
    }

    /// Dense `2^N × 2^N` matrix, built by applying each string to basis states.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::from_diagonal_element(dim, dim, Complex64::new(self.constant, 0.0));
        for t in &self.terms {
            for b in 0..dim {
                let (row, phase) = t.ops.act(b);
                m[(row, b)] += phase * t.weight;
            }
        }
        m
    }

    pub fn to_json(&self) -> String {
        let doc = HamiltonianJson {
            n_qubits: self.n_qubits,
            constant: self.constant,
            terms: self.terms.iter().map(|t| TermJson { pauli: t.ops.to_string(), weight: t.weight }).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("hamiltonian JSON serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HamiltonianJson = serde_json::from_str(text)?;
        let terms =
            doc.terms.into_iter().map(|t| Ok(PauliString { ops: PauliOps::parse(&t.pauli)?, weight: t.weight })).collect::<Result<Vec<_>>>()?;
        Self::new(doc.n_qubits, doc.constant, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pauli: String,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianJson {
    n_qubits: usize,
    constant: f64,
    terms: Vec<TermJson>,
}

/// Maps hard-core boson coefficients onto Pauli strings.
///
/// Each unordered pair `p<q` appears twice in the ordered sums, so the
/// `X_pX_q`, `Y_pY_q` and `Z_pZ_q` weights are `h/2` rather than `h/4`.
pub fn qubitize(coeffs: &SeniorityZeroCoeffs) -> QubitHamiltonian {
    let n = coeffs.n_orbitals();
    let h1 = &coeffs.h_r1;
    let h2 = &coeffs.h_r2;
    let mut constant = coeffs.constant;
    let mut terms = Vec::new();
    for p in 0..n {
        constant += h1[(p, p)] / 2.0;
        let mut z = -h1[(p, p)] / 2.0;
        for q in 0..n {
            if q != p {
                constant += h2[(p, q)] / 4.0;
                z -= h2[(p, q)] / 2.0;
            }
        }
        terms.push(PauliString { ops: PauliOps::on(n, &[p], Pauli::Z), weight: z });
    }
    for p in 0..n {
        for q in p + 1..n {
            let hop = h1[(p, q)] / 2.0;
            terms.push(PauliString { ops: PauliOps::on(n, &[p, q], Pauli::X), weight: hop });
            terms.push(PauliString { ops: PauliOps::on(n, &[p, q], Pauli::Y), weight: hop });
            terms.push(PauliString { ops: PauliOps::on(n, &[p, q], Pauli::Z), weight: h2[(p, q)] / 2.0 });
        }
    }
    QubitHamiltonian::new(n, constant, terms).expect("qubitize produces well-formed terms")
}

/// A single-qubit-rotation measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BasisLabel {
    Diagonal,
    Xx,
    Yy,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Diagonal => write!(f, "DIAGONAL"),
            BasisLabel::Xx => write!(f, "XX"),
            BasisLabel::Yy => write!(f, "YY"),
        }
    }
}

/// Per-qubit rotation applied before a Z-basis readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitRotation {
    None,
    XBasis,
    YBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    pub basis: BasisLabel,
    pub members: Vec<PauliOps>,
    pub rotations: Vec<QubitRotation>,
}

/// Sorts the non-constant terms into the three tensor product bases
/// (Z/ZZ, XX, YY). Empty bases are omitted.
pub fn group_terms(h: &QubitHamiltonian) -> Result<Vec<MeasurementGroup>> {
    let n = h.n_qubits();
    let mut diagonal = Vec::new();
    let mut xx = Vec::new();
    let mut yy = Vec::new();
    for t in h.terms() {
        match t.kind()? {
            TermKind::Z(_) | TermKind::ZZ(..) => diagonal.push(t.ops.clone()),
            TermKind::XX(..) => xx.push(t.ops.clone()),
            TermKind::YY(..) => yy.push(t.ops.clone()),
        }
    }
    let groups = [
        (BasisLabel::Diagonal, diagonal, QubitRotation::None),
        (BasisLabel::Xx, xx, QubitRotation::XBasis),
        (BasisLabel::Yy, yy, QubitRotation::YBasis),
    ];
    Ok(groups
        .into_iter()
        .filter(|(_, members, _)| !members.is_empty())
        .map(|(basis, members, rot)| MeasurementGroup { basis, members, rotations: vec![rot; n] })
        .collect())
}

/// Round-robin (circle method) 1-factorization of the complete graph on the
/// qubits: `N−1` rounds for even `N`, `N` rounds with one idle qubit each for
/// odd `N`. Every unordered pair occurs in exactly one round.
pub fn paired_measurement_schedule(n_qubits: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n_qubits < 2 {
        return Err(Error::InvalidInput(format!("pair schedule needs at least 2 qubits, got {n_qubits}")));
    }
    // Odd N gets a phantom vertex; pairs with it are idle slots.
    let m = if n_qubits.is_multiple_of(2) { n_qubits } else { n_qubits + 1 };
    let fixed = m - 1;
    let mut rounds = Vec::with_capacity(m - 1);
    for r in 0..m - 1 {
        let mut round = Vec::with_capacity(m / 2);
        let first = (fixed, r);
        for (a, b) in std::iter::once(first).chain((1..m / 2).map(|k| ((r + k) % (m - 1), (r + m - 1 - k) % (m - 1)))) {
            if a < n_qubits && b < n_qubits {
                round.push((a, b));
            }
        }
        rounds.push(round);
    }
    Ok(rounds)
}
