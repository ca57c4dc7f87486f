//! Molecular-orbital integrals and the seniority-zero (hard-core boson)
//! Hamiltonian coefficients built from them.
//!
//! Two input formats are understood:
//!
//! * FCIDUMP text, 1-based indices, chemist's notation `(ij|kl)`. Index
//!   pattern `i j 0 0` is a one-electron integral, `0 0 0 0` the core energy,
//!   and `i 0 0 0` an orbital energy (ignored).
//! * A JSON document `{"N", "n_e", "C", "sei", "tei"}` with `sei` an `N×N`
//!   nested array and `tei` an `N×N×N×N` nested array, also in chemist's
//!   notation. Used for synthetic test Hamiltonians.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Index of the unordered pair `{i, j}` in a packed lower triangle.
fn pair_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

fn packed_tei_index(i: usize, j: usize, k: usize, l: usize) -> usize {
    pair_index(pair_index(i, j), pair_index(k, l))
}

fn packed_tei_len(n: usize) -> usize {
    let pairs = n * (n + 1) / 2;
    pairs * (pairs + 1) / 2
}

/// One- and two-electron integrals over `N` spatial orbitals plus the core
/// (nuclear repulsion and frozen-core) constant, all in Hartree.
///
/// The two-electron tensor is kept in 8-fold packed form, so every
/// permutation `(ij|kl) = (ji|kl) = (ij|lk) = (kl|ij) = ...` reads the same
/// stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    n_orbitals: usize,
    n_electron_pairs: usize,
    core_energy: f64,
    sei: DMatrix<f64>,
    tei: Vec<f64>,
}

impl IntegralSet {
    /// Builds an integral set from a symmetric one-electron matrix and a full
    /// `N^4` two-electron tensor (row-major, chemist's notation).
    pub fn new(n_orbitals: usize, n_electron_pairs: usize, core_energy: f64, sei: DMatrix<f64>, tei_full: &[f64]) -> Result<Self> {
        let n = n_orbitals;
        Self::check_dims(n, n_electron_pairs)?;
        if sei.nrows() != n || sei.ncols() != n {
            return Err(Error::InvalidInput(format!("one-electron matrix is {}x{}, expected {n}x{n}", sei.nrows(), sei.ncols())));
        }
        if tei_full.len() != n * n * n * n {
            return Err(Error::InvalidInput(format!("two-electron tensor has {} entries, expected {}", tei_full.len(), n * n * n * n)));
        }
        for i in 0..n {
            for j in 0..i {
                if (sei[(i, j)] - sei[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidInput(format!("one-electron matrix not symmetric at ({i},{j})")));
                }
            }
        }
        let full = |i: usize, j: usize, k: usize, l: usize| tei_full[((i * n + j) * n + k) * n + l];
        let mut tei = vec![0.0; packed_tei_len(n)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = full(i, j, k, l);
                        let canon = full(j.max(i), j.min(i), k.max(l), k.min(l));
                        let swapped = full(k, l, i, j);
                        if (v - canon).abs() > SYMMETRY_TOL || (v - swapped).abs() > SYMMETRY_TOL {
                            return Err(Error::InvalidInput(format!("two-electron tensor breaks 8-fold symmetry at ({i},{j}|{k},{l})")));
                        }
                        tei[packed_tei_index(i, j, k, l)] = v;
                    }
                }
            }
        }
        Ok(Self { n_orbitals: n, n_electron_pairs, core_energy, sei, tei })
    }

    /// An integral set with every integral zero; entries are filled with
    /// [`IntegralSet::set_sei`] and [`IntegralSet::set_tei`].
    pub fn zeros(n_orbitals: usize, n_electron_pairs: usize, core_energy: f64) -> Result<Self> {
        Self::check_dims(n_orbitals, n_electron_pairs)?;
        Ok(Self {
            n_orbitals,
            n_electron_pairs,
            core_energy,
            sei: DMatrix::zeros(n_orbitals, n_orbitals),
            tei: vec![0.0; packed_tei_len(n_orbitals)],
        })
    }

    fn check_dims(n: usize, n_e: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("at least one orbital is required".into()));
        }
        if n_e > n {
            return Err(Error::InvalidInput(format!("{n_e} electron pairs do not fit in {n} orbitals")));
        }
        Ok(())
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_electron_pairs(&self) -> usize {
        self.n_electron_pairs
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn sei(&self, i: usize, j: usize) -> f64 {
        self.sei[(i, j)]
    }

    /// Two-electron integral `(ij|kl)` in chemist's notation.
    pub fn tei(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.tei[packed_tei_index(i, j, k, l)]
    }

    /// The same tensor in creation-creation-annihilation-annihilation order,
    /// `v[p,q,r,s] = (ps|qr)`, i.e. the coefficient of
    /// `a†_p a†_q a_r a_s` in the second-quantized Hamiltonian.
    pub fn interaction(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.tei(p, s, q, r)
    }

    /// Sets `sei[i,j]` and `sei[j,i]`.
    pub fn set_sei(&mut self, i: usize, j: usize, value: f64) {
        self.sei[(i, j)] = value;
        self.sei[(j, i)] = value;
    }

    /// Sets `(ij|kl)` and every symmetry-equivalent index order.
    pub fn set_tei(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        self.tei[packed_tei_index(i, j, k, l)] = value;
    }

    pub fn set_core_energy(&mut self, value: f64) {
        self.core_energy = value;
    }

    /// Scales every integral and the core constant by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_orbitals: self.n_orbitals,
            n_electron_pairs: self.n_electron_pairs,
            core_energy: self.core_energy * factor,
            sei: &self.sei * factor,
            tei: self.tei.iter().map(|v| v * factor).collect(),
        }
    }

    /// Serializes to FCIDUMP text. Only symmetry-unique nonzero entries are
    /// written; values use the shortest representation that round-trips.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_orbitals;
        let mut out = String::new();
        let orbsym = vec!["1"; n].join(",");
        let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2=0,\n  ORBSYM={orbsym},\n  ISYM=1,\n &END", 2 * self.n_electron_pairs);
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        if pair_index(i, j) < pair_index(k, l) {
                            continue;
                        }
                        let v = self.tei(i, j, k, l);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let v = self.sei[(i, j)];
                if v != 0.0 {
                    let _ = writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1);
                }
            }
        }
        let _ = writeln!(out, "{:e} 0 0 0 0", self.core_energy);
        out
    }

    /// Serializes to the synthetic JSON format.
    pub fn to_json(&self) -> String {
        let n = self.n_orbitals;
        let doc = IntegralJson {
            n,
            n_e: self.n_electron_pairs,
            c: self.core_energy,
            sei: (0..n).map(|i| (0..n).map(|j| self.sei[(i, j)]).collect()).collect(),
            tei: (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| (0..n).map(|l| self.tei(i, j, k, l)).collect()).collect()).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("integral JSON serialization")
    }
}

#[derive(Serialize, Deserialize)]
struct IntegralJson {
    #[serde(rename = "N")]
    n: usize,
    n_e: usize,
    #[serde(rename = "C")]
    c: f64,
    sei: Vec<Vec<f64>>,
    tei: Vec<Vec<Vec<Vec<f64>>>>,
}

/// Parses the synthetic JSON integral format.
pub fn parse_integrals_json(text: &str) -> Result<IntegralSet> {
    let doc: IntegralJson = serde_json::from_str(text)?;
    let n = doc.n;
    let shape_err = |what: &str| Error::InvalidInput(format!("{what} does not have N={n} entries per axis"));
    if doc.sei.len() != n || doc.sei.iter().any(|row| row.len() != n) {
        return Err(shape_err("sei"));
    }
    let mut tei = Vec::with_capacity(n.pow(4));
    if doc.tei.len() != n {
        return Err(shape_err("tei"));
    }
    for a in &doc.tei {
        if a.len() != n {
            return Err(shape_err("tei"));
        }
        for b in a {
            if b.len() != n {
                return Err(shape_err("tei"));
            }
            for c in b {
                if c.len() != n {
                    return Err(shape_err("tei"));
                }
                tei.extend_from_slice(c);
            }
        }
    }
    let sei = DMatrix::from_fn(n, n, |i, j| doc.sei[i][j]);
    IntegralSet::new(n, doc.n_e, doc.c, sei, &tei)
}

struct FcidumpHeader {
    norb: usize,
    nelec: usize,
    ms2: i64,
}

fn header_int(header: &str, key: &str, line: usize) -> Result<Option<i64>> {
    let upper = header.to_ascii_uppercase();
    let bytes = upper.as_bytes();
    let mut search = 0;
    while let Some(pos) = upper[search..].find(key) {
        let start = search + pos;
        let end = start + key.len();
        search = end;
        let boundary_before = start == 0 || !bytes[start - 1].is_ascii_alphanumeric();
        let rest = upper[end..].trim_start();
        if !boundary_before || !rest.starts_with('=') {
            continue;
        }
        let value: String = rest[1..].trim_start().chars().take_while(|c| c.is_ascii_digit() || *c == '-' || *c == '+').collect();
        return value.parse::<i64>().map(Some).map_err(|_| Error::Parse { line, message: format!("malformed header value for {key}") });
    }
    Ok(None)
}

fn parse_header(header: &str, line: usize) -> Result<FcidumpHeader> {
    let missing = |key: &str| Error::Parse { line, message: format!("malformed header: missing {key}") };
    let norb = header_int(header, "NORB", line)?.ok_or_else(|| missing("NORB"))?;
    let nelec = header_int(header, "NELEC", line)?.ok_or_else(|| missing("NELEC"))?;
    let ms2 = header_int(header, "MS2", line)?.unwrap_or(0);
    if norb < 1 {
        return Err(Error::Parse { line, message: "malformed header: NORB must be positive".into() });
    }
    if nelec < 0 {
        return Err(Error::Parse { line, message: "malformed header: NELEC must be non-negative".into() });
    }
    Ok(FcidumpHeader { norb: norb as usize, nelec: nelec as usize, ms2 })
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    token.replace(['D', 'd'], "E").parse::<f64>().map_err(|_| Error::Parse { line, message: format!("non-numeric value {token:?}") })
}

fn parse_index(token: &str, norb: usize, line: usize) -> Result<usize> {
    let idx: usize = token.parse().map_err(|_| Error::Parse { line, message: format!("non-numeric index {token:?}") })?;
    if idx > norb {
        return Err(Error::IndexOutOfRange(format!("line {line}: orbital index {idx} exceeds NORB={norb}")));
    }
    Ok(idx)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Core,
    Sei(usize),
    Tei(usize),
}

/// Parses FCIDUMP text into an [`IntegralSet`].
///
/// Unspecified integrals are zero. When the same integral appears twice the
/// later line wins and a warning is logged. Point-group labels are ignored.
pub fn parse_fcidump(text: &str) -> Result<IntegralSet> {
    let mut header = String::new();
    let mut lines = text.lines().enumerate();
    let mut header_end_line = 0;
    let mut closed = false;
    for (no, raw) in lines.by_ref() {
        header_end_line = no + 1;
        let t = raw.trim();
        let upper = t.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            header.push_str(&t[..pos]);
            closed = true;
            break;
        }
        if t == "/" {
            closed = true;
            break;
        }
        header.push_str(t);
        header.push(' ');
    }
    if !closed || !header.to_ascii_uppercase().contains("&FCI") {
        return Err(Error::Parse { line: header_end_line.max(1), message: "malformed header: expected &FCI ... &END".into() });
    }
    let h = parse_header(&header, header_end_line)?;
    if h.nelec % 2 != 0 {
        return Err(Error::OpenShell(format!("NELEC={} is odd", h.nelec)));
    }
    if h.ms2 != 0 {
        return Err(Error::OpenShell(format!("MS2={}", h.ms2)));
    }
    let n_e = h.nelec / 2;
    if n_e > h.norb {
        return Err(Error::InvalidInput(format!("NELEC={} exceeds capacity of NORB={}", h.nelec, h.norb)));
    }
    let mut ints = IntegralSet::zeros(h.norb, n_e, 0.0)?;
    let mut seen: HashMap<Slot, usize> = HashMap::new();
    for (no, raw) in lines {
        let line = no + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() != 5 {
            return Err(Error::Parse { line, message: format!("expected 'value i j k l', found {} fields", tokens.len()) });
        }
        let value = parse_value(tokens[0], line)?;
        let i = parse_index(tokens[1], h.norb, line)?;
        let j = parse_index(tokens[2], h.norb, line)?;
        let k = parse_index(tokens[3], h.norb, line)?;
        let l = parse_index(tokens[4], h.norb, line)?;
        let slot = match (i, j, k, l) {
            (0, 0, 0, 0) => Slot::Core,
            (_, 0, 0, 0) => continue,
            (i, j, 0, 0) if i > 0 && j > 0 => Slot::Sei(pair_index(i - 1, j - 1)),
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => Slot::Tei(packed_tei_index(i - 1, j - 1, k - 1, l - 1)),
            _ => {
                return Err(Error::Parse { line, message: format!("unsupported index pattern {i} {j} {k} {l}") });
            }
        };
        if let Some(prev) = seen.insert(slot, line) {
            warn!("FCIDUMP line {line} overrides the integral first given on line {prev}");
        }
        match slot {
            Slot::Core => ints.set_core_energy(value),
            Slot::Sei(_) => ints.set_sei(i - 1, j - 1, value),
            Slot::Tei(_) => ints.set_tei(i - 1, j - 1, k - 1, l - 1, value),
        }
    }
    Ok(ints)
}

/// Loads integrals from a path; `.json` files use the synthetic format,
/// anything else is read as FCIDUMP.
pub fn load_integrals(path: impl AsRef<Path>) -> Result<IntegralSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => parse_integrals_json(&text),
        _ => parse_fcidump(&text),
    }
}

/// Coefficients of the hard-core boson Hamiltonian
///
/// `H = C + Σ_{pq} h_r1[p,q] b†_p b_q + Σ_{p≠q} h_r2[p,q] n_p n_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeniorityZeroCoeffs {
    pub constant: f64,
    pub h_r1: DMatrix<f64>,
    pub h_r2: DMatrix<f64>,
}

impl SeniorityZeroCoeffs {
    /// Validates shapes, symmetry and the zero diagonal of `h_r2`.
    pub fn new(constant: f64, h_r1: DMatrix<f64>, h_r2: DMatrix<f64>) -> Result<Self> {
        let n = h_r1.nrows();
        if n == 0 || h_r1.ncols() != n || h_r2.nrows() != n || h_r2.ncols() != n {
            return Err(Error::InvalidInput("coefficient matrices must be square and equally sized".into()));
        }
        if !constant.is_finite() || h_r1.iter().chain(h_r2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        for i in 0..n {
            if h_r2[(i, i)] != 0.0 {
                return Err(Error::InvalidInput(format!("h_r2[{i},{i}] must be zero")));
            }
            for j in 0..i {
                if h_r1[(i, j)] != h_r1[(j, i)] || h_r2[(i, j)] != h_r2[(j, i)] {
                    return Err(Error::InvalidInput(format!("coefficients not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { constant, h_r1, h_r2 })
    }

    pub fn n_orbitals(&self) -> usize {
        self.h_r1.nrows()
    }
}

/// Assembles the hard-core boson coefficients:
///
/// * `h_r1[i,i] = 2 sei[i,i] + v[i,i,i,i]`
/// * `h_r1[i,j] = v[i,i,j,j]` (pair hopping, the exchange integral `(ij|ij)`)
/// * `h_r2[i,j] = 2 v[i,j,j,i] − v[i,j,i,j]` (`2(ii|jj) − (ij|ji)`)
///
/// with `v` the [`IntegralSet::interaction`] ordering.
pub fn build_hcb_coefficients(ints: &IntegralSet) -> SeniorityZeroCoeffs {
    let n = ints.n_orbitals();
    let v = |p, q, r, s| ints.interaction(p, q, r, s);
    let mut h_r1 = DMatrix::zeros(n, n);
    let mut h_r2 = DMatrix::zeros(n, n);
    for i in 0..n {
        h_r1[(i, i)] = 2.0 * ints.sei(i, i) + v(i, i, i, i);
        for j in 0..i {
            let hop = v(i, i, j, j);
            h_r1[(i, j)] = hop;
            h_r1[(j, i)] = hop;
            let pair = 2.0 * v(i, j, j, i) - v(i, j, i, j);
            h_r2[(i, j)] = pair;
            h_r2[(j, i)] = pair;
        }
    }
    SeniorityZeroCoeffs { constant: ints.core_energy(), h_r1, h_r2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = " &FCI NORB=1,NELEC=2,MS2=0,\n  ORBSYM=1,\n  ISYM=1,\n &END\n 0.5 1 1 1 1\n -1.25 1 1 0 0\n 0.7 0 0 0 0\n";

    fn header(norb: usize, nelec: usize) -> String {
        format!(" &FCI NORB={norb},NELEC={nelec},MS2=0,\n &END\n")
    }

    #[test]
    fn parses_single_orbital_dump() {
        let ints = parse_fcidump(TINY).unwrap();
        assert_eq!(ints.n_orbitals(), 1);
        assert_eq!(ints.n_electron_pairs(), 1);
        assert_eq!(ints.tei(0, 0, 0, 0), 0.5);
        assert_eq!(ints.sei(0, 0), -1.25);
        assert_eq!(ints.core_energy(), 0.7);
    }

    #[test]
    fn tei_line_fills_all_symmetric_orders() {
        let text = format!("{}0.3 1 2 2 1\n", header(2, 2));
        let ints = parse_fcidump(&text).unwrap();
        for (i, j, k, l) in [(0, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1)] {
            assert_eq!(ints.tei(i, j, k, l), 0.3);
        }
        assert_eq!(ints.tei(0, 0, 1, 1), 0.0);
        assert_eq!(ints.tei(1, 1, 0, 0), 0.0);
    }

    #[test]
    fn odd_electron_count_is_open_shell() {
        let err = parse_fcidump(&header(2, 3)).unwrap_err();
        assert!(matches!(err, Error::OpenShell(_)));
        assert!(err.to_string().contains("open-shell unsupported"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_fcidump("0.1 1 1 1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_fcidump(" &FCI NELEC=2 &END\n"), Err(Error::Parse { .. })));
        let out_of_range = format!("{}0.1 3 1 1 1\n", header(2, 2));
        assert!(matches!(parse_fcidump(&out_of_range), Err(Error::IndexOutOfRange(_))));
        let garbage = format!("{}abc 1 1 1 1\n", header(2, 2));
        match parse_fcidump(&garbage) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_lines_keep_the_last_value() {
        let text = format!("{}0.1 1 1 1 1\n0.2 1 1 1 1\n", header(1, 2));
        assert_eq!(parse_fcidump(&text).unwrap().tei(0, 0, 0, 0), 0.2);
    }

    #[test]
    fn fortran_exponents_and_orbital_energies() {
        let text = format!("{}1.5D-01 1 1 1 1\n-9.0 1 0 0 0\n", header(1, 0));
        let ints = parse_fcidump(&text).unwrap();
        assert_eq!(ints.tei(0, 0, 0, 0), 0.15);
        assert_eq!(ints.sei(0, 0), 0.0);
        assert_eq!(ints.n_electron_pairs(), 0);
    }

    #[test]
    fn diagonal_pair_energy() {
        let ints = parse_fcidump(TINY).unwrap();
        let c = build_hcb_coefficients(&ints);
        assert_eq!(c.h_r1[(0, 0)], -2.0);
        assert_eq!(c.constant, 0.7);
    }

    #[test]
    fn pair_hopping_reads_the_interaction_tensor() {
        // v[0,0,1,1] = (01|01)
        let mut ints = IntegralSet::zeros(2, 1, 0.0).unwrap();
        ints.set_tei(0, 1, 0, 1, 0.2);
        assert_eq!(ints.interaction(0, 0, 1, 1), 0.2);
        let c = build_hcb_coefficients(&ints);
        assert_eq!(c.h_r1[(0, 1)], 0.2);
        assert_eq!(c.h_r1[(1, 0)], 0.2);
    }

    #[test]
    fn pair_interaction_reads_coulomb_and_exchange() {
        // v[0,1,1,0] = (00|11), v[0,1,0,1] = (01|10)
        let mut ints = IntegralSet::zeros(2, 1, 0.0).unwrap();
        ints.set_tei(0, 0, 1, 1, 0.4);
        ints.set_tei(0, 1, 1, 0, 0.1);
        assert_eq!(ints.interaction(0, 1, 1, 0), 0.4);
        assert_eq!(ints.interaction(0, 1, 0, 1), 0.1);
        let c = build_hcb_coefficients(&ints);
        assert!((c.h_r2[(0, 1)] - 0.7).abs() < 1e-15);
        assert_eq!(c.h_r2[(0, 0)], 0.0);
    }

    #[test]
    fn json_format_rejects_broken_symmetry() {
        let mut tei = [0.0; 16];
        tei[1] = 0.5; // (00|01) without its partners
        let doc = serde_json::json!({
            "N": 2, "n_e": 1, "C": 0.0,
            "sei": [[0.0, 0.0], [0.0, 0.0]],
            "tei": [[[[tei[0], tei[1]], [tei[2], tei[3]]], [[0.0, 0.0], [0.0, 0.0]]],
                    [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]],
        });
        assert!(parse_integrals_json(&doc.to_string()).is_err());
    }

    #[test]
    fn coefficient_validation() {
        let ok = SeniorityZeroCoeffs::new(0.0, DMatrix::identity(2, 2), DMatrix::zeros(2, 2));
        assert!(ok.is_ok());
        let bad = SeniorityZeroCoeffs::new(0.0, DMatrix::identity(2, 2), DMatrix::identity(2, 2));
        assert!(bad.is_err());
    }
}
