#![allow(dead_code)]

use std::path::PathBuf;

use serde::Deserialize;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn lih_files() -> Vec<PathBuf> {
    szvqe::experiments::integral_files(&fixture_dir().join("lih")).unwrap()
}

pub fn lih_equilibrium() -> PathBuf {
    fixture_dir().join("lih/lih_1.595.fcidump")
}

pub fn all_fixture_files() -> Vec<PathBuf> {
    let mut files = szvqe::experiments::integral_files(&fixture_dir().join("h2")).unwrap();
    files.extend(lih_files());
    files
}

/// Energies computed by external quantum-chemistry software when the
/// fixtures were generated.
#[derive(Debug, Deserialize)]
pub struct Reference {
    pub e_rhf: f64,
    pub e_doci: f64,
    pub e_fci: f64,
    pub n_orbitals: usize,
    pub n_electrons: usize,
}

pub fn reference_for(integrals: &std::path::Path) -> Reference {
    let text = std::fs::read_to_string(integrals.with_extension("ref.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}
