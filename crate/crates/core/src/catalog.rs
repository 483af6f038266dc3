//! Named Pisot numbers with expected patterns, read from TOML.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigpoly::{alpha_poly, beta_poly, IntPolynomial, PolyError};
use crate::seqlab::Expectation;

/// The catalog shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed catalog: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("entry {name:?}: {source}")]
    Coeffs { name: String, source: PolyError },
    #[error("entry {0:?}: polynomial is not monic of degree >= 1")]
    NotMonic(String),
    #[error("duplicate entry name {0:?}")]
    Duplicate(String),
    #[error("no catalog entry named {0:?}")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// Ascending decimal coefficients.
    pub coeffs: Vec<String>,
    #[serde(default)]
    pub provenance: String,
    #[serde(default, rename = "expect")]
    pub expectations: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn poly(&self) -> IntPolynomial {
        // validated at load time
        IntPolynomial::from_decimal_strings(&self.coeffs).expect("validated coefficients")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn generated(name: String, p: &IntPolynomial, provenance: &str) -> Self {
        CatalogEntry { name, coeffs: p.to_decimal_strings(), provenance: provenance.into(), expectations: Vec::new() }
    }
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    #[serde(default)]
    entry: Vec<CatalogEntry>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let file: CatalogFile = toml::from_str(text)?;
        let mut seen = BTreeSet::new();
        for e in &file.entry {
            if !seen.insert(e.name.clone()) {
                return Err(CatalogError::Duplicate(e.name.clone()));
            }
            let p = IntPolynomial::from_decimal_strings(&e.coeffs)
                .map_err(|source| CatalogError::Coeffs { name: e.name.clone(), source })?;
            if !p.is_monic() || p.degree().unwrap_or(0) < 1 || p.coeffs().len() != e.coeffs.len() {
                return Err(CatalogError::NotMonic(e.name.clone()));
            }
        }
        Ok(Catalog { entries: file.entry })
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_CATALOG).expect("bundled catalog is valid")
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// Looks up `name`; `alpha<n>` and `beta<n>` are generated on demand.
    pub fn get(&self, name: &str) -> Result<CatalogEntry, CatalogError> {
        if let Some(e) = self.entries.iter().find(|e| e.name == name) {
            return Ok(e.clone());
        }
        let family = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok()).filter(|&n| n >= 1);
        if let Some(n) = family("alpha") {
            return Ok(CatalogEntry::generated(name.into(), &alpha_poly(n), "alpha family, generated"));
        }
        if let Some(n) = family("beta") {
            return Ok(CatalogEntry::generated(name.into(), &beta_poly(n), "beta family, generated"));
        }
        Err(CatalogError::Unknown(name.into()))
    }
}
