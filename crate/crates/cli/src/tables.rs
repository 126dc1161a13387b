//! JSON form of structure-constant tables and a thread-safe table cache.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nctorus_core::category::{table_key, TableKey, TableProvider};
use nctorus_core::sl2::{SL2Mat, TorusParams};
use nctorus_core::theta::{structure_constants, StructureConstantsTable};

use crate::config::complex_pair;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub a1: usize,
    pub a2: usize,
    pub a: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFile {
    pub g1: [[i64; 2]; 2],
    pub g2: [[i64; 2]; 2],
    pub theta: f64,
    #[serde(with = "complex_pair")]
    pub tau: Complex64,
    #[serde(with = "complex_pair")]
    pub z1: Complex64,
    #[serde(with = "complex_pair")]
    pub z2: Complex64,
    pub tol: f64,
    pub entries: Vec<Entry>,
    pub tail_bound: f64,
}

fn rows(g: &SL2Mat) -> [[i64; 2]; 2] {
    [[g.a, g.b], [g.c, g.d]]
}

fn from_rows(r: [[i64; 2]; 2]) -> Result<SL2Mat> {
    Ok(SL2Mat::new(r[0][0], r[0][1], r[1][0], r[1][1])?)
}

impl From<&StructureConstantsTable> for TableFile {
    fn from(t: &StructureConstantsTable) -> Self {
        TableFile {
            g1: rows(&t.g1),
            g2: rows(&t.g2),
            theta: t.params.theta,
            tau: t.params.tau,
            z1: t.z1,
            z2: t.z2,
            tol: t.tol,
            entries: t.entries().map(|(a1, a2, a, v)| Entry { a1, a2, a, re: v.re, im: v.im }).collect(),
            tail_bound: t.tail_bound,
        }
    }
}

impl TableFile {
    pub fn to_table(&self) -> Result<StructureConstantsTable> {
        let g1 = from_rows(self.g1)?;
        let g2 = from_rows(self.g2)?;
        let params = TorusParams::new(self.theta, self.tau)?;
        let mut values = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        let probe = StructureConstantsTable::from_parts(g1, g2, params, self.z1, self.z2, self.tol, self.tail_bound, values.clone())?;
        let (_, c2, c12) = probe.dims();
        for e in &self.entries {
            let i = (e.a1 * c2 + e.a2) * c12 + e.a;
            let slot = values.get_mut(i).ok_or_else(|| {
                nctorus_core::error::Error::ShapeMismatch(format!("entry ({}, {}, {}) out of range", e.a1, e.a2, e.a))
            })?;
            *slot = Complex64::new(e.re, e.im);
        }
        Ok(StructureConstantsTable::from_parts(g1, g2, params, self.z1, self.z2, self.tol, self.tail_bound, values)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Computes the table and writes it to `path`.
pub fn export_constants(g1: &SL2Mat, g2: &SL2Mat, params: TorusParams, z1: Complex64, z2: Complex64, tol: f64, path: &Path) -> Result<TableFile> {
    let table = structure_constants(g1, g2, params, z1, z2, tol)?;
    let file = TableFile::from(&table);
    file.write(path)?;
    Ok(file)
}

/// Table cache shared between threads.
#[derive(Debug, Default)]
pub struct SharedTables {
    entries: RwLock<HashMap<TableKey, Arc<StructureConstantsTable>>>,
}

impl SharedTables {
    pub fn len(&self) -> usize {
        self.entries.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl TableProvider for SharedTables {
    fn table(
        &self,
        g1: &SL2Mat,
        g2: &SL2Mat,
        params: TorusParams,
        z1: Complex64,
        z2: Complex64,
        tol: f64,
    ) -> nctorus_core::error::Result<Arc<StructureConstantsTable>> {
        let key = table_key(g1, g2, params, z1, z2, tol);
        if let Some(t) = self.entries.read().ok().and_then(|m| m.get(&key).cloned()) {
            return Ok(t);
        }
        let t = Arc::new(structure_constants(g1, g2, params, z1, z2, tol)?);
        if let Ok(mut m) = self.entries.write() {
            m.entry(key).or_insert_with(|| t.clone());
        }
        Ok(t)
    }
}
