//! JSON file schemas for bodies, plank sets and matrices.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Polytope, SymmetricBody};
use crate::planks::Plank;

/// `{"dimension": d, "vertices": [[x1,...,xd], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BodyFile {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl BodyFile {
    pub fn from_polytope(p: &Polytope) -> Self {
        BodyFile {
            dimension: p.dim(),
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dimension {
                return Err(Error::InvalidField {
                    field: "vertices",
                    message: format!(
                        "vertex {i} has {} coordinates, expected {}",
                        v.len(),
                        self.dimension
                    ),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidField {
                    field: "vertices",
                    message: format!("vertex {i} has a non-finite coordinate"),
                });
            }
        }
        Polytope::from_rows(self.dimension, &self.vertices)
    }
}

pub fn load_body(path: &Path) -> Result<Polytope> {
    let text = std::fs::read_to_string(path)?;
    let file: BodyFile = serde_json::from_str(&text)?;
    file.to_polytope()
}

pub fn save_body(path: &Path, body: &Polytope) -> Result<()> {
    let file = BodyFile::from_polytope(body);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn save_symmetric_body(path: &Path, body: &SymmetricBody) -> Result<()> {
    save_body(path, body.as_polytope())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlankEntry {
    pub normal: Vec<f64>,
    pub translation: f64,
    pub width: f64,
}

/// `{"dimension": d, "planks": [{"normal": [...], "translation": t, "width": w}, ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlankSetFile {
    pub dimension: usize,
    pub planks: Vec<PlankEntry>,
}

/// Planks as loaded from disk. Normals are renormalized on load; the flag
/// records whether renormalization moved any coordinate by more than 1e-9.
#[derive(Clone, Debug)]
pub struct LoadedPlanks {
    pub dimension: usize,
    pub planks: Vec<Plank>,
    pub renormalized: bool,
}

pub fn load_planks(path: &Path) -> Result<LoadedPlanks> {
    let text = std::fs::read_to_string(path)?;
    let file: PlankSetFile = serde_json::from_str(&text)?;
    let mut planks = Vec::with_capacity(file.planks.len());
    let mut renormalized = false;
    for (i, entry) in file.planks.iter().enumerate() {
        if entry.normal.len() != file.dimension {
            return Err(Error::InvalidField {
                field: "planks.normal",
                message: format!(
                    "plank {i} normal has {} coordinates, expected {}",
                    entry.normal.len(),
                    file.dimension
                ),
            });
        }
        let raw = DVector::from_row_slice(&entry.normal);
        // keep already-unit normals bit-exact; only renormalize off-unit input
        let dir = Direction::new(raw.clone())
            .or_else(|_| Direction::normalized(raw.clone()))
            .map_err(|_| Error::InvalidField {
                field: "planks.normal",
                message: format!("plank {i} normal cannot be normalized"),
            })?;
        if (dir.coords() - &raw).amax() > 1e-9 {
            renormalized = true;
        }
        planks.push(Plank::new(dir, entry.translation, entry.width)?);
    }
    Ok(LoadedPlanks {
        dimension: file.dimension,
        planks,
        renormalized,
    })
}

pub fn save_planks(path: &Path, dimension: usize, planks: &[Plank]) -> Result<()> {
    let file = PlankSetFile {
        dimension,
        planks: planks
            .iter()
            .map(|p| PlankEntry {
                normal: p.normal().coords().iter().copied().collect(),
                translation: p.translation(),
                width: p.width(),
            })
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// `{"dimension": d, "matrix": [[row], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dimension: usize,
    pub matrix: Vec<Vec<f64>>,
}

pub fn save_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let file = MatrixFile {
        dimension: m.nrows(),
        matrix: (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}
