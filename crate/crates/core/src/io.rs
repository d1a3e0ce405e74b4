//! JSON input and output formats.
//!
//! Complex numbers are written as `[re, im]`; a bare number is read as a
//! real. Matrices are arrays of rows.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ergodic::Hom;
use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, BlockStructure, Functional};
use crate::fourier::FourierCoefficients;
use crate::group::GroupTable;
use crate::improving::MapOnAlgebra;
use crate::linalg::{CMat, C64};
use crate::qgroup::{build_function_algebra, build_group_algebra, Origin, QuantumGroup};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> C64 {
        match z {
            ComplexJson::Real(x) => C64::new(x, 0.0),
            ComplexJson::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson::Pair([z.re, z.im])
    }
}

pub type MatrixJson = Vec<Vec<ComplexJson>>;

pub fn matrix_from_json(m: &MatrixJson, what: &str) -> Result<CMat> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if let Some(k) = m.iter().position(|r| r.len() != cols) {
        return Err(Error::Input(format!(
            "{what}: row {k} has {} entries, expected {cols}",
            m[k].len()
        )));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| m[i][j].into()))
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

/// `{"blocks", "weights", "matrices"}` for algebras, elements and state densities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<MatrixJson>>,
}

impl AlgebraJson {
    /// Missing weights default to the normalized trace `w_i = 1/Σ n_j²`.
    pub fn structure(&self) -> Result<Arc<BlockStructure>> {
        let weights = match &self.weights {
            Some(w) => w.clone(),
            None => {
                let total: usize = self.blocks.iter().map(|n| n * n).sum();
                if total == 0 {
                    return Err(Error::Input("no blocks".into()));
                }
                vec![1.0 / total as f64; self.blocks.len()]
            }
        };
        Ok(Arc::new(BlockStructure::new(self.blocks.clone(), weights)?))
    }

    pub fn element_on(&self, structure: Arc<BlockStructure>) -> Result<AlgebraElement> {
        let Some(mats) = &self.matrices else {
            return Err(Error::Input("\"matrices\" is required here".into()));
        };
        if self.blocks != structure.block_dims() {
            return Err(Error::Input(format!(
                "blocks {:?} do not match the algebra {:?}",
                self.blocks,
                structure.block_dims()
            )));
        }
        if let Some(w) = &self.weights {
            let bad = w
                .iter()
                .zip(structure.block_weights())
                .any(|(a, b)| (a - b).abs() > 1e-9);
            if bad || w.len() != structure.num_blocks() {
                return Err(Error::Input(format!(
                    "weights {w:?} do not match the algebra {:?}",
                    structure.block_weights()
                )));
            }
        }
        let blocks = mats
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, &format!("block {k}")))
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::from_blocks(structure, blocks)
    }

    pub fn element(&self) -> Result<AlgebraElement> {
        self.element_on(self.structure()?)
    }

    pub fn from_element(x: &AlgebraElement) -> Self {
        AlgebraJson {
            blocks: x.structure().block_dims().to_vec(),
            weights: Some(x.structure().block_weights().to_vec()),
            matrices: Some(x.blocks().iter().map(matrix_to_json).collect()),
        }
    }
}

/// A state given by its density; the density must be positive with `τ = 1`.
pub fn state_from_json(json: &AlgebraJson, structure: Arc<BlockStructure>) -> Result<Functional> {
    let phi = Functional::make_state(json.element_on(structure)?);
    if !phi.is_state() {
        return Err(Error::Domain(format!(
            "density is not a state (smallest eigenvalue {:.3e}, trace {:.6})",
            phi.min_eigenvalue(),
            phi.density().trace().re
        )));
    }
    Ok(phi)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CayleyJson {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    /// `"function_algebra"` (default) or `"group_algebra"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl CayleyJson {
    pub fn group(&self) -> Result<GroupTable> {
        let identity = match self.identity {
            Some(e) => e,
            None => (0..self.table.len())
                .find(|&e| self.table[e].iter().enumerate().all(|(k, &v)| v == k))
                .ok_or_else(|| Error::GroupTable("no identity row".into()))?,
        };
        GroupTable::new(self.table.clone(), identity)
    }

    pub fn from_group(t: &GroupTable, construction: Option<&str>) -> Self {
        CayleyJson {
            table: t.table().to_vec(),
            identity: Some(t.identity()),
            construction: construction.map(str::to_string),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumGroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<CayleyJson>,
}

impl QuantumGroupJson {
    /// The raw block data, for validation reports that must not fail early.
    pub fn raw(&self) -> Result<(Vec<usize>, Option<Vec<f64>>, CMat)> {
        match (&self.blocks, &self.delta) {
            (Some(b), Some(d)) => Ok((b.clone(), self.weights.clone(), matrix_from_json(d, "delta")?)),
            _ => {
                let g = self.build()?;
                Ok((
                    g.structure().block_dims().to_vec(),
                    Some(g.structure().block_weights().to_vec()),
                    g.delta().clone(),
                ))
            }
        }
    }

    pub fn build(&self) -> Result<QuantumGroup> {
        if let Some(cayley) = &self.cayley {
            let table = cayley.group()?;
            let g = match cayley.construction.as_deref().unwrap_or("function_algebra") {
                "function_algebra" => build_function_algebra(&table)?,
                "group_algebra" => build_group_algebra(&table)?,
                other => return Err(Error::Input(format!("unknown construction \"{other}\""))),
            };
            if let Some(b) = &self.blocks {
                if b != g.structure().block_dims() {
                    return Err(Error::Input(format!(
                        "blocks {b:?} disagree with the Cayley construction {:?}",
                        g.structure().block_dims()
                    )));
                }
            }
            if let Some(d) = &self.delta {
                let d = matrix_from_json(d, "delta")?;
                if d.shape() != g.delta().shape() || crate::linalg::max_abs(&(&d - g.delta())) > 1e-9 {
                    return Err(Error::Input("delta disagrees with the Cayley construction".into()));
                }
            }
            return Ok(g);
        }
        let (Some(blocks), Some(delta)) = (&self.blocks, &self.delta) else {
            return Err(Error::Input(
                "a quantum group needs \"blocks\" and \"delta\", or \"cayley\"".into(),
            ));
        };
        let delta = matrix_from_json(delta, "delta")?;
        QuantumGroup::new(
            self.name.clone().unwrap_or_else(|| "unnamed".into()),
            blocks.clone(),
            self.weights.clone(),
            delta,
        )
    }

    pub fn from_quantum_group(g: &QuantumGroup) -> Self {
        let cayley = match g.origin() {
            Origin::Generic => None,
            Origin::FunctionAlgebra(t) => Some(CayleyJson::from_group(t, Some("function_algebra"))),
            Origin::GroupAlgebra { table, .. } => Some(CayleyJson::from_group(table, Some("group_algebra"))),
        };
        QuantumGroupJson {
            name: Some(g.name().to_string()),
            blocks: Some(g.structure().block_dims().to_vec()),
            weights: Some(g.structure().block_weights().to_vec()),
            delta: Some(matrix_to_json(g.delta())),
            cayley,
        }
    }
}

/// `{"target_blocks", "target_weights", "images"}`, one image per basis element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomJson {
    pub target_blocks: Vec<usize>,
    #[serde(default)]
    pub target_weights: Option<Vec<f64>>,
    pub images: Vec<Vec<MatrixJson>>,
}

impl HomJson {
    pub fn build(&self, source: Arc<BlockStructure>) -> Result<Hom> {
        let target = AlgebraJson {
            blocks: self.target_blocks.clone(),
            weights: self.target_weights.clone(),
            matrices: None,
        }
        .structure()?;
        let images = self
            .images
            .iter()
            .map(|mats| {
                AlgebraJson {
                    blocks: self.target_blocks.clone(),
                    weights: None,
                    matrices: Some(mats.clone()),
                }
                .element_on(target.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Hom::new(source, target, images)
    }
}

/// A linear map in the matrix-unit basis: `{"blocks", "weights", "matrix"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    pub matrix: MatrixJson,
}

impl MapJson {
    pub fn build(&self) -> Result<MapOnAlgebra> {
        let s = AlgebraJson {
            blocks: self.blocks.clone(),
            weights: self.weights.clone(),
            matrices: None,
        }
        .structure()?;
        MapOnAlgebra::new(s, matrix_from_json(&self.matrix, "matrix")?)
    }
}

/// Values `φ(γ)` of a function on a group, indexed like the Cayley table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFunctionJson {
    pub values: Vec<ComplexJson>,
}

impl GroupFunctionJson {
    pub fn values(&self) -> Vec<C64> {
        self.values.iter().map(|&z| z.into()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierJson {
    pub alpha_dims: Vec<usize>,
    pub matrices: Vec<MatrixJson>,
}

impl From<&FourierCoefficients> for FourierJson {
    fn from(a: &FourierCoefficients) -> Self {
        FourierJson {
            alpha_dims: a.alpha_dims.clone(),
            matrices: a.matrices.iter().map(matrix_to_json).collect(),
        }
    }
}

impl FourierJson {
    pub fn coefficients(&self) -> Result<FourierCoefficients> {
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, &format!("coefficient {k}")))
            .collect::<Result<Vec<_>>>()?;
        let out = FourierCoefficients::new(mats)?;
        if out.alpha_dims != self.alpha_dims {
            return Err(Error::Input("alpha_dims do not match the matrices".into()));
        }
        Ok(out)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_quantum_group(path: impl AsRef<Path>) -> Result<QuantumGroup> {
    read_json::<QuantumGroupJson>(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn complex_entries_accept_numbers_and_pairs() {
        let m: MatrixJson = serde_json::from_str("[[1, [0, 2]], [-0.5, [3, -1]]]").unwrap();
        let m = matrix_from_json(&m, "m").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 2.0));
        assert_eq!(m[(1, 0)], c(-0.5));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let m: MatrixJson = serde_json::from_str("[[1, 2], [3]]").unwrap();
        assert!(matches!(matrix_from_json(&m, "m"), Err(Error::Input(_))));
    }

    #[test]
    fn quantum_group_round_trip() {
        let g = build_group_algebra(&GroupTable::symmetric(3)).unwrap();
        let mut json = QuantumGroupJson::from_quantum_group(&g);
        json.cayley = None;
        let text = serde_json::to_string(&json).unwrap();
        let back: QuantumGroupJson = serde_json::from_str(&text).unwrap();
        let h = back.build().unwrap();
        assert_eq!(h.structure().block_dims(), g.structure().block_dims());
        assert!(crate::linalg::max_abs(&(h.delta() - g.delta())) < 1e-14);
    }

    #[test]
    fn cayley_only_file() {
        let json: QuantumGroupJson =
            serde_json::from_str(r#"{"name": "C(Z3)", "cayley": {"table": [[0,1,2],[1,2,0],[2,0,1]]}}"#).unwrap();
        let g = json.build().unwrap();
        assert_eq!(g.dim(), 3);
        assert!(g.group_table().is_some());
    }

    #[test]
    fn state_density_is_checked() {
        let s = Arc::new(BlockStructure::commutative(3).unwrap());
        let ok: AlgebraJson = serde_json::from_str(r#"{"blocks":[1,1,1],"matrices":[[[1.5]],[[0]],[[1.5]]]}"#).unwrap();
        let phi = state_from_json(&ok, s.clone()).unwrap();
        assert!((phi.basis_values()[0] - c(0.5)).norm() < 1e-12);
        let bad: AlgebraJson = serde_json::from_str(r#"{"blocks":[1,1,1],"matrices":[[[3]],[[-1]],[[1]]]}"#).unwrap();
        assert!(state_from_json(&bad, s).is_err());
    }
}
