//! On-disk description of a dynamical system: a self-describing JSON file
//! holding the algebra, the group table, the action, named functions, and
//! optional exhaustion chains and tolerance.
//!
//! Wire format conventions: complex scalars are `[re, im]` pairs, matrices
//! are row-major arrays of rows, and every map is ordered, so serialised
//! files are stable and diffable. Scalars on disk are always `f64`;
//! conversion to the working precision happens on load.

use crate::algebra::{AlgebraDescriptor, AlgebraElement, Tolerance};
use crate::definiteness::GroupFunction;
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::group_action::{Action, BlockAutomorphism};
use crate::haagerup::ExhaustionChain;
use crate::linalg::CMatrix;
use crate::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Version stamp written into every file; the loader rejects others.
pub const SCHEMA_VERSION: u32 = 1;

/// Row-major complex matrix on the wire: rows of `[re, im]` pairs.
pub type WireMatrix = Vec<Vec<[f64; 2]>>;

/// One algebra element on the wire: one matrix per summand.
pub type WireElement = Vec<WireMatrix>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireAlgebra {
    pub block_dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireGroup {
    pub cayley: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireAutomorphism {
    pub block_perm: Vec<usize>,
    pub unitaries: Vec<WireMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireAction {
    pub automorphisms: Vec<WireAutomorphism>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireTolerance {
    pub eps: f64,
    pub relative: bool,
}

/// The serialised system description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub schema_version: u32,
    pub algebra: WireAlgebra,
    pub group: WireGroup,
    pub action: WireAction,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<WireElement>>,
    #[serde(default)]
    pub chains: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub tol: Option<WireTolerance>,
}

/// A fully validated in-memory system at working precision `T`.
#[derive(Debug)]
pub struct LoadedSystem<T> {
    pub action: Action<T>,
    pub functions: BTreeMap<String, GroupFunction<T>>,
    pub chains: BTreeMap<String, ExhaustionChain>,
    pub tol: Tolerance<T>,
}

impl<T: Real> LoadedSystem<T> {
    /// Looks up a named function, listing the available names on failure.
    pub fn function(&self, name: &str) -> Result<&GroupFunction<T>, Error> {
        self.functions.get(name).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown function {name:?}; file defines: {}",
                self.functions
                    .keys()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }

    /// Looks up a named chain, listing the available names on failure.
    pub fn chain(&self, name: &str) -> Result<&ExhaustionChain, Error> {
        self.chains.get(name).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown chain {name:?}; file defines: {}",
                self.chains
                    .keys()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }
}

/// Serialises one dense matrix to the wire layout.
pub fn matrix_to_wire<T: Real>(m: &CMatrix<T>) -> WireMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m[(i, j)];
                    [
                        z.re.to_f64().expect("finite scalar"),
                        z.im.to_f64().expect("finite scalar"),
                    ]
                })
                .collect()
        })
        .collect()
}

fn matrix_from_wire<T: Real>(w: &WireMatrix, rows: usize, cols: usize, what: &str) -> Result<CMatrix<T>, Error> {
    if w.len() != rows || w.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput(format!(
            "{what}: expected a {rows}x{cols} matrix"
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex::new(T::from_f64_lit(w[i][j][0]), T::from_f64_lit(w[i][j][1]))
    }))
}

/// Serialises one algebra element to the wire layout.
pub fn element_to_wire<T: Real>(x: &AlgebraElement<T>) -> WireElement {
    x.blocks().iter().map(matrix_to_wire).collect()
}

fn element_from_wire<T: Real>(
    w: &WireElement,
    d: &AlgebraDescriptor,
    what: &str,
) -> Result<AlgebraElement<T>, Error> {
    let dims = d.block_dims();
    if w.len() != dims.len() {
        return Err(Error::InvalidInput(format!(
            "{what}: expected {} summands, got {}",
            dims.len(),
            w.len()
        )));
    }
    let mut out = AlgebraElement::zero(d);
    for (k, (mw, &dk)) in w.iter().zip(dims).enumerate() {
        let m = matrix_from_wire(mw, dk, dk, &format!("{what}, summand {k}"))?;
        *out.block_mut(k) = m;
    }
    Ok(out)
}

impl SystemFile {
    /// Serialises an in-memory system.
    pub fn from_parts<T: Real>(
        action: &Action<T>,
        functions: &BTreeMap<String, GroupFunction<T>>,
        chains: &BTreeMap<String, ExhaustionChain>,
        tol: Option<&Tolerance<T>>,
    ) -> Self {
        let group = action.group();
        let cayley = group
            .elements()
            .map(|g| group.elements().map(|h| group.mul(g, h)).collect())
            .collect();
        let automorphisms = group
            .elements()
            .map(|g| {
                let a = action.automorphism(g);
                WireAutomorphism {
                    block_perm: a.block_perm.clone(),
                    unitaries: a.unitaries.iter().map(matrix_to_wire).collect(),
                }
            })
            .collect();
        let functions = functions
            .iter()
            .map(|(name, f)| {
                (
                    name.clone(),
                    f.values().iter().map(element_to_wire).collect(),
                )
            })
            .collect();
        let chains = chains
            .iter()
            .map(|(name, c)| {
                (
                    name.clone(),
                    (0..c.len()).map(|n| c.subset(n).to_vec()).collect(),
                )
            })
            .collect();
        SystemFile {
            schema_version: SCHEMA_VERSION,
            algebra: WireAlgebra {
                block_dims: action.descriptor().block_dims().to_vec(),
            },
            group: WireGroup { cayley },
            action: WireAction { automorphisms },
            functions,
            chains,
            tol: tol.map(|t| WireTolerance {
                eps: t.eps.to_f64().expect("finite tolerance"),
                relative: t.relative,
            }),
        }
    }

    /// Parses a file from JSON text; reports the location on syntax errors.
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| {
            Error::InvalidInput(format!(
                "parse error at line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Reads and parses a file from disk.
    pub fn read(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Pretty JSON with a trailing newline; key order is fixed, so output
    /// is stable for fixed content.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serialises");
        s.push('\n');
        s
    }

    /// Writes the file to disk.
    pub fn write(&self, path: &std::path::Path) -> Result<(), Error> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
    }

    /// Validates everything and converts to working precision.
    ///
    /// Group axioms are checked by the table constructor; the action is
    /// checked structurally and then numerically (unitarity and the
    /// homomorphism property), and the first failing requirement is named
    /// in the error together with its residual.
    pub fn load<T: Real>(&self) -> Result<LoadedSystem<T>, Error> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let descriptor = AlgebraDescriptor::new(self.algebra.block_dims.clone())?;
        let group = FiniteGroup::from_table(self.group.cayley.clone())?;
        if self.action.automorphisms.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "need {} automorphisms, got {}",
                group.order(),
                self.action.automorphisms.len()
            )));
        }
        let dims = descriptor.block_dims().to_vec();
        let autos = self
            .action
            .automorphisms
            .iter()
            .enumerate()
            .map(|(g, wa)| {
                let unitaries = wa
                    .unitaries
                    .iter()
                    .enumerate()
                    .map(|(k, wm)| {
                        let dk = *dims.get(k).unwrap_or(&0);
                        matrix_from_wire(wm, dk, dk, &format!("automorphism {g}, unitary {k}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(BlockAutomorphism {
                    block_perm: wa.block_perm.clone(),
                    unitaries,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let tol = match &self.tol {
            Some(w) => Tolerance {
                eps: T::from_f64_lit(w.eps),
                relative: w.relative,
            },
            None => Tolerance::default(),
        };
        let action = Action::new(group.clone(), descriptor.clone(), autos)?;
        let report = action.validate(&tol);
        if let Some(line) = report.lines.iter().find(|l| !l.passed) {
            return Err(Error::InvalidAction(format!(
                "{} failed (residual {:e})",
                line.name,
                line.residual.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let functions = self
            .functions
            .iter()
            .map(|(name, wf)| {
                if wf.len() != group.order() {
                    return Err(Error::InvalidInput(format!(
                        "function {name:?}: expected {} values, got {}",
                        group.order(),
                        wf.len()
                    )));
                }
                let values = wf
                    .iter()
                    .enumerate()
                    .map(|(g, we)| {
                        element_from_wire(we, &descriptor, &format!("function {name:?}, element {g}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((
                    name.clone(),
                    GroupFunction::new(group.clone(), descriptor.clone(), values)?,
                ))
            })
            .collect::<Result<BTreeMap<_, _>, Error>>()?;
        let chains = self
            .chains
            .iter()
            .map(|(name, subsets)| {
                ExhaustionChain::new(group.order(), subsets.clone())
                    .map(|c| (name.clone(), c))
                    .map_err(|e| Error::InvalidInput(format!("chain {name:?}: {e}")))
            })
            .collect::<Result<BTreeMap<_, _>, Error>>()?;
        Ok(LoadedSystem {
            action,
            functions,
            chains,
            tol,
        })
    }
}
