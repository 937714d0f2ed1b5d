//! File formats: algebra and module spec files, fragment JSON, resolution
//! reports, and DOT export.
//!
//! All JSON is emitted canonically: object keys in sorted order, exact
//! coefficients as strings (`"3/2"`, never floats), a versioned `schema`
//! field, and a trailing newline.  Identical inputs produce identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dga::{DGAlgebra, DgaData};
use crate::error::{Error, Result};
use crate::module::{DGModule, Side};
use crate::quiver::{ARQuiverFragment, FragmentArrow, FragmentVertex};
use crate::resolution::ResolutionOutcome;
use crate::scalar::{FieldKind, Scalar};

pub const DGA_SCHEMA: &str = "dgquiver/dga/v1";
pub const MODULE_SCHEMA: &str = "dgquiver/module/v1";
pub const FRAGMENT_SCHEMA: &str = "dgquiver/fragment/v1";
pub const RESOLUTION_SCHEMA: &str = "dgquiver/resolution/v1";

/// Canonical JSON emission: via `serde_json::Value`, whose object maps are
/// sorted, pretty-printed with a trailing newline.
pub fn emit_canonical<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(format!("{s}\n"))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

// ---------------------------------------------------------------------
// algebra spec files
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub basis: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

/// The on-disk description of a DG algebra.  Unspecified products and
/// differentials default to zero; the unit row and column may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgaSpecFile {
    pub schema: String,
    pub field: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    pub mult: Vec<MultEntry>,
    pub diff: Vec<DiffEntry>,
}

impl DgaSpecFile {
    pub fn to_data(&self) -> Result<DgaData> {
        if self.schema != DGA_SCHEMA {
            return Err(Error::Parse(format!(
                "unknown schema {:?}, expected {DGA_SCHEMA:?}",
                self.schema
            )));
        }
        let field = FieldKind::parse_tag(&self.field)?;
        let names: Vec<String> = self.basis.iter().map(|b| b.name.clone()).collect();
        let index = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))
        };
        let n = names.len();
        let unit = index(&self.unit)?;
        let mut mult = vec![vec![Vec::new(); n]; n];
        // Unit rows/columns default to the identity.
        for (j, row) in mult.iter_mut().enumerate() {
            for (i, cell) in row.iter_mut().enumerate() {
                if j == unit {
                    *cell = vec![(i, Scalar::one(field))];
                } else if i == unit {
                    *cell = vec![(j, Scalar::one(field))];
                }
            }
        }
        for e in &self.mult {
            let (i, j) = (index(&e.left)?, index(&e.right)?);
            let mut c = Vec::new();
            for t in &e.result {
                c.push((index(&t.basis)?, Scalar::parse(field, &t.coeff)?));
            }
            mult[i][j] = c;
        }
        let mut diff = vec![Vec::new(); n];
        for e in &self.diff {
            let (i, k) = (index(&e.from)?, index(&e.to)?);
            diff[i].push((k, Scalar::parse(field, &e.coeff)?));
        }
        Ok(DgaData {
            field,
            basis: self
                .basis
                .iter()
                .map(|b| (b.name.clone(), b.degree))
                .collect(),
            unit,
            mult,
            diff,
        })
    }

    pub fn from_algebra(alg: &DGAlgebra) -> Self {
        let n = alg.dim();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == alg.unit() || j == alg.unit() {
                    continue;
                }
                let cell = alg.mult(i, j);
                if !cell.is_empty() {
                    mult.push(MultEntry {
                        left: alg.name(i).into(),
                        right: alg.name(j).into(),
                        result: cell
                            .iter()
                            .map(|(k, c)| CoeffEntry {
                                basis: alg.name(*k).into(),
                                coeff: c.to_coeff_string(),
                            })
                            .collect(),
                    });
                }
            }
        }
        let mut diff = Vec::new();
        for i in 0..n {
            for (k, c) in alg.diff(i) {
                diff.push(DiffEntry {
                    from: alg.name(i).into(),
                    to: alg.name(*k).into(),
                    coeff: c.to_coeff_string(),
                });
            }
        }
        DgaSpecFile {
            schema: DGA_SCHEMA.into(),
            field: alg.field().tag(),
            basis: (0..n)
                .map(|i| BasisEntry {
                    name: alg.name(i).into(),
                    degree: alg.degree(i),
                })
                .collect(),
            unit: alg.name(alg.unit()).into(),
            mult,
            diff,
        }
    }

    pub fn validate(&self) -> Result<Arc<DGAlgebra>> {
        Ok(Arc::new(DGAlgebra::validate(self.to_data()?)?))
    }
}

// ---------------------------------------------------------------------
// module spec files
// ---------------------------------------------------------------------

/// The on-disk description of a DG module.  `algebra` is a free-form
/// reference (typically the algebra file name); the loading command supplies
/// the algebra itself.  Action entries read `left·right` for left modules
/// and `left·right` with the module element on the left for right modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpecFile {
    pub schema: String,
    pub algebra: String,
    pub side: Side,
    pub basis: Vec<BasisEntry>,
    pub action: Vec<MultEntry>,
    pub diff: Vec<DiffEntry>,
}

impl ModuleSpecFile {
    pub fn to_module(&self, algebra: &Arc<DGAlgebra>) -> Result<DGModule> {
        if self.schema != MODULE_SCHEMA {
            return Err(Error::Parse(format!(
                "unknown schema {:?}, expected {MODULE_SCHEMA:?}",
                self.schema
            )));
        }
        let field = algebra.field();
        let names: Vec<String> = self.basis.iter().map(|b| b.name.clone()).collect();
        let midx = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown module basis element {name:?}")))
        };
        let aidx = |name: &str| -> Result<usize> {
            (0..algebra.dim())
                .find(|&i| algebra.name(i) == name)
                .ok_or_else(|| Error::Parse(format!("unknown algebra basis element {name:?}")))
        };
        let n = names.len();
        let mut action = vec![vec![Vec::new(); n]; algebra.dim()];
        // Unit acts as the identity by default.
        for (m, cell) in action[algebra.unit()].iter_mut().enumerate() {
            *cell = vec![(m, Scalar::one(field))];
        }
        for e in &self.action {
            let (r, m) = match self.side {
                Side::Left => (aidx(&e.left)?, midx(&e.right)?),
                Side::Right => (aidx(&e.right)?, midx(&e.left)?),
            };
            let mut c = Vec::new();
            for t in &e.result {
                c.push((midx(&t.basis)?, Scalar::parse(field, &t.coeff)?));
            }
            action[r][m] = c;
        }
        let mut diff = vec![Vec::new(); n];
        for e in &self.diff {
            let (i, k) = (midx(&e.from)?, midx(&e.to)?);
            diff[i].push((k, Scalar::parse(field, &e.coeff)?));
        }
        DGModule::new(
            Arc::clone(algebra),
            self.side,
            self.basis
                .iter()
                .map(|b| (b.name.clone(), b.degree))
                .collect(),
            action,
            diff,
        )
    }

    pub fn from_module(m: &DGModule, algebra_ref: &str) -> Self {
        let alg = m.algebra();
        let mut action = Vec::new();
        for r in 0..alg.dim() {
            if r == alg.unit() {
                continue;
            }
            for j in 0..m.dim() {
                let cell = &m.action_table()[r][j];
                if cell.is_empty() {
                    continue;
                }
                let result = cell
                    .iter()
                    .map(|(k, c)| CoeffEntry {
                        basis: m.name(*k).into(),
                        coeff: c.to_coeff_string(),
                    })
                    .collect();
                let (left, right) = match m.side() {
                    Side::Left => (alg.name(r).to_string(), m.name(j).to_string()),
                    Side::Right => (m.name(j).to_string(), alg.name(r).to_string()),
                };
                action.push(MultEntry {
                    left,
                    right,
                    result,
                });
            }
        }
        let mut diff = Vec::new();
        for j in 0..m.dim() {
            for (k, c) in &m.diff_table()[j] {
                diff.push(DiffEntry {
                    from: m.name(j).into(),
                    to: m.name(*k).into(),
                    coeff: c.to_coeff_string(),
                });
            }
        }
        ModuleSpecFile {
            schema: MODULE_SCHEMA.into(),
            algebra: algebra_ref.into(),
            side: m.side(),
            basis: (0..m.dim())
                .map(|i| BasisEntry {
                    name: m.name(i).into(),
                    degree: m.degree(i),
                })
                .collect(),
            action,
            diff,
        }
    }
}

// ---------------------------------------------------------------------
// fragment JSON
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certifications {
    #[serde(rename = "noLoops")]
    pub no_loops: bool,
    #[serde(rename = "labelSymmetry")]
    pub label_symmetry: bool,
    #[serde(rename = "meshBeta")]
    pub mesh_beta: bool,
    #[serde(rename = "zaInfinityConsistent")]
    pub za_infinity_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentArrowJson {
    pub src: String,
    pub dst: String,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauEntry {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentJson {
    pub schema: String,
    pub vertices: Vec<FragmentVertex>,
    pub arrows: Vec<FragmentArrowJson>,
    pub tau: Vec<TauEntry>,
    pub interior: Vec<bool>,
    pub radius: usize,
    pub certifications: Certifications,
}

impl FragmentJson {
    pub fn from_fragment(f: &ARQuiverFragment, certs: Certifications) -> Self {
        FragmentJson {
            schema: FRAGMENT_SCHEMA.into(),
            vertices: f.vertices.clone(),
            arrows: f
                .arrows
                .iter()
                .map(|a| FragmentArrowJson {
                    src: f.vertices[a.src].id.clone(),
                    dst: f.vertices[a.dst].id.clone(),
                    a: a.a,
                    b: a.b,
                })
                .collect(),
            tau: f
                .tau
                .iter()
                .map(|&(from, to)| TauEntry {
                    from: f.vertices[from].id.clone(),
                    to: f.vertices[to].id.clone(),
                })
                .collect(),
            interior: f.interior.clone(),
            radius: f.radius,
            certifications: certs,
        }
    }

    pub fn to_fragment(&self) -> Result<ARQuiverFragment> {
        if self.schema != FRAGMENT_SCHEMA {
            return Err(Error::Parse(format!(
                "unknown schema {:?}, expected {FRAGMENT_SCHEMA:?}",
                self.schema
            )));
        }
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let look = |id: &str| -> Result<usize> {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown vertex id {id:?}")))
        };
        let mut arrows = Vec::new();
        for a in &self.arrows {
            arrows.push(FragmentArrow {
                src: look(&a.src)?,
                dst: look(&a.dst)?,
                a: a.a,
                b: a.b,
            });
        }
        let mut tau = Vec::new();
        for t in &self.tau {
            tau.push((look(&t.from)?, look(&t.to)?));
        }
        if self.interior.len() != self.vertices.len() {
            return Err(Error::Parse(
                "interior flags do not match vertex count".into(),
            ));
        }
        Ok(ARQuiverFragment {
            vertices: self.vertices.clone(),
            arrows,
            tau,
            radius: self.radius,
            interior: self.interior.clone(),
        })
    }
}

// ---------------------------------------------------------------------
// resolution JSON
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub degree: i64,
    /// Attaching entries: target generator index, algebra basis element,
    /// exact coefficient.
    pub attaching: Vec<AttachEntry>,
    pub image: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachEntry {
    pub gen: usize,
    pub basis: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionJson {
    pub schema: String,
    pub complete: bool,
    pub window: i64,
    pub beta: Option<usize>,
    pub counts: BTreeMap<String, usize>,
    pub generators: Vec<GeneratorJson>,
}

pub fn resolution_report(
    outcome: &ResolutionOutcome,
    window: i64,
    target: &DGModule,
) -> ResolutionJson {
    match outcome {
        ResolutionOutcome::Complete(res) => {
            let alg = target.algebra();
            let rdim = alg.dim();
            let generators = res
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    degree: g.degree,
                    attaching: g
                        .attaching
                        .iter()
                        .map(|(t, c)| AttachEntry {
                            gen: t / rdim,
                            basis: alg.name(t % rdim).into(),
                            coeff: c.to_coeff_string(),
                        })
                        .collect(),
                    image: g
                        .image
                        .iter()
                        .map(|(m, c)| CoeffEntry {
                            basis: target.name(*m).into(),
                            coeff: c.to_coeff_string(),
                        })
                        .collect(),
                })
                .collect();
            ResolutionJson {
                schema: RESOLUTION_SCHEMA.into(),
                complete: true,
                window,
                beta: Some(res.beta()),
                counts: res
                    .generator_census()
                    .into_iter()
                    .map(|(d, c)| (d.to_string(), c))
                    .collect(),
                generators,
            }
        }
        ResolutionOutcome::NotCompleted { window, counts } => ResolutionJson {
            schema: RESOLUTION_SCHEMA.into(),
            complete: false,
            window: *window,
            beta: None,
            counts: counts.iter().map(|(d, c)| (d.to_string(), *c)).collect(),
            generators: Vec::new(),
        },
    }
}

// ---------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------

/// Render a fragment for graph viewers: vertices labelled with β, arrows
/// with `(a, b)`, the translation as dashed back-edges.
pub fn fragment_to_dot(f: &ARQuiverFragment) -> String {
    let mut out = String::from("digraph ar_quiver {\n  rankdir=LR;\n");
    for (i, v) in f.vertices.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{}\\nβ={}\"];\n", v.id, v.beta));
    }
    for a in &f.arrows {
        out.push_str(&format!(
            "  n{} -> n{} [label=\"({},{})\"];\n",
            a.src, a.dst, a.a, a.b
        ));
    }
    for &(from, to) in &f.tau {
        out.push_str(&format!(
            "  n{from} -> n{to} [style=dashed, label=\"τ\"];\n"
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldKind;

    fn sphere_file(d: i64) -> DgaSpecFile {
        let r = DGAlgebra::sphere(d, FieldKind::Rational).unwrap();
        DgaSpecFile::from_algebra(&r)
    }

    #[test]
    fn algebra_file_round_trip() {
        let file = sphere_file(2);
        let text = emit_canonical(&file).unwrap();
        let parsed: DgaSpecFile = parse_json(&text).unwrap();
        assert_eq!(parsed, file);
        let alg = parsed.validate().unwrap();
        assert_eq!(alg.dim(), 2);
        // Determinism: identical bytes on re-emission.
        assert_eq!(emit_canonical(&parsed).unwrap(), text);
    }

    #[test]
    fn module_file_round_trip() {
        let r = DGAlgebra::sphere(2, FieldKind::Rational).unwrap();
        let m = DGModule::regular(&r, Side::Left).suspend(1);
        let file = ModuleSpecFile::from_module(&m, "sphere2.json");
        let text = emit_canonical(&file).unwrap();
        let parsed: ModuleSpecFile = parse_json(&text).unwrap();
        assert_eq!(parsed, file);
        let back = parsed.to_module(&r).unwrap();
        assert_eq!(back.degrees(), m.degrees());
        assert_eq!(back.action_table(), m.action_table());
    }

    #[test]
    fn rational_coefficients_survive() {
        let r = DGAlgebra::sphere(2, FieldKind::Rational).unwrap();
        let k = DGModule::residue(&r, Side::Left);
        let mut file = ModuleSpecFile::from_module(&k, "sphere2.json");
        file.diff = vec![];
        // Feed a fractional coefficient through the parser.
        file.action = vec![MultEntry {
            left: "x".into(),
            right: "k".into(),
            result: vec![],
        }];
        let text = emit_canonical(&file).unwrap();
        assert!(text.contains("\"schema\""));
        let parsed: ModuleSpecFile = parse_json(&text).unwrap();
        parsed.to_module(&r).unwrap().validate().unwrap();
        assert_eq!(
            Scalar::parse(FieldKind::Rational, "3/2")
                .unwrap()
                .to_coeff_string(),
            "3/2"
        );
    }

    #[test]
    fn bad_schema_rejected() {
        let mut file = sphere_file(2);
        file.schema = "nope".into();
        assert!(file.to_data().is_err());
    }
}
