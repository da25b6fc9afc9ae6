//! JSON interchange.
//!
//! Matrices are nested arrays of scalar strings (integers are accepted on
//! input). A Hopf algebra reference is `"builtin:NAME"`, a path to a Hopf
//! JSON file (relative to the referring file), or an inline object. The
//! field comes from `SHC_FIELD` if set, else the document's `field`, else
//! `Q`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coend::{Diagram, DiagramMorphism, DualEntry, Summand};
use crate::comod::{Comodule, ZetaSource};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::hopf::{builtin, HopfAlgebra};
use crate::squared::{Bicoalgebra, HopfCoalgebra, QTHopfCoalgebra, RibbonHopfCoalgebra, SquaredCoalgebra, SquaredComodule};

pub const FIELD_ENV: &str = "SHC_FIELD";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Int(i64),
}

pub type RawMatrix = Vec<Vec<Cell>>;

pub fn matrix_to_raw(m: &Matrix) -> RawMatrix {
    m.to_rows().iter().map(|r| r.iter().map(|s| Cell::Text(s.to_text())).collect()).collect()
}

pub fn matrix_from_raw(field: Field, raw: &RawMatrix, what: &str) -> Result<Matrix> {
    let mut rows = Vec::with_capacity(raw.len());
    for r in raw {
        let mut row = Vec::with_capacity(r.len());
        for c in r {
            row.push(match c {
                Cell::Text(s) => field.parse_scalar(s),
                Cell::Int(n) => Ok(field.from_i64(*n)),
            }?);
        }
        rows.push(row);
    }
    Matrix::from_rows(field, rows).map_err(|e| Error::Invalid(format!("{what}: {e}")))
}

fn opt_matrix(field: Field, raw: &Option<RawMatrix>, what: &str) -> Result<Matrix> {
    let raw = raw.as_ref().ok_or_else(|| Error::Invalid(format!("missing `{what}`")))?;
    matrix_from_raw(field, raw, what)
}

/// Reads and parses a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Where relative Hopf paths resolve and which field applies.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub field: Field,
    pub dir: PathBuf,
}

impl Ctx {
    pub fn new(doc_field: Option<&str>, dir: &Path) -> Result<Ctx> {
        let field = match std::env::var(FIELD_ENV) {
            Ok(s) if !s.trim().is_empty() => Field::parse(&s)?,
            _ => match doc_field {
                Some(s) => Field::parse(s)?,
                None => Field::Rational,
            },
        };
        Ok(Ctx { field, dir: dir.to_path_buf() })
    }

    pub fn for_file(path: &Path, doc_field: Option<&str>) -> Result<Ctx> {
        Ctx::new(doc_field, path.parent().unwrap_or(Path::new(".")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub dim: usize,
    pub mult: RawMatrix,
    pub unit: RawMatrix,
    pub comult: RawMatrix,
    pub counit: RawMatrix,
    pub antipode: RawMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rform: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ribbon: Option<RawMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HopfRef {
    Name(String),
    Inline(Box<HopfDoc>),
}

pub fn hopf_from_doc(doc: &HopfDoc, field: Field) -> Result<Arc<HopfAlgebra>> {
    let m = |raw: &RawMatrix, what: &str| matrix_from_raw(field, raw, what);
    let rform = doc.rform.as_ref().map(|r| m(r, "rform")).transpose()?;
    let ribbon = doc.ribbon.as_ref().map(|r| m(r, "ribbon")).transpose()?;
    Ok(Arc::new(HopfAlgebra::new(
        doc.name.clone().unwrap_or_else(|| "custom".into()),
        field,
        doc.dim,
        m(&doc.mult, "mult")?,
        m(&doc.unit, "unit")?,
        m(&doc.comult, "comult")?,
        m(&doc.counit, "counit")?,
        m(&doc.antipode, "antipode")?,
        rform,
        ribbon,
    )?))
}

pub fn hopf_to_doc(h: &HopfAlgebra) -> HopfDoc {
    HopfDoc {
        name: Some(h.name.clone()),
        field: Some(h.field.name()),
        dim: h.dim,
        mult: matrix_to_raw(&h.mult),
        unit: matrix_to_raw(&h.unit),
        comult: matrix_to_raw(&h.comult),
        counit: matrix_to_raw(&h.counit),
        antipode: matrix_to_raw(&h.antipode),
        rform: h.rform.as_ref().map(matrix_to_raw),
        ribbon: h.ribbon.as_ref().map(matrix_to_raw),
    }
}

/// `"builtin:NAME"` when the algebra is a builtin, inline otherwise.
pub fn hopf_ref(h: &HopfAlgebra) -> HopfRef {
    match builtin(&h.name, h.field) {
        Ok(b) if *b == *h => HopfRef::Name(format!("builtin:{}", h.name)),
        _ => HopfRef::Inline(Box::new(hopf_to_doc(h))),
    }
}

pub fn load_hopf(r: &HopfRef, ctx: &Ctx) -> Result<Arc<HopfAlgebra>> {
    match r {
        HopfRef::Name(s) => match s.strip_prefix("builtin:") {
            Some(name) => builtin(name, ctx.field),
            None => {
                let path = ctx.dir.join(s);
                let doc: HopfDoc = read_json(&path)?;
                hopf_from_doc(&doc, ctx.field)
            }
        },
        HopfRef::Inline(doc) => hopf_from_doc(doc, ctx.field),
    }
}

/// A Hopf file as a document: either a `HopfDoc` or a bare reference
/// string such as `"builtin:kZ2"`.
pub fn load_hopf_file(path: &Path) -> Result<Arc<HopfAlgebra>> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return builtin(name, Ctx::new(None, Path::new("."))?.field);
    }
    let v: serde_json::Value = read_json(path)?;
    let doc_field = v.get("field").and_then(|f| f.as_str());
    let ctx = Ctx::for_file(path, doc_field)?;
    let r: HopfRef = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    load_hopf(&r, &ctx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComoduleBody {
    #[serde(default = "one")]
    pub level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub coaction: RawMatrix,
}

fn one() -> usize {
    1
}

impl ComoduleBody {
    pub fn from_comodule(x: &Comodule) -> ComoduleBody {
        ComoduleBody { level: x.level, dim: Some(x.dim), coaction: matrix_to_raw(&x.coaction) }
    }

    pub fn to_comodule(&self, hopf: &Arc<HopfAlgebra>) -> Result<Comodule> {
        let m = matrix_from_raw(hopf.field, &self.coaction, "coaction")?;
        let x = Comodule::new(hopf.clone(), self.level, m)?;
        if let Some(d) = self.dim {
            if d != x.dim {
                return Err(Error::ShapeMismatch(format!("declared dim {d}, coaction has {} columns", x.dim)));
            }
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComoduleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub hopf: HopfRef,
    #[serde(flatten)]
    pub body: ComoduleBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub hopf: HopfRef,
    pub objects: BTreeMap<String, ComoduleBody>,
    pub src: String,
    pub dst: String,
    pub matrix: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaDoc {
    Rform,
    Grouplike(Vec<Cell>),
    LeftTransposeInverse(Box<ZetaDoc>),
}

pub fn zeta_from_doc(z: &ZetaDoc, field: Field) -> Result<ZetaSource> {
    Ok(match z {
        ZetaDoc::Rform => ZetaSource::RForm,
        ZetaDoc::Grouplike(v) => ZetaSource::Grouplike(matrix_from_raw(field, &vec![v.clone()], "zeta")?),
        ZetaDoc::LeftTransposeInverse(inner) => ZetaSource::LeftTransposeInverse(Box::new(zeta_from_doc(inner, field)?)),
    })
}

pub fn zeta_to_doc(z: &ZetaSource) -> ZetaDoc {
    match z {
        ZetaSource::RForm => ZetaDoc::Rform,
        ZetaSource::Grouplike(m) => ZetaDoc::Grouplike(matrix_to_raw(m).remove(0)),
        ZetaSource::LeftTransposeInverse(inner) => ZetaDoc::LeftTransposeInverse(Box::new(zeta_to_doc(inner))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoalgebraBody {
    pub comodule: ComoduleBody,
    pub delta: RawMatrix,
    pub eps: RawMatrix,
}

impl CoalgebraBody {
    pub fn from_coalgebra(c: &SquaredCoalgebra) -> CoalgebraBody {
        CoalgebraBody {
            comodule: ComoduleBody::from_comodule(&c.c),
            delta: matrix_to_raw(&c.delta),
            eps: matrix_to_raw(&c.eps),
        }
    }

    pub fn to_coalgebra(&self, hopf: &Arc<HopfAlgebra>) -> Result<SquaredCoalgebra> {
        let f = hopf.field;
        SquaredCoalgebra::new(
            self.comodule.to_comodule(hopf)?,
            matrix_from_raw(f, &self.delta, "delta")?,
            matrix_from_raw(f, &self.eps, "eps")?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpBody {
    pub delta: RawMatrix,
    pub eps: RawMatrix,
}

/// A squared coalgebra with whichever extensions are present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub hopf: HopfRef,
    pub comodule: ComoduleBody,
    pub delta: RawMatrix,
    pub eps: RawMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_r: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_l: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op_r: Option<OpBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op_l: Option<OpBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaDoc>,
    #[serde(default, rename = "R_plus", skip_serializing_if = "Option::is_none")]
    pub r_plus: Option<RawMatrix>,
    #[serde(default, rename = "R_minus", skip_serializing_if = "Option::is_none")]
    pub r_minus: Option<RawMatrix>,
    #[serde(default, rename = "Theta", skip_serializing_if = "Option::is_none")]
    pub theta: Option<RawMatrix>,
    /// Named maps `X ⊙ X^∨ -> C` on which antipode equations are also checked.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub generators: BTreeMap<String, RawMatrix>,
}

pub struct Loaded<T> {
    pub value: T,
    pub hopf: Arc<HopfAlgebra>,
    pub ctx: Ctx,
}

fn load_with_hopf<T: DeserializeOwned>(path: &Path) -> Result<(T, Ctx, serde_json::Value)> {
    let v: serde_json::Value = read_json(path)?;
    let ctx = Ctx::for_file(path, v.get("field").and_then(|f| f.as_str()))?;
    let t = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    Ok((t, ctx, v))
}

pub fn load_comodule(path: &Path) -> Result<Comodule> {
    let (doc, ctx, _): (ComoduleDoc, _, _) = load_with_hopf(path)?;
    doc.body.to_comodule(&load_hopf(&doc.hopf, &ctx)?)
}

/// Source, target and matrix of a morphism file.
pub fn load_morphism(path: &Path) -> Result<(Comodule, Comodule, Matrix)> {
    let (doc, ctx, _): (MorphismDoc, _, _) = load_with_hopf(path)?;
    let hopf = load_hopf(&doc.hopf, &ctx)?;
    let get = |n: &String| -> Result<Comodule> {
        doc.objects.get(n).ok_or_else(|| Error::UnknownObject(n.clone()))?.to_comodule(&hopf)
    };
    Ok((get(&doc.src)?, get(&doc.dst)?, matrix_from_raw(ctx.field, &doc.matrix, "matrix")?))
}

pub fn load_structure(path: &Path) -> Result<Loaded<StructureDoc>> {
    let (doc, ctx, _): (StructureDoc, _, _) = load_with_hopf(path)?;
    let hopf = load_hopf(&doc.hopf, &ctx)?;
    Ok(Loaded { value: doc, hopf, ctx })
}

impl StructureDoc {
    pub fn coalgebra(&self, hopf: &Arc<HopfAlgebra>) -> Result<SquaredCoalgebra> {
        let f = hopf.field;
        SquaredCoalgebra::new(
            self.comodule.to_comodule(hopf)?,
            matrix_from_raw(f, &self.delta, "delta")?,
            matrix_from_raw(f, &self.eps, "eps")?,
        )
    }

    pub fn bicoalgebra(&self, hopf: &Arc<HopfAlgebra>) -> Result<Bicoalgebra> {
        let f = hopf.field;
        Bicoalgebra::new(self.coalgebra(hopf)?, opt_matrix(f, &self.m, "m")?, opt_matrix(f, &self.eta, "eta")?)
    }

    pub fn hopf_coalgebra(&self, hopf: &Arc<HopfAlgebra>) -> Result<HopfCoalgebra> {
        let f = hopf.field;
        let bi = self.bicoalgebra(hopf)?;
        let flipped = bi.base.c.flip()?;
        let op = |o: &Option<OpBody>, what: &str| -> Result<SquaredCoalgebra> {
            let o = o.as_ref().ok_or_else(|| Error::Invalid(format!("missing `{what}`")))?;
            SquaredCoalgebra::new(flipped.clone(), matrix_from_raw(f, &o.delta, what)?, matrix_from_raw(f, &o.eps, what)?)
        };
        let zeta = match &self.zeta {
            Some(z) => zeta_from_doc(z, f)?,
            None if hopf.rform.is_some() => ZetaSource::RForm,
            None => return Err(Error::MissingZeta),
        };
        Ok(HopfCoalgebra {
            gamma_r: opt_matrix(f, &self.gamma_r, "gamma_r")?,
            gamma_l: opt_matrix(f, &self.gamma_l, "gamma_l")?,
            op_r: op(&self.op_r, "op_r")?,
            op_l: op(&self.op_l, "op_l")?,
            bi,
            zeta,
        })
    }

    pub fn quasitriangular(&self, hopf: &Arc<HopfAlgebra>) -> Result<QTHopfCoalgebra> {
        let f = hopf.field;
        Ok(QTHopfCoalgebra {
            hopf: self.hopf_coalgebra(hopf)?,
            r_plus: opt_matrix(f, &self.r_plus, "R_plus")?,
            r_minus: opt_matrix(f, &self.r_minus, "R_minus")?,
        })
    }

    pub fn ribbon(&self, hopf: &Arc<HopfAlgebra>) -> Result<RibbonHopfCoalgebra> {
        Ok(RibbonHopfCoalgebra { qt: self.quasitriangular(hopf)?, theta: opt_matrix(hopf.field, &self.theta, "Theta")? })
    }

    pub fn generator_list(&self, field: Field) -> Result<Vec<(String, Matrix)>> {
        self.generators.iter().map(|(n, m)| Ok((n.clone(), matrix_from_raw(field, m, n)?))).collect()
    }

    /// Document for a structure; extensions are filled from whichever
    /// argument is given.
    pub fn from_parts(
        c: &SquaredCoalgebra,
        bi: Option<&Bicoalgebra>,
        hc: Option<&HopfCoalgebra>,
        qt: Option<&QTHopfCoalgebra>,
        rb: Option<&RibbonHopfCoalgebra>,
    ) -> StructureDoc {
        let raw = |m: &Matrix| Some(matrix_to_raw(m));
        let op = |o: &SquaredCoalgebra| Some(OpBody { delta: matrix_to_raw(&o.delta), eps: matrix_to_raw(&o.eps) });
        StructureDoc {
            field: Some(c.field().name()),
            hopf: hopf_ref(c.hopf()),
            comodule: ComoduleBody::from_comodule(&c.c),
            delta: matrix_to_raw(&c.delta),
            eps: matrix_to_raw(&c.eps),
            m: bi.and_then(|b| raw(&b.m)),
            eta: bi.and_then(|b| raw(&b.eta)),
            gamma_r: hc.and_then(|h| raw(&h.gamma_r)),
            gamma_l: hc.and_then(|h| raw(&h.gamma_l)),
            op_r: hc.and_then(|h| op(&h.op_r)),
            op_l: hc.and_then(|h| op(&h.op_l)),
            zeta: hc.map(|h| zeta_to_doc(&h.zeta)),
            r_plus: qt.and_then(|q| raw(&q.r_plus)),
            r_minus: qt.and_then(|q| raw(&q.r_minus)),
            theta: rb.and_then(|r| raw(&r.theta)),
            generators: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquaredComoduleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub hopf: HopfRef,
    pub over: CoalgebraBody,
    pub x: ComoduleBody,
    pub delta: RawMatrix,
}

pub fn load_squared_comodule(path: &Path) -> Result<SquaredComodule> {
    let (doc, ctx, _): (SquaredComoduleDoc, _, _) = load_with_hopf(path)?;
    let hopf = load_hopf(&doc.hopf, &ctx)?;
    SquaredComodule::new(
        doc.over.to_coalgebra(&hopf)?,
        doc.x.to_comodule(&hopf)?,
        matrix_from_raw(ctx.field, &doc.delta, "delta")?,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectDoc {
    pub name: String,
    #[serde(flatten)]
    pub body: ComoduleBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub matrix: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummandDoc {
    pub object: String,
    pub incl: RawMatrix,
    pub proj: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub left: String,
    pub right: String,
    pub summands: Vec<SummandDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualDoc {
    pub object: String,
    pub dual: String,
    pub pairing: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistDoc {
    pub object: String,
    pub matrix: RawMatrix,
}

/// Tables the loader should complete by itself.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AutoDoc {
    #[serde(default)]
    pub full_homs: bool,
    #[serde(default)]
    pub tensor_table: bool,
    #[serde(default)]
    pub dual_table: bool,
}

impl AutoDoc {
    fn is_off(&self) -> bool {
        *self == AutoDoc::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub hopf: HopfRef,
    pub objects: Vec<ObjectDoc>,
    #[serde(default)]
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_object: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tensor_table: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual_table: Vec<DualDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twists: Vec<TwistDoc>,
    #[serde(default, skip_serializing_if = "AutoDoc::is_off")]
    pub auto: AutoDoc,
}

pub type Twists = BTreeMap<String, Matrix>;

impl DiagramDoc {
    pub fn from_diagram(d: &Diagram, twists: Option<&Twists>) -> DiagramDoc {
        DiagramDoc {
            field: Some(d.field().name()),
            hopf: hopf_ref(&d.hopf),
            objects: d
                .objects
                .iter()
                .map(|(n, x)| ObjectDoc { name: n.clone(), body: ComoduleBody::from_comodule(x) })
                .collect(),
            morphisms: d
                .morphisms
                .iter()
                .map(|m| MorphismEntry {
                    name: m.name.clone(),
                    src: m.src.clone(),
                    dst: m.dst.clone(),
                    matrix: matrix_to_raw(&m.matrix),
                })
                .collect(),
            unit_object: d.unit_object.clone(),
            tensor_table: d
                .tensor_table
                .iter()
                .map(|((l, r), parts)| TensorEntry {
                    left: l.clone(),
                    right: r.clone(),
                    summands: parts
                        .iter()
                        .map(|p| SummandDoc {
                            object: p.object.clone(),
                            incl: matrix_to_raw(&p.incl),
                            proj: matrix_to_raw(&p.proj),
                        })
                        .collect(),
                })
                .collect(),
            dual_table: d
                .dual_table
                .iter()
                .map(|(n, e)| DualDoc { object: n.clone(), dual: e.object.clone(), pairing: matrix_to_raw(&e.pairing) })
                .collect(),
            zeta: d.zeta_source.as_ref().map(zeta_to_doc),
            twists: twists
                .map(|t| t.iter().map(|(n, m)| TwistDoc { object: n.clone(), matrix: matrix_to_raw(m) }).collect())
                .unwrap_or_default(),
            auto: AutoDoc::default(),
        }
    }

    /// The diagram with its automatic tables completed, and the twists if
    /// any are listed.
    pub fn to_diagram(&self, ctx: &Ctx) -> Result<(Diagram, Option<Twists>)> {
        let hopf = load_hopf(&self.hopf, ctx)?;
        let f = hopf.field;
        let mut d = Diagram::new(&hopf);
        for o in &self.objects {
            if o.body.level != 1 {
                return Err(Error::ShapeMismatch(format!("diagram object `{}` must have level 1", o.name)));
            }
            d.add_object(&o.name, o.body.to_comodule(&hopf)?)?;
        }
        for m in &self.morphisms {
            d.object(&m.src)?;
            d.object(&m.dst)?;
            d.morphisms.push(DiagramMorphism {
                name: m.name.clone(),
                src: m.src.clone(),
                dst: m.dst.clone(),
                matrix: matrix_from_raw(f, &m.matrix, &m.name)?,
            });
        }
        d.unit_object = self.unit_object.clone();
        for t in &self.tensor_table {
            let parts = t
                .summands
                .iter()
                .map(|s| {
                    Ok(Summand {
                        object: s.object.clone(),
                        incl: matrix_from_raw(f, &s.incl, "incl")?,
                        proj: matrix_from_raw(f, &s.proj, "proj")?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            d.tensor_table.insert((t.left.clone(), t.right.clone()), parts);
        }
        for e in &self.dual_table {
            d.dual_table
                .insert(e.object.clone(), DualEntry { object: e.dual.clone(), pairing: matrix_from_raw(f, &e.pairing, "pairing")? });
        }
        d.zeta_source = self.zeta.as_ref().map(|z| zeta_from_doc(z, f)).transpose()?;
        if self.auto.full_homs {
            d.add_full_homs()?;
        }
        if self.auto.tensor_table {
            d.fill_tensor_table()?;
        }
        if self.auto.dual_table {
            d.fill_dual_table()?;
        }
        let twists = if self.twists.is_empty() {
            None
        } else {
            Some(
                self.twists
                    .iter()
                    .map(|t| Ok((t.object.clone(), matrix_from_raw(f, &t.matrix, &t.object)?)))
                    .collect::<Result<Twists>>()?,
            )
        };
        Ok((d, twists))
    }
}

pub fn load_diagram(path: &Path) -> Result<(Diagram, Option<Twists>)> {
    let (doc, ctx, _): (DiagramDoc, _, _) = load_with_hopf(path)?;
    doc.to_diagram(&ctx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BicoalgebraBody {
    pub m: RawMatrix,
    pub eta: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfCoalgebraBody {
    pub gamma_r: RawMatrix,
    pub gamma_l: RawMatrix,
    pub op_r: OpBody,
    pub op_l: OpBody,
    pub zeta: ZetaDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QTBody {
    #[serde(rename = "R_plus")]
    pub r_plus: RawMatrix,
    #[serde(rename = "R_minus")]
    pub r_minus: RawMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RibbonBody {
    #[serde(rename = "Theta")]
    pub theta: RawMatrix,
}

/// Output of a coend run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoendDoc {
    pub field: String,
    pub diagram: DiagramDoc,
    pub coalgebra: CoalgebraBody,
    pub q: BTreeMap<String, RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicoalgebra: Option<BicoalgebraBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf_coalgebra: Option<HopfCoalgebraBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasitriangular: Option<QTBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ribbon: Option<RibbonBody>,
    pub report: crate::report::VerificationReport,
}

impl CoendDoc {
    pub fn from_coend(e: &crate::coend::CoendCoalgebra, twists: Option<&Twists>, report: crate::report::VerificationReport) -> CoendDoc {
        let op = |o: &SquaredCoalgebra| OpBody { delta: matrix_to_raw(&o.delta), eps: matrix_to_raw(&o.eps) };
        CoendDoc {
            field: e.c.field().name(),
            diagram: DiagramDoc::from_diagram(&e.diagram, twists),
            coalgebra: CoalgebraBody::from_coalgebra(&e.c),
            q: e.q.iter().map(|(n, m)| (n.clone(), matrix_to_raw(m))).collect(),
            bicoalgebra: e.bi.as_ref().map(|b| BicoalgebraBody { m: matrix_to_raw(&b.m), eta: matrix_to_raw(&b.eta) }),
            hopf_coalgebra: e.hopf.as_ref().map(|h| HopfCoalgebraBody {
                gamma_r: matrix_to_raw(&h.gamma_r),
                gamma_l: matrix_to_raw(&h.gamma_l),
                op_r: op(&h.op_r),
                op_l: op(&h.op_l),
                zeta: zeta_to_doc(&h.zeta),
            }),
            quasitriangular: e.qt.as_ref().map(|q| QTBody { r_plus: matrix_to_raw(&q.r_plus), r_minus: matrix_to_raw(&q.r_minus) }),
            ribbon: e.ribbon.as_ref().map(|r| RibbonBody { theta: matrix_to_raw(&r.theta) }),
            report,
        }
    }
}

pub fn load_coend_doc(path: &Path) -> Result<(CoendDoc, Ctx)> {
    let (doc, ctx, _): (CoendDoc, _, _) = load_with_hopf(path)?;
    let ctx = Ctx::new(Some(&doc.field), &ctx.dir)?;
    Ok((doc, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn diagram_round_trip() {
        let d = fixtures::kz2(Field::Rational).unwrap();
        let doc = DiagramDoc::from_diagram(&d, None);
        let text = to_json(&doc);
        let back: DiagramDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let ctx = Ctx { field: Field::Rational, dir: ".".into() };
        let (d2, _) = back.to_diagram(&ctx).unwrap();
        assert_eq!(d2.objects, d.objects);
        assert_eq!(d2.morphisms, d.morphisms);
        assert_eq!(d2.tensor_table, d.tensor_table);
        assert_eq!(d2.dual_table, d.dual_table);
        assert_eq!(to_json(&DiagramDoc::from_diagram(&d2, None)), text);
    }

    #[test]
    fn integers_and_fractions_parse() {
        let raw: RawMatrix = serde_json::from_str(r#"[[1, "-2/4"], ["0", 3]]"#).unwrap();
        let m = matrix_from_raw(Field::Rational, &raw, "m").unwrap();
        assert_eq!(m.get(0, 1).to_text(), "-1/2");
        assert_eq!(matrix_to_raw(&m)[0][1], Cell::Text("-1/2".into()));
        let ragged: RawMatrix = serde_json::from_str(r#"[[1, 2], [3]]"#).unwrap();
        assert!(matrix_from_raw(Field::Rational, &ragged, "m").is_err());
    }

    #[test]
    fn builtin_reference_is_compact() {
        let h = builtin("kZ2", Field::Rational).unwrap();
        assert_eq!(hopf_ref(&h), HopfRef::Name("builtin:kZ2".into()));
        let ctx = Ctx { field: Field::Rational, dir: ".".into() };
        let inline = HopfRef::Inline(Box::new(hopf_to_doc(&h)));
        assert_eq!(*load_hopf(&inline, &ctx).unwrap(), *h);
    }
}
