//! JSON documents. Every scalar is an exact string (`"num/den"`, `"n"`, or a residue)
//! and indices are 0-based. Serializing a parsed document reproduces it canonically.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, AlgebraMorphism, NoEvidence};
use crate::coalgebra::{Coalgebra, CoalgebraData, CoalgebraMorphism, SparseTensor};
use crate::comodule::{Comodule, HomSpace, Side};
use crate::cotensor::CotensorSpace;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::frobenius::{FrobeniusCertificate, FrobeniusSystem, Replay, Verdict};
use crate::linalg::Matrix;
use crate::report::Report;

pub fn ser_scalars<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn located(path: &str, e: Error) -> Error {
    Error::Parse(format!("at {path}: {e}"))
}

fn parse_scalar(field: FieldSpec, text: &str, path: &str) -> Result<Scalar> {
    field.parse(text).map_err(|e| located(path, e))
}

/// Reads a JSON document into `T`; failures carry line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Compact canonical form.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn to_json_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldDoc {
    Rationals,
    Prime { p: u64 },
}

impl FieldDoc {
    pub fn from_field(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => FieldDoc::Rationals,
            FieldSpec::Prime(p) => FieldDoc::Prime { p },
        }
    }

    pub fn to_field(self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Rationals => Ok(FieldSpec::Rationals),
            FieldDoc::Prime { p } => FieldSpec::prime(p).map_err(|e| located("field.p", e)),
        }
    }
}

/// Basis index, written as an integer; a decimal string is accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexDoc {
    Number(usize),
    Text(String),
}

impl IndexDoc {
    fn get(&self, path: &str) -> Result<usize> {
        match self {
            IndexDoc::Number(i) => Ok(*i),
            IndexDoc::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("at {path}: invalid index {s:?}"))),
        }
    }
}

pub type TensorEntry = (usize, usize, usize, String);

fn tensor_doc(t: &SparseTensor) -> Vec<TensorEntry> {
    t.iter().map(|((i, j, k), s)| (*i, *j, *k, s.to_string())).collect()
}

fn tensor_from_doc(field: FieldSpec, entries: &[TensorEntry], bounds: [usize; 3], name: &str) -> Result<SparseTensor> {
    let mut t = SparseTensor::new();
    for (pos, (i, j, k, s)) in entries.iter().enumerate() {
        let path = format!("{name}[{pos}]");
        for (slot, (idx, bound)) in [*i, *j, *k].into_iter().zip(bounds).enumerate() {
            if idx >= bound {
                return Err(Error::Parse(format!("at {path}[{slot}]: index {idx} out of range (< {bound})")));
            }
        }
        if t.get(*i, *j, *k).is_some() {
            return Err(Error::Parse(format!("at {path}: duplicate entry ({i}, {j}, {k})")));
        }
        t.set(*i, *j, *k, parse_scalar(field, s, &path)?);
    }
    Ok(t)
}

pub type MatrixDoc = Vec<Vec<String>>;

pub fn matrix_doc(m: &Matrix) -> MatrixDoc {
    (0..m.rows()).map(|i| m.row(i).iter().map(|s| s.to_string()).collect()).collect()
}

/// An empty row list is read as a `0 x cols` matrix.
pub fn matrix_from_doc(field: FieldSpec, doc: &MatrixDoc, shape: (usize, usize), name: &str) -> Result<Matrix> {
    if doc.len() != shape.0 {
        return Err(Error::Parse(format!("at {name}: expected {} rows, found {}", shape.0, doc.len())));
    }
    let mut data = Vec::with_capacity(shape.0 * shape.1);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(Error::Parse(format!(
                "at {name}[{i}]: expected {} columns, found {}",
                shape.1,
                row.len()
            )));
        }
        for (j, s) in row.iter().enumerate() {
            data.push(parse_scalar(field, s, &format!("{name}[{i}][{j}]"))?);
        }
    }
    Ok(Matrix::from_vec(field, shape.0, shape.1, data))
}

fn column_count(doc: &MatrixDoc, name: &str) -> Result<usize> {
    doc.first().map(Vec::len).ok_or_else(|| Error::Parse(format!("at {name}: matrix has no rows")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    pub delta: Vec<TensorEntry>,
    pub epsilon: Vec<(IndexDoc, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CoalgebraDoc {
    pub fn from_coalgebra(c: &Coalgebra) -> Self {
        let data = c.data();
        CoalgebraDoc {
            field: FieldDoc::from_field(data.field),
            dim: data.dim,
            delta: tensor_doc(&data.delta),
            epsilon: data
                .counit
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (IndexDoc::Number(i), s.to_string()))
                .collect(),
            labels: data.labels.clone(),
        }
    }

    /// Structure constants, without checking the axioms.
    pub fn data(&self) -> Result<CoalgebraData> {
        let field = self.field.to_field()?;
        let n = self.dim;
        let delta = tensor_from_doc(field, &self.delta, [n, n, n], "delta")?;
        let mut counit = vec![field.zero(); n];
        let mut seen = vec![false; n];
        for (pos, (i, s)) in self.epsilon.iter().enumerate() {
            let path = format!("epsilon[{pos}]");
            let i = i.get(&path)?;
            if i >= n {
                return Err(Error::Parse(format!("at {path}[0]: index {i} out of range (< {n})")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Parse(format!("at {path}: duplicate index {i}")));
            }
            counit[i] = parse_scalar(field, s, &path)?;
        }
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(Error::Parse(format!("at labels: expected {n} labels, found {}", labels.len())));
            }
        }
        Ok(CoalgebraData { field, dim: n, delta, counit, labels: self.labels.clone() })
    }

    pub fn build(&self) -> Result<Coalgebra> {
        Coalgebra::new(self.data()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: CoalgebraDoc,
    pub target: CoalgebraDoc,
    pub matrix: MatrixDoc,
}

impl MorphismDoc {
    pub fn from_morphism(f: &CoalgebraMorphism) -> Self {
        MorphismDoc {
            source: CoalgebraDoc::from_coalgebra(f.source()),
            target: CoalgebraDoc::from_coalgebra(f.target()),
            matrix: matrix_doc(f.matrix()),
        }
    }

    fn field(&self) -> Result<FieldSpec> {
        let field = self.source.field.to_field()?;
        if self.target.field.to_field()? != field {
            return Err(Error::Parse("at target.field: differs from source.field".into()));
        }
        Ok(field)
    }

    pub fn matrix(&self) -> Result<Matrix> {
        matrix_from_doc(self.field()?, &self.matrix, (self.target.dim, self.source.dim), "matrix")
    }

    pub fn build(&self) -> Result<CoalgebraMorphism> {
        let source = self.source.build().map_err(|e| located("source", e))?;
        let target = self.target.build().map_err(|e| located("target", e))?;
        CoalgebraMorphism::new(Arc::new(source), Arc::new(target), self.matrix()?)
    }

    /// Hex sha256 of the canonical compact serialization.
    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(to_json(self).as_bytes()))
    }
}

pub fn extension_sha256(lambda: &CoalgebraMorphism) -> String {
    MorphismDoc::from_morphism(lambda).sha256()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleDoc {
    pub side: Side,
    pub over: CoalgebraDoc,
    pub dim: usize,
    /// `[i, j, k, s]`: `ρ(m_i)` has coefficient `s` on `m_j ⊗ c_k` (right) or `c_k ⊗ m_j`
    /// (left).
    pub coaction: Vec<TensorEntry>,
}

impl ComoduleDoc {
    pub fn from_comodule(m: &Comodule) -> Self {
        ComoduleDoc {
            side: m.side(),
            over: CoalgebraDoc::from_coalgebra(m.over()),
            dim: m.dim(),
            coaction: tensor_doc(&m.coaction_tensor()),
        }
    }

    /// The coalgebra and the dense coaction, without checking the comodule axioms.
    pub fn parts(&self) -> Result<(Arc<Coalgebra>, Matrix)> {
        let over = Arc::new(self.over.build().map_err(|e| located("over", e))?);
        let t = tensor_from_doc(over.field(), &self.coaction, [self.dim, self.dim, over.dim()], "coaction")?;
        let coaction = crate::comodule::coaction_from_tensor(self.side, over.field(), over.dim(), self.dim, &t)?;
        Ok((over, coaction))
    }

    pub fn build(&self) -> Result<Comodule> {
        let (over, coaction) = self.parts()?;
        Comodule::new(self.side, over, self.dim, coaction)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    /// `[i, j, k, s]`: `e_i · e_j` has coefficient `s` on `e_k`.
    pub mult: Vec<TensorEntry>,
    pub unit: Vec<String>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &Algebra) -> Self {
        let data = a.data();
        AlgebraDoc {
            field: FieldDoc::from_field(data.field),
            dim: data.dim,
            mult: tensor_doc(&data.mult),
            unit: data.unit.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraMorphismDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub matrix: MatrixDoc,
}

impl AlgebraMorphismDoc {
    pub fn from_morphism(f: &AlgebraMorphism) -> Self {
        AlgebraMorphismDoc {
            source: AlgebraDoc::from_algebra(f.source()),
            target: AlgebraDoc::from_algebra(f.target()),
            matrix: matrix_doc(f.matrix()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpaceDoc {
    pub dim: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Each basis map as a `target x source` matrix.
    pub basis: Vec<MatrixDoc>,
}

impl HomSpaceDoc {
    pub fn from_hom_space(h: &HomSpace) -> Self {
        HomSpaceDoc {
            dim: h.dim(),
            source_dim: h.source_dim(),
            target_dim: h.target_dim(),
            basis: h.basis().iter().map(matrix_doc).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotensorDoc {
    pub dim: usize,
    pub ambient_dim: usize,
    /// Columns span the cotensor product inside `M ⊗ N`.
    pub basis: MatrixDoc,
}

impl CotensorDoc {
    pub fn from_space(s: &CotensorSpace) -> Self {
        CotensorDoc { dim: s.dim(), ambient_dim: s.ambient_dim(), basis: matrix_doc(s.basis()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub extension_sha256: String,
    pub field: FieldDoc,
    pub alpha: MatrixDoc,
    pub beta: MatrixDoc,
    pub cotensor_basis: MatrixDoc,
    pub provenance: serde_json::Value,
}

impl CertificateDoc {
    pub fn from_certificate(lambda: &CoalgebraMorphism, cert: &FrobeniusCertificate) -> Self {
        CertificateDoc {
            extension_sha256: extension_sha256(lambda),
            field: FieldDoc::from_field(lambda.field()),
            alpha: matrix_doc(&cert.alpha),
            beta: matrix_doc(&cert.beta),
            cotensor_basis: matrix_doc(&cert.cotensor_basis),
            provenance: cert.provenance.clone(),
        }
    }

    /// Reads the certificate against `lambda`; the embedded hash must match.
    pub fn certificate_for(&self, lambda: &CoalgebraMorphism) -> Result<FrobeniusCertificate> {
        let expected = extension_sha256(lambda);
        if self.extension_sha256 != expected {
            return Err(Error::Parse(format!(
                "at extension_sha256: certificate is for {}, extension hashes to {expected}",
                self.extension_sha256
            )));
        }
        let field = self.field.to_field()?;
        if field != lambda.field() {
            return Err(Error::FieldMismatch(format!("certificate over {field}, extension over {}", lambda.field())));
        }
        let (n, k) = (lambda.source().dim(), lambda.target().dim());
        let s = if self.cotensor_basis.len() == n * n && n > 0 {
            column_count(&self.cotensor_basis, "cotensor_basis")?
        } else {
            return Err(Error::Parse(format!(
                "at cotensor_basis: expected {} rows, found {}",
                n * n,
                self.cotensor_basis.len()
            )));
        };
        Ok(FrobeniusCertificate {
            alpha: matrix_from_doc(field, &self.alpha, (n, k), "alpha")?,
            beta: matrix_from_doc(field, &self.beta, (n, s), "beta")?,
            cotensor_basis: matrix_from_doc(field, &self.cotensor_basis, (n * n, s), "cotensor_basis")?,
            provenance: self.provenance.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum VerdictDoc {
    Yes { certificate: CertificateDoc },
    No { evidence: NoEvidence },
    Unknown { confidence: f64, trials: usize, seed: u64 },
}

impl VerdictDoc {
    pub fn from_verdict(lambda: &CoalgebraMorphism, v: &Verdict) -> Self {
        match v {
            Verdict::Yes(cert) => VerdictDoc::Yes { certificate: CertificateDoc::from_certificate(lambda, cert) },
            Verdict::No(evidence) => VerdictDoc::No { evidence: evidence.clone() },
            Verdict::Unknown { confidence, trials, seed } => {
                VerdictDoc::Unknown { confidence: *confidence, trials: *trials, seed: *seed }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDoc {
    pub valid: bool,
    pub violations: Vec<crate::report::Violation>,
}

impl ReportDoc {
    pub fn from_report(r: &Report) -> Self {
        ReportDoc { valid: r.is_pass(), violations: r.violations.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayDoc {
    pub valid: bool,
    #[serde(flatten)]
    pub replay: Replay,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrobeniusSystemDoc {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<String>>,
    /// `dim C x dim C²`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<MatrixDoc>,
}

impl FrobeniusSystemDoc {
    pub fn from_system(s: Option<&FrobeniusSystem>) -> Self {
        match s {
            Some(s) => FrobeniusSystemDoc {
                exists: true,
                e: Some(s.e.iter().map(|x| x.to_string()).collect()),
                pi: Some(matrix_doc(&s.pi)),
            },
            None => FrobeniusSystemDoc { exists: false, e: None, pi: None },
        }
    }
}

/// Which kind of object a document describes, judged by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    Coalgebra,
    Morphism,
    Comodule,
    Certificate,
}

pub fn sniff(value: &serde_json::Value) -> Result<DocumentKind> {
    let obj = value.as_object().ok_or_else(|| Error::Parse("at $: expected a JSON object".into()))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("extension_sha256") {
        DocumentKind::Certificate
    } else if has("coaction") {
        DocumentKind::Comodule
    } else if has("source") {
        DocumentKind::Morphism
    } else if has("delta") || has("dim") {
        DocumentKind::Coalgebra
    } else {
        return Err(Error::Parse("at $: not a coalgebra, morphism, comodule or certificate document".into()));
    })
}
