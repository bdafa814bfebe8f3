//! JSON document types for the CLI surface and their conversions to core
//! structures. Scalars travel as strings "a/b" (rationals) or as coefficient
//! lists over the declared cyclotomic order, so everything stays exact on the
//! wire.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

use liecoh::lie::{LieAlgebra, SemidirectData};
use liecoh::linalg::Mat;
use liecoh::multiloop::MultiloopSpec;
use liecoh::scalar::{Field, FieldSpec, Scalar};

#[derive(Debug)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for DocError {}

fn err<T>(msg: impl Into<String>) -> Result<T, DocError> {
    Err(DocError(msg.into()))
}

// ---------------------------------------------------------------------------
// Scalars

/// A scalar on the wire: "a/b" or a coefficient list over the field order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ScalarDoc {
    Rational(String),
    Cyclotomic(Vec<String>),
}

fn parse_fraction(s: &str) -> Result<BigRational, DocError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| DocError(format!("bad numerator `{num}`")))?;
    let d = BigInt::from_str(den).map_err(|_| DocError(format!("bad denominator `{den}`")))?;
    if d == BigInt::from(0) {
        return err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_fraction(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl ScalarDoc {
    pub fn to_scalar(&self, order: u32) -> Result<Scalar, DocError> {
        match self {
            ScalarDoc::Rational(s) => Ok(Scalar::from_rational(parse_fraction(s)?)),
            ScalarDoc::Cyclotomic(coeffs) => {
                let parsed: Result<Vec<BigRational>, DocError> =
                    coeffs.iter().map(|c| parse_fraction(c)).collect();
                Scalar::from_coeffs(order, parsed?)
                    .map_err(|e| DocError(format!("bad cyclotomic coefficients: {e}")))
            }
        }
    }

    pub fn from_scalar(s: &Scalar) -> ScalarDoc {
        match s.as_rational() {
            Some(q) => ScalarDoc::Rational(format_fraction(q)),
            None => {
                ScalarDoc::Cyclotomic(s.coeffs().iter().map(format_fraction).collect())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Algebras

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl FieldDoc {
    pub fn to_spec(&self) -> Result<FieldSpec, DocError> {
        match self.kind.as_str() {
            "rational" => Ok(FieldSpec::rational()),
            "cyclotomic" => {
                let order = self.order.ok_or_else(|| {
                    DocError("cyclotomic field needs an `order`".into())
                })?;
                Ok(FieldSpec::cyclotomic(order))
            }
            other => err(format!("unknown field kind `{other}`")),
        }
    }

    pub fn order(&self) -> u32 {
        if self.kind == "cyclotomic" {
            self.order.unwrap_or(1)
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketEntryDoc {
    pub x: String,
    pub y: String,
    /// Output as (basis name, scalar) pairs.
    pub out: Vec<(String, ScalarDoc)>,
}

/// Structure-constant description of a Lie algebra.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntryDoc>,
}

impl AlgebraDoc {
    pub fn to_algebra(&self) -> Result<LieAlgebra, DocError> {
        let _field = Field::new(self.to_field_spec()?)
            .map_err(|e| DocError(format!("invalid field: {e}")))?;
        let order = self.field.order();
        let n = self.basis.len();
        let index = |name: &str| -> Result<usize, DocError> {
            self.basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| DocError(format!("unknown basis element `{name}`")))
        };
        let mut entries = Vec::new();
        for (bi, b) in self.brackets.iter().enumerate() {
            let i = index(&b.x).map_err(|e| DocError(format!("bracket {bi}: {e}")))?;
            let j = index(&b.y).map_err(|e| DocError(format!("bracket {bi}: {e}")))?;
            let mut v = vec![Scalar::zero(); n];
            for (name, sd) in &b.out {
                let k = index(name).map_err(|e| DocError(format!("bracket {bi}: {e}")))?;
                let s = sd
                    .to_scalar(order)
                    .map_err(|e| DocError(format!("bracket {bi}: {e}")))?;
                v[k] = &v[k] + &s;
            }
            entries.push(((i, j), v));
        }
        LieAlgebra::from_structure(self.basis.clone(), entries)
            .map_err(|e| DocError(format!("invalid structure constants: {e}")))
    }

    pub fn to_field_spec(&self) -> Result<FieldSpec, DocError> {
        self.field.to_spec()
    }

    /// Canonical re-emission: brackets on i < j in order, coefficients sorted
    /// by basis position, zero entries dropped.
    pub fn from_algebra(g: &LieAlgebra, field: FieldDoc) -> AlgebraDoc {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = g.bracket_basis(i, j);
                let out: Vec<(String, ScalarDoc)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(k, s)| (g.names()[k].clone(), ScalarDoc::from_scalar(s)))
                    .collect();
                if !out.is_empty() {
                    brackets.push(BracketEntryDoc {
                        x: g.names()[i].clone(),
                        y: g.names()[j].clone(),
                        out,
                    });
                }
            }
        }
        AlgebraDoc { field, basis: g.names().to_vec(), brackets }
    }
}

// ---------------------------------------------------------------------------
// Matrices, forms, actions

pub type MatrixDoc = Vec<Vec<ScalarDoc>>;

pub fn matrix_from_doc(doc: &MatrixDoc, order: u32) -> Result<Mat, DocError> {
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    if doc.iter().any(|r| r.len() != cols) {
        return err("ragged matrix");
    }
    let mut m = Mat::zero(rows, cols);
    for (i, row) in doc.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, s.to_scalar(order)?);
        }
    }
    Ok(m)
}

pub fn matrix_to_doc(m: &Mat) -> MatrixDoc {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| ScalarDoc::from_scalar(m.get(i, j))).collect())
        .collect()
}

/// Symmetric bilinear form on the algebra basis (upper triangle suffices).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDoc {
    pub values: Vec<FormEntryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormEntryDoc {
    pub x: String,
    pub y: String,
    pub value: ScalarDoc,
}

impl FormDoc {
    pub fn to_form(
        &self,
        g: &LieAlgebra,
        order: u32,
    ) -> Result<liecoh::invariant::BilinearFormSym, DocError> {
        let mut f = liecoh::invariant::BilinearFormSym::zero(g.dim(), 1);
        for e in &self.values {
            let i = g
                .basis_index(&e.x)
                .ok_or_else(|| DocError(format!("unknown basis element `{}`", e.x)))?;
            let j = g
                .basis_index(&e.y)
                .ok_or_else(|| DocError(format!("unknown basis element `{}`", e.y)))?;
            f.set(i, j, vec![e.value.to_scalar(order)?]);
        }
        Ok(f)
    }
}

/// A 2-cochain on the algebra basis (strictly the values on pairs; the
/// alternating extension is implied).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CochainDoc {
    pub entries: Vec<CochainEntryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CochainEntryDoc {
    pub args: Vec<String>,
    pub value: ScalarDoc,
}

impl CochainDoc {
    pub fn to_cochain(
        &self,
        g: &LieAlgebra,
        order: u32,
    ) -> Result<liecoh::ce::Cochain, DocError> {
        let mut c = liecoh::ce::Cochain::zero(2, g.dim(), 1);
        for e in &self.entries {
            if e.args.len() != 2 {
                return err("cochain entries take exactly two arguments");
            }
            let i = g
                .basis_index(&e.args[0])
                .ok_or_else(|| DocError(format!("unknown basis element `{}`", e.args[0])))?;
            let j = g
                .basis_index(&e.args[1])
                .ok_or_else(|| DocError(format!("unknown basis element `{}`", e.args[1])))?;
            if i == j {
                return err("cochain entries need distinct arguments");
            }
            let v = e.value.to_scalar(order)?;
            let (key, v) = if i < j { (vec![i, j], v) } else { (vec![j, i], -&v) };
            let mut cur = c.value(&key);
            cur[0] = &cur[0] + &v;
            c.set(&key, cur);
        }
        Ok(c)
    }
}

// ---------------------------------------------------------------------------
// Multiloop and Klein-bottle specs

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TwistDoc {
    Multiloop {
        algebra: AlgebraDoc,
        orders: Vec<u32>,
        zetas: Vec<ScalarDoc>,
        sigmas: Vec<MatrixDoc>,
        #[serde(default = "default_true")]
        require_primitive: bool,
        /// Cyclotomic order the zeta coefficients live in (lcm of `orders`
        /// when omitted).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zeta_field_order: Option<u32>,
    },
    KleinBottle {
        n: usize,
    },
}

fn default_true() -> bool {
    true
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TwistDoc {
    pub fn to_spec(&self) -> Result<(LieAlgebra, Option<MultiloopSpec>), DocError> {
        match self {
            TwistDoc::Multiloop {
                algebra,
                orders,
                zetas,
                sigmas,
                require_primitive,
                zeta_field_order,
            } => {
                let g = algebra.to_algebra()?;
                let scalar_order = algebra.field.order();
                let zorder =
                    zeta_field_order.unwrap_or_else(|| orders.iter().fold(1, |a, &b| lcm(a, b)));
                let zetas: Result<Vec<Scalar>, DocError> =
                    zetas.iter().map(|z| z.to_scalar(zorder)).collect();
                let sigmas: Result<Vec<Mat>, DocError> =
                    sigmas.iter().map(|m| matrix_from_doc(m, scalar_order)).collect();
                let spec = MultiloopSpec {
                    orders: orders.clone(),
                    zetas: zetas?,
                    sigmas: sigmas?,
                    require_primitive: *require_primitive,
                };
                Ok((g, Some(spec)))
            }
            TwistDoc::KleinBottle { n } => {
                if *n < 2 {
                    return err("klein bottle spec needs n >= 2");
                }
                Ok((liecoh::lie::sl(*n), None))
            }
        }
    }
}

/// Action of g on n by derivations: one matrix per g-basis element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    pub matrices: Vec<MatrixDoc>,
}

/// Module action on the basis of h (n-block then g-block).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub matrices: Vec<MatrixDoc>,
}

pub fn semidirect_from_docs(
    n_doc: &AlgebraDoc,
    g_doc: &AlgebraDoc,
    action: &ActionDoc,
) -> Result<SemidirectData, DocError> {
    let n_alg = n_doc.to_algebra()?;
    let g_alg = g_doc.to_algebra()?;
    let order = n_doc.field.order();
    let mats: Result<Vec<Mat>, DocError> =
        action.matrices.iter().map(|m| matrix_from_doc(m, order)).collect();
    Ok(SemidirectData { n_alg, g_alg, action: mats? })
}

// ---------------------------------------------------------------------------
// Cochain/value formatting for reports

pub fn cochain_to_doc(c: &liecoh::ce::Cochain, names: &[String]) -> serde_json::Value {
    let mut entries = Vec::new();
    for (t, v) in c.entries() {
        let tuple: Vec<String> = t.iter().map(|&i| names[i].clone()).collect();
        let vals: Vec<ScalarDoc> = v.iter().map(ScalarDoc::from_scalar).collect();
        entries.push(serde_json::json!({ "args": tuple, "value": vals }));
    }
    serde_json::Value::Array(entries)
}

pub fn scalars_to_doc(v: &[Scalar]) -> Vec<ScalarDoc> {
    v.iter().map(ScalarDoc::from_scalar).collect()
}

pub fn multiindex_key(alpha: &[i64]) -> String {
    let parts: Vec<String> = alpha.iter().map(i64::to_string).collect();
    parts.join(",")
}

pub fn field_doc_rational() -> FieldDoc {
    FieldDoc { kind: "rational".into(), order: None }
}

/// Deterministic map ordering for JSON objects keyed by multidegrees.
pub fn degree_table<T: Serialize>(map: &BTreeMap<Vec<i64>, T>) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    for (k, v) in map {
        obj.insert(multiindex_key(k), serde_json::to_value(v).unwrap());
    }
    serde_json::Value::Object(obj)
}
