//! Finite-dimensional Lie algebras given by structure constants, module
//! actions by explicit matrices, and the standard constructions the rest of
//! the crate builds on.
//!
//! Brackets are stored only for basis pairs i < j, so antisymmetry holds by
//! construction; the Jacobi identity is validated once, on every basis
//! triple, when an algebra is built.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    self, add_vec, axpy, is_zero_vec, scale_vec, zero_vec, Mat, SparseMatrix,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// bracket(i, j) for i < j, as a coordinate vector of length dim.
    brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl LieAlgebra {
    /// Build and validate an algebra from structure constants. Input pairs
    /// may come in either order; a pair given both ways must be consistent.
    pub fn from_structure(
        names: Vec<String>,
        entries: Vec<((usize, usize), Vec<Scalar>)>,
    ) -> Result<Self> {
        let n = names.len();
        let mut brackets: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch { expected: n, got: i.max(j) + 1 });
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            if i == j {
                if !is_zero_vec(&v) {
                    return Err(Error::AntisymmetryViolation(i, j));
                }
                continue;
            }
            let (key, val) = if i < j { ((i, j), v) } else { ((j, i), scale_vec(&v, &Scalar::from_int(-1))) };
            if let Some(prev) = brackets.get(&key) {
                if *prev != val {
                    return Err(Error::AntisymmetryViolation(key.0, key.1));
                }
            } else if !is_zero_vec(&val) {
                brackets.insert(key, val);
            }
        }
        let g = LieAlgebra { names, brackets };
        g.validate_jacobi()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// Bracket of two basis elements as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        if i == j {
            return zero_vec(self.dim());
        }
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_else(|| zero_vec(self.dim()))
        } else {
            scale_vec(&self.bracket_basis(j, i), &Scalar::from_int(-1))
        }
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let mut out = zero_vec(self.dim());
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let c = &x[i] * &y[j];
                axpy(&mut out, &c, &self.bracket_basis(i, j));
            }
        }
        out
    }

    fn validate_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = self.bracket(&self.bracket_basis(i, j), &self.basis_vec(k));
                    acc = add_vec(&acc, &self.bracket(&self.bracket_basis(j, k), &self.basis_vec(i)));
                    acc = add_vec(&acc, &self.bracket(&self.bracket_basis(k, i), &self.basis_vec(j)));
                    if !is_zero_vec(&acc) {
                        return Err(Error::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = zero_vec(self.dim());
        v[i] = Scalar::one();
        v
    }

    /// Matrix of ad(e_i) acting on coordinates.
    pub fn ad(&self, i: usize) -> Mat {
        let n = self.dim();
        let mut m = Mat::zero(n, n);
        for j in 0..n {
            let col = self.bracket_basis(i, j);
            for r in 0..n {
                m.set(r, j, col[r].clone());
            }
        }
        m
    }

    /// Basis of the derived subalgebra [g, g].
    pub fn derived_subalgebra(&self) -> Vec<Vec<Scalar>> {
        let mut cols = Vec::new();
        for (&(_i, _j), v) in &self.brackets {
            cols.push(v.clone());
        }
        if cols.is_empty() {
            return Vec::new();
        }
        linalg::image_basis(&SparseMatrix::from_columns(&cols, self.dim()))
    }

    pub fn is_perfect(&self) -> bool {
        linalg::span_rank(&self.derived_subalgebra(), self.dim()) == self.dim()
    }

    /// Basis of the center {x : [x, e_j] = 0 for all j}.
    pub fn center(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut m = SparseMatrix::new(n * n, n);
        for j in 0..n {
            for i in 0..n {
                let col = self.bracket_basis(i, j);
                for r in 0..n {
                    m.add_entry(j * n + r, i, &col[r]);
                }
            }
        }
        linalg::kernel_basis(&m)
    }

    /// Whether the matrix u (on coordinates) is an algebra automorphism.
    pub fn is_automorphism(&self, u: &Mat) -> bool {
        if u.rows != self.dim() || u.cols != self.dim() {
            return false;
        }
        if u.inverse().is_none() {
            return false;
        }
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let lhs = u.apply(&self.bracket_basis(i, j));
                let rhs = self.bracket(&u.apply(&self.basis_vec(i)), &u.apply(&self.basis_vec(j)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the matrix d is a derivation: d[x,y] = [dx,y] + [x,dy].
    pub fn is_derivation(&self, d: &Mat) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let lhs = d.apply(&self.bracket_basis(i, j));
                let rhs = add_vec(
                    &self.bracket(&d.apply(&self.basis_vec(i)), &self.basis_vec(j)),
                    &self.bracket(&self.basis_vec(i), &d.apply(&self.basis_vec(j))),
                );
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// Module actions

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAction {
    dim_g: usize,
    dim_v: usize,
    /// One matrix per basis element of g.
    mats: Vec<Mat>,
}

impl ModuleAction {
    pub fn trivial(g: &LieAlgebra, dim_v: usize) -> Self {
        ModuleAction {
            dim_g: g.dim(),
            dim_v,
            mats: vec![Mat::zero(dim_v, dim_v); g.dim()],
        }
    }

    /// Validate rho([x,y]) = rho(x) rho(y) - rho(y) rho(x) on basis pairs.
    pub fn new(g: &LieAlgebra, mats: Vec<Mat>) -> Result<Self> {
        if mats.len() != g.dim() {
            return Err(Error::DimensionMismatch { expected: g.dim(), got: mats.len() });
        }
        let dim_v = mats.first().map_or(0, |m| m.rows);
        for m in &mats {
            if m.rows != dim_v || m.cols != dim_v {
                return Err(Error::DimensionMismatch { expected: dim_v, got: m.rows });
            }
        }
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let mut lhs = Mat::zero(dim_v, dim_v);
                for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        lhs = lhs.add(&mats[k].scale(c));
                    }
                }
                let rhs = mats[i].matmul(&mats[j]).sub(&mats[j].matmul(&mats[i]));
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(i, j));
                }
            }
        }
        Ok(ModuleAction { dim_g: g.dim(), dim_v, mats })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn mat(&self, i: usize) -> &Mat {
        &self.mats[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// Action of basis element e_i on a module vector.
    pub fn act_basis(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.mats[i].apply(v)
    }

    /// Action of a general algebra element.
    pub fn act(&self, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim_v);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.mats[i].apply(v));
            }
        }
        out
    }

    /// Invariants V^g.
    pub fn invariants(&self) -> Vec<Vec<Scalar>> {
        let mut m = SparseMatrix::new(self.dim_g * self.dim_v, self.dim_v);
        for (i, mat) in self.mats.iter().enumerate() {
            for r in 0..self.dim_v {
                for c in 0..self.dim_v {
                    m.add_entry(i * self.dim_v + r, c, mat.get(r, c));
                }
            }
        }
        linalg::kernel_basis(&m)
    }
}

// ---------------------------------------------------------------------------
// Standard algebras

fn nm(s: &str) -> String {
    s.to_string()
}

pub fn abelian(n: usize) -> LieAlgebra {
    let names = (0..n).map(|i| format!("a{}", i + 1)).collect();
    LieAlgebra::from_structure(names, Vec::new()).expect("abelian is always valid")
}

/// Heisenberg algebra on (x, y, z) with [x, y] = z.
pub fn heisenberg3() -> LieAlgebra {
    let names = vec![nm("x"), nm("y"), nm("z")];
    let mut z = zero_vec(3);
    z[2] = Scalar::one();
    LieAlgebra::from_structure(names, vec![((0, 1), z)]).expect("heisenberg is valid")
}

/// sl2 with basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
pub fn sl2() -> LieAlgebra {
    sl(2)
}

/// gl(d) on the elementary-matrix basis E_{ij}, row-major.
pub fn gl(d: usize) -> LieAlgebra {
    let mut names = Vec::new();
    for i in 0..d {
        for j in 0..d {
            names.push(format!("E{}{}", i + 1, j + 1));
        }
    }
    let idx = |i: usize, j: usize| i * d + j;
    let n = d * d;
    let mut entries = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let a = idx(i, j);
                    let b = idx(k, l);
                    if a >= b {
                        continue;
                    }
                    // [E_ij, E_kl] = d_jk E_il - d_li E_kj
                    let mut v = zero_vec(n);
                    if j == k {
                        v[idx(i, l)] += &Scalar::one();
                    }
                    if l == i {
                        v[idx(k, j)] -= &Scalar::one();
                    }
                    if !is_zero_vec(&v) {
                        entries.push(((a, b), v));
                    }
                }
            }
        }
    }
    LieAlgebra::from_structure(names, entries).expect("gl(d) is valid")
}

/// sl(d): off-diagonal E_{ij} (i != j, row-major order) followed by
/// H_k = E_kk - E_{k+1,k+1}.
pub fn sl(d: usize) -> LieAlgebra {
    assert!(d >= 2);
    // Basis as d x d matrices.
    let mut basis_mats: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut names = Vec::new();
    if d == 2 {
        // Classical (h, e, f) presentation.
        names = vec![nm("h"), nm("e"), nm("f")];
        let mut h = vec![vec![Scalar::zero(); 2]; 2];
        h[0][0] = Scalar::one();
        h[1][1] = Scalar::from_int(-1);
        let mut e = vec![vec![Scalar::zero(); 2]; 2];
        e[0][1] = Scalar::one();
        let mut f = vec![vec![Scalar::zero(); 2]; 2];
        f[1][0] = Scalar::one();
        basis_mats.extend([h, e, f]);
    } else {
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    names.push(format!("E{}{}", i + 1, j + 1));
                    let mut m = vec![vec![Scalar::zero(); d]; d];
                    m[i][j] = Scalar::one();
                    basis_mats.push(m);
                }
            }
        }
        for k in 0..d - 1 {
            names.push(format!("H{}", k + 1));
            let mut m = vec![vec![Scalar::zero(); d]; d];
            m[k][k] = Scalar::one();
            m[k + 1][k + 1] = Scalar::from_int(-1);
            basis_mats.push(m);
        }
    }
    let n = basis_mats.len();
    let commutator = |a: &Vec<Vec<Scalar>>, b: &Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = Scalar::zero();
                for k in 0..d {
                    s += &(&a[i][k] * &b[k][j]);
                    s -= &(&b[i][k] * &a[k][j]);
                }
                out[i][j] = s;
            }
        }
        out
    };
    // Express a traceless matrix in the chosen basis.
    let express = |m: &Vec<Vec<Scalar>>| -> Vec<Scalar> {
        let mut v = zero_vec(n);
        if d == 2 {
            v[0] = m[0][0].clone();
            v[1] = m[0][1].clone();
            v[2] = m[1][0].clone();
        } else {
            let mut idx = 0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        v[idx] = m[i][j].clone();
                        idx += 1;
                    }
                }
            }
            // diag(d_1..d_d) with sum 0 = sum_k (d_1+..+d_k) H_k.
            let mut partial = Scalar::zero();
            for k in 0..d - 1 {
                partial += &m[k][k];
                v[idx + k] = partial.clone();
            }
        }
        v
    };
    let mut entries = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = commutator(&basis_mats[a], &basis_mats[b]);
            entries.push(((a, b), express(&c)));
        }
    }
    LieAlgebra::from_structure(names, entries).expect("sl(d) is valid")
}

/// Cotangent algebra T*(h) = h* x| h with the coadjoint action:
/// basis (a1*, ..., an*, x1, ..., xn), [x, a](y) = -a([x, y]).
pub fn cotangent(h: &LieAlgebra) -> LieAlgebra {
    let n = h.dim();
    let dim = 2 * n;
    let mut names: Vec<String> = h.names().iter().map(|s| format!("{s}*")).collect();
    names.extend(h.names().iter().cloned());
    let mut entries = Vec::new();
    // [x_i, x_j] as in h, shifted into the second block.
    for i in 0..n {
        for j in i + 1..n {
            let b = h.bracket_basis(i, j);
            let mut v = zero_vec(dim);
            for (k, c) in b.iter().enumerate() {
                v[n + k] = c.clone();
            }
            entries.push(((n + i, n + j), v));
        }
    }
    // [x_i, a_j*] = coad(x_i) a_j* with (coad(x) a)(y) = -a([x, y]):
    // coefficient on a_k* is -(structure constant c^j_{ik}).
    for i in 0..n {
        for j in 0..n {
            let mut v = zero_vec(dim);
            for k in 0..n {
                let b = h.bracket_basis(i, k);
                if !b[j].is_zero() {
                    v[k] -= &b[j];
                }
            }
            if !is_zero_vec(&v) {
                entries.push(((n + i, j), v));
            }
        }
    }
    LieAlgebra::from_structure(names, entries).expect("cotangent algebra is valid")
}

/// aff(1): [x, y] = y.
pub fn aff1() -> LieAlgebra {
    let names = vec![nm("x"), nm("y")];
    let mut v = zero_vec(2);
    v[1] = Scalar::one();
    LieAlgebra::from_structure(names, vec![((0, 1), v)]).expect("aff(1) is valid")
}

/// Named constructor used by the CLI layer.
pub fn standard_algebra(name: &str, param: Option<usize>) -> Result<LieAlgebra> {
    match (name, param) {
        ("sl", Some(n)) if n >= 2 => Ok(sl(n)),
        ("gl", Some(d)) if d >= 1 => Ok(gl(d)),
        ("abelian", Some(n)) => Ok(abelian(n)),
        ("heisenberg", Some(3)) | ("heisenberg", None) => Ok(heisenberg3()),
        ("aff1", _) => Ok(aff1()),
        ("cotangent-aff1", _) => Ok(cotangent(&aff1())),
        ("cotangent-sl2", _) => Ok(cotangent(&sl2())),
        _ => Err(Error::UnknownAlgebra(format!("{name}({param:?})"))),
    }
}

// ---------------------------------------------------------------------------
// Semidirect sums

#[derive(Clone, Debug)]
pub struct SemidirectData {
    pub n_alg: LieAlgebra,
    pub g_alg: LieAlgebra,
    /// One derivation of n per basis element of g.
    pub action: Vec<Mat>,
}

impl SemidirectData {
    pub fn validate(&self) -> Result<()> {
        if self.action.len() != self.g_alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.g_alg.dim(),
                got: self.action.len(),
            });
        }
        for (gi, d) in self.action.iter().enumerate() {
            if d.rows != self.n_alg.dim() || d.cols != self.n_alg.dim() {
                return Err(Error::DimensionMismatch { expected: self.n_alg.dim(), got: d.rows });
            }
            if let Some((i, j)) = self.n_alg.is_derivation(d) {
                let _ = gi;
                return Err(Error::NotADerivation(i, j));
            }
        }
        // S is a homomorphism g -> der(n).
        for i in 0..self.g_alg.dim() {
            for j in i + 1..self.g_alg.dim() {
                let mut lhs = Mat::zero(self.n_alg.dim(), self.n_alg.dim());
                for (k, c) in self.g_alg.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        lhs = lhs.add(&self.action[k].scale(c));
                    }
                }
                let rhs = self.action[i]
                    .matmul(&self.action[j])
                    .sub(&self.action[j].matmul(&self.action[i]));
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(i, j));
                }
            }
        }
        Ok(())
    }
}

/// h = n x|_S g with bracket
/// [(n1,x1),(n2,x2)] = ([n1,n2] + S(x1)n2 - S(x2)n1, [x1,x2]).
/// The n block comes first in the basis; Jacobi is revalidated.
pub fn semidirect_sum(data: &SemidirectData) -> Result<LieAlgebra> {
    data.validate()?;
    let dn = data.n_alg.dim();
    let dg = data.g_alg.dim();
    let dim = dn + dg;
    let mut names: Vec<String> = data.n_alg.names().to_vec();
    names.extend(data.g_alg.names().iter().cloned());
    let mut entries = Vec::new();
    for i in 0..dn {
        for j in i + 1..dn {
            let b = data.n_alg.bracket_basis(i, j);
            let mut v = zero_vec(dim);
            v[..dn].clone_from_slice(&b);
            entries.push(((i, j), v));
        }
    }
    for x in 0..dg {
        for i in 0..dn {
            // [n_i, x_a] = -S(x_a) n_i
            let col = data.action[x].apply(&data.n_alg.basis_vec(i));
            let mut v = zero_vec(dim);
            for (k, c) in col.iter().enumerate() {
                v[k] = -c;
            }
            entries.push(((i, dn + x), v));
        }
    }
    for x in 0..dg {
        for y in x + 1..dg {
            let b = data.g_alg.bracket_basis(x, y);
            let mut v = zero_vec(dim);
            for (k, c) in b.iter().enumerate() {
                v[dn + k] = c.clone();
            }
            entries.push(((dn + x, dn + y), v));
        }
    }
    LieAlgebra::from_structure(names, entries)
}
