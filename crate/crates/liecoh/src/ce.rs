//! The Chevalley-Eilenberg complex: alternating cochains, the differential,
//! cohomology with deterministic representatives, Cartan calculus, exact
//! coboundary solving with certificates, cup products, and automorphism lifts
//! to central extensions.
//!
//! Sign convention: for a p-cochain w,
//!
//! (dw)(x_0..x_p) = sum_i (-1)^i x_i.w(..x^_i..)
//!                + sum_{i<j} (-1)^(i+j) w([x_i,x_j], .., x^_i, .., x^_j, ..)
//!
//! which for p = 2 and a trivial module is the cyclic formula
//! (dw)(x,y,z) = -w([x,y],z) - w([y,z],x) - w([z,x],y).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ModuleAction};
use crate::linalg::{
    self, add_vec, axpy, is_zero_vec, scale_vec, zero_vec, Mat, SolveOutcome, SparseMatrix,
};
use crate::scalar::Scalar;

/// All strictly increasing p-tuples in 0..n, lexicographic.
pub fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p > n {
        return Vec::new();
    }
    if p == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (p - i) {
                cur[i] += 1;
                for k in i + 1..p {
                    cur[k] = cur[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sort indices, returning the permutation sign; None when an index repeats.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// An alternating p-linear map on a Lie algebra with values in a module,
/// stored on strictly increasing basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim_g: usize,
    dim_v: usize,
    vals: BTreeMap<Vec<usize>, Vec<Scalar>>,
}

impl Cochain {
    pub fn zero(degree: usize, dim_g: usize, dim_v: usize) -> Self {
        Cochain { degree, dim_g, dim_v, vals: BTreeMap::new() }
    }

    /// Degree-0 cochain from a module vector.
    pub fn from_module_vec(dim_g: usize, v: Vec<Scalar>) -> Self {
        let mut c = Cochain::zero(0, dim_g, v.len());
        if !is_zero_vec(&v) {
            c.vals.insert(Vec::new(), v);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn set(&mut self, tuple: &[usize], v: Vec<Scalar>) {
        assert_eq!(tuple.len(), self.degree);
        assert!(tuple.windows(2).all(|w| w[0] < w[1]), "tuple must be increasing");
        assert!(tuple.iter().all(|&i| i < self.dim_g));
        assert_eq!(v.len(), self.dim_v);
        if is_zero_vec(&v) {
            self.vals.remove(tuple);
        } else {
            self.vals.insert(tuple.to_vec(), v);
        }
    }

    pub fn add_to(&mut self, tuple: &[usize], v: &[Scalar]) {
        let cur = self.value(tuple);
        self.set(tuple, add_vec(&cur, v));
    }

    /// Value on a strictly increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> Vec<Scalar> {
        self.vals.get(tuple).cloned().unwrap_or_else(|| zero_vec(self.dim_v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<Scalar>)> {
        self.vals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Value on an arbitrary index tuple, alternating in the arguments.
    pub fn eval_indices(&self, idx: &[usize]) -> Vec<Scalar> {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => zero_vec(self.dim_v),
            Some((sorted, sign)) => {
                let v = self.value(&sorted);
                if sign == 1 {
                    v
                } else {
                    scale_vec(&v, &Scalar::from_int(-1))
                }
            }
        }
    }

    /// Full multilinear evaluation on coordinate vectors.
    pub fn eval_vectors(&self, args: &[&[Scalar]]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.degree);
        let mut out = zero_vec(self.dim_v);
        for (tuple, val) in &self.vals {
            // sum over assignments of tuple entries to argument slots
            let p = self.degree;
            let mut perm: Vec<usize> = (0..p).collect();
            loop {
                let mut coeff = Scalar::one();
                let mut sign = 1i64;
                // parity of perm
                for a in 0..p {
                    for b in a + 1..p {
                        if perm[a] > perm[b] {
                            sign = -sign;
                        }
                    }
                }
                for (slot, &which) in perm.iter().enumerate() {
                    coeff = &coeff * &args[slot][tuple[which]];
                    if coeff.is_zero() {
                        break;
                    }
                }
                if !coeff.is_zero() {
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    axpy(&mut out, &coeff, val);
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        out
    }

    /// Flat coordinates: tuples in lexicographic order, module coordinates
    /// fastest.
    pub fn to_flat(&self, tuples: &[Vec<usize>]) -> Vec<Scalar> {
        let mut out = zero_vec(tuples.len() * self.dim_v);
        for (i, t) in tuples.iter().enumerate() {
            let v = self.value(t);
            out[i * self.dim_v..(i + 1) * self.dim_v].clone_from_slice(&v);
        }
        out
    }

    pub fn from_flat(
        degree: usize,
        dim_g: usize,
        dim_v: usize,
        tuples: &[Vec<usize>],
        flat: &[Scalar],
    ) -> Self {
        assert_eq!(flat.len(), tuples.len() * dim_v);
        let mut c = Cochain::zero(degree, dim_g, dim_v);
        for (i, t) in tuples.iter().enumerate() {
            let v = flat[i * dim_v..(i + 1) * dim_v].to_vec();
            if !is_zero_vec(&v) {
                c.set(t, v);
            }
        }
        c
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Cochain::zero(self.degree, self.dim_g, self.dim_v);
        if c.is_zero() {
            return out;
        }
        for (t, v) in &self.vals {
            out.vals.insert(t.clone(), scale_vec(v, c));
        }
        out
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

impl std::ops::Add<&Cochain> for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        assert_eq!(
            (self.degree, self.dim_g, self.dim_v),
            (rhs.degree, rhs.dim_g, rhs.dim_v),
            "cochain shape mismatch"
        );
        let mut out = self.clone();
        for (t, v) in &rhs.vals {
            out.add_to(t, v);
        }
        out
    }
}

impl std::ops::Sub<&Cochain> for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        self + &rhs.scale(&Scalar::from_int(-1))
    }
}

// ---------------------------------------------------------------------------
// Differential and cohomology

/// The Chevalley-Eilenberg differential.
pub fn ce_d(g: &LieAlgebra, rho: &ModuleAction, c: &Cochain) -> Cochain {
    let p = c.degree();
    let n = g.dim();
    let mut out = Cochain::zero(p + 1, n, c.dim_v());
    if p + 1 > n {
        return out;
    }
    for tuple in increasing_tuples(n, p + 1) {
        let mut acc = zero_vec(c.dim_v());
        // action terms
        if !rho.is_trivial() {
            for (i, &xi) in tuple.iter().enumerate() {
                let rest: Vec<usize> =
                    tuple.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                let val = c.value(&rest);
                if !is_zero_vec(&val) {
                    let term = rho.act_basis(xi, &val);
                    let sgn = if i % 2 == 0 { 1 } else { -1 };
                    axpy(&mut acc, &Scalar::from_int(sgn), &term);
                }
            }
        }
        // bracket terms
        for i in 0..tuple.len() {
            for j in i + 1..tuple.len() {
                let b = g.bracket_basis(tuple[i], tuple[j]);
                if is_zero_vec(&b) {
                    continue;
                }
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, &v)| v)
                    .collect();
                let sgn = if (i + j) % 2 == 0 { 1 } else { -1 };
                for (k, coeff) in b.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(p);
                    idx.push(k);
                    idx.extend_from_slice(&rest);
                    let v = c.eval_indices(&idx);
                    if !is_zero_vec(&v) {
                        let s = if sgn == 1 { coeff.clone() } else { -coeff };
                        axpy(&mut acc, &s, &v);
                    }
                }
            }
        }
        if !is_zero_vec(&acc) {
            out.set(&tuple, acc);
        }
    }
    out
}

/// Matrix of d: C^p -> C^(p+1) in flat coordinates.
pub fn d_matrix(g: &LieAlgebra, rho: &ModuleAction, p: usize) -> SparseMatrix {
    let n = g.dim();
    let dv = rho.dim_v();
    let src = increasing_tuples(n, p);
    let dst = increasing_tuples(n, p + 1);
    let mut m = SparseMatrix::new(dst.len() * dv, src.len() * dv);
    for (ci, t) in src.iter().enumerate() {
        for a in 0..dv {
            let mut basis = Cochain::zero(p, n, dv);
            let mut v = zero_vec(dv);
            v[a] = Scalar::one();
            basis.set(t, v);
            let image = ce_d(g, rho, &basis);
            let flat = image.to_flat(&dst);
            for (r, x) in flat.iter().enumerate() {
                m.add_entry(r, ci * dv + a, x);
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    /// Cocycle representatives of an H^p basis, deterministic.
    pub representatives: Vec<Cochain>,
    /// Basis of Z^p as cochains (reduced-echelon kernel vectors).
    pub cocycle_basis: Vec<Cochain>,
}

/// Exact cohomology in degree p via kernel/image of the differential.
pub fn cohomology(g: &LieAlgebra, rho: &ModuleAction, p: usize) -> CohomologyReport {
    let n = g.dim();
    let dv = rho.dim_v();
    let tuples = increasing_tuples(n, p);
    let z_flat = if p > n {
        Vec::new()
    } else {
        linalg::kernel_basis(&d_matrix(g, rho, p))
    };
    let b_flat: Vec<Vec<Scalar>> = if p == 0 || p > n {
        Vec::new()
    } else {
        linalg::image_basis(&d_matrix(g, rho, p - 1))
    };
    let dim_space = tuples.len() * dv;
    let dim_z = z_flat.len();
    let dim_b = linalg::span_rank(&b_flat, dim_space);
    let rep_idx = linalg::independent_over(&b_flat, &z_flat, dim_space);
    let representatives: Vec<Cochain> = rep_idx
        .iter()
        .map(|&i| Cochain::from_flat(p, n, dv, &tuples, &z_flat[i]))
        .collect();
    let cocycle_basis: Vec<Cochain> =
        z_flat.iter().map(|v| Cochain::from_flat(p, n, dv, &tuples, v)).collect();
    assert_eq!(dim_z - dim_b, representatives.len());
    CohomologyReport {
        degree: p,
        dim_z,
        dim_b,
        dim_h: dim_z - dim_b,
        representatives,
        cocycle_basis,
    }
}

/// Contraction i_x by a coordinate vector.
pub fn contract(c: &Cochain, x: &[Scalar]) -> Cochain {
    assert!(c.degree() >= 1, "contract needs degree >= 1");
    assert_eq!(x.len(), c.dim_g());
    let mut out = Cochain::zero(c.degree() - 1, c.dim_g(), c.dim_v());
    for tuple in increasing_tuples(c.dim_g(), c.degree() - 1) {
        let mut acc = zero_vec(c.dim_v());
        for (k, coeff) in x.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut idx = Vec::with_capacity(c.degree());
            idx.push(k);
            idx.extend_from_slice(&tuple);
            let v = c.eval_indices(&idx);
            axpy(&mut acc, coeff, &v);
        }
        if !is_zero_vec(&acc) {
            out.set(&tuple, acc);
        }
    }
    out
}

/// Lie derivative of a cochain along x:
/// (L_x w)(y_1..y_p) = x.w(y_1..y_p) - sum_i w(y_1, .., [x,y_i], .., y_p).
pub fn lie_derivative(g: &LieAlgebra, rho: &ModuleAction, c: &Cochain, x: &[Scalar]) -> Cochain {
    let p = c.degree();
    let mut out = Cochain::zero(p, c.dim_g(), c.dim_v());
    for tuple in increasing_tuples(c.dim_g(), p) {
        let mut acc = rho.act(x, &c.value(&tuple));
        for (i, &yi) in tuple.iter().enumerate() {
            let b = g.bracket(x, &g.basis_vec(yi));
            for (k, coeff) in b.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut idx = tuple.clone();
                idx[i] = k;
                let v = c.eval_indices(&idx);
                axpy(&mut acc, &-coeff, &v);
            }
        }
        if !is_zero_vec(&acc) {
            out.set(&tuple, acc);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum CoboundaryOutcome {
    /// A potential eta with d(eta) = omega.
    Coboundary(Cochain),
    /// Left-null row certificate y over the flat equation system:
    /// y * D = 0 while y * omega != 0.
    NotCoboundary { certificate: Vec<Scalar> },
}

/// Decide whether a cocycle is a coboundary, with witness either way.
pub fn coboundary_solve(
    g: &LieAlgebra,
    rho: &ModuleAction,
    omega: &Cochain,
) -> Result<CoboundaryOutcome> {
    let p = omega.degree();
    assert!(p >= 1);
    let d_omega = ce_d(g, rho, omega);
    if !d_omega.is_zero() {
        let (t, _) = d_omega.entries().next().unwrap();
        return Err(Error::NotACocycle(
            t.first().copied().unwrap_or(0),
            t.get(1).copied().unwrap_or(0),
            t.get(2).copied().unwrap_or(0),
        ));
    }
    let d = d_matrix(g, rho, p - 1);
    let tuples = increasing_tuples(g.dim(), p);
    let b = omega.to_flat(&tuples);
    match linalg::solve(&d, &b)? {
        SolveOutcome::Solution(x) => {
            let src = increasing_tuples(g.dim(), p - 1);
            let eta = Cochain::from_flat(p - 1, g.dim(), rho.dim_v(), &src, &x);
            debug_assert_eq!(&ce_d(g, rho, &eta), omega);
            Ok(CoboundaryOutcome::Coboundary(eta))
        }
        SolveOutcome::Infeasible { certificate } => {
            Ok(CoboundaryOutcome::NotCoboundary { certificate })
        }
    }
}

/// Coordinates of [omega] in the representative basis of `report`, i.e. the
/// unique a with omega = sum a_i rep_i + d(beta). None if omega is not a
/// cocycle of the right shape.
pub fn decompose_class(
    g: &LieAlgebra,
    rho: &ModuleAction,
    report: &CohomologyReport,
    omega: &Cochain,
) -> Option<Vec<Scalar>> {
    let p = report.degree;
    if omega.degree() != p {
        return None;
    }
    if !ce_d(g, rho, omega).is_zero() {
        return None;
    }
    let tuples = increasing_tuples(g.dim(), p);
    let dv = rho.dim_v();
    let flat = omega.to_flat(&tuples);
    let mut cols: Vec<Vec<Scalar>> =
        report.representatives.iter().map(|r| r.to_flat(&tuples)).collect();
    let k = cols.len();
    if p >= 1 {
        let dm = d_matrix(g, rho, p - 1);
        let src = increasing_tuples(g.dim(), p - 1);
        for ci in 0..src.len() * dv {
            let mut e = zero_vec(src.len() * dv);
            e[ci] = Scalar::one();
            cols.push(dm.apply(&e));
        }
    }
    let m = SparseMatrix::from_columns(&cols, flat.len());
    match linalg::solve(&m, &flat).ok()? {
        SolveOutcome::Solution(x) => Some(x[..k].to_vec()),
        SolveOutcome::Infeasible { .. } => None,
    }
}

// ---------------------------------------------------------------------------
// Cup products

/// A bilinear pairing of coordinate modules given by its value table.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub dim_l: usize,
    pub dim_r: usize,
    pub dim_out: usize,
    /// table[a][b] = value on (e_a, e_b).
    pub table: Vec<Vec<Vec<Scalar>>>,
}

impl Pairing {
    pub fn scalar_mul() -> Self {
        Pairing { dim_l: 1, dim_r: 1, dim_out: 1, table: vec![vec![vec![Scalar::one()]]] }
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(u.len(), self.dim_l);
        assert_eq!(v.len(), self.dim_r);
        let mut out = zero_vec(self.dim_out);
        for (a, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in v.iter().enumerate() {
                if !y.is_zero() {
                    axpy(&mut out, &(x * y), &self.table[a][b]);
                }
            }
        }
        out
    }
}

/// Alternating cup product of a p- and a q-cochain along a value pairing.
pub fn cup_product(c1: &Cochain, c2: &Cochain, pairing: &Pairing) -> Result<Cochain> {
    if c1.dim_g() != c2.dim_g() {
        return Err(Error::IncompatibleModules("cup factors live on different algebras".into()));
    }
    if pairing.dim_l != c1.dim_v() || pairing.dim_r != c2.dim_v() {
        return Err(Error::IncompatibleModules(format!(
            "pairing shape ({}, {}) does not match cochain values ({}, {})",
            pairing.dim_l,
            pairing.dim_r,
            c1.dim_v(),
            c2.dim_v()
        )));
    }
    let p = c1.degree();
    let q = c2.degree();
    let n = c1.dim_g();
    let mut out = Cochain::zero(p + q, n, pairing.dim_out);
    for tuple in increasing_tuples(n, p + q) {
        let mut acc = zero_vec(pairing.dim_out);
        for left_slots in increasing_tuples(p + q, p) {
            // shuffle sign: (-1)^(sum of left slot positions - p(p-1)/2)
            let shift: usize = left_slots.iter().sum::<usize>() - p * (p.saturating_sub(1)) / 2;
            let sign = if shift % 2 == 0 { 1 } else { -1 };
            let left: Vec<usize> = left_slots.iter().map(|&s| tuple[s]).collect();
            let right: Vec<usize> = (0..p + q)
                .filter(|s| !left_slots.contains(s))
                .map(|s| tuple[s])
                .collect();
            let v1 = c1.value(&left);
            if is_zero_vec(&v1) {
                continue;
            }
            let v2 = c2.value(&right);
            if is_zero_vec(&v2) {
                continue;
            }
            let val = pairing.eval(&v1, &v2);
            axpy(&mut acc, &Scalar::from_int(sign), &val);
        }
        if !is_zero_vec(&acc) {
            out.set(&tuple, acc);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Automorphism lifts to central extensions

/// Pull back a cochain along an algebra map and push values through gamma_v:
/// (gamma.w)(x, y) = gamma_v w(gamma_g^{-1} x, gamma_g^{-1} y).
pub fn transform_cochain(c: &Cochain, gamma_v: &Mat, gamma_g_inv: &Mat) -> Cochain {
    let n = c.dim_g();
    let mut out = Cochain::zero(c.degree(), n, gamma_v.rows);
    for tuple in increasing_tuples(n, c.degree()) {
        let args: Vec<Vec<Scalar>> = tuple
            .iter()
            .map(|&i| {
                let mut e = zero_vec(n);
                e[i] = Scalar::one();
                gamma_g_inv.apply(&e)
            })
            .collect();
        let arg_refs: Vec<&[Scalar]> = args.iter().map(|a| a.as_slice()).collect();
        let v = c.eval_vectors(&arg_refs);
        let v = gamma_v.apply(&v);
        if !is_zero_vec(&v) {
            out.set(&tuple, v);
        }
    }
    out
}

/// Check the lifting condition gamma.omega - omega = d(theta) for a central
/// extension V +_omega g, and verify that the lifted map
/// (z, x) -> (gamma_v z + theta(gamma_g x), gamma_g x) preserves the twisted
/// bracket on all basis pairs when the condition holds.
pub fn lift_automorphism_check(
    g: &LieAlgebra,
    gamma_v: &Mat,
    gamma_g: &Mat,
    omega: &Cochain,
    theta: &Cochain,
) -> Result<bool> {
    if !g.is_automorphism(gamma_g) {
        return Err(Error::NotAutomorphism);
    }
    let Some(gamma_g_inv) = gamma_g.inverse() else {
        return Err(Error::NotAutomorphism);
    };
    if gamma_v.inverse().is_none() {
        return Err(Error::NotAutomorphism);
    }
    let dv = omega.dim_v();
    let rho = ModuleAction::trivial(g, dv);
    let moved = transform_cochain(omega, gamma_v, &gamma_g_inv);
    let diff = &moved - omega;
    let cond = diff == ce_d(g, &rho, theta);
    if cond {
        // The lift must be an automorphism of the central extension:
        // gamma_v w(x, y) + theta(gamma x, gamma y ... ) matches on basis pairs.
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let gi = gamma_g.apply(&g.basis_vec(i));
                let gj = gamma_g.apply(&g.basis_vec(j));
                // z-part of [lift(0,e_i), lift(0,e_j)]
                let lhs_z = omega.eval_vectors(&[&gi, &gj]);
                // z-part of lift([(0,e_i),(0,e_j)]) = gamma_v w(e_i,e_j) + theta(gamma_g [e_i,e_j])
                let w = omega.eval_indices(&[i, j]);
                let br = gamma_g.apply(&g.bracket_basis(i, j));
                let mut rhs_z = gamma_v.apply(&w);
                rhs_z = add_vec(&rhs_z, &theta.eval_vectors(&[&br]));
                if lhs_z != rhs_z {
                    return Err(Error::Invalid(
                        "lift condition held but the lifted map fails on a basis pair".into(),
                    ));
                }
                let lhs_g = g.bracket(&gi, &gj);
                if lhs_g != br {
                    return Err(Error::NotAutomorphism);
                }
            }
        }
    }
    Ok(cond)
}
