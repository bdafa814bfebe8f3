//! Algebraic de Rham complex of the r-torus with Laurent coefficients.
//!
//! Forms are written in the logarithmic frame d_i = dt_i / t_i, which makes
//! the exterior derivative diagonal in multidegree: d(t^a) = t^a sum_i a_i d_i.
//! The quotient of 1-forms by exact forms has a canonical representative per
//! multidegree (the first axis with nonzero exponent is eliminated), and
//! integration over the i-th fundamental circle is constant-term extraction
//! of the d_i component, normalized so that the integral of d_i is 1.

use std::collections::BTreeMap;

use crate::ce::Pairing;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, MultiIndex};
use crate::linalg::{is_zero_vec, zero_vec};
use crate::scalar::Scalar;

/// A p-form with values in a coordinate module: components indexed by sorted
/// axis subsets (0-based), each a vector of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusForm {
    vars: usize,
    degree: usize,
    dim_v: usize,
    comps: BTreeMap<Vec<usize>, Vec<LaurentPoly>>,
}

impl TorusForm {
    /// Degrees above `vars` are allowed and necessarily empty, which keeps
    /// shape arithmetic (d, wedge, contraction) uniform at the top degree.
    pub fn zero(vars: usize, degree: usize, dim_v: usize) -> Self {
        TorusForm { vars, degree, dim_v, comps: BTreeMap::new() }
    }

    /// Degree-0 form from a vector of functions.
    pub fn function(vars: usize, fs: Vec<LaurentPoly>) -> Self {
        let dim_v = fs.len();
        let mut f = TorusForm::zero(vars, 0, dim_v);
        if fs.iter().any(|p| !p.is_zero()) {
            f.comps.insert(Vec::new(), fs);
        }
        f
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, subset: &[usize]) -> Vec<LaurentPoly> {
        self.comps
            .get(subset)
            .cloned()
            .unwrap_or_else(|| vec![LaurentPoly::zero(self.vars); self.dim_v])
    }

    pub fn set_component(&mut self, subset: &[usize], v: Vec<LaurentPoly>) {
        assert_eq!(subset.len(), self.degree);
        assert!(subset.windows(2).all(|w| w[0] < w[1]), "subset must be sorted");
        assert!(subset.iter().all(|&i| i < self.vars), "axis out of range");
        assert_eq!(v.len(), self.dim_v);
        if v.iter().all(|p| p.is_zero()) {
            self.comps.remove(subset);
        } else {
            self.comps.insert(subset.to_vec(), v);
        }
    }

    pub fn add_to_component(&mut self, subset: &[usize], v: &[LaurentPoly]) {
        let mut cur = self.component(subset);
        for (c, p) in cur.iter_mut().zip(v) {
            *c = &*c + p;
        }
        self.set_component(subset, cur);
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<LaurentPoly>)> {
        self.comps.iter()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = TorusForm::zero(self.vars, self.degree, self.dim_v);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.comps {
            out.comps.insert(k.clone(), v.iter().map(|p| p.scale(c)).collect());
        }
        out
    }

    /// Apply a map to every Laurent coefficient (used for torus twists).
    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = TorusForm::zero(self.vars, self.degree, self.dim_v);
        for (k, v) in &self.comps {
            out.set_component(k, v.iter().map(&f).collect());
        }
        out
    }

    /// Exterior derivative in the logarithmic frame.
    pub fn derham_d(&self) -> Self {
        let mut out = TorusForm::zero(self.vars, self.degree + 1, self.dim_v);
        if self.degree + 1 > self.vars {
            return out;
        }
        for (subset, v) in &self.comps {
            for i in 0..self.vars {
                if subset.contains(&i) {
                    continue;
                }
                let pos = subset.iter().filter(|&&j| j < i).count();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let mut key = subset.clone();
                key.insert(pos, i);
                let dv: Vec<LaurentPoly> = v
                    .iter()
                    .map(|p| {
                        let q = p.partial(i + 1).expect("axis in range");
                        if sign == 1 {
                            q
                        } else {
                            -&q
                        }
                    })
                    .collect();
                out.add_to_component(&key, &dv);
            }
        }
        out
    }

    /// Contraction i_X with a vector field given by its component functions.
    pub fn contract(&self, x_comps: &[LaurentPoly]) -> Self {
        assert_eq!(x_comps.len(), self.vars);
        assert!(self.degree >= 1, "contract needs degree >= 1");
        let mut out = TorusForm::zero(self.vars, self.degree - 1, self.dim_v);
        for (subset, v) in &self.comps {
            for (k, &axis) in subset.iter().enumerate() {
                if x_comps[axis].is_zero() {
                    continue;
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let key: Vec<usize> =
                    subset.iter().enumerate().filter(|&(a, _)| a != k).map(|(_, &b)| b).collect();
                let term: Vec<LaurentPoly> = v
                    .iter()
                    .map(|p| {
                        let q = p * &x_comps[axis];
                        if sign == 1 {
                            q
                        } else {
                            -&q
                        }
                    })
                    .collect();
                out.add_to_component(&key, &term);
            }
        }
        out
    }

    /// Lie derivative along the field with the given components.
    pub fn lie_derive(&self, x_comps: &[LaurentPoly]) -> Self {
        if self.degree == 0 {
            // L_X f = X.f
            let mut fs = vec![LaurentPoly::zero(self.vars); self.dim_v];
            for (_, v) in &self.comps {
                for (slot, p) in fs.iter_mut().zip(v) {
                    for (axis, xc) in x_comps.iter().enumerate() {
                        if !xc.is_zero() {
                            let dp = p.partial(axis + 1).expect("axis in range");
                            *slot = &*slot + &(&dp * xc);
                        }
                    }
                }
            }
            return TorusForm::function(self.vars, fs);
        }
        let a = self.derham_d().contract(x_comps);
        let b = self.contract(x_comps).derham_d();
        &a + &b
    }

    /// Wedge product along a value pairing.
    pub fn wedge(&self, other: &TorusForm, pairing: &Pairing) -> Result<TorusForm> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, got: other.vars });
        }
        if pairing.dim_l != self.dim_v || pairing.dim_r != other.dim_v {
            return Err(Error::IncompatibleModules(format!(
                "pairing shape ({}, {}) vs form values ({}, {})",
                pairing.dim_l, pairing.dim_r, self.dim_v, other.dim_v
            )));
        }
        let deg = self.degree + other.degree;
        let mut out = TorusForm::zero(self.vars, deg, pairing.dim_out);
        if deg > self.vars {
            return Ok(out);
        }
        for (si, vi) in &self.comps {
            for (sj, vj) in &other.comps {
                if si.iter().any(|a| sj.contains(a)) {
                    continue;
                }
                // sign of sorting the concatenation si ++ sj
                let mut inversions = 0usize;
                for a in si {
                    for b in sj {
                        if a > b {
                            inversions += 1;
                        }
                    }
                }
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                let mut key: Vec<usize> = si.iter().chain(sj.iter()).copied().collect();
                key.sort_unstable();
                let mut val = vec![LaurentPoly::zero(self.vars); pairing.dim_out];
                for (a, pa) in vi.iter().enumerate() {
                    if pa.is_zero() {
                        continue;
                    }
                    for (b, pb) in vj.iter().enumerate() {
                        if pb.is_zero() {
                            continue;
                        }
                        let prod = pa * pb;
                        for (c, coeff) in pairing.table[a][b].iter().enumerate() {
                            if !coeff.is_zero() {
                                let term = prod.scale(coeff);
                                val[c] = &val[c] + &(if sign == 1 { term } else { -&term });
                            }
                        }
                    }
                }
                out.add_to_component(&key, &val);
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> i64 {
        self.comps
            .values()
            .flat_map(|v| v.iter().map(|p| p.max_degree()))
            .max()
            .unwrap_or(0)
    }
}

impl std::ops::Add<&TorusForm> for &TorusForm {
    type Output = TorusForm;
    fn add(self, rhs: &TorusForm) -> TorusForm {
        assert_eq!(
            (self.vars, self.degree, self.dim_v),
            (rhs.vars, rhs.degree, rhs.dim_v),
            "form shape mismatch"
        );
        let mut out = self.clone();
        for (k, v) in &rhs.comps {
            out.add_to_component(k, v);
        }
        out
    }
}

impl std::ops::Sub<&TorusForm> for &TorusForm {
    type Output = TorusForm;
    fn sub(self, rhs: &TorusForm) -> TorusForm {
        self + &rhs.scale(&Scalar::from_int(-1))
    }
}

impl std::ops::Neg for &TorusForm {
    type Output = TorusForm;
    fn neg(self) -> TorusForm {
        self.scale(&Scalar::from_int(-1))
    }
}

// ---------------------------------------------------------------------------
// Vector fields

/// A polynomial vector field X = sum_i f_i partial_i in the logarithmic frame
/// (partial_i = t_i d/dt_i), so that d_j(X) = f_j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    comps: Vec<LaurentPoly>,
}

impl VectorField {
    pub fn new(comps: Vec<LaurentPoly>) -> Self {
        assert!(!comps.is_empty());
        let vars = comps[0].vars();
        assert!(comps.iter().all(|p| p.vars() == vars));
        assert_eq!(comps.len(), vars, "one component per axis");
        VectorField { comps }
    }

    pub fn zero(vars: usize) -> Self {
        VectorField { comps: vec![LaurentPoly::zero(vars); vars] }
    }

    /// Basis field t^alpha partial_axis (0-based axis).
    pub fn monomial_field(vars: usize, alpha: &[i64], axis: usize) -> Self {
        assert!(axis < vars);
        let mut comps = vec![LaurentPoly::zero(vars); vars];
        comps[axis] = LaurentPoly::monomial(vars, alpha, Scalar::one());
        VectorField { comps }
    }

    /// The Witt basis field L_m = t^m (t d/dt) on the circle.
    pub fn witt(m: i64) -> Self {
        VectorField::monomial_field(1, &[m], 0)
    }

    pub fn vars(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[LaurentPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        VectorField { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    /// Apply to a function: X.f = sum_i f_i partial_i(f).
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                let df = f.partial(i + 1).expect("axis in range");
                out = &out + &(c * &df);
            }
        }
        out
    }

    /// Lie bracket [X, Y]_i = sum_j (f_j partial_j g_i - g_j partial_j f_i).
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.vars(), other.vars());
        let comps = (0..self.vars())
            .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
            .collect();
        VectorField { comps }
    }

    pub fn max_degree(&self) -> i64 {
        self.comps.iter().map(|p| p.max_degree()).max().unwrap_or(0)
    }
}

impl std::ops::Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.vars(), rhs.vars());
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.vars(), rhs.vars());
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Reduced 1-forms

/// A class in Omega^1 / d(functions), held by its canonical representative:
/// for each multidegree a != 0 the component along the first axis with
/// a_i != 0 is eliminated; the a = 0 layer is untouched.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedOneForm {
    inner: TorusForm,
}

/// Canonical reduction of a 1-form modulo exact forms.
pub fn reduce_oneform(omega: &TorusForm) -> ReducedOneForm {
    assert_eq!(omega.degree(), 1, "reduce_oneform takes 1-forms");
    let r = omega.vars();
    let dv = omega.dim_v();
    // Gather per-multidegree component vectors c[axis][vcoord].
    let mut per_alpha: BTreeMap<MultiIndex, Vec<Vec<Scalar>>> = BTreeMap::new();
    for (subset, v) in omega.components() {
        let axis = subset[0];
        for (c, p) in v.iter().enumerate() {
            for (alpha, coeff) in p.terms() {
                per_alpha.entry(alpha.clone()).or_insert_with(|| vec![zero_vec(dv); r])[axis][c] =
                    coeff.clone();
            }
        }
    }
    let mut out = TorusForm::zero(r, 1, dv);
    for (alpha, mut comps) in per_alpha {
        if let Some(pivot) = alpha.iter().position(|&k| k != 0) {
            // subtract (c_pivot / a_pivot) * (sum_j a_j d_j)
            let ratio: Vec<Scalar> = comps[pivot]
                .iter()
                .map(|x| x / &Scalar::from_int(alpha[pivot]))
                .collect();
            for (j, slot) in comps.iter_mut().enumerate() {
                if alpha[j] == 0 {
                    continue;
                }
                let f = Scalar::from_int(alpha[j]);
                for (s, rt) in slot.iter_mut().zip(&ratio) {
                    *s = &*s - &(&f * rt);
                }
            }
            debug_assert!(is_zero_vec(&comps[pivot]));
        }
        for (axis, vals) in comps.iter().enumerate() {
            if is_zero_vec(vals) {
                continue;
            }
            let polys: Vec<LaurentPoly> = vals
                .iter()
                .map(|s| LaurentPoly::monomial(r, &alpha, s.clone()))
                .collect();
            out.add_to_component(&[axis], &polys);
        }
    }
    ReducedOneForm { inner: out }
}

impl ReducedOneForm {
    pub fn zero(vars: usize, dim_v: usize) -> Self {
        ReducedOneForm { inner: TorusForm::zero(vars, 1, dim_v) }
    }

    pub fn vars(&self) -> usize {
        self.inner.vars()
    }

    pub fn dim_v(&self) -> usize {
        self.inner.dim_v()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// The canonical representative 1-form.
    pub fn representative(&self) -> &TorusForm {
        &self.inner
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ReducedOneForm { inner: self.inner.scale(c) }
    }

    /// Integration over the i-th fundamental circle (1-based axis):
    /// the constant term of the d_i component, normalized so the integral of
    /// d_i is 1 (the 2*pi*i of the analytic picture is absorbed).
    pub fn cycle_integral(&self, axis: usize) -> Result<Vec<Scalar>> {
        if axis == 0 || axis > self.vars() {
            return Err(Error::AxisOutOfRange { axis, vars: self.vars() });
        }
        Ok(self
            .inner
            .component(&[axis - 1])
            .iter()
            .map(|p| p.constant_term())
            .collect())
    }

    /// Induced exterior derivative Omega^1/dA -> Omega^2 (well-defined since
    /// d kills exact forms).
    pub fn derham_d(&self) -> TorusForm {
        self.inner.derham_d()
    }

    /// Lie derivative descends to the quotient.
    pub fn lie_derive(&self, x_comps: &[LaurentPoly]) -> Self {
        reduce_oneform(&self.inner.lie_derive(x_comps))
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        reduce_oneform(&self.inner.map_coeffs(f))
    }
}

impl std::ops::Add<&ReducedOneForm> for &ReducedOneForm {
    type Output = ReducedOneForm;
    fn add(self, rhs: &ReducedOneForm) -> ReducedOneForm {
        // Canonical representatives are closed under addition: the killed
        // pivot slot stays zero per multidegree.
        ReducedOneForm { inner: &self.inner + &rhs.inner }
    }
}

impl std::ops::Sub<&ReducedOneForm> for &ReducedOneForm {
    type Output = ReducedOneForm;
    fn sub(self, rhs: &ReducedOneForm) -> ReducedOneForm {
        ReducedOneForm { inner: &self.inner - &rhs.inner }
    }
}

impl std::ops::Neg for &ReducedOneForm {
    type Output = ReducedOneForm;
    fn neg(self) -> ReducedOneForm {
        self.scale(&Scalar::from_int(-1))
    }
}
