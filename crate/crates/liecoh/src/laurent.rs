//! Multivariate Laurent polynomials over exact scalars.
//!
//! These model the functions on an r-torus: finite sums of monomials
//! t^a = t_1^{a_1} ... t_r^{a_r} with a in Z^r. The derivations used
//! throughout are the logarithmic ones, `partial(i) = t_i d/dt_i`, which act
//! diagonally on monomials.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector in Z^r. Term iteration is lexicographic, so every
/// downstream printout is deterministic.
pub type MultiIndex = Vec<i64>;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        let mut p = LaurentPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Self {
        LaurentPoly::constant(vars, Scalar::one())
    }

    pub fn monomial(vars: usize, exps: &[i64], c: Scalar) -> Self {
        assert_eq!(exps.len(), vars, "exponent vector length mismatch");
        let mut p = LaurentPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    /// The variable t_i (axes are 1-based as in the CLI surface).
    pub fn var(vars: usize, axis: usize) -> Result<Self> {
        if axis == 0 || axis > vars {
            return Err(Error::AxisOutOfRange { axis, vars });
        }
        let mut exps = vec![0i64; vars];
        exps[axis - 1] = 1;
        Ok(LaurentPoly::monomial(vars, &exps, Scalar::one()))
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i64]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of t^0, i.e. the "constant term" functional.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.vars])
    }

    pub fn add_term(&mut self, exps: &[i64], c: &Scalar) {
        assert_eq!(exps.len(), self.vars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.to_vec()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(exps);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.vars);
        }
        let mut out = LaurentPoly::zero(self.vars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    /// Multiply by the single monomial c * t^shift.
    pub fn mul_monomial(&self, shift: &[i64], c: &Scalar) -> Self {
        assert_eq!(shift.len(), self.vars);
        let mut out = LaurentPoly::zero(self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            let k: MultiIndex = e.iter().zip(shift).map(|(x, y)| x + y).collect();
            out.terms.insert(k, a * c);
        }
        out
    }

    /// Logarithmic derivative along the given 1-based axis:
    /// partial_i(t^a) = a_i t^a.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis == 0 || axis > self.vars {
            return Err(Error::AxisOutOfRange { axis, vars: self.vars });
        }
        let mut out = LaurentPoly::zero(self.vars);
        for (e, a) in &self.terms {
            let k = e[axis - 1];
            if k != 0 {
                out.terms.insert(e.clone(), a * &Scalar::from_int(k));
            }
        }
        Ok(out)
    }

    /// Substitute t_i = point[i]; the point coordinates must be invertible.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars, "evaluation point length mismatch");
        let mut acc = Scalar::zero();
        for (e, a) in &self.terms {
            let mut m = a.clone();
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    m = &m * &point[i].pow(k);
                }
            }
            acc += &m;
        }
        acc
    }

    /// Substitute each variable by a (signed) monomial in new variables:
    /// t_i -> twist_i * t^{A column i}. `cols[i]` is the image exponent of t_i.
    pub fn substitute_monomials(&self, cols: &[MultiIndex], twists: &[Scalar]) -> Self {
        assert_eq!(cols.len(), self.vars);
        assert_eq!(twists.len(), self.vars);
        let mut out = LaurentPoly::zero(self.vars);
        for (e, a) in &self.terms {
            let mut k = vec![0i64; self.vars];
            let mut c = a.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    for (slot, col) in k.iter_mut().zip(&cols[i]) {
                        *slot += ei * col;
                    }
                    c = &c * &twists[i].pow(ei);
                }
            }
            out.add_term(&k, &c);
        }
        out
    }

    /// Largest |exponent| occurring on any axis.
    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|k| k.abs()))
            .max()
            .unwrap_or(0)
    }

    /// True when every term is the single exponent `exps`.
    pub fn is_homogeneous_at(&self, exps: &[i64]) -> bool {
        self.terms.keys().all(|e| e == exps)
    }
}

impl std::ops::Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, a) in &rhs.terms {
            out.add_term(e, a);
        }
        out
    }
}

impl std::ops::Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, a) in &rhs.terms {
            out.add_term(e, &-a);
        }
        out
    }
}

impl std::ops::Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.vars);
        for (e1, a1) in &self.terms {
            for (e2, a2) in &rhs.terms {
                let k: MultiIndex = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(&k, &(a1 * a2));
            }
        }
        out
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), -a);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, a) in &self.terms {
            let mut mono = String::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    mono.push_str(&format!("*t{}", i + 1));
                } else if k != 0 {
                    mono.push_str(&format!("*t{}^{}", i + 1, k));
                }
            }
            parts.push(format!("({a}){mono}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
