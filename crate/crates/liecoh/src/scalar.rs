//! Exact scalars: rationals and elements of cyclotomic fields Q(zeta_m).
//!
//! A [`Scalar`] is an element of Q[x]/(Phi_m(x)) stored as a dense coefficient
//! vector of length phi(m) over `BigRational`. Order 1 is plain Q. Rationals
//! embed into every Q(zeta_m), and a scalar whose higher coefficients vanish
//! is demoted back to order 1, so equality across the embedding is structural.
//!
//! Mixing two distinct orders > 1 in one arithmetic operation is a programming
//! error and panics; every computation in this crate fixes a single field.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Field description: Q itself or a cyclotomic extension Q(zeta_m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Cyclotomic,
}

/// Serializable field specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Order m of the root of unity; ignored (treated as 1) for `Rational`.
    pub order: u32,
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec { kind: FieldKind::Rational, order: 1 }
    }

    pub fn cyclotomic(order: u32) -> Self {
        FieldSpec { kind: FieldKind::Cyclotomic, order }
    }
}

/// Arithmetic context for a fixed field.
///
/// [`Scalar`] values are self-contained; `Field` exists to validate a spec
/// once and to hand out the distinguished elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    order: u32,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if spec.order == 0 {
            return Err(Error::InvalidFieldOrder);
        }
        let order = match spec.kind {
            FieldKind::Rational => 1,
            FieldKind::Cyclotomic => spec.order,
        };
        // Force the reduction table now so bad orders fail here.
        let _ = table(order);
        Ok(Field { order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    /// The chosen primitive m-th root of unity (the class of x).
    pub fn zeta(&self) -> Scalar {
        Scalar::zeta(self.order)
    }

    /// Degree phi(m) of the extension over Q.
    pub fn degree(&self) -> usize {
        table(self.order).phi
    }
}

struct CycTable {
    phi: usize,
    /// Row k holds the coefficients of x^(phi+k) mod Phi_m, k = 0..phi-1.
    reduction: Vec<Vec<BigRational>>,
    /// Monic Phi_m as integer coefficients, low to high, length phi+1.
    minpoly: Vec<BigInt>,
}

static TABLES: Lazy<Mutex<BTreeMap<u32, Arc<CycTable>>>> =
    Lazy::new(|| Mutex::new(BTreeMap::new()));

fn table(order: u32) -> Arc<CycTable> {
    assert!(order >= 1, "field order must be >= 1");
    let mut guard = TABLES.lock().unwrap();
    if let Some(t) = guard.get(&order) {
        return t.clone();
    }
    let minpoly = cyclotomic_poly(order as usize);
    let phi = minpoly.len() - 1;
    // x^(phi+k) mod Phi: iterate x^phi = -(lower part of Phi), then multiply by x.
    let mut reduction: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
    let mut cur: Vec<BigRational> =
        minpoly[..phi].iter().map(|c| -BigRational::from(c.clone())).collect();
    reduction.push(cur.clone());
    for _ in 1..phi {
        // multiply by x: shift, then fold the overflow through row 0.
        let carry = cur[phi - 1].clone();
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigRational::zero();
        if !carry.is_zero() {
            for (i, r) in reduction[0].iter().enumerate() {
                cur[i] += &carry * r;
            }
        }
        reduction.push(cur.clone());
    }
    let t = Arc::new(CycTable { phi, reduction, minpoly });
    guard.insert(order, t.clone());
    t
}

/// Monic integer coefficients of Phi_n, computed by dividing x^n - 1 by the
/// cyclotomic polynomials of all proper divisors.
fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (divisor monic).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// An exact field element: rational (order 1) or cyclotomic of order m.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    order: u32,
    /// Dense coefficients in the power basis 1, x, ..., x^(phi(m)-1).
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Scalar { order: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { order: 1, coeffs: vec![BigRational::from(BigInt::from(n))] }
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            order: 1,
            coeffs: vec![BigRational::new(BigInt::from(num), BigInt::from(den))],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar { order: 1, coeffs: vec![q] }
    }

    /// The primitive m-th root of unity zeta_m.
    pub fn zeta(order: u32) -> Self {
        let t = table(order);
        if t.phi == 1 {
            // zeta is rational: 1 for m = 1, -1 for m = 2.
            let v = -BigRational::from(t.minpoly[0].clone());
            return Scalar { order: 1, coeffs: vec![v] };
        }
        let mut coeffs = vec![BigRational::zero(); t.phi];
        coeffs[1] = BigRational::one();
        Scalar { order, coeffs }
    }

    /// Build from explicit coefficients over the power basis of Q(zeta_m).
    pub fn from_coeffs(order: u32, mut coeffs: Vec<BigRational>) -> Result<Self> {
        let t = table(order);
        if coeffs.len() > t.phi {
            return Err(Error::DimensionMismatch { expected: t.phi, got: coeffs.len() });
        }
        coeffs.resize(t.phi, BigRational::zero());
        let mut s = Scalar { order, coeffs };
        s.normalize();
        Ok(s)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    /// Rational part if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.order == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.order > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.coeffs.truncate(1);
            self.order = 1;
        }
    }

    fn promoted(&self, order: u32) -> Vec<BigRational> {
        let phi = table(order).phi;
        let mut v = self.coeffs.clone();
        v.resize(phi, BigRational::zero());
        v
    }

    fn join_order(&self, other: &Scalar) -> u32 {
        match (self.order, other.order) {
            (1, o) | (o, 1) => o,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed cyclotomic orders {a} and {b} in one operation"),
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        if self.order == 1 {
            return Scalar { order: 1, coeffs: vec![self.coeffs[0].recip()] };
        }
        let t = table(self.order);
        let minpoly: Vec<BigRational> =
            t.minpoly.iter().map(|c| BigRational::from(c.clone())).collect();
        let inv = poly_modular_inverse(&self.coeffs, &minpoly);
        let mut s = Scalar { order: self.order, coeffs: inv };
        s.normalize();
        s
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e == 0 {
            return Scalar::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        acc
    }

    /// Order of this element as a root of unity, if it is one of order <= cap.
    pub fn root_of_unity_order(&self, cap: u32) -> Option<u32> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_one() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    /// Size proxy used for pivot selection: total bit length of all numerators
    /// and denominators.
    pub(crate) fn complexity(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    }
}

/// Inverse of `a` modulo the monic polynomial `m` over Q, via extended Euclid.
fn poly_modular_inverse(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    type P = Vec<BigRational>;
    fn deg(p: &P) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn rem_quo(num: &P, den: &P) -> (P, P) {
        let dd = deg(den).expect("division by zero polynomial");
        let lead = den[dd].clone();
        let mut rem = num.clone();
        let nd = match deg(&rem) {
            Some(d) if d >= dd => d,
            _ => return (vec![BigRational::zero()], rem),
        };
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                quot[k] = c.clone();
                for i in 0..=dd {
                    let t = &c * &den[i];
                    rem[k + i] -= t;
                }
            }
        }
        (quot, rem)
    }
    fn mul(a: &P, b: &P) -> P {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }
    fn sub(a: &P, b: &P) -> P {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in out.iter_mut().enumerate() {
            if i < a.len() {
                *c += &a[i];
            }
            if i < b.len() {
                *c -= &b[i];
            }
        }
        out
    }

    // Invariants: r0 = s0*a + t0*m, r1 = s1*a + t1*m.
    let mut r0: P = m.to_vec();
    let mut r1: P = a.to_vec();
    let mut s0: P = vec![BigRational::zero()];
    let mut s1: P = vec![BigRational::one()];
    while deg(&r1).is_some() {
        let (q, r) = rem_quo(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        if deg(&r0) == Some(0) {
            break;
        }
    }
    let d = deg(&r0).expect("element not invertible");
    assert_eq!(d, 0, "gcd with the minimal polynomial is not constant");
    let c = r0[0].recip();
    let mut out: P = s0.iter().map(|x| x * &c).collect();
    // Reduce mod m to canonical length.
    let (_, rem) = rem_quo(&out, &m.to_vec());
    out = rem;
    out.resize(m.len() - 1, BigRational::zero());
    out
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::ops::Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let order = self.join_order(rhs);
        let mut coeffs = self.promoted(order);
        for (c, r) in coeffs.iter_mut().zip(rhs.promoted(order)) {
            *c += r;
        }
        let mut s = Scalar { order, coeffs };
        s.normalize();
        s
    }
}

impl std::ops::Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let order = self.join_order(rhs);
        let mut coeffs = self.promoted(order);
        for (c, r) in coeffs.iter_mut().zip(rhs.promoted(order)) {
            *c -= r;
        }
        let mut s = Scalar { order, coeffs };
        s.normalize();
        s
    }
}

impl std::ops::Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let order = self.join_order(rhs);
        if order == 1 {
            return Scalar { order: 1, coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        let t = table(order);
        let a = self.promoted(order);
        let b = rhs.promoted(order);
        let mut prod = vec![BigRational::zero(); 2 * t.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut coeffs = prod[..t.phi].to_vec();
        for k in 0..t.phi - 1 {
            let c = &prod[t.phi + k];
            if !c.is_zero() {
                for (i, r) in t.reduction[k].iter().enumerate() {
                    coeffs[i] += c * r;
                }
            }
        }
        let mut s = Scalar { order, coeffs };
        s.normalize();
        s
    }
}

impl std::ops::Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn frac(q: &BigRational) -> String {
            if q.denom().is_one() {
                format!("{}", q.numer())
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        if self.order == 1 {
            return write!(f, "{}", frac(&self.coeffs[0]));
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = match k {
                0 => frac(c),
                1 => format!("{}*z{}", frac(c), self.order),
                _ => format!("{}*z{}^{}", frac(c), self.order, k),
            };
            parts.push(base);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_arithmetic() {
        let f = Field::new(FieldSpec::rational()).unwrap();
        let a = Scalar::from_fraction(2, 3);
        let b = Scalar::from_fraction(3, 5);
        assert_eq!(&a * &b, Scalar::from_fraction(2, 5));
        assert_eq!(&a / &b, Scalar::from_fraction(10, 9));
        assert_eq!(f.one() + f.zero(), Scalar::one());
    }

    #[test]
    fn order_zero_rejected() {
        assert_eq!(
            Field::new(FieldSpec::cyclotomic(0)).unwrap_err(),
            Error::InvalidFieldOrder
        );
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        let z = Scalar::zeta(4);
        assert_eq!(&z * &z, Scalar::from_int(-1));
        assert_eq!(z.pow(4), Scalar::one());
    }

    #[test]
    fn zeta3_power_sum_vanishes() {
        let z = Scalar::zeta(3);
        let s = Scalar::one() + &z + &z * &z;
        assert!(s.is_zero());
    }

    #[test]
    fn cyclotomic_inverse() {
        let z = Scalar::zeta(12);
        let a = Scalar::from_int(2) + &z + z.pow(3);
        assert_eq!(&a * &a.inv(), Scalar::one());
        assert_eq!(z.pow(-5), z.pow(7));
    }

    #[test]
    fn rational_demotion_is_canonical() {
        let z = Scalar::zeta(4);
        let s = &z * &z; // -1, demoted to order 1
        assert_eq!(s.order(), 1);
        assert_eq!(s, Scalar::from_int(-1));
    }

    #[test]
    fn phi_degrees() {
        for (m, phi) in [(1u32, 1usize), (2, 1), (3, 2), (4, 2), (6, 2), (5, 4), (12, 4)] {
            assert_eq!(Field::new(FieldSpec::cyclotomic(m)).unwrap().degree(), phi);
        }
    }

    #[test]
    fn root_of_unity_orders() {
        assert_eq!(Scalar::zeta(6).root_of_unity_order(12), Some(6));
        assert_eq!(Scalar::from_int(-1).root_of_unity_order(12), Some(2));
        assert_eq!(Scalar::from_int(2).root_of_unity_order(12), None);
    }
}
