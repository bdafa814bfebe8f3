//! Mapping algebras k (x) Laurent on the r-torus and the fundamental
//! 2-cocycles of their central extensions.
//!
//! Cocycles are exact evaluators with finite defining data (kappa, eta,
//! (beta_a, beta_s) tables), not matrices: the algebra is infinite-dimensional
//! but finitely supported, so pointwise evaluation is always exact while
//! global linear algebra is not. Targets:
//!
//!   type I    kappa(xi1, d xi2)            in Omega^1 / exact   (reduced)
//!   type II   eta(xi1, xi2) pointwise      in functions
//!   type III  kappa(xi1,d xi2) - kappa(xi2,d xi1) - d eta(..)   in Omega^1
//!   pair      beta_a(f dg - g df) - beta_s(fg)                  scalar
//!
//! plus the curvature composition kappa(d xi1 ^ d xi2) into Omega^2 and the
//! circle-integration / evaluation reductions of types I and II.

use std::collections::BTreeMap;

use crate::ce::{ce_d, Cochain};
use crate::error::{Error, Result};
use crate::invariant::{cartan_map, BilinearFormSym};
use crate::laurent::{LaurentPoly, MultiIndex};
use crate::lie::{LieAlgebra, ModuleAction};
use crate::linalg::{add_vec, is_zero_vec, scale_vec, zero_vec};
use crate::scalar::Scalar;
use crate::torus::{reduce_oneform, ReducedOneForm, TorusForm, VectorField};

// ---------------------------------------------------------------------------
// Elements

/// A finitely supported element of k (x) Laurent: sum of x_alpha (x) t^alpha.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MappingElement {
    vars: usize,
    dim_k: usize,
    terms: BTreeMap<MultiIndex, Vec<Scalar>>,
}

impl MappingElement {
    pub fn zero(vars: usize, dim_k: usize) -> Self {
        MappingElement { vars, dim_k, terms: BTreeMap::new() }
    }

    /// x (x) t^alpha for a coordinate vector x.
    pub fn monomial(vars: usize, alpha: &[i64], x: Vec<Scalar>) -> Self {
        assert_eq!(alpha.len(), vars);
        let dim_k = x.len();
        let mut e = MappingElement::zero(vars, dim_k);
        if !is_zero_vec(&x) {
            e.terms.insert(alpha.to_vec(), x);
        }
        e
    }

    /// Basis element e_i (x) t^alpha.
    pub fn basis(vars: usize, alpha: &[i64], dim_k: usize, i: usize) -> Self {
        let mut x = zero_vec(dim_k);
        x[i] = Scalar::one();
        MappingElement::monomial(vars, alpha, x)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<Scalar>)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, alpha: &[i64], x: &[Scalar]) {
        assert_eq!(alpha.len(), self.vars);
        assert_eq!(x.len(), self.dim_k);
        if is_zero_vec(x) {
            return;
        }
        let slot = self.terms.entry(alpha.to_vec()).or_insert_with(|| zero_vec(self.dim_k));
        *slot = add_vec(slot, x);
        if is_zero_vec(slot) {
            self.terms.remove(alpha);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = MappingElement::zero(self.vars, self.dim_k);
        if c.is_zero() {
            return out;
        }
        for (a, x) in &self.terms {
            out.terms.insert(a.clone(), scale_vec(x, c));
        }
        out
    }

    /// Pointwise bracket [x (x) t^a, y (x) t^b] = [x,y] (x) t^(a+b).
    pub fn bracket(&self, other: &MappingElement, g: &LieAlgebra) -> MappingElement {
        assert_eq!(self.dim_k, g.dim());
        assert_eq!(other.dim_k, g.dim());
        let mut out = MappingElement::zero(self.vars, self.dim_k);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let v = g.bracket(x, y);
                if !is_zero_vec(&v) {
                    let k: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                    out.add_term(&k, &v);
                }
            }
        }
        out
    }

    /// Exterior derivative as a k-valued 1-form: d(x t^a) = x t^a sum a_i d_i.
    pub fn d(&self) -> TorusForm {
        let mut out = TorusForm::zero(self.vars, 1, self.dim_k);
        for (a, x) in &self.terms {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let v: Vec<LaurentPoly> = x
                    .iter()
                    .map(|c| LaurentPoly::monomial(self.vars, a, c * &Scalar::from_int(ai)))
                    .collect();
                out.add_to_component(&[i], &v);
            }
        }
        out
    }

    /// Coefficientwise action of a vector field: X.(x (x) f) = x (x) X.f.
    pub fn apply_field(&self, x_field: &VectorField) -> MappingElement {
        assert_eq!(x_field.vars(), self.vars);
        let mut out = MappingElement::zero(self.vars, self.dim_k);
        for (a, v) in &self.terms {
            let f = LaurentPoly::monomial(self.vars, a, Scalar::one());
            let xf = x_field.apply(&f);
            for (b, c) in xf.terms() {
                out.add_term(b, &scale_vec(v, c));
            }
        }
        out
    }

    /// Pointwise k-valued functions as Laurent coordinates.
    pub fn as_functions(&self) -> Vec<LaurentPoly> {
        let mut fs = vec![LaurentPoly::zero(self.vars); self.dim_k];
        for (a, x) in &self.terms {
            for (i, c) in x.iter().enumerate() {
                fs[i].add_term(a, c);
            }
        }
        fs
    }

    /// Evaluate at a torus point (invertible coordinates), landing in k.
    pub fn eval_at(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.as_functions().iter().map(|p| p.eval(point)).collect()
    }

    pub fn max_degree(&self) -> i64 {
        self.terms.keys().flat_map(|a| a.iter().map(|k| k.abs())).max().unwrap_or(0)
    }
}

impl std::ops::Add<&MappingElement> for &MappingElement {
    type Output = MappingElement;
    fn add(self, rhs: &MappingElement) -> MappingElement {
        assert_eq!((self.vars, self.dim_k), (rhs.vars, rhs.dim_k));
        let mut out = self.clone();
        for (a, x) in &rhs.terms {
            out.add_term(a, x);
        }
        out
    }
}

impl std::ops::Sub<&MappingElement> for &MappingElement {
    type Output = MappingElement;
    fn sub(self, rhs: &MappingElement) -> MappingElement {
        self + &rhs.scale(&Scalar::from_int(-1))
    }
}

// ---------------------------------------------------------------------------
// Cocycle values

/// Value of a 2-cocycle evaluation; the variant is fixed per cocycle kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CocycleValue {
    Scalar(Scalar),
    /// Finite-dimensional module vector (reductions of types I and II).
    Vector(Vec<Scalar>),
    /// V-valued function, one Laurent polynomial per module coordinate.
    Function(Vec<LaurentPoly>),
    /// Plain differential form (types III and curvature).
    Form(TorusForm),
    /// Class in Omega^1 modulo exact forms (type I).
    Reduced(ReducedOneForm),
}

impl CocycleValue {
    pub fn is_zero(&self) -> bool {
        match self {
            CocycleValue::Scalar(s) => s.is_zero(),
            CocycleValue::Vector(v) => is_zero_vec(v),
            CocycleValue::Function(f) => f.iter().all(|p| p.is_zero()),
            CocycleValue::Form(f) => f.is_zero(),
            CocycleValue::Reduced(f) => f.is_zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        match self {
            CocycleValue::Scalar(s) => CocycleValue::Scalar(s * c),
            CocycleValue::Vector(v) => CocycleValue::Vector(scale_vec(v, c)),
            CocycleValue::Function(f) => {
                CocycleValue::Function(f.iter().map(|p| p.scale(c)).collect())
            }
            CocycleValue::Form(f) => CocycleValue::Form(f.scale(c)),
            CocycleValue::Reduced(f) => CocycleValue::Reduced(f.scale(c)),
        }
    }

    pub fn add(&self, other: &CocycleValue) -> CocycleValue {
        match (self, other) {
            (CocycleValue::Scalar(a), CocycleValue::Scalar(b)) => CocycleValue::Scalar(a + b),
            (CocycleValue::Vector(a), CocycleValue::Vector(b)) => {
                CocycleValue::Vector(add_vec(a, b))
            }
            (CocycleValue::Function(a), CocycleValue::Function(b)) => {
                assert_eq!(a.len(), b.len(), "function value shapes differ");
                CocycleValue::Function(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (CocycleValue::Form(a), CocycleValue::Form(b)) => CocycleValue::Form(a + b),
            (CocycleValue::Reduced(a), CocycleValue::Reduced(b)) => CocycleValue::Reduced(a + b),
            _ => panic!("mismatched cocycle value kinds"),
        }
    }

    pub fn sub(&self, other: &CocycleValue) -> CocycleValue {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Lie derivative of the value along a vector field. Finite-dimensional
    /// targets (scalars, vectors) are constant and give zero.
    pub fn lie_derive(&self, x: &VectorField) -> CocycleValue {
        match self {
            CocycleValue::Scalar(_) => CocycleValue::Scalar(Scalar::zero()),
            CocycleValue::Vector(v) => CocycleValue::Vector(zero_vec(v.len())),
            CocycleValue::Function(f) => {
                CocycleValue::Function(f.iter().map(|p| x.apply(p)).collect())
            }
            CocycleValue::Form(f) => CocycleValue::Form(f.lie_derive(x.comps())),
            CocycleValue::Reduced(f) => CocycleValue::Reduced(f.lie_derive(x.comps())),
        }
    }
}

// ---------------------------------------------------------------------------
// Cocycles

/// Key for a monomial 1-form t^alpha d_(axis) in a beta_a table (0-based axis).
pub type OneFormMonomial = (MultiIndex, usize);

#[derive(Clone, Debug)]
enum Kind {
    TypeI { kappa: BilinearFormSym },
    TypeII { eta: Cochain },
    TypeIIVar { table: BTreeMap<MultiIndex, Cochain>, dim_v: usize },
    TypeIII { kappa: BilinearFormSym, eta: Cochain },
    Pair { beta_a: BTreeMap<OneFormMonomial, BilinearFormSym>, beta_s: BTreeMap<MultiIndex, Cochain> },
    Curvature { kappa: BilinearFormSym },
    Residue { kappa: BilinearFormSym, axis: usize },
    EvalAt { eta: Cochain, point: Vec<Scalar> },
}

/// An exact 2-cocycle evaluator on the mapping algebra, defined by finite
/// data. Alternation holds by construction; closedness is what the identity
/// tests and window checks verify.
#[derive(Clone, Debug)]
pub struct Cocycle2 {
    vars: usize,
    kind: Kind,
}

fn check_invariant(g: &LieAlgebra, kappa: &BilinearFormSym) -> Result<()> {
    let rho = ModuleAction::trivial(g, kappa.dim_v());
    kappa.require_invariant(g, &rho)
}

fn check_cocycle(g: &LieAlgebra, eta: &Cochain) -> Result<()> {
    let rho = ModuleAction::trivial(g, eta.dim_v());
    let d = ce_d(g, &rho, eta);
    if !d.is_zero() {
        let (t, _) = d.entries().next().unwrap();
        return Err(Error::NotACocycle(t[0], t[1], t[2]));
    }
    Ok(())
}

impl Cocycle2 {
    /// Type I: omega_kappa(xi1, xi2) = [kappa(xi1, d xi2)] in reduced 1-forms.
    pub fn type1(g: &LieAlgebra, vars: usize, kappa: BilinearFormSym) -> Result<Self> {
        check_invariant(g, &kappa)?;
        Ok(Cocycle2 { vars, kind: Kind::TypeI { kappa } })
    }

    /// Type II: omega_eta(xi1, xi2) = eta(xi1, xi2) pointwise, eta in Z^2(k,V).
    pub fn type2(g: &LieAlgebra, vars: usize, eta: Cochain) -> Result<Self> {
        check_cocycle(g, &eta)?;
        Ok(Cocycle2 { vars, kind: Kind::TypeII { eta } })
    }

    /// Variable type II: a finite table of monomial coefficients, each value
    /// a 2-cocycle of k.
    pub fn type2_variable(
        g: &LieAlgebra,
        vars: usize,
        table: BTreeMap<MultiIndex, Cochain>,
    ) -> Result<Self> {
        let mut dim_v = 1;
        for eta in table.values() {
            check_cocycle(g, eta)?;
            dim_v = eta.dim_v();
        }
        Ok(Cocycle2 { vars, kind: Kind::TypeIIVar { table, dim_v } })
    }

    /// Type III: needs d_k(eta) = Gamma(kappa). When `eta` is None it is
    /// produced by the exactness solve; KappaNotExact if none exists.
    pub fn type3(
        g: &LieAlgebra,
        vars: usize,
        kappa: BilinearFormSym,
        eta: Option<Cochain>,
    ) -> Result<Self> {
        check_invariant(g, &kappa)?;
        let gamma = cartan_map(g, &kappa)?;
        let eta = match eta {
            Some(eta) => {
                let rho = ModuleAction::trivial(g, kappa.dim_v());
                if ce_d(g, &rho, &eta) != gamma {
                    return Err(Error::KappaNotExact);
                }
                eta
            }
            None => match crate::invariant::cartan_exactness(g, &kappa)? {
                crate::ce::CoboundaryOutcome::Coboundary(eta) => eta,
                crate::ce::CoboundaryOutcome::NotCoboundary { .. } => {
                    return Err(Error::KappaNotExact)
                }
            },
        };
        Ok(Cocycle2 { vars, kind: Kind::TypeIII { kappa, eta } })
    }

    /// Scalar pair cocycle from (beta_a, beta_s) tables, validating the
    /// coupling Gamma(beta_a(df)) = d_k(beta_s(f)) on every touched monomial.
    pub fn pair(
        g: &LieAlgebra,
        vars: usize,
        beta_a: BTreeMap<OneFormMonomial, BilinearFormSym>,
        beta_s: BTreeMap<MultiIndex, Cochain>,
    ) -> Result<Self> {
        let c = Cocycle2::pair_unchecked(vars, beta_a, beta_s);
        if let Some(monomial) = c.coupling_defect(g) {
            return Err(Error::CouplingViolated(monomial));
        }
        Ok(c)
    }

    /// Pair tables without the coupling check; closedness may fail, which is
    /// exactly what the negative tests witness.
    pub fn pair_unchecked(
        vars: usize,
        beta_a: BTreeMap<OneFormMonomial, BilinearFormSym>,
        beta_s: BTreeMap<MultiIndex, Cochain>,
    ) -> Self {
        for kappa in beta_a.values() {
            assert_eq!(kappa.dim_v(), 1, "pair cocycles are scalar-valued");
        }
        for eta in beta_s.values() {
            assert_eq!(eta.dim_v(), 1, "pair cocycles are scalar-valued");
        }
        Cocycle2 { vars, kind: Kind::Pair { beta_a, beta_s } }
    }

    /// Pair tables whose values kill the derived subalgebra: these are the
    /// cocycles pulled back from the abelianization (they vanish on g' x g),
    /// and the coupling holds for free.
    pub fn pair_abelianized(
        g: &LieAlgebra,
        vars: usize,
        beta_a: BTreeMap<OneFormMonomial, BilinearFormSym>,
        beta_s: BTreeMap<MultiIndex, Cochain>,
    ) -> Result<Self> {
        let derived = g.derived_subalgebra();
        let kills = |evals: &dyn Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>| -> bool {
            derived.iter().all(|d| {
                (0..g.dim()).all(|j| is_zero_vec(&evals(d, &g.basis_vec(j))))
            })
        };
        for kappa in beta_a.values() {
            let f = |x: &[Scalar], y: &[Scalar]| kappa.eval(x, y);
            if !kills(&f) {
                return Err(Error::Invalid(
                    "beta_a value does not vanish on the derived subalgebra".into(),
                ));
            }
        }
        for eta in beta_s.values() {
            let f = |x: &[Scalar], y: &[Scalar]| eta.eval_vectors(&[x, y]);
            if !kills(&f) {
                return Err(Error::Invalid(
                    "beta_s value does not vanish on the derived subalgebra".into(),
                ));
            }
        }
        let c = Cocycle2::pair_unchecked(vars, beta_a, beta_s);
        debug_assert!(c.coupling_defect(g).is_none());
        Ok(c)
    }

    /// Coboundary test for a variable type-II cocycle: the cocycle is a
    /// coboundary exactly when every table value is a coboundary of k, and
    /// then the witness assembles the per-monomial potentials pointwise.
    /// Returns the witness table on success, the offending monomial with its
    /// row certificate otherwise.
    pub fn type2_variable_coboundary(
        &self,
        g: &LieAlgebra,
    ) -> Result<std::result::Result<BTreeMap<MultiIndex, Cochain>, (MultiIndex, Vec<Scalar>)>> {
        let Kind::TypeIIVar { table, .. } = &self.kind else {
            return Err(Error::IncompatibleModules(
                "coboundary table test applies to variable type II".into(),
            ));
        };
        let mut witness = BTreeMap::new();
        for (gamma, eta) in table {
            let rho = ModuleAction::trivial(g, eta.dim_v());
            match crate::ce::coboundary_solve(g, &rho, eta)? {
                crate::ce::CoboundaryOutcome::Coboundary(beta) => {
                    witness.insert(gamma.clone(), beta);
                }
                crate::ce::CoboundaryOutcome::NotCoboundary { certificate } => {
                    return Ok(Err((gamma.clone(), certificate)));
                }
            }
        }
        Ok(Ok(witness))
    }

    /// Curvature composition (d o omega_kappa)(xi1, xi2) = kappa(d xi1 ^ d xi2).
    pub fn curvature(g: &LieAlgebra, vars: usize, kappa: BilinearFormSym) -> Result<Self> {
        check_invariant(g, &kappa)?;
        Ok(Cocycle2 { vars, kind: Kind::Curvature { kappa } })
    }

    /// Compose a type-I cocycle with integration over the given circle
    /// (1-based axis), producing a finite-dimensional-valued cocycle.
    pub fn residue(&self, axis: usize) -> Result<Self> {
        match &self.kind {
            Kind::TypeI { kappa } => {
                if axis == 0 || axis > self.vars {
                    return Err(Error::AxisOutOfRange { axis, vars: self.vars });
                }
                Ok(Cocycle2 { vars: self.vars, kind: Kind::Residue { kappa: kappa.clone(), axis } })
            }
            _ => Err(Error::IncompatibleModules("residue composes with type I only".into())),
        }
    }

    /// Compose a type-II cocycle with evaluation at a torus point given by
    /// exponents of a root of unity (zeta^e per axis).
    pub fn eval_reduction(&self, point: Vec<Scalar>) -> Result<Self> {
        match &self.kind {
            Kind::TypeII { eta } => {
                if point.len() != self.vars {
                    return Err(Error::DimensionMismatch { expected: self.vars, got: point.len() });
                }
                Ok(Cocycle2 { vars: self.vars, kind: Kind::EvalAt { eta: eta.clone(), point } })
            }
            _ => Err(Error::IncompatibleModules("evaluation composes with type II only".into())),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// The zero value of this cocycle's target, for defect accumulators.
    pub fn zero_value(&self) -> CocycleValue {
        match &self.kind {
            Kind::TypeI { kappa } => {
                CocycleValue::Reduced(ReducedOneForm::zero(self.vars, kappa.dim_v()))
            }
            Kind::TypeII { eta } => {
                CocycleValue::Function(vec![LaurentPoly::zero(self.vars); eta.dim_v()])
            }
            Kind::TypeIIVar { dim_v, .. } => {
                CocycleValue::Function(vec![LaurentPoly::zero(self.vars); *dim_v])
            }
            Kind::TypeIII { kappa, .. } => {
                CocycleValue::Form(TorusForm::zero(self.vars, 1, kappa.dim_v()))
            }
            Kind::Pair { .. } => CocycleValue::Scalar(Scalar::zero()),
            Kind::Curvature { kappa } => {
                CocycleValue::Form(TorusForm::zero(self.vars, 2, kappa.dim_v()))
            }
            Kind::Residue { kappa, .. } => CocycleValue::Vector(zero_vec(kappa.dim_v())),
            Kind::EvalAt { eta, .. } => CocycleValue::Vector(zero_vec(eta.dim_v())),
        }
    }

    /// kappa(xi1, d xi2) as a V-valued 1-form.
    fn kappa_d(
        &self,
        kappa: &BilinearFormSym,
        xi1: &MappingElement,
        xi2: &MappingElement,
    ) -> TorusForm {
        let mut out = TorusForm::zero(self.vars, 1, kappa.dim_v());
        for (a, x) in xi1.terms() {
            for (b, y) in xi2.terms() {
                let k = kappa.eval(x, y);
                if is_zero_vec(&k) {
                    continue;
                }
                let deg: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                for (i, &bi) in b.iter().enumerate() {
                    if bi == 0 {
                        continue;
                    }
                    let coeff = Scalar::from_int(bi);
                    let v: Vec<LaurentPoly> = k
                        .iter()
                        .map(|c| LaurentPoly::monomial(self.vars, &deg, c * &coeff))
                        .collect();
                    out.add_to_component(&[i], &v);
                }
            }
        }
        out
    }

    /// eta(xi1, xi2) as a V-valued function.
    fn eta_pointwise(&self, eta: &Cochain, xi1: &MappingElement, xi2: &MappingElement) -> Vec<LaurentPoly> {
        let mut fs = vec![LaurentPoly::zero(self.vars); eta.dim_v()];
        for (a, x) in xi1.terms() {
            for (b, y) in xi2.terms() {
                let v = eta.eval_vectors(&[x, y]);
                if is_zero_vec(&v) {
                    continue;
                }
                let deg: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                for (i, c) in v.iter().enumerate() {
                    fs[i].add_term(&deg, c);
                }
            }
        }
        fs
    }

    pub fn eval(&self, g: &LieAlgebra, xi1: &MappingElement, xi2: &MappingElement) -> CocycleValue {
        assert_eq!(xi1.vars(), self.vars);
        assert_eq!(xi2.vars(), self.vars);
        assert_eq!(xi1.dim_k(), g.dim(), "elements must live over the declared algebra");
        match &self.kind {
            Kind::TypeI { kappa } => {
                CocycleValue::Reduced(reduce_oneform(&self.kappa_d(kappa, xi1, xi2)))
            }
            Kind::TypeII { eta } => CocycleValue::Function(self.eta_pointwise(eta, xi1, xi2)),
            Kind::TypeIIVar { table, dim_v } => {
                let mut fs = vec![LaurentPoly::zero(self.vars); *dim_v];
                for (gamma, eta) in table {
                    let vals = self.eta_pointwise(eta, xi1, xi2);
                    for (slot, p) in fs.iter_mut().zip(&vals) {
                        *slot = &*slot + &p.mul_monomial(gamma, &Scalar::one());
                    }
                }
                CocycleValue::Function(fs)
            }
            Kind::TypeIII { kappa, eta } => {
                let a = self.kappa_d(kappa, xi1, xi2);
                let b = self.kappa_d(kappa, xi2, xi1);
                let f = TorusForm::function(self.vars, self.eta_pointwise(eta, xi1, xi2));
                CocycleValue::Form(&(&a - &b) - &f.derham_d())
            }
            Kind::Pair { beta_a, beta_s } => {
                let mut acc = Scalar::zero();
                for (a, x) in xi1.terms() {
                    for (b, y) in xi2.terms() {
                        let deg: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                        // beta_a(f dg - g df) with f = t^a, g = t^b:
                        // sum_i (b_i - a_i) beta_a[(a+b, i)](x, y)
                        for i in 0..self.vars {
                            let c = b[i] - a[i];
                            if c == 0 {
                                continue;
                            }
                            if let Some(kappa) = beta_a.get(&(deg.clone(), i)) {
                                let v = kappa.eval(x, y);
                                acc += &(&Scalar::from_int(c) * &v[0]);
                            }
                        }
                        if let Some(eta) = beta_s.get(&deg) {
                            let v = eta.eval_vectors(&[x, y]);
                            acc -= &v[0];
                        }
                    }
                }
                CocycleValue::Scalar(acc)
            }
            Kind::Curvature { kappa } => {
                let d1 = xi1.d();
                let d2 = xi2.d();
                let pairing = kappa.as_pairing();
                CocycleValue::Form(d1.wedge(&d2, &pairing).expect("shapes agree"))
            }
            Kind::Residue { kappa, axis } => {
                let form = reduce_oneform(&self.kappa_d(kappa, xi1, xi2));
                CocycleValue::Vector(form.cycle_integral(*axis).expect("axis validated"))
            }
            Kind::EvalAt { eta, point } => {
                let fs = self.eta_pointwise(eta, xi1, xi2);
                CocycleValue::Vector(fs.iter().map(|p| p.eval(point)).collect())
            }
        }
    }

    /// First monomial where Gamma(beta_a(d t^gamma)) != d_k(beta_s(t^gamma)),
    /// if any (pair cocycles only; other kinds are coupled by construction).
    pub fn coupling_defect(&self, g: &LieAlgebra) -> Option<MultiIndex> {
        let Kind::Pair { beta_a, beta_s } = &self.kind else { return None };
        let mut touched: Vec<MultiIndex> = beta_s.keys().cloned().collect();
        for (gamma, _) in beta_a.keys() {
            if !touched.contains(gamma) {
                touched.push(gamma.clone());
            }
        }
        touched.sort();
        touched.dedup();
        let rho = ModuleAction::trivial(g, 1);
        for gamma in touched {
            // beta_a(d t^gamma) = sum_i gamma_i beta_a[(gamma, i)]
            let mut kappa_eff = BilinearFormSym::zero(g.dim(), 1);
            for (i, &gi) in gamma.iter().enumerate() {
                if gi == 0 {
                    continue;
                }
                if let Some(k) = beta_a.get(&(gamma.clone(), i)) {
                    kappa_eff = kappa_eff.add(&k.scale(&Scalar::from_int(gi)));
                }
            }
            let lhs = match cartan_map(g, &kappa_eff) {
                Ok(c) => c,
                Err(_) => return Some(gamma),
            };
            let rhs = match beta_s.get(&gamma) {
                Some(eta) => ce_d(g, &rho, eta),
                None => Cochain::zero(3, g.dim(), 1),
            };
            if lhs != rhs {
                return Some(gamma);
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// Closedness, extensions, and the semidirect sum with vector fields

/// d omega(xi1, xi2, xi3) for a trivially-acted target:
/// -omega([xi1,xi2], xi3) + omega([xi1,xi3], xi2) - omega([xi2,xi3], xi1).
pub fn closure_defect(
    g: &LieAlgebra,
    omega: &Cocycle2,
    xi1: &MappingElement,
    xi2: &MappingElement,
    xi3: &MappingElement,
) -> CocycleValue {
    let b12 = xi1.bracket(xi2, g);
    let b13 = xi1.bracket(xi3, g);
    let b23 = xi2.bracket(xi3, g);
    let t1 = omega.eval(g, &b12, xi3);
    let t2 = omega.eval(g, &b13, xi2);
    let t3 = omega.eval(g, &b23, xi1);
    t2.sub(&t1).sub(&t3)
}

/// Alternation defect omega(xi1, xi2) + omega(xi2, xi1).
pub fn alternation_defect(
    g: &LieAlgebra,
    omega: &Cocycle2,
    xi1: &MappingElement,
    xi2: &MappingElement,
) -> CocycleValue {
    omega.eval(g, xi1, xi2).add(&omega.eval(g, xi2, xi1))
}

/// Search basis triples (t^gamma e_i, e_j, e_k) for a witnessed closure
/// failure of a (possibly uncoupled) pair cocycle.
pub fn find_closure_violation(
    g: &LieAlgebra,
    omega: &Cocycle2,
    monomials: &[MultiIndex],
) -> Option<(MappingElement, MappingElement, MappingElement)> {
    let n = g.dim();
    let zero = vec![0i64; omega.vars()];
    for gamma in monomials {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = MappingElement::basis(omega.vars(), gamma, n, i);
                    let b = MappingElement::basis(omega.vars(), &zero, n, j);
                    let c = MappingElement::basis(omega.vars(), &zero, n, k);
                    if !closure_defect(g, omega, &a, &b, &c).is_zero() {
                        return Some((a, b, c));
                    }
                }
            }
        }
    }
    None
}

/// Bracket of the central extension z +_omega g on pairs (value, element).
pub fn extension_bracket(
    g: &LieAlgebra,
    omega: &Cocycle2,
    a: &(CocycleValue, MappingElement),
    b: &(CocycleValue, MappingElement),
) -> (CocycleValue, MappingElement) {
    (omega.eval(g, &a.1, &b.1), a.1.bracket(&b.1, g))
}

/// z-component of the Jacobi cyclic sum in the extension, computed through
/// nested extension brackets. This equals -(d omega)(xi1, xi2, xi3), so the
/// extension satisfies Jacobi on a window exactly when omega is closed there.
pub fn extension_jacobi_defect(
    g: &LieAlgebra,
    omega: &Cocycle2,
    xi1: &MappingElement,
    xi2: &MappingElement,
    xi3: &MappingElement,
) -> CocycleValue {
    let z = omega.zero_value();
    let lift = |xi: &MappingElement| (z.clone(), xi.clone());
    let j1 = extension_bracket(g, omega, &extension_bracket(g, omega, &lift(xi1), &lift(xi2)), &lift(xi3));
    let j2 = extension_bracket(g, omega, &extension_bracket(g, omega, &lift(xi2), &lift(xi3)), &lift(xi1));
    let j3 = extension_bracket(g, omega, &extension_bracket(g, omega, &lift(xi3), &lift(xi1)), &lift(xi2));
    let xi_sum = &(&j1.1 + &j2.1) + &j3.1;
    assert!(xi_sum.is_zero(), "underlying algebra fails Jacobi");
    j1.0.add(&j2.0).add(&j3.0)
}

/// Verify the extension-of-scalars picture for type II: the central extension
/// by omega_eta is k^ (x) Laurent for k^ = V +_eta k, through the basis map
/// v t^a -> (v t^a, 0), x t^a -> (0, x t^a). Checked on all window pairs.
pub fn type2_scalars_isomorphism_check(
    g: &LieAlgebra,
    eta: &Cochain,
    vars: usize,
    window: i64,
) -> Result<bool> {
    let omega = Cocycle2::type2(g, vars, eta.clone())?;
    let dv = eta.dim_v();
    let n = g.dim();
    // khat = V +_eta k with V first.
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = g.bracket_basis(i, j);
            let e = eta.value(&[i, j]);
            let mut v = zero_vec(dv + n);
            v[..dv].clone_from_slice(&e);
            for (k, c) in b.iter().enumerate() {
                v[dv + k] = c.clone();
            }
            entries.push(((dv + i, dv + j), v));
        }
    }
    let names = (0..dv + n).map(|i| format!("b{i}")).collect();
    let khat = LieAlgebra::from_structure(names, entries)?;
    // Compare brackets through the isomorphism on basis monomial pairs.
    let degrees = window_degrees(vars, window);
    for a in &degrees {
        for b in &degrees {
            for i in 0..n {
                for j in 0..n {
                    // [x_i t^a, x_j t^b] upstairs:
                    let mut up = zero_vec(dv + n);
                    {
                        let mut e = zero_vec(dv + n);
                        e[dv + i] = Scalar::one();
                        let mut f = zero_vec(dv + n);
                        f[dv + j] = Scalar::one();
                        up = add_vec(&up, &khat.bracket(&e, &f));
                    }
                    // split: V part becomes a function, k part an element
                    let sum: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                    let up_fun: Vec<LaurentPoly> = (0..dv)
                        .map(|c| LaurentPoly::monomial(vars, &sum, up[c].clone()))
                        .collect();
                    let up_xi = MappingElement::monomial(vars, &sum, up[dv..].to_vec());
                    // downstairs: extension bracket
                    let xi1 = MappingElement::basis(vars, a, n, i);
                    let xi2 = MappingElement::basis(vars, b, n, j);
                    let (zval, xi) = extension_bracket(
                        g,
                        &omega,
                        &(omega.zero_value(), xi1),
                        &(omega.zero_value(), xi2),
                    );
                    if xi != up_xi {
                        return Ok(false);
                    }
                    match zval {
                        CocycleValue::Function(fs) => {
                            if fs != up_fun {
                                return Ok(false);
                            }
                        }
                        _ => unreachable!("type II values are functions"),
                    }
                }
            }
        }
    }
    Ok(true)
}

/// All exponent vectors in the box [-window, window]^vars.
pub fn window_degrees(vars: usize, window: i64) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        let mut next = Vec::new();
        for stem in &out {
            for k in -window..=window {
                let mut s = stem.clone();
                s.push(k);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Element of the semidirect sum g x| V(torus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiElement {
    pub xi: MappingElement,
    pub field: VectorField,
}

impl SemiElement {
    pub fn gauge(xi: MappingElement) -> Self {
        let vars = xi.vars();
        SemiElement { xi, field: VectorField::zero(vars) }
    }

    pub fn lifted(field: VectorField, dim_k: usize) -> Self {
        let vars = field.vars();
        SemiElement { xi: MappingElement::zero(vars, dim_k), field }
    }
}

/// [(xi1, X1), (xi2, X2)] = (X1.xi2 - X2.xi1 + [xi1, xi2], [X1, X2]).
pub fn semidirect_bracket(g: &LieAlgebra, a: &SemiElement, b: &SemiElement) -> SemiElement {
    let xi = &(&b.xi.apply_field(&a.field) - &a.xi.apply_field(&b.field))
        + &a.xi.bracket(&b.xi, g);
    SemiElement { xi, field: a.field.bracket(&b.field) }
}

/// L_X(omega(xi1, xi2)) = omega(X.xi1, xi2) + omega(xi1, X.xi2), exactly.
pub fn invariance_check(
    g: &LieAlgebra,
    omega: &Cocycle2,
    x: &VectorField,
    xi1: &MappingElement,
    xi2: &MappingElement,
) -> bool {
    let lhs = omega.eval(g, xi1, xi2).lie_derive(x);
    let rhs = omega
        .eval(g, &xi1.apply_field(x), xi2)
        .add(&omega.eval(g, xi1, &xi2.apply_field(x)));
    lhs == rhs
}

/// The extension of omega to the semidirect sum,
/// omega~((xi1, X1), (xi2, X2)) = omega(xi1, xi2).
pub fn extended_eval(
    g: &LieAlgebra,
    omega: &Cocycle2,
    a: &SemiElement,
    b: &SemiElement,
) -> CocycleValue {
    omega.eval(g, &a.xi, &b.xi)
}

/// Closedness defect of the extended cocycle on the semidirect sum, where the
/// vector-field part acts on values by Lie derivative:
/// (d omega~)(a1,a2,a3) = sum_i (-1)^i L_{X_i} omega~(.. a^_i ..)
///                      + sum_{i<j} (-1)^(i+j) omega~([a_i,a_j], ..).
pub fn extended_closure_defect(
    g: &LieAlgebra,
    omega: &Cocycle2,
    a1: &SemiElement,
    a2: &SemiElement,
    a3: &SemiElement,
) -> CocycleValue {
    let act1 = extended_eval(g, omega, a2, a3).lie_derive(&a1.field);
    let act2 = extended_eval(g, omega, a1, a3).lie_derive(&a2.field);
    let act3 = extended_eval(g, omega, a1, a2).lie_derive(&a3.field);
    let b12 = semidirect_bracket(g, a1, a2);
    let b13 = semidirect_bracket(g, a1, a3);
    let b23 = semidirect_bracket(g, a2, a3);
    let t12 = extended_eval(g, omega, &b12, a3);
    let t13 = extended_eval(g, omega, &b13, a2);
    let t23 = extended_eval(g, omega, &b23, a1);
    act1.sub(&act2).add(&act3).sub(&t12).add(&t13).sub(&t23)
}
