//! Implementations of the CLI subcommands. Each returns the JSON result
//! payload; validation problems map to exit code 1, internal inconsistencies
//! (an invariant the engine itself guarantees failing to hold) to exit 2.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use liecoh::ce::{self, CoboundaryOutcome};
use liecoh::invariant::{
    cartan_exactness, cartan_map, invariant_sym_forms, killing_form, universal_form,
};
use liecoh::laurent::MultiIndex;
use liecoh::lie::{LieAlgebra, ModuleAction};
use liecoh::mapping::{closure_defect, window_degrees, Cocycle2, CocycleValue, MappingElement};
use liecoh::multiloop::{
    gauge_type1_on_multiloop, graded_centroid, klein_bottle_algebra, multiloop_build,
    ring_orbit_dims, EquivariantAlgebra,
};
use liecoh::torus::VectorField;
use liecoh::vfields::{
    psi, psibar1, psibar2, virasoro_cocycle, virasoro_linear_shift_witness,
    window_coboundary_cert, WindowStatus,
};

use crate::doc::{
    cochain_to_doc, field_doc_rational, matrix_to_doc, multiindex_key, scalars_to_doc,
    AlgebraDoc, DocError, FormDoc, ScalarDoc, TwistDoc,
};

/// Error with the exit code it maps to.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CmdError { code: 1, message: msg.into() }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CmdError { code: 2, message: msg.into() }
    }
}

impl From<DocError> for CmdError {
    fn from(e: DocError) -> Self {
        CmdError::validation(e.0)
    }
}

impl From<liecoh::Error> for CmdError {
    fn from(e: liecoh::Error) -> Self {
        CmdError::validation(e.to_string())
    }
}

type CmdResult = Result<Value, CmdError>;

fn parse_algebra(json: &str) -> Result<(AlgebraDoc, LieAlgebra), CmdError> {
    let doc: AlgebraDoc =
        serde_json::from_str(json).map_err(|e| CmdError::validation(format!("parse error: {e}")))?;
    let g = doc.to_algebra()?;
    Ok((doc, g))
}

// ---------------------------------------------------------------------------

/// `validate`: parse, validate, and re-emit the canonical document.
pub fn cmd_validate(algebra_json: &str) -> CmdResult {
    let (doc, g) = parse_algebra(algebra_json)?;
    let canonical = AlgebraDoc::from_algebra(&g, doc.field.clone());
    Ok(json!({
        "dim": g.dim(),
        "is_perfect": g.is_perfect(),
        "center_dim": g.center().len(),
        "derived_dim": liecoh::linalg::span_rank(&g.derived_subalgebra(), g.dim()),
        "algebra": serde_json::to_value(&canonical).unwrap(),
    }))
}

/// `cohomology`: dimensions and representatives in one degree.
pub fn cmd_cohomology(algebra_json: &str, degree: usize) -> CmdResult {
    let (_, g) = parse_algebra(algebra_json)?;
    let rho = ModuleAction::trivial(&g, 1);
    let rep = ce::cohomology(&g, &rho, degree);
    let reps: Vec<Value> =
        rep.representatives.iter().map(|c| cochain_to_doc(c, g.names())).collect();
    Ok(json!({
        "degree": degree,
        "dimZ": rep.dim_z,
        "dimB": rep.dim_b,
        "dimH": rep.dim_h,
        "representatives": reps,
    }))
}

/// `invariant-forms`: basis of Sym^2(k, Q)^k, optionally with the universal
/// form data and the factorization check.
pub fn cmd_invariant_forms(algebra_json: &str, universal: bool) -> CmdResult {
    let (_, g) = parse_algebra(algebra_json)?;
    let rho = ModuleAction::trivial(&g, 1);
    let forms = invariant_sym_forms(&g, &rho);
    let basis: Vec<Value> = forms
        .iter()
        .map(|f| {
            let mut entries = Vec::new();
            for i in 0..g.dim() {
                for j in i..g.dim() {
                    let v = f.value_basis(i, j);
                    if !v[0].is_zero() {
                        entries.push(json!({
                            "x": g.names()[i],
                            "y": g.names()[j],
                            "value": ScalarDoc::from_scalar(&v[0]),
                        }));
                    }
                }
            }
            Value::Array(entries)
        })
        .collect();
    let mut out = json!({
        "dim": forms.len(),
        "basis": basis,
    });
    if universal {
        let uni = universal_form(&g);
        let mut factor_ok = true;
        for f in &forms {
            match uni.factor_through(f) {
                Some(lambda) => {
                    for i in 0..g.dim() {
                        for j in i..g.dim() {
                            if lambda.apply(&uni.kappa_u.value_basis(i, j)) != f.value_basis(i, j)
                            {
                                factor_ok = false;
                            }
                        }
                    }
                }
                None => factor_ok = false,
            }
        }
        if !factor_ok {
            return Err(CmdError::internal(
                "universality factorization failed for a computed invariant form",
            ));
        }
        out["universal"] = json!({
            "dim_target": uni.dim_quotient,
            "factorization_verified": factor_ok,
        });
    }
    Ok(out)
}

fn resolve_form(
    g: &LieAlgebra,
    order: u32,
    form_arg: &str,
    form_json: Option<&str>,
) -> Result<liecoh::invariant::BilinearFormSym, CmdError> {
    match form_arg {
        "killing" => Ok(killing_form(g)),
        "cotangent" => {
            if g.dim() % 2 != 0 {
                return Err(CmdError::validation(
                    "cotangent pairing needs an even-dimensional algebra",
                ));
            }
            Ok(liecoh::invariant::cotangent_pairing_form(g.dim() / 2))
        }
        "file" => {
            let body = form_json
                .ok_or_else(|| CmdError::validation("--form file needs a form document"))?;
            let doc: FormDoc = serde_json::from_str(body)
                .map_err(|e| CmdError::validation(format!("form parse error: {e}")))?;
            Ok(doc.to_form(g, order)?)
        }
        other => {
            if let Some(idx) = other.strip_prefix("invariant:") {
                let k: usize = idx
                    .parse()
                    .map_err(|_| CmdError::validation("bad invariant form index"))?;
                let rho = ModuleAction::trivial(g, 1);
                let forms = invariant_sym_forms(g, &rho);
                forms
                    .get(k)
                    .cloned()
                    .ok_or_else(|| CmdError::validation("invariant form index out of range"))
            } else {
                Err(CmdError::validation(format!("unknown form selector `{other}`")))
            }
        }
    }
}

/// `cartan`: the Cartan 3-cocycle of a form and its exactness certificate.
pub fn cmd_cartan(algebra_json: &str, form_arg: &str, form_json: Option<&str>) -> CmdResult {
    let (doc, g) = parse_algebra(algebra_json)?;
    let kappa = resolve_form(&g, doc.field.order(), form_arg, form_json)?;
    let gamma = cartan_map(&g, &kappa)?;
    let outcome = cartan_exactness(&g, &kappa)?;
    let rho = ModuleAction::trivial(&g, 1);
    let result = match outcome {
        CoboundaryOutcome::Coboundary(eta) => {
            if ce::ce_d(&g, &rho, &eta) != gamma {
                return Err(CmdError::internal("returned potential fails d(eta) = Gamma"));
            }
            json!({
                "exact": true,
                "gamma": cochain_to_doc(&gamma, g.names()),
                "eta": cochain_to_doc(&eta, g.names()),
            })
        }
        CoboundaryOutcome::NotCoboundary { certificate } => json!({
            "exact": false,
            "gamma": cochain_to_doc(&gamma, g.names()),
            "certificate": scalars_to_doc(&certificate),
        }),
    };
    Ok(result)
}

/// `loop`: build a fundamental cocycle on k (x) Laurent and check closedness
/// on a window; also emits the circle-integration table of type I.
pub fn cmd_loop(
    algebra_json: &str,
    vars: usize,
    cocycle_type: &str,
    window: i64,
    form_arg: &str,
    form_json: Option<&str>,
    eta_json: Option<&str>,
) -> CmdResult {
    let (doc, g) = parse_algebra(algebra_json)?;
    let order = doc.field.order();
    let omega = match cocycle_type {
        "I" => {
            let kappa = resolve_form(&g, order, form_arg, form_json)?;
            Cocycle2::type1(&g, vars, kappa)?
        }
        "II" => {
            let eta = match eta_json {
                Some(body) => {
                    let cd: crate::doc::CochainDoc = serde_json::from_str(body)
                        .map_err(|e| CmdError::validation(format!("eta parse error: {e}")))?;
                    cd.to_cochain(&g, order)?
                }
                None => {
                    let rho = ModuleAction::trivial(&g, 1);
                    let rep = ce::cohomology(&g, &rho, 2);
                    rep.representatives
                        .first()
                        .cloned()
                        .or_else(|| rep.cocycle_basis.first().cloned())
                        .ok_or_else(|| CmdError::validation("Z^2(k) = 0: no type II cocycle"))?
                }
            };
            Cocycle2::type2(&g, vars, eta)?
        }
        "III" => {
            let kappa = resolve_form(&g, order, form_arg, form_json)?;
            Cocycle2::type3(&g, vars, kappa, None)?
        }
        other => return Err(CmdError::validation(format!("unknown cocycle type `{other}`"))),
    };
    // closedness on deterministic window triples; thin only when the pair
    // count gets large
    let degrees = window_degrees(vars, window);
    let n = g.dim();
    let thin = (degrees.len() * degrees.len() / 60).max(1);
    let mut checked = 0usize;
    let mut step = 0usize;
    for a in &degrees {
        for b in &degrees {
            step += 1;
            if step % thin != 0 {
                continue;
            }
            let c: MultiIndex = a.iter().zip(b).map(|(x, y)| -(x + y)).collect();
            let xi1 = MappingElement::basis(vars, a, n, checked % n);
            let xi2 = MappingElement::basis(vars, b, n, (checked + 1) % n);
            let xi3 = MappingElement::basis(vars, &c, n, (checked + 2) % n);
            if !closure_defect(&g, &omega, &xi1, &xi2, &xi3).is_zero() {
                return Err(CmdError::internal("cocycle failed closedness on the window"));
            }
            checked += 1;
        }
    }
    let mut result = json!({
        "type": cocycle_type,
        "vars": vars,
        "window": window,
        "closure_checked_triples": checked,
        "closure_ok": true,
    });
    if cocycle_type == "I" && vars == 1 {
        let res = omega.residue(1)?;
        let mut table = Vec::new();
        for m in -window..=window {
            for i in 0..n {
                for j in 0..n {
                    let xi1 = MappingElement::basis(1, &[m], n, i);
                    let xi2 = MappingElement::basis(1, &[-m], n, j);
                    if let CocycleValue::Vector(v) = res.eval(&g, &xi1, &xi2) {
                        if !v[0].is_zero() {
                            table.push(json!({
                                "m": m,
                                "x": g.names()[i],
                                "y": g.names()[j],
                                "value": ScalarDoc::from_scalar(&v[0]),
                            }));
                        }
                    }
                }
            }
        }
        result["residue_table"] = Value::Array(table);
    }
    Ok(result)
}

fn graded_dim_table(alg: &EquivariantAlgebra) -> Value {
    let mut map: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (k, &v) in &alg.component_dims {
        map.insert(k.clone(), v);
    }
    crate::doc::degree_table(&map)
}

/// `multiloop`: graded dimensions, bracket closure, optional centroid tables.
pub fn cmd_multiloop(spec_json: &str, window: i64, centroid: bool) -> CmdResult {
    let doc: TwistDoc = serde_json::from_str(spec_json)
        .map_err(|e| CmdError::validation(format!("spec parse error: {e}")))?;
    let (ambient, spec) = doc.to_spec()?;
    let alg = match &spec {
        Some(s) => multiloop_build(&ambient, s, window)?,
        None => match &doc {
            TwistDoc::KleinBottle { n } => klein_bottle_algebra(*n, window)?,
            TwistDoc::Multiloop { .. } => unreachable!(),
        },
    };
    alg.check_bracket_closure().map_err(|e| CmdError::internal(e.to_string()))?;
    let mut result = json!({
        "ambient_dim": ambient.dim(),
        "vars": alg.vars,
        "window": window,
        "graded_dims": graded_dim_table(&alg),
        "bracket_closure_ok": true,
    });
    if centroid {
        let domain = (window - 1).max(1).min(2);
        let mut rows = Vec::new();
        let deltas: Vec<Vec<i64>> = if alg.vars == 1 {
            (-2i64..=2).map(|k| vec![k]).collect()
        } else {
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 1], vec![0, 2]]
        };
        for delta in deltas {
            let dmax = delta.iter().map(|k| k.abs()).max().unwrap_or(0);
            if domain + dmax > window {
                continue;
            }
            let comp = graded_centroid(&alg, domain, &delta)?;
            let (fixed, full) = ring_orbit_dims(&alg.generators, &delta);
            rows.push(json!({
                "delta": multiindex_key(&delta),
                "centroid_dim": comp.dim,
                "fixed_ring_dim": fixed,
                "full_ring_dim": full,
            }));
        }
        result["centroid"] = Value::Array(rows);
    }
    Ok(result)
}

/// `gauge-cocycle`: the type-I cocycle on a multiloop algebra with the
/// Killing form, with its window residue table.
pub fn cmd_gauge_cocycle(spec_json: &str, window: i64) -> CmdResult {
    let doc: TwistDoc = serde_json::from_str(spec_json)
        .map_err(|e| CmdError::validation(format!("spec parse error: {e}")))?;
    let (ambient, spec) = doc.to_spec()?;
    let Some(spec) = spec else {
        return Err(CmdError::validation("gauge cocycle needs a diagonal multiloop spec"));
    };
    let alg = multiloop_build(&ambient, &spec, window)?;
    let co = gauge_type1_on_multiloop(&alg, killing_form(&ambient))?;
    let mut table = Vec::new();
    for (i, a) in alg.elements.iter().enumerate() {
        for (j, b) in alg.elements.iter().enumerate() {
            let form = co.eval(&alg, a, b).map_err(|e| CmdError::internal(e.to_string()))?;
            let v = form.cycle_integral(1)?;
            if !v[0].is_zero() {
                table.push(json!({
                    "a": i,
                    "b": j,
                    "residue": ScalarDoc::from_scalar(&v[0]),
                }));
            }
        }
    }
    Ok(json!({
        "window": window,
        "basis_size": alg.elements.len(),
        "residue_table": table,
    }))
}

fn value_to_json(v: &CocycleValue) -> Value {
    match v {
        CocycleValue::Scalar(s) => json!({ "scalar": ScalarDoc::from_scalar(s) }),
        CocycleValue::Vector(xs) => json!({ "vector": scalars_to_doc(xs) }),
        CocycleValue::Function(fs) => {
            let fs: Vec<String> = fs.iter().map(|p| p.to_string()).collect();
            json!({ "function": fs })
        }
        CocycleValue::Form(f) => json!({ "form_components": format!("{f:?}") }),
        CocycleValue::Reduced(f) => {
            json!({ "reduced_representative": format!("{:?}", f.representative()) })
        }
    }
}

/// `witt`: the circle cocycles. `--virasoro` emits the value table, the
/// normal-form shift, and (with `--certify`) the window infeasibility
/// certificate; `--psi k` emits the Psi/PsiBar tables.
pub fn cmd_witt(virasoro: bool, psi_k: Option<usize>, window: i64, certify: bool) -> CmdResult {
    if virasoro {
        let c = virasoro_cocycle();
        let mut table = Vec::new();
        for m in -window..=window {
            let v = match c.eval(&VectorField::witt(m), &VectorField::witt(-m)) {
                CocycleValue::Scalar(x) => x,
                _ => unreachable!(),
            };
            table.push(json!({ "m": m, "value": ScalarDoc::from_scalar(&v) }));
        }
        let witness: Vec<Value> = virasoro_linear_shift_witness()
            .iter()
            .map(|(k, v)| json!({ "basis": format!("L_{k}"), "value": ScalarDoc::from_scalar(v) }))
            .collect();
        let mut result = json!({
            "cocycle": "virasoro",
            "window": window,
            "values_on_opposite_pairs": table,
            "normal_form": "2*(m^3 - m) after shifting by the listed potential",
            "shift_witness": witness,
        });
        if certify {
            let cert = window_coboundary_cert(&c, 1, window)
                .map_err(|e| CmdError::internal(e.to_string()))?;
            result["certificate"] = match cert.status {
                WindowStatus::Infeasible { certificate } => json!({
                    "status": "infeasible",
                    "window": cert.window,
                    "row_certificate": scalars_to_doc(&certificate),
                }),
                WindowStatus::Feasible { .. } => json!({
                    "status": "feasible",
                    "window": cert.window,
                    "note": "inconclusive at this window",
                }),
            };
        }
        return Ok(result);
    }
    let k = psi_k.ok_or_else(|| CmdError::validation("pass --virasoro or --psi <k>"))?;
    if k == 0 || k > 2 {
        return Err(CmdError::validation("psi is implemented for k in {1, 2}"));
    }
    let mut table = Vec::new();
    for m in -window..=window {
        let lm = VectorField::witt(m);
        if k == 1 {
            let bar = psibar1(&lm);
            let p = psi(1, std::slice::from_ref(&lm)).map_err(|e| CmdError::validation(e.to_string()))?;
            table.push(json!({
                "m": m,
                "psibar1": bar.to_string(),
                "psi1": format!("{p:?}"),
            }));
        } else {
            let bar = psibar2(&lm, &VectorField::witt(-m));
            table.push(json!({
                "m": m,
                "psibar2(L_m, L_-m)": value_to_json(&CocycleValue::Reduced(bar)),
            }));
        }
    }
    Ok(json!({ "cocycle": format!("psi_{k}"), "window": window, "table": table }))
}

/// `semidirect`: the Appendix-style exact sequence report.
pub fn cmd_semidirect(
    n_json: &str,
    g_json: &str,
    action_json: &str,
    module_json: Option<&str>,
) -> CmdResult {
    let n_doc: AlgebraDoc = serde_json::from_str(n_json)
        .map_err(|e| CmdError::validation(format!("n parse error: {e}")))?;
    let g_doc: AlgebraDoc = serde_json::from_str(g_json)
        .map_err(|e| CmdError::validation(format!("g parse error: {e}")))?;
    let action: crate::doc::ActionDoc = serde_json::from_str(action_json)
        .map_err(|e| CmdError::validation(format!("action parse error: {e}")))?;
    let data = crate::doc::semidirect_from_docs(&n_doc, &g_doc, &action)?;
    let h = liecoh::lie::semidirect_sum(&data)?;
    let order = n_doc.field.order();
    let rho = match module_json {
        None => ModuleAction::trivial(&h, 1),
        Some(body) => {
            let doc: crate::doc::ModuleDoc = serde_json::from_str(body)
                .map_err(|e| CmdError::validation(format!("module parse error: {e}")))?;
            let mats: Result<Vec<liecoh::linalg::Mat>, DocError> = doc
                .matrices
                .iter()
                .map(|m| crate::doc::matrix_from_doc(m, order))
                .collect();
            ModuleAction::new(&h, mats?)?
        }
    };
    let sc = liecoh::semidirect::analyze(data, rho)?;
    let report = liecoh::semidirect::verify_exact_sequence(&sc)?;
    if !report.exact_at_h2h || !report.exact_at_sum || !report.ri_zero {
        return Err(CmdError::internal("exact sequence verification failed"));
    }
    Ok(json!({
        "dims": {
            "h1_g_z1": report.dim_h1_g_z1,
            "h2_h": report.dim_h2_h,
            "h2_n_bracket": report.dim_bracket_group,
            "h2_g": report.dim_h2_g,
            "h2_g_z1": report.dim_h2_g_z1,
        },
        "phi_matrix": matrix_to_doc(&report.phi_matrix),
        "restriction_matrix": matrix_to_doc(&report.restriction_matrix),
        "gamma_minus_eta_matrix": matrix_to_doc(&report.gamma_minus_eta_matrix),
        "exact_at_h2h": report.exact_at_h2h,
        "exact_at_sum": report.exact_at_sum,
        "ri_zero": report.ri_zero,
    }))
}

/// `standard`: emit a named algebra as a document (a convenience for writing
/// input files).
pub fn cmd_standard(name: &str, param: Option<usize>) -> CmdResult {
    let g = liecoh::lie::standard_algebra(name, param)?;
    let doc = AlgebraDoc::from_algebra(&g, field_doc_rational());
    Ok(json!({ "algebra": serde_json::to_value(&doc).unwrap() }))
}
