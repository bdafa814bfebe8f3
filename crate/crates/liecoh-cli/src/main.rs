//! Command-line front end: parse JSON descriptions of algebras, forms, and
//! twist specs, run the exact engine, and emit deterministic JSON reports.
//!
//! Exit codes: 0 success, 1 validation error (bad input), 2 internal
//! inconsistency (an engine-guaranteed invariant failed, which should never
//! happen).

mod commands;
mod doc;
mod report;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CmdError;

#[derive(Parser)]
#[command(name = "liecoh", version, about = "Exact Lie algebra cohomology and cocycle engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra document and re-emit its canonical form.
    Validate { path: String },
    /// Lie algebra cohomology with trivial rational coefficients.
    Cohomology {
        path: String,
        #[arg(long)]
        degree: usize,
        /// coefficient module; only `trivial` is wired on the CLI
        #[arg(long, default_value = "trivial")]
        module: String,
    },
    /// Basis of the invariant symmetric bilinear forms.
    InvariantForms {
        path: String,
        /// also compute the universal form target and verify factorization
        #[arg(long)]
        universal: bool,
    },
    /// The Cartan 3-cocycle of a form and its exactness.
    Cartan {
        path: String,
        /// killing | cotangent | invariant:<k> | file
        #[arg(long, default_value = "killing")]
        form: String,
        /// form document path when --form file is used
        #[arg(long)]
        form_file: Option<String>,
    },
    /// Fundamental cocycles on the mapping algebra of a torus.
    Loop {
        path: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        /// I | II | III
        #[arg(long = "cocycle-type")]
        cocycle_type: String,
        #[arg(long = "check-window", default_value_t = 3)]
        check_window: i64,
        #[arg(long, default_value = "killing")]
        form: String,
        #[arg(long)]
        form_file: Option<String>,
        /// 2-cochain document for type II (defaults to a computed cocycle)
        #[arg(long)]
        eta_file: Option<String>,
    },
    /// Multiloop / Klein-bottle fixed-point algebras.
    Multiloop {
        spec: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long)]
        centroid: bool,
    },
    /// The type-I cocycle on a multiloop gauge algebra (Killing form).
    GaugeCocycle {
        spec: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Circle cocycles: Virasoro values and certificates, Psi tables.
    Witt {
        #[arg(long)]
        virasoro: bool,
        #[arg(long)]
        psi: Option<usize>,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long)]
        certify: bool,
    },
    /// Exact-sequence report for an abelian extension of a semidirect sum.
    Semidirect {
        #[arg(long)]
        n: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        action: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Emit a named standard algebra as a document.
    Standard {
        name: String,
        #[arg(long)]
        param: Option<usize>,
    },
}

fn read(path: &str) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::validation(format!("cannot read `{path}`: {e}")))
}

fn run(cli: Cli) -> Result<(String, String, serde_json::Value), CmdError> {
    match cli.command {
        Command::Validate { path } => {
            let body = read(&path)?;
            let result = commands::cmd_validate(&body)?;
            Ok(("validate".into(), report::digest_inputs(&[body.as_bytes()]), result))
        }
        Command::Cohomology { path, degree, module } => {
            if module != "trivial" {
                return Err(CmdError::validation("only the trivial module is wired on the CLI"));
            }
            let body = read(&path)?;
            let result = commands::cmd_cohomology(&body, degree)?;
            let digest =
                report::digest_inputs(&[body.as_bytes(), degree.to_string().as_bytes()]);
            Ok(("cohomology".into(), digest, result))
        }
        Command::InvariantForms { path, universal } => {
            let body = read(&path)?;
            let result = commands::cmd_invariant_forms(&body, universal)?;
            let digest = report::digest_inputs(&[body.as_bytes(), &[u8::from(universal)]]);
            Ok(("invariant-forms".into(), digest, result))
        }
        Command::Cartan { path, form, form_file } => {
            let body = read(&path)?;
            let form_body = match &form_file {
                Some(p) => Some(read(p)?),
                None => None,
            };
            let result = commands::cmd_cartan(&body, &form, form_body.as_deref())?;
            let digest = report::digest_inputs(&[
                body.as_bytes(),
                form.as_bytes(),
                form_body.as_deref().unwrap_or("").as_bytes(),
            ]);
            Ok(("cartan".into(), digest, result))
        }
        Command::Loop { path, vars, cocycle_type, check_window, form, form_file, eta_file } => {
            let body = read(&path)?;
            let form_body = match &form_file {
                Some(p) => Some(read(p)?),
                None => None,
            };
            let eta_body = match &eta_file {
                Some(p) => Some(read(p)?),
                None => None,
            };
            let result = commands::cmd_loop(
                &body,
                vars,
                &cocycle_type,
                check_window,
                &form,
                form_body.as_deref(),
                eta_body.as_deref(),
            )?;
            let digest = report::digest_inputs(&[
                body.as_bytes(),
                cocycle_type.as_bytes(),
                vars.to_string().as_bytes(),
                check_window.to_string().as_bytes(),
                eta_body.as_deref().unwrap_or("").as_bytes(),
            ]);
            Ok(("loop".into(), digest, result))
        }
        Command::Multiloop { spec, window, centroid } => {
            let body = read(&spec)?;
            let result = commands::cmd_multiloop(&body, window, centroid)?;
            let digest = report::digest_inputs(&[
                body.as_bytes(),
                window.to_string().as_bytes(),
                &[u8::from(centroid)],
            ]);
            Ok(("multiloop".into(), digest, result))
        }
        Command::GaugeCocycle { spec, window } => {
            let body = read(&spec)?;
            let result = commands::cmd_gauge_cocycle(&body, window)?;
            let digest =
                report::digest_inputs(&[body.as_bytes(), window.to_string().as_bytes()]);
            Ok(("gauge-cocycle".into(), digest, result))
        }
        Command::Witt { virasoro, psi, window, certify } => {
            let result = commands::cmd_witt(virasoro, psi, window, certify)?;
            let digest = report::digest_inputs(&[
                &[u8::from(virasoro)],
                psi.map(|k| k.to_string()).unwrap_or_default().as_bytes(),
                window.to_string().as_bytes(),
                &[u8::from(certify)],
            ]);
            Ok(("witt".into(), digest, result))
        }
        Command::Semidirect { n, g, action, module } => {
            let n_body = read(&n)?;
            let g_body = read(&g)?;
            let a_body = read(&action)?;
            let m_body = match &module {
                Some(p) => Some(read(p)?),
                None => None,
            };
            let result =
                commands::cmd_semidirect(&n_body, &g_body, &a_body, m_body.as_deref())?;
            let digest = report::digest_inputs(&[
                n_body.as_bytes(),
                g_body.as_bytes(),
                a_body.as_bytes(),
                m_body.as_deref().unwrap_or("").as_bytes(),
            ]);
            Ok(("semidirect".into(), digest, result))
        }
        Command::Standard { name, param } => {
            let result = commands::cmd_standard(&name, param)?;
            let digest = report::digest_inputs(&[
                name.as_bytes(),
                param.map(|p| p.to_string()).unwrap_or_default().as_bytes(),
            ]);
            Ok(("standard".into(), digest, result))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((command, digest, result)) => {
            println!("{}", report::emit(&command, digest, result));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
