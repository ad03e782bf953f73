use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{CommandKind, JobConfig, OutputFormat};
use super::{
    CliError, Outcome, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_NOT_INTEGRABLE, EXIT_OK, OUT_ENV,
};
use crate::abel::{
    ck_root, classify_chiellini, eta_from_g, eta_from_h, lemma2_eta, AbelError, DissipativeODE,
    EtaField, Provenance, RootBranch, Sign, Verdict,
};
use crate::catalog::{self, CatalogEntry};
use crate::expr::ScalarField;
use crate::numeric::linspace;
use crate::quadinvert::{invert_with, rk4_reference, EventKind, InvertOptions, SolutionCurve};

const DEFAULT_CHECK_INTERVAL: [f64; 2] = [0.1, 3.0];
const DEFAULT_CONSTRUCT_INTERVAL: [f64; 2] = [-1.0, 2.0];
const DEFAULT_GRID_N: usize = 64;
const DEFAULT_K: f64 = -2.0;
const DEFAULT_SOLVE_STEP: f64 = 1e-2;
const DEFAULT_VERIFY_STEP: f64 = 1e-3;

const TOL_RK4: f64 = 1e-5;
const TOL_CLOSED_FORM: f64 = 1e-6;
const TOL_ABEL: f64 = 1e-8;

pub(super) fn dispatch(cmd: CommandKind, cfg: &JobConfig) -> Result<Outcome, CliError> {
    match cmd {
        CommandKind::Check => check(cfg),
        CommandKind::Construct => construct(cfg),
        CommandKind::Solve => solve(cfg),
        CommandKind::Verify => verify(cfg),
        CommandKind::Catalog => list(cfg),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn report(stdout: String, code: i32) -> Outcome {
    Outcome {
        stdout,
        file: None,
        code,
    }
}

fn field(which: &'static str, text: &str) -> Result<ScalarField, CliError> {
    ScalarField::parse(text).map_err(|source| CliError::Expr { which, source })
}

fn ode(cfg: &JobConfig) -> Result<DissipativeODE, CliError> {
    let g = field("g", cfg.g.as_deref().unwrap_or_default())?;
    let h = field("h", cfg.h.as_deref().unwrap_or_default())?;
    Ok(DissipativeODE::new(g, h))
}

fn interval(v: [f64; 2]) -> (f64, f64) {
    (v[0], v[1])
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckReport {
    g: String,
    h: String,
    interval: [f64; 2],
    k: f64,
    residual: f64,
    verdict: Verdict,
    ck_roots: Vec<f64>,
    points_used: usize,
}

fn check(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let ode = ode(cfg)?;
    let iv = cfg.interval.unwrap_or(DEFAULT_CHECK_INTERVAL);
    let r = classify_chiellini(&ode, interval(iv), cfg.grid_n.unwrap_or(DEFAULT_GRID_N))?;
    let code = match r.verdict {
        Verdict::Integrable => EXIT_OK,
        Verdict::NotIntegrable => EXIT_NOT_INTEGRABLE,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    };
    let out = CheckReport {
        g: ode.g.render(),
        h: ode.h.render(),
        interval: iv,
        k: r.k,
        residual: r.residual,
        verdict: r.verdict,
        ck_roots: r.ck_roots,
        points_used: r.grid_used.len(),
    };
    Ok(report(json(&out), code))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Construction {
    provenance: Provenance,
    g: String,
    h: String,
    eta: String,
    constants: BTreeMap<String, f64>,
    domain: Option<[f64; 2]>,
}

fn construction(eta: &EtaField) -> Construction {
    Construction {
        provenance: eta.provenance,
        g: eta.ode.g.render(),
        h: eta.ode.h.render(),
        eta: eta.eta.render(),
        constants: eta.constants.clone(),
        domain: eta.domain.map(|(a, b)| [a, b]),
    }
}

fn construct(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let k = cfg.k.unwrap_or(DEFAULT_K);
    let branch: RootBranch = cfg.ck_branch.map(Into::into).unwrap_or_default();
    let ck = ck_root(k, branch).ok_or(AbelError::NoRealRoot(k))?;
    let iv = interval(cfg.interval.unwrap_or(DEFAULT_CONSTRUCT_INTERVAL));
    let eta = if let Some(g) = &cfg.g {
        eta_from_g(&field("g", g)?, k, cfg.c0.unwrap_or(1.0), ck, iv)?
    } else {
        let h = field("h", cfg.h.as_deref().unwrap_or_default())?;
        let sign: Sign = cfg.sign.map(Into::into).unwrap_or_default();
        eta_from_h(&h, k, cfg.c1.unwrap_or(1.0), ck, sign, iv)?
    };
    Ok(report(json(&construction(&eta)), EXIT_OK))
}

/// The field to integrate and where to start by default.
struct Problem {
    eta: EtaField,
    entry: Option<CatalogEntry>,
}

fn problem(cfg: &JobConfig) -> Result<Problem, CliError> {
    if let Some(name) = &cfg.catalog {
        let entry = catalog::by_name(name, &cfg.params.clone().unwrap_or_default())?;
        return Ok(Problem {
            eta: entry.eta.clone(),
            entry: Some(entry),
        });
    }
    let ode = ode(cfg)?;
    let u0 = cfg.u0.expect("validated");
    let iv = interval(cfg.interval.unwrap_or([u0 - 1.0, u0 + 1.0]));
    let r = classify_chiellini(&ode, iv, cfg.grid_n.unwrap_or(DEFAULT_GRID_N))?;
    if r.verdict != Verdict::Integrable {
        return Err(CliError::Precondition(format!(
            "(h/g)' = k g does not hold on [{}, {}]: verdict {:?}, residual {:e}",
            iv.0, iv.1, r.verdict, r.residual
        )));
    }
    let branch: RootBranch = cfg.ck_branch.map(Into::into).unwrap_or_default();
    Ok(Problem {
        eta: lemma2_eta(&ode, r.k, branch)?,
        entry: None,
    })
}

struct Start {
    zeta0: f64,
    u0: f64,
    span: (f64, f64),
}

fn start(cfg: &JobConfig, p: &Problem) -> Result<Start, CliError> {
    let test = p.entry.as_ref().and_then(|e| e.test);
    let (zeta0, u0) = match (cfg.zeta0, cfg.u0, test) {
        (z, Some(u), _) => (z.unwrap_or(0.0), u),
        (None, None, Some(t)) => (t.zeta0, t.u0),
        (Some(z), None, Some(t)) => (z, t.u0),
        (_, None, None) => return Err(CliError::Usage("missing required u0".into())),
    };
    let span = match (cfg.span, test) {
        (Some(s), _) => (s[0], s[1]),
        (None, Some(t)) => t.span,
        (None, None) => return Err(CliError::Usage("missing required span".into())),
    };
    Ok(Start { zeta0, u0, span })
}

fn options(cfg: &JobConfig) -> InvertOptions {
    InvertOptions {
        max_turning_points: cfg
            .max_turning_points
            .unwrap_or(InvertOptions::default().max_turning_points),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CurveOut<'a> {
    base_zeta: f64,
    base_u: f64,
    samples: Vec<SampleOut>,
    events: &'a [crate::quadinvert::Event],
}

#[derive(Serialize)]
struct SampleOut {
    zeta: f64,
    u: f64,
    uprime: f64,
}

pub(super) fn render_csv(curve: &SolutionCurve) -> String {
    let mut s = String::from("zeta,u,uprime\n");
    for p in &curve.samples {
        let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", p.zeta, p.u, p.u_prime);
    }
    s
}

pub(super) fn render_json(curve: &SolutionCurve) -> String {
    json(&CurveOut {
        base_zeta: curve.base_zeta,
        base_u: curve.base_u,
        samples: curve
            .samples
            .iter()
            .map(|p| SampleOut {
                zeta: p.zeta,
                u: p.u,
                uprime: p.u_prime,
            })
            .collect(),
        events: &curve.events,
    })
}

fn solve(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = problem(cfg)?;
    let s = start(cfg, &p)?;
    let step = cfg.step.unwrap_or(DEFAULT_SOLVE_STEP);
    let curve = invert_with(&p.eta, s.zeta0, s.u0, s.span, step, options(cfg))?;
    let text = match cfg.output_format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => render_json(&curve),
        _ => render_csv(&curve),
    };
    let path = cfg
        .output_path
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    Ok(match path {
        Some(path) => Outcome {
            stdout: String::new(),
            file: Some((path, text.into_bytes())),
            code: EXIT_OK,
        },
        None => report(text, EXIT_OK),
    })
}

#[derive(Serialize)]
struct Check {
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(value: f64, tolerance: f64) -> Check {
        Check {
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport {
    entry: Option<String>,
    parameters: Option<BTreeMap<String, f64>>,
    eta: String,
    zeta0: f64,
    u0: f64,
    span: [f64; 2],
    step: f64,
    samples: usize,
    truncated: bool,
    inversion_vs_rk4: Check,
    closed_form_residual: Option<Check>,
    abel_residual: Check,
    /// informational: |invert - closed form| on the same lattice
    inversion_vs_closed_form: Option<f64>,
    verdict: &'static str,
}

fn verify(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = problem(cfg)?;
    let s = start(cfg, &p)?;
    let step = cfg.step.unwrap_or(DEFAULT_VERIFY_STEP);
    let eta = &p.eta;
    let curve = invert_with(eta, s.zeta0, s.u0, s.span, step, options(cfg))?;
    let u_prime0 = eta.value(s.u0).map_err(|source| crate::quadinvert::InvertError::Domain {
        zeta: s.zeta0,
        source,
    })?;
    let rk = rk4_reference(&eta.ode, s.zeta0, s.u0, u_prime0, s.span, step)?;
    let (dev, _) = curve.max_deviation(&rk);

    let closed = p.entry.as_ref().and_then(|e| e.closed_form.as_ref());
    let closed_residual = closed.map(|cf| {
        let worst = cf
            .sample_points(200)
            .into_iter()
            .map(|z| {
                let r = (|| {
                    let u = cf.value(z).ok()?;
                    let du = cf.derivative(z).ok()?;
                    let ddu = cf.second_derivative(z).ok()?;
                    eta.ode.residual(u, du, ddu).ok()
                })();
                r.map_or(f64::INFINITY, f64::abs)
            })
            .fold(0.0, f64::max);
        Check::new(worst, TOL_CLOSED_FORM)
    });
    let against_closed = closed.map(|cf| {
        curve
            .samples
            .iter()
            .filter(|q| q.zeta > cf.domain.0 && q.zeta < cf.domain.1)
            .map(|q| cf.value(q.zeta).map_or(f64::INFINITY, |v| (v - q.u).abs()))
            .fold(0.0, f64::max)
    });

    let lo = curve.samples.iter().map(|q| q.u).fold(s.u0, f64::min);
    let hi = curve.samples.iter().map(|q| q.u).fold(s.u0, f64::max);
    let grid = if hi > lo { linspace(lo, hi, 256) } else { vec![s.u0] };
    let (abel, _) = eta.max_relative_residual(&grid);

    let rk4_check = Check::new(dev, TOL_RK4);
    let abel_check = Check::new(abel, TOL_ABEL);
    let pass = rk4_check.pass && abel_check.pass && closed_residual.as_ref().is_none_or(|c| c.pass);
    let out = VerifyReport {
        entry: p.entry.as_ref().map(|e| e.name.to_string()),
        parameters: p.entry.as_ref().map(|e| e.parameters.clone()),
        eta: eta.eta.render(),
        zeta0: s.zeta0,
        u0: s.u0,
        span: [s.span.0, s.span.1],
        step,
        samples: curve.samples.len(),
        truncated: curve.events.iter().any(|e| e.kind == EventKind::Truncated),
        inversion_vs_rk4: rk4_check,
        closed_form_residual: closed_residual,
        abel_residual: abel_check,
        inversion_vs_closed_form: against_closed,
        verdict: if pass { "PASS" } else { "FAIL" },
    };
    Ok(report(json(&out), if pass { EXIT_OK } else { EXIT_FAIL }))
}

#[derive(Serialize)]
struct ParamOut {
    name: &'static str,
    default: f64,
    doc: &'static str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EntryOut {
    name: &'static str,
    parameters: Vec<ParamOut>,
    figure: String,
    closed_forms: &'static [&'static str],
    g: String,
    h: String,
    eta: String,
}

fn describe(name: &'static str) -> Result<EntryOut, CliError> {
    let entry = catalog::by_name(name, &BTreeMap::new())?;
    Ok(EntryOut {
        name,
        parameters: catalog::schema(name)
            .unwrap_or_default()
            .iter()
            .map(|&(name, default, doc)| ParamOut { name, default, doc })
            .collect(),
        figure: entry.figure,
        closed_forms: catalog::cases(name),
        g: entry.ode.g.render(),
        h: entry.ode.h.render(),
        eta: entry.eta.eta.render(),
    })
}

fn list(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let names: Vec<&'static str> = match &cfg.entry {
        Some(e) => vec![catalog::NAMES
            .iter()
            .copied()
            .find(|n| n == e)
            .ok_or_else(|| catalog::CatalogError::UnknownEntry(e.clone()))?],
        None => catalog::NAMES.to_vec(),
    };
    let entries = names.into_iter().map(describe).collect::<Result<Vec<_>, _>>()?;
    if cfg.output_format == Some(OutputFormat::Json) {
        return Ok(report(json(&entries), EXIT_OK));
    }
    let mut s = String::new();
    let detailed = cfg.entry.is_some();
    for e in &entries {
        let defaults: Vec<String> = e
            .parameters
            .iter()
            .map(|p| format!("{}={}", p.name, p.default))
            .collect();
        let _ = writeln!(s, "{:<16}{:<16}{}", e.name, defaults.join(" "), e.figure);
        if detailed {
            let _ = writeln!(s, "\nparameters:");
            for p in &e.parameters {
                let _ = writeln!(s, "  {} (default {}): {}", p.name, p.default, p.doc);
            }
            let _ = writeln!(s, "\nat the defaults:");
            let _ = writeln!(s, "  g   = {}", e.g);
            let _ = writeln!(s, "  h   = {}", e.h);
            let _ = writeln!(s, "  eta = {}", e.eta);
            let _ = writeln!(s, "\nclosed forms:");
            for c in e.closed_forms {
                let _ = writeln!(s, "  {c}");
            }
        }
    }
    Ok(report(s, EXIT_OK))
}
