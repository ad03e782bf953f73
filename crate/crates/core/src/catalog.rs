//! Four parameterised Chiellini-integrable families (`k = -2`, `c_k = 1`)
//! with exact solutions where they exist.
//!
//! Closed forms hold on the branch `u' = +η(u)`. Some of the usually quoted
//! formulas for these families solve a different equation; those are kept
//! as `published` next to the verified `closed_form`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::abel::{eta_from_g, eta_from_h, AbelError, DissipativeODE, EtaField, Sign};
use crate::expr::{antiderivative, Expr, Func, ScalarField};
use crate::special::{gudermann, jacobi_am, sn_real, EllipticParam, SpecialError};

const K: f64 = -2.0;
const CK: f64 = 1.0;

pub const NAMES: [&str; 4] = ["fisher", "pendulum", "sine-pendulum", "burgers-huxley"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}` (known: {})", NAMES.join(", "))]
    UnknownEntry(String),
    #[error("entry `{entry}` has no parameter `{name}`")]
    UnknownParameter { entry: String, name: String },
    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    Construction(#[from] AbelError),
}

/// An exact solution `u(ζ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `1 - 1.5 sech²(rate·ζ)`
    Sech { rate: f64 },
    /// `base + √3 sn²(rate·ζ | 2)`
    SnSquared { base: f64, rate: f64 },
    /// `factor · am(rate·ζ | m)`
    Am { factor: f64, rate: f64, m: f64 },
    /// `2 arctan(A tan ωζ)` family solving `u' = c0 + 2 cos u`
    SineDissipation { c0: f64 },
    /// `amp · tanh(rate·ζ)`
    Tanh { amp: f64, rate: f64 },
    /// `1/(μζ)`
    Reciprocal { mu: f64 },
    /// `amp · tan(rate·ζ)`
    Tan { amp: f64, rate: f64 },
}

impl Profile {
    pub fn value(&self, z: f64) -> Result<f64, SpecialError> {
        Ok(match *self {
            Profile::Sech { rate } => 1.0 - 1.5 / (rate * z).cosh().powi(2),
            Profile::SnSquared { base, rate } => base + 3f64.sqrt() * sn_real(rate * z, 2.0)?.powi(2),
            Profile::Am { factor, rate, m } => {
                if m == 1.0 {
                    factor * gudermann(rate * z)
                } else {
                    factor * jacobi_am(rate * z, m)?
                }
            }
            Profile::SineDissipation { c0 } => sine_dissipation(c0, z),
            Profile::Tanh { amp, rate } => amp * (rate * z).tanh(),
            Profile::Reciprocal { mu } => 1.0 / (mu * z),
            Profile::Tan { amp, rate } => amp * (rate * z).tan(),
        })
    }

    /// `du/dζ`, analytically.
    pub fn derivative(&self, z: f64) -> Result<f64, SpecialError> {
        Ok(match *self {
            Profile::Sech { rate } => {
                let x = rate * z;
                3.0 * rate * x.tanh() / x.cosh().powi(2)
            }
            Profile::SnSquared { rate, .. } => {
                // sn(x|2) = sin φ/√2, cn(x|2) = √(1 - sin²φ/2), dn(x|2) = cos φ,
                // with φ = am(√2 x | 1/2)
                let phi = jacobi_am(2f64.sqrt() * rate * z, 0.5)?;
                let (s, c) = phi.sin_cos();
                let sn = s / 2f64.sqrt();
                let cn = (1.0 - 0.5 * s * s).sqrt();
                2.0 * 3f64.sqrt() * rate * sn * cn * c
            }
            Profile::Am { factor, rate, m } => {
                let phi = if m == 1.0 {
                    gudermann(rate * z)
                } else {
                    jacobi_am(rate * z, m)?
                };
                factor * rate * (1.0 - m * phi.sin().powi(2)).max(0.0).sqrt()
            }
            Profile::SineDissipation { c0 } => c0 + 2.0 * sine_dissipation(c0, z).cos(),
            Profile::Tanh { amp, rate } => amp * rate / (rate * z).cosh().powi(2),
            Profile::Reciprocal { mu } => -1.0 / (mu * z * z),
            Profile::Tan { amp, rate } => amp * rate / (rate * z).cos().powi(2),
        })
    }
}

fn sine_dissipation(c0: f64, z: f64) -> f64 {
    if c0 == 2.0 {
        2.0 * (2.0 * z).atan()
    } else if c0 == -2.0 {
        // 2 arccot(2ζ), continuous through ζ = 0
        2.0 * (FRAC_PI_2 - (2.0 * z).atan())
    } else if c0.abs() < 2.0 {
        let w = (4.0 - c0 * c0).sqrt();
        2.0 * ((2.0 + c0) / w * (0.5 * w * z).tanh()).atan()
    } else {
        let w = (c0 * c0 - 4.0).sqrt();
        let a = (c0 + 2.0) / w;
        let x = 0.5 * w * z;
        // unwrap across the poles of tan so the rotation stays continuous
        2.0 * (a * x.tan()).atan() + 2.0 * PI * a.signum() * (x / PI).round()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub formula: String,
    pub profile: Profile,
    /// Open interval of `ζ` on which the formula solves the ODE.
    pub domain: (f64, f64),
    /// Finite part of the domain used for sampling checks.
    pub window: (f64, f64),
}

impl ClosedForm {
    pub fn value(&self, z: f64) -> Result<f64, SpecialError> {
        self.profile.value(z)
    }

    pub fn derivative(&self, z: f64) -> Result<f64, SpecialError> {
        self.profile.derivative(z)
    }

    /// `u''` by a fourth-order difference of the analytic `u'`.
    pub fn second_derivative(&self, z: f64) -> Result<f64, SpecialError> {
        let h = 1e-4;
        let d = |x: f64| self.derivative(x);
        Ok((d(z - 2.0 * h)? - 8.0 * d(z - h)? + 8.0 * d(z + h)? - d(z + 2.0 * h)?) / (12.0 * h))
    }

    /// `n` evenly spaced points of the window.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        crate::numeric::linspace(self.window.0, self.window.1, n)
    }
}

/// Where an oracle comparison starts: `u0 = closed_form(zeta0)` when there
/// is one, with `u'(ζ0) = η(u0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSetup {
    pub zeta0: f64,
    pub u0: f64,
    pub span: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: BTreeMap<String, f64>,
    pub ode: DissipativeODE,
    pub eta: EtaField,
    pub closed_form: Option<ClosedForm>,
    /// The commonly printed formula, when it differs from `closed_form`.
    pub published: Option<ClosedForm>,
    /// What the sample curve shows.
    pub figure: String,
    /// A `u`-interval inside the domain of `g`, `h` and `η` for classification.
    pub classify_interval: (f64, f64),
    pub test: Option<TestSetup>,
    /// Fisher only: `μ(u)` with `g = μ(u)·u`.
    pub convective: Option<ScalarField>,
}

impl CatalogEntry {
    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
}

fn shrink((a, b): (f64, f64), frac: f64) -> (f64, f64) {
    let d = frac * (b - a);
    (a + d, b - d)
}

fn field(e: Expr) -> ScalarField {
    ScalarField::new(e)
}

/// `u'' + u(1-u)/√(c1 - 2u² + 4u³/3) u' + u(1-u) = 0`, `c1 = (4/3)c2`.
pub fn fisher(c2: f64) -> Result<CatalogEntry, CatalogError> {
    let c1 = 4.0 / 3.0 * c2;
    let h = ScalarField::parse("u*(1-u)").expect("literal");
    let eta = eta_from_h(&h, K, c1, CK, Sign::Plus, (-1.0, 2.0))?;
    let domain = eta.domain.expect("set by eta_from_h");
    let radicand = antiderivative(h.expr(), 0.0).affine(c1, 2.0 * K);
    let convective = field(Expr::div(
        ScalarField::parse("1-u").expect("literal").expr().clone(),
        Expr::call(Func::Sqrt, radicand),
    ));
    let lo = 0.5 * (1.0 - 3f64.sqrt());
    let sn_rate = 1.0 / (2f64.sqrt() * 3f64.powf(0.25));
    // half period of sn²(rate·ζ|2): sn(x|2) peaks at the reach of am(·|1/2)/√2
    let sn_half = EllipticParam::new(2.0).reach() / sn_rate;
    let (closed_form, published, figure, test) = if c2 == 0.5 {
        (
            Some(ClosedForm {
                formula: "1 - 1.5*sech(zeta/sqrt(2))^2".into(),
                profile: Profile::Sech { rate: 1.0 / 2f64.sqrt() },
                domain: (0.0, f64::INFINITY),
                window: (0.05, 10.0),
            }),
            Some(ClosedForm {
                formula: "1 - 1.5*sech(zeta/2)^2".into(),
                profile: Profile::Sech { rate: 0.5 },
                domain: (0.0, f64::INFINITY),
                window: (0.05, 10.0),
            }),
            "dark soliton: dip to u = -1/2 relaxing to u = 1",
            Some((0.5, (0.5, 6.0))),
        )
    } else if c2 == 0.25 {
        (
            Some(ClosedForm {
                formula: format!("{lo} + sqrt(3)*sn(zeta/(sqrt(2)*3^(1/4)) | 2)^2"),
                profile: Profile::SnSquared { base: lo, rate: sn_rate },
                domain: (0.0, sn_half),
                window: shrink((0.0, sn_half), 0.02),
            }),
            Some(ClosedForm {
                formula: format!("{lo} + sqrt(3)*sn(zeta/3^(1/4) | 2)^2"),
                profile: Profile::SnSquared {
                    base: lo,
                    rate: 1.0 / 3f64.powf(0.25),
                },
                domain: (0.0, sn_half),
                window: shrink((0.0, sn_half), 0.02),
            }),
            "sn-type periodic wave between u = (1-sqrt(3))/2 and u = 1/2",
            Some((0.3, (0.3, 2.1))),
        )
    } else {
        let test = (domain.0 < 0.0 && domain.1 > 0.0).then_some((0.0, (-1.0, 1.0)));
        (None, None, "quadrature solution only", test)
    };
    let test = match (test, &closed_form) {
        (Some((zeta0, span)), Some(cf)) => Some(TestSetup {
            zeta0,
            u0: cf.value(zeta0).expect("inside the window"),
            span,
        }),
        (Some((zeta0, span)), None) => Some(TestSetup { zeta0, u0: 0.0, span }),
        (None, _) => None,
    };
    Ok(CatalogEntry {
        name: "fisher",
        parameters: params(&[("c2", c2), ("c1", c1)]),
        ode: eta.ode.clone(),
        classify_interval: shrink((domain.0, domain.1.min(1.0)), 0.05),
        eta,
        closed_form,
        published,
        figure: figure.into(),
        test,
        convective: Some(convective),
    })
}

/// `u'' + sin u/√(c3 + 4 cos u) u' + sin u = 0`, `c3 = 8/m - 4`.
pub fn pendulum(m: f64) -> Result<CatalogEntry, CatalogError> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(CatalogError::InvalidParameter {
            name: "m".into(),
            value: m,
            reason: "the pendulum family needs m > 0",
        });
    }
    let c3 = 8.0 / m - 4.0;
    let h = ScalarField::parse("sin(u)").expect("literal");
    let eta = eta_from_h(&h, K, c3, CK, Sign::Plus, (-2.0 * PI, 2.0 * PI))?;
    let rate = (2.0 / m).sqrt();
    // u = 2 am(√(2/m) ζ | m); for m > 1 am only reaches |ζ| < reach/rate
    let reach = EllipticParam::new(m).reach() / rate;
    let domain = if m > 1.0 { (-reach, reach) } else { (f64::NEG_INFINITY, f64::INFINITY) };
    let window = if m > 1.0 { shrink(domain, 0.02) } else { (-3.0, 3.0) };
    let closed = ClosedForm {
        formula: format!("2*am({rate}*zeta | {m})"),
        profile: Profile::Am { factor: 2.0, rate, m },
        domain,
        window,
    };
    let published = ClosedForm {
        formula: format!("am({rate}*zeta | {m})"),
        profile: Profile::Am { factor: 1.0, rate, m },
        domain,
        window,
    };
    let figure = if m > 1.0 {
        "libration between turning points at cos u = -c3/4"
    } else if m == 1.0 {
        "separatrix: kink from u = -pi to u = pi"
    } else {
        "rotation: u increases without bound"
    };
    let span = if m > 1.0 {
        let r = (0.75 * reach).min(1.0);
        (-r, r)
    } else {
        (-3.0, 3.0)
    };
    let classify_hi = eta.domain.map_or(3.0, |d| d.1.min(3.0) - 0.05);
    Ok(CatalogEntry {
        name: "pendulum",
        parameters: params(&[("m", m), ("c3", c3)]),
        ode: eta.ode.clone(),
        eta,
        closed_form: Some(closed),
        published: Some(published),
        figure: figure.into(),
        classify_interval: (0.1, classify_hi),
        test: Some(TestSetup {
            zeta0: 0.0,
            u0: 0.0,
            span,
        }),
        convective: None,
    })
}

/// `u'' + sin u · u' + c0 sin u + sin 2u = 0`, with `η = c0 + 2 cos u`.
pub fn sine_pendulum(c0: f64) -> Result<CatalogEntry, CatalogError> {
    let g = ScalarField::parse("sin(u)").expect("literal");
    let eta = eta_from_g(&g, K, c0, CK, (-PI, PI))?;
    let formula = if c0 == 2.0 {
        "2*atan(2*zeta)".to_string()
    } else if c0 == -2.0 {
        "2*acot(2*zeta)".to_string()
    } else if c0.abs() < 2.0 {
        let w = (4.0 - c0 * c0).sqrt();
        format!("2*atan({}*tanh({}*zeta))", (2.0 + c0) / w, 0.5 * w)
    } else {
        let w = (c0 * c0 - 4.0).sqrt();
        format!("2*atan({}*tan({}*zeta)), unwrapped", (2.0 + c0) / w, 0.5 * w)
    };
    let figure = if c0.abs() < 2.0 {
        "kink between the equilibria cos u = -c0/2"
    } else if c0.abs() == 2.0 {
        "algebraic kink"
    } else {
        "rotation with steps at the poles of tan"
    };
    let closed = ClosedForm {
        formula,
        profile: Profile::SineDissipation { c0 },
        domain: (f64::NEG_INFINITY, f64::INFINITY),
        window: (-3.0, 3.0),
    };
    let u0 = closed.value(0.0).expect("elementary");
    Ok(CatalogEntry {
        name: "sine-pendulum",
        parameters: params(&[("c0", c0)]),
        ode: eta.ode.clone(),
        eta,
        closed_form: Some(closed),
        published: None,
        figure: figure.into(),
        classify_interval: (0.1, 3.0),
        test: Some(TestSetup {
            zeta0: 0.0,
            u0,
            span: (-3.0, 3.0),
        }),
        convective: None,
    })
}

/// `u'' + μu u' + μu(c0 - μu²) = 0`, with `η = c0 - μu²`.
pub fn burgers_huxley(mu: f64, c0: f64) -> Result<CatalogEntry, CatalogError> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(CatalogError::InvalidParameter {
            name: "mu".into(),
            value: mu,
            reason: "the Burgers-Huxley family needs mu != 0",
        });
    }
    let g = field(Expr::mul(Expr::num(mu), Expr::var()));
    let eta = eta_from_g(&g, K, c0, CK, (-2.0, 2.0))?;
    let ratio = c0 / mu;
    let (closed, published, figure, test) = if ratio > 0.0 {
        let a = ratio.sqrt();
        let cf = ClosedForm {
            formula: format!("{a}*tanh({}*zeta)", mu * a),
            profile: Profile::Tanh { amp: a, rate: mu * a },
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            window: (-3.0, 3.0),
        };
        let printed = ClosedForm {
            formula: format!("{a}*tanh({}*zeta)", (mu * c0).abs().sqrt()),
            profile: Profile::Tanh {
                amp: a,
                rate: (mu * c0).abs().sqrt(),
            },
            ..cf.clone()
        };
        let published = (mu < 0.0).then_some(printed);
        (cf, published, "front of amplitude sqrt(c0/mu)", (0.0, (-3.0, 3.0)))
    } else if c0 == 0.0 {
        let cf = ClosedForm {
            formula: format!("1/({mu}*zeta)"),
            profile: Profile::Reciprocal { mu },
            domain: (0.0, f64::INFINITY),
            window: (0.2, 5.0),
        };
        (cf, None, "algebraic decay 1/(mu zeta)", (0.5, (0.5, 3.0)))
    } else {
        let b = (-ratio).sqrt();
        let rate = mu * b;
        let edge = FRAC_PI_2 / rate.abs();
        let cf = ClosedForm {
            formula: format!("{}*tan({rate}*zeta)", -b),
            profile: Profile::Tan { amp: -b, rate },
            domain: (-edge, edge),
            window: shrink((-edge, edge), 0.02),
        };
        let printed = ClosedForm {
            formula: format!("{b}*tan({}*zeta)", (mu * c0).abs().sqrt()),
            profile: Profile::Tan {
                amp: b,
                rate: (mu * c0).abs().sqrt(),
            },
            ..cf.clone()
        };
        let r = (0.75 * edge).min(1.2);
        (cf, Some(printed), "blow-up at the poles of tan", (0.0, (-r, r)))
    };
    let (zeta0, span) = test;
    let u0 = closed.value(zeta0).expect("elementary");
    Ok(CatalogEntry {
        name: "burgers-huxley",
        parameters: params(&[("mu", mu), ("c0", c0)]),
        ode: eta.ode.clone(),
        eta,
        closed_form: Some(closed),
        published,
        figure: figure.into(),
        classify_interval: (0.1, 2.0),
        test: Some(TestSetup { zeta0, u0, span }),
        convective: None,
    })
}

/// Parameter names with defaults and one-line descriptions.
pub fn schema(name: &str) -> Option<&'static [(&'static str, f64, &'static str)]> {
    Some(match name {
        "fisher" => &[(
            "c2",
            0.5,
            "integration constant, c1 = (4/3)c2; closed forms at c2 = 1/2 (dark soliton) and c2 = 1/4 (sn wave)",
        )],
        "pendulum" => &[("m", 1.0, "elliptic parameter m = 8/(c3 + 4) > 0; u = 2 am(sqrt(2/m) zeta | m)")],
        "sine-pendulum" => &[("c0", 1.0, "integration constant; branches |c0| < 2, c0 = 2, c0 = -2, |c0| > 2")],
        "burgers-huxley" => &[
            ("mu", 1.0, "nonlinearity mu != 0; amplitude sqrt(c0/mu)"),
            ("c0", 1.0, "integration constant; branches c0/mu > 0, c0 = 0, c0/mu < 0"),
        ],
        _ => return None,
    })
}

/// The parameter regimes with exact solutions, one line each.
pub fn cases(name: &str) -> &'static [&'static str] {
    match name {
        "fisher" => &[
            "c2 = 1/2: u = 1 - 1.5 sech^2(zeta/sqrt(2)), a dark soliton between u = 1 and u = -1/2",
            "c2 = 1/4: u = (1 - sqrt(3))/2 + sqrt(3) sn^2(zeta/(sqrt(2) 3^(1/4)) | 2), periodic",
        ],
        "pendulum" => &[
            "m > 0: u = 2 am(sqrt(2/m) zeta | m); rotating for m < 1, separatrix at m = 1, bounded |zeta| for m > 1",
        ],
        "sine-pendulum" => &[
            "|c0| < 2: u = 2 atan((2 + c0)/w tanh(w zeta/2)), w = sqrt(4 - c0^2), a kink",
            "c0 = 2: u = 2 atan(2 zeta)",
            "c0 = -2: u = 2 acot(2 zeta)",
            "|c0| > 2: u = 2 atan((2 + c0)/w tan(w zeta/2)), w = sqrt(c0^2 - 4), unwrapped across the poles",
        ],
        "burgers-huxley" => &[
            "c0/mu > 0: u = a tanh(mu a zeta), a = sqrt(c0/mu)",
            "c0 = 0: u = 1/(mu zeta)",
            "c0/mu < 0: u = -b tan(mu b zeta), b = sqrt(-c0/mu), for |zeta| < pi/(2 |mu| b)",
        ],
        _ => &[],
    }
}

/// Build an entry by name; missing parameters take their defaults.
pub fn by_name(name: &str, given: &BTreeMap<String, f64>) -> Result<CatalogEntry, CatalogError> {
    let schema = schema(name).ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))?;
    if let Some(extra) = given.keys().find(|k| !schema.iter().any(|(n, _, _)| n == k)) {
        return Err(CatalogError::UnknownParameter {
            entry: name.to_string(),
            name: extra.clone(),
        });
    }
    let get = |p: &str| {
        given
            .get(p)
            .copied()
            .unwrap_or_else(|| schema.iter().find(|(n, _, _)| *n == p).expect("in schema").1)
    };
    match name {
        "fisher" => fisher(get("c2")),
        "pendulum" => pendulum(get("m")),
        "sine-pendulum" => sine_pendulum(get("c0")),
        "burgers-huxley" => burgers_huxley(get("mu"), get("c0")),
        _ => unreachable!("schema covers every name"),
    }
}
