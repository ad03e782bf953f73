use super::flow::Flow;
use super::{lattice, Event, EventKind, InvertError, Sample, SolutionCurve};
use crate::abel::EtaField;
use crate::numeric::{linspace, roots};

const ROOT_TOL: f64 = 1e-12;
const BLOW_UP: f64 = 1e8;
const EDGE_TINY: f64 = 1e-12;
// |h| at a boundary, relative to the largest |h| met on the branch, below
// which the boundary is an equilibrium rather than a turning point
const EQUILIBRIUM_H: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertOptions {
    pub max_turning_points: usize,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            max_turning_points: 8,
        }
    }
}

/// `ζ(u) = ∫_{u0}^{u} dr/η(r)` for each `u` in `u_grid`, as `(u, ζ)` pairs.
/// `η` may have a square-root zero at the ends of the range, not inside it.
pub fn quadrature_map(eta: &EtaField, u0: f64, u_grid: &[f64]) -> Result<Vec<(f64, f64)>, InvertError> {
    let lo = u_grid.iter().copied().fold(u0, f64::min);
    let hi = u_grid.iter().copied().fold(u0, f64::max);
    let flow = Flow { eta: &eta.eta, accept: 0.0 };
    let sign = if lo < hi {
        check_single_signed(&flow, lo, hi)?
    } else {
        1.0
    };
    let singular = |u: f64| (u == lo || u == hi) && flow.inv(u).is_none_or(|w| w > 1e12);
    u_grid
        .iter()
        .map(|&u| {
            let t = flow.time(u0, u, singular(u0), singular(u))?;
            Ok((u, sign * (u - u0).signum() * t))
        })
        .collect()
}

// sign of η strictly inside [lo, hi], or the first point where it fails
fn check_single_signed(flow: &Flow, lo: f64, hi: f64) -> Result<f64, InvertError> {
    let probe = |u: f64| flow.eta.value(u).ok().filter(|v| *v != 0.0);
    let grid = linspace(lo, hi, 515);
    let inner = &grid[1..grid.len() - 1];
    let sign = probe(inner[inner.len() / 2])
        .ok_or(InvertError::InteriorZero(inner[inner.len() / 2]))?
        .signum();
    let good = |u: f64| probe(u).is_some_and(|v| v.signum() == sign);
    let mid = inner[inner.len() / 2];
    for &u in inner {
        if !good(u) {
            let edge = roots::bisect_boundary(good, mid, u);
            return Err(InvertError::InteriorZero(edge));
        }
    }
    Ok(sign)
}

pub fn invert(
    eta: &EtaField,
    zeta0: f64,
    u0: f64,
    span: (f64, f64),
    step: f64,
) -> Result<SolutionCurve, InvertError> {
    invert_with(eta, zeta0, u0, span, step, InvertOptions::default())
}

/// Samples of `u(ζ)` at `ζ0 + j·step` within `span`, starting on the branch
/// `u' = +η(u)` at `ζ0`. At a square-root zero of `η` the walk reflects onto
/// `u' = -η` (a turning point); at an equilibrium it stops.
pub fn invert_with(
    eta: &EtaField,
    zeta0: f64,
    u0: f64,
    span: (f64, f64),
    step: f64,
    options: InvertOptions,
) -> Result<SolutionCurve, InvertError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(InvertError::InvalidStep(step));
    }
    let range = lattice(zeta0, span, step);
    let mut curve = SolutionCurve {
        samples: vec![],
        events: vec![],
        base_zeta: zeta0,
        base_u: u0,
    };
    if range.is_empty() {
        return Ok(curve);
    }
    let (jlo, jhi) = (*range.start(), *range.end());
    let start = Start::classify(eta, u0)?;

    let backward_times: Vec<f64> = (1..=(-jlo).max(0)).map(|j| j as f64 * step).collect();
    let forward_times: Vec<f64> = (1..=jhi.max(0)).map(|j| j as f64 * step).collect();
    let back = Walker::new(eta, options).run(&start, -1.0, &backward_times)?;
    let fwd = Walker::new(eta, options).run(&start, 1.0, &forward_times)?;

    let zeta_at = |j: i64| zeta0 + j as f64 * step;
    for (i, p) in back.points.iter().enumerate().rev() {
        let j = -(i as i64 + 1);
        if j <= jhi {
            // du/dζ = -du/dt on the backward walk
            curve.samples.push(Sample {
                zeta: zeta_at(j),
                u: p.u,
                u_prime: -p.u_prime,
            });
        }
    }
    if jlo <= 0 && jhi >= 0 {
        curve.samples.push(Sample {
            zeta: zeta0,
            u: u0,
            u_prime: start.u_prime(),
        });
    }
    for (i, p) in fwd.points.iter().enumerate() {
        let j = i as i64 + 1;
        if j >= jlo {
            curve.samples.push(Sample {
                zeta: zeta_at(j),
                u: p.u,
                u_prime: p.u_prime,
            });
        }
    }
    for e in back.events.iter().rev() {
        curve.events.push(Event {
            zeta: zeta0 - e.t,
            u: e.u,
            kind: e.kind,
        });
    }
    for e in &fwd.events {
        curve.events.push(Event {
            zeta: zeta0 + e.t,
            u: e.u,
            kind: e.kind,
        });
    }
    curve.events.dedup_by(|a, b| a.zeta == b.zeta && a.kind == b.kind);
    Ok(curve)
}

/// How the initial point sits relative to the zeros of `η`.
enum Start {
    Regular { u: f64, eta: f64 },
    /// `η(u0) = 0`, `h(u0) ≠ 0`: motion only possible towards `side`.
    Turning { u: f64, side: f64 },
    Equilibrium { u: f64 },
}

impl Start {
    fn classify(eta: &EtaField, u0: f64) -> Result<Start, InvertError> {
        // η may fail to evaluate exactly at a boundary (a radicand rounding
        // below zero); that counts as a zero if a neighbour is admissible
        match eta.value(u0) {
            Ok(e) if e.is_finite() && e != 0.0 => return Ok(Start::Regular { u: u0, eta: e }),
            _ => {}
        }
        let h = eta.ode.h.value(u0).map_err(|_| InvertError::NotAdmissible(u0))?;
        if h.abs() <= EDGE_TINY {
            return Ok(Start::Equilibrium { u: u0 });
        }
        let delta = 1e-9 * (1.0 + u0.abs());
        for side in [1.0, -1.0] {
            if matches!(eta.value(u0 + side * delta), Ok(v) if v != 0.0 && v.is_finite()) {
                return Ok(Start::Turning { u: u0, side });
            }
        }
        Err(InvertError::NotAdmissible(u0))
    }

    fn u_prime(&self) -> f64 {
        match self {
            Start::Regular { eta, .. } => *eta,
            _ => 0.0,
        }
    }
}

struct Point {
    u: f64,
    u_prime: f64,
}

struct WalkEvent {
    t: f64,
    u: f64,
    kind: EventKind,
}

#[derive(Default)]
struct Walk {
    points: Vec<Point>,
    events: Vec<WalkEvent>,
}

enum Boundary {
    Turning(f64),
    Equilibrium(f64),
}

/// Integrates `du/dt = s·η(u)`, `t ≥ 0`, recording `u` at the requested
/// times. `s` flips at turning points.
struct Walker<'a> {
    eta: &'a EtaField,
    flow: Flow<'a>,
    options: InvertOptions,
    walk: Walk,
    s: f64,
    h_scale: f64,
    eta_scale: f64,
}

impl<'a> Walker<'a> {
    fn new(eta: &'a EtaField, options: InvertOptions) -> Walker<'a> {
        Walker {
            eta,
            flow: Flow { eta: &eta.eta, accept: 0.0 },
            options,
            walk: Walk::default(),
            s: 1.0,
            h_scale: 0.0,
            eta_scale: 0.0,
        }
    }

    fn run(mut self, start: &Start, s0: f64, times: &[f64]) -> Result<Walk, InvertError> {
        if times.is_empty() {
            return Ok(self.walk);
        }
        self.s = s0;
        let (mut u, mut dir, mut singular) = match *start {
            Start::Equilibrium { u } => {
                self.walk.points = times.iter().map(|_| Point { u, u_prime: 0.0 }).collect();
                return Ok(self.walk);
            }
            Start::Regular { u, eta } => (u, (s0 * eta).signum(), false),
            Start::Turning { u, side } => {
                // motion towards `side` needs s·η to point that way
                let e = self.eta.value(u + side * 1e-9 * (1.0 + u.abs())).unwrap_or(side);
                if (s0 * e).signum() != side {
                    self.s = -s0;
                    self.walk.events.push(WalkEvent {
                        t: 0.0,
                        u,
                        kind: EventKind::TurningPoint,
                    });
                }
                (u, side, true)
            }
        };
        let mut t = 0.0;
        let mut next = 0usize;
        let mut turns = 0;
        loop {
            // one monotone segment starting at u
            match self.segment(u, t, dir, singular, times, &mut next)? {
                SegmentEnd::Done => return Ok(self.walk),
                SegmentEnd::Stopped => return Ok(self.walk),
                SegmentEnd::Turned { u: ub, t: tb } => {
                    turns += 1;
                    if turns > self.options.max_turning_points {
                        self.walk.events.push(WalkEvent {
                            t: tb,
                            u: ub,
                            kind: EventKind::Truncated,
                        });
                        return Ok(self.walk);
                    }
                    self.walk.events.push(WalkEvent {
                        t: tb,
                        u: ub,
                        kind: EventKind::TurningPoint,
                    });
                    self.s = -self.s;
                    u = ub;
                    t = tb;
                    dir = -dir;
                    singular = true;
                }
            }
        }
    }

    fn admissible(&self, u: f64, dir: f64) -> bool {
        matches!(self.eta.value(u), Ok(v) if v.is_finite() && v != 0.0 && (self.s * v).signum() == dir)
    }

    fn u_prime(&self, u: f64) -> f64 {
        self.s * self.eta.value(u).unwrap_or(0.0)
    }

    fn record(&mut self, u: f64) {
        let u_prime = self.u_prime(u);
        self.walk.points.push(Point { u, u_prime });
    }

    fn segment(
        &mut self,
        u_start: f64,
        t_start: f64,
        dir: f64,
        singular_start: bool,
        times: &[f64],
        next: &mut usize,
    ) -> Result<SegmentEnd, InvertError> {
        let (mut lo, mut t_lo, mut lo_sing) = (u_start, t_start, singular_start);
        let mut delta = 1e-3 * lo.abs().max(1.0);
        loop {
            let cand = lo + dir * delta;
            if cand.abs() > BLOW_UP || !cand.is_finite() {
                self.walk.events.push(WalkEvent {
                    t: t_lo,
                    u: lo,
                    kind: EventKind::Truncated,
                });
                return Ok(SegmentEnd::Stopped);
            }
            let boundary = self.find_boundary(lo, cand, dir);
            let Some(boundary) = boundary else {
                let dt = self.flow.time(lo, cand, lo_sing, false)?;
                self.solve_piece(lo, t_lo, lo_sing, cand, t_lo + dt, false, times, next)?;
                if *next >= times.len() {
                    return Ok(SegmentEnd::Done);
                }
                lo = cand;
                t_lo += dt;
                lo_sing = false;
                delta = (2.0 * delta).min(0.5 * lo.abs().max(1.0));
                continue;
            };
            return match boundary {
                Boundary::Turning(ub) => {
                    let dt = self.flow.time(lo, ub, lo_sing, true)?;
                    let tb = t_lo + dt;
                    self.solve_piece(lo, t_lo, lo_sing, ub, tb, true, times, next)?;
                    if *next >= times.len() {
                        Ok(SegmentEnd::Done)
                    } else {
                        Ok(SegmentEnd::Turned { u: ub, t: tb })
                    }
                }
                Boundary::Equilibrium(ub) => {
                    self.approach(lo, t_lo, lo_sing, ub, times, next)?;
                    Ok(SegmentEnd::Stopped)
                }
            };
        }
    }

    /// Boundary of the branch between `lo` (admissible) and `cand`, if any.
    fn find_boundary(&mut self, lo: f64, cand: f64, dir: f64) -> Option<Boundary> {
        let field = self.eta;
        let h = |u: f64| field.ode.h.value(u).ok();
        if let Some(hl) = h(lo) {
            self.h_scale = self.h_scale.max(hl.abs());
        }
        if let Ok(e) = self.eta.value(lo) {
            self.eta_scale = self.eta_scale.max(e.abs());
        }
        // a double zero of η (an equilibrium approached from one side) keeps
        // the sign of η but shows up as a sign change of h
        if let (Some(ha), Some(hb)) = (h(lo), h(cand)) {
            if ha != 0.0 && hb != 0.0 && ha.signum() != hb.signum() {
                // bisection on the sign: Brent crawls on the odd-order zeros
                // of h that sit under double zeros of η
                let uh = roots::bisect_boundary(|u| h(u).is_some_and(|v| v.signum() == ha.signum()), lo, cand);
                let small = match self.eta.value(uh) {
                    Ok(e) => e.abs() <= EQUILIBRIUM_H * (1.0 + self.eta_scale),
                    Err(_) => true,
                };
                if small {
                    return Some(Boundary::Equilibrium(uh));
                }
            }
        }
        if self.admissible(cand, dir) {
            return None;
        }
        let ub = roots::bisect_boundary(|u| self.admissible(u, dir), lo, cand);
        let hb = h(ub).unwrap_or(f64::INFINITY);
        if hb.abs() <= EQUILIBRIUM_H * (1.0 + self.h_scale) {
            Some(Boundary::Equilibrium(ub))
        } else {
            Some(Boundary::Turning(ub))
        }
    }

    /// Record every requested time in `(tx, ty]`, all of which lie on the
    /// piece from `x` to `y`.
    #[allow(clippy::too_many_arguments)]
    fn solve_piece(
        &mut self,
        x: f64,
        tx: f64,
        sing_x: bool,
        y: f64,
        ty: f64,
        sing_y: bool,
        times: &[f64],
        next: &mut usize,
    ) -> Result<(), InvertError> {
        let (mut ua, mut ta, mut sing_a) = (x, tx, sing_x);
        while *next < times.len() && times[*next] <= ty {
            let target = times[*next];
            let u = if target >= ty {
                y
            } else if target <= ta {
                ua
            } else {
                let mid = 0.5 * (ua + y);
                let flow = &self.flow;
                let mut failure = None;
                let f = |u: f64| {
                    let r = if sing_y && (u - mid) * (y - mid) > 0.0 {
                        flow.time(u, y, false, true).map(|d| ty - d - target)
                    } else {
                        flow.time(ua, u, sing_a, false).map(|d| ta + d - target)
                    };
                    r.map_err(|e| failure = Some(e)).ok()
                };
                match roots::brent(f, ua, y, ROOT_TOL) {
                    Ok(u) => u,
                    // target ≤ ty, so a missing sign change is disagreement
                    // between two quadratures of the same piece
                    Err(roots::RootError::NotBracketed { fa, fb, .. }) if failure.is_none() => {
                        if fb < 0.0 {
                            y
                        } else if fa > 0.0 {
                            ua
                        } else {
                            return Err(InvertError::BracketFailure(target));
                        }
                    }
                    Err(_) => {
                        return Err(match failure {
                            Some(e) => InvertError::QuadratureFailure(e),
                            None => InvertError::BracketFailure(target),
                        })
                    }
                }
            };
            self.record(u);
            if u != ua {
                ua = u;
                ta = target;
                sing_a = false;
            }
            *next += 1;
        }
        Ok(())
    }

    /// Approach the equilibrium `ub` by halving the remaining distance; the
    /// travel time diverges, so stop once `u` can no longer move.
    fn approach(
        &mut self,
        lo: f64,
        t_lo: f64,
        lo_sing: bool,
        ub: f64,
        times: &[f64],
        next: &mut usize,
    ) -> Result<(), InvertError> {
        let (mut p, mut tp, mut sing) = (lo, t_lo, lo_sing);
        self.flow.accept = 1e-7;
        loop {
            let q = p + 0.5 * (ub - p);
            let stalled = q == p || q == ub;
            let at_rest = match (self.eta.value(q), self.eta.ode.h.value(q)) {
                (Ok(e), Ok(h)) => e == 0.0 || (e.abs() < EDGE_TINY && h.abs() < EDGE_TINY),
                _ => true,
            };
            if stalled || at_rest {
                self.walk.events.push(WalkEvent {
                    t: tp,
                    u: p,
                    kind: EventKind::DomainEdge,
                });
                return Ok(());
            }
            // close to the equilibrium η is mostly rounding error and the
            // travel time stops converging; that is as far as u can be resolved
            let near = |w: &Walker| {
                matches!(w.eta.value(p), Ok(e) if e.abs() <= 1e-3 * (1.0 + w.eta_scale))
            };
            let solved = self
                .flow
                .time(p, q, sing, false)
                .map_err(InvertError::from)
                .and_then(|dt| {
                    self.solve_piece(p, tp, sing, q, tp + dt, false, times, next)?;
                    Ok(dt)
                });
            let dt = match solved {
                Ok(dt) => dt,
                Err(InvertError::QuadratureFailure(_)) if near(self) => {
                    let t_edge = self.walk.points.len().min(times.len());
                    let t = if t_edge > 0 { times[t_edge - 1].max(tp) } else { tp };
                    self.walk.events.push(WalkEvent {
                        t,
                        u: p,
                        kind: EventKind::DomainEdge,
                    });
                    return Ok(());
                }
                Err(e) => return Err(e),
            };
            if *next >= times.len() {
                return Ok(());
            }
            p = q;
            tp += dt;
            sing = false;
        }
    }
}

enum SegmentEnd {
    Done,
    Stopped,
    Turned { u: f64, t: f64 },
}
