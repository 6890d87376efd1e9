//! Majorant functions `h`, the growth `λ_h(1/(1-r)) = exp(h(1-r)/(1-r))`,
//! positive sequences and the transformations between them.
//!
//! A [`RegularMajorant`] is either a piecewise-linear table or one of a few
//! closed forms. Closed forms matter near the origin: integrals such as
//! `∫₀^L h(t)/t dt` and the weight `exp(-h(s)/s)` are decided by the
//! behaviour of `h(s)/s` as `s → 0`, which a finite table cannot carry.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::circle_sets::ArcSet;
use crate::error::{arg, domain, Result};
use crate::quadrature::{integrate, Tolerance};

/// Relative width of the ramps that stand in for jumps of a step function.
pub const STEP_RAMP_WIDTH: f64 = 1e-9;

const INV_E: f64 = 1.0 / std::f64::consts::E;

/// Piecewise-linear interpolant on breakpoints in `(0, 1]`.
///
/// Left of the first breakpoint the line through the first two breakpoints
/// is continued toward the origin and clamped at zero; right of the last
/// breakpoint the last value is held.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    // The continuation toward 0 passes through the origin (up to rounding).
    anchored: bool,
}

impl Table {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(arg("breakpoints and values differ in length"));
        }
        if breakpoints.len() < 2 {
            return Err(arg("a majorant table needs at least two breakpoints"));
        }
        if breakpoints[0] <= 0.0 {
            return Err(arg("first breakpoint must be positive"));
        }
        if *breakpoints.last().unwrap() > 1.0 {
            return Err(arg("breakpoints must lie in (0, 1]"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(arg("breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(arg("majorant values must be finite and nonnegative"));
        }
        let (x0, x1, y0, y1) = (breakpoints[0], breakpoints[1], values[0], values[1]);
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - slope * x0;
        let anchored = intercept.abs() <= 1e-12 * y0.max(y1).max(f64::MIN_POSITIVE);
        Ok(Self {
            breakpoints,
            values,
            anchored,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn leading_line(&self) -> (f64, f64) {
        let (x0, x1) = (self.breakpoints[0], self.breakpoints[1]);
        let (y0, y1) = (self.values[0], self.values[1]);
        if self.anchored {
            return (0.0, y0 / x0);
        }
        let slope = (y1 - y0) / (x1 - x0);
        (y0 - slope * x0, slope)
    }

    fn eval(&self, x: f64) -> f64 {
        let xs = &self.breakpoints;
        let ys = &self.values;
        if x <= 0.0 {
            return 0.0;
        }
        if x < xs[0] {
            if self.anchored {
                return x * (ys[0] / xs[0]);
            }
            let (a, b) = self.leading_line();
            return (a + b * x).max(0.0);
        }
        let last = xs.len() - 1;
        if x >= xs[last] {
            return ys[last];
        }
        let i = xs.partition_point(|&b| b <= x) - 1;
        if x == xs[i] {
            return ys[i];
        }
        ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / (xs[i + 1] - xs[i])
    }

    /// Linear pieces `h = a + b x` covering `(0, ∞)`, as `(lo, hi, a, b)`.
    fn pieces(&self) -> Vec<(f64, f64, f64, f64)> {
        let xs = &self.breakpoints;
        let ys = &self.values;
        let mut out = Vec::with_capacity(xs.len() + 2);
        let (a0, b0) = self.leading_line();
        if a0 < 0.0 && b0 > 0.0 {
            let root = -a0 / b0;
            out.push((0.0, root, 0.0, 0.0));
            out.push((root, xs[0], a0, b0));
        } else {
            out.push((0.0, xs[0], a0, b0));
        }
        for i in 0..xs.len() - 1 {
            let b = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            out.push((xs[i], xs[i + 1], ys[i] - b * xs[i], b));
        }
        out.push((*xs.last().unwrap(), f64::INFINITY, *ys.last().unwrap(), 0.0));
        out
    }
}

/// The functional form of a majorant.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Table(Table),
    /// `x^a` on `(0, 1]`, held at 1 beyond.
    Power(f64),
    /// `x log(1/x)` on `(0, 1]`, zero beyond.
    XLogInv,
    /// `1/log(1/x)` on `(0, 1/e)`, held at 1 beyond.
    InvLog,
    Zero,
    /// `base(x) + x log(1/x)`.
    PlusXLogInv(Box<Shape>),
}

impl Shape {
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            Shape::Table(t) => t.eval(x),
            Shape::Power(a) => {
                if x >= 1.0 {
                    1.0
                } else {
                    x.powf(*a)
                }
            }
            Shape::XLogInv => {
                if x >= 1.0 {
                    0.0
                } else {
                    -x * x.ln()
                }
            }
            Shape::InvLog => {
                if x >= INV_E {
                    1.0
                } else {
                    -1.0 / x.ln()
                }
            }
            Shape::Zero => 0.0,
            Shape::PlusXLogInv(base) => base.eval(x) + Shape::XLogInv.eval(x),
        }
    }

    fn ratio(&self, x: f64) -> f64 {
        match self {
            Shape::Power(a) if x < 1.0 => x.powf(a - 1.0),
            Shape::XLogInv if x < 1.0 => -x.ln(),
            Shape::InvLog if x < INV_E => -1.0 / (x * x.ln()),
            Shape::Zero => 0.0,
            Shape::PlusXLogInv(base) => base.ratio(x) + Shape::XLogInv.ratio(x),
            _ => self.eval(x) / x,
        }
    }

    fn ratio_at_origin(&self) -> Option<f64> {
        match self {
            Shape::Table(t) => {
                let (a, b) = t.leading_line();
                if t.anchored {
                    Some(b)
                } else if a > 0.0 {
                    None
                } else {
                    Some(0.0)
                }
            }
            Shape::Power(a) => match a.partial_cmp(&1.0) {
                Some(Ordering::Less) => None,
                Some(Ordering::Equal) => Some(1.0),
                _ => Some(0.0),
            },
            Shape::XLogInv | Shape::InvLog | Shape::PlusXLogInv(_) => None,
            Shape::Zero => Some(0.0),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Shape::Table(t) => t.breakpoints.clone(),
            Shape::InvLog => vec![INV_E],
            Shape::PlusXLogInv(base) => base.breakpoints(),
            _ => Vec::new(),
        }
    }
}

/// A majorant function `h` with `h(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularMajorant {
    shape: Shape,
}

impl RegularMajorant {
    pub fn from_table(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            shape: Shape::Table(Table::new(breakpoints, values)?),
        })
    }

    /// Samples `f` at `n` points spread geometrically over `[lo, 1]`.
    pub fn sampled(f: impl Fn(f64) -> f64, lo: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && lo < 1.0) || n < 2 {
            return Err(arg("sampling needs 0 < lo < 1 and at least two points"));
        }
        let ratio = (1.0 / lo).ln() / (n - 1) as f64;
        let mut xs: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
        xs[n - 1] = 1.0;
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::from_table(xs, ys)
    }

    /// Uniform samples of `f` on `[lo, hi] ⊂ (0, 1]`.
    pub fn sampled_uniform(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi <= 1.0) || n < 2 {
            return Err(arg("uniform sampling needs 0 < lo < hi <= 1 and two points"));
        }
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::from_table(xs, ys)
    }

    pub fn power(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(arg("power majorant needs a positive exponent"));
        }
        Ok(Self {
            shape: Shape::Power(a),
        })
    }

    pub fn identity() -> Self {
        Self {
            shape: Shape::Power(1.0),
        }
    }

    pub fn sqrt() -> Self {
        Self {
            shape: Shape::Power(0.5),
        }
    }

    pub fn x_log_inv() -> Self {
        Self {
            shape: Shape::XLogInv,
        }
    }

    pub fn inv_log() -> Self {
        Self {
            shape: Shape::InvLog,
        }
    }

    pub fn zero() -> Self {
        Self { shape: Shape::Zero }
    }

    /// The constant `value` on `(0, ∞)`; used for the Legendre-type identity
    /// `inf nx + c²/x = 2c√n`. It does not vanish at the origin.
    pub fn constant(value: f64) -> Result<Self> {
        Self::from_table(vec![0.5, 1.0], vec![value, value])
    }

    /// Parses `x`/`identity`, `sqrt`, `square`, `xlog`, `invlog`, `zero` or
    /// `pow:<a>`.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "x" | "identity" | "linear" => Ok(Self::identity()),
            "sqrt" => Ok(Self::sqrt()),
            "square" | "x2" => Self::power(2.0),
            "xlog" | "x_log_inv" => Ok(Self::x_log_inv()),
            "invlog" | "inv_log" => Ok(Self::inv_log()),
            "zero" => Ok(Self::zero()),
            other => match other.strip_prefix("pow:") {
                Some(a) => Self::power(a.parse().map_err(|_| arg(format!("bad exponent {a:?}")))?),
                None => Err(arg(format!("unknown majorant name {name:?}"))),
            },
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn as_table(&self) -> Option<&Table> {
        match &self.shape {
            Shape::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.shape.eval(x)
    }

    /// `h(x)/x`, evaluated in closed form where available.
    pub fn ratio(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.ratio_at_origin().unwrap_or(f64::INFINITY);
        }
        self.shape.ratio(x)
    }

    /// `lim_{x→0+} h(x)/x`, or `None` when it is infinite.
    pub fn ratio_at_origin(&self) -> Option<f64> {
        self.shape.ratio_at_origin()
    }

    /// Abscissae where `h` has a kink; quadrature splits there.
    pub fn kinks(&self) -> Vec<f64> {
        self.shape.breakpoints()
    }

    /// `h + x log(1/x)`.
    pub fn plus_x_log_inv(&self) -> Self {
        Self {
            shape: Shape::PlusXLogInv(Box::new(self.shape.clone())),
        }
    }

    /// A point `x` with `h(x) < y` and `h(x') ≥ y` for some `x'` just above
    /// it, found by bracketing along `2^{-80}·2^j` and bisecting; `None` if
    /// `h` stays below `y` on `(0, 2π]`.
    pub fn inverse_below(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return Some(0.0);
        }
        let mut lo = 0.0_f64;
        let mut x = 0.5f64.powi(80);
        let hi = loop {
            if self.eval(x) >= y {
                break x;
            }
            lo = x;
            if x >= std::f64::consts::TAU {
                return None;
            }
            x = (2.0 * x).min(std::f64::consts::TAU);
        };
        let mut hi = hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

impl fmt::Display for RegularMajorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn name(s: &Shape) -> String {
            match s {
                Shape::Table(t) => format!("table[{}]", t.breakpoints.len()),
                Shape::Power(a) if *a == 1.0 => "x".into(),
                Shape::Power(a) if *a == 0.5 => "sqrt".into(),
                Shape::Power(a) => format!("pow:{a}"),
                Shape::XLogInv => "xlog".into(),
                Shape::InvLog => "invlog".into(),
                Shape::Zero => "zero".into(),
                Shape::PlusXLogInv(b) => format!("{}+xlog", name(b)),
            }
        }
        f.write_str(&name(&self.shape))
    }
}

/// JSON form: tables as `{breakpoints, values}`, closed forms by name.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MajorantDoc {
    Table {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Named {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<MajorantDoc>>,
    },
}

impl MajorantDoc {
    fn from_shape(s: &Shape) -> Self {
        match s {
            Shape::Table(t) => MajorantDoc::Table {
                breakpoints: t.breakpoints.clone(),
                values: t.values.clone(),
            },
            Shape::PlusXLogInv(b) => MajorantDoc::Named {
                name: "plus_xlog".into(),
                base: Some(Box::new(Self::from_shape(b))),
            },
            other => MajorantDoc::Named {
                name: RegularMajorant {
                    shape: other.clone(),
                }
                .to_string(),
                base: None,
            },
        }
    }

    fn into_majorant(self) -> Result<RegularMajorant> {
        match self {
            MajorantDoc::Table {
                breakpoints,
                values,
            } => RegularMajorant::from_table(breakpoints, values),
            MajorantDoc::Named { name, base: Some(b) } if name == "plus_xlog" => {
                Ok(b.into_majorant()?.plus_x_log_inv())
            }
            MajorantDoc::Named { name, .. } => RegularMajorant::from_name(&name),
        }
    }
}

impl Serialize for RegularMajorant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MajorantDoc::from_shape(&self.shape).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RegularMajorant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MajorantDoc::deserialize(d)?
            .into_majorant()
            .map_err(serde::de::Error::custom)
    }
}

/// `λ_h(1/(1-r)) = exp(h(1-r)/(1-r))`.
pub fn eval_lambda_h(h: &RegularMajorant, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius {r} is outside [0, 1)")));
    }
    Ok(h.ratio(1.0 - r).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub increasing: bool,
    pub ratio_decreasing: bool,
    pub max_violation: f64,
}

/// Checks that `h` is nondecreasing and `h(x)/x` nonincreasing on a uniform
/// grid over the breakpoint hull (over `[1/grid_size, 1]` for closed forms),
/// together with every breakpoint.
pub fn check_regularity(h: &RegularMajorant, grid_size: usize) -> RegularityReport {
    let grid_size = grid_size.max(2);
    let mut grid = match &h.shape {
        Shape::Table(t) => {
            let (lo, hi) = (t.breakpoints[0], *t.breakpoints.last().unwrap());
            let mut g: Vec<f64> = (0..grid_size)
                .map(|i| lo + (hi - lo) * i as f64 / (grid_size - 1) as f64)
                .collect();
            g.extend_from_slice(&t.breakpoints);
            g
        }
        other => {
            let lo = 1.0 / grid_size as f64;
            let mut g: Vec<f64> = (0..grid_size)
                .map(|i| lo + (1.0 - lo) * i as f64 / (grid_size - 1) as f64)
                .collect();
            g.extend(other.breakpoints().into_iter().filter(|&b| b > lo && b < 1.0));
            g
        }
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut inc_defect: f64 = 0.0;
    let mut ratio_defect: f64 = 0.0;
    let mut inc_ok = true;
    let mut ratio_ok = true;
    for w in grid.windows(2) {
        let (h0, h1) = (h.eval(w[0]), h.eval(w[1]));
        let (r0, r1) = (h.ratio(w[0]), h.ratio(w[1]));
        let d = h0 - h1;
        if d > 0.0 {
            inc_defect = inc_defect.max(d);
            if d > 1e-12 * h0.abs().max(1.0) {
                inc_ok = false;
            }
        }
        let d = r1 - r0;
        if d > 0.0 {
            ratio_defect = ratio_defect.max(d);
            if d > 1e-12 * r0.abs().max(1.0) {
                ratio_ok = false;
            }
        }
    }
    let max_violation = if inc_ok && ratio_ok {
        0.0
    } else {
        inc_defect.max(ratio_defect)
    };
    RegularityReport {
        increasing: inc_ok,
        ratio_decreasing: ratio_ok,
        max_violation,
    }
}

/// The least concave majorant of the points (in any order) together with
/// the origin, held constant after the (last) largest value.
///
/// The returned table carries an extra breakpoint at the midpoint of the
/// first hull segment so that its continuation toward 0 runs through the
/// origin.
pub fn least_concave_majorant(samples: &[(f64, f64)]) -> Result<RegularMajorant> {
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(x, y)| !(x == 0.0 && y == 0.0))
        .collect();
    if pts.is_empty() {
        return Err(arg("least concave majorant of an empty sample"));
    }
    if pts.iter().any(|&(x, y)| !(x > 0.0 && x <= 1.0) || !(y >= 0.0 && y.is_finite())) {
        return Err(arg("samples need x in (0, 1] and finite y >= 0"));
    }
    // Sort by abscissa, keeping the largest value at repeated abscissae.
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    pts.dedup_by(|later, kept| later.0 == kept.0);
    let peak = pts
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 >= pts[best].1 { i } else { best });

    let mut hull: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for &p in &pts[..=peak] {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let first = hull[1];
    let mut xs = vec![0.5 * first.0];
    let mut ys = vec![0.5 * first.1];
    for &(x, y) in &hull[1..] {
        xs.push(x);
        ys.push(y);
    }
    RegularMajorant::from_table(xs, ys)
}

/// Where a positive sequence comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceRule {
    /// `c_n = 1/n`.
    OneOverN,
    /// `c_n = 1/log(n+2)`.
    OneOverLog,
    Explicit,
}

/// A sequence `c_1, c_2, …` of positive reals. Rule-based sequences are
/// unbounded and decreasing; explicit ones are finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositiveSequence {
    rule: SequenceRule,
    terms: Vec<f64>,
    #[serde(skip)]
    suffix_max: Vec<f64>,
}

impl PositiveSequence {
    pub fn one_over_n() -> Self {
        Self::from_rule(SequenceRule::OneOverN)
    }

    pub fn one_over_log() -> Self {
        Self::from_rule(SequenceRule::OneOverLog)
    }

    fn from_rule(rule: SequenceRule) -> Self {
        Self {
            rule,
            terms: Vec::new(),
            suffix_max: Vec::new(),
        }
    }

    pub fn explicit(terms: Vec<f64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(arg("explicit sequence has no terms"));
        }
        if let Some(t) = terms.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(arg(format!("sequence term {t} is not positive")));
        }
        let mut suffix_max = terms.clone();
        for i in (0..suffix_max.len().saturating_sub(1)).rev() {
            suffix_max[i] = suffix_max[i].max(suffix_max[i + 1]);
        }
        Ok(Self {
            rule: SequenceRule::Explicit,
            terms,
            suffix_max,
        })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "one_over_n" => Ok(Self::one_over_n()),
            "one_over_log" => Ok(Self::one_over_log()),
            other => Err(arg(format!("unknown sequence rule {other:?}"))),
        }
    }

    pub fn rule(&self) -> SequenceRule {
        self.rule
    }

    /// Number of available terms; `None` for rule-generated sequences.
    pub fn len(&self) -> Option<usize> {
        match self.rule {
            SequenceRule::Explicit => Some(self.terms.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The term `c_n`, 1-based.
    pub fn term(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        match self.rule {
            SequenceRule::OneOverN => Some(1.0 / n as f64),
            SequenceRule::OneOverLog => Some(1.0 / ((n + 2) as f64).ln()),
            SequenceRule::Explicit => self.terms.get(n - 1).copied(),
        }
    }

    /// `sup_{m ≥ n} c_m`. For explicit sequences the supremum runs over the
    /// stored terms only.
    pub fn tail_max(&self, n: usize) -> Option<f64> {
        match self.rule {
            SequenceRule::Explicit => self.suffix_max.get(n.checked_sub(1)?).copied(),
            _ => self.term(n),
        }
    }

    pub fn terms(&self, count: usize) -> Result<Vec<f64>> {
        (1..=count)
            .map(|n| {
                self.term(n)
                    .ok_or_else(|| arg(format!("sequence has no term {n} (needs {count})")))
            })
            .collect()
    }

    /// True when the monotone envelope `sup_{m≥n} c_m` has dropped to `eps`
    /// or below by index `horizon`.
    pub fn verify_null(&self, horizon: usize, eps: f64) -> bool {
        self.tail_max(horizon).is_some_and(|t| t <= eps)
    }
}

impl<'de> Deserialize<'de> for PositiveSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            rule: SequenceRule,
            #[serde(default)]
            terms: Vec<f64>,
        }
        let doc = Doc::deserialize(d)?;
        match doc.rule {
            SequenceRule::Explicit => {
                PositiveSequence::explicit(doc.terms).map_err(serde::de::Error::custom)
            }
            rule => Ok(PositiveSequence::from_rule(rule)),
        }
    }
}

/// Exact comparison `a² · p ≤ b² · q` for positive finite `a`, `b`.
pub fn squared_scaled_le(a: f64, p: u64, b: f64, q: u64) -> bool {
    fn parts(v: f64) -> (u64, i32) {
        let bits = v.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        }
    }
    let (ma, ea) = parts(a);
    let (mb, eb) = parts(b);
    let lhs = BigUint::from(ma) * BigUint::from(ma) * BigUint::from(p);
    let rhs = BigUint::from(mb) * BigUint::from(mb) * BigUint::from(q);
    let (ea2, eb2) = (2 * ea, 2 * eb);
    let base = ea2.min(eb2);
    (lhs << (ea2 - base) as usize) <= (rhs << (eb2 - base) as usize)
}

/// A regularized sequence. Each term is `v·√(m/n)` where `(m, v)` is the
/// start of the run containing `n`; the float terms are that closed form
/// rounded once, while [`check_replacement`] works with the exact squares
/// `v²·m/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Regularized {
    /// Run starts `(m, v)`, increasing in `m`, the first at `m = 1`.
    runs: Vec<(usize, f64)>,
    terms: PositiveSequence,
}

impl Regularized {
    /// The rounded terms.
    pub fn sequence(&self) -> &PositiveSequence {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rounded term `n` (1-based).
    pub fn term(&self, n: usize) -> Option<f64> {
        self.terms.term(n)
    }

    /// Run starts `(m, v)`.
    pub fn runs(&self) -> &[(usize, f64)] {
        &self.runs
    }

    /// `(v, m)` with `c̃_n² = v²·m/n` exactly.
    pub fn exact(&self, n: usize) -> Option<(f64, usize)> {
        if n == 0 || n > self.len() {
            return None;
        }
        let i = self.runs.partition_point(|&(m, _)| m <= n) - 1;
        let (m, v) = self.runs[i];
        Some((v, m))
    }
}

/// Replaces `c` by a larger sequence that is nonincreasing and satisfies
/// `c̃_n ≤ √((n+1)/n) c̃_{n+1}`:
///
/// `c̃_1 = sup_m c_m`, `c̃_{n+1} = max(sup_{m≥n+1} c_m, √(n/(n+1)) c̃_n)`.
///
/// The choice between the two branches is made in exact arithmetic. For
/// explicit sequences the suprema only see the stored terms, so `horizon`
/// may not exceed their count.
pub fn regularize_sequence(c: &PositiveSequence, horizon: usize) -> Result<Regularized> {
    if horizon == 0 {
        return Err(arg("horizon must be at least 1"));
    }
    let first = c
        .tail_max(1)
        .ok_or_else(|| arg("sequence has no first term"))?;
    let mut runs = vec![(1usize, first)];
    let mut out = Vec::with_capacity(horizon);
    out.push(first);
    for n in 2..=horizon {
        let tail = c
            .tail_max(n)
            .ok_or_else(|| arg(format!("sequence has no term {n} (needs {horizon})")))?;
        let (m, v) = *runs.last().unwrap();
        // The branch value squared is v²·m/n; the tail wins if tail²·n > v²·m.
        if !squared_scaled_le(tail, n as u64, v, m as u64) {
            runs.push((n, tail));
            out.push(tail);
        } else {
            let rounded = v / (n as f64 / m as f64).sqrt();
            out.push(rounded.min(out[n - 2]));
        }
    }
    Ok(Regularized {
        runs,
        terms: PositiveSequence::explicit(out)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReplacementReport {
    /// `c̃_n ≥ c_n`.
    pub dominates: bool,
    /// `c̃_{n+1} ≤ c̃_n`.
    pub nonincreasing: bool,
    /// `c̃_n ≤ √((n+1)/n) c̃_{n+1}`.
    pub ratio_bound: bool,
    /// First index at which a property fails.
    pub first_failure: Option<usize>,
}

/// Exact check of the three properties of [`regularize_sequence`] on the
/// closed-form terms.
pub fn check_replacement(c: &PositiveSequence, regular: &Regularized) -> ReplacementReport {
    let count = regular.len();
    let mut report = ReplacementReport {
        dominates: true,
        nonincreasing: true,
        ratio_bound: true,
        first_failure: None,
    };
    let fail = |r: &mut ReplacementReport, n: usize| {
        if r.first_failure.is_none() {
            r.first_failure = Some(n);
        }
    };
    for n in 1..=count {
        let (v, m) = regular.exact(n).unwrap();
        // c_n² ≤ v²·m/n.
        if c.term(n).is_some_and(|cn| !squared_scaled_le(cn, n as u64, v, m as u64)) {
            report.dominates = false;
            fail(&mut report, n);
        }
        if n < count {
            let (w, k) = regular.exact(n + 1).unwrap();
            // w²·k/(n+1) ≤ v²·m/n.
            if !squared_scaled_le(w, (k * n) as u64, v, (m * (n + 1)) as u64) {
                report.nonincreasing = false;
                fail(&mut report, n);
            }
            // c̃_n²·n ≤ c̃_{n+1}²·(n+1), i.e. v²·m ≤ w²·k.
            if !squared_scaled_le(v, m as u64, w, k as u64) {
                report.ratio_bound = false;
                fail(&mut report, n);
            }
        }
    }
    report
}

/// The step function `h = c_n²` on `(c_{n+1}/√(n+1), c_n/√n]`, `n ≤ horizon`,
/// held at `c_1²` right of `c_1`, with jumps realised as ramps of relative
/// width [`STEP_RAMP_WIDTH`]. Left of `c_{horizon+1}/√(horizon+1)` the value
/// `c_horizon²` is continued. With `concavify`, the least concave majorant
/// of the step function is returned instead.
pub fn h_from_sequence(
    c: &PositiveSequence,
    horizon: usize,
    concavify: bool,
) -> Result<RegularMajorant> {
    if horizon == 0 {
        return Err(arg("horizon must be at least 1"));
    }
    let terms = c.terms(horizon + 1)?;
    if terms[0] > 1.0 {
        return Err(arg(format!("c_1 = {} exceeds 1", terms[0])));
    }
    if terms.windows(2).any(|w| w[1] > w[0]) {
        return Err(arg("sequence must be nonincreasing"));
    }
    let knot = |n: usize| terms[n - 1] / (n as f64).sqrt();
    let mut xs = Vec::with_capacity(2 * horizon);
    let mut ys = Vec::with_capacity(2 * horizon);
    for n in (1..=horizon).rev() {
        let value = terms[n - 1] * terms[n - 1];
        let start = knot(n + 1) * (1.0 + STEP_RAMP_WIDTH);
        let end = knot(n);
        if start < end && xs.last().is_none_or(|&l| start > l) {
            xs.push(start);
            ys.push(value);
        }
        if xs.last().is_none_or(|&l| end > l) {
            xs.push(end);
            ys.push(value);
        }
    }
    if xs.len() < 2 {
        // horizon = 1 with a degenerate interval: a single flat level.
        let v = terms[0] * terms[0];
        xs = vec![0.5 * knot(1), knot(1)];
        ys = vec![v, v];
    }
    if concavify {
        let pts: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
        least_concave_majorant(&pts)
    } else {
        RegularMajorant::from_table(xs, ys)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegendreInf {
    pub value: f64,
    pub argmin: f64,
    /// The infimum is a limit at an end of `(0, 1)` rather than attained.
    pub boundary_infimum: bool,
}

/// `inf_{x∈(0,1)} n x + h(x)/x`.
///
/// Tables are minimised exactly piece by piece (on a piece `h = a + b x`
/// the objective is `n x + a/x + b`); closed forms by a logarithmic grid
/// scan refined with golden-section search. Ties go to the smallest `x`.
pub fn legendre_inf(n: u64, h: &RegularMajorant) -> LegendreInf {
    let nf = n as f64;
    let f = |x: f64| nf * x + h.ratio(x);
    match &h.shape {
        Shape::Table(t) => {
            let mut best = LegendreInf {
                value: f64::INFINITY,
                argmin: 1.0,
                boundary_infimum: true,
            };
            let mut consider = |x: f64, value: f64, boundary: bool| {
                if value < best.value {
                    best = LegendreInf {
                        value,
                        argmin: x,
                        boundary_infimum: boundary,
                    };
                }
            };
            for (lo, hi, a, b) in t.pieces() {
                if lo >= 1.0 {
                    break;
                }
                let hi = hi.min(1.0);
                if a > 0.0 {
                    let x = (a / nf).sqrt().clamp(lo, hi);
                    if x == 0.0 {
                        continue;
                    }
                    consider(x, f(x), x >= 1.0);
                } else if lo == 0.0 {
                    // n x + b with a = 0 (or h = 0): infimum b as x → 0.
                    consider(0.0, b, true);
                } else {
                    consider(lo, f(lo), false);
                }
            }
            best
        }
        _ => numeric_legendre(nf, h),
    }
}

fn numeric_legendre(nf: f64, h: &RegularMajorant) -> LegendreInf {
    let f = |x: f64| nf * x + h.ratio(x);
    let lo_exp = -15.0_f64;
    let steps = 3000;
    let xs: Vec<f64> = (0..=steps)
        .map(|i| 10f64.powf(lo_exp * (1.0 - i as f64 / steps as f64)))
        .collect();
    let mut k = 0;
    let mut fk = f(xs[0]);
    for (i, &x) in xs.iter().enumerate().skip(1) {
        let v = f(x);
        if v < fk {
            fk = v;
            k = i;
        }
    }
    let (mut a, mut b) = (xs[k.saturating_sub(1)], xs[(k + 1).min(steps)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let mut best = LegendreInf {
        value: f(x),
        argmin: x,
        boundary_infimum: x >= 1.0,
    };
    if fk < best.value {
        best = LegendreInf {
            value: fk,
            argmin: xs[k],
            boundary_infimum: xs[k] >= 1.0,
        };
    }
    if let Some(limit) = h.ratio_at_origin() {
        if limit <= best.value {
            best = LegendreInf {
                value: limit,
                argmin: 0.0,
                boundary_infimum: true,
            };
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegendreRow {
    pub n: u64,
    pub infimum: f64,
    pub argmin: f64,
    /// `c̃_n √n`.
    pub target: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegendreWindow {
    pub rows: Vec<LegendreRow>,
    /// Start of the final run of indices on which the bound holds.
    pub n0: Option<u64>,
}

/// `legendre_inf(n, h) ≥ c̃_n √n` for `n = 1..=horizon`, where `c̃` is the
/// regularized sequence and `h` the least concave majorant of its step
/// function.
pub fn legendre_dominance(c: &PositiveSequence, horizon: usize) -> Result<LegendreWindow> {
    let regular = regularize_sequence(c, horizon + 1)?;
    let h = h_from_sequence(regular.sequence(), horizon, true)?;
    Ok(legendre_window(regular.sequence(), &h, horizon))
}

/// [`legendre_dominance`] for a given sequence and majorant.
pub fn legendre_window(c: &PositiveSequence, h: &RegularMajorant, horizon: usize) -> LegendreWindow {
    let rows: Vec<LegendreRow> = (1..=horizon as u64)
        .map(|n| {
            let inf = legendre_inf(n, h);
            let target = c.term(n as usize).unwrap_or(f64::NAN) * (n as f64).sqrt();
            LegendreRow {
                n,
                infimum: inf.value,
                argmin: inf.argmin,
                target,
                holds: inf.value >= target,
            }
        })
        .collect();
    let start = rows.iter().rposition(|r| !r.holds).map_or(0, |i| i + 1);
    let n0 = rows.get(start).map(|r| r.n);
    LegendreWindow { rows, n0 }
}

/// `Σ_ℓ ∫₀^{|ℓ|} h(t)/t dt`, or divergence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum KhrushchevSum {
    Finite(f64),
    Divergent,
}

impl KhrushchevSum {
    pub fn is_finite(&self) -> bool {
        matches!(self, KhrushchevSum::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match self {
            KhrushchevSum::Finite(v) => *v,
            KhrushchevSum::Divergent => f64::INFINITY,
        }
    }
}

const SHELL_RATIO: f64 = 0.99;
const SHELL_RUN: usize = 20;
const MAX_SHELLS: usize = 400;

fn ratio_integral(h: &RegularMajorant, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut pts = vec![a];
    pts.extend(h.kinks().into_iter().filter(|&k| k > a && k < b));
    pts.push(b);
    let tol = Tolerance {
        rel: 1e-12,
        abs: 1e-300,
        max_intervals: 50_000,
    };
    match integrate(|t| h.ratio(t), &pts, tol) {
        Ok(r) => r.value,
        Err(_) => {
            // Kinks from steep ramps can stall the error estimate; a fixed
            // fine partition is accurate enough for a sum of positive terms.
            let fallback = Tolerance {
                rel: 1e-8,
                abs: 1e-300,
                max_intervals: 200_000,
            };
            integrate(|t| h.ratio(t), &pts, fallback)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        }
    }
}

/// Dyadic-shell test for `∫₀ h(t)/t dt = ∞`: the shell integrals over
/// `(2^{-k-1}, 2^{-k}]` fail to shrink by a factor below 0.99 for 20
/// consecutive shells.
pub fn ratio_integral_diverges(h: &RegularMajorant) -> bool {
    let mut prev = ratio_integral(h, 0.5, 1.0);
    let mut total = prev;
    let mut run = 0;
    for k in 1..MAX_SHELLS {
        let hi = 0.5f64.powi(k as i32);
        let shell = ratio_integral(h, 0.5 * hi, hi);
        total += shell;
        if shell == 0.0 {
            return false;
        }
        if prev > 0.0 && shell >= SHELL_RATIO * prev {
            run += 1;
            if run >= SHELL_RUN {
                return true;
            }
        } else {
            run = 0;
            if shell < 1e-17 * total {
                return false;
            }
        }
        prev = shell;
    }
    false
}

/// `∫₀^L h(t)/t dt` for a convergent `h`, summed over dyadic shells
/// `(L 2^{-k-1}, L 2^{-k}]`.
fn ratio_integral_from_origin(h: &RegularMajorant, len: f64) -> f64 {
    let mut total = 0.0;
    let mut hi = len;
    for _ in 0..MAX_SHELLS {
        let shell = ratio_integral(h, 0.5 * hi, hi);
        total += shell;
        if shell <= 1e-17 * total || shell == 0.0 {
            break;
        }
        hi *= 0.5;
    }
    total
}

/// Khrushchev's integral condition `Σ_ℓ ∫₀^{|ℓ|} h(t)/t dt`.
pub fn khrushchev_sum(set: &ArcSet, h: &RegularMajorant) -> KhrushchevSum {
    let mut lengths: Vec<f64> = set.gap_lengths().collect();
    if lengths.is_empty() {
        return KhrushchevSum::Finite(0.0);
    }
    if ratio_integral_diverges(h) {
        return KhrushchevSum::Divergent;
    }
    lengths.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut at = lengths[0];
    let mut running = ratio_integral_from_origin(h, at);
    for len in lengths {
        if len > at {
            running += ratio_integral(h, at, len);
            at = len;
        }
        total += running;
    }
    KhrushchevSum::Finite(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_of_identity_is_e() {
        let h = RegularMajorant::identity();
        assert_eq!(eval_lambda_h(&h, 0.5).unwrap(), std::f64::consts::E);
        assert_eq!(eval_lambda_h(&h, 0.0).unwrap(), std::f64::consts::E);
        let table = RegularMajorant::from_table(vec![0.25, 1.0], vec![0.25, 1.0]).unwrap();
        assert!((eval_lambda_h(&table, 0.5).unwrap() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn lambda_of_x_log_inv_at_point_nine() {
        let h = RegularMajorant::x_log_inv();
        assert!((eval_lambda_h(&h, 0.9).unwrap() - 10.0).abs() < 1e-12);
        // 0.1 sits on a sample, so the table agrees.
        let dense = RegularMajorant::sampled_uniform(|x| -x * x.ln(), 0.001, 1.0, 1000).unwrap();
        assert!((eval_lambda_h(&dense, 0.9).unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn lambda_rejects_radius_one() {
        assert!(eval_lambda_h(&RegularMajorant::identity(), 1.0).is_err());
    }

    #[test]
    fn regularity_of_standard_shapes() {
        let id = check_regularity(&RegularMajorant::identity(), 100);
        assert_eq!(
            id,
            RegularityReport {
                increasing: true,
                ratio_decreasing: true,
                max_violation: 0.0
            }
        );
        let sq = RegularMajorant::sampled_uniform(|x| x * x, 0.1, 1.0, 50).unwrap();
        let r = check_regularity(&sq, 100);
        assert!(r.increasing && !r.ratio_decreasing && r.max_violation > 0.0);
        let rt = RegularMajorant::sampled_uniform(f64::sqrt, 0.01, 1.0, 200).unwrap();
        let r = check_regularity(&rt, 500);
        assert!(r.increasing && r.ratio_decreasing);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn lcm_of_convex_samples_is_the_chord() {
        let pts: Vec<(f64, f64)> = (0..=20).map(|i| i as f64 / 20.0).map(|x| (x, x * x)).collect();
        let h = least_concave_majorant(&pts).unwrap();
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!((h.eval(x) - x).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn lcm_of_a_single_point() {
        let h = least_concave_majorant(&[(0.5, 2.0)]).unwrap();
        assert_eq!(h.eval(0.25), 1.0);
        assert_eq!(h.eval(0.5), 2.0);
        assert_eq!(h.eval(0.9), 2.0);
        assert!((h.eval(0.1) - 0.4).abs() < 1e-15);
        assert_eq!(h.ratio_at_origin(), Some(4.0));
    }

    #[test]
    fn lcm_of_concave_samples_is_the_interpolant() {
        let xs: Vec<f64> = (1..=30).map(|i| i as f64 / 30.0).collect();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, x.sqrt())).collect();
        let h = least_concave_majorant(&pts).unwrap();
        let interp = RegularMajorant::from_table(xs.clone(), xs.iter().map(|x| x.sqrt()).collect()).unwrap();
        for i in 34..=1000 {
            let x = i as f64 / 1000.0;
            assert!((h.eval(x) - interp.eval(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn lcm_rejects_empty() {
        assert!(least_concave_majorant(&[]).is_err());
    }

    #[test]
    fn regularized_one_over_n_follows_the_square_root_branch() {
        let c = PositiveSequence::one_over_n();
        let r = regularize_sequence(&c, 10).unwrap();
        assert_eq!(r.term(1), Some(1.0));
        assert!((r.term(3).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn regularization_rejects_nonpositive_terms() {
        assert!(PositiveSequence::explicit(vec![1.0, 0.0]).is_err());
        assert!(PositiveSequence::explicit(vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn regularized_tail_of_square_root_decay_is_fixed() {
        // c_n = √(2/n) · 0.5 for n ≥ 2 and c_1 = 0.5·√2: already on the branch.
        let terms: Vec<f64> = (1..=50).map(|n| 0.5 * (2.0 / n as f64).sqrt()).collect();
        let c = PositiveSequence::explicit(terms.clone()).unwrap();
        let r = regularize_sequence(&c, 50).unwrap();
        for n in 1..=50 {
            let rel = (r.term(n).unwrap() - terms[n - 1]) / terms[n - 1];
            assert!((0.0..1e-13).contains(&rel), "n = {n}: {rel}");
        }
    }

    #[test]
    fn regularized_one_over_log_has_all_properties() {
        let c = PositiveSequence::one_over_log();
        let r = regularize_sequence(&c, 2000).unwrap();
        let rep = check_replacement(&c, &r);
        assert!(rep.dominates && rep.nonincreasing && rep.ratio_bound, "{rep:?}");
    }

    #[test]
    fn exact_square_comparison() {
        assert!(squared_scaled_le(1.0, 2, 2f64.sqrt().next_up(), 1));
        assert!(!squared_scaled_le(1.0, 2, 2f64.sqrt().next_down(), 1));
        assert!(squared_scaled_le(0.5, 4, 1.0, 1));
        assert!(squared_scaled_le(1e-300, 5, 1e300, 1));
        assert!(!squared_scaled_le(1e300, 1, 1e-300, 5));
    }

    #[test]
    fn step_majorant_from_inverse_sqrt() {
        let c = PositiveSequence::explicit((1..=20).map(|n| 1.0 / (n as f64).sqrt()).collect()).unwrap();
        let h = h_from_sequence(&c, 19, false).unwrap();
        assert!((h.eval(0.4) - 0.5).abs() < 1e-15);
        // Right endpoints of the half-open intervals belong to them.
        for n in 1..=19 {
            let cn = 1.0 / (n as f64).sqrt();
            let x = cn / (n as f64).sqrt();
            assert!((h.eval(x) - cn * cn).abs() < 1e-15, "n = {n}");
        }
        let scaled = PositiveSequence::explicit((1..=20).map(|n| 0.5 / (n as f64).sqrt()).collect()).unwrap();
        let h = h_from_sequence(&scaled, 19, false).unwrap();
        assert_eq!(h.eval(0.6), 0.25);
        assert_eq!(h.eval(0.99), 0.25);
    }

    #[test]
    fn step_majorant_rejects_large_first_term() {
        let c = PositiveSequence::explicit(vec![1.5, 1.0, 0.5]).unwrap();
        assert!(h_from_sequence(&c, 2, false).is_err());
    }

    #[test]
    fn concavified_step_majorant_is_regular() {
        let c = regularize_sequence(&PositiveSequence::one_over_log(), 501).unwrap();
        let h = h_from_sequence(c.sequence(), 500, true).unwrap();
        let rep = check_regularity(&h, 2000);
        assert!(rep.increasing && rep.ratio_decreasing, "{rep:?}");
    }

    #[test]
    fn legendre_of_constant() {
        let h = RegularMajorant::constant(0.25).unwrap();
        let r = legendre_inf(100, &h);
        assert!((r.value - 10.0).abs() < 1e-12);
        assert!((r.argmin - 0.05).abs() < 1e-15);
        assert!(!r.boundary_infimum);
    }

    #[test]
    fn legendre_of_zero_is_a_boundary_infimum() {
        for h in [
            RegularMajorant::zero(),
            RegularMajorant::from_table(vec![0.5, 1.0], vec![0.0, 0.0]).unwrap(),
        ] {
            let r = legendre_inf(7, &h);
            assert!(r.boundary_infimum);
            assert!(r.value.abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_of_power_matches_calculus() {
        // n x + x^{-1/2}: minimum at x = (1/(2n))^{2/3}.
        let n = 1000u64;
        let r = legendre_inf(n, &RegularMajorant::sqrt());
        let x = (0.5 / n as f64).powf(2.0 / 3.0);
        let v = n as f64 * x + x.powf(-0.5);
        assert!((r.value - v).abs() < 1e-9 * v);
    }

    #[test]
    fn khrushchev_sum_examples() {
        let e = ArcSet::from_gaps(vec![(1.0, 1.5), (3.0, 3.25)]).unwrap();
        let s = khrushchev_sum(&e, &RegularMajorant::identity());
        assert!((s.value() - 0.75).abs() < 1e-12, "{s:?}");
        let e = ArcSet::from_gaps(vec![(2.0, 2.01)]).unwrap();
        let s = khrushchev_sum(&e, &RegularMajorant::sqrt());
        assert!((s.value() - 0.2).abs() < 1e-10, "{s:?}");
        assert_eq!(khrushchev_sum(&e, &RegularMajorant::inv_log()), KhrushchevSum::Divergent);
    }

    #[test]
    fn majorant_json_round_trip() {
        for h in [
            RegularMajorant::sqrt(),
            RegularMajorant::from_table(vec![0.1, 0.5], vec![0.2, 0.3]).unwrap(),
            RegularMajorant::inv_log().plus_x_log_inv(),
            RegularMajorant::power(0.3).unwrap(),
        ] {
            let s = serde_json::to_string(&h).unwrap();
            let back: RegularMajorant = serde_json::from_str(&s).unwrap();
            assert_eq!(back, h, "{s}");
        }
        let t: RegularMajorant =
            serde_json::from_str(r#"{"breakpoints":[0.5,1.0],"values":[0.5,1.0]}"#).unwrap();
        assert_eq!(t.eval(0.75), 0.75);
    }

    #[test]
    fn sequence_json() {
        let s: PositiveSequence = serde_json::from_str(r#"{"rule":"one_over_log"}"#).unwrap();
        assert_eq!(s.term(1), Some(1.0 / 3f64.ln()));
        let s: PositiveSequence =
            serde_json::from_str(r#"{"rule":"explicit","terms":[0.5,0.25]}"#).unwrap();
        assert_eq!(s.len(), Some(2));
        assert!(serde_json::from_str::<PositiveSequence>(r#"{"rule":"explicit","terms":[0.0]}"#).is_err());
    }

    #[test]
    fn null_sequence_verification() {
        assert!(PositiveSequence::one_over_n().verify_null(1000, 1e-3));
        assert!(!PositiveSequence::one_over_log().verify_null(1000, 1e-3));
    }
}
