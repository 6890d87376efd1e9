//! The weight `G(x) = exp(−h(1−x)/(1−x))`, its moments `∫₀¹ xⁿ G(x) dx`,
//! weighted Bergman norms of polynomials, and the sub-mean-value estimate
//! for `|p|²`.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, domain, Error, Result};
use crate::harmonic_measure::Polynomial;
use crate::majorants::{
    h_from_sequence, legendre_inf, regularize_sequence, PositiveSequence, Regularized, RegularMajorant,
};
use crate::quadrature::{gauss_legendre, integrate, Tolerance};

/// Default relative tolerance for moments.
pub const DEFAULT_MOMENT_TOL: f64 = 1e-6;

/// `G(x) = exp(−h(1−x)/(1−x))` on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct WeightG {
    h: RegularMajorant,
}

impl WeightG {
    pub fn new(h: RegularMajorant) -> Self {
        Self { h }
    }

    pub fn majorant(&self) -> &RegularMajorant {
        &self.h
    }

    /// `G(1)`: 0 when `h(s)/s → ∞`, otherwise `exp(−lim h(s)/s)`.
    pub fn at_one(&self) -> f64 {
        self.h.ratio_at_origin().map_or(0.0, |l| (-l).exp())
    }

    /// True when `h(s)/s` stays bounded as `s → 0`, so `G(1) > 0`.
    pub fn bounded_ratio(&self) -> bool {
        self.h.ratio_at_origin().is_some()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain(format!("G is defined on [0, 1], not at {x}")));
        }
        if x == 1.0 {
            return Ok(self.at_one());
        }
        Ok((-self.h.ratio(1.0 - x)).exp())
    }
}

/// A moment with its quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moment {
    pub value: f64,
    pub error: f64,
}

/// `∫₀¹ xⁿ G(x) dx`, integrated in `s = 1 − x` as
/// `∫₀¹ exp(n log(1−s) − h(s)/s) ds` on a partition refined geometrically
/// toward `s = 0` and around `s ≈ 1/n`.
pub fn moment(h: &RegularMajorant, n: u64, tol: f64) -> Result<Moment> {
    if !(tol > 0.0) {
        return Err(arg("tolerance must be positive"));
    }
    let nf = n as f64;
    let f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        (nf * (-s).ln_1p() - h.ratio(s)).exp()
    };
    let mut pts: Vec<f64> = (0..=60).map(|j| 0.5f64.powi(j)).collect();
    if n > 0 {
        let centre = 1.0 / nf;
        pts.extend((-8..=8).map(|j| centre * 2f64.powi(j)).filter(|&s| s < 1.0));
    }
    pts.extend(h.kinks().into_iter().filter(|&k| k > 0.0 && k < 1.0));
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = integrate(
        f,
        &pts,
        Tolerance {
            rel: tol,
            abs: f64::MIN_POSITIVE,
            max_intervals: 100_000,
        },
    )?;
    Ok(Moment {
        value: r.value,
        error: r.error,
    })
}

/// `‖p‖_G = (2π Σ |a_k|² ∫₀¹ r^{2k+1} G(r) dr)^{1/2}`.
pub fn bergman_norm(p: &Polynomial, h: &RegularMajorant, tol: f64) -> Result<f64> {
    let mut sq = 0.0;
    for (k, a) in p.coefficients().iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        sq += w * moment(h, 2 * k as u64 + 1, tol)?.value;
    }
    Ok((2.0 * PI * sq).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanValueReport {
    /// `|p(z)|²`.
    pub value: f64,
    /// `4/(π(1−|z|)²)·∫_{|w−z|<(1−|z|)/2} |p(w)|² dA(w)`.
    pub disk_mean: f64,
    pub ratio: f64,
    /// `ratio ≤ 1 + 1e-8`.
    pub passed: bool,
}

/// Compares `|p(z)|²` with its mean over the disk of radius `(1−|z|)/2`
/// about `z`, using `nodes` Gauss-Legendre radii and `2·nodes + 1` equally
/// spaced angles (exact once `nodes > deg p`).
pub fn pointwise_meanvalue_check(p: &Polynomial, z: Complex64, nodes: usize) -> Result<MeanValueReport> {
    if !(z.norm() < 1.0) {
        return Err(domain(format!("{z} is not in the unit disk")));
    }
    if nodes == 0 {
        return Err(arg("need at least one quadrature node"));
    }
    let rho = 0.5 * (1.0 - z.norm());
    let (x, w) = gauss_legendre(nodes);
    let m = 2 * nodes + 1;
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * rho * (xi + 1.0);
        let mut ring = 0.0;
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            ring += p.eval(z + Complex64::from_polar(r, t)).norm_sqr();
        }
        total += wi * 0.5 * rho * r * ring * 2.0 * PI / m as f64;
    }
    let disk_mean = total / (PI * rho * rho);
    let value = p.eval(z).norm_sqr();
    let ratio = if disk_mean > 0.0 {
        value / disk_mean
    } else if value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MeanValueReport {
        value,
        disk_mean,
        ratio,
        passed: ratio <= 1.0 + 1e-8,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: u64,
    pub moment: f64,
    pub error: f64,
    /// `exp(−c̃_n √n)`.
    pub bound: f64,
    pub holds: bool,
    /// `inf_{x∈(0,1)} n x + h(x)/x` for the concavified majorant.
    pub legendre: f64,
    pub legendre_holds: bool,
    /// `legendre_holds ⇒ holds`.
    pub implication_ok: bool,
    /// Row lies in `[N₀, horizon]`.
    pub asserted: bool,
    /// Quadrature error below 1% of the bound.
    pub error_ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    pub rows: Vec<MomentRow>,
    /// First grid index from which the bound holds through the horizon.
    pub n0: Option<u64>,
    /// `x log(1/x)` was added to `h` because `h` fell below it.
    pub added_x_log: bool,
    pub status: CheckStatus,
}

impl MomentTable {
    /// Log-log plot of the observed decay rate `−log(moment)/√n` against
    /// `c_n` over `n`.
    pub fn to_svg(&self, width: u32, height: u32) -> String {
        let series = |f: &dyn Fn(&MomentRow) -> f64| -> Vec<(f64, f64)> {
            self.rows
                .iter()
                .filter_map(|r| {
                    let y = f(r) / (r.n as f64).sqrt();
                    (r.n > 0 && y > 0.0 && y.is_finite()).then(|| ((r.n as f64).log10(), y.log10()))
                })
                .collect()
        };
        let observed = series(&|r| -r.moment.ln());
        let target = series(&|r| -r.bound.ln());
        let all = observed.iter().chain(&target);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !(x1 > x0) {
            x1 = x0 + 1.0;
        }
        if !(y1 > y0) {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let (w, h, pad) = (width as f64, height as f64, 40.0);
        let px = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
        let py = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(
            s,
            r##"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
            w - 2.0 * pad,
            h - 2.0 * pad
        );
        for (points, colour, label, row) in [(&observed, "#c00", "-log(moment)/sqrt(n)", 0.0), (&target, "#00c", "c_n", 1.0)] {
            let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{colour}"/>"#, path.join(" "));
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="12" fill="{colour}">{label}</text>"#,
                pad + 8.0,
                pad + 16.0 + 14.0 * row
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12">log10 n from {x0:.2} to {x1:.2}; log10 rate from {y0:.2} to {y1:.2}</text>"#,
            pad,
            h - 12.0
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Grid `1, 2, 4, …` up to `horizon`, with `horizon` itself appended.
pub fn log_grid(horizon: u64) -> Vec<u64> {
    let mut ns: Vec<u64> = std::iter::successors(Some(1u64), |&n| n.checked_mul(2))
        .take_while(|&n| n <= horizon)
        .collect();
    if ns.last() != Some(&horizon) && horizon > 0 {
        ns.push(horizon);
    }
    ns
}

/// The majorant used for moment bounds built from `c`: the least concave
/// majorant of the step function of the regularized sequence, plus
/// `x log(1/x)` when it falls below that at a breakpoint.
pub struct MomentPipeline {
    pub regularized: Regularized,
    pub concave: RegularMajorant,
    pub weight_majorant: RegularMajorant,
    pub added_x_log: bool,
}

pub fn moment_pipeline(c: &PositiveSequence, horizon: usize) -> Result<MomentPipeline> {
    let regularized = regularize_sequence(c, horizon + 1)?;
    let concave = h_from_sequence(regularized.sequence(), horizon, true)?;
    let table = concave
        .as_table()
        .ok_or_else(|| Error::Argument("concavified majorant is not tabulated".into()))?;
    let below = table
        .breakpoints()
        .iter()
        .zip(table.values())
        .any(|(&x, &y)| x < 1.0 && y < -x * x.ln());
    let weight_majorant = if below {
        concave.plus_x_log_inv()
    } else {
        concave.clone()
    };
    Ok(MomentPipeline {
        regularized,
        concave,
        weight_majorant,
        added_x_log: below,
    })
}

/// Moments of the pipeline weight against `exp(−c̃_n √n)` on [`log_grid`].
pub fn moment_bound_check(c: &PositiveSequence, horizon: usize, tol: f64) -> Result<MomentTable> {
    if horizon == 0 {
        return Err(arg("horizon must be at least 1"));
    }
    let pipe = moment_pipeline(c, horizon)?;
    let mut table = moment_table(&pipe.weight_majorant, pipe.regularized.sequence(), horizon, tol)?;
    table.added_x_log = pipe.added_x_log;
    Ok(table)
}

/// Moments of the weight of `h` against `exp(−c_n √n)` on [`log_grid`].
/// Rows from the start of the final run where the bound holds are
/// asserted; with no such run the table is inconclusive.
pub fn moment_table(h: &RegularMajorant, c: &PositiveSequence, horizon: usize, tol: f64) -> Result<MomentTable> {
    if horizon == 0 {
        return Err(arg("horizon must be at least 1"));
    }
    let grid = log_grid(horizon as u64);
    let mut rows = grid
        .par_iter()
        .map(|&n| {
            let cn = c
                .term(n as usize)
                .ok_or_else(|| arg(format!("sequence has no term {n}")))?;
            let target = cn * (n as f64).sqrt();
            let m = moment(h, n, tol)?;
            let bound = (-target).exp();
            let legendre = legendre_inf(n, h).value;
            let holds = m.value <= bound;
            let legendre_holds = legendre >= target;
            Ok(MomentRow {
                n,
                moment: m.value,
                error: m.error,
                bound,
                holds,
                legendre,
                legendre_holds,
                implication_ok: !legendre_holds || holds,
                asserted: false,
                error_ok: m.error < 0.01 * bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let start = rows.iter().rposition(|r| !r.holds).map_or(0, |i| i + 1);
    let n0 = rows.get(start).map(|r| r.n);
    for r in &mut rows[start..] {
        r.asserted = true;
    }
    let violated = rows
        .iter()
        .any(|r| !r.implication_ok || (r.asserted && !r.error_ok));
    let status = if violated {
        CheckStatus::Fail
    } else if n0.is_none() {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Pass
    };
    Ok(MomentTable {
        rows,
        n0,
        added_x_log: false,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_closed_forms() {
        let m = moment(&RegularMajorant::x_log_inv(), 10, 1e-10).unwrap();
        assert!((m.value - 1.0 / 132.0).abs() < 1e-12);
        let e = (-1.0f64).exp();
        let m = moment(&RegularMajorant::identity(), 0, 1e-10).unwrap();
        assert!((m.value - e).abs() < 1e-12);
        let m = moment(&RegularMajorant::identity(), 7, 1e-10).unwrap();
        assert!((m.value - e / 8.0).abs() < 1e-12);
    }

    #[test]
    fn zeroth_moment_is_at_most_one() {
        for h in [RegularMajorant::sqrt(), RegularMajorant::inv_log(), RegularMajorant::zero()] {
            let m = moment(&h, 0, 1e-8).unwrap().value;
            assert!(m > 0.0 && m <= 1.0);
        }
    }

    #[test]
    fn weight_at_one() {
        assert_eq!(WeightG::new(RegularMajorant::sqrt()).at_one(), 0.0);
        let g = WeightG::new(RegularMajorant::identity());
        assert!(g.bounded_ratio());
        assert!((g.at_one() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(g.eval(1.5).is_err());
    }

    #[test]
    fn bergman_norm_examples() {
        let h = RegularMajorant::x_log_inv();
        let one = Polynomial::constant(Complex64::new(1.0, 0.0));
        let n = bergman_norm(&one, &h, 1e-10).unwrap();
        assert!((n * n - PI / 3.0).abs() < 1e-10);
        assert_eq!(bergman_norm(&Polynomial::new(vec![]), &h, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn mean_value_examples() {
        let one = Polynomial::constant(Complex64::new(1.0, 0.0));
        let r = pointwise_meanvalue_check(&one, Complex64::new(0.3, 0.4), 4).unwrap();
        assert!((r.disk_mean - 1.0).abs() < 1e-14 && r.passed);
        let z = Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let r = pointwise_meanvalue_check(&z, Complex64::new(0.0, 0.0), 4).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.disk_mean > 0.0 && r.passed);
        assert!(pointwise_meanvalue_check(&one, Complex64::new(1.0, 0.0), 4).is_err());
    }

    #[test]
    fn log_grid_shape() {
        assert_eq!(log_grid(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(log_grid(8), vec![1, 2, 4, 8]);
    }

    #[test]
    fn empty_window_is_inconclusive() {
        // G ≡ 1 gives moments 1/(n+1), above exp(−0.99 √n) up to n = 8.
        let c = PositiveSequence::explicit(vec![0.99; 10]).unwrap();
        let t = moment_table(&RegularMajorant::zero(), &c, 8, 1e-10).unwrap();
        assert_eq!(t.n0, None);
        assert_eq!(t.status, CheckStatus::Inconclusive);
        assert!(t.rows.iter().all(|r| !r.asserted && !r.holds));
    }
}
