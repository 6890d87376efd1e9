//! Harmonic measure: closed forms in the half-plane and in `Ω_L`, a
//! walk-on-spheres estimator for [`PrivalovDomain`]s, and the Monte Carlo
//! checks built on it (subordination, integrability of `h(1−|z|²)/(1−|z|²)`
//! against harmonic measure, and subharmonicity of `log|p|`).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_sets::ArcSet;
use crate::conformal::{cayley, BoundaryHit, PrivalovDomain};
use crate::error::{arg, Error, Result};
use crate::majorants::RegularMajorant;
use crate::quadrature::CompensatedSum;

/// Largest tolerated fraction of walks hitting `max_steps`.
pub const MAX_ABORT_FRACTION: f64 = 1e-3;

/// `(arctan b − arctan a)/π`, the harmonic measure of `(a, b) ⊂ ℝ` at `i`.
pub fn halfplane_measure(a: f64, b: f64) -> Result<f64> {
    if !(a <= b) {
        return Err(arg(format!("interval ({a}, {b}) is reversed")));
    }
    Ok((b.atan() - a.atan()) / PI)
}

fn check_arc_args(l: f64, t: f64) -> Result<()> {
    if !(l > 0.0 && l <= 0.5) {
        return Err(arg(format!("L = {l} is outside (0, 0.5]")));
    }
    if !(0.0..=FRAC_PI_2).contains(&t) {
        return Err(arg(format!("t = {t} is outside [0, π/2]")));
    }
    Ok(())
}

/// Harmonic measure at `i` in `Ω_L` of the arc `{L e^{iτ}: 0 ≤ τ ≤ t}`:
/// `(1/π)[arctan u − arctan(u cos t)]` with `u = 2L/(1−L²)`, evaluated as a
/// single arctangent to avoid cancellation.
pub fn arc_measure_exact(l: f64, t: f64) -> Result<f64> {
    check_arc_args(l, t)?;
    let u = 2.0 * l / (1.0 - l * l);
    let gap = 2.0 * u * (0.5 * t).sin().powi(2);
    Ok((gap / (1.0 + u * u * t.cos())).atan() / PI)
}

/// `(1 − cos t)·2L/(π(1−L²))`, an upper bound for [`arc_measure_exact`].
pub fn arc_measure_bound(l: f64, t: f64) -> Result<f64> {
    check_arc_args(l, t)?;
    let u = 2.0 * l / (1.0 - l * l);
    Ok(2.0 * (0.5 * t).sin().powi(2) * u / PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WosConfig {
    pub eps_shell: f64,
    pub max_steps: u64,
    pub seed: u64,
    pub samples: u64,
}

impl Default for WosConfig {
    fn default() -> Self {
        Self {
            eps_shell: 1e-6,
            max_steps: 100_000,
            seed: 0,
            samples: 100_000,
        }
    }
}

impl WosConfig {
    fn validate(&self) -> Result<()> {
        if !(self.eps_shell > 0.0) {
            return Err(arg("eps_shell must be positive"));
        }
        if self.samples == 0 || self.max_steps == 0 {
            return Err(arg("samples and max_steps must be positive"));
        }
        Ok(())
    }
}

/// Where each walk ended, in walk order; `None` marks an aborted walk.
#[derive(Clone, Debug)]
pub struct WalkSample {
    pub hits: Vec<Option<BoundaryHit>>,
    pub aborted: u64,
}

impl WalkSample {
    pub fn completed(&self) -> u64 {
        self.hits.len() as u64 - self.aborted
    }
}

fn walk(domain: &PrivalovDomain, z0: Complex64, cfg: &WosConfig, index: u64) -> Option<BoundaryHit> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut z = z0;
    for _ in 0..cfg.max_steps {
        let near = domain.nearest(z);
        if near.distance <= cfg.eps_shell {
            return Some(near.hit);
        }
        let angle = rng.random::<f64>() * TAU;
        z += Complex64::from_polar(near.distance, angle);
    }
    None
}

/// Runs `cfg.samples` walks on spheres from `z0`. Walk `k` draws from the
/// ChaCha8 stream `k` of `cfg.seed`, so the result does not depend on how
/// the walks are spread over threads.
pub fn simulate_walks(domain: &PrivalovDomain, z0: Complex64, cfg: &WosConfig) -> Result<WalkSample> {
    cfg.validate()?;
    let start = domain.distance_to_boundary(z0)?;
    if start <= cfg.eps_shell {
        return Err(Error::Contract(format!(
            "start point {z0} is within eps_shell of the boundary"
        )));
    }
    let hits: Vec<Option<BoundaryHit>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| walk(domain, z0, cfg, k))
        .collect();
    let aborted = hits.iter().filter(|h| h.is_none()).count() as u64;
    if aborted as f64 > MAX_ABORT_FRACTION * cfg.samples as f64 {
        return Err(Error::TooManyAborts {
            aborted,
            samples: cfg.samples,
        });
    }
    Ok(WalkSample { hits, aborted })
}

/// Monte Carlo estimate of a probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Completed walks used as denominator.
    pub samples: u64,
    pub hits: u64,
}

impl MeasureEstimate {
    fn from_counts(hits: u64, samples: u64) -> Self {
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        Self {
            value: p,
            stderr: if samples == 0 { 0.0 } else { (p * (1.0 - p) / samples as f64).sqrt() },
            samples,
            hits,
        }
    }
}

/// Per-component harmonic-measure estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionEstimate {
    pub components: Vec<MeasureEstimate>,
    pub hits_by_component: Vec<u64>,
    pub samples: u64,
    pub aborted: u64,
}

/// Estimates the harmonic measure at `z0` of each of `components` boundary
/// pieces; `component` assigns a hit to its piece.
pub fn wos_estimate<F>(
    domain: &PrivalovDomain,
    z0: Complex64,
    components: usize,
    component: F,
    cfg: &WosConfig,
) -> Result<PartitionEstimate>
where
    F: Fn(&BoundaryHit) -> usize,
{
    let sample = simulate_walks(domain, z0, cfg)?;
    Ok(partition(&sample, components, component))
}

/// Sorts recorded walks into boundary pieces.
pub fn partition<F>(sample: &WalkSample, components: usize, component: F) -> PartitionEstimate
where
    F: Fn(&BoundaryHit) -> usize,
{
    let mut counts = vec![0u64; components];
    for hit in sample.hits.iter().flatten() {
        let c = component(hit);
        if c < components {
            counts[c] += 1;
        }
    }
    let n = sample.completed();
    PartitionEstimate {
        components: counts.iter().map(|&c| MeasureEstimate::from_counts(c, n)).collect(),
        hits_by_component: counts,
        samples: sample.hits.len() as u64,
        aborted: sample.aborted,
    }
}

/// Mean and standard error of `f(hit)` over completed walks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

pub fn mean_over_hits<F>(sample: &WalkSample, f: F) -> MeanEstimate
where
    F: Fn(&BoundaryHit) -> f64,
{
    let mut sum = CompensatedSum::default();
    let mut sq = CompensatedSum::default();
    for hit in sample.hits.iter().flatten() {
        let v = f(hit);
        sum.add(v);
        sq.add(v * v);
    }
    let n = sample.completed();
    mean_and_stderr(sum.value(), sq.value(), n)
}

fn mean_and_stderr(sum: f64, sq: f64, n: u64) -> MeanEstimate {
    if n == 0 {
        return MeanEstimate {
            mean: 0.0,
            stderr: 0.0,
            samples: 0,
        };
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 {
        ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    MeanEstimate {
        mean,
        stderr: (var / nf).sqrt(),
        samples: n,
    }
}

/// Walk-on-spheres estimate of the harmonic measure at `i` in `Ω_L` of the
/// arc `{L e^{iτ}: 0 ≤ τ ≤ t}`. The Cayley map pulls `Ω_L` back to the disk
/// minus the cap over the gap `(−2 arctan L, 2 arctan L)` and `i` to 0.
pub fn arc_measure_wos(l: f64, t: f64, cfg: &WosConfig) -> Result<MeasureEstimate> {
    check_arc_args(l, t)?;
    let alpha = 2.0 * l.atan();
    let domain = PrivalovDomain::single_gap(-alpha, alpha)?;
    let est = wos_estimate(
        &domain,
        Complex64::new(0.0, 0.0),
        2,
        |hit| match hit {
            BoundaryHit::OnGeodesic { point, .. } => {
                let tau = cayley(*point).map_or(f64::NAN, |w| w.arg());
                usize::from(!(0.0..=t).contains(&tau))
            }
            BoundaryHit::OnE { .. } => 1,
        },
        cfg,
    )?;
    Ok(est.components[0])
}

/// Sub-arc `{γ(s): s ∈ [from, to]}` of a geodesic, in its own parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPiece {
    pub from: f64,
    pub to: f64,
}

impl GeodesicPiece {
    pub fn full() -> Self {
        Self { from: 0.0, to: 1.0 }
    }

    pub fn is_empty(&self) -> bool {
        !(self.to > self.from)
    }

    fn contains(&self, s: f64) -> bool {
        s >= self.from && s <= self.to
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubordinationReport {
    pub gap: (f64, f64),
    pub piece: GeodesicPiece,
    pub in_set_domain: MeasureEstimate,
    pub in_single_gap_domain: MeasureEstimate,
    /// `in_set ≤ in_single + 3(stderr_set + stderr_single)`.
    pub passed: bool,
}

/// Compares the harmonic measure at 0 of a piece of the geodesic over gap
/// `gap` in the domain of `set` with that in the domain of the single gap.
/// Both estimates use the same seed.
pub fn subordination_check(
    set: &ArcSet,
    gap: usize,
    piece: GeodesicPiece,
    cfg: &WosConfig,
) -> Result<SubordinationReport> {
    let &(a, b) = set
        .gaps()
        .get(gap)
        .ok_or_else(|| arg(format!("set has no gap {gap}")))?;
    let zero = MeasureEstimate::from_counts(0, cfg.samples);
    if piece.is_empty() {
        return Ok(SubordinationReport {
            gap: (a, b),
            piece,
            in_set_domain: zero,
            in_single_gap_domain: zero,
            passed: true,
        });
    }
    let full = PrivalovDomain::new(set.clone())?;
    let single = PrivalovDomain::single_gap(a, b)?;
    let target = |domain: &PrivalovDomain, index: usize| {
        let g = domain.geodesics()[index];
        move |hit: &BoundaryHit| match *hit {
            BoundaryHit::OnGeodesic { gap, point } if gap == index && piece.contains(g.parameter(point)) => 0,
            _ => 1,
        }
    };
    let origin = Complex64::new(0.0, 0.0);
    let in_set = wos_estimate(&full, origin, 2, target(&full, gap), cfg)?.components[0];
    let in_single = wos_estimate(&single, origin, 2, target(&single, 0), cfg)?.components[0];
    let passed = in_set.value <= in_single.value + 3.0 * (in_set.stderr + in_single.stderr);
    Ok(SubordinationReport {
        gap: (a, b),
        piece,
        in_set_domain: in_set,
        in_single_gap_domain: in_single,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapFunctional {
    pub gap: usize,
    pub start: f64,
    pub end: f64,
    pub length: f64,
    pub value: f64,
    pub stderr: f64,
    pub hits: u64,
    /// `8π·h(|ℓ|)`.
    pub bound: f64,
    /// `value ≤ bound + 3·stderr`.
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    pub per_gap: Vec<GapFunctional>,
    pub total: f64,
    pub total_stderr: f64,
    /// `max_ℓ value/h(|ℓ|)` over gaps with hits.
    pub empirical_constant: f64,
    /// Range of `[h(1−|z|)/(1−|z|)] / [h(1−|z|²)/(1−|z|²)]` over hit points.
    pub comparability_range: (f64, f64),
    pub samples: u64,
    pub aborted: u64,
    pub passed: bool,
}

/// Estimates `∫ h(1−|z|²)/(1−|z|²) dω(z, 0)` over each geodesic of the
/// domain of `set`, evaluating the integrand at the projected boundary
/// point of each hit.
pub fn integrability_functional(
    set: &ArcSet,
    h: &RegularMajorant,
    cfg: &WosConfig,
) -> Result<IntegrabilityReport> {
    let domain = PrivalovDomain::new(set.clone())?;
    let sample = simulate_walks(&domain, Complex64::new(0.0, 0.0), cfg)?;
    Ok(integrability_from_sample(set, h, &sample))
}

/// [`integrability_functional`] on recorded walks.
pub fn integrability_from_sample(set: &ArcSet, h: &RegularMajorant, sample: &WalkSample) -> IntegrabilityReport {
    let gaps = set.gaps();
    let mut sums = vec![CompensatedSum::default(); gaps.len()];
    let mut squares = vec![CompensatedSum::default(); gaps.len()];
    let mut counts = vec![0u64; gaps.len()];
    let mut total = CompensatedSum::default();
    let mut total_sq = CompensatedSum::default();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for hit in sample.hits.iter().flatten() {
        let BoundaryHit::OnGeodesic { gap, point } = *hit else {
            total_sq.add(0.0);
            continue;
        };
        let r = point.norm();
        let depth = 1.0 - r;
        if depth <= 0.0 {
            continue;
        }
        let x = depth * (1.0 + r);
        let v = h.ratio(x);
        if v > 0.0 {
            let ratio = h.ratio(depth) / v;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        sums[gap].add(v);
        squares[gap].add(v * v);
        counts[gap] += 1;
        total.add(v);
        total_sq.add(v * v);
    }
    let n = sample.completed();
    let mut per_gap = Vec::with_capacity(gaps.len());
    let mut constant: f64 = 0.0;
    for (i, &(a, b)) in gaps.iter().enumerate() {
        let est = mean_and_stderr(sums[i].value(), squares[i].value(), n);
        let len = b - a;
        let hl = h.eval(len);
        let bound = 8.0 * PI * hl;
        if counts[i] > 0 && hl > 0.0 {
            constant = constant.max(est.mean / hl);
        }
        per_gap.push(GapFunctional {
            gap: i,
            start: a,
            end: b,
            length: len,
            value: est.mean,
            stderr: est.stderr,
            hits: counts[i],
            bound,
            passed: est.mean <= bound + 3.0 * est.stderr,
        });
    }
    let tot = mean_and_stderr(total.value(), total_sq.value(), n);
    let passed = per_gap.iter().all(|g| g.passed);
    IntegrabilityReport {
        per_gap,
        total: tot.mean,
        total_stderr: tot.stderr,
        empirical_constant: constant,
        comparability_range: if lo <= hi { (lo, hi) } else { (f64::NAN, f64::NAN) },
        samples: sample.hits.len() as u64,
        aborted: sample.aborted,
        passed,
    }
}

/// Polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `lead · Π (z − r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Coefficients of `p(z0 + w)` in powers of `w`.
    pub fn taylor_at(&self, z0: Complex64) -> Vec<Complex64> {
        let mut c = self.coefficients.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let t = c[k + 1] * z0;
                c[k] += t;
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubharmonicityReport {
    pub log_abs_at_origin: f64,
    pub boundary_mean: MeanEstimate,
    pub perturbed_hits: u64,
    /// `p(0) = 0`: the inequality holds trivially.
    pub trivial: bool,
    /// `log|p(0)| ≤ mean + 3·stderr`.
    pub passed: bool,
}

const ROOT_GUARD: f64 = 1e-12;
const ROOT_NUDGE: f64 = 1e-9;

fn log_abs_on_boundary(p: &Polynomial, hit: &BoundaryHit, domain: &PrivalovDomain, nudged: &mut u64) -> f64 {
    let point = hit.point();
    let v = p.eval(point).norm();
    if v > ROOT_GUARD {
        return v.ln();
    }
    *nudged += 1;
    let moved = match *hit {
        BoundaryHit::OnE { angle } => Complex64::from_polar(1.0, angle + ROOT_NUDGE),
        BoundaryHit::OnGeodesic { gap, point } => {
            let g = domain.geodesics()[gap];
            g.point((g.parameter(point) + ROOT_NUDGE).min(1.0))
        }
    };
    p.eval(moved).norm().ln()
}

/// Checks `log|p(0)| ≤ ∫ log|p| dω(·, 0)` on the boundary of the domain of
/// `set` for several polynomials at once, reusing one set of walks.
pub fn subharmonicity_batch(
    polys: &[Polynomial],
    set: &ArcSet,
    cfg: &WosConfig,
) -> Result<Vec<SubharmonicityReport>> {
    if polys.iter().any(Polynomial::is_zero) {
        return Err(arg("the zero polynomial has no logarithm"));
    }
    let domain = PrivalovDomain::new(set.clone())?;
    let sample = simulate_walks(&domain, Complex64::new(0.0, 0.0), cfg)?;
    Ok(polys
        .iter()
        .map(|p| {
            let at0 = p.eval(Complex64::new(0.0, 0.0)).norm();
            let mut nudged = 0;
            let mut sum = CompensatedSum::default();
            let mut sq = CompensatedSum::default();
            for hit in sample.hits.iter().flatten() {
                let v = log_abs_on_boundary(p, hit, &domain, &mut nudged);
                sum.add(v);
                sq.add(v * v);
            }
            let mean = mean_and_stderr(sum.value(), sq.value(), sample.completed());
            let trivial = at0 == 0.0;
            let log0 = if trivial { f64::NEG_INFINITY } else { at0.ln() };
            SubharmonicityReport {
                log_abs_at_origin: log0,
                boundary_mean: mean,
                perturbed_hits: nudged,
                trivial,
                passed: trivial || log0 <= mean.mean + 3.0 * mean.stderr,
            }
        })
        .collect())
}

pub fn subharmonicity_check(p: &Polynomial, set: &ArcSet, cfg: &WosConfig) -> Result<SubharmonicityReport> {
    Ok(subharmonicity_batch(std::slice::from_ref(p), set, cfg)?.remove(0))
}
