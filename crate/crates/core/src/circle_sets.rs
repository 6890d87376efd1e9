//! Closed subsets of the unit circle stored through their complementary
//! open gaps, Carleson sums, and a Cantor-type construction of
//! h-Beurling-Carleson sets of positive measure.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{arg, domain, Result};
use crate::majorants::RegularMajorant;
use crate::quadrature::CompensatedSum;

/// Deepest supported Cantor construction.
pub const MAX_DEPTH: usize = 24;

/// Default upper bound on gap lengths for the domain construction.
pub const DEFAULT_MAX_GAP: f64 = 0.1;

/// One stage of a Cantor-type construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub gap_length: f64,
    pub gaps_added: usize,
    /// `gaps_added · h(gap_length)`.
    pub carleson_increment: f64,
    /// Carleson sum of all stages up to and including this one.
    pub carleson_partial: f64,
    pub removed_length: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub stages: Vec<StageRecord>,
    pub warnings: Vec<String>,
}

/// A closed set `E ⊂ 𝕋`, given by its open complementary gaps.
///
/// Each gap is `(start, end)` with `start ∈ [0, 2π)` and `end > start`; a gap
/// that straddles angle 0 keeps a single entry with `end > 2π`. Gaps are
/// sorted by start and overlapping gaps are merged. Gaps that only share an
/// endpoint stay separate, since that endpoint is a point of `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSet {
    gaps: Vec<(f64, f64)>,
    stages: usize,
    log: Option<ConstructionLog>,
}

impl Default for ArcSet {
    fn default() -> Self {
        Self::full_circle()
    }
}

impl ArcSet {
    pub fn full_circle() -> Self {
        Self {
            gaps: Vec::new(),
            stages: 0,
            log: None,
        }
    }

    pub fn from_gaps(gaps: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in gaps {
            if !(a.is_finite() && b.is_finite()) {
                return Err(arg("gap endpoints must be finite"));
            }
            if !(b > a) {
                return Err(arg(format!("gap ({a}, {b}) is empty")));
            }
            if b - a >= TAU {
                return Err(arg(format!("gap ({a}, {b}) covers the circle")));
            }
            let shift = (a / TAU).floor() * TAU;
            let (mut a, mut b) = (a - shift, b - shift);
            if a >= TAU {
                a -= TAU;
                b -= TAU;
            }
            out.push((a, b));
        }
        let gaps = canonicalize(out);
        let removed: f64 = gaps.iter().map(|(a, b)| b - a).sum();
        if removed >= TAU {
            return Err(arg("gaps cover the whole circle"));
        }
        Ok(Self {
            gaps,
            stages: 0,
            log: None,
        })
    }

    pub fn gaps(&self) -> &[(f64, f64)] {
        &self.gaps
    }

    pub fn num_gaps(&self) -> usize {
        self.gaps.len()
    }

    pub fn gap_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.gaps.iter().map(|(a, b)| b - a)
    }

    /// Number of construction stages (0 for sets not built in stages).
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn construction_log(&self) -> Option<&ConstructionLog> {
        self.log.as_ref()
    }

    /// Lebesgue measure of `E`: `2π − Σ |ℓ|`.
    pub fn measure(&self) -> f64 {
        let removed: CompensatedSum = self.gap_lengths().collect();
        TAU - removed.value()
    }

    /// The maximal closed arcs of `E`, as `(start, length)`.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        let n = self.gaps.len();
        if n == 0 {
            return vec![(0.0, TAU)];
        }
        (0..n)
            .map(|i| {
                let end = self.gaps[i].1;
                let next = if i + 1 < n {
                    self.gaps[i + 1].0
                } else {
                    self.gaps[0].0 + TAU
                };
                (end % TAU, (next - end).max(0.0))
            })
            .collect()
    }

    /// Length of the longest arc of `E`.
    pub fn max_arc_length(&self) -> f64 {
        self.arcs().into_iter().map(|a| a.1).fold(0.0, f64::max)
    }

    /// Index of the gap containing the angle, if any.
    pub fn gap_containing(&self, angle: f64) -> Option<usize> {
        let t = angle.rem_euclid(TAU);
        self.gaps
            .iter()
            .position(|&(a, b)| (t > a && t < b) || (t + TAU > a && t + TAU < b))
    }

    /// Writes one CSV row per gap: index, start, end, length.
    pub fn write_gaps_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "start", "end", "length"])?;
        for (i, (a, b)) in self.gaps.iter().enumerate() {
            w.write_record([i.to_string(), a.to_string(), b.to_string(), (b - a).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn canonicalize(mut gaps: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    gaps.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(gaps.len());
    for (a, b) in gaps {
        match merged.last_mut() {
            Some(last) if a < last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    // A gap running past 2π may overlap gaps at the start of the circle.
    while merged.len() > 1 {
        let end = merged.last().unwrap().1 - TAU;
        if end > merged[0].0 {
            let first = merged.remove(0);
            let last = merged.last_mut().unwrap();
            last.1 = last.1.max(first.1 + TAU);
        } else {
            break;
        }
    }
    merged
}

#[derive(Serialize, Deserialize)]
struct ArcSetDoc {
    gaps: Vec<[f64; 2]>,
    measure: f64,
    stages: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    construction_log: Option<ConstructionLog>,
}

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ArcSetDoc {
            gaps: self.gaps.iter().map(|&(a, b)| [a, b]).collect(),
            measure: self.measure(),
            stages: self.stages,
            construction_log: self.log.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ArcSetDoc::deserialize(d)?;
        let mut set = ArcSet::from_gaps(doc.gaps.into_iter().map(|g| (g[0], g[1])))
            .map_err(serde::de::Error::custom)?;
        set.stages = doc.stages;
        set.log = doc.construction_log;
        Ok(set)
    }
}

/// `Σ_ℓ h(|ℓ|)`.
pub fn carleson_sum(set: &ArcSet, h: &RegularMajorant) -> f64 {
    set.gap_lengths()
        .map(|l| h.eval(l))
        .collect::<CompensatedSum>()
        .value()
}

/// Cumulative Carleson sums after each stage of a staged construction.
pub fn stage_partial_sums(set: &ArcSet) -> Vec<f64> {
    set.log
        .as_ref()
        .map(|log| log.stages.iter().map(|s| s.carleson_partial).collect())
        .unwrap_or_default()
}

/// The gap `(a, b)` with `b` the largest float for which `b − a ≤ eps`.
fn gap_from(a: f64, eps: f64, stage: usize) -> Result<(f64, f64)> {
    let mut b = a + eps;
    while b - a > eps {
        b = b.next_down();
    }
    if b <= a {
        return Err(domain(format!(
            "stage {stage}: gap length {eps:e} is below the angular resolution at {a}"
        )));
    }
    Ok((a, b))
}

/// Cantor-type h-Beurling-Carleson set of measure at least `target_measure`.
///
/// Stage 0 removes two antipodal gaps (centred at 0 and π) of length
/// `ε_0 = min(h⁻¹(1/2), budget/8)`; stage `k ≥ 1` removes a centred gap of
/// length `ε_k = min(h⁻¹(4^{-k}), budget·4^{-(k+1)})` from each of the `2^k`
/// surviving arcs, where `budget = 2π − target_measure`. After `depth`
/// stages there are `2^depth` gaps, the Carleson sum is below 2, at most
/// `budget/2` has been removed and every arc is shorter than `2π·2^{-depth}`.
pub fn build_cantor_set(h: &RegularMajorant, target_measure: f64, depth: usize) -> Result<ArcSet> {
    if !(target_measure > 0.0 && target_measure < TAU) {
        return Err(arg(format!(
            "target measure {target_measure} is outside (0, 2π)"
        )));
    }
    if depth > MAX_DEPTH {
        return Err(arg(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    let budget = TAU - target_measure;
    let mut log = ConstructionLog::default();
    let mut gaps = Vec::new();
    // Surviving arcs as (start, length).
    let mut arcs: Vec<(f64, f64)> = Vec::new();
    let mut partial = CompensatedSum::default();

    for stage in 0..depth {
        let (carleson_cap, budget_cap) = if stage == 0 {
            (0.5, budget / 8.0)
        } else {
            (0.25f64.powi(stage as i32), budget * 0.25f64.powi(stage as i32 + 1))
        };
        let eps = h.inverse_below(carleson_cap).map_or(budget_cap, |x| x.min(budget_cap));
        let first = gaps.len();
        if stage == 0 {
            let half = 0.5 * eps;
            let (a0, b0) = gap_from(TAU - half, eps, stage)?;
            let (a1, b1) = gap_from(PI - half, eps, stage)?;
            gaps.push((a0, b0));
            gaps.push((a1, b1));
            arcs.push((b0 - TAU, a1 - (b0 - TAU)));
            arcs.push((b1, a0 - b1));
        } else {
            let mut next = Vec::with_capacity(2 * arcs.len());
            for &(start, len) in &arcs {
                if eps >= len {
                    log.warnings.push(format!(
                        "stage {stage}: gap {eps:e} does not fit arc of length {len:e} at {start}; arc kept"
                    ));
                    next.push((start, len));
                    continue;
                }
                let (a, b) = gap_from(start + 0.5 * (len - eps), eps, stage)?;
                gaps.push((a, b));
                next.push((start, a - start));
                next.push((b, start + len - b));
            }
            arcs = next;
        }
        // Realized lengths may fall a few ulps short of eps.
        let added = &gaps[first..];
        let increment: CompensatedSum = added.iter().map(|&(a, b)| h.eval(b - a)).collect();
        let removed: CompensatedSum = added.iter().map(|&(a, b)| b - a).collect();
        partial.add(increment.value());
        log.stages.push(StageRecord {
            stage,
            gap_length: eps,
            gaps_added: added.len(),
            carleson_increment: increment.value(),
            carleson_partial: partial.value(),
            removed_length: removed.value(),
        });
    }

    let mut set = ArcSet::from_gaps(gaps)?;
    set.stages = depth;
    set.log = Some(log);
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CantorAudit {
    pub measure: f64,
    pub measure_ok: bool,
    pub carleson_sum: f64,
    pub carleson_ok: bool,
    pub max_arc_length: f64,
    pub max_arc_ok: bool,
    /// Each stage adds at most `2^{-k}` to the Carleson sum (1 for stage 0).
    pub stage_increments_ok: bool,
    pub passed: bool,
}

/// Re-checks the guarantees of [`build_cantor_set`] on its output.
pub fn audit_cantor_set(
    set: &ArcSet,
    h: &RegularMajorant,
    target_measure: f64,
    depth: usize,
) -> CantorAudit {
    const TOL: f64 = 1e-12;
    let measure = set.measure();
    let carleson = carleson_sum(set, h);
    let max_arc = set.max_arc_length();
    let arc_cap = TAU * 0.5f64.powi(depth as i32);
    let stage_increments_ok = set.log.as_ref().is_none_or(|log| {
        log.stages.iter().all(|s| {
            let cap = if s.stage == 0 {
                1.0
            } else {
                0.5f64.powi(s.stage as i32)
            };
            s.carleson_increment <= cap + TOL
        })
    });
    let measure_ok = measure >= target_measure - TOL;
    let carleson_ok = carleson <= 2.0 + TOL;
    let max_arc_ok = max_arc <= arc_cap + TOL;
    CantorAudit {
        measure,
        measure_ok,
        carleson_sum: carleson,
        carleson_ok,
        max_arc_length: max_arc,
        max_arc_ok,
        stage_increments_ok,
        passed: measure_ok && carleson_ok && max_arc_ok && stage_increments_ok,
    }
}

/// Splits every gap longer than `max_gap` into `⌈|ℓ|/max_gap⌉` equal gaps
/// separated by single points of `E`.
pub fn split_long_gaps(set: &ArcSet, max_gap: f64) -> Result<ArcSet> {
    if !(max_gap > 0.0) {
        return Err(arg("max_gap must be positive"));
    }
    let mut out = Vec::with_capacity(set.gaps.len());
    for &(a, b) in &set.gaps {
        let len = b - a;
        if len <= max_gap {
            out.push((a, b));
            continue;
        }
        let mut parts = (len / max_gap).ceil() as usize;
        loop {
            let cuts: Vec<f64> = (0..=parts)
                .map(|j| if j == parts { b } else { a + len * j as f64 / parts as f64 })
                .collect();
            if cuts.windows(2).all(|w| w[1] - w[0] <= max_gap) {
                out.extend(cuts.windows(2).map(|w| (w[0], w[1])));
                break;
            }
            parts += 1;
        }
    }
    let mut split = ArcSet::from_gaps(out)?;
    split.stages = set.stages;
    split.log = set.log.clone();
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carleson_sum_of_dyadic_gaps() {
        let mut gaps = Vec::new();
        let mut at = 0.0;
        for k in 1..=20 {
            let len = 0.5f64.powi(k);
            gaps.push((at, at + len));
            at += len + 1e-3;
        }
        let set = ArcSet::from_gaps(gaps).unwrap();
        let s = carleson_sum(&set, &RegularMajorant::sqrt());
        // Σ_{k=1}^{20} 2^{-k/2} = (1 − 2^{-10})/(√2 − 1); the infinite sum is
        // 1/(√2 − 1), 2.4e-3 away.
        let limit = 1.0 / (2f64.sqrt() - 1.0);
        assert!((s - limit * (1.0 - 0.5f64.powi(10))).abs() < 1e-12);
        assert!((limit - s) < limit * 0.5f64.powi(10) + 1e-12);
    }

    #[test]
    fn carleson_sum_trivial_cases() {
        let h = RegularMajorant::sqrt();
        assert_eq!(carleson_sum(&ArcSet::full_circle(), &h), 0.0);
        let set = ArcSet::from_gaps([(1.0, 1.36)]).unwrap();
        assert!((carleson_sum(&set, &h) - 0.36f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cantor_depth_zero_is_the_circle() {
        let set = build_cantor_set(&RegularMajorant::sqrt(), PI, 0).unwrap();
        assert_eq!(set.num_gaps(), 0);
        assert_eq!(set.measure(), TAU);
        assert_eq!(set.max_arc_length(), TAU);
    }

    #[test]
    fn cantor_sqrt_depth_six() {
        let h = RegularMajorant::sqrt();
        let set = build_cantor_set(&h, PI, 6).unwrap();
        assert_eq!(set.num_gaps(), 64);
        let audit = audit_cantor_set(&set, &h, PI, 6);
        assert!(audit.passed, "{audit:?}");
        assert!(set.construction_log().unwrap().warnings.is_empty());
    }

    #[test]
    fn cantor_stage_increments_for_x_log() {
        let h = RegularMajorant::x_log_inv();
        let set = build_cantor_set(&h, 0.9 * TAU, 10).unwrap();
        let partial = stage_partial_sums(&set);
        assert_eq!(partial.len(), 10);
        for k in 1..10 {
            assert!(partial[k] - partial[k - 1] <= 0.5f64.powi(k as i32) + 1e-15);
        }
        assert!(audit_cantor_set(&set, &h, 0.9 * TAU, 10).passed);
    }

    #[test]
    fn cantor_rejects_bad_targets() {
        let h = RegularMajorant::sqrt();
        assert!(build_cantor_set(&h, TAU, 3).is_err());
        assert!(build_cantor_set(&h, 0.0, 3).is_err());
        assert!(build_cantor_set(&h, PI, 25).is_err());
    }

    #[test]
    fn split_examples() {
        let set = ArcSet::from_gaps([(2.0, 3.0)]).unwrap();
        let split = split_long_gaps(&set, 0.3).unwrap();
        assert_eq!(split.num_gaps(), 4);
        for l in split.gap_lengths() {
            assert!((l - 0.25).abs() < 1e-15);
        }
        assert!((split.measure() - set.measure()).abs() < 1e-12);

        let exact = ArcSet::from_gaps([(1.0, 1.25)]).unwrap();
        assert_eq!(split_long_gaps(&exact, 0.25).unwrap(), exact);
        assert!(split_long_gaps(&exact, 0.0).is_err());
    }

    #[test]
    fn antipodal_gaps_leave_two_short_arcs() {
        let d = 0.01;
        let set = ArcSet::from_gaps([(d / 2.0, PI - d / 2.0), (PI + d / 2.0, TAU - d / 2.0)]).unwrap();
        let arcs = set.arcs();
        assert_eq!(arcs.len(), 2);
        for (_, len) in arcs {
            assert!((len - d).abs() < 1e-14);
        }
        assert!((set.max_arc_length() - d).abs() < 1e-14);
    }

    #[test]
    fn wraparound_gap_is_one_entry() {
        let set = ArcSet::from_gaps([(-0.1, 0.1), (3.0, 3.2)]).unwrap();
        assert_eq!(set.gaps()[1].0, TAU - 0.1);
        assert_eq!(set.gap_containing(0.05), Some(1));
        assert_eq!(set.gap_containing(TAU - 0.05), Some(1));
        assert_eq!(set.gap_containing(1.0), None);
        // Merging across 0.
        let merged = ArcSet::from_gaps([(-0.1, 0.1), (0.05, 0.2)]).unwrap();
        assert_eq!(merged.num_gaps(), 1);
        assert!((merged.measure() - (TAU - 0.3)).abs() < 1e-14);
    }

    #[test]
    fn touching_gaps_stay_separate_and_overlaps_merge() {
        let set = ArcSet::from_gaps([(1.0, 1.5), (1.5, 2.0), (1.8, 2.5)]).unwrap();
        assert_eq!(set.gaps(), &[(1.0, 1.5), (1.5, 2.5)]);
    }

    #[test]
    fn json_round_trip_and_shape() {
        let set = build_cantor_set(&RegularMajorant::sqrt(), PI, 3).unwrap();
        let text = set.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["stages"], 3);
        assert_eq!(v["gaps"].as_array().unwrap().len(), 8);
        assert_eq!(ArcSet::from_json(&text).unwrap(), set);
    }

    #[test]
    fn csv_export() {
        let set = ArcSet::from_gaps([(1.0, 1.5)]).unwrap();
        let mut buf = Vec::new();
        set.write_gaps_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "index,start,end,length\n0,1,1.5,0.5\n");
    }
}
