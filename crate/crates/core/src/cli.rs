//! Command-line driver: set construction, verification suites and SVG
//! rendering. Exit codes: 0 pass, 1 assertion failure, 2 usage or
//! configuration error.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circle_sets::{
    audit_cantor_set, build_cantor_set, carleson_sum, split_long_gaps, ArcSet, DEFAULT_MAX_GAP,
};
use crate::conformal::{distortion_ratio, joukowski_svg, JoukowskiMap, PrivalovDomain};
use crate::error::Error;
use crate::harmonic_measure::{
    arc_measure_bound, arc_measure_exact, integrability_functional, subharmonicity_batch,
    subordination_check, GeodesicPiece, Polynomial, WosConfig,
};
use crate::majorants::{legendre_dominance, legendre_inf, PositiveSequence, RegularMajorant};
use crate::spectral_moments::{moment, moment_bound_check, moment_pipeline, CheckStatus};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "privalov", version, about = "Beurling-Carleson sets, harmonic measure and moment bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a Cantor-type set and write set.json, gaps.csv and domain.svg.
    ConstructSet(RunConfig),
    /// Run a verification suite and write report.json and report.csv.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: RunConfig,
    },
    /// Draw a domain (from --set) and optionally the slit half-plane.
    Render {
        #[command(flatten)]
        common: RunConfig,
        /// Radius L of the removed half-disk.
        #[arg(long)]
        joukowski: Option<f64>,
        /// Arc angle t marked on the half-circle.
        #[arg(long, default_value_t = FRAC_PI_2 / 2.0)]
        arc: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LemmaArc,
    Proposition,
    Legendre,
    Moments,
    Distortion,
    Subordination,
    Subharmonic,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Majorant: x, sqrt, square, xlog, invlog, zero, pow:<a>, or a JSON file.
    #[arg(long = "h", default_value = "sqrt")]
    h: String,
    /// Sequence: one_over_n, one_over_log, or a JSON file.
    #[arg(long = "c", default_value = "one_over_log")]
    c: String,
    /// Set file written by construct-set.
    #[arg(long)]
    set: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    /// Target measure of the set in radians, in (0, 2π).
    #[arg(long, default_value_t = PI)]
    measure: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_GAP)]
    max_gap: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1e-6)]
    eps_shell: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl RunConfig {
    fn wos(&self) -> WosConfig {
        WosConfig {
            eps_shell: self.eps_shell,
            seed: self.seed,
            samples: self.samples,
            ..WosConfig::default()
        }
    }

    fn majorant(&self) -> Result<RegularMajorant, Failure> {
        load_majorant(&self.h)
    }

    fn sequence(&self) -> Result<PositiveSequence, Failure> {
        let path = Path::new(&self.c);
        if path.is_file() {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
        }
        PositiveSequence::from_name(&self.c).map_err(|e| usage(e.to_string()))
    }

    fn check_measure(&self) -> Result<(), Failure> {
        if !(self.measure > 0.0 && self.measure < TAU) {
            return Err(usage(format!("--measure {} must lie in (0, 2π)", self.measure)));
        }
        Ok(())
    }

    /// The set from --set, or a Cantor set of the configured depth.
    fn base_set(&self, default_depth: usize) -> Result<ArcSet, Failure> {
        match &self.set {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                ArcSet::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
            }
            None => {
                self.check_measure()?;
                build_cantor_set(&self.majorant()?, self.measure, self.depth.unwrap_or(default_depth))
                    .map_err(|e| usage(e.to_string()))
            }
        }
    }

    fn domain_set(&self, default_depth: usize) -> Result<ArcSet, Failure> {
        split_long_gaps(&self.base_set(default_depth)?, self.max_gap).map_err(|e| usage(e.to_string()))
    }
}

fn load_majorant(spec: &str) -> Result<RegularMajorant, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    RegularMajorant::from_name(spec).map_err(|e| usage(e.to_string()))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Result of one suite: a pass flag, a summary and a table.
pub struct SuiteOutcome {
    pub passed: bool,
    pub status: CheckStatus,
    pub first_failure: Option<String>,
    pub summary: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SuiteOutcome {
    fn new(header: &[&str]) -> Self {
        Self {
            passed: true,
            status: CheckStatus::Pass,
            first_failure: None,
            summary: Value::Null,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>, ok: bool) {
        if !ok {
            self.fail(cells.join(","));
        }
        self.rows.push(cells);
    }

    fn fail(&mut self, what: String) {
        if self.passed {
            self.first_failure = Some(what);
        }
        self.passed = false;
        self.status = CheckStatus::Fail;
    }
}

fn cells<const N: usize>(values: [String; N]) -> Vec<String> {
    values.into()
}

fn flag(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::ConstructSet(common) => construct_set(&common),
        Command::Verify { suite, common } => verify(suite, &common),
        Command::Render {
            common,
            joukowski,
            arc,
        } => render(&common, joukowski, arc),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn construct_set(common: &RunConfig) -> Result<bool, Failure> {
    common.check_measure()?;
    let h = common.majorant()?;
    let depth = common.depth.unwrap_or(6);
    let set = build_cantor_set(&h, common.measure, depth).map_err(|e| usage(e.to_string()))?;
    let audit = audit_cantor_set(&set, &h, common.measure, depth);
    let split = split_long_gaps(&set, common.max_gap).map_err(|e| usage(e.to_string()))?;
    let domain = PrivalovDomain::new(split.clone())?;

    write_file(&common.out, "set.json", set.to_json()?.as_bytes())?;
    let mut csv = Vec::new();
    set.write_gaps_csv(&mut csv)?;
    write_file(&common.out, "gaps.csv", &csv)?;
    write_file(&common.out, "domain.svg", domain.to_svg(800).as_bytes())?;

    println!(
        "construct-set: {} gaps ({} after splitting to {}), measure {:.12}, carleson sum {:.12}, max arc {:.3e}: {}",
        set.num_gaps(),
        split.num_gaps(),
        common.max_gap,
        audit.measure,
        audit.carleson_sum,
        audit.max_arc_length,
        if audit.passed { "audit pass" } else { "audit FAIL" }
    );
    if let Some(log) = set.construction_log() {
        for w in &log.warnings {
            eprintln!("warning: {w}");
        }
    }
    if !audit.passed {
        eprintln!("audit: {audit:?}");
    }
    Ok(audit.passed)
}

fn verify(suite: Suite, common: &RunConfig) -> Result<bool, Failure> {
    let outcome = run_suite(suite, common)?;
    let report = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "verify",
        "suite": suite,
        "config": common,
        "passed": outcome.passed,
        "status": outcome.status,
        "first_failure": outcome.first_failure,
        "summary": outcome.summary,
        "rows": outcome.rows.len(),
    });
    let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_file(&common.out, "report.json", text.as_bytes())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&outcome.header).map_err(|e| Failure::Runtime(e.to_string()))?;
    for r in &outcome.rows {
        w.write_record(r).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))?;
    write_file(&common.out, "report.csv", &bytes)?;

    let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    match (&outcome.status, &outcome.first_failure) {
        (CheckStatus::Pass, _) => println!("verify {name}: PASS ({} rows)", outcome.rows.len()),
        (CheckStatus::Inconclusive, _) => println!("verify {name}: INCONCLUSIVE"),
        (CheckStatus::Fail, f) => {
            println!("verify {name}: FAIL");
            if let Some(f) = f {
                eprintln!("first failing row: {f}");
            }
        }
    }
    Ok(outcome.passed)
}

fn run_suite(suite: Suite, common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    match suite {
        Suite::LemmaArc => lemma_arc(),
        Suite::Distortion => distortion(common),
        Suite::Legendre => legendre(common),
        Suite::Moments => moments(common),
        Suite::Proposition => proposition(common),
        Suite::Subordination => subordination(common),
        Suite::Subharmonic => subharmonic(common),
    }
}

/// Largest `L` for which the arc measure is increasing in `L` at every `t`:
/// `2L/(1−L²) = 1`. Beyond it the measure decreases in `L` when
/// `(2L/(1−L²))² cos t > 1`.
pub const ARC_MONOTONE_L: f64 = std::f64::consts::SQRT_2 - 1.0;

fn lemma_arc() -> Result<SuiteOutcome, Failure> {
    let mut out = SuiteOutcome::new(&["L", "t", "exact", "bound", "result"]);
    let mut previous_in_l = vec![f64::NEG_INFINITY; 100];
    let (mut monotone_t, mut monotone_l) = (true, true);
    let mut decreasing_beyond = 0usize;
    for i in 1..=50 {
        let l = i as f64 / 100.0;
        let mut previous_in_t = f64::NEG_INFINITY;
        for j in 1..=100 {
            let t = j as f64 * PI / 200.0;
            let exact = arc_measure_exact(l, t)?;
            let bound = arc_measure_bound(l, t)?;
            monotone_t &= exact > previous_in_t;
            if exact <= previous_in_l[j - 1] {
                if l <= ARC_MONOTONE_L {
                    monotone_l = false;
                } else {
                    decreasing_beyond += 1;
                }
            }
            previous_in_t = exact;
            previous_in_l[j - 1] = exact;
            out.row(
                cells([l.to_string(), t.to_string(), exact.to_string(), bound.to_string(), flag(exact <= bound + 1e-12)]),
                exact <= bound + 1e-12,
            );
        }
    }
    if !monotone_t {
        out.fail("exact measure is not increasing in t on the grid".into());
    }
    if !monotone_l {
        out.fail(format!("exact measure is not increasing in L for L ≤ {ARC_MONOTONE_L}"));
    }
    out.summary = json!({
        "grid_points": out.rows.len(),
        "monotone_in_t": monotone_t,
        "monotone_in_l_below": ARC_MONOTONE_L,
        "monotone_in_l": monotone_l,
        "decreasing_pairs_beyond": decreasing_beyond,
    });
    Ok(out)
}

/// Uniform random point of the closed right half-disk.
pub fn random_right_half_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random::<f64>(), 2.0 * rng.random::<f64>() - 1.0);
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

fn distortion(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let mut out = SuiteOutcome::new(&["z1", "z2", "ratio", "result"]);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut violations = 0u64;
    for _ in 0..common.samples {
        let (z1, z2) = (random_right_half_disk(&mut rng), random_right_half_disk(&mut rng));
        let Ok(r) = distortion_ratio(z1, z2) else { continue };
        lo = lo.min(r);
        hi = hi.max(r);
        if !(0.5..=2.0).contains(&r) {
            violations += 1;
            out.row(cells([z1.to_string(), z2.to_string(), r.to_string(), flag(false)]), false);
        }
    }
    out.summary = json!({ "pairs": common.samples, "min_ratio": lo, "max_ratio": hi, "violations": violations, "seed": common.seed });
    Ok(out)
}

fn legendre(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let c = common.sequence()?;
    let window = legendre_dominance(&c, common.horizon)?;
    let mut out = SuiteOutcome::new(&["n", "infimum", "argmin", "target", "asserted", "result"]);
    let n0 = window.n0;
    for r in &window.rows {
        let asserted = n0.is_some_and(|n0| r.n >= n0);
        out.row(
            cells([r.n.to_string(), r.infimum.to_string(), r.argmin.to_string(), r.target.to_string(), asserted.to_string(), flag(r.holds)]),
            !asserted || r.holds,
        );
    }
    // Grid cross-check of the infimum at a few random n.
    let regular = crate::majorants::regularize_sequence(&c, common.horizon + 1)?;
    let h = crate::majorants::h_from_sequence(regular.sequence(), common.horizon, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut checks = Vec::new();
    for _ in 0..10 {
        let n = rng.random_range(1..=common.horizon as u64);
        let inf = legendre_inf(n, &h);
        let grid = grid_minimum(n, &h, 1_000_000);
        let ok = inf.value <= grid * (1.0 + 1e-12) && (grid - inf.value) <= 1e-6 * inf.value.abs().max(1.0);
        if !ok {
            out.fail(format!("grid check at n = {n}: infimum {} vs grid {grid}", inf.value));
        }
        checks.push(json!({ "n": n, "infimum": inf.value, "grid_minimum": grid, "ok": ok }));
    }
    if n0.is_none() {
        out.passed = false;
        out.status = CheckStatus::Inconclusive;
    }
    out.summary = json!({ "n0": n0, "horizon": common.horizon, "grid_checks": checks });
    Ok(out)
}

/// `min_k n x_k + h(x_k)/x_k` over `points` log-spaced `x_k` in `[1e-12, 1]`.
pub fn grid_minimum(n: u64, h: &RegularMajorant, points: usize) -> f64 {
    let step = 12.0 / (points - 1) as f64;
    (0..points)
        .map(|k| {
            let x = 10f64.powf(-12.0 + step * k as f64);
            n as f64 * x + h.ratio(x)
        })
        .fold(f64::INFINITY, f64::min)
}

fn moments(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let c = common.sequence()?;
    let table = moment_bound_check(&c, common.horizon, common.tol)?;
    let mut out = SuiteOutcome::new(&["n", "moment", "err", "bound", "legendre", "asserted", "result"]);
    for r in &table.rows {
        let ok = !r.asserted || (r.holds && r.error_ok);
        out.row(
            cells([
                r.n.to_string(),
                r.moment.to_string(),
                r.error.to_string(),
                r.bound.to_string(),
                r.legendre.to_string(),
                r.asserted.to_string(),
                flag(r.holds && r.error_ok),
            ]),
            ok && r.implication_ok,
        );
    }
    // Closed form G(x) = 1 − x.
    let xlog = RegularMajorant::x_log_inv();
    let mut closed_ok = true;
    for n in crate::spectral_moments::log_grid(common.horizon as u64) {
        let exact = 1.0 / ((n as f64 + 1.0) * (n as f64 + 2.0));
        let m = moment(&xlog, n, common.tol.min(1e-10))?;
        if (m.value - exact).abs() > 1e-8 * exact {
            closed_ok = false;
            out.fail(format!("closed form at n = {n}: {} vs {exact}", m.value));
        }
    }
    match table.status {
        CheckStatus::Fail => out.fail("moment table failed".into()),
        CheckStatus::Inconclusive if out.passed => {
            out.passed = false;
            out.status = CheckStatus::Inconclusive;
        }
        _ => {}
    }
    write_file(&common.out, "moments.svg", table.to_svg(640, 420).as_bytes())?;
    let added = moment_pipeline(&c, 1)?.added_x_log || table.added_x_log;
    out.summary = json!({ "n0": table.n0, "added_x_log": added, "closed_form_ok": closed_ok, "table_status": table.status });
    Ok(out)
}

fn proposition(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let h = common.majorant()?;
    let cfg = common.wos();
    let mut out = SuiteOutcome::new(&["gap", "start", "end", "length", "value", "stderr", "bound", "result"]);
    let set = common.domain_set(6)?;
    let report = integrability_functional(&set, &h, &cfg)?;
    for g in &report.per_gap {
        out.row(
            cells([
                g.gap.to_string(),
                g.start.to_string(),
                g.end.to_string(),
                g.length.to_string(),
                g.value.to_string(),
                g.stderr.to_string(),
                g.bound.to_string(),
                flag(g.passed),
            ]),
            g.passed,
        );
    }
    let mut sweep = Value::Null;
    if common.set.is_none() {
        let depth = common.depth.unwrap_or(6);
        let mut totals = Vec::new();
        for d in 2..=depth {
            let base = build_cantor_set(&h, common.measure, d)?;
            let s = split_long_gaps(&base, common.max_gap)?;
            totals.push(integrability_functional(&s, &h, &cfg)?.total);
        }
        let inc: Vec<f64> = totals.windows(2).map(|w| w[1] - w[0]).collect();
        let decreasing = inc.windows(2).all(|w| w[1] < w[0]);
        if !decreasing {
            out.fail(format!("totals {totals:?} do not have strictly decreasing increments"));
        }
        sweep = json!({ "depths": (2..=depth).collect::<Vec<_>>(), "totals": totals, "increments": inc, "decreasing": decreasing });
    }
    out.summary = json!({
        "gaps": set.num_gaps(),
        "total": report.total,
        "total_stderr": report.total_stderr,
        "empirical_constant": report.empirical_constant,
        "comparability_range": [report.comparability_range.0, report.comparability_range.1],
        "carleson_sum": carleson_sum(&set, &h),
        "aborted": report.aborted,
        "seed": cfg.seed,
        "depth_sweep": sweep,
    });
    Ok(out)
}

/// Indices of the `k` longest gaps, longest first.
pub fn largest_gaps(set: &ArcSet, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..set.num_gaps()).collect();
    let len = |i: usize| set.gaps()[i].1 - set.gaps()[i].0;
    idx.sort_by(|&a, &b| len(b).total_cmp(&len(a)).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

fn subordination(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let set = common.domain_set(4)?;
    let cfg = common.wos();
    let mut out = SuiteOutcome::new(&["gap", "length", "in_set", "stderr_set", "single_gap", "stderr_single", "result"]);
    for gap in largest_gaps(&set, 3) {
        let r = subordination_check(&set, gap, GeodesicPiece::full(), &cfg)?;
        out.row(
            cells([
                gap.to_string(),
                (r.gap.1 - r.gap.0).to_string(),
                r.in_set_domain.value.to_string(),
                r.in_set_domain.stderr.to_string(),
                r.in_single_gap_domain.value.to_string(),
                r.in_single_gap_domain.stderr.to_string(),
                flag(r.passed),
            ]),
            r.passed,
        );
    }
    out.summary = json!({ "gaps": set.num_gaps(), "seed": cfg.seed, "samples": cfg.samples });
    Ok(out)
}

/// `count` polynomials with random degree in `1..=max_degree` and
/// coefficients uniform in the square `[−1, 1]²`.
pub fn random_polynomials(seed: u64, count: usize, max_degree: usize) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let deg = rng.random_range(1..=max_degree);
            let mut c: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0))
                .collect();
            if c[deg] == Complex64::new(0.0, 0.0) {
                c[deg] = Complex64::new(1.0, 0.0);
            }
            Polynomial::new(c)
        })
        .collect()
}

/// `count` polynomials of degree in `1..=max_degree` whose roots have
/// modulus in `[1.2, 3]`.
pub fn random_root_free_polynomials(seed: u64, count: usize, max_degree: usize) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| {
            let deg = rng.random_range(1..=max_degree);
            let roots: Vec<Complex64> = (0..deg)
                .map(|_| Complex64::from_polar(1.2 + 1.8 * rng.random::<f64>(), TAU * rng.random::<f64>()))
                .collect();
            Polynomial::from_roots(Complex64::new(1.0, 0.0), &roots)
        })
        .collect()
}

fn subharmonic(common: &RunConfig) -> Result<SuiteOutcome, Failure> {
    let set = common.domain_set(4)?;
    let cfg = common.wos();
    let mut out = SuiteOutcome::new(&["domain", "index", "degree", "log_abs_p0", "boundary_mean", "stderr", "result"]);
    let polys = random_polynomials(common.seed, 20, 20);
    for (i, r) in subharmonicity_batch(&polys, &set, &cfg)?.iter().enumerate() {
        out.row(
            cells([
                "set".into(),
                i.to_string(),
                polys[i].degree().unwrap_or(0).to_string(),
                r.log_abs_at_origin.to_string(),
                r.boundary_mean.mean.to_string(),
                r.boundary_mean.stderr.to_string(),
                flag(r.passed),
            ]),
            r.passed,
        );
    }
    let free = random_root_free_polynomials(common.seed, 20, 20);
    for (i, r) in subharmonicity_batch(&free, &ArcSet::full_circle(), &cfg)?.iter().enumerate() {
        let ok = (r.log_abs_at_origin - r.boundary_mean.mean).abs() <= 3.0 * r.boundary_mean.stderr;
        out.row(
            cells([
                "disk".into(),
                i.to_string(),
                free[i].degree().unwrap_or(0).to_string(),
                r.log_abs_at_origin.to_string(),
                r.boundary_mean.mean.to_string(),
                r.boundary_mean.stderr.to_string(),
                flag(ok),
            ]),
            ok,
        );
    }
    out.summary = json!({ "gaps": set.num_gaps(), "seed": cfg.seed, "samples": cfg.samples });
    Ok(out)
}

fn render(common: &RunConfig, joukowski: Option<f64>, arc: f64) -> Result<bool, Failure> {
    let set = match &common.set {
        Some(_) => common.domain_set(0)?,
        None => ArcSet::full_circle(),
    };
    let domain = PrivalovDomain::new(set).map_err(|e| usage(e.to_string()))?;
    write_file(&common.out, "domain.svg", domain.to_svg(800).as_bytes())?;
    if let Some(l) = joukowski {
        let map = JoukowskiMap::new(l).map_err(|e| usage(e.to_string()))?;
        if !(0.0..=PI).contains(&arc) {
            return Err(usage(format!("--arc {arc} is outside [0, π]")));
        }
        write_file(&common.out, "joukowski.svg", joukowski_svg(&map, arc, 800).as_bytes())?;
    }
    Ok(true)
}
