use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::approx::Evaluator;
use super::checks::{one_psi_two, BetaForm, Checker, LogConcaveForm, Slot};
use super::grid::{korobov, rng, GridSpec, SampleMode, Source};
use super::report::{InequalityReport, ZSpec};
use crate::error::{Error, Result};
use crate::{functions, series, Config, Params};

/// Largest |ln value| of a sampled base series; keeps products and squares in range.
const LOG_CAP: f64 = 250.0;
/// Largest term count of a sampled base series.
const TERM_CAP: usize = 4000;
/// Points in the z- and β₁-grids of the monotonicity suites.
pub const GRID_POINTS: usize = 20;

#[derive(Debug, Clone, Copy)]
struct RangeDecl {
    name: &'static str,
    default: (f64, f64),
    min: f64,
    max: f64,
    /// The domain excludes `min` itself.
    open_min: bool,
}

const fn r(name: &'static str, lo: f64, hi: f64, min: f64, max: f64) -> RangeDecl {
    RangeDecl { name, default: (lo, hi), min, max, open_min: true }
}

const fn closed(d: RangeDecl) -> RangeDecl {
    RangeDecl { open_min: false, ..d }
}

const BIG: f64 = 1e6;
const P: RangeDecl = closed(r("p", 1.0, 3.0, 0.0, 8.0));
const Q: RangeDecl = closed(r("q", 1.0, 3.0, 0.0, 8.0));
const ALPHA: RangeDecl = r("alpha", 0.1, 5.0, 0.0, BIG);
const ALPHA1: RangeDecl = r("alpha1", 0.1, 5.0, 0.0, BIG);
const BETA: RangeDecl = r("beta", 0.1, 5.0, 0.0, BIG);
const BETA1: RangeDecl = r("beta1", 0.1, 5.0, 0.0, BIG);
const BETA2: RangeDecl = r("beta2", 0.1, 5.0, 0.0, BIG);
const A: RangeDecl = closed(r("A", 0.0, 3.0, 0.0, BIG));
const B: RangeDecl = closed(r("B", 0.0, 3.0, 0.0, BIG));
const B1: RangeDecl = closed(r("B1", 0.0, 3.0, 0.0, BIG));
const N: RangeDecl = closed(r("n", 0.0, 3.0, 0.0, 1000.0));
const NU: RangeDecl = r("nu", -0.9, 5.0, -1.0, BIG);
const Z: RangeDecl = r("z", 0.0, 20.0, 0.0, BIG);
const Z_NEG: RangeDecl = closed(r("z", -5.0, 0.0, -BIG, 0.0));

/// A named family of checks with its sampling domain.
#[derive(Debug, Clone, Copy)]
pub struct Suite {
    pub id: &'static str,
    pub variants: &'static [&'static str],
    /// Exploration probes report verdicts instead of pass/fail rows.
    pub explore: bool,
    ranges: &'static [RangeDecl],
}

impl Suite {
    pub fn range_names(&self) -> Vec<&'static str> {
        self.ranges.iter().map(|d| d.name).collect()
    }

    fn decl(&self, name: &str) -> &RangeDecl {
        self.ranges
            .iter()
            .find(|d| d.name == name)
            .unwrap_or_else(|| panic!("suite {} has no range {name}", self.id))
    }

    /// The range in effect: the grid's own, else the first fallback present, else the default.
    fn range(&self, grid: &GridSpec, names: &[&str]) -> (f64, f64) {
        names
            .iter()
            .find_map(|n| grid.ranges.get(*n).copied())
            .unwrap_or_else(|| self.decl(names[0]).default)
    }

    /// Every grid range must be known to the suite and lie inside its domain.
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        grid.validate()?;
        for (name, &(lo, hi)) in &grid.ranges {
            let d = self.ranges.iter().find(|d| d.name == name).ok_or_else(|| {
                Error::Grid(format!("suite {} has no range {name}; known: {}", self.id, self.range_names().join(", ")))
            })?;
            let inside = lo >= d.min && hi <= d.max && (!d.open_min || hi > d.min);
            if !inside {
                return Err(Error::Grid(format!(
                    "range {name} = [{lo}, {hi}] leaves the domain [{}, {}] of suite {}",
                    d.min, d.max, self.id
                )));
            }
        }
        if matches!(self.id, "chi" | "lazarevic" | "wilker") || self.id == "problem2-xi" {
            let (alo, ahi) = self.range(grid, &["alpha1"]);
            let (blo, _) = self.range(grid, &["beta2"]);
            if blo > ahi {
                return Err(Error::Grid(format!(
                    "suite {} needs alpha1 >= beta2 but beta2 >= {blo} > alpha1 <= {ahi} (alpha1 in [{alo}, {ahi}])",
                    self.id
                )));
            }
        }
        if self.id == "logconcave" {
            let (_, ahi) = self.range(grid, &["alpha1", "alpha"]);
            let (blo, _) = self.range(grid, &["beta"]);
            if blo > ahi {
                return Err(Error::Grid(format!("suite logconcave needs alpha_i >= beta_(i+1) but beta >= {blo} > alpha <= {ahi}")));
            }
        }
        Ok(())
    }
}

const FW: &[RangeDecl] = &[P, Q, ALPHA, ALPHA1, A, BETA, BETA1, B, B1, Z, N];
const PSI12: &[RangeDecl] = &[ALPHA1, BETA1, BETA2, B1, NU, Z];

pub const SUITES: &[Suite] = &[
    Suite { id: "turan-alpha", variants: &["generic", "pfq"], explore: false, ranges: FW },
    Suite {
        id: "turan-beta",
        variants: &["generic", "tilde", "pfq", "mittag-leffler", "wright"],
        explore: false,
        ranges: FW,
    },
    Suite { id: "corollary3-2f2", variants: &["generic"], explore: false, ranges: &[ALPHA1, BETA1, BETA2, Z_NEG] },
    Suite {
        id: "ratio-monotone",
        variants: &["beta", "alpha", "pfq-beta", "pfq-alpha", "wright", "mittag-leffler"],
        explore: false,
        ranges: FW,
    },
    Suite { id: "tail-turan", variants: &["generic"], explore: false, ranges: FW },
    Suite { id: "kn-bound", variants: &["generic"], explore: false, ranges: FW },
    Suite { id: "chi", variants: &["generic"], explore: false, ranges: &[ALPHA1, BETA1, BETA2, B1, Z] },
    Suite { id: "lazarevic", variants: &["generic", "b1-one", "alpha1-one", "wright", "bessel"], explore: false, ranges: PSI12 },
    Suite {
        id: "wilker",
        variants: &["generic", "b1-one", "alpha1-one", "remark3-59-reconstructed", "bessel"],
        explore: false,
        ranges: PSI12,
    },
    Suite {
        id: "logconcave",
        variants: &["generic", "pfq", "mittag-leffler"],
        explore: false,
        ranges: &[P, ALPHA, ALPHA1, BETA, BETA1, B1, Z],
    },
    Suite { id: "problem1-kn", variants: &["generic"], explore: true, ranges: FW },
    Suite {
        id: "problem2-xi",
        variants: &["one-psi-two", "generic"],
        explore: true,
        ranges: &[P, Q, ALPHA, ALPHA1, A, BETA, BETA1, BETA2, B, B1, Z],
    },
];

pub fn suite(id: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.id == id).ok_or_else(|| {
        let ids: Vec<_> = SUITES.iter().map(|s| s.id).collect();
        Error::Parameter(format!("unknown suite {id}; known: {}", ids.join(", ")))
    })
}

/// One sampled check, ready to run against any backend.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Instance {
    TuranAlpha { params: Params, z: f64 },
    TuranAlphaPfq { upper: Vec<f64>, lower: Vec<f64>, z: f64 },
    TuranBeta { params: Params, z: f64, form: BetaForm },
    TuranBetaPfq { upper: Vec<f64>, lower: Vec<f64>, z: f64 },
    TwoF2Product { alpha1: f64, beta1: f64, beta2: f64, z: f64 },
    Ratio { params: Params, slot: Slot, v1: f64, v2: f64, grid: Vec<f64> },
    RatioPfq { upper: Vec<f64>, lower: Vec<f64>, slot: Slot, v1: f64, v2: f64, grid: Vec<f64> },
    RatioMittagLeffler { b1: f64, v1: f64, v2: f64, grid: Vec<f64> },
    TailTuran { params: Params, n: usize, z: f64 },
    Kn { params: Params, n: usize, z: f64, grid: Vec<f64> },
    Chi { alpha1: f64, beta2: f64, b1: f64, beta1_grid: Vec<f64>, z: f64 },
    Lazarevic { alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64, variant: String },
    LazarevicPfq { alpha1: f64, beta1: f64, beta2: f64, z: f64 },
    LazarevicBessel { nu: f64, z: f64 },
    Wilker { alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64, variant: String },
    WilkerPfq { alpha1: f64, beta1: f64, beta2: f64, z: f64 },
    WilkerBessel { nu: f64, z: f64 },
    LogConcave { alphas: Vec<f64>, beta1: f64, b1: f64, betas: Vec<f64>, z1: f64, z2: f64, form: LogConcaveForm },
    ExploreKn { params: Params, n: usize, grid: Vec<f64> },
    ExploreXi { params: Params, grid: Vec<f64>, variant: String },
}

fn tag(mut r: InequalityReport, variant: &str) -> InequalityReport {
    if let Value::Object(m) = &mut r.params_echo {
        m.entry("variant").or_insert_with(|| Value::String(variant.to_string()));
    }
    r
}

impl Instance {
    fn suite_id(&self) -> &'static str {
        match self {
            Instance::TuranAlpha { .. } | Instance::TuranAlphaPfq { .. } => "turan-alpha",
            Instance::TuranBeta { .. } | Instance::TuranBetaPfq { .. } => "turan-beta",
            Instance::TwoF2Product { .. } => "corollary3-2f2",
            Instance::Ratio { .. } | Instance::RatioPfq { .. } | Instance::RatioMittagLeffler { .. } => "ratio-monotone",
            Instance::TailTuran { .. } => "tail-turan",
            Instance::Kn { .. } => "kn-bound",
            Instance::Chi { .. } => "chi",
            Instance::Lazarevic { .. } | Instance::LazarevicPfq { .. } | Instance::LazarevicBessel { .. } => "lazarevic",
            Instance::Wilker { .. } | Instance::WilkerPfq { .. } | Instance::WilkerBessel { .. } => "wilker",
            Instance::LogConcave { .. } => "logconcave",
            Instance::ExploreKn { .. } => "problem1-kn",
            Instance::ExploreXi { .. } => "problem2-xi",
        }
    }

    fn z_spec(&self) -> ZSpec {
        match self {
            Instance::Ratio { grid, .. }
            | Instance::RatioPfq { grid, .. }
            | Instance::RatioMittagLeffler { grid, .. }
            | Instance::ExploreKn { grid, .. }
            | Instance::ExploreXi { grid, .. } => ZSpec::grid(grid),
            Instance::Chi { beta1_grid, .. } => ZSpec::grid(beta1_grid),
            Instance::LogConcave { z1, z2, .. } => ZSpec::Pair(*z1, *z2),
            Instance::TuranAlpha { z, .. }
            | Instance::TuranAlphaPfq { z, .. }
            | Instance::TuranBeta { z, .. }
            | Instance::TuranBetaPfq { z, .. }
            | Instance::TwoF2Product { z, .. }
            | Instance::TailTuran { z, .. }
            | Instance::Kn { z, .. }
            | Instance::Lazarevic { z, .. }
            | Instance::LazarevicPfq { z, .. }
            | Instance::LazarevicBessel { z, .. }
            | Instance::Wilker { z, .. }
            | Instance::WilkerPfq { z, .. }
            | Instance::WilkerBessel { z, .. } => ZSpec::Point(*z),
        }
    }

    /// The report rows of a check instance; numerical errors become
    /// numerical-failure rows, input errors are returned.
    pub fn run<E: Evaluator>(&self, c: &Checker<E>) -> Result<Vec<InequalityReport>> {
        match self.try_run(c) {
            Ok(rows) => Ok(rows),
            Err(e) if e.is_numerical() => {
                let echo = serde_json::to_value(self).unwrap_or(Value::Null);
                Ok(vec![InequalityReport::numerical_failure(self.suite_id(), echo, self.z_spec(), &e.to_string())])
            }
            Err(e) => Err(e),
        }
    }

    fn try_run<E: Evaluator>(&self, c: &Checker<E>) -> Result<Vec<InequalityReport>> {
        let one = |r: Result<InequalityReport>| r.map(|r| vec![r]);
        match self {
            Instance::TuranAlpha { params, z } => one(c.turan_alpha(params, *z).map(|r| tag(r, "generic"))),
            Instance::TuranAlphaPfq { upper, lower, z } => one(c.turan_alpha_pfq(upper, lower, *z)),
            Instance::TuranBeta { params, z, form } => one(c.turan_beta(params, *z, *form)),
            Instance::TuranBetaPfq { upper, lower, z } => one(c.turan_beta_pfq(upper, lower, *z)),
            Instance::TwoF2Product { alpha1, beta1, beta2, z } => one(c.corollary3_2f2(*alpha1, *beta1, *beta2, *z)),
            Instance::Ratio { params, slot, v1, v2, grid } => one(c.ratio_monotonicity(params, *slot, *v1, *v2, grid)),
            Instance::RatioPfq { upper, lower, slot, v1, v2, grid } => {
                one(c.ratio_monotonicity_pfq(upper, lower, *slot, *v1, *v2, grid))
            }
            Instance::RatioMittagLeffler { b1, v1, v2, grid } => one(c.ratio_monotonicity_ml(*b1, *v1, *v2, grid)),
            Instance::TailTuran { params, n, z } => one(c.tail_turan(params, *n, *z)),
            Instance::Kn { params, n, z, grid } => {
                Ok(vec![tag(c.kn_value_and_bound(params, *n, *z)?, "bound"), c.kn_monotone(params, *n, grid)?])
            }
            Instance::Chi { alpha1, beta2, b1, beta1_grid, z } => one(c.chi(*alpha1, *beta2, *b1, beta1_grid, *z)),
            Instance::Lazarevic { alpha1, beta1, beta2, b1, z, variant } => {
                one(c.lazarevic(*alpha1, *beta1, *beta2, *b1, *z).map(|r| tag(r, variant)))
            }
            Instance::LazarevicPfq { alpha1, beta1, beta2, z } => one(c.lazarevic_pfq(*alpha1, *beta1, *beta2, *z)),
            Instance::LazarevicBessel { nu, z } => one(c.lazarevic_bessel(*nu, *z)),
            Instance::Wilker { alpha1, beta1, beta2, b1, z, variant } => {
                one(c.wilker(*alpha1, *beta1, *beta2, *b1, *z).map(|r| tag(r, variant)))
            }
            Instance::WilkerPfq { alpha1, beta1, beta2, z } => one(c.wilker_pfq(*alpha1, *beta1, *beta2, *z)),
            Instance::WilkerBessel { nu, z } => one(c.wilker_bessel(*nu, *z)),
            Instance::LogConcave { alphas, beta1, b1, betas, z1, z2, form } => {
                c.logconcavity(alphas, *beta1, *b1, betas, *z1, *z2, *form)
            }
            Instance::ExploreKn { .. } | Instance::ExploreXi { .. } => {
                Err(Error::Parameter(format!("{} is an exploration probe; use explore", self.suite_id())))
            }
        }
    }

    /// The verdict of an exploration instance.
    pub fn explore<E: Evaluator>(&self, c: &Checker<E>) -> Result<Exploration> {
        let (echo, values, steps_of) = match self {
            Instance::ExploreKn { params, n, grid } => {
                let ks = grid.iter().map(|&z| c.kn_value(params, *n, z)).collect::<Result<Vec<_>>>()?;
                (json!({ "params": params.to_json(), "n": n }), ks, true)
            }
            Instance::ExploreXi { params, grid, variant } => {
                let xs = grid.iter().map(|&z| c.xi_prime(params, z)).collect::<Result<Vec<_>>>()?;
                (json!({ "params": params.to_json(), "variant": variant }), xs, false)
            }
            _ => return Err(Error::Parameter(format!("{} is not an exploration probe", self.suite_id()))),
        };
        // Signed changes with their noise level: K_n steps, or Ξ′ values directly.
        let changes: Vec<(f64, f64)> = if steps_of {
            values
                .windows(2)
                .map(|w| (w[1].value - w[0].value, w[0].err + w[1].err + c.tol.slack(w[0].value, w[1].value)))
                .collect()
        } else {
            values.iter().map(|v| (v.value, v.err + c.tol.abs)).collect()
        };
        Ok(Exploration::classify(self.suite_id(), echo, self.z_spec(), &changes))
    }
}

/// Observed monotonicity of an exploration probe along its z-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exploration {
    pub suite_id: String,
    pub params_echo: Value,
    pub z_grid: ZSpec,
    /// nondecreasing, nonincreasing, constant or non-monotone.
    pub verdict: String,
    pub increases: usize,
    pub decreases: usize,
    pub min_step: f64,
    pub max_step: f64,
}

impl Exploration {
    fn classify(suite: &str, echo: Value, z: ZSpec, changes: &[(f64, f64)]) -> Self {
        let increases = changes.iter().filter(|(d, s)| *d > *s).count();
        let decreases = changes.iter().filter(|(d, s)| *d < -*s).count();
        let verdict = match (increases, decreases) {
            (0, 0) => "constant",
            (_, 0) => "nondecreasing",
            (0, _) => "nonincreasing",
            _ => "non-monotone",
        };
        Exploration {
            suite_id: suite.to_string(),
            params_echo: echo,
            z_grid: z,
            verdict: verdict.to_string(),
            increases,
            decreases,
            min_step: changes.iter().map(|c| c.0).fold(f64::INFINITY, f64::min),
            max_step: changes.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Draws coordinates and maps them into the suite's ranges.
struct Ctx<'a, 'b> {
    suite: &'a Suite,
    grid: &'a GridSpec,
    src: Source<'b>,
}

impl Ctx<'_, '_> {
    fn u(&mut self) -> f64 {
        self.src.next()
    }

    /// A real from the first range present among `names`.
    fn real(&mut self, names: &[&str]) -> f64 {
        let (lo, hi) = self.suite.range(self.grid, names);
        self.between(lo, hi)
    }

    fn between(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.u();
        if lo == hi {
            lo
        } else {
            lo + u * (hi - lo)
        }
    }

    fn int(&mut self, name: &str) -> usize {
        let (lo, hi) = self.suite.range(self.grid, &[name]);
        let (lo, hi) = (lo.ceil().max(0.0), hi.floor().max(0.0));
        let u = self.u();
        if hi <= lo {
            return lo as usize;
        }
        (lo + (u * (hi - lo + 1.0)).floor()).min(hi) as usize
    }

    /// A real from `names` restricted to ≤ cap; None when the range lies above cap.
    fn real_capped(&mut self, names: &[&str], cap: f64) -> Option<f64> {
        let (lo, hi) = self.suite.range(self.grid, names);
        let hi = hi.min(cap);
        let v = self.between(lo, hi);
        (lo <= hi && v > 0.0).then_some(v)
    }

    fn z(&mut self) -> f64 {
        self.real(&["z"])
    }

    /// 20 points z_max·i/20, i = 1..20.
    fn z_grid(&mut self) -> Vec<f64> {
        let zmax = self.z();
        (1..=GRID_POINTS).map(|i| zmax * i as f64 / GRID_POINTS as f64).collect()
    }

    /// Random ₚΨ_q with the first slots drawn from alpha1/beta1 when given.
    fn fox_wright(&mut self, p: usize, q: usize, zero_a: bool) -> Option<Params> {
        let mut upper = Vec::with_capacity(p);
        for i in 0..p {
            let a = if i == 0 { self.real(&["alpha1", "alpha"]) } else { self.real(&["alpha"]) };
            let w = if zero_a { 0.0 } else { self.real(&["A"]) };
            upper.push((a, w));
        }
        let mut lower = Vec::with_capacity(q);
        for j in 0..q {
            let b = if j == 0 { self.real(&["beta1", "beta"]) } else { self.real(&["beta"]) };
            let w = if j == 0 { self.real(&["B1", "B"]) } else { self.real(&["B"]) };
            lower.push((b, w));
        }
        let params = Params::new(upper, lower).ok()?;
        (params.epsilon() > 0.0).then_some(params)
    }

    fn values(&mut self, n: usize, first: &[&str], rest: &[&str]) -> Vec<f64> {
        (0..n).map(|i| if i == 0 { self.real(first) } else { self.real(rest) }).collect()
    }

    /// v1 ≠ v2 from the first-slot range.
    fn pair(&mut self, names: &[&str]) -> Option<(f64, f64)> {
        let (v1, v2) = (self.real(names), self.real(names));
        ((v1 - v2).abs() > 1e-3).then_some((v1, v2))
    }

    /// α₁ and β₂ ≤ α₁.
    fn alpha_beta2(&mut self) -> Option<(f64, f64)> {
        let a = self.real(&["alpha1"]);
        let b = self.real_capped(&["beta2"], a)?;
        Some((a, b))
    }
}

fn fw_ok(params: &Params, z: f64) -> bool {
    params.epsilon() > 0.0
        && matches!(series::eval(params, z, &Config::default()),
            Ok(r) if r.log_magnitude.abs() < LOG_CAP && r.terms_used < TERM_CAP)
}

fn hyp_ok(upper: &[f64], lower: &[f64], z: f64) -> bool {
    matches!(functions::hypergeometric_series(upper, lower, z, &Config::default()),
        Ok(r) if r.value != 0.0 && r.value.abs().ln().abs() < LOG_CAP && r.terms_used < TERM_CAP)
}

fn psi12_ok(alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> bool {
    one_psi_two(alpha1, beta1, b1, beta2).is_ok_and(|p| fw_ok(&p, z))
        && one_psi_two(alpha1, beta1 + 1.0, b1, beta2).is_ok_and(|p| fw_ok(&p, z))
}

/// Draws one candidate for `variant`; None rejects it.
fn draw(ctx: &mut Ctx, variant: &str) -> Option<Instance> {
    let id = ctx.suite.id;
    match (id, variant) {
        ("turan-alpha", "generic") => {
            let (p, q) = (ctx.int("p").max(1), ctx.int("q"));
            let params = ctx.fox_wright(p, q, false)?;
            let z = ctx.z();
            fw_ok(&params.with_alpha1(params.upper[0].0 + 2.0), z).then_some(Instance::TuranAlpha { params, z })
        }
        ("turan-alpha", "pfq") => {
            let p = ctx.int("p").max(1);
            let q = ctx.int("q").max(p);
            let upper = ctx.values(p, &["alpha1", "alpha"], &["alpha"]);
            let lower = ctx.values(q, &["beta1", "beta"], &["beta"]);
            let z = ctx.z();
            let mut top = upper.clone();
            top[0] += 2.0;
            hyp_ok(&top, &lower, z).then_some(Instance::TuranAlphaPfq { upper, lower, z })
        }
        ("turan-beta", "generic" | "tilde") => {
            let (p, q) = (ctx.int("p"), ctx.int("q").max(1));
            let params = ctx.fox_wright(p, q, false)?;
            let z = ctx.z();
            let form = if variant == "tilde" { BetaForm::Tilde } else { BetaForm::Plain };
            fw_ok(&params, z).then_some(Instance::TuranBeta { params, z, form })
        }
        ("turan-beta", "pfq") => {
            let q = ctx.int("q").max(1);
            let p = ctx.int("p").min(q);
            let upper = ctx.values(p, &["alpha1", "alpha"], &["alpha"]);
            let lower = ctx.values(q, &["beta1", "beta"], &["beta"]);
            let z = ctx.z();
            hyp_ok(&upper, &lower, z).then_some(Instance::TuranBetaPfq { upper, lower, z })
        }
        ("turan-beta", "mittag-leffler") => {
            let q = ctx.int("q").max(1);
            let mut params = ctx.fox_wright(0, q, false)?;
            params.upper = vec![(1.0, 1.0)];
            let z = ctx.z();
            fw_ok(&params, z).then_some(Instance::TuranBeta { params, z, form: BetaForm::Plain })
        }
        ("turan-beta", "wright") => {
            let params = ctx.fox_wright(0, 1, false)?;
            let z = ctx.z();
            fw_ok(&params, z).then_some(Instance::TuranBeta { params, z, form: BetaForm::Tilde })
        }
        ("corollary3-2f2", _) => {
            let (alpha1, beta1, beta2) = (ctx.real(&["alpha1"]), ctx.real(&["beta1"]), ctx.real(&["beta2"]));
            let z = ctx.z();
            if !(z < 0.0) || alpha1 == beta2 {
                return None;
            }
            let d = alpha1 - beta2;
            let aux = [1.0 + alpha1 - beta1, alpha1 - beta1 - 1.0, alpha1 - beta1].map(|x| beta2 * x / d);
            aux.iter().all(|&x| x > 0.0).then_some(Instance::TwoF2Product { alpha1, beta1, beta2, z })
        }
        ("ratio-monotone", "beta" | "alpha") => {
            let (p, q) = if variant == "beta" {
                (ctx.int("p"), ctx.int("q").max(1))
            } else {
                (ctx.int("p").max(1), ctx.int("q"))
            };
            let params = ctx.fox_wright(p, q, false)?;
            let (slot, names) = if variant == "beta" {
                (Slot::Beta, ["beta1", "beta"])
            } else {
                (Slot::Alpha, ["alpha1", "alpha"])
            };
            let (v1, v2) = ctx.pair(&names)?;
            let grid = ctx.z_grid();
            let zmax = grid[GRID_POINTS - 1];
            let (a, b) = match slot {
                Slot::Beta => (params.with_beta1(v1), params.with_beta1(v2)),
                Slot::Alpha => (params.with_alpha1(v1.max(v2)), params.with_alpha1(v1.min(v2))),
            };
            (fw_ok(&a, zmax) && fw_ok(&b, zmax) && fw_ok(&a.shifted(), zmax))
                .then_some(Instance::Ratio { params, slot, v1, v2, grid })
        }
        ("ratio-monotone", "pfq-beta" | "pfq-alpha") => {
            let slot = if variant == "pfq-beta" { Slot::Beta } else { Slot::Alpha };
            let q = ctx.int("q").max(1);
            let p = ctx.int("p").min(q).max(usize::from(slot == Slot::Alpha));
            let upper = ctx.values(p, &["alpha1", "alpha"], &["alpha"]);
            let lower = ctx.values(q, &["beta1", "beta"], &["beta"]);
            let names = if slot == Slot::Beta { ["beta1", "beta"] } else { ["alpha1", "alpha"] };
            let (v1, v2) = ctx.pair(&names)?;
            let grid = ctx.z_grid();
            let zmax = grid[GRID_POINTS - 1];
            let mut up: Vec<f64> = upper.iter().map(|a| a + 1.0).collect();
            let mut lw: Vec<f64> = lower.iter().map(|b| b + 1.0).collect();
            match slot {
                Slot::Beta => lw[0] = v1.min(v2) + 1.0,
                Slot::Alpha => up[0] = v1.max(v2) + 1.0,
            }
            hyp_ok(&up, &lw, zmax).then_some(Instance::RatioPfq { upper, lower, slot, v1, v2, grid })
        }
        ("ratio-monotone", "wright") => {
            let params = ctx.fox_wright(0, 1, false)?;
            let (v1, v2) = ctx.pair(&["beta1", "beta"])?;
            let grid = ctx.z_grid();
            let zmax = grid[GRID_POINTS - 1];
            fw_ok(&params.with_beta1(v1.min(v2)), zmax)
                .then_some(Instance::Ratio { params, slot: Slot::Beta, v1, v2, grid })
        }
        ("ratio-monotone", "mittag-leffler") => {
            let b1 = ctx.real(&["B1", "B"]);
            let (v1, v2) = ctx.pair(&["beta1", "beta"])?;
            let grid = ctx.z_grid();
            if !(v1 > 1.0 && v2 > 1.0) || b1 <= 0.0 {
                return None;
            }
            let e = Params::new(vec![(1.0, 1.0)], vec![(v1.min(v2) - 1.0, b1)]).ok()?;
            fw_ok(&e, grid[GRID_POINTS - 1]).then_some(Instance::RatioMittagLeffler { b1, v1, v2, grid })
        }
        ("tail-turan" | "kn-bound", _) => {
            let (p, q) = (ctx.int("p"), ctx.int("q"));
            let params = ctx.fox_wright(p, q, true)?;
            let n = ctx.int("n");
            if id == "tail-turan" {
                let z = ctx.z();
                fw_ok(&params, z).then_some(Instance::TailTuran { params, n, z })
            } else {
                let grid = ctx.z_grid();
                let z = grid[GRID_POINTS - 1];
                fw_ok(&params, z).then_some(Instance::Kn { params, n, z: grid[0], grid })
            }
        }
        ("chi", _) => {
            let (alpha1, beta2) = ctx.alpha_beta2()?;
            let b1 = ctx.real(&["B1"]);
            let (x, y) = (ctx.real(&["beta1"]), ctx.real(&["beta1"]));
            let (lo, hi) = (x.min(y), x.max(y));
            let z = ctx.z();
            if hi - lo < 1e-2 {
                return None;
            }
            let beta1_grid: Vec<f64> =
                (0..GRID_POINTS).map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).collect();
            (psi12_ok(alpha1 + 1.0, lo, beta2, b1, z) && psi12_ok(alpha1, lo, beta2, b1, z))
                .then_some(Instance::Chi { alpha1, beta2, b1, beta1_grid, z })
        }
        ("lazarevic" | "wilker", _) => draw_one_psi_two(ctx, variant),
        ("logconcave", _) => {
            let form = match variant {
                "pfq" => LogConcaveForm::Hypergeometric,
                "mittag-leffler" => LogConcaveForm::MittagLeffler,
                _ => LogConcaveForm::General,
            };
            let p = if form == LogConcaveForm::MittagLeffler { 1 } else { ctx.int("p").max(1) };
            let mut alphas = ctx.values(p, &["alpha1", "alpha"], &["alpha"]);
            if form == LogConcaveForm::MittagLeffler {
                alphas = vec![1.0];
            }
            let mut betas = Vec::with_capacity(p);
            for &a in &alphas {
                betas.push(ctx.real_capped(&["beta"], a)?);
            }
            let beta1 = ctx.real(&["beta1"]);
            let b1 = if form == LogConcaveForm::Hypergeometric { 1.0 } else { ctx.real(&["B1"]) };
            let (z1, z2) = (ctx.z(), ctx.z());
            let mut lower = vec![(beta1, b1)];
            lower.extend(betas.iter().map(|&b| (b + 1.0, 1.0)));
            let shifted = Params::new(alphas.iter().map(|&a| (a + 1.0, 1.0)).collect(), lower).ok()?;
            fw_ok(&shifted, z1.max(z2))
                .then_some(Instance::LogConcave { alphas, beta1, b1, betas, z1, z2, form })
        }
        ("problem1-kn", _) => {
            let (p, q) = (ctx.int("p"), ctx.int("q"));
            let params = ctx.fox_wright(p, q, false)?;
            let n = ctx.int("n");
            let grid = ctx.z_grid();
            fw_ok(&params, grid[GRID_POINTS - 1]).then_some(Instance::ExploreKn { params, n, grid })
        }
        ("problem2-xi", _) => {
            let params = if variant == "one-psi-two" {
                let (alpha1, beta2) = ctx.alpha_beta2()?;
                let (beta1, b1) = (ctx.real(&["beta1"]), ctx.real(&["B1"]));
                one_psi_two(alpha1, beta1, b1, beta2).ok()?
            } else {
                let (p, q) = (ctx.int("p"), ctx.int("q").max(1));
                ctx.fox_wright(p, q, false)?
            };
            let grid = ctx.z_grid();
            let zmax = grid[GRID_POINTS - 1];
            (fw_ok(&params.shifted(), zmax) && fw_ok(&params.with_beta1(params.lower[0].0 + 1.0).shifted(), zmax))
                .then_some(Instance::ExploreXi { params, grid, variant: variant.to_string() })
        }
        _ => None,
    }
}

fn draw_one_psi_two(ctx: &mut Ctx, variant: &str) -> Option<Instance> {
    let lazarevic = ctx.suite.id == "lazarevic";
    match variant {
        "bessel" => {
            let (nu, z) = (ctx.real(&["nu"]), ctx.z());
            let p = one_psi_two(1.0, nu + 2.0, 1.0, 1.0).ok()?;
            if !(nu > -1.0) || !fw_ok(&p, z * z / 4.0) {
                return None;
            }
            Some(if lazarevic { Instance::LazarevicBessel { nu, z } } else { Instance::WilkerBessel { nu, z } })
        }
        "b1-one" => {
            let (alpha1, beta2) = ctx.alpha_beta2()?;
            let (beta1, z) = (ctx.real(&["beta1"]), ctx.z());
            if !psi12_ok(alpha1, beta1, beta2, 1.0, z) {
                return None;
            }
            Some(if lazarevic {
                Instance::LazarevicPfq { alpha1, beta1, beta2, z }
            } else {
                Instance::WilkerPfq { alpha1, beta1, beta2, z }
            })
        }
        _ => {
            let (alpha1, beta2) = match variant {
                "alpha1-one" => (1.0, ctx.real_capped(&["beta2"], 1.0)?),
                "wright" | "remark3-59-reconstructed" => {
                    let a = ctx.real(&["alpha1"]);
                    let (lo, hi) = ctx.suite.range(ctx.grid, &["beta2"]);
                    if a < lo || a > hi {
                        return None;
                    }
                    (a, a)
                }
                _ => ctx.alpha_beta2()?,
            };
            let (beta1, b1, z) = (ctx.real(&["beta1"]), ctx.real(&["B1"]), ctx.z());
            if !psi12_ok(alpha1, beta1, beta2, b1, z) {
                return None;
            }
            let variant = variant.to_string();
            Some(if lazarevic {
                Instance::Lazarevic { alpha1, beta1, beta2, b1, z, variant }
            } else {
                Instance::Wilker { alpha1, beta1, beta2, b1, z, variant }
            })
        }
    }
}

/// Instances of a suite drawn from the grid, in a deterministic order.
#[derive(Debug, Clone)]
pub struct Sample {
    pub instances: Vec<Instance>,
    /// Candidates rejected by the domain or feasibility filter.
    pub rejected: usize,
}

/// Random mode draws until `samples` instances are accepted (variant = index
/// mod #variants); lattice mode keeps the accepted points of an n-point lattice.
pub fn sample(suite: &Suite, grid: &GridSpec) -> Result<Sample> {
    suite.validate(grid)?;
    let nv = suite.variants.len();
    let mut instances = Vec::with_capacity(grid.samples);
    let mut rejected = 0;
    match grid.mode {
        SampleMode::Random => {
            let mut rng = rng(grid.seed);
            let max_attempts = 50 * grid.samples + 1000;
            while instances.len() < grid.samples {
                if instances.len() + rejected >= max_attempts {
                    return Err(Error::Grid(format!(
                        "suite {}: only {} of {} samples feasible after {max_attempts} draws",
                        suite.id,
                        instances.len(),
                        grid.samples
                    )));
                }
                let variant = suite.variants[instances.len() % nv];
                let mut ctx = Ctx { suite, grid, src: Source::Random(&mut rng) };
                match draw(&mut ctx, variant) {
                    Some(i) => instances.push(i),
                    None => rejected += 1,
                }
            }
        }
        SampleMode::Lattice => {
            let n = grid.samples as u64;
            let a = korobov(n);
            for index in 0..n {
                let variant = suite.variants[index as usize % nv];
                let mut ctx = Ctx { suite, grid, src: Source::Lattice { index, n, a, g: 1 } };
                match draw(&mut ctx, variant) {
                    Some(i) => instances.push(i),
                    None => rejected += 1,
                }
            }
            if instances.is_empty() {
                return Err(Error::Grid(format!("suite {}: no lattice point is feasible", suite.id)));
            }
        }
    }
    Ok(Sample { instances, rejected })
}

/// Runs check instances in parallel; rows come back in instance order.
pub fn run_instances<E: Evaluator>(instances: &[Instance], checker: &Checker<E>) -> Result<Vec<InequalityReport>> {
    let rows: Vec<Result<Vec<InequalityReport>>> = instances.par_iter().map(|i| i.run(checker)).collect();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Runs exploration instances in parallel, in instance order.
pub fn explore_instances<E: Evaluator>(instances: &[Instance], checker: &Checker<E>) -> Result<Vec<Exploration>> {
    instances.par_iter().map(|i| i.explore(checker)).collect()
}

/// Samples and runs a check suite.
pub fn run_suite<E: Evaluator>(id: &str, grid: &GridSpec, checker: &Checker<E>) -> Result<Vec<InequalityReport>> {
    let s = suite(id)?;
    if s.explore {
        return Err(Error::Parameter(format!("{id} is an exploration probe; use explore")));
    }
    run_instances(&sample(s, grid)?.instances, checker)
}

/// Approximate pass/fail tally of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub numerical_failures: usize,
    /// Index of the row with the smallest margin + slack.
    pub worst: Option<usize>,
}

impl Summary {
    pub fn of(rows: &[InequalityReport], tol: &super::Tolerance) -> Self {
        use super::Verdict;
        let count = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
        let worst = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.margin.is_finite())
            .min_by(|(_, a), (_, b)| {
                (a.margin + tol.slack(a.lhs, a.rhs)).total_cmp(&(b.margin + tol.slack(b.lhs, b.rhs)))
            })
            .map(|(i, _)| i);
        Summary {
            total: rows.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            numerical_failures: count(Verdict::NumericalFailure),
            worst,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{FastEvaluator, Verdict};
    use super::*;

    #[test]
    fn every_suite_samples_and_passes_small_grids() {
        let c = Checker::<FastEvaluator>::default();
        for s in SUITES {
            let grid = GridSpec::new(2 * s.variants.len(), 11);
            let sample = sample(s, &grid).unwrap_or_else(|e| panic!("{}: {e}", s.id));
            assert_eq!(sample.instances.len(), grid.samples);
            if s.explore {
                let ex = explore_instances(&sample.instances, &c).unwrap();
                assert_eq!(ex.len(), grid.samples);
            } else {
                let rows = run_instances(&sample.instances, &c).unwrap();
                for r in &rows {
                    assert_eq!(r.verdict, Verdict::Pass, "{}: {r:?}", s.id);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = suite("turan-beta").unwrap();
        let g = GridSpec::new(20, 42);
        assert_eq!(sample(s, &g).unwrap().instances, sample(s, &g).unwrap().instances);
        let l = g.clone().with_mode(SampleMode::Lattice);
        assert_eq!(sample(s, &l).unwrap().instances, sample(s, &l).unwrap().instances);
    }

    #[test]
    fn grid_domain_gates() {
        let s = suite("lazarevic").unwrap();
        let bad = GridSpec::new(10, 1).with_range("alpha1", 0.5, 1.0).with_range("beta2", 2.0, 3.0);
        assert!(matches!(sample(s, &bad), Err(Error::Grid(_))));
        let unknown = GridSpec::new(10, 1).with_range("gamma", 0.5, 1.0);
        assert!(matches!(sample(s, &unknown), Err(Error::Grid(_))));
        let outside = GridSpec::new(10, 1).with_range("z", -1.0, 1.0);
        assert!(matches!(sample(s, &outside), Err(Error::Grid(_))));
        assert!(matches!(suite("nope"), Err(Error::Parameter(_))));
    }

    #[test]
    fn zero_upper_weights_give_nondecreasing_kn() {
        let c = Checker::<FastEvaluator>::default();
        let s = suite("problem1-kn").unwrap();
        let g = GridSpec::new(10, 5).with_range("A", 0.0, 0.0);
        let ex = explore_instances(&sample(s, &g).unwrap().instances, &c).unwrap();
        assert!(ex.iter().all(|e| e.verdict == "nondecreasing" || e.verdict == "constant"), "{ex:?}");
    }
}
