use std::ops::{Add, Div, Mul, Sub};

use serde::Serialize;
use serde_json::{json, Value};

use super::approx::{gamma_factor, Approx, Evaluator};
use super::report::{InequalityReport, Tolerance, ZSpec};
use crate::error::{Error, Result};
use crate::gammakit::{digamma, log_gamma};
use crate::series;
use crate::{Config, Params};

/// Which parameter of the first slot a ratio check varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    Alpha,
    Beta,
}

/// How the Turán-in-β₁ check normalizes the three values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaForm {
    /// Ψ[β₁]Ψ[β₁+2] ≥ β₁/(β₁+1)·Ψ[β₁+1]².
    Plain,
    /// Γ(β₁)-scaled values, no factor.
    Tilde,
}

/// Which reduction of the log-concavity check to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogConcaveForm {
    /// Normalized ₚΨ*_{p+1}.
    General,
    /// All weights 1: ₚF_{p+1}.
    Hypergeometric,
    /// p = 1, α₁ = 1: the 4-parameter Mittag-Leffler function, unnormalized.
    MittagLeffler,
}

/// Positivity of z for the checks stated on (0, ∞).
fn need_positive_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("z = {z} must be positive")))
    }
}

fn need_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {x} must be positive")))
    }
}

fn need_nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {x} must be non-negative")))
    }
}

/// Strictly increasing, all positive.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Grid(format!("grid needs at least 2 points, got {}", grid.len())));
    }
    if grid.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Grid("grid points must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// ₁Ψ₂[(α₁,1); (β₁,B₁),(β₂,1)].
pub fn one_psi_two(alpha1: f64, beta1: f64, b1: f64, beta2: f64) -> Result<Params> {
    Params::new(vec![(alpha1, 1.0)], vec![(beta1, b1), (beta2, 1.0)])
}

fn echo_with(params: &Params, extra: Value) -> Value {
    let mut v = params.to_json();
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

/// Runs the inequality checks against one series backend.
#[derive(Debug, Clone, Default)]
pub struct Checker<E> {
    pub eval: E,
    pub tol: Tolerance,
}

impl<E: Evaluator> Checker<E> {
    pub fn new(eval: E, tol: Tolerance) -> Self {
        Checker { eval, tol }
    }

    fn report(&self, suite: &str, echo: Value, z: ZSpec, lhs: Approx, rhs: Approx) -> InequalityReport {
        InequalityReport::new(suite, echo, z, lhs.value, rhs.value, lhs.err + rhs.err, &self.tol)
    }

    /// The report for the item closest to failing: smallest margin + slack.
    fn worst(&self, suite: &str, echo: Value, z: ZSpec, items: &[(Approx, Approx)]) -> InequalityReport {
        let key = |(l, r): &(Approx, Approx)| {
            let m = l.value - r.value;
            if m.is_finite() {
                m + self.tol.slack(l.value, r.value)
            } else {
                f64::NEG_INFINITY
            }
        };
        let (l, r) = items
            .iter()
            .min_by(|a, b| key(a).total_cmp(&key(b)))
            .copied()
            .unwrap_or((Approx::exact(0.0), Approx::exact(0.0)));
        self.report(suite, echo, z, l, r)
    }

    fn hyp(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<Approx> {
        Ok(self.eval.hyp(upper, lower, z)?.approx)
    }

    /// Ψ[α₁]Ψ[α₁+2] ≥ Ψ[α₁+1]².
    pub fn turan_alpha(&self, params: &Params, z: f64) -> Result<InequalityReport> {
        params.validate()?;
        need_positive_z(z)?;
        let a = params
            .upper
            .first()
            .ok_or_else(|| Error::Parameter("Turán in alpha needs p >= 1".into()))?
            .0;
        let f0 = self.eval.eval(&params.with_alpha1(a), z)?;
        let f1 = self.eval.eval(&params.with_alpha1(a + 1.0), z)?;
        let f2 = self.eval.eval(&params.with_alpha1(a + 2.0), z)?;
        Ok(self.report("turan-alpha", params.to_json(), ZSpec::Point(z), f0.mul(f2), f1.mul(f1)))
    }

    /// F[α₁]F[α₁+2] ≥ α₁/(α₁+1)·F[α₁+1]² for ₚF_q.
    pub fn turan_alpha_pfq(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<InequalityReport> {
        need_positive_z(z)?;
        let a = *upper.first().ok_or_else(|| Error::Parameter("Turán in alpha needs p >= 1".into()))?;
        let with = |x: f64| {
            let mut u = upper.to_vec();
            u[0] = x;
            u
        };
        let f0 = self.hyp(&with(a), lower, z)?;
        let f1 = self.hyp(&with(a + 1.0), lower, z)?;
        let f2 = self.hyp(&with(a + 2.0), lower, z)?;
        let echo = json!({ "upper": upper, "lower": lower, "variant": "pfq" });
        Ok(self.report("turan-alpha", echo, ZSpec::Point(z), f0.mul(f2), f1.mul(f1).scale(a / (a + 1.0))))
    }

    /// Turán inequality in the first lower parameter; z = 0 is allowed and tight.
    pub fn turan_beta(&self, params: &Params, z: f64, form: BetaForm) -> Result<InequalityReport> {
        params.validate()?;
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("z = {z} must be non-negative")));
        }
        let b = params
            .lower
            .first()
            .ok_or_else(|| Error::Parameter("Turán in beta needs q >= 1".into()))?
            .0;
        let at = |x: f64| -> Result<Approx> {
            let p = params.with_beta1(x);
            match form {
                BetaForm::Plain => self.eval.eval(&p, z),
                BetaForm::Tilde => self.eval.tilde(&p, z),
            }
        };
        let (f0, f1, f2) = (at(b)?, at(b + 1.0)?, at(b + 2.0)?);
        let rhs = match form {
            BetaForm::Plain => f1.mul(f1).scale(b / (b + 1.0)),
            BetaForm::Tilde => f1.mul(f1),
        };
        let variant = match form {
            BetaForm::Plain => "generic",
            BetaForm::Tilde => "tilde",
        };
        let echo = echo_with(params, json!({ "variant": variant }));
        Ok(self.report("turan-beta", echo, ZSpec::Point(z), f0.mul(f2), rhs))
    }

    /// F[β₁]F[β₁+2] ≥ F[β₁+1]² for ₚF_q.
    pub fn turan_beta_pfq(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<InequalityReport> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("z = {z} must be non-negative")));
        }
        let b = *lower.first().ok_or_else(|| Error::Parameter("Turán in beta needs q >= 1".into()))?;
        let with = |x: f64| {
            let mut l = lower.to_vec();
            l[0] = x;
            l
        };
        let f0 = self.hyp(upper, &with(b), z)?;
        let f1 = self.hyp(upper, &with(b + 1.0), z)?;
        let f2 = self.hyp(upper, &with(b + 2.0), z)?;
        let echo = json!({ "upper": upper, "lower": lower, "variant": "pfq" });
        Ok(self.report("turan-beta", echo, ZSpec::Point(z), f0.mul(f2), f1.mul(f1)))
    }

    /// The ₂F₂ product inequality on z < 0 built from the Kummer-type transform.
    pub fn corollary3_2f2(&self, alpha1: f64, beta1: f64, beta2: f64, z: f64) -> Result<InequalityReport> {
        need_positive("alpha1", alpha1)?;
        need_positive("beta1", beta1)?;
        need_positive("beta2", beta2)?;
        if !(z < 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("z = {z} must be negative")));
        }
        if alpha1 == beta2 {
            return Err(Error::SingularTransform(format!("alpha1 = beta2 = {alpha1}")));
        }
        let d = alpha1 - beta2;
        let f = beta2 * (1.0 + alpha1 - beta1) / d;
        let g = beta2 * (alpha1 - beta1 - 1.0) / d;
        let h = beta2 * (alpha1 - beta1) / d;
        for (name, v) in [("f", f), ("g", g), ("h", h)] {
            if !(v > 0.0) {
                return Err(Error::Parameter(format!("auxiliary parameter {name} = {v} must be positive")));
            }
        }
        let e1 = self.eval.hyp(&[beta1 - alpha1 - 1.0, f + 1.0], &[beta1, f], z)?;
        let e2 = self.eval.hyp(&[beta1 - alpha1 + 1.0, g + 1.0], &[beta1 + 2.0, g], z)?;
        let e3 = self.eval.hyp(&[beta1 - alpha1, h + 1.0], &[beta1 + 1.0, h], z)?;
        let echo = json!({ "alpha1": alpha1, "beta1": beta1, "beta2": beta2, "f": f, "g": g, "h": h });
        let cond = e1.condition.max(e2.condition).max(e3.condition);
        if cond > 1e6 {
            return Ok(InequalityReport::numerical_failure(
                "corollary3-2f2",
                echo,
                ZSpec::Point(z),
                &format!("condition estimate {cond:.3e} exceeds 1e6"),
            ));
        }
        let (f1, f2, f3) = (e1.approx, e2.approx, e3.approx);
        Ok(self.report("corollary3-2f2", echo, ZSpec::Point(z), f1.mul(f2), f3.mul(f3)))
    }

    /// Monotonicity of Ψ[v1]/Ψ[v2] along the grid plus the derivative cross
    /// inequality at each point; v varies α₁ or β₁.
    pub fn ratio_monotonicity(
        &self,
        params: &Params,
        slot: Slot,
        v1: f64,
        v2: f64,
        grid: &[f64],
    ) -> Result<InequalityReport> {
        params.validate()?;
        let (p1, p2, dir) = ratio_setup(params, slot, v1, v2)?;
        check_grid(grid)?;
        let mut ratios = Vec::with_capacity(grid.len());
        let mut items = Vec::with_capacity(2 * grid.len());
        for &z in grid {
            let (f1, f2) = (self.eval.eval(&p1, z)?, self.eval.eval(&p2, z)?);
            let (d1, d2) = (self.eval.derivative(&p1, z)?, self.eval.derivative(&p2, z)?);
            ratios.push(f1.div(f2));
            items.push(oriented(dir, d2.mul(f1), d1.mul(f2)));
        }
        push_steps(&mut items, &ratios, dir);
        let variant = match slot {
            Slot::Alpha => "alpha",
            Slot::Beta => "beta",
        };
        let echo = echo_with(params, json!({ "variant": variant, "v1": v1, "v2": v2 }));
        Ok(self.worst("ratio-monotone", echo, ZSpec::grid(grid), &items))
    }

    /// The ₚF_q ratio check: with β' < β, (β/β')F(β)F(α+1;β'+1) ≥ F(α+1;β+1)F(β');
    /// with α < α', α'F(α'+1;β+1)F(α) ≥ αF(α+1;β+1)F(α').
    pub fn ratio_monotonicity_pfq(
        &self,
        upper: &[f64],
        lower: &[f64],
        slot: Slot,
        v1: f64,
        v2: f64,
        grid: &[f64],
    ) -> Result<InequalityReport> {
        if v1 == v2 {
            return Err(Error::Parameter(format!("v1 = v2 = {v1}")));
        }
        need_positive("v1", v1)?;
        need_positive("v2", v2)?;
        check_grid(grid)?;
        let (hi, lo) = (v1.max(v2), v1.min(v2));
        let set = |v: &[f64], x: f64| {
            let mut w = v.to_vec();
            w[0] = x;
            w
        };
        let plus = |v: &[f64]| v.iter().map(|x| x + 1.0).collect::<Vec<_>>();
        let (u1, l1) = (plus(upper), plus(lower));
        let mut ratios = Vec::with_capacity(grid.len());
        let mut items = Vec::with_capacity(2 * grid.len());
        let dir;
        match slot {
            Slot::Beta => {
                if lower.is_empty() {
                    return Err(Error::Parameter("beta slot needs q >= 1".into()));
                }
                // F(β)/F(β') is nonincreasing when β' < β.
                dir = if v2 < v1 { 1.0 } else { -1.0 };
                for &z in grid {
                    let f_hi = self.hyp(upper, &set(lower, hi), z)?;
                    let f_lo = self.hyp(upper, &set(lower, lo), z)?;
                    let d_hi = self.hyp(&u1, &set(&l1, hi + 1.0), z)?;
                    let d_lo = self.hyp(&u1, &set(&l1, lo + 1.0), z)?;
                    let (fa, fb) = if v1 > v2 { (f_hi, f_lo) } else { (f_lo, f_hi) };
                    ratios.push(fa.div(fb));
                    items.push((f_hi.mul(d_lo).scale(hi / lo), d_hi.mul(f_lo)));
                }
            }
            Slot::Alpha => {
                if upper.is_empty() {
                    return Err(Error::Parameter("alpha slot needs p >= 1".into()));
                }
                // F(α)/F(α') is nonincreasing when α < α'.
                dir = if v1 < v2 { 1.0 } else { -1.0 };
                for &z in grid {
                    let f_hi = self.hyp(&set(upper, hi), lower, z)?;
                    let f_lo = self.hyp(&set(upper, lo), lower, z)?;
                    let d_hi = self.hyp(&set(&u1, hi + 1.0), &l1, z)?;
                    let d_lo = self.hyp(&set(&u1, lo + 1.0), &l1, z)?;
                    let (fa, fb) = if v1 < v2 { (f_lo, f_hi) } else { (f_hi, f_lo) };
                    ratios.push(fa.div(fb));
                    items.push((d_hi.mul(f_lo).scale(hi), d_lo.mul(f_hi).scale(lo)));
                }
            }
        }
        push_steps(&mut items, &ratios, dir);
        let variant = match slot {
            Slot::Alpha => "pfq-alpha",
            Slot::Beta => "pfq-beta",
        };
        let echo = json!({ "upper": upper, "lower": lower, "variant": variant, "v1": v1, "v2": v2 });
        Ok(self.worst("ratio-monotone", echo, ZSpec::grid(grid), &items))
    }

    /// E_{B,β}/E_{B,β'} monotonicity and the identity-based product form
    /// E_β E_{β'−1} − E_{β'} E_{β−1} + (β−β')E_β E_{β'} ≥ 0 for β' < β; needs β, β' > 1.
    pub fn ratio_monotonicity_ml(&self, b1: f64, v1: f64, v2: f64, grid: &[f64]) -> Result<InequalityReport> {
        need_nonneg("B1", b1)?;
        if v1 == v2 {
            return Err(Error::Parameter(format!("v1 = v2 = {v1}")));
        }
        if !(v1 > 1.0 && v2 > 1.0) {
            return Err(Error::Parameter(format!("Mittag-Leffler form needs v1, v2 > 1, got {v1}, {v2}")));
        }
        check_grid(grid)?;
        let (hi, lo) = (v1.max(v2), v1.min(v2));
        let e = |beta: f64, z: f64| -> Result<Approx> {
            self.eval.eval(&Params::new(vec![(1.0, 1.0)], vec![(beta, b1)])?, z)
        };
        let dir = if v2 < v1 { 1.0 } else { -1.0 };
        let mut ratios = Vec::with_capacity(grid.len());
        let mut items = Vec::with_capacity(2 * grid.len());
        for &z in grid {
            let (e_hi, e_lo) = (e(hi, z)?, e(lo, z)?);
            let (e_hi1, e_lo1) = (e(hi - 1.0, z)?, e(lo - 1.0, z)?);
            let (fa, fb) = if v1 > v2 { (e_hi, e_lo) } else { (e_lo, e_hi) };
            ratios.push(fa.div(fb));
            let lhs = e_hi.mul(e_lo1).add(e_hi.mul(e_lo).scale(hi - lo));
            items.push((lhs, e_lo.mul(e_hi1)));
        }
        push_steps(&mut items, &ratios, dir);
        let echo = json!({ "B1": b1, "v1": v1, "v2": v2, "variant": "mittag-leffler" });
        Ok(self.worst("ratio-monotone", echo, ZSpec::grid(grid), &items))
    }

    fn sections(&self, params: &Params, n: usize, z: f64) -> Result<[Approx; 3]> {
        Ok([
            self.eval.section(params, z, n + 1)?.approx,
            self.eval.section(params, z, n + 2)?.approx,
            self.eval.section(params, z, n + 3)?.approx,
        ])
    }

    /// (Ψⁿ⁺¹)² ≥ ΨⁿΨⁿ⁺² for the tail sections Ψⁿ = Σ_{k>n}, all A = 0.
    pub fn tail_turan(&self, params: &Params, n: usize, z: f64) -> Result<InequalityReport> {
        need_zero_upper_weights(params)?;
        need_positive_z(z)?;
        let [t0, t1, t2] = self.sections(params, n, z)?;
        let echo = echo_with(params, json!({ "n": n }));
        Ok(self.report("tail-turan", echo, ZSpec::Point(z), t1.mul(t1), t0.mul(t2)))
    }

    /// K_n = ΨⁿΨⁿ⁺²/(Ψⁿ⁺¹)²; no restriction on A.
    pub fn kn_value(&self, params: &Params, n: usize, z: f64) -> Result<Approx> {
        params.validate()?;
        need_positive_z(z)?;
        let [t0, t1, t2] = self.sections(params, n, z)?;
        Ok(t0.mul(t2).div(t1.mul(t1)))
    }

    /// K_n(z) ≥ C, the z → 0 limit, for A = 0.
    pub fn kn_value_and_bound(&self, params: &Params, n: usize, z: f64) -> Result<InequalityReport> {
        need_zero_upper_weights(params)?;
        let k = self.kn_value(params, n, z)?;
        let c = kn_constant(params, n)?;
        let echo = echo_with(params, json!({ "n": n }));
        Ok(self.report("kn-bound", echo, ZSpec::Point(z), k, c))
    }

    /// K_n nondecreasing along the grid, for A = 0.
    pub fn kn_monotone(&self, params: &Params, n: usize, grid: &[f64]) -> Result<InequalityReport> {
        need_zero_upper_weights(params)?;
        check_grid(grid)?;
        let ks = grid.iter().map(|&z| self.kn_value(params, n, z)).collect::<Result<Vec<_>>>()?;
        let items: Vec<_> = ks.windows(2).map(|w| (w[1], w[0])).collect();
        let echo = echo_with(params, json!({ "n": n, "variant": "monotone" }));
        Ok(self.worst("kn-bound", echo, ZSpec::grid(grid), &items))
    }

    /// χ(β₁) = ₁Ψ̃₂[(α₁+1,1); (β₁+B₁,B₁),(β₂+1,1)] / ₁Ψ̃₂[(α₁,1); (β₁,B₁),(β₂,1)].
    pub fn chi_value(&self, alpha1: f64, beta2: f64, b1: f64, beta1: f64, z: f64) -> Result<Approx> {
        let num = one_psi_two(alpha1 + 1.0, beta1 + b1, b1, beta2 + 1.0)?;
        let den = one_psi_two(alpha1, beta1, b1, beta2)?;
        Ok(self.eval.tilde(&num, z)?.div(self.eval.tilde(&den, z)?))
    }

    /// χ nondecreasing along the β₁ grid and Ω(β₁) ≥ 0 at each grid value.
    pub fn chi(&self, alpha1: f64, beta2: f64, b1: f64, beta1_grid: &[f64], z: f64) -> Result<InequalityReport> {
        need_positive("alpha1", alpha1)?;
        need_positive("beta2", beta2)?;
        need_nonneg("B1", b1)?;
        if alpha1 < beta2 {
            return Err(Error::Domain(format!("needs alpha1 >= beta2, got {alpha1} < {beta2}")));
        }
        need_positive_z(z)?;
        check_grid(beta1_grid)?;
        let mut chis = Vec::with_capacity(beta1_grid.len());
        let mut items = Vec::with_capacity(2 * beta1_grid.len());
        for &b in beta1_grid {
            chis.push(self.chi_value(alpha1, beta2, b1, b, z)?);
            items.push((omega(alpha1, b, beta2, b1, z)?, Approx::exact(0.0)));
        }
        items.extend(chis.windows(2).map(|w| (w[1], w[0])));
        let echo = json!({ "alpha1": alpha1, "beta2": beta2, "B1": b1, "z": z });
        Ok(self.worst("chi", echo, ZSpec::grid(beta1_grid), &items))
    }

    fn tilde_pair(&self, alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> Result<(Approx, Approx)> {
        let p0 = one_psi_two(alpha1, beta1, b1, beta2)?;
        let p1 = one_psi_two(alpha1, beta1 + 1.0, b1, beta2)?;
        Ok((self.eval.tilde(&p0, z)?, self.eval.tilde(&p1, z)?))
    }

    /// [(Γα₁/Γβ₂)^{B₁/β₁}Ψ̃(β₁)]^{Γ(β₁+B₁)/Γ(β₁)} ≤ [Ψ̃(β₁+1)]^{Γ(β₁+B₁+1)/Γ(β₁+1)};
    /// compared in logarithms when either side leaves the f64 range.
    pub fn lazarevic(&self, alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> Result<InequalityReport> {
        one_psi_two_pre(alpha1, beta1, beta2, b1, z)?;
        let (t0, t1) = self.tilde_pair(alpha1, beta1, beta2, b1, z)?;
        let e1 = (log_gamma(beta1 + b1)? - log_gamma(beta1)?).exp();
        let e2 = (log_gamma(beta1 + b1 + 1.0)? - log_gamma(beta1 + 1.0)?).exp();
        let lg = log_gamma(alpha1)? - log_gamma(beta2)?;
        let big = t1.ln().scale(e2);
        let small = t0.ln().add(Approx::new(lg * b1 / beta1, 4.0 * f64::EPSILON * lg.abs())).scale(e1);
        let echo = json!({ "alpha1": alpha1, "beta1": beta1, "beta2": beta2, "B1": b1 });
        Ok(self.powered("lazarevic", echo, z, big, small))
    }

    /// exp of both log sides when representable, else the logs themselves.
    fn powered(&self, suite: &str, mut echo: Value, z: f64, big: Approx, small: Approx) -> InequalityReport {
        if big.value.abs() < 700.0 && small.value.abs() < 700.0 {
            let ex = |a: Approx| {
                let v = a.value.exp();
                Approx::new(v, v * (a.err.exp_m1() + 2.0 * f64::EPSILON))
            };
            self.report(suite, echo, ZSpec::Point(z), ex(big), ex(small))
        } else {
            if let Value::Object(m) = &mut echo {
                m.insert("log_form".into(), Value::Bool(true));
            }
            self.report(suite, echo, ZSpec::Point(z), big, small)
        }
    }

    /// [₁F₂(α₁; β₁, β₂)]^{β₁} ≤ [₁F₂(α₁; β₁+1, β₂)]^{β₁+1}, the B₁ = 1 case.
    pub fn lazarevic_pfq(&self, alpha1: f64, beta1: f64, beta2: f64, z: f64) -> Result<InequalityReport> {
        one_psi_two_pre(alpha1, beta1, beta2, 1.0, z)?;
        let f0 = self.hyp(&[alpha1], &[beta1, beta2], z)?;
        let f1 = self.hyp(&[alpha1], &[beta1 + 1.0, beta2], z)?;
        let echo = json!({ "alpha1": alpha1, "beta1": beta1, "beta2": beta2, "B1": 1.0, "variant": "b1-one" });
        Ok(self.powered("lazarevic", echo, z, f1.ln().scale(beta1 + 1.0), f0.ln().scale(beta1)))
    }

    /// 𝓘_ν(z) = Γ(ν+1)(2/z)^ν I_ν(z), as the normalized Wright function at z²/4.
    pub fn bessel_norm(&self, nu: f64, z: f64) -> Result<Approx> {
        if !(nu > -1.0) {
            return Err(Error::Parameter(format!("nu = {nu} must exceed -1")));
        }
        self.eval.tilde(&one_psi_two(1.0, nu + 1.0, 1.0, 1.0)?, z * z / 4.0)
    }

    /// 𝓘_ν ≤ 𝓘_{ν+1}^{(ν+2)/(ν+1)}; at ν = −1/2 this is cosh z ≤ (sinh z/z)³.
    pub fn lazarevic_bessel(&self, nu: f64, z: f64) -> Result<InequalityReport> {
        need_positive_z(z)?;
        let (i0, i1) = (self.bessel_norm(nu, z)?, self.bessel_norm(nu + 1.0, z)?);
        let echo = json!({ "nu": nu, "variant": "bessel" });
        Ok(self.report("lazarevic", echo, ZSpec::Point(z), i1.powf((nu + 2.0) / (nu + 1.0)), i0))
    }

    /// Ψ̃(β₁+1)/Ψ̃(β₁) + [Γβ₂/Γα₁·Ψ̃(β₁+1)]^{B₁/β₁} ≥ 2.
    pub fn wilker(&self, alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> Result<InequalityReport> {
        one_psi_two_pre(alpha1, beta1, beta2, b1, z)?;
        let (t0, t1) = self.tilde_pair(alpha1, beta1, beta2, b1, z)?;
        let lg = log_gamma(beta2)? - log_gamma(alpha1)?;
        let power = t1.mul(gamma_factor(lg)).powf(b1 / beta1);
        let echo = json!({ "alpha1": alpha1, "beta1": beta1, "beta2": beta2, "B1": b1 });
        Ok(self.report("wilker", echo, ZSpec::Point(z), t1.div(t0).add(power), Approx::exact(2.0)))
    }

    /// F(β₁+1)/F(β₁) + F(β₁+1)^{1/β₁} ≥ 2 for F = ₁F₂(α₁; ·, β₂), the B₁ = 1 case.
    pub fn wilker_pfq(&self, alpha1: f64, beta1: f64, beta2: f64, z: f64) -> Result<InequalityReport> {
        one_psi_two_pre(alpha1, beta1, beta2, 1.0, z)?;
        let f0 = self.hyp(&[alpha1], &[beta1, beta2], z)?;
        let f1 = self.hyp(&[alpha1], &[beta1 + 1.0, beta2], z)?;
        let echo = json!({ "alpha1": alpha1, "beta1": beta1, "beta2": beta2, "B1": 1.0, "variant": "b1-one" });
        let lhs = f1.div(f0).add(f1.powf(1.0 / beta1));
        Ok(self.report("wilker", echo, ZSpec::Point(z), lhs, Approx::exact(2.0)))
    }

    /// 𝓘_{ν+1}/𝓘_ν + 𝓘_{ν+1}^{1/(ν+1)} ≥ 2; at ν = −1/2, (sinh z/z)² + tanh z/z ≥ 2.
    pub fn wilker_bessel(&self, nu: f64, z: f64) -> Result<InequalityReport> {
        need_positive_z(z)?;
        let (i0, i1) = (self.bessel_norm(nu, z)?, self.bessel_norm(nu + 1.0, z)?);
        let lhs = i1.div(i0).add(i1.powf(1.0 / (nu + 1.0)));
        let echo = json!({ "nu": nu, "variant": "bessel" });
        Ok(self.report("wilker", echo, ZSpec::Point(z), lhs, Approx::exact(2.0)))
    }

    /// Log-concavity of ₚΨ*_{p+1}[(α_i,1); (β₁,B₁),(β_{i+1},1)]: the midpoint
    /// inequality at (z₁, z₂), f(z₁) ≤ e^{cz₁} and f′(z₂) ≤ c f(z₂).
    #[allow(clippy::too_many_arguments)]
    pub fn logconcavity(
        &self,
        alphas: &[f64],
        beta1: f64,
        b1: f64,
        betas: &[f64],
        z1: f64,
        z2: f64,
        form: LogConcaveForm,
    ) -> Result<Vec<InequalityReport>> {
        if alphas.is_empty() || alphas.len() != betas.len() {
            return Err(Error::Parameter(format!(
                "needs p >= 1 upper and p paired lower parameters, got {} and {}",
                alphas.len(),
                betas.len()
            )));
        }
        need_positive_z(z1)?;
        need_positive_z(z2)?;
        for (i, (&a, &b)) in alphas.iter().zip(betas).enumerate() {
            if a < b {
                return Err(Error::Domain(format!("needs alpha_{0} >= beta_{1}, got {a} < {b}", i + 1, i + 2)));
            }
        }
        let b1 = match form {
            LogConcaveForm::Hypergeometric => 1.0,
            _ => b1,
        };
        if form == LogConcaveForm::MittagLeffler && (alphas.len() != 1 || alphas[0] != 1.0) {
            return Err(Error::Parameter("Mittag-Leffler form needs p = 1, alpha1 = 1".into()));
        }
        let mut lower = vec![(beta1, b1)];
        lower.extend(betas.iter().map(|&b| (b, 1.0)));
        let params = Params::new(alphas.iter().map(|&a| (a, 1.0)).collect(), lower)?;
        let ratio: f64 = alphas.iter().zip(betas).map(|(a, b)| a / b).product();
        let c = ratio * (log_gamma(beta1)? - log_gamma(beta1 + b1)?).exp();
        // ln of the factor mapping the computed function to Ψ*.
        let (variant, log_norm) = match form {
            LogConcaveForm::General => (
                "generic",
                log_gamma(beta1)? + betas.iter().map(|&b| log_gamma(b)).sum::<Result<f64>>()?
                    - alphas.iter().map(|&a| log_gamma(a)).sum::<Result<f64>>()?,
            ),
            LogConcaveForm::Hypergeometric => ("pfq", 0.0),
            LogConcaveForm::MittagLeffler => ("mittag-leffler", 0.0),
        };
        let f = |z: f64| -> Result<Approx> {
            match form {
                LogConcaveForm::Hypergeometric => {
                    let mut lw = vec![beta1];
                    lw.extend_from_slice(betas);
                    self.hyp(alphas, &lw, z)
                }
                _ => Ok(self.eval.eval(&params, z)?.mul(gamma_factor(log_norm))),
            }
        };
        let echo = echo_with(&params, json!({ "variant": variant, "c": c }));
        let mid = 0.5 * (z1 + z2);
        let (f1, f2, fm) = (f(z1)?, f(z2)?, f(mid)?);
        let mut out = vec![self.report("logconcave", echo.clone(), ZSpec::Pair(z1, z2), fm, f1.mul(f2).sqrt())];

        // f ≤ e^{cz}; the Mittag-Leffler form carries 1/(Γβ₁Γβ₂).
        let shift = match form {
            LogConcaveForm::MittagLeffler => -(log_gamma(beta1)? + log_gamma(betas[0])?),
            _ => 0.0,
        };
        let exponent = Approx::new(c * z1 + shift, 4.0 * f64::EPSILON * (c * z1).abs() + 4.0 * f64::EPSILON * shift.abs());
        let bound_row = if exponent.value.abs() < 700.0 {
            let v = exponent.value.exp();
            let e = Approx::new(v, v * (exponent.err.exp_m1() + 2.0 * f64::EPSILON));
            self.report("logconcave", echo.clone(), ZSpec::Point(z1), e, f1)
        } else {
            self.report("logconcave", echo.clone(), ZSpec::Point(z1), exponent, f1.ln())
        };
        out.push(bound_row);

        // f′ ≤ c f; in the ₚF_{p+1} form F(α+1; β+1) ≤ F.
        let deriv_row = match form {
            LogConcaveForm::Hypergeometric => {
                let up: Vec<f64> = alphas.iter().map(|a| a + 1.0).collect();
                let mut lw = vec![beta1 + 1.0];
                lw.extend(betas.iter().map(|b| b + 1.0));
                let d = self.hyp(&up, &lw, z2)?;
                self.report("logconcave", echo, ZSpec::Point(z2), f2, d)
            }
            _ => {
                let d = self.eval.derivative(&params, z2)?.mul(gamma_factor(log_norm));
                self.report("logconcave", echo, ZSpec::Point(z2), f2.scale(c), d)
            }
        };
        out.push(deriv_row);
        Ok(out)
    }

    /// Ξ′(z) = (β₁+B₁)/β₁·Ψ′(β₁+1)/Ψ(β₁+1) − Ψ′(β₁)/Ψ(β₁), Ψ(x) the series with β₁ = x.
    pub fn xi_prime(&self, params: &Params, z: f64) -> Result<Approx> {
        params.validate()?;
        need_positive_z(z)?;
        let &(b, w) = params
            .lower
            .first()
            .ok_or_else(|| Error::Parameter("needs q >= 1".into()))?;
        let p0 = params.clone();
        let p1 = params.with_beta1(b + 1.0);
        let r1 = self.eval.derivative(&p1, z)?.div(self.eval.eval(&p1, z)?);
        let r0 = self.eval.derivative(&p0, z)?.div(self.eval.eval(&p0, z)?);
        Ok(r1.scale((b + w) / b).sub(r0))
    }
}

fn one_psi_two_pre(alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> Result<()> {
    need_positive("alpha1", alpha1)?;
    need_positive("beta1", beta1)?;
    need_positive("beta2", beta2)?;
    need_nonneg("B1", b1)?;
    if alpha1 < beta2 {
        return Err(Error::Domain(format!("needs alpha1 >= beta2, got {alpha1} < {beta2}")));
    }
    need_positive_z(z)
}

fn need_zero_upper_weights(params: &Params) -> Result<()> {
    params.validate()?;
    if let Some(i) = params.upper.iter().position(|&(_, a)| a != 0.0) {
        return Err(Error::Parameter(format!("A_{} = {} must be 0", i + 1, params.upper[i].1)));
    }
    Ok(())
}

/// (numerator params, denominator params, +1 if the ratio should be nonincreasing else −1).
fn ratio_setup(params: &Params, slot: Slot, v1: f64, v2: f64) -> Result<(Params, Params, f64)> {
    if v1 == v2 {
        return Err(Error::Parameter(format!("v1 = v2 = {v1}")));
    }
    need_positive("v1", v1)?;
    need_positive("v2", v2)?;
    match slot {
        Slot::Beta => {
            if params.lower.is_empty() {
                return Err(Error::Parameter("beta slot needs q >= 1".into()));
            }
            let dir = if v2 < v1 { 1.0 } else { -1.0 };
            Ok((params.with_beta1(v1), params.with_beta1(v2), dir))
        }
        Slot::Alpha => {
            if params.upper.is_empty() {
                return Err(Error::Parameter("alpha slot needs p >= 1".into()));
            }
            let dir = if v1 < v2 { 1.0 } else { -1.0 };
            Ok((params.with_alpha1(v1), params.with_alpha1(v2), dir))
        }
    }
}

/// (lhs, rhs) with lhs − rhs = dir·(a − b).
fn oriented(dir: f64, a: Approx, b: Approx) -> (Approx, Approx) {
    if dir > 0.0 {
        (a, b)
    } else {
        (b, a)
    }
}

fn push_steps(items: &mut Vec<(Approx, Approx)>, values: &[Approx], dir: f64) {
    items.extend(values.windows(2).map(|w| oriented(dir, w[0], w[1])));
}

/// The z → 0 limit of K_n: ((n+2)/(n+3))∏Γ²(β+(n+2)B)/[Γ(β+(n+1)B)Γ(β+(n+3)B)].
pub fn kn_constant(params: &Params, n: usize) -> Result<Approx> {
    params.validate()?;
    let nf = n as f64;
    let mut lc = ((nf + 2.0) / (nf + 3.0)).ln();
    let mut mag = lc.abs();
    for &(b, w) in &params.lower {
        let t = 2.0 * log_gamma(b + (nf + 2.0) * w)?
            - log_gamma(b + (nf + 1.0) * w)?
            - log_gamma(b + (nf + 3.0) * w)?;
        lc += t;
        mag += t.abs() + 4.0 * log_gamma(b + (nf + 3.0) * w)?.abs();
    }
    let v = lc.exp();
    Ok(Approx::new(v, v * 4.0 * f64::EPSILON * (1.0 + mag)))
}

/// Ω(β₁) = Σ_k Σ_{j ≤ (k−1)/2} Ω_{j,k}(k−2j)(α₁−β₂)[ψ(β₁+B₁+(k−j)B₁) − ψ(β₁+B₁+jB₁)]
/// / ((β₂+k−j)(β₂+j)) z^k, with
/// Ω_{j,k} = Γ(α₁+j)Γ(α₁+k−j)/(j!(k−j)!Γ(β₁+B₁+jB₁)Γ(β₁+B₁+(k−j)B₁)Γ(β₂+j)Γ(β₂+k−j)).
/// Truncated 10 terms past the stop index of ₁Ψ₂[(α₁,1); (β₁+B₁,B₁),(β₂,1)].
pub fn omega(alpha1: f64, beta1: f64, beta2: f64, b1: f64, z: f64) -> Result<Approx> {
    need_positive_z(z)?;
    let base = one_psi_two(alpha1, beta1 + b1, b1, beta2)?;
    let kmax = series::eval(&base, z, &Config::default())?.terms_used + 10;
    let lz = z.ln();
    let c = beta1 + b1;
    let lg = |x: f64| log_gamma(x);
    let mut sum = series::NeumaierSum::new();
    let mut abs_sum = 0.0;
    for k in 1..=kmax {
        let kf = k as f64;
        for j in 0..=(k - 1) / 2 {
            let (jf, mf) = (j as f64, (k - j) as f64);
            let log_w = lg(alpha1 + jf)? + lg(alpha1 + mf)? - lg(jf + 1.0)? - lg(mf + 1.0)? - lg(c + jf * b1)?
                - lg(c + mf * b1)?
                - lg(beta2 + jf)?
                - lg(beta2 + mf)?
                + kf * lz;
            let psi = digamma(c + mf * b1)? - digamma(c + jf * b1)?;
            let factor = (kf - 2.0 * jf) * (alpha1 - beta2) * psi / ((beta2 + mf) * (beta2 + jf));
            let t = log_w.exp() * factor;
            sum.add(t);
            abs_sum += t.abs() * (1.0 + log_w.abs());
        }
    }
    let v = sum.value();
    Ok(Approx::new(v, 16.0 * f64::EPSILON * abs_sum))
}
