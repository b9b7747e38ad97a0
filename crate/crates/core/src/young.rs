//! Young functions, complementary pairs and their numerical conjugates.
//!
//! Values live in the extended half-line `[0, +inf]`; `f64::INFINITY` is the
//! explicit infinity and IEEE arithmetic gives `x + inf = inf` and
//! `min(inf, a) = a` without special casing.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::golden_min;

/// Bracket cap for the conjugate supremum; objectives still growing past this
/// point are reported as `+inf`.
pub const CONJUGATE_CAP: f64 = 1e6;
const CONJUGATE_FLOOR: f64 = 1e-150;

#[derive(Debug, Clone, PartialEq)]
pub enum YoungKind {
    /// `x^p / p`, `p > 1`.
    Power { p: f64 },
    /// `x`.
    Linear,
    /// `0` on `[0, 1]`, `+inf` beyond: the complement of `x`.
    UnitBarrier,
    /// `x ln(1 + x)`.
    XLog,
    /// `cosh x − 1`.
    CoshM1,
    /// `y asinh y − √(1 + y²) + 1`, the exact complement of `cosh x − 1`.
    CoshConjugate,
    /// `eˣ − x − 1`.
    ExpM,
    /// `(1 + x) ln(1 + x) − x`.
    Entropy,
    /// Linear interpolation through `(xs[i], ys[i])`, extended past the last
    /// breakpoint with the last slope.
    PiecewiseLinear { xs: Vec<f64>, ys: Vec<f64> },
    /// Numerical conjugate `sup_x { xy − Φ(x) }` of the inner function.
    Conjugate(Arc<YoungFunction>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct YoungFunction {
    name: String,
    kind: YoungKind,
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

// Small-argument series keep Ψ(x)/x^l sampling accurate down to x = 2^-40.
fn expm_minus_linear(x: f64) -> f64 {
    if x < 1e-2 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..12 {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

fn entropy_fn(x: f64) -> f64 {
    if x < 1e-2 {
        // (1+x)ln(1+x) − x = Σ_{k≥2} (−1)^k x^k / (k(k−1))
        let mut sum = 0.0;
        let mut pow = x;
        for k in 2..14 {
            pow *= x;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (k * (k - 1)) as f64;
        }
        sum
    } else {
        (1.0 + x) * x.ln_1p() - x
    }
}

fn cosh_conjugate(y: f64) -> f64 {
    let root = (1.0 + y * y).sqrt();
    y * y.asinh() - y * y / (root + 1.0)
}

impl YoungFunction {
    fn builtin(name: &str, kind: YoungKind) -> Self {
        YoungFunction { name: name.to_string(), kind }
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("power Young function needs 1 < p < inf, got {p}")));
        }
        Ok(Self::builtin(&format!("x^{p}/{p}"), YoungKind::Power { p }))
    }

    pub fn linear() -> Self {
        Self::builtin("x", YoungKind::Linear)
    }

    pub fn unit_barrier() -> Self {
        Self::builtin("barrier[0,1]", YoungKind::UnitBarrier)
    }

    pub fn xlog() -> Self {
        Self::builtin("x ln(1+x)", YoungKind::XLog)
    }

    pub fn cosh_m1() -> Self {
        Self::builtin("cosh x - 1", YoungKind::CoshM1)
    }

    pub fn cosh_conjugate() -> Self {
        Self::builtin("y asinh y - sqrt(1+y^2) + 1", YoungKind::CoshConjugate)
    }

    pub fn expm() -> Self {
        Self::builtin("e^x - x - 1", YoungKind::ExpM)
    }

    pub fn entropy() -> Self {
        Self::builtin("(1+x)ln(1+x) - x", YoungKind::Entropy)
    }

    /// Piecewise-linear Young function from sorted breakpoints starting at
    /// `(0, 0)`. Slopes must be nondecreasing and the last one positive.
    pub fn piecewise_linear(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::NotYoung("need at least two breakpoints".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::NotYoung("first breakpoint must be (0, 0)".into()));
        }
        let mut last_slope: f64 = 0.0;
        for (i, w) in points.windows(2).enumerate() {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if !(x1 > x0) || !y1.is_finite() {
                return Err(Error::NotYoung(format!("breakpoints not strictly increasing at index {}", i + 1)));
            }
            let slope = (y1 - y0) / (x1 - x0);
            if slope < last_slope - 1e-12 * last_slope.abs().max(1.0) {
                return Err(Error::NotYoung(format!("slope decreases at breakpoint {} (not convex)", i + 1)));
            }
            last_slope = slope;
        }
        if last_slope <= 0.0 {
            return Err(Error::NotYoung("last slope must be positive so that Φ(x) → ∞".into()));
        }
        let f = YoungFunction {
            name: "piecewise-linear".into(),
            kind: YoungKind::PiecewiseLinear {
                xs: points.iter().map(|p| p.0).collect(),
                ys: points.iter().map(|p| p.1).collect(),
            },
        };
        f.validate()?;
        Ok(f)
    }

    /// Parses `{"breakpoints": [[x, y], ...]}`.
    pub fn from_pwl_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Table {
            breakpoints: Vec<(f64, f64)>,
        }
        let table: Table = serde_json::from_str(text)?;
        Self::piecewise_linear(&table.breakpoints)
    }

    /// The numerical conjugate of `phi` as a Young function in its own right.
    pub fn conjugate_of(phi: Arc<YoungFunction>) -> Self {
        YoungFunction { name: format!("conj({})", phi.name), kind: YoungKind::Conjugate(phi) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &YoungKind {
        &self.kind
    }

    /// True when the function never takes the value `+inf`.
    pub fn is_finite_valued(&self) -> bool {
        self.domain_sup().is_infinite()
    }

    /// Supremum of `{x : Φ(x) < inf}`.
    pub fn domain_sup(&self) -> f64 {
        match &self.kind {
            YoungKind::UnitBarrier => 1.0,
            YoungKind::Conjugate(inner) => inner.recession_slope(),
            _ => f64::INFINITY,
        }
    }

    /// `lim Φ(x)/x` as `x → inf`; `+inf` for superlinear functions.
    pub fn recession_slope(&self) -> f64 {
        match &self.kind {
            YoungKind::Linear => 1.0,
            YoungKind::PiecewiseLinear { xs, ys } => {
                let n = xs.len();
                (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2])
            }
            YoungKind::Conjugate(inner) => inner.domain_sup(),
            _ => f64::INFINITY,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0 || x.is_nan(), "Young functions live on [0, inf)");
        match &self.kind {
            YoungKind::Power { p } => x.powf(*p) / p,
            YoungKind::Linear => x,
            YoungKind::UnitBarrier => {
                if x <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            YoungKind::XLog => x * x.ln_1p(),
            YoungKind::CoshM1 => {
                let s = (0.5 * x).sinh();
                2.0 * s * s
            }
            YoungKind::CoshConjugate => cosh_conjugate(x),
            YoungKind::ExpM => expm_minus_linear(x),
            YoungKind::Entropy => entropy_fn(x),
            YoungKind::PiecewiseLinear { xs, ys } => {
                let n = xs.len();
                let i = match xs.iter().position(|&b| b > x) {
                    Some(0) => 1,
                    Some(i) => i,
                    None => n - 1,
                };
                let slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
                ys[i - 1] + slope * (x - xs[i - 1])
            }
            YoungKind::Conjugate(inner) => conjugate_unchecked(inner, x),
        }
    }

    /// Checks `Φ(0) = 0`, monotonicity, midpoint convexity on random samples
    /// and unbounded growth. Returns a diagnostic on the first failure.
    pub fn validate(&self) -> Result<()> {
        let f0 = self.eval(0.0);
        if f0 != 0.0 {
            return Err(Error::NotYoung(format!("{}: value at 0 is {f0}", self.name)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_c0_4e_e7);
        let hi = self.domain_sup().min(1e3);
        let sample = |rng: &mut ChaCha8Rng| -> f64 {
            if rng.gen_bool(0.5) {
                rng.gen_range(0.0..hi)
            } else {
                hi * 10f64.powf(rng.gen_range(-6.0..0.0))
            }
        };
        for _ in 0..400 {
            let a = sample(&mut rng);
            let b = sample(&mut rng);
            let (fa, fb) = (self.eval(a), self.eval(b));
            let fm = self.eval(0.5 * (a + b));
            let scale = 1.0 + fa.abs().max(fb.abs());
            if fm > 0.5 * (fa + fb) + 1e-9 * scale {
                return Err(Error::NotYoung(format!(
                    "{}: midpoint convexity fails between {a} and {b}",
                    self.name
                )));
            }
            let (lo, hi_) = if a <= b { (fa, fb) } else { (fb, fa) };
            if lo > hi_ + 1e-9 * scale {
                return Err(Error::NotYoung(format!("{}: decreasing between {a} and {b}", self.name)));
            }
        }
        if self.domain_sup().is_infinite() && !(self.eval(1e6) > self.eval(1.0)) {
            return Err(Error::NotYoung(format!("{}: does not grow to infinity", self.name)));
        }
        Ok(())
    }
}

fn conjugate_unchecked(phi: &YoungFunction, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let g = |x: f64| x * y - phi.eval(x);
    // bracket [x/2, 2x] around the maximizer of the concave objective
    let mut x = 1.0;
    if g(2.0 * x) > g(x) {
        while g(2.0 * x) > g(x) {
            x *= 2.0;
            if x > CONJUGATE_CAP {
                // sustained growth past the cap
                return f64::INFINITY;
            }
        }
    } else {
        while g(0.5 * x) >= g(x) {
            x *= 0.5;
            if x < CONJUGATE_FLOOR {
                return g(x).max(0.0);
            }
        }
    }
    let (lo, hi) = (0.5 * x, 2.0 * x);
    let m = golden_min(|t| -g(t), lo, hi, 1e-13 * hi, 400);
    (-m.value).max(g(x)).max(0.0)
}

/// `Ψ(y) = sup { xy − Φ(x) : x ≥ 0 }`, computed by golden-section search on the
/// concave objective. Returns `+inf` when the objective keeps growing past
/// [`CONJUGATE_CAP`].
pub fn conjugate(phi: &YoungFunction, y: f64) -> Result<f64> {
    if y.is_nan() {
        return Err(Error::Parameter("conjugate evaluated at NaN".into()));
    }
    if y < 0.0 {
        return Err(Error::Parameter(format!("conjugate needs y >= 0, got {y}")));
    }
    Ok(conjugate_unchecked(phi, y))
}

/// A complementary pair `(Φ, Ψ)`.
#[derive(Debug, Clone)]
pub struct YoungPair {
    spec: String,
    phi: Arc<YoungFunction>,
    psi: Arc<YoungFunction>,
    analytic: bool,
}

impl YoungPair {
    pub fn new(spec: impl Into<String>, phi: YoungFunction, psi: Option<YoungFunction>) -> Self {
        let phi = Arc::new(phi);
        let analytic = psi.is_some();
        let psi = Arc::new(psi.unwrap_or_else(|| YoungFunction::conjugate_of(Arc::clone(&phi))));
        YoungPair { spec: spec.into(), phi, psi, analytic }
    }

    /// Parses `Lp:{p}`, `L1`, `xlog`, `cosh`, `expm`, `entropy`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let pair = match spec {
            "L1" => YoungPair::new(spec, YoungFunction::linear(), Some(YoungFunction::unit_barrier())),
            "xlog" => YoungPair::new(spec, YoungFunction::xlog(), None),
            "cosh" => YoungPair::new(spec, YoungFunction::cosh_m1(), Some(YoungFunction::cosh_conjugate())),
            "expm" => YoungPair::new(spec, YoungFunction::expm(), Some(YoungFunction::entropy())),
            "entropy" => YoungPair::new(spec, YoungFunction::entropy(), Some(YoungFunction::expm())),
            _ => {
                let p = spec
                    .strip_prefix("Lp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::spec(spec, "unknown Young pair"))?;
                if p == 1.0 {
                    return Self::parse("L1");
                }
                let q = p / (p - 1.0);
                YoungPair::new(spec, YoungFunction::power(p)?, Some(YoungFunction::power(q)?))
            }
        };
        Ok(pair)
    }

    /// Pair with a custom piecewise-linear Φ and its numerical conjugate.
    pub fn from_pwl_json(text: &str) -> Result<Self> {
        Ok(YoungPair::new("pwl", YoungFunction::from_pwl_json(text)?, None))
    }

    pub fn builtin_specs() -> &'static [&'static str] {
        &["Lp:1.5", "Lp:2", "Lp:3", "L1", "xlog", "cosh", "expm", "entropy"]
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn phi(&self) -> &YoungFunction {
        &self.phi
    }

    pub fn psi(&self) -> &YoungFunction {
        &self.psi
    }

    pub fn has_analytic_complement(&self) -> bool {
        self.analytic
    }

    /// The pair with roles exchanged, `(Ψ, Φ)`.
    pub fn swapped(&self) -> YoungPair {
        YoungPair {
            spec: format!("swap({})", self.spec),
            phi: Arc::clone(&self.psi),
            psi: Arc::clone(&self.phi),
            analytic: self.analytic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta2 {
    pub k: f64,
    pub x0: f64,
}

/// Ratios `Φ(2x)/Φ(x)` above this are treated as divergence.
pub const DELTA2_DIVERGENCE: f64 = 1e12;

/// Empirical Δ₂ constant: scans `x = 2^j`, `j = -30..=60`, and returns the
/// smallest grid `x0` past which the ratio stays bounded, with `K` the largest
/// ratio there. `None` when the ratio blows up at the top of the grid.
pub fn check_delta2(phi: &YoungFunction) -> Option<Delta2> {
    let grid: Vec<f64> = (-30..=60).map(|j| 2f64.powi(j)).collect();
    let ratios: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let (a, b) = (phi.eval(2.0 * x), phi.eval(x));
            if b > 0.0 {
                a / b
            } else if a == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let bounded = |r: &f64| r.is_finite() && *r <= DELTA2_DIVERGENCE;
    if !ratios.last().is_some_and(bounded) {
        return None;
    }
    let start = ratios.iter().rposition(|r| !bounded(r)).map_or(0, |i| i + 1);
    let k = ratios[start..].iter().cloned().fold(0.0, f64::max);
    let x0 = if start == 0 { 0.0 } else { grid[start] };
    Some(Delta2 { k, x0 })
}

/// Largest `l ∈ {1, 1.25, …, 4}` for which `Ψ(x)/x^l` stays bounded as
/// `x ↓ 0`, judged on `x = 2^-k`, `k = 1..=40`. Never below 1.
pub fn estimate_l(psi: &YoungFunction) -> f64 {
    let xs: Vec<f64> = (1..=40).map(|k| 2f64.powi(-k)).collect();
    let values: Vec<f64> = xs.iter().map(|&x| psi.eval(x)).collect();
    let mut best = 1.0;
    for step in 0..=12 {
        let l = 1.0 + 0.25 * step as f64;
        let ratios: Vec<f64> = xs.iter().zip(&values).map(|(x, v)| v / x.powf(l)).collect();
        if ratios.iter().any(|r| !r.is_finite()) {
            break;
        }
        // bounded: the deep tail does not outgrow the shallow part
        let head = ratios[..20].iter().cloned().fold(0.0, f64::max);
        let tail = ratios[20..].iter().cloned().fold(0.0, f64::max);
        if tail <= 2.0 * head.max(f64::MIN_POSITIVE) {
            best = l;
        } else {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongEquivalence {
    pub a: f64,
    pub b: f64,
}

/// Searches `a = 2^{-j/4}`, `b = 2^{j/4}` (`j = 0..=40`) for the sandwich
/// `Ψ₁(ax) ≤ Ψ₂(x) ≤ Ψ₁(bx)` on `x = 2^{i/4}`, `i = -80..=80`.
pub fn check_strong_equivalence(psi1: &YoungFunction, psi2: &YoungFunction) -> Option<StrongEquivalence> {
    let xs: Vec<f64> = (-80..=80).map(|i| 2f64.powf(i as f64 / 4.0)).collect();
    let tol = |v: f64| 1e-12 * v.abs().max(f64::MIN_POSITIVE);
    let lower_ok = |a: f64| {
        xs.iter().all(|&x| {
            let (l, r) = (psi1.eval(a * x), psi2.eval(x));
            l <= r + tol(r) || (l.is_infinite() && r.is_infinite())
        })
    };
    let upper_ok = |b: f64| {
        xs.iter().all(|&x| {
            let (l, r) = (psi2.eval(x), psi1.eval(b * x));
            l <= r + tol(r) || r.is_infinite()
        })
    };
    let a = (0..=40).map(|j| 2f64.powf(-(j as f64) / 4.0)).find(|&a| lower_ok(a))?;
    let b = (0..=40).map(|j| 2f64.powf(j as f64 / 4.0)).find(|&b| upper_ok(b))?;
    Some(StrongEquivalence { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn conjugate_of_half_square() {
        let phi = YoungFunction::power(2.0).unwrap();
        assert!(rel_close(conjugate(&phi, 1.0).unwrap(), 0.5, 1e-10));
    }

    #[test]
    fn conjugate_of_linear_is_barrier() {
        let phi = YoungFunction::linear();
        assert_eq!(conjugate(&phi, 0.5).unwrap(), 0.0);
        assert_eq!(conjugate(&phi, 1.0).unwrap(), 0.0);
        assert_eq!(conjugate(&phi, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn conjugate_of_expm() {
        let v = conjugate(&YoungFunction::expm(), 1.0).unwrap();
        assert!(rel_close(v, 2.0 * 2f64.ln() - 1.0, 1e-10));
        assert!((v - 0.3863).abs() < 1e-4);
    }

    #[test]
    fn conjugate_rejects_nan_and_negative() {
        let phi = YoungFunction::linear();
        assert!(conjugate(&phi, f64::NAN).is_err());
        assert!(conjugate(&phi, -1.0).is_err());
    }

    #[test]
    fn delta2_examples() {
        let lin = check_delta2(&YoungFunction::linear()).unwrap();
        assert!((lin.k - 2.0).abs() < 1e-12 && lin.x0 == 0.0);
        for p in [1.5, 2.0, 3.0] {
            let d = check_delta2(&YoungFunction::power(p).unwrap()).unwrap();
            assert!(rel_close(d.k, 2f64.powf(p), 1e-12), "p={p}: {d:?}");
        }
        assert!(check_delta2(&YoungFunction::expm()).is_none());
        assert!(check_delta2(&YoungFunction::cosh_m1()).is_none());
        assert!(check_delta2(&YoungFunction::xlog()).is_some());
    }

    #[test]
    fn l_estimates() {
        assert_eq!(estimate_l(&YoungFunction::power(2.0).unwrap()), 2.0);
        assert_eq!(estimate_l(&YoungFunction::power(3.0).unwrap()), 3.0);
        assert_eq!(estimate_l(&YoungFunction::power(1.5).unwrap()), 1.5);
        assert_eq!(estimate_l(&YoungFunction::cosh_m1()), 2.0);
        assert_eq!(estimate_l(&YoungFunction::linear()), 1.0);
        assert_eq!(estimate_l(&YoungFunction::entropy()), 2.0);
    }

    #[test]
    fn strong_equivalence_examples() {
        let x = YoungFunction::linear();
        let same = check_strong_equivalence(&x, &x).unwrap();
        assert_eq!((same.a, same.b), (1.0, 1.0));
        let found = check_strong_equivalence(&YoungFunction::xlog(), &YoungFunction::entropy());
        assert!(found.is_some());
        assert!(check_strong_equivalence(&x, &YoungFunction::power(2.0).unwrap()).is_none());
    }

    #[test]
    fn builtins_are_young() {
        for spec in YoungPair::builtin_specs() {
            let pair = YoungPair::parse(spec).unwrap();
            pair.phi().validate().unwrap();
            pair.psi().validate().unwrap();
        }
    }

    #[test]
    fn pwl_validation() {
        let ok = YoungFunction::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(ok.eval(0.5), 0.5);
        assert_eq!(ok.eval(3.0), 5.0);
        assert_eq!(ok.recession_slope(), 2.0);
        let concave = YoungFunction::piecewise_linear(&[(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]);
        assert!(matches!(concave, Err(Error::NotYoung(_))));
        assert!(YoungFunction::piecewise_linear(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(YoungFunction::piecewise_linear(&[(0.0, 0.0), (1.0, 0.0)]).is_err());
        let parsed = YoungFunction::from_pwl_json(r#"{"breakpoints": [[0,0],[1,0.5],[3,2.5]]}"#).unwrap();
        assert_eq!(parsed.eval(2.0), 1.5);
    }

    #[test]
    fn pair_specs() {
        assert!(YoungPair::parse("Lp:2").unwrap().has_analytic_complement());
        assert!(!YoungPair::parse("xlog").unwrap().has_analytic_complement());
        assert_eq!(YoungPair::parse("Lp:1").unwrap().phi().kind(), &YoungKind::Linear);
        assert!(YoungPair::parse("Lp:0.5").is_err());
        assert!(YoungPair::parse("nope").is_err());
    }
}
