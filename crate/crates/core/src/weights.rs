//! Weights on discrete groups and the hypothesis checkers that the algebra
//! results depend on.
//!
//! Every "for all s, t ∈ G" statement is checked on a finite ball `Uʳ × Uʳ`;
//! reports always carry the radius they were checked on.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{BlockGroup, Elem, Group};
use crate::optimize::golden_min;

type CustomFn = Arc<dyn Fn(&Elem) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    /// `(1 + τ)^β`
    Poly { beta: f64 },
    /// `exp(C τ^α)`
    SubExp { alpha: f64, c: f64 },
    /// `exp(C τ / ln(1 + τ)^γ)`, and `1` at `τ = 0`.
    SubExp2 { gamma: f64, c: f64 },
    Quotient(Box<Weight>, Box<Weight>),
    /// `1` on `G₁`, `1 + n_i` on `G_{i+1} \ G_i`.
    Block { levels: Vec<f64> },
    Const,
    Custom { name: String, f: CustomFn },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Poly { beta } => write!(f, "Poly({beta})"),
            WeightKind::SubExp { alpha, c } => write!(f, "SubExp({alpha}, {c})"),
            WeightKind::SubExp2 { gamma, c } => write!(f, "SubExp2({gamma}, {c})"),
            WeightKind::Quotient(a, b) => write!(f, "Quotient({:?}, {:?})", a.kind, b.kind),
            WeightKind::Block { levels } => write!(f, "Block({levels:?})"),
            WeightKind::Const => f.write_str("Const"),
            WeightKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A positive function on a group with `ω(e) = 1`.
#[derive(Clone, Debug)]
pub struct Weight {
    group: Group,
    kind: WeightKind,
}

impl Weight {
    pub fn constant(group: &Group) -> Self {
        Weight { group: group.clone(), kind: WeightKind::Const }
    }

    pub fn custom(group: &Group, name: &str, f: impl Fn(&Elem) -> f64 + Send + Sync + 'static) -> Self {
        Weight { group: group.clone(), kind: WeightKind::Custom { name: name.to_string(), f: Arc::new(f) } }
    }

    /// Parses `poly:{β}`, `subexp:{α}:{C}`, `subexp2:{γ}:{C}`, `quot:{w1}/{w2}`,
    /// `block:{n1,n2,…}` and `const`.
    pub fn parse(group: &Group, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |why: &str| Error::spec(spec, why);
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("expected a number"));
        if spec == "const" {
            return Ok(Weight::constant(group));
        }
        let (head, rest) = spec.split_once(':').ok_or_else(|| bad("unknown weight"))?;
        match head {
            "poly" => make_poly_weight(group, num(rest)?),
            "subexp" | "subexp2" => {
                let (a, c) = rest.split_once(':').ok_or_else(|| bad("expected two parameters"))?;
                if head == "subexp" {
                    make_subexp_weight(group, num(a)?, num(c)?)
                } else {
                    make_subexp2_weight(group, num(a)?, num(c)?)
                }
            }
            "quot" => {
                let (a, b) = rest.split_once('/').ok_or_else(|| bad("expected `quot:{w1}/{w2}`"))?;
                quotient_weight(&Weight::parse(group, a)?, &Weight::parse(group, b)?)
            }
            "block" => {
                let levels = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
                make_block_weight(group, &levels)
            }
            _ => Err(bad("unknown weight")),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn spec(&self) -> String {
        match &self.kind {
            WeightKind::Poly { beta } => format!("poly:{beta}"),
            WeightKind::SubExp { alpha, c } => format!("subexp:{alpha}:{c}"),
            WeightKind::SubExp2 { gamma, c } => format!("subexp2:{gamma}:{c}"),
            WeightKind::Quotient(a, b) => format!("quot:{}/{}", a.spec(), b.spec()),
            WeightKind::Block { levels } => {
                let l: Vec<String> = levels.iter().map(f64::to_string).collect();
                format!("block:{}", l.join(","))
            }
            WeightKind::Const => "const".into(),
            WeightKind::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// `ln ω` as a function of the word length, for weights that depend on
    /// `τ` alone.
    pub fn radial_log(&self, tau: u32) -> Option<f64> {
        let t = tau as f64;
        match &self.kind {
            WeightKind::Poly { beta } => Some(beta * t.ln_1p()),
            WeightKind::SubExp { alpha, c } => Some(if tau == 0 { 0.0 } else { c * t.powf(*alpha) }),
            WeightKind::SubExp2 { gamma, c } => {
                Some(if tau == 0 { 0.0 } else { c * t / t.ln_1p().powf(*gamma) })
            }
            WeightKind::Quotient(a, b) => Some(a.radial_log(tau)? - b.radial_log(tau)?),
            WeightKind::Const => Some(0.0),
            WeightKind::Block { .. } | WeightKind::Custom { .. } => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        self.radial_log(0).is_some()
    }

    pub fn log_value(&self, g: &Elem) -> Result<f64> {
        match &self.kind {
            WeightKind::Const => Ok(0.0),
            WeightKind::Quotient(a, b) => Ok(a.log_value(g)? - b.log_value(g)?),
            WeightKind::Block { levels } => {
                self.group.validate(g)?;
                let level = BlockGroup::level(g);
                if level <= 1 {
                    Ok(0.0)
                } else {
                    levels.get(level - 2).map(|n| n.ln_1p()).ok_or_else(|| {
                        Error::Parameter(format!(
                            "element {:?} lies in G_{level}, beyond the {} levels given",
                            g.to_vec(),
                            levels.len()
                        ))
                    })
                }
            }
            WeightKind::Custom { f, .. } => {
                self.group.validate(g)?;
                Ok(f(g).ln())
            }
            _ => {
                let tau = self.group.word_length(g)?;
                Ok(self.radial_log(tau).expect("radial kind"))
            }
        }
    }

    pub fn value(&self, g: &Elem) -> Result<f64> {
        Ok(self.log_value(g)?.exp())
    }
}

fn check_group(group: &Group, name: &str, ok: bool, why: &str) -> Result<()> {
    let _ = group;
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name}: {why}")))
    }
}

/// `ω_β(s) = (1 + τ(s))^β`.
pub fn make_poly_weight(group: &Group, beta: f64) -> Result<Weight> {
    check_group(group, "poly weight", beta >= 0.0 && beta.is_finite(), "needs β >= 0")?;
    Ok(Weight { group: group.clone(), kind: WeightKind::Poly { beta } })
}

/// `σ_{α,C}(s) = exp(C τ(s)^α)`.
pub fn make_subexp_weight(group: &Group, alpha: f64, c: f64) -> Result<Weight> {
    check_group(group, "subexp weight", alpha > 0.0 && alpha <= 1.0 && c > 0.0, "needs 0 < α <= 1 and C > 0")?;
    Ok(Weight { group: group.clone(), kind: WeightKind::SubExp { alpha, c } })
}

/// `ρ_{γ,C}(s) = exp(C τ(s) / ln(1 + τ(s))^γ)`, with value 1 at the identity.
pub fn make_subexp2_weight(group: &Group, gamma: f64, c: f64) -> Result<Weight> {
    check_group(group, "subexp2 weight", gamma > 0.0 && c > 0.0, "needs γ > 0 and C > 0")?;
    Ok(Weight { group: group.clone(), kind: WeightKind::SubExp2 { gamma, c } })
}

/// Pointwise `σ / ω`. Submultiplicativity is not implied; check it with
/// [`check_submultiplicative`].
pub fn quotient_weight(sigma: &Weight, omega: &Weight) -> Result<Weight> {
    sigma.group.ensure_same(&omega.group)?;
    Ok(Weight {
        group: sigma.group.clone(),
        kind: WeightKind::Quotient(Box::new(sigma.clone()), Box::new(omega.clone())),
    })
}

/// Weight of the locally finite block example on `Block:{N}`:
/// `ω = 1 + Σ n_i 1_{G_{i+1} \ G_i}`. Also verifies `ω(st) ≤ max(ω(s), ω(t))`
/// on all pairs (groups up to 4096 elements) or on 20 000 random pairs.
pub fn make_block_weight(group: &Group, levels: &[f64]) -> Result<Weight> {
    if !group.spec().starts_with("Block:") {
        return Err(Error::Parameter(format!("block weight needs a Block group, got `{}`", group.spec())));
    }
    if levels.iter().any(|&n| !(n >= 1.0)) || levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("block levels must be increasing and >= 1".into()));
    }
    let w = Weight { group: group.clone(), kind: WeightKind::Block { levels: levels.to_vec() } };
    let reachable: Vec<Elem> = group
        .elements()?
        .into_iter()
        .filter(|g| BlockGroup::level(g) <= levels.len() + 1)
        .collect();
    let violated = |s: &Elem, t: &Elem| -> Result<bool> {
        let st = group.op(s, t);
        Ok(w.value(&st)? > w.value(s)?.max(w.value(t)?))
    };
    if reachable.len() <= 4096 {
        for s in &reachable {
            for t in &reachable {
                if violated(s, t)? {
                    return Err(Error::Parameter(format!("ω(st) > max at {:?}, {:?}", s.to_vec(), t.to_vec())));
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let s = &reachable[rng.gen_range(0..reachable.len())];
            let t = &reachable[rng.gen_range(0..reachable.len())];
            if violated(s, t)? {
                return Err(Error::Parameter(format!("ω(st) > max at {:?}, {:?}", s.to_vec(), t.to_vec())));
            }
        }
    }
    Ok(w)
}

/// Result of a sup over ball pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub radius: u32,
    pub constant: f64,
    pub witness: (Vec<i64>, Vec<i64>),
}

/// Deterministic argmax over `Uʳ × Uʳ` of a log-scale quantity; ties go to
/// the lexicographically smallest pair.
fn pair_log_max<F>(group: &Group, radius: u32, f: F) -> Result<(f64, Elem, Elem)>
where
    F: Fn(&Elem, &Elem) -> Result<f64> + Sync,
{
    let ball = group.ball(radius)?;
    let rows: Vec<(f64, Elem, Elem)> = ball
        .par_iter()
        .map(|s| -> Result<(f64, Elem, Elem)> {
            let mut best: Option<(f64, Elem, Elem)> = None;
            for t in &ball {
                let v = f(s, t)?;
                if better(v, s, t, best.as_ref()) {
                    best = Some((v, s.clone(), t.clone()));
                }
            }
            Ok(best.expect("ball is nonempty"))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, Elem, Elem)> = None;
    for (v, s, t) in rows {
        if better(v, &s, &t, best.as_ref()) {
            best = Some((v, s, t));
        }
    }
    Ok(best.expect("ball is nonempty"))
}

fn better(v: f64, s: &Elem, t: &Elem, best: Option<&(f64, Elem, Elem)>) -> bool {
    match best {
        None => true,
        Some((bv, bs, bt)) => match v.partial_cmp(bv) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => (s, t) < (bs, bt),
            _ => false,
        },
    }
}

fn pair_check(radius: u32, (log_c, s, t): (f64, Elem, Elem)) -> PairCheck {
    PairCheck { radius, constant: log_c.exp(), witness: (s.to_vec(), t.to_vec()) }
}

/// `K = max ω(st) / (ω(s) ω(t))` over the ball of the given radius.
pub fn check_submultiplicative(w: &Weight, radius: u32) -> Result<PairCheck> {
    let g = &w.group;
    let best = pair_log_max(g, radius, |s, t| {
        Ok(w.log_value(&g.op(s, t))? - w.log_value(s)? - w.log_value(t)?)
    })?;
    Ok(pair_check(radius, best))
}

/// Least `C` with `ω(st) ≤ C (ω(s) + ω(t))` on the ball.
pub fn check_weak_subadditive(w: &Weight, radius: u32) -> Result<PairCheck> {
    let g = &w.group;
    let best = pair_log_max(g, radius, |s, t| {
        let (ls, lt) = (w.log_value(s)?, w.log_value(t)?);
        let (hi, lo) = if ls >= lt { (ls, lt) } else { (lt, ls) };
        let log_sum = hi + (lo - hi).exp().ln_1p();
        Ok(w.log_value(&g.op(s, t))? - log_sum)
    })?;
    Ok(pair_check(radius, best))
}

/// Least `M` with `σ(st)/(σ(s)σ(t)) ≤ M ω(st)/(ω(s)ω(t))` on the ball.
pub fn check_lss_domination(sigma: &Weight, omega: &Weight, radius: u32) -> Result<PairCheck> {
    sigma.group.ensure_same(&omega.group)?;
    let g = &sigma.group;
    let best = pair_log_max(g, radius, |s, t| {
        let st = g.op(s, t);
        let lhs = sigma.log_value(&st)? - sigma.log_value(s)? - sigma.log_value(t)?;
        let rhs = omega.log_value(&st)? - omega.log_value(s)? - omega.log_value(t)?;
        Ok(lhs - rhs)
    })?;
    Ok(pair_check(radius, best))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub radius: u32,
    pub symmetric: bool,
    pub witness: Option<Vec<i64>>,
}

/// Exact comparison `ω(s) == ω(s⁻¹)` over the ball.
pub fn check_symmetric(w: &Weight, radius: u32) -> Result<SymmetryCheck> {
    for s in w.group.ball(radius)? {
        if w.value(&s)? != w.value(&w.group.inv(&s))? {
            return Ok(SymmetryCheck { radius, symmetric: false, witness: Some(s.to_vec()) });
        }
    }
    Ok(SymmetryCheck { radius, symmetric: true, witness: None })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrsTrend {
    pub element: Vec<i64>,
    /// `ω(sⁿ)^{1/n}` for `n = 1..=n_max`.
    pub values: Vec<f64>,
    pub final_value: f64,
    pub nonincreasing: bool,
}

/// The sequence `ω(sⁿ)^{1/n}`. This is evidence about the limit, not a verdict.
pub fn check_grs(w: &Weight, s: &Elem, n_max: u32) -> Result<GrsTrend> {
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let g = &w.group;
    g.validate(s)?;
    let mut power = g.identity();
    let mut values = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        power = g.op(&power, s);
        values.push((w.log_value(&power)? / n as f64).exp());
    }
    let nonincreasing = values.windows(2).all(|v| v[1] <= v[0] * (1.0 + 1e-12));
    Ok(GrsTrend { element: s.to_vec(), final_value: *values.last().expect("n_max >= 1"), values, nonincreasing })
}

/// `p(x) = C x / ln(e + x)^β − γ ln(1 + x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PFunction {
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
}

impl PFunction {
    pub fn eval(&self, x: f64) -> f64 {
        self.c * x / (std::f64::consts::E + x).ln().powf(self.beta) - self.gamma * x.ln_1p()
    }

    /// Central difference with step `1e-4 (1 + x)`.
    pub fn slope(&self, x: f64) -> f64 {
        let h = 1e-4 * (1.0 + x);
        let lo = (x - h).max(0.0);
        (self.eval(x + h) - self.eval(lo)) / (x + h - lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PLemmaReport {
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
    pub x0: f64,
    pub m: f64,
    /// `argmax_y p(x0 + y) − p(y) − p(x0)`.
    pub m_witness: f64,
    pub x_max: f64,
    pub grid: (usize, usize),
    pub monotone_violations: usize,
    pub inequality_violations: usize,
    pub worst_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLemmaConfig {
    pub x_max: f64,
    /// Give up if no threshold is found below this.
    pub x0_bound: f64,
    pub scan_points: usize,
    pub verify_points: usize,
}

impl Default for PLemmaConfig {
    fn default() -> Self {
        PLemmaConfig { x_max: 1e6, x0_bound: 1e5, scan_points: 4000, verify_points: 200 }
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn analyze_p_function(beta: f64, gamma: f64, c: f64) -> Result<PLemmaReport> {
    analyze_p_function_with(beta, gamma, c, PLemmaConfig::default())
}

/// Locates `x0` past which `p > 0`, `p' > 0` and `p'` decreases on a dense
/// grid, computes `M = sup_y p(x0 + y) − p(y) − p(x0)` (clamped at 0), then
/// verifies `0 < p(x+y) ≤ p(x) + p(y) + M` on an independent
/// `verify_points²` log grid over `[x0, x_max] × [0, x_max]`.
pub fn analyze_p_function_with(beta: f64, gamma: f64, c: f64, cfg: PLemmaConfig) -> Result<PLemmaReport> {
    if !(beta > 0.0 && gamma > 0.0 && c > 0.0) {
        return Err(Error::Parameter("p-function needs β, γ, C > 0".into()));
    }
    let p = PFunction { beta, gamma, c };
    let scan = log_grid(1e-3, cfg.x_max, cfg.scan_points);
    let slopes: Vec<f64> = scan.iter().map(|&x| p.slope(x)).collect();
    let ok: Vec<bool> = (0..scan.len())
        .map(|i| {
            let decreasing = i + 1 == scan.len() || slopes[i + 1] < slopes[i];
            p.eval(scan[i]) > 0.0 && slopes[i] > 0.0 && decreasing
        })
        .collect();
    let start = ok.iter().rposition(|&b| !b).map_or(0, |i| i + 1);
    if start >= scan.len() || scan[start] > cfg.x0_bound {
        return Err(Error::NoThreshold { bound: cfg.x0_bound });
    }
    let x0 = scan[start];
    let p0 = p.eval(x0);

    let gap = |y: f64| p.eval(x0 + y) - p.eval(y) - p0;
    let mut ys = vec![0.0];
    ys.extend(log_grid(1e-6, 1e9, 20_000));
    let (mut best_i, mut best) = (0, gap(0.0));
    for (i, &y) in ys.iter().enumerate() {
        let v = gap(y);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = ys[best_i.saturating_sub(1)];
    let hi = ys[(best_i + 1).min(ys.len() - 1)];
    let refined = golden_min(|y| -gap(y), lo, hi, 1e-12 * hi.max(1.0), 200);
    let (m_witness, sup) = if -refined.value > best { (refined.x, -refined.value) } else { (ys[best_i], best) };
    let m = sup.max(0.0);

    let xs = log_grid(x0, cfg.x_max, cfg.verify_points);
    let mut yv = vec![0.0];
    yv.extend(log_grid(1e-6, cfg.x_max, cfg.verify_points - 1));
    let mut monotone_violations = 0;
    for (i, &x) in xs.iter().enumerate() {
        let decreasing = i + 1 == xs.len() || p.slope(xs[i + 1]) < p.slope(x);
        if !(p.eval(x) > 0.0 && p.slope(x) > 0.0 && decreasing) {
            monotone_violations += 1;
        }
    }
    let mut inequality_violations = 0;
    let mut worst_margin = f64::INFINITY;
    for &x in &xs {
        let px = p.eval(x);
        for &y in &yv {
            let (pxy, py) = (p.eval(x + y), p.eval(y));
            let slack = 1e-9 * (1.0 + px.abs() + py.abs());
            let margin = px + py + m - pxy;
            worst_margin = worst_margin.min(margin);
            if !(pxy > 0.0) || margin < -slack {
                inequality_violations += 1;
            }
        }
    }
    Ok(PLemmaReport {
        beta,
        gamma,
        c,
        x0,
        m,
        m_witness,
        x_max: cfg.x_max,
        grid: (xs.len(), yv.len()),
        monotone_violations,
        inequality_violations,
        worst_margin,
        pass: monotone_violations == 0 && inequality_violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::elem;

    fn z(d: usize) -> Group {
        Group::parse(&format!("Z^d:{d}")).unwrap()
    }

    #[test]
    fn poly_weight_values() {
        let g = z(2);
        let w = make_poly_weight(&g, 2.0).unwrap();
        assert!((w.value(&elem(&[3, -2])).unwrap() - 16.0).abs() < 1e-12);
        assert_eq!(w.value(&elem(&[0, 0])).unwrap(), 1.0);
        let flat = make_poly_weight(&g, 0.0).unwrap();
        assert_eq!(flat.value(&elem(&[5, 1])).unwrap(), 1.0);
        assert!(make_poly_weight(&g, -1.0).is_err());
    }

    #[test]
    fn subexp_values() {
        let g = z(1);
        let w = make_subexp_weight(&g, 0.5, 1.0).unwrap();
        assert!((w.value(&elem(&[4])).unwrap() - 2f64.exp()).abs() < 1e-12);
        assert_eq!(w.value(&elem(&[0])).unwrap(), 1.0);
        let two = make_subexp_weight(&g, 1.0, 2f64.ln()).unwrap();
        assert!((two.value(&elem(&[7])).unwrap() - 128.0).abs() < 1e-9);
        assert!(make_subexp_weight(&g, 1.5, 1.0).is_err());
        assert!(make_subexp_weight(&g, 0.5, 0.0).is_err());
    }

    #[test]
    fn subexp2_values() {
        let g = z(1);
        let w = make_subexp2_weight(&g, 1.0, 1.0).unwrap();
        assert_eq!(w.value(&elem(&[0])).unwrap(), 1.0);
        let expected = (2.0 / 3f64.ln()).exp();
        assert!((w.value(&elem(&[2])).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 6.175).abs() < 1e-3);
        let steep = make_subexp2_weight(&g, 10.0, 1.0).unwrap();
        let expected = (2.0 / 3f64.ln().powi(10)).exp();
        assert!((steep.value(&elem(&[-2])).unwrap() - expected).abs() < 1e-12);
        assert!(make_subexp2_weight(&g, 0.0, 1.0).is_err());
    }

    #[test]
    fn quotient_of_equal_weights_is_one() {
        let g = z(2);
        let w = make_poly_weight(&g, 3.0).unwrap();
        let q = quotient_weight(&w, &w).unwrap();
        for s in g.ball(3).unwrap() {
            assert_eq!(q.value(&s).unwrap(), 1.0);
        }
        let s = make_subexp_weight(&g, 0.5, 1.0).unwrap();
        assert_eq!(quotient_weight(&s, &w).unwrap().value(&g.identity()).unwrap(), 1.0);
    }

    #[test]
    fn parse_weight_specs() {
        let g = z(1);
        for spec in ["poly:2", "subexp:0.5:1", "subexp2:1:1", "quot:subexp:0.5:1/poly:25", "const"] {
            let w = Weight::parse(&g, spec).unwrap();
            assert_eq!(w.spec(), spec);
        }
        assert!(Weight::parse(&g, "block:1,2").is_err());
        assert!(Weight::parse(&g, "poly:x").is_err());
    }

    #[test]
    fn constant_weight_checks() {
        let g = z(2);
        let w = Weight::constant(&g);
        assert_eq!(check_submultiplicative(&w, 3).unwrap().constant, 1.0);
        assert!((check_weak_subadditive(&w, 3).unwrap().constant - 0.5).abs() < 1e-15);
        assert!(check_grs(&w, &elem(&[1, 1]), 10).unwrap().values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn asymmetric_custom_weight() {
        let g = z(1);
        let w = Weight::custom(&g, "2^s", |s| 2f64.powi(s[0] as i32));
        let r = check_symmetric(&w, 3).unwrap();
        assert!(!r.symmetric);
        assert!(check_symmetric(&make_poly_weight(&g, 2.0).unwrap(), 5).unwrap().symmetric);
    }

    #[test]
    fn exponential_weight_fails_grs() {
        let g = z(1);
        let w = Weight::custom(&g, "2^tau", |s| 2f64.powi(s[0].abs() as i32));
        let t = check_grs(&w, &elem(&[1]), 30).unwrap();
        assert!(t.values.iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn block_weight() {
        let g = Group::parse("Block:6").unwrap();
        let w = make_block_weight(&g, &[3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(w.value(&g.identity()).unwrap(), 1.0);
        assert_eq!(w.value(&elem(&[1, 0, 0, 0, 0, 0])).unwrap(), 1.0);
        assert!((w.value(&elem(&[1, 1, 0, 0, 0, 0])).unwrap() - 4.0).abs() < 1e-12);
        assert!((w.value(&elem(&[0, 0, 0, 0, 0, 1])).unwrap() - 8.0).abs() < 1e-12);
        let short = make_block_weight(&g, &[3.0]).unwrap();
        assert!(short.value(&elem(&[0, 0, 1, 0, 0, 0])).is_err());
        assert!(make_block_weight(&g, &[3.0, 2.0]).is_err());
        assert!(make_block_weight(&z(1), &[3.0]).is_err());
    }

    #[test]
    fn p_function_basics() {
        let p = PFunction { beta: 1.0, gamma: 1.0, c: 1.0 };
        assert_eq!(p.eval(0.0), 0.0);
        let r = analyze_p_function(1.0, 1.0, 1.0).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.m >= 0.0);
        assert!(p.eval(r.x0 + 1.0) > p.eval(r.x0) && p.eval(r.x0) > 0.0);
        assert!(analyze_p_function(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn p_function_threshold_failure_is_reported() {
        let cfg = PLemmaConfig { x0_bound: 1e-2, ..PLemmaConfig::default() };
        assert!(matches!(analyze_p_function_with(2.0, 2.0, 1.0, cfg), Err(Error::NoThreshold { .. })));
    }
}
