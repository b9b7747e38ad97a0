//! Normalized 2-cocycles `Ω: G × G → ℂ \ {0}`, their verification, polar
//! decomposition, domination pairs and the finite central extension.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Elem, Group, GroupLaw};
use crate::orlicz::{le_with_slack, luxemburg_of_values, SupportedFunction};
use crate::weights::Weight;
use crate::young::YoungPair;

type CustomFn = Arc<dyn Fn(&Elem, &Elem) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum CocycleKind {
    One,
    /// `ω(st) / (ω(s) ω(t))`
    Coboundary(Weight),
    /// `exp(iθ · s₁ · t₀)`, or `exp(iθ · s₀ · t₀)` on one-coordinate groups.
    Bicharacter { theta: f64 },
    Product(Box<Cocycle>, Box<Cocycle>),
    Modulus(Box<Cocycle>),
    Phase(Box<Cocycle>),
    /// `base` with one value replaced; used for fault injection.
    Override { base: Box<Cocycle>, s: Elem, t: Elem, value: Complex64 },
    Custom { name: String, f: CustomFn },
}

/// A 2-cocycle on a group. Values of non-trivial kinds are memoized in a
/// concurrent table shared between clones.
#[derive(Clone)]
pub struct Cocycle {
    group: Group,
    kind: CocycleKind,
    memo: Arc<DashMap<(Elem, Elem), Complex64>>,
}

impl fmt::Debug for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cocycle").field("group", &self.group.spec()).field("spec", &self.spec()).finish()
    }
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl Cocycle {
    fn from_kind(group: &Group, kind: CocycleKind) -> Self {
        Cocycle { group: group.clone(), kind, memo: Arc::new(DashMap::new()) }
    }

    pub fn one(group: &Group) -> Self {
        Self::from_kind(group, CocycleKind::One)
    }

    pub fn custom(group: &Group, name: &str, f: impl Fn(&Elem, &Elem) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::from_kind(group, CocycleKind::Custom { name: name.to_string(), f: Arc::new(f) })
    }

    /// Pointwise product `Ω₁Ω₂`.
    pub fn product(a: &Cocycle, b: &Cocycle) -> Result<Self> {
        a.group.ensure_same(&b.group)?;
        Ok(Self::from_kind(&a.group, CocycleKind::Product(Box::new(a.clone()), Box::new(b.clone()))))
    }

    /// Copy of `self` with the value at `(s, t)` replaced. Breaks the
    /// cocycle identity; meant for testing the verifiers.
    pub fn with_override(&self, s: Elem, t: Elem, value: Complex64) -> Result<Self> {
        self.group.validate(&s)?;
        self.group.validate(&t)?;
        Ok(Self::from_kind(&self.group, CocycleKind::Override { base: Box::new(self.clone()), s, t, value }))
    }

    /// Parses `cobound:{weight}`, `bichar:{θ}`, `prod:{c1}*{c2}` and `one`.
    pub fn parse(group: &Group, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "one" {
            return Ok(Self::one(group));
        }
        let (head, rest) = spec.split_once(':').ok_or_else(|| Error::spec(spec, "unknown cocycle"))?;
        match head {
            "cobound" => Ok(coboundary_from_weight(&Weight::parse(group, rest)?)),
            "bichar" => {
                let theta = rest.trim().parse().map_err(|_| Error::spec(spec, "θ must be a number"))?;
                bicharacter_cocycle(group, theta)
            }
            "prod" => {
                let (a, b) = rest.split_once('*').ok_or_else(|| Error::spec(spec, "expected `prod:{c1}*{c2}`"))?;
                Self::product(&Self::parse(group, a)?, &Self::parse(group, b)?)
            }
            _ => Err(Error::spec(spec, "unknown cocycle")),
        }
    }

    pub fn spec(&self) -> String {
        match &self.kind {
            CocycleKind::One => "one".into(),
            CocycleKind::Coboundary(w) => format!("cobound:{}", w.spec()),
            CocycleKind::Bicharacter { theta } => format!("bichar:{theta}"),
            CocycleKind::Product(a, b) => format!("prod:{}*{}", a.spec(), b.spec()),
            CocycleKind::Modulus(a) => format!("abs({})", a.spec()),
            CocycleKind::Phase(a) => format!("phase({})", a.spec()),
            CocycleKind::Override { base, s, t, .. } => format!("override({};{:?};{:?})", base.spec(), s.to_vec(), t.to_vec()),
            CocycleKind::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> &CocycleKind {
        &self.kind
    }

    fn memoized(&self) -> bool {
        matches!(self.kind, CocycleKind::Coboundary(_) | CocycleKind::Custom { .. })
    }

    pub fn eval(&self, s: &Elem, t: &Elem) -> Result<Complex64> {
        if self.memoized() {
            let key = (s.clone(), t.clone());
            if let Some(v) = self.memo.get(&key) {
                return Ok(*v);
            }
            let v = self.compute(s, t)?;
            self.memo.insert(key, v);
            Ok(v)
        } else {
            self.compute(s, t)
        }
    }

    fn compute(&self, s: &Elem, t: &Elem) -> Result<Complex64> {
        match &self.kind {
            CocycleKind::One => Ok(ONE),
            CocycleKind::Coboundary(w) => {
                let st = self.group.op(s, t);
                let l = w.log_value(&st)? - w.log_value(s)? - w.log_value(t)?;
                Ok(Complex64::new(l.exp(), 0.0))
            }
            CocycleKind::Bicharacter { theta } => {
                let (a, b) = if s.len() >= 2 { (s[1], t[0]) } else { (s[0], t[0]) };
                Ok(Complex64::from_polar(1.0, theta * (a as f64) * (b as f64)))
            }
            CocycleKind::Product(a, b) => Ok(a.eval(s, t)? * b.eval(s, t)?),
            CocycleKind::Modulus(a) => {
                let v = nonzero(a.eval(s, t)?, s, t)?;
                Ok(Complex64::new(v.norm(), 0.0))
            }
            CocycleKind::Phase(a) => {
                let v = nonzero(a.eval(s, t)?, s, t)?;
                Ok(v / v.norm())
            }
            CocycleKind::Override { base, s: s0, t: t0, value } => {
                if s == s0 && t == t0 {
                    Ok(*value)
                } else {
                    base.eval(s, t)
                }
            }
            CocycleKind::Custom { f, .. } => Ok(f(s, t)),
        }
    }

    /// Known to take positive real values.
    fn is_positive_kind(&self) -> bool {
        match &self.kind {
            CocycleKind::One | CocycleKind::Coboundary(_) | CocycleKind::Modulus(_) => true,
            CocycleKind::Product(a, b) => a.is_positive_kind() && b.is_positive_kind(),
            _ => false,
        }
    }

    /// Known to take unimodular values.
    pub fn is_unimodular_kind(&self) -> bool {
        match &self.kind {
            CocycleKind::One | CocycleKind::Bicharacter { .. } | CocycleKind::Phase(_) => true,
            CocycleKind::Product(a, b) => a.is_unimodular_kind() && b.is_unimodular_kind(),
            _ => false,
        }
    }
}

fn nonzero(v: Complex64, s: &Elem, t: &Elem) -> Result<Complex64> {
    if v.norm() == 0.0 || !v.is_finite() {
        Err(Error::ZeroCocycle { s: s.to_vec(), t: t.to_vec() })
    } else {
        Ok(v)
    }
}

/// `(s, t) ↦ ω(st) / (ω(s) ω(t))`.
pub fn coboundary_from_weight(w: &Weight) -> Cocycle {
    Cocycle::from_kind(w.group(), CocycleKind::Coboundary(w.clone()))
}

/// `Ω((a, b), (c, d)) = exp(iθ b c)` on two-coordinate abelian groups and
/// `exp(iθ j k)` on one-coordinate groups. On `ℤ_n` take `θ = 2πk/n`.
pub fn bicharacter_cocycle(group: &Group, theta: f64) -> Result<Cocycle> {
    let spec = group.spec();
    if !(spec.starts_with("Z^d:") || spec.starts_with("Zn:")) {
        return Err(Error::Parameter(format!("bicharacter needs an abelian lattice or cyclic group, got `{spec}`")));
    }
    if !theta.is_finite() {
        return Err(Error::Parameter("θ must be finite".into()));
    }
    Ok(Cocycle::from_kind(group, CocycleKind::Bicharacter { theta }))
}

/// `Ω = |Ω| Ω_𝕋`. Structured cocycles (positive times unimodular) are split
/// exactly; others pointwise, with zero values rejected at evaluation.
pub fn polar(omega: &Cocycle) -> Result<(Cocycle, Cocycle)> {
    let g = &omega.group;
    if let CocycleKind::Override { value, s, t, .. } = &omega.kind {
        nonzero(*value, s, t)?;
    }
    if omega.is_positive_kind() {
        return Ok((omega.clone(), Cocycle::one(g)));
    }
    if omega.is_unimodular_kind() {
        return Ok((Cocycle::one(g), omega.clone()));
    }
    if let CocycleKind::Product(a, b) = &omega.kind {
        if a.is_positive_kind() && b.is_unimodular_kind() {
            return Ok(((**a).clone(), (**b).clone()));
        }
        if b.is_positive_kind() && a.is_unimodular_kind() {
            return Ok(((**b).clone(), (**a).clone()));
        }
    }
    Ok((
        Cocycle::from_kind(g, CocycleKind::Modulus(Box::new(omega.clone()))),
        Cocycle::from_kind(g, CocycleKind::Phase(Box::new(omega.clone()))),
    ))
}

/// The unimodular part of `Ω`.
pub fn phase_of(omega: &Cocycle) -> Result<Cocycle> {
    Ok(polar(omega)?.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    pub radius: u32,
    pub exhaustive: bool,
    pub triples: u64,
    /// `max |Ω(r,s)Ω(rs,t) − Ω(s,t)Ω(r,st)| / max(1, |Ω(r,s)Ω(rs,t)|)`
    pub identity_residual: f64,
    pub identity_witness: Option<(Vec<i64>, Vec<i64>, Vec<i64>)>,
    /// `max |Ω(r,e) − 1|, |Ω(e,r) − 1|`
    pub normalization_residual: f64,
    pub normalization_witness: Option<Vec<i64>>,
    pub sup_abs: f64,
    pub sup_witness: (Vec<i64>, Vec<i64>),
}

impl CocycleReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.identity_residual <= tol && self.normalization_residual <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Triples above this count are sampled instead of enumerated.
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { exhaustive_limit: 10_000_000, samples: 1_000_000, seed: 0 }
    }
}

pub fn verify_cocycle(omega: &Cocycle, radius: u32) -> Result<CocycleReport> {
    verify_cocycle_with(omega, radius, VerifyConfig::default())
}

type Triple = (f64, Option<(Elem, Elem, Elem)>);

fn max_triple(a: Triple, b: Triple) -> Triple {
    match (a.0.partial_cmp(&b.0), &a.1, &b.1) {
        (Some(std::cmp::Ordering::Greater), _, _) => a,
        (Some(std::cmp::Ordering::Less), _, _) => b,
        (_, Some(x), Some(y)) if y < x => b,
        (_, None, Some(_)) => b,
        _ => a,
    }
}

/// Cocycle identity, normalization and `sup |Ω|` over the ball of the given
/// radius: every triple when there are at most `exhaustive_limit`, otherwise
/// a seeded random sample.
pub fn verify_cocycle_with(omega: &Cocycle, radius: u32, cfg: VerifyConfig) -> Result<CocycleReport> {
    let g = &omega.group;
    let ball = g.ball(radius)?;
    let n = ball.len() as u64;
    let id = g.identity();
    let residual = |r: &Elem, s: &Elem, t: &Elem| -> Result<f64> {
        let lhs = omega.eval(r, s)? * omega.eval(&g.op(r, s), t)?;
        let rhs = omega.eval(s, t)? * omega.eval(r, &g.op(s, t))?;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        let d = (lhs - rhs).norm() / scale;
        Ok(if d.is_nan() { f64::INFINITY } else { d })
    };
    let exhaustive = n.saturating_mul(n).saturating_mul(n) <= cfg.exhaustive_limit;
    let (identity_residual, witness, triples) = if exhaustive {
        let rows: Vec<Triple> = ball
            .par_iter()
            .map(|r| -> Result<Triple> {
                let mut best: Triple = (0.0, None);
                for s in &ball {
                    for t in &ball {
                        let d = residual(r, s, t)?;
                        if d > 0.0 {
                            best = max_triple(best, (d, Some((r.clone(), s.clone(), t.clone()))));
                        }
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;
        let best = rows.into_iter().fold((0.0, None), max_triple);
        (best.0, best.1, n * n * n)
    } else {
        let chunks = 64u64;
        let per = cfg.samples.div_ceil(chunks);
        let rows: Vec<Triple> = (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<Triple> {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (c.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
                let mut best: Triple = (0.0, None);
                for _ in 0..per {
                    let r = &ball[rng.gen_range(0..ball.len())];
                    let s = &ball[rng.gen_range(0..ball.len())];
                    let t = &ball[rng.gen_range(0..ball.len())];
                    let d = residual(r, s, t)?;
                    if d > 0.0 {
                        best = max_triple(best, (d, Some((r.clone(), s.clone(), t.clone()))));
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;
        let best = rows.into_iter().fold((0.0, None), max_triple);
        (best.0, best.1, per * chunks)
    };

    let mut normalization_residual = 0.0;
    let mut normalization_witness = None;
    for r in &ball {
        let d = (omega.eval(r, &id)? - ONE).norm().max((omega.eval(&id, r)? - ONE).norm());
        if d > normalization_residual {
            normalization_residual = d;
            normalization_witness = Some(r.to_vec());
        }
    }
    let mut sup_abs = 0.0;
    let mut sup_witness = (id.to_vec(), id.to_vec());
    for s in &ball {
        for t in &ball {
            let a = omega.eval(s, t)?.norm();
            if a > sup_abs {
                sup_abs = a;
                sup_witness = (s.to_vec(), t.to_vec());
            }
        }
    }
    Ok(CocycleReport {
        radius,
        exhaustive,
        triples,
        identity_residual,
        identity_witness: witness.map(|(r, s, t)| (r.to_vec(), s.to_vec(), t.to_vec())),
        normalization_residual,
        normalization_witness,
        sup_abs,
        sup_witness,
    })
}

/// Nonnegative `u, v` on a ball with `|Ω(s,t)| ≤ u(s) + v(t)` there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationPair {
    pub radius: u32,
    #[serde(skip)]
    pub u: BTreeMap<Elem, f64>,
    #[serde(skip)]
    pub v: BTreeMap<Elem, f64>,
    /// `N_Ψ(u)`, `N_Ψ(v)`
    pub psi_norm_u: f64,
    pub psi_norm_v: f64,
}

impl DominationPair {
    /// `C = N_Ψ(u) + N_Ψ(v)`.
    pub fn constant(&self) -> f64 {
        self.psi_norm_u + self.psi_norm_v
    }

    fn lookup(map: &BTreeMap<Elem, f64>, s: &Elem, radius: u32) -> Result<f64> {
        map.get(s).copied().ok_or_else(|| Error::RadiusExceeded { element: s.to_vec(), radius })
    }

    pub fn u_at(&self, s: &Elem) -> Result<f64> {
        Self::lookup(&self.u, s, self.radius)
    }

    pub fn v_at(&self, s: &Elem) -> Result<f64> {
        Self::lookup(&self.v, s, self.radius)
    }
}

/// `u = v = C/ℒ` on the ball of the given radius, with `N_Ψ(u)` computed
/// there, after checking `|Ω(s,t)| ≤ u(s) + v(t)` on every ball pair.
pub fn domination_from_subadditive(
    omega: &Cocycle,
    ell: &Weight,
    c: f64,
    pair: &YoungPair,
    radius: u32,
) -> Result<DominationPair> {
    omega.group.ensure_same(ell.group())?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter("domination constant must be positive".into()));
    }
    let ball = omega.group.ball(radius)?;
    let u: BTreeMap<Elem, f64> =
        ball.iter().map(|s| Ok((s.clone(), c * (-ell.log_value(s)?).exp()))).collect::<Result<_>>()?;
    let violation = ball
        .par_iter()
        .map(|s| -> Result<Option<(Elem, Elem, f64, f64)>> {
            for t in &ball {
                let lhs = omega.eval(s, t)?.norm();
                let rhs = u[s] + u[t];
                if !le_with_slack(lhs, rhs) {
                    return Ok(Some((s.clone(), t.clone(), lhs, rhs)));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    if let Some((s, t, lhs, rhs)) = violation {
        return Err(Error::DominationViolated { s: s.to_vec(), t: t.to_vec(), lhs, rhs });
    }
    let values: Vec<f64> = u.values().copied().collect();
    let n = luxemburg_of_values(&values, pair.psi());
    Ok(DominationPair { radius, v: u.clone(), u, psi_norm_u: n, psi_norm_v: n })
}

/// `G × ℤ_n` with `(s, a)(t, b) = (st, a + b + c(s,t) mod n)` where
/// `Ω_𝕋(s,t) = ζ^{c(s,t)}`, `ζ = e^{2πi/n}`. Elements are the base
/// coordinates followed by `a`.
pub struct ExtensionLaw {
    base: Group,
    n: i64,
    tag: String,
    exponents: HashMap<(Elem, Elem), i64>,
}

impl ExtensionLaw {
    fn split(&self, x: &Elem) -> (Elem, i64) {
        let k = x.len() - 1;
        (Elem::from_slice(&x[..k]), x[k])
    }

    fn join(s: &Elem, a: i64) -> Elem {
        let mut e = s.clone();
        e.push(a);
        e
    }

    fn c(&self, s: &Elem, t: &Elem) -> i64 {
        self.exponents[&(s.clone(), t.clone())]
    }
}

impl GroupLaw for ExtensionLaw {
    fn spec(&self) -> String {
        format!("Ext[{}|{}|{}]", self.base.spec(), self.tag, self.n)
    }
    fn identity(&self) -> Elem {
        Self::join(&self.base.identity(), 0)
    }
    fn op(&self, x: &Elem, y: &Elem) -> Elem {
        let ((s, a), (t, b)) = (self.split(x), self.split(y));
        let st = self.base.op(&s, &t);
        Self::join(&st, (a + b + self.c(&s, &t)).rem_euclid(self.n))
    }
    fn inv(&self, x: &Elem) -> Elem {
        let (s, a) = self.split(x);
        let si = self.base.inv(&s);
        let c = self.c(&s, &si);
        Self::join(&si, (-a - c).rem_euclid(self.n))
    }
    fn generators(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = self.base.generators().iter().map(|u| Self::join(u, 0)).collect();
        let id = self.base.identity();
        for a in [1, self.n - 1] {
            let g = Self::join(&id, a.rem_euclid(self.n));
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        // make the set symmetric
        let invs: Vec<Elem> = gens.iter().map(|g| self.inv(g)).collect();
        for g in invs {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        gens
    }
    fn contains(&self, x: &Elem) -> bool {
        !x.is_empty() && {
            let (s, a) = self.split(x);
            self.base.contains(&s) && (0..self.n).contains(&a)
        }
    }
    fn order(&self) -> Option<usize> {
        self.base.order().map(|o| o * self.n as usize)
    }
}

/// The finite model `G × ℤ_n` of the central extension by a root-of-unity
/// valued cocycle, and the embedding `Γ(f)(s, k) = ζ^{−k} f(s)`.
///
/// With counting measure on the fibre, `Γ(f ⋆_Ω g) = (1/n) Γ(f) * Γ(g)`.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    base: Group,
    group: Group,
    n: u32,
}

/// Tolerance for recognizing a cocycle value as `ζ^k`.
const ROOT_TOL: f64 = 1e-9;

impl CentralExtension {
    pub fn new(omega_t: &Cocycle, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        let base = omega_t.group.clone();
        let elements = base.elements()?;
        let mut exponents = HashMap::with_capacity(elements.len() * elements.len());
        for s in &elements {
            for t in &elements {
                let v = omega_t.eval(s, t)?;
                let k = (v.arg() / TAU * n as f64).round();
                let zeta_k = Complex64::from_polar(1.0, TAU * k / n as f64);
                if (v - zeta_k).norm() > ROOT_TOL {
                    return Err(Error::NotRootOfUnity { s: s.to_vec(), t: t.to_vec(), n });
                }
                exponents.insert((s.clone(), t.clone()), (k as i64).rem_euclid(n as i64));
            }
        }
        let law = ExtensionLaw { base: base.clone(), n: n as i64, tag: omega_t.spec(), exponents };
        Ok(CentralExtension { base, group: Group::new(law), n })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn base(&self) -> &Group {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn embed(&self, f: &SupportedFunction) -> Result<SupportedFunction> {
        f.group().ensure_same(&self.base)?;
        let mut out = SupportedFunction::zero(&self.group);
        for (s, v) in f.iter() {
            for k in 0..self.n {
                let zeta = Complex64::from_polar(1.0, -TAU * k as f64 / self.n as f64);
                out.add_at(ExtensionLaw::join(s, k as i64), v * zeta)?;
            }
        }
        Ok(out)
    }
}

/// `Γ(f)` on the finite central extension built from `Ω_𝕋` and `n`.
pub fn central_extension_embed(f: &SupportedFunction, omega_t: &Cocycle, n: u32) -> Result<SupportedFunction> {
    CentralExtension::new(omega_t, n)?.embed(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::elem;
    use crate::weights::make_poly_weight;

    #[test]
    fn coboundary_values() {
        let z = Group::parse("Z^d:1").unwrap();
        let w = make_poly_weight(&z, 1.0).unwrap();
        let c = coboundary_from_weight(&w);
        assert!((c.eval(&elem(&[1]), &elem(&[1])).unwrap().re - 0.75).abs() < 1e-15);
        assert_eq!(c.eval(&elem(&[0]), &elem(&[5])).unwrap(), ONE);
        let flat = coboundary_from_weight(&Weight::constant(&z));
        assert_eq!(flat.eval(&elem(&[3]), &elem(&[-7])).unwrap(), ONE);
    }

    #[test]
    fn bicharacter_values() {
        let z2 = Group::parse("Z^d:2").unwrap();
        let b = bicharacter_cocycle(&z2, std::f64::consts::PI).unwrap();
        let v = b.eval(&elem(&[0, 1]), &elem(&[1, 0])).unwrap();
        assert!((v + ONE).norm() < 1e-15);
        let zero = bicharacter_cocycle(&z2, 0.0).unwrap();
        assert_eq!(zero.eval(&elem(&[3, 4]), &elem(&[5, 6])).unwrap(), ONE);
        assert!(bicharacter_cocycle(&Group::parse("H3").unwrap(), 1.0).is_err());
    }

    #[test]
    fn verification_detects_faults() {
        let z2 = Group::parse("Z^d:2").unwrap();
        let b = bicharacter_cocycle(&z2, 1.0).unwrap();
        let r = verify_cocycle(&b, 2).unwrap();
        assert!(r.exhaustive && r.passes(1e-12), "{r:?}");
        let bad = b.with_override(elem(&[1, 1]), elem(&[0, 1]), Complex64::new(2.0, 0.0)).unwrap();
        let r = verify_cocycle(&bad, 2).unwrap();
        assert!(r.identity_residual > 0.1 && r.identity_witness.is_some());
        let sampled = verify_cocycle_with(&b, 3, VerifyConfig { exhaustive_limit: 10, samples: 1000, seed: 4 }).unwrap();
        assert!(!sampled.exhaustive && sampled.passes(1e-12));
    }

    #[test]
    fn polar_parts() {
        let z2 = Group::parse("Z^d:2").unwrap();
        let cob = coboundary_from_weight(&make_poly_weight(&z2, 2.0).unwrap());
        let bic = bicharacter_cocycle(&z2, 0.7).unwrap();
        let prod = Cocycle::product(&cob, &bic).unwrap();
        let (m, p) = polar(&prod).unwrap();
        let custom = Cocycle::custom(&z2, "copy", {
            let prod = prod.clone();
            move |s, t| prod.eval(s, t).unwrap()
        });
        let (cm, cp) = polar(&custom).unwrap();
        for s in z2.ball(2).unwrap() {
            for t in z2.ball(2).unwrap() {
                let v = prod.eval(&s, &t).unwrap();
                assert_eq!(m.eval(&s, &t).unwrap() * p.eval(&s, &t).unwrap(), v);
                assert!((p.eval(&s, &t).unwrap().norm() - 1.0).abs() < 1e-15);
                let w = cm.eval(&s, &t).unwrap() * cp.eval(&s, &t).unwrap();
                assert!((w - v).norm() <= 4.0 * f64::EPSILON * v.norm());
            }
        }
        let (m1, p1) = polar(&cob).unwrap();
        assert!(matches!(p1.kind(), CocycleKind::One) && matches!(m1.kind(), CocycleKind::Coboundary(_)));
        let zeroed = cob.with_override(elem(&[1, 0]), elem(&[1, 0]), Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(polar(&zeroed), Err(Error::ZeroCocycle { .. })));
    }

    #[test]
    fn domination_examples() {
        let z = Group::parse("Z^d:1").unwrap();
        let pair = YoungPair::parse("Lp:2").unwrap();
        let w = make_poly_weight(&z, 2.0).unwrap();
        let cob = coboundary_from_weight(&w);
        let d = domination_from_subadditive(&cob, &w, 4.0, &pair, 20).unwrap();
        assert!(d.constant() > 0.0);
        let one = Cocycle::one(&z);
        let d = domination_from_subadditive(&one, &Weight::constant(&z), 1.0, &pair, 3).unwrap();
        assert!(d.u.values().all(|&x| x == 1.0));
        let bad = cob.with_override(elem(&[2]), elem(&[3]), Complex64::new(100.0, 0.0)).unwrap();
        match domination_from_subadditive(&bad, &w, 4.0, &pair, 20) {
            Err(Error::DominationViolated { s, t, .. }) => assert_eq!((s, t), (vec![2], vec![3])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extension_group_law() {
        let z4 = Group::parse("Zn:4").unwrap();
        let om = bicharacter_cocycle(&z4, TAU / 4.0).unwrap();
        let ext = CentralExtension::new(&om, 4).unwrap();
        let g = ext.group();
        assert_eq!(g.order(), Some(16));
        assert_eq!(g.elements().unwrap().len(), 16);
        for x in g.elements().unwrap() {
            assert!(g.is_identity(&g.op(&x, &g.inv(&x))));
            assert!(g.is_identity(&g.op(&g.inv(&x), &x)));
        }
        let d = SupportedFunction::delta(&z4, z4.identity()).unwrap();
        let e = ext.embed(&d).unwrap();
        assert_eq!(e.get(&g.identity()), ONE);
        assert!(CentralExtension::new(&bicharacter_cocycle(&z4, 1.0).unwrap(), 4).is_err());
        assert!(CentralExtension::new(&Cocycle::one(&Group::parse("Z^d:1").unwrap()), 1).is_err());
    }
}
