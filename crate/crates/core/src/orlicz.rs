//! Finitely supported functions and their Orlicz-space norms.
//!
//! Everything is under counting measure. The Orlicz norm is computed with
//! the Amemiya formula `inf_{t>0} t (1 + I_Φ(f/t))`; [`dual_pairing_bound`]
//! supplies an independent lower-bound certificate against it.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Elem, Group};
use crate::optimize::{bisect_threshold, golden_min};
use crate::weights::Weight;
use crate::young::{YoungFunction, YoungPair};

/// A finitely supported `f: G → ℂ`. Zero values are never stored.
#[derive(Debug, Clone)]
pub struct SupportedFunction {
    group: Group,
    values: BTreeMap<Elem, Complex64>,
}

impl PartialEq for SupportedFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.values == other.values
    }
}

impl SupportedFunction {
    pub fn zero(group: &Group) -> Self {
        SupportedFunction { group: group.clone(), values: BTreeMap::new() }
    }

    /// `c·δ_s`.
    pub fn point(group: &Group, s: Elem, c: Complex64) -> Result<Self> {
        let mut f = Self::zero(group);
        f.add_at(s, c)?;
        Ok(f)
    }

    pub fn delta(group: &Group, s: Elem) -> Result<Self> {
        Self::point(group, s, Complex64::new(1.0, 0.0))
    }

    /// Sums repeated elements.
    pub fn from_entries(group: &Group, entries: impl IntoIterator<Item = (Elem, Complex64)>) -> Result<Self> {
        let mut f = Self::zero(group);
        for (s, c) in entries {
            f.add_at(s, c)?;
        }
        Ok(f)
    }

    /// Independent uniform values in the unit square on `k` distinct elements
    /// drawn from `pool`.
    pub fn random<R: Rng>(group: &Group, pool: &[Elem], k: usize, rng: &mut R) -> Result<Self> {
        let k = k.min(pool.len());
        let picks = rand::seq::index::sample(rng, pool.len(), k);
        let mut f = Self::zero(group);
        for i in picks.iter() {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.add_at(pool[i].clone(), c)?;
        }
        Ok(f)
    }

    pub fn add_at(&mut self, s: Elem, c: Complex64) -> Result<()> {
        self.group.validate(&s)?;
        self.add_unchecked(s, c);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, s: Elem, c: Complex64) {
        match self.values.entry(s) {
            Entry::Vacant(e) => {
                if c != Complex64::new(0.0, 0.0) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == Complex64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn get(&self, s: &Elem) -> Complex64 {
        self.values.get(s).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Elem> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elem, &Complex64)> {
        self.values.iter()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    /// Pointwise map; zeros produced by `m` are dropped.
    pub fn map(&self, mut m: impl FnMut(&Elem, Complex64) -> Complex64) -> Self {
        let mut out = Self::zero(&self.group);
        for (s, v) in &self.values {
            out.add_unchecked(s.clone(), m(s, *v));
        }
        out
    }

    pub fn try_map(&self, mut m: impl FnMut(&Elem, Complex64) -> Result<Complex64>) -> Result<Self> {
        let mut out = Self::zero(&self.group);
        for (s, v) in &self.values {
            out.add_unchecked(s.clone(), m(s, *v)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let mut out = self.clone();
        for (s, v) in &other.values {
            out.add_unchecked(s.clone(), *v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.values().map(|v| v.norm()).collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.values().map(|v| v.norm()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest word length over the support.
    pub fn support_radius(&self) -> Result<u32> {
        let mut r = 0;
        for s in self.values.keys() {
            r = r.max(self.group.word_length(s)?);
        }
        Ok(r)
    }

    pub fn to_file(&self) -> FunctionFile {
        FunctionFile {
            group: self.group.spec().to_string(),
            support: self
                .values
                .iter()
                .map(|(s, v)| FileEntry { elt: s.to_vec(), re: v.re, im: v.im })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("function files always serialize")
    }

    /// Builds a function from the JSON file format. Zero values and repeated
    /// elements are rejected.
    pub fn from_file(file: &FunctionFile, expected: Option<&Group>) -> Result<Self> {
        let group = match expected {
            Some(g) if g.spec() != file.group.trim() => {
                return Err(Error::GroupMismatch { left: file.group.clone(), right: g.spec().to_string() })
            }
            Some(g) => g.clone(),
            None => Group::parse(&file.group)?,
        };
        let mut seen: BTreeMap<Elem, usize> = BTreeMap::new();
        let mut f = Self::zero(&group);
        for (i, e) in file.support.iter().enumerate() {
            let s = Elem::from_slice(&e.elt);
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::FunctionFile(format!("entry {i} has a non-finite value")));
            }
            if e.re == 0.0 && e.im == 0.0 {
                return Err(Error::FunctionFile(format!("entry {i} ({:?}) has value zero", e.elt)));
            }
            if let Some(j) = seen.insert(s.clone(), i) {
                return Err(Error::FunctionFile(format!("entries {j} and {i} repeat element {:?}", e.elt)));
            }
            f.add_at(s, Complex64::new(e.re, e.im))?;
        }
        Ok(f)
    }

    pub fn from_json(text: &str, expected: Option<&Group>) -> Result<Self> {
        let file: FunctionFile = serde_json::from_str(text)
            .map_err(|e| Error::FunctionFile(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&file, expected)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub group: String,
    pub support: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub elt: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

pub fn parse_function_file(path: &Path, expected: Option<&Group>) -> Result<SupportedFunction> {
    let text = std::fs::read_to_string(path)?;
    SupportedFunction::from_json(&text, expected)
}

// --- norms on lists of magnitudes -----------------------------------------

fn modular_abs(a: &[f64], phi: &YoungFunction, scale: f64) -> f64 {
    let mut sum = 0.0;
    for &x in a {
        sum += phi.eval(x * scale);
        if sum.is_infinite() {
            break;
        }
    }
    sum
}

fn luxemburg_abs(a: &[f64], phi: &YoungFunction) -> f64 {
    let top = a.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    // modular(a/k) <= 1 is monotone in k; `inside(k)` is false below the norm
    let inside = |k: f64| modular_abs(a, phi, 1.0 / k) <= 1.0;
    let mut hi = top;
    let mut guard = 0;
    while !inside(hi) {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 2100, "Luxemburg bracket did not close");
    }
    let mut lo = hi;
    guard = 0;
    while inside(lo) {
        lo *= 0.5;
        guard += 1;
        if guard > 2100 || lo == 0.0 {
            return 0.0;
        }
    }
    bisect_threshold(inside, lo, hi, 4.0 * f64::EPSILON, 200)
}

fn amemiya(a: &[f64], phi: &YoungFunction, t: f64) -> f64 {
    t * (1.0 + modular_abs(a, phi, 1.0 / t))
}

fn orlicz_abs(a: &[f64], phi: &YoungFunction) -> f64 {
    let n = luxemburg_abs(a, phi);
    if n == 0.0 {
        return 0.0;
    }
    // t > 2N gives h(t) > 2N >= h(N), so the minimizer lies in (0, 2N]
    let m = golden_min(|t| amemiya(a, phi, t), 0.0, 2.0 * n, 1e-14 * n, 400);
    let at_zero = a.iter().sum::<f64>() * phi.recession_slope();
    m.value.min(amemiya(a, phi, n)).min(at_zero)
}

// --- public norm API -------------------------------------------------------

/// `Σ Φ(|f(s)|)`; may be `+inf`.
pub fn modular(f: &SupportedFunction, phi: &YoungFunction) -> f64 {
    modular_abs(&f.abs_values(), phi, 1.0)
}

/// `N_Φ(f) = inf{k > 0 : I_Φ(f/k) ≤ 1}`. The returned value always satisfies
/// `I_Φ(f/N) ≤ 1`.
pub fn luxemburg_norm(f: &SupportedFunction, phi: &YoungFunction) -> f64 {
    luxemburg_abs(&f.abs_values(), phi)
}

/// `‖f‖_Φ` by the Amemiya formula.
pub fn orlicz_norm(f: &SupportedFunction, pair: &YoungPair) -> f64 {
    orlicz_abs(&f.abs_values(), pair.phi())
}

/// `‖f‖_Φ` computed from `Φ` alone.
pub fn orlicz_norm_phi(f: &SupportedFunction, phi: &YoungFunction) -> f64 {
    orlicz_abs(&f.abs_values(), phi)
}

/// A Young pair and an optional weight for `‖f‖_{Φ,ω} = ‖fω‖_Φ`.
#[derive(Debug, Clone)]
pub struct SpaceContext {
    pub pair: YoungPair,
    pub weight: Option<Weight>,
}

impl SpaceContext {
    pub fn new(pair: YoungPair, weight: Option<Weight>) -> Self {
        SpaceContext { pair, weight }
    }
}

fn weighted_abs(f: &SupportedFunction, w: &Weight) -> Result<Vec<f64>> {
    f.group.ensure_same(w.group())?;
    f.values.iter().map(|(s, v)| Ok(v.norm() * w.value(s)?)).collect()
}

/// `‖fω‖_Φ`, or the plain Orlicz norm when the context has no weight.
pub fn weighted_norm(f: &SupportedFunction, ctx: &SpaceContext) -> Result<f64> {
    match &ctx.weight {
        None => Ok(orlicz_norm(f, &ctx.pair)),
        Some(w) => Ok(orlicz_abs(&weighted_abs(f, w)?, ctx.pair.phi())),
    }
}

/// `N_Φ(fω)`.
pub fn weighted_luxemburg(f: &SupportedFunction, phi: &YoungFunction, w: &Weight) -> Result<f64> {
    Ok(luxemburg_abs(&weighted_abs(f, w)?, phi))
}

/// `‖f‖_{1,ω} = Σ |f(s)| ω(s)`.
pub fn weighted_l1(f: &SupportedFunction, w: &Weight) -> Result<f64> {
    Ok(weighted_abs(f, w)?.iter().sum())
}

/// `Λ_ω(f) = f / ω`.
pub fn lambda_map(f: &SupportedFunction, w: &Weight) -> Result<SupportedFunction> {
    f.group.ensure_same(w.group())?;
    f.try_map(|s, v| Ok(v * (-w.log_value(s)?).exp()))
}

/// Luxemburg norm of a nonnegative function given by its values.
pub fn luxemburg_of_values(values: &[f64], phi: &YoungFunction) -> f64 {
    luxemburg_abs(values, phi)
}

/// Outcome of the Hölder check and the dual-ball certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderReport {
    /// `‖fv‖₁`
    pub pairing: f64,
    /// `N_Φ(f) ‖v‖_Ψ`
    pub luxemburg_orlicz: f64,
    /// `‖f‖_Φ N_Ψ(v)`
    pub orlicz_luxemburg: f64,
    /// `‖f‖_Φ`
    pub orlicz_f: f64,
    /// `Σ |f v̂|` for `v̂ = v / N_Ψ(v)`, a point of the dual unit ball.
    pub certificate: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Relative slack for one-sided floating-point inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-9;

pub(crate) fn le_with_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + INEQUALITY_SLACK * rhs.abs().max(lhs.abs())
}

/// Checks `‖fv‖₁ ≤ min{N_Φ(f)‖v‖_Ψ, ‖f‖_Φ N_Ψ(v)}`, and that the pairing
/// with the rescaled `v̂` (which has `I_Ψ(v̂) ≤ 1`) does not exceed `‖f‖_Φ`.
pub fn dual_pairing_bound(f: &SupportedFunction, v: &SupportedFunction, pair: &YoungPair) -> Result<HolderReport> {
    f.group.ensure_same(&v.group)?;
    let pairing: f64 = f.values.iter().map(|(s, a)| a.norm() * v.get(s).norm()).sum();
    let (phi, psi) = (pair.phi(), pair.psi());
    let va = v.abs_values();
    let (nv_psi, ov_psi) = (luxemburg_abs(&va, psi), orlicz_abs(&va, psi));
    let fa = f.abs_values();
    let (nf, of) = (luxemburg_abs(&fa, phi), orlicz_abs(&fa, phi));
    let luxemburg_orlicz = nf * ov_psi;
    let orlicz_luxemburg = of * nv_psi;
    let certificate = if nv_psi > 0.0 { pairing / nv_psi } else { 0.0 };
    let bound = luxemburg_orlicz.min(orlicz_luxemburg);
    let pass = le_with_slack(pairing, bound) && le_with_slack(certificate, of);
    Ok(HolderReport {
        pairing,
        luxemburg_orlicz,
        orlicz_luxemburg,
        orlicz_f: of,
        certificate,
        margin: bound - pairing,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    /// `S_n = Σ_{τ(s) ≤ n} Ψ(N/ω(s))` for `n = 0..=n_max`.
    pub partial_sums: Vec<f64>,
    /// `(S_n − S_{n/2}) / (S_{n/2} − S_{n/4})` at `n = n_max`.
    pub tail_ratio: f64,
    pub convergent: bool,
    /// The group was exhausted before `n_max`.
    pub terminated: bool,
}

/// Tail ratios at or above this are reported as divergence.
pub const SERIES_DIVERGENCE_RATIO: f64 = 0.95;

/// Layer-by-layer partial sums of `Σ_s Ψ(N/ω(s))`, evidence for `1/ω ∈ L^Ψ`.
pub fn psi_membership_series(w: &Weight, pair: &YoungPair, n_const: f64, n_max: u32) -> Result<SeriesReport> {
    if n_max < 4 {
        return Err(Error::Parameter("psi_membership_series needs n_max >= 4".into()));
    }
    if !(n_const > 0.0 && n_const.is_finite()) {
        return Err(Error::Parameter("N must be positive".into()));
    }
    let g = w.group();
    let psi = pair.psi();
    let closed = w.is_radial() && g.law().sphere_size_closed_form(1).is_some();
    let mut partial_sums = Vec::with_capacity(n_max as usize + 1);
    let mut sum = 0.0;
    let mut terminated = false;
    let table = if closed { None } else { Some(g.ball_table(n_max).or_else(|e| match e {
        // finite groups saturate before the cap
        Error::RadiusCap { .. } if g.is_finite() => g.ball_table(g.limits().max_radius),
        e => Err(e),
    })?) };
    for n in 0..=n_max {
        let term = if closed {
            let count = g.sphere_size(n)? as f64;
            let lw = w.radial_log(n).expect("radial");
            if count == 0.0 {
                0.0
            } else {
                count * psi.eval(n_const * (-lw).exp())
            }
        } else {
            let t = table.as_ref().expect("table");
            if n > t.radius() || t.layer(n).is_empty() {
                terminated = t.is_saturated();
                0.0
            } else {
                let mut s = 0.0;
                for x in t.layer(n) {
                    s += psi.eval(n_const * (-w.log_value(x)?).exp());
                }
                s
            }
        };
        if !term.is_finite() {
            return Err(Error::Parameter(format!("Ψ is infinite at N/ω on layer {n}")));
        }
        sum += term;
        partial_sums.push(sum);
    }
    let at = |k: u32| partial_sums[k as usize];
    let (a, b) = (at(n_max) - at(n_max / 2), at(n_max / 2) - at(n_max / 4));
    let tail_ratio = if b > 0.0 {
        a / b
    } else if a > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(SeriesReport { partial_sums, tail_ratio, convergent: tail_ratio < SERIES_DIVERGENCE_RATIO, terminated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::elem;

    fn z2() -> Group {
        Group::parse("Z^d:2").unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zeros_are_not_stored() {
        let g = z2();
        let mut f = SupportedFunction::delta(&g, elem(&[1, 0])).unwrap();
        f.add_at(elem(&[1, 0]), c(-1.0)).unwrap();
        assert!(f.is_zero());
        assert!(SupportedFunction::point(&g, elem(&[0, 0]), c(0.0)).unwrap().is_zero());
        assert!(SupportedFunction::delta(&g, elem(&[1])).is_err());
    }

    #[test]
    fn delta_half_square() {
        let g = z2();
        let pair = YoungPair::parse("Lp:2").unwrap();
        let d = SupportedFunction::delta(&g, g.identity()).unwrap();
        assert_eq!(modular(&d, pair.phi()), 0.5);
        assert!((luxemburg_norm(&d, pair.phi()) - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((orlicz_norm(&d, &pair) - 2f64.sqrt()).abs() < 1e-12);
        let z = SupportedFunction::zero(&g);
        assert_eq!(modular(&z, pair.phi()), 0.0);
        assert_eq!(luxemburg_norm(&z, pair.phi()), 0.0);
        assert_eq!(orlicz_norm(&z, &pair), 0.0);
    }

    #[test]
    fn indicator_power_norm() {
        let g = z2();
        let ball = g.ball(1).unwrap();
        let f = SupportedFunction::from_entries(&g, ball.iter().map(|s| (s.clone(), c(1.0)))).unwrap();
        let m = ball.len() as f64;
        let phi = YoungFunction::power(3.0).unwrap();
        assert!((modular(&f, &phi) - m / 3.0).abs() < 1e-14);
        assert!((luxemburg_norm(&f, &phi) - (m / 3.0).powf(1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn linear_orlicz_is_l1() {
        let g = z2();
        let pair = YoungPair::parse("L1").unwrap();
        let f = SupportedFunction::from_entries(
            &g,
            [(elem(&[0, 0]), Complex64::new(1.0, -2.0)), (elem(&[3, 1]), c(0.25))],
        )
        .unwrap();
        assert_eq!(orlicz_norm(&f, &pair), f.l1_norm());
    }

    #[test]
    fn barrier_norms_are_sup() {
        let g = z2();
        let f = SupportedFunction::from_entries(&g, [(elem(&[0, 0]), c(3.0)), (elem(&[1, 0]), c(-0.5))]).unwrap();
        let swapped = YoungPair::parse("L1").unwrap().swapped();
        assert!((luxemburg_norm(&f, swapped.phi()) - 3.0).abs() < 1e-13);
        assert!((orlicz_norm(&f, &swapped) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn holder_tight_at_delta() {
        let g = z2();
        let pair = YoungPair::parse("Lp:2").unwrap();
        let d = SupportedFunction::delta(&g, g.identity()).unwrap();
        let r = dual_pairing_bound(&d, &d, &pair).unwrap();
        assert!(r.pass);
        assert!((r.luxemburg_orlicz - 1.0).abs() < 1e-12 && (r.pairing - 1.0).abs() < 1e-15);
        let r = dual_pairing_bound(&d, &SupportedFunction::zero(&g), &pair).unwrap();
        assert_eq!(r.pairing, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn weighted_norms_and_lambda() {
        let g = z2();
        let pair = YoungPair::parse("Lp:2").unwrap();
        let w = crate::weights::make_poly_weight(&g, 2.0).unwrap();
        let ctx = SpaceContext::new(pair.clone(), Some(w.clone()));
        let s = elem(&[2, -1]);
        let d = SupportedFunction::delta(&g, s.clone()).unwrap();
        let base = orlicz_norm(&SupportedFunction::delta(&g, g.identity()).unwrap(), &pair);
        assert!((weighted_norm(&d, &ctx).unwrap() - 9.0 * base).abs() < 1e-11);
        let l = lambda_map(&d, &w).unwrap();
        assert!((l.get(&s).re - 1.0 / 9.0).abs() < 1e-15);
        assert!((weighted_norm(&l, &ctx).unwrap() - orlicz_norm(&d, &pair)).abs() < 1e-12);
        assert!((weighted_l1(&d, &w).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn file_round_trip_and_validation() {
        let g = z2();
        let f = SupportedFunction::from_json(r#"{"group":"Z^d:2","support":[{"elt":[0,0],"re":1,"im":0}]}"#, None)
            .unwrap();
        assert_eq!(f, SupportedFunction::delta(&g, g.identity()).unwrap());
        let back = SupportedFunction::from_json(&f.to_json(), Some(&g)).unwrap();
        assert_eq!(back, f);
        let empty = SupportedFunction::from_json(r#"{"group":"Z^d:2","support":[]}"#, None).unwrap();
        assert!(empty.is_zero());
        let dup = r#"{"group":"Z^d:2","support":[{"elt":[1,0],"re":1,"im":0},{"elt":[1,0],"re":2,"im":0}]}"#;
        let err = SupportedFunction::from_json(dup, None).unwrap_err().to_string();
        assert!(err.contains("entries 0 and 1"), "{err}");
        let zero = r#"{"group":"Z^d:2","support":[{"elt":[1,0],"re":0,"im":0}]}"#;
        assert!(SupportedFunction::from_json(zero, None).is_err());
        let other = Group::parse("Z^d:1").unwrap();
        assert!(matches!(SupportedFunction::from_json(&f.to_json(), Some(&other)), Err(Error::GroupMismatch { .. })));
        let broken = SupportedFunction::from_json("{\n\"group\": ", None).unwrap_err().to_string();
        assert!(broken.contains("line 2"), "{broken}");
    }

    #[test]
    fn series_convergence_flags() {
        let z = Group::parse("Z^d:1").unwrap();
        let w1 = crate::weights::make_poly_weight(&z, 1.0).unwrap();
        let sq = YoungPair::parse("Lp:2").unwrap();
        let r = psi_membership_series(&w1, &sq, 1.0, 10_000).unwrap();
        assert!(r.convergent && (r.tail_ratio - 0.5).abs() < 0.01, "{}", r.tail_ratio);
        let lin = YoungPair::parse("L1").unwrap().swapped();
        assert!(!psi_membership_series(&w1, &lin, 1.0, 10_000).unwrap().convergent);
        let cyc = Group::parse("Zn:4").unwrap();
        let wc = crate::weights::make_poly_weight(&cyc, 1.0).unwrap();
        let r = psi_membership_series(&wc, &lin, 1.0, 16).unwrap();
        assert!(r.convergent);
    }
}
