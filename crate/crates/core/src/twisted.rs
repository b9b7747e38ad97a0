//! Twisted convolution, the involution, and the algebra-level verifiers.
//!
//! All groups here are discrete, so the modular function is identically 1.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cocycles::{phase_of, Cocycle, DominationPair};
use crate::error::{Error, Result};
use crate::groups::Elem;
use crate::orlicz::{
    le_with_slack, luxemburg_of_values, orlicz_norm, weighted_l1, weighted_norm, SpaceContext, SupportedFunction,
};
use crate::weights::{check_lss_domination, check_weak_subadditive, quotient_weight, Weight};
use crate::young::YoungPair;

/// Products below this many terms are convolved on one thread.
const PARALLEL_THRESHOLD: usize = 4096;

/// Default cap on the support size of convolution powers.
pub const SUPPORT_CAP: usize = 200_000;

/// `(f ⋆_Ω g)(t) = Σ_s f(s) g(s⁻¹t) Ω(s, s⁻¹t)`, by the exact double loop
/// `out[s·x] += f(s) g(x) Ω(s, x)`.
pub fn twisted_convolve(f: &SupportedFunction, g: &SupportedFunction, omega: &Cocycle) -> Result<SupportedFunction> {
    f.group().ensure_same(g.group())?;
    f.group().ensure_same(omega.group())?;
    let group = f.group();
    let row = |(s, a): (&Elem, &Complex64)| -> Result<Vec<(Elem, Complex64)>> {
        g.iter().map(|(x, b)| Ok((group.op(s, x), a * b * omega.eval(s, x)?))).collect()
    };
    let rows: Vec<Vec<(Elem, Complex64)>> = if f.len() * g.len() < PARALLEL_THRESHOLD {
        f.iter().map(row).collect::<Result<_>>()?
    } else {
        let entries: Vec<(&Elem, &Complex64)> = f.iter().collect();
        entries.into_par_iter().map(row).collect::<Result<_>>()?
    };
    // fixed summation order keeps results bitwise reproducible
    let mut acc: BTreeMap<Elem, Complex64> = BTreeMap::new();
    for (e, v) in rows.into_iter().flatten() {
        *acc.entry(e).or_default() += v;
    }
    let mut out = SupportedFunction::zero(group);
    for (e, v) in acc {
        out.add_unchecked(e, v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// `δ_s ⋆ f` (left) or `f ⋆ δ_s` (right).
pub fn delta_action(s: &Elem, f: &SupportedFunction, omega: &Cocycle, side: Side) -> Result<SupportedFunction> {
    let g = f.group();
    g.ensure_same(omega.group())?;
    g.validate(s)?;
    let mut out = SupportedFunction::zero(g);
    for (x, v) in f.iter() {
        match side {
            Side::Left => out.add_unchecked(g.op(s, x), v * omega.eval(s, x)?),
            Side::Right => out.add_unchecked(g.op(x, s), v * omega.eval(x, s)?),
        }
    }
    Ok(out)
}

const UNIMODULAR_TOL: f64 = 1e-12;

fn unimodular(v: Complex64, s: &Elem, t: &Elem) -> Result<Complex64> {
    if (v.norm() - 1.0).abs() > UNIMODULAR_TOL {
        Err(Error::NotUnimodular { s: s.to_vec(), t: t.to_vec(), modulus: v.norm() })
    } else {
        Ok(v)
    }
}

/// `f*(s) = conj(f(s⁻¹)) · conj(Ω_𝕋(s, s⁻¹))`.
pub fn involution(f: &SupportedFunction, phase: &Cocycle) -> Result<SupportedFunction> {
    let g = f.group();
    g.ensure_same(phase.group())?;
    let mut out = SupportedFunction::zero(g);
    for (x, v) in f.iter() {
        let s = g.inv(x);
        let w = unimodular(phase.eval(&s, x)?, &s, x)?;
        out.add_unchecked(s, v.conj() * w.conj());
    }
    Ok(out)
}

fn l1_residual(a: &SupportedFunction, b: &SupportedFunction) -> Result<(f64, Option<Vec<i64>>)> {
    let d = a.sub(b)?;
    let witness = d
        .iter()
        .fold(None::<(&Elem, f64)>, |best, (s, v)| match best {
            Some((_, m)) if v.norm() <= m => best,
            _ => Some((s, v.norm())),
        })
        .map(|(s, _)| s.to_vec());
    Ok((d.l1_norm(), witness))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `ℓ¹` norm of the difference of the two sides.
    pub residual: f64,
    /// Element where the two sides differ most.
    pub witness: Option<Vec<i64>>,
}

/// `‖(f⋆g)⋆h − f⋆(g⋆h)‖₁`.
pub fn check_associativity(
    f: &SupportedFunction,
    g: &SupportedFunction,
    h: &SupportedFunction,
    omega: &Cocycle,
) -> Result<ResidualReport> {
    let left = twisted_convolve(&twisted_convolve(f, g, omega)?, h, omega)?;
    let right = twisted_convolve(f, &twisted_convolve(g, h, omega)?, omega)?;
    let (residual, witness) = l1_residual(&left, &right)?;
    Ok(ResidualReport { residual, witness })
}

/// Cocycle, Young pair, and the weights `σ` (of `‖·‖_{Φ,σ}`) and `ω`
/// (of the domination, with `ρ = σ/ω`).
#[derive(Debug, Clone)]
pub struct AlgebraContext {
    pub cocycle: Cocycle,
    pub pair: YoungPair,
    pub weight: Option<Weight>,
    pub aux_weight: Option<Weight>,
}

impl AlgebraContext {
    pub fn new(cocycle: Cocycle, pair: YoungPair) -> Self {
        AlgebraContext { cocycle, pair, weight: None, aux_weight: None }
    }

    pub fn with_weight(mut self, sigma: Weight) -> Result<Self> {
        self.cocycle.group().ensure_same(sigma.group())?;
        self.weight = Some(sigma);
        Ok(self)
    }

    pub fn with_aux_weight(mut self, omega: Weight) -> Result<Self> {
        self.cocycle.group().ensure_same(omega.group())?;
        self.aux_weight = Some(omega);
        Ok(self)
    }

    fn space(&self) -> SpaceContext {
        SpaceContext::new(self.pair.clone(), self.weight.clone())
    }

    /// `ρ = σ/ω`; `σ` alone when there is no `ω`.
    pub fn rho(&self) -> Result<Option<Weight>> {
        match (&self.weight, &self.aux_weight) {
            (Some(s), Some(o)) => Ok(Some(quotient_weight(s, o)?)),
            (Some(s), None) => Ok(Some(s.clone())),
            (None, Some(o)) => Ok(Some(quotient_weight(&Weight::constant(o.group()), o)?)),
            (None, None) => Ok(None),
        }
    }
}

fn sup_abs_on(omega: &Cocycle, a: &SupportedFunction, b: &SupportedFunction) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for s in a.support() {
        for x in b.support() {
            sup = sup.max(omega.eval(s, x)?.norm());
        }
    }
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleReport {
    /// `sup |Ω|` over the relevant support products.
    pub constant_left: f64,
    pub constant_right: f64,
    /// `‖f⋆g‖_Φ` and `C ‖f‖₁ ‖g‖_Φ`
    pub left: (f64, f64),
    /// `‖g⋆f‖_Φ` and `C ‖g‖_Φ ‖f‖₁`
    pub right: (f64, f64),
    pub margin: f64,
    pub pass: bool,
}

/// `‖f⋆g‖_Φ ≤ C ‖f‖₁ ‖g‖_Φ` and `‖g⋆f‖_Φ ≤ C ‖g‖_Φ ‖f‖₁`, with `f ∈ ℓ¹`
/// acting on `g ∈ ℓ^Φ`.
pub fn check_module_bound(f: &SupportedFunction, g: &SupportedFunction, ctx: &AlgebraContext) -> Result<ModuleReport> {
    let omega = &ctx.cocycle;
    let (cl, cr) = (sup_abs_on(omega, f, g)?, sup_abs_on(omega, g, f)?);
    let g_phi = orlicz_norm(g, &ctx.pair);
    let f1 = f.l1_norm();
    let left = (orlicz_norm(&twisted_convolve(f, g, omega)?, &ctx.pair), cl * f1 * g_phi);
    let right = (orlicz_norm(&twisted_convolve(g, f, omega)?, &ctx.pair), cr * g_phi * f1);
    let pass = le_with_slack(left.0, left.1) && le_with_slack(right.0, right.1);
    Ok(ModuleReport {
        constant_left: cl,
        constant_right: cr,
        left,
        right,
        margin: (left.1 - left.0).min(right.1 - right.0),
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    /// `‖f⋆g‖_Φ`
    pub lhs: f64,
    pub fu_l1: f64,
    pub g_phi: f64,
    pub f_phi: f64,
    pub gv_l1: f64,
    /// `‖fu‖₁‖g‖_Φ + ‖f‖_Φ‖gv‖₁`
    pub displayed_rhs: f64,
    /// `N_Ψ(u) + N_Ψ(v)`
    pub constant: f64,
    /// `C ‖f‖_Φ ‖g‖_Φ`
    pub derived_rhs: f64,
    pub pass_displayed: bool,
    pub pass_derived: bool,
    pub margin: f64,
    pub pass: bool,
}

/// `‖f⋆g‖_Φ ≤ ‖fu‖₁‖g‖_Φ + ‖f‖_Φ‖gv‖₁` and `‖f⋆g‖_Φ ≤ (N_Ψ(u) + N_Ψ(v))‖f‖_Φ‖g‖_Φ`.
/// The supports must lie in the ball on which `dom` was verified.
pub fn check_algebra_bound(
    f: &SupportedFunction,
    g: &SupportedFunction,
    ctx: &AlgebraContext,
    dom: &DominationPair,
) -> Result<AlgebraReport> {
    let pair = &ctx.pair;
    let lhs = orlicz_norm(&twisted_convolve(f, g, &ctx.cocycle)?, pair);
    let mut fu_l1 = 0.0;
    for (s, a) in f.iter() {
        fu_l1 += a.norm() * dom.u_at(s)?;
    }
    let mut gv_l1 = 0.0;
    for (s, a) in g.iter() {
        gv_l1 += a.norm() * dom.v_at(s)?;
    }
    let (f_phi, g_phi) = (orlicz_norm(f, pair), orlicz_norm(g, pair));
    let displayed_rhs = fu_l1 * g_phi + f_phi * gv_l1;
    let constant = dom.constant();
    let derived_rhs = constant * f_phi * g_phi;
    let pass_displayed = le_with_slack(lhs, displayed_rhs);
    let pass_derived = le_with_slack(lhs, derived_rhs);
    Ok(AlgebraReport {
        lhs,
        fu_l1,
        g_phi,
        f_phi,
        gv_l1,
        displayed_rhs,
        constant,
        derived_rhs,
        pass_displayed,
        pass_derived,
        margin: displayed_rhs.min(derived_rhs) - lhs,
        pass: pass_displayed && pass_derived,
    })
}

const COBOUNDARY_TOL: f64 = 1e-10;

/// `‖Λ_ω(f ⋆_Ω g) − Λ_ω(f) ⋆_𝕋 Λ_ω(g)‖₁`, where `⋆_𝕋` uses the phase of `Ω`.
/// Requires `|Ω(s,t)| = ω(st)/(ω(s)ω(t))` on `supp f × supp g`.
pub fn check_intertwining(
    f: &SupportedFunction,
    g: &SupportedFunction,
    w: &Weight,
    omega: &Cocycle,
) -> Result<ResidualReport> {
    let grp = f.group();
    grp.ensure_same(w.group())?;
    for s in f.support() {
        for t in g.support() {
            let expected = (w.log_value(&grp.op(s, t))? - w.log_value(s)? - w.log_value(t)?).exp();
            let got = omega.eval(s, t)?.norm();
            if (got - expected).abs() > COBOUNDARY_TOL * expected.max(got) {
                return Err(Error::CoboundaryMismatch { s: s.to_vec(), t: t.to_vec() });
            }
        }
    }
    let phase = phase_of(omega)?;
    let lambda = |h: &SupportedFunction| crate::orlicz::lambda_map(h, w);
    let left = lambda(&twisted_convolve(f, g, omega)?)?;
    let right = twisted_convolve(&lambda(f)?, &lambda(g)?, &phase)?;
    let (residual, witness) = l1_residual(&left, &right)?;
    Ok(ResidualReport { residual, witness })
}

/// Empirical constants for the differential bound on a ball: `C` of weak
/// subadditivity of `ω`, `M` of `σ(st)/(σ(s)σ(t)) ≤ M ω(st)/(ω(s)ω(t))`, and
/// `N_Ψ(1/ω)` restricted to the ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentialConstants {
    pub radius: u32,
    pub c: f64,
    pub m: f64,
    pub psi_norm_inv_omega: f64,
}

pub fn differential_constants(ctx: &AlgebraContext, radius: u32) -> Result<DifferentialConstants> {
    let (sigma, omega) = match (&ctx.weight, &ctx.aux_weight) {
        (Some(s), Some(o)) => (s, o),
        _ => return Err(Error::Parameter("differential bound needs both σ and ω".into())),
    };
    let c = check_weak_subadditive(omega, radius)?.constant;
    let m = check_lss_domination(sigma, omega, radius)?.constant;
    let inv: Vec<f64> =
        omega.group().ball(radius)?.iter().map(|s| Ok((-omega.log_value(s)?).exp())).collect::<Result<_>>()?;
    let psi_norm_inv_omega = luxemburg_of_values(&inv, ctx.pair.psi());
    Ok(DifferentialConstants { radius, c, m, psi_norm_inv_omega })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentialReport {
    pub constants: DifferentialConstants,
    /// `‖f ⋆_𝕋 g‖_{Φ,σ}`
    pub lhs: f64,
    pub f_phi_sigma: f64,
    pub g_phi_sigma: f64,
    pub f_one_rho: f64,
    pub g_one_rho: f64,
    /// `CM(‖f‖_{1,ρ}‖g‖_{Φ,σ} + ‖f‖_{Φ,σ}‖g‖_{1,ρ})`
    pub rhs: f64,
    /// `‖f‖_{1,ρ} ≤ ‖f‖_{Φ,σ} N_Ψ(1/ω)`, and the same for `g`.
    pub containment_pass: bool,
    pub margin: f64,
    pub pass: bool,
}

fn ensure_within(f: &SupportedFunction, radius: u32) -> Result<()> {
    for s in f.support() {
        if f.group().word_length(s)? > radius {
            return Err(Error::RadiusExceeded { element: s.to_vec(), radius });
        }
    }
    Ok(())
}

/// Differential bound at constants computed on the supports' covering ball.
pub fn check_differential_bound(
    f: &SupportedFunction,
    g: &SupportedFunction,
    ctx: &AlgebraContext,
) -> Result<DifferentialReport> {
    let radius = f.support_radius()?.max(g.support_radius()?);
    let consts = differential_constants(ctx, radius)?;
    check_differential_bound_with(f, g, ctx, &consts)
}

/// `‖f ⋆_𝕋 g‖_{Φ,σ} ≤ CM(‖f‖_{1,ρ}‖g‖_{Φ,σ} + ‖f‖_{Φ,σ}‖g‖_{1,ρ})` with `⋆_𝕋`
/// from the phase of the context cocycle, plus the containment certificate.
pub fn check_differential_bound_with(
    f: &SupportedFunction,
    g: &SupportedFunction,
    ctx: &AlgebraContext,
    consts: &DifferentialConstants,
) -> Result<DifferentialReport> {
    ensure_within(f, consts.radius)?;
    ensure_within(g, consts.radius)?;
    let rho = ctx.rho()?.ok_or_else(|| Error::Parameter("differential bound needs σ and ω".into()))?;
    let phase = phase_of(&ctx.cocycle)?;
    let space = ctx.space();
    let lhs = weighted_norm(&twisted_convolve(f, g, &phase)?, &space)?;
    let (f_phi_sigma, g_phi_sigma) = (weighted_norm(f, &space)?, weighted_norm(g, &space)?);
    let (f_one_rho, g_one_rho) = (weighted_l1(f, &rho)?, weighted_l1(g, &rho)?);
    let rhs = consts.c * consts.m * (f_one_rho * g_phi_sigma + f_phi_sigma * g_one_rho);
    let containment_pass = le_with_slack(f_one_rho, f_phi_sigma * consts.psi_norm_inv_omega)
        && le_with_slack(g_one_rho, g_phi_sigma * consts.psi_norm_inv_omega);
    Ok(DifferentialReport {
        constants: consts.clone(),
        lhs,
        f_phi_sigma,
        g_phi_sigma,
        f_one_rho,
        g_one_rho,
        rhs,
        containment_pass,
        margin: rhs - lhs,
        pass: containment_pass && le_with_slack(lhs, rhs),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormChoice {
    /// `‖·‖_{Φ,σ}`
    PhiSigma,
    /// `‖·‖_{1,ρ}`
    OneRho,
}

/// `‖f^{⋆n}‖^{1/n}` for `n = 1..=n_max`, under the context cocycle.
pub fn spectral_radius_estimate(
    f: &SupportedFunction,
    ctx: &AlgebraContext,
    norm: NormChoice,
    n_max: u32,
) -> Result<Vec<f64>> {
    spectral_radius_estimate_with(f, ctx, norm, n_max, SUPPORT_CAP)
}

pub fn spectral_radius_estimate_with(
    f: &SupportedFunction,
    ctx: &AlgebraContext,
    norm: NormChoice,
    n_max: u32,
    support_cap: usize,
) -> Result<Vec<f64>> {
    if n_max < 2 {
        return Err(Error::Parameter("n_max must be at least 2".into()));
    }
    let space = ctx.space();
    let rho = ctx.rho()?;
    let measure = |h: &SupportedFunction| -> Result<f64> {
        match norm {
            NormChoice::PhiSigma => weighted_norm(h, &space),
            NormChoice::OneRho => match &rho {
                Some(r) => weighted_l1(h, r),
                None => Ok(h.l1_norm()),
            },
        }
    };
    // powers are kept normalized in ℓ¹ with the scale tracked in log space
    let mut power = f.clone();
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            power = twisted_convolve(&power, f, &ctx.cocycle)?;
        }
        if power.len() > support_cap {
            return Err(Error::SupportBudget { size: power.len(), cap: support_cap });
        }
        let l1 = power.l1_norm();
        if l1 == 0.0 {
            out.push(0.0);
            continue;
        }
        power = power.scale(Complex64::new(1.0 / l1, 0.0));
        log_scale += l1.ln();
        out.push(((measure(&power)?.ln() + log_scale) / n as f64).exp());
    }
    Ok(out)
}

/// Matrix of `x ↦ h ⋆_Ω x` on `ℓ²(G)` in the δ-basis, with basis order
/// given by `Group::elements`.
pub fn regular_representation(h: &SupportedFunction, omega: &Cocycle) -> Result<DMatrix<Complex64>> {
    let g = h.group();
    g.ensure_same(omega.group())?;
    let elements = g.elements()?;
    let index: BTreeMap<&Elem, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (j, x) in elements.iter().enumerate() {
        for (s, v) in h.iter() {
            let i = index[&g.op(s, x)];
            m[(i, j)] += v * omega.eval(s, x)?;
        }
    }
    Ok(m)
}

pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().schur().eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

/// Largest eigenvalue modulus of left multiplication by `f` on a finite group.
pub fn exact_spectral_radius(f: &SupportedFunction, omega: &Cocycle) -> Result<f64> {
    Ok(eigenvalues(&regular_representation(f, omega)?).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub order: usize,
    /// `‖h‖₁` for `h = f* ⋆ f`
    pub h_norm: f64,
    pub min_real: f64,
    pub max_imag: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Default relative eigenvalue tolerance.
pub const EIGEN_TOL: f64 = 1e-8;

pub fn finite_symmetry_check(f: &SupportedFunction, ctx: &AlgebraContext) -> Result<SymmetryReport> {
    finite_symmetry_check_with(f, ctx, EIGEN_TOL)
}

/// Spectrum of left multiplication by `h = f* ⋆ f` on the finite group;
/// passes when every eigenvalue lies within `tol·‖h‖₁` of `[0, ∞)`.
pub fn finite_symmetry_check_with(f: &SupportedFunction, ctx: &AlgebraContext, tol: f64) -> Result<SymmetryReport> {
    let g = f.group();
    let order = g.order().ok_or_else(|| Error::InfiniteGroup(g.spec().to_string()))?;
    let phase = &ctx.cocycle;
    let elements = g.elements()?;
    for s in &elements {
        for t in &elements {
            unimodular(phase.eval(s, t)?, s, t)?;
        }
    }
    let h = twisted_convolve(&involution(f, phase)?, f, phase)?;
    let h_norm = h.l1_norm();
    let eig = eigenvalues(&regular_representation(&h, phase)?);
    let min_real = eig.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_imag = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let bound = tol * h_norm;
    Ok(SymmetryReport {
        order,
        h_norm,
        min_real,
        max_imag,
        tolerance: bound,
        pass: min_real >= -bound && max_imag <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::{bicharacter_cocycle, coboundary_from_weight};
    use crate::groups::{elem, Group};
    use crate::weights::make_poly_weight;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn point_masses() {
        let z = Group::parse("Z^d:1").unwrap();
        let one = Cocycle::one(&z);
        let d1 = SupportedFunction::delta(&z, elem(&[1])).unwrap();
        let d2 = SupportedFunction::delta(&z, elem(&[2])).unwrap();
        assert_eq!(twisted_convolve(&d1, &d2, &one).unwrap(), SupportedFunction::delta(&z, elem(&[3])).unwrap());

        let z2 = Group::parse("Z^d:2").unwrap();
        let b = bicharacter_cocycle(&z2, 0.3).unwrap();
        let a = SupportedFunction::delta(&z2, elem(&[0, 1])).unwrap();
        let e = SupportedFunction::delta(&z2, elem(&[1, 0])).unwrap();
        let r = twisted_convolve(&a, &e, &b).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.get(&elem(&[1, 1])) - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert_eq!(twisted_convolve(&e, &a, &b).unwrap().get(&elem(&[1, 1])), c(1.0, 0.0));
    }

    #[test]
    fn identity_and_delta_actions() {
        let z2 = Group::parse("Z^d:2").unwrap();
        let b = bicharacter_cocycle(&z2, 1.1).unwrap();
        let f = SupportedFunction::from_entries(
            &z2,
            [(elem(&[1, 2]), c(0.5, -1.0)), (elem(&[-3, 0]), c(2.0, 0.25)), (elem(&[0, -1]), c(-1.0, 0.0))],
        )
        .unwrap();
        let id = SupportedFunction::delta(&z2, z2.identity()).unwrap();
        assert_eq!(twisted_convolve(&id, &f, &b).unwrap(), f);
        assert_eq!(twisted_convolve(&f, &id, &b).unwrap(), f);
        let s = elem(&[2, -1]);
        let ds = SupportedFunction::delta(&z2, s.clone()).unwrap();
        assert_eq!(delta_action(&s, &f, &b, Side::Left).unwrap(), twisted_convolve(&ds, &f, &b).unwrap());
        assert_eq!(delta_action(&s, &f, &b, Side::Right).unwrap(), twisted_convolve(&f, &ds, &b).unwrap());
        assert_eq!(delta_action(&z2.identity(), &f, &b, Side::Left).unwrap(), f);
    }

    #[test]
    fn involution_of_point_mass() {
        let z2 = Group::parse("Z^d:2").unwrap();
        let b = bicharacter_cocycle(&z2, 0.9).unwrap();
        let s = elem(&[2, 3]);
        let d = SupportedFunction::delta(&z2, s.clone()).unwrap();
        let star = involution(&d, &b).unwrap();
        let si = z2.inv(&s);
        let expected = b.eval(&si, &s).unwrap().conj();
        assert!((star.get(&si) - expected).norm() < 1e-15);
        assert!((involution(&star, &b).unwrap().get(&s) - c(1.0, 0.0)).norm() < 1e-14);
        let cob = coboundary_from_weight(&make_poly_weight(&z2, 1.0).unwrap());
        assert!(matches!(involution(&d, &cob), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn spectral_radius_of_shift() {
        let z5 = Group::parse("Zn:5").unwrap();
        let one = Cocycle::one(&z5);
        let ctx = AlgebraContext::new(one.clone(), YoungPair::parse("Lp:2").unwrap());
        let d = SupportedFunction::delta(&z5, elem(&[1])).unwrap();
        let seq = spectral_radius_estimate(&d, &ctx, NormChoice::OneRho, 12).unwrap();
        assert!(seq.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!((exact_spectral_radius(&d, &one).unwrap() - 1.0).abs() < 1e-12);
        let scaled = SupportedFunction::point(&z5, z5.identity(), c(0.0, -3.0)).unwrap();
        let seq = spectral_radius_estimate(&scaled, &ctx, NormChoice::OneRho, 6).unwrap();
        assert!(seq.iter().all(|v| (v - 3.0).abs() < 1e-12));
        let z = Group::parse("Z^d:1").unwrap();
        let ctxz = AlgebraContext::new(Cocycle::one(&z), YoungPair::parse("Lp:2").unwrap());
        let spread = SupportedFunction::from_entries(&z, (-2..=2).map(|i| (elem(&[i]), c(1.0, 0.0)))).unwrap();
        assert!(matches!(
            spectral_radius_estimate_with(&spread, &ctxz, NormChoice::OneRho, 10, 20),
            Err(Error::SupportBudget { .. })
        ));
    }

    #[test]
    fn symmetry_of_identity() {
        let z4 = Group::parse("Zn:4").unwrap();
        let b = bicharacter_cocycle(&z4, std::f64::consts::FRAC_PI_2).unwrap();
        let ctx = AlgebraContext::new(b, YoungPair::parse("Lp:2").unwrap());
        let id = SupportedFunction::delta(&z4, z4.identity()).unwrap();
        let r = finite_symmetry_check(&id, &ctx).unwrap();
        assert!(r.pass && (r.min_real - 1.0).abs() < 1e-12, "{r:?}");
        let z = Group::parse("Z^d:1").unwrap();
        let ctxz = AlgebraContext::new(Cocycle::one(&z), YoungPair::parse("Lp:2").unwrap());
        let dz = SupportedFunction::delta(&z, z.identity()).unwrap();
        assert!(matches!(finite_symmetry_check(&dz, &ctxz), Err(Error::InfiniteGroup(_))));
    }
}
