//! Reference implementations used as test oracles. These are written
//! directly from the definitions, without going through the library.

#![allow(dead_code)]

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;

/// A function on `ℤ^d` or a finite abelian group as a coordinate map.
pub type Table = HashMap<Vec<i64>, Complex64>;

pub fn add(a: &[i64], b: &[i64], modulus: Option<&[i64]>) -> Vec<i64> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| match modulus {
            Some(m) => (x + y).rem_euclid(m[i]),
            None => x + y,
        })
        .collect()
}

pub fn neg(a: &[i64], modulus: Option<&[i64]>) -> Vec<i64> {
    a.iter()
        .enumerate()
        .map(|(i, x)| match modulus {
            Some(m) => (-x).rem_euclid(m[i]),
            None => -x,
        })
        .collect()
}

/// `(f ⋆ g)(t) = Σ_s f(s) g(s⁻¹t) Ω(s, s⁻¹t)` on an abelian group, written as
/// a sum over pairs `(s, r)` with `t = s + r`.
pub fn convolve(f: &Table, g: &Table, omega: impl Fn(&[i64], &[i64]) -> Complex64, modulus: Option<&[i64]>) -> Table {
    let mut out = Table::new();
    for (s, a) in f {
        for (r, b) in g {
            *out.entry(add(s, r, modulus)).or_default() += a * b * omega(s, r);
        }
    }
    out.retain(|_, v| *v != Complex64::new(0.0, 0.0));
    out
}

pub fn l1(f: &Table) -> f64 {
    f.values().map(|v| v.norm()).sum()
}

pub fn l2(f: &Table) -> f64 {
    f.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `Φ(x) = x²/2`: Luxemburg norm `‖a‖₂/√2`, Orlicz norm `√2 ‖a‖₂`.
pub fn lp2_luxemburg(f: &Table) -> f64 {
    l2(f) / 2f64.sqrt()
}

pub fn lp2_orlicz(f: &Table) -> f64 {
    l2(f) * 2f64.sqrt()
}

pub fn diff_l1(a: &Table, b: &Table) -> f64 {
    let mut keys: Vec<&Vec<i64>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().map(|k| (a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default()).norm()).sum()
}

/// `ℓ^∞` word length on `ℤ^d` with generators `{−1, 0, 1}^d`.
pub fn linf(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn random_table<R: Rng>(rng: &mut R, dim: usize, radius: i64, max_support: usize) -> Table {
    let k = rng.gen_range(1..=max_support);
    let mut t = Table::new();
    while t.len() < k {
        let s: Vec<i64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        t.insert(s, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    t
}

pub fn to_function(g: &twisted_orlicz::Group, t: &Table) -> twisted_orlicz::orlicz::SupportedFunction {
    twisted_orlicz::orlicz::SupportedFunction::from_entries(
        g,
        t.iter().map(|(k, v)| (twisted_orlicz::elem(k), *v)),
    )
    .expect("valid table")
}

pub fn to_table(f: &twisted_orlicz::orlicz::SupportedFunction) -> Table {
    f.iter().map(|(k, v)| (k.to_vec(), *v)).collect()
}
