//! Discrete groups given by a symmetric generating set, with word metrics and
//! ball enumeration by breadth-first search over the Cayley graph.
//!
//! Counting measure is the Haar measure throughout, so every group here is
//! unimodular and the modular function is identically one.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::optimize::linear_fit;

/// Canonical integer-tuple representation of a group element.
pub type Elem = SmallVec<[i64; 4]>;

pub fn elem(coords: &[i64]) -> Elem {
    SmallVec::from_slice(coords)
}

/// The multiplication table of a group together with its generating set.
///
/// Implementations must return canonical representatives so that equality and
/// hashing on [`Elem`] are exact.
pub trait GroupLaw: Send + Sync {
    fn spec(&self) -> String;
    fn identity(&self) -> Elem;
    fn op(&self, a: &Elem, b: &Elem) -> Elem;
    fn inv(&self, a: &Elem) -> Elem;
    /// Symmetric generating set: `u` in the set implies `inv(u)` is too.
    fn generators(&self) -> Vec<Elem>;
    fn contains(&self, a: &Elem) -> bool;

    fn order(&self) -> Option<usize> {
        None
    }

    /// Word length in closed form, when known. Must agree with BFS.
    fn word_length_closed_form(&self, _a: &Elem) -> Option<u32> {
        None
    }

    /// Number of elements of word length exactly `n`, when known.
    fn sphere_size_closed_form(&self, _n: u32) -> Option<u64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfsLimits {
    pub max_radius: u32,
    pub max_elements: usize,
}

impl Default for BfsLimits {
    fn default() -> Self {
        BfsLimits { max_radius: 64, max_elements: 5_000_000 }
    }
}

/// BFS layers of the Cayley graph: `layers[n]` holds the elements of word
/// length exactly `n`, and `sizes[n]` is the cumulative count λ(Uⁿ).
#[derive(Debug, Clone)]
pub struct BallTable {
    layers: Vec<Vec<Elem>>,
    index: HashMap<Elem, u32>,
    sizes: Vec<u64>,
    saturated: bool,
}

impl BallTable {
    fn seed(id: Elem) -> Self {
        let mut index = HashMap::new();
        index.insert(id.clone(), 0);
        BallTable { layers: vec![vec![id]], index, sizes: vec![1], saturated: false }
    }

    /// Builds the table up to `radius` for `group`, respecting its limits.
    pub fn build(group: &Group, radius: u32) -> Result<Self> {
        let mut table = BallTable::seed(group.identity());
        table.extend_to(group, radius)?;
        Ok(table)
    }

    fn extend_to(&mut self, group: &Group, radius: u32) -> Result<()> {
        let limits = group.limits();
        if radius > limits.max_radius {
            return Err(Error::RadiusCap { radius, cap: limits.max_radius });
        }
        let gens = group.generators();
        while self.radius() < radius && !self.saturated {
            let n = self.layers.len() as u32;
            let mut next = Vec::new();
            for g in self.layers.last().expect("nonempty") {
                for u in gens {
                    let h = group.op(g, u);
                    if !self.index.contains_key(&h) {
                        self.index.insert(h.clone(), n);
                        next.push(h);
                    }
                }
            }
            if self.index.len() > limits.max_elements {
                return Err(Error::ElementCapExceeded { cap: limits.max_elements, radius: n });
            }
            if next.is_empty() {
                self.saturated = true;
                break;
            }
            let total = self.sizes.last().copied().unwrap_or(0) + next.len() as u64;
            self.layers.push(next);
            self.sizes.push(total);
        }
        Ok(())
    }

    /// Largest radius whose layer has been computed.
    pub fn radius(&self) -> u32 {
        self.layers.len() as u32 - 1
    }

    /// True when BFS has exhausted a finite group.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn layer(&self, n: u32) -> &[Elem] {
        self.layers.get(n as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn layers(&self) -> &[Vec<Elem>] {
        &self.layers
    }

    /// Cumulative sizes λ(U⁰), λ(U¹), … up to the table radius.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn length_of(&self, g: &Elem) -> Option<u32> {
        self.index.get(g).copied()
    }
}

struct GroupInner {
    law: Box<dyn GroupLaw>,
    spec: String,
    generators: Vec<Elem>,
    limits: BfsLimits,
    table: RwLock<Arc<BallTable>>,
}

/// A finitely generated discrete group with a memoized word metric.
///
/// Cheap to clone; clones share the BFS cache.
#[derive(Clone)]
pub struct Group {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("spec", &self.inner.spec).finish()
    }
}

impl Group {
    pub fn new(law: impl GroupLaw + 'static) -> Self {
        Self::with_limits(law, BfsLimits::default())
    }

    pub fn with_limits(law: impl GroupLaw + 'static, limits: BfsLimits) -> Self {
        let spec = law.spec();
        let generators = law.generators();
        let seed = BallTable::seed(law.identity());
        Group {
            inner: Arc::new(GroupInner {
                law: Box::new(law),
                spec,
                generators,
                limits,
                table: RwLock::new(Arc::new(seed)),
            }),
        }
    }

    /// Parses `Z^d:{d}`, `H3`, `Zn:{n}` (or `Zn:{n1}x{n2}…` for a direct
    /// product of cyclic groups) and `Block:{N}`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::parse_with_limits(spec, BfsLimits::default())
    }

    pub fn parse_with_limits(spec: &str, limits: BfsLimits) -> Result<Self> {
        let spec = spec.trim();
        let bad = |why: &str| Error::spec(spec, why);
        if spec == "H3" {
            return Ok(Group::with_limits(Heisenberg, limits));
        }
        let (head, arg) = spec.split_once(':').ok_or_else(|| bad("expected `<kind>:<param>` or `H3`"))?;
        match head {
            "Z^d" => {
                let d: usize = arg.parse().map_err(|_| bad("dimension must be a positive integer"))?;
                if d == 0 {
                    return Err(bad("dimension must be positive"));
                }
                Ok(Group::with_limits(IntegerLattice { dim: d }, limits))
            }
            "Zn" => {
                let moduli = arg
                    .split('x')
                    .map(|m| m.parse::<i64>().ok().filter(|&m| m >= 1))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad("moduli must be positive integers"))?;
                Ok(Group::with_limits(CyclicProduct { moduli }, limits))
            }
            "Block" => {
                let n: usize = arg.parse().map_err(|_| bad("block count must be an integer"))?;
                if n == 0 || n > 62 {
                    return Err(bad("block count must be in 1..=62"));
                }
                Ok(Group::with_limits(BlockGroup { blocks: n }, limits))
            }
            _ => Err(bad("unknown group kind")),
        }
    }

    pub fn spec(&self) -> &str {
        &self.inner.spec
    }

    pub fn limits(&self) -> BfsLimits {
        self.inner.limits
    }

    pub fn law(&self) -> &dyn GroupLaw {
        self.inner.law.as_ref()
    }

    pub fn identity(&self) -> Elem {
        self.inner.law.identity()
    }

    pub fn op(&self, a: &Elem, b: &Elem) -> Elem {
        self.inner.law.op(a, b)
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        self.inner.law.inv(a)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.inner.generators
    }

    pub fn contains(&self, a: &Elem) -> bool {
        self.inner.law.contains(a)
    }

    pub fn validate(&self, a: &Elem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::InvalidElement { group: self.spec().to_string(), element: a.to_vec() })
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.inner.law.order()
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    /// Same group (by canonical spec).
    pub fn same_as(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.spec() == other.spec()
    }

    pub fn ensure_same(&self, other: &Group) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch { left: self.spec().to_string(), right: other.spec().to_string() })
        }
    }

    pub fn pow(&self, g: &Elem, n: u64) -> Elem {
        // square-and-multiply; the group need not be abelian but powers of one element commute
        let mut result = self.identity();
        let mut base = g.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = self.op(&result, &base);
            }
            base = self.op(&base, &base);
            n >>= 1;
        }
        result
    }

    /// Returns a BFS table covering at least `radius` (or the whole group).
    pub fn ball_table(&self, radius: u32) -> Result<Arc<BallTable>> {
        {
            let cached = self.inner.table.read().expect("ball cache poisoned");
            if cached.radius() >= radius || cached.is_saturated() {
                return Ok(Arc::clone(&cached));
            }
        }
        let mut guard = self.inner.table.write().expect("ball cache poisoned");
        if guard.radius() < radius && !guard.is_saturated() {
            let mut grown = (**guard).clone();
            grown.extend_to(self, radius)?;
            *guard = Arc::new(grown);
        }
        Ok(Arc::clone(&guard))
    }

    /// Least `n` with `g ∈ Uⁿ`. Uses a closed form when the group provides one.
    pub fn word_length(&self, g: &Elem) -> Result<u32> {
        self.validate(g)?;
        if let Some(n) = self.inner.law.word_length_closed_form(g) {
            return Ok(n);
        }
        self.bfs_word_length(g)
    }

    /// Word length by breadth-first search only, growing the memoized layers
    /// until `g` appears, the group is exhausted, or the radius cap is hit.
    pub fn bfs_word_length(&self, g: &Elem) -> Result<u32> {
        {
            let cached = self.inner.table.read().expect("ball cache poisoned");
            if let Some(n) = cached.length_of(g) {
                return Ok(n);
            }
        }
        let max = self.limits().max_radius;
        let mut radius = self.inner.table.read().expect("ball cache poisoned").radius();
        loop {
            if radius >= max {
                return Err(Error::RadiusExceeded { element: g.to_vec(), radius: max });
            }
            radius = (radius + 1).max(radius * 2).min(max);
            let table = self.ball_table(radius)?;
            if let Some(n) = table.length_of(g) {
                return Ok(n);
            }
            if table.is_saturated() {
                return Err(Error::RadiusExceeded { element: g.to_vec(), radius: table.radius() });
            }
        }
    }

    /// Elements of word length at most `radius`, in BFS order.
    pub fn ball(&self, radius: u32) -> Result<Vec<Elem>> {
        let table = self.ball_table(radius)?;
        Ok(table.layers().iter().take(radius as usize + 1).flatten().cloned().collect())
    }

    /// Every element of a finite group, in BFS order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let order = self.order().ok_or_else(|| Error::InfiniteGroup(self.spec().to_string()))?;
        let table = self.ball_table(self.limits().max_radius)?;
        let all: Vec<Elem> = table.layers().iter().flatten().cloned().collect();
        debug_assert_eq!(all.len(), order);
        Ok(all)
    }

    /// Number of elements of word length exactly `n`.
    pub fn sphere_size(&self, n: u32) -> Result<u64> {
        if let Some(s) = self.inner.law.sphere_size_closed_form(n) {
            return Ok(s);
        }
        let table = self.ball_table(n)?;
        Ok(table.layer(n).len() as u64)
    }

    /// λ(U¹), …, λ(U^{n_max}) under counting measure.
    pub fn ball_sizes(&self, n_max: u32) -> Result<Vec<u64>> {
        if n_max == 0 {
            return Err(Error::Parameter("n_max must be at least 1".into()));
        }
        if self.inner.law.sphere_size_closed_form(0).is_some() {
            let mut total = 0u64;
            let mut out = Vec::with_capacity(n_max as usize);
            for n in 0..=n_max {
                total += self.inner.law.sphere_size_closed_form(n).expect("closed form");
                if n > 0 {
                    out.push(total);
                }
            }
            return Ok(out);
        }
        self.bfs_ball_sizes(n_max)
    }

    /// Ball sizes by BFS layer counting only.
    pub fn bfs_ball_sizes(&self, n_max: u32) -> Result<Vec<u64>> {
        let table = self.ball_table(n_max)?;
        let sizes = table.sizes();
        let last = *sizes.last().expect("nonempty");
        Ok((1..=n_max as usize).map(|n| sizes.get(n).copied().unwrap_or(last)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GrowthFit {
    pub degree: f64,
    pub residual: f64,
    /// First and last `n` of the fitted window.
    pub window: (usize, usize),
}

/// Least-squares slope of `log λ(Uⁿ)` against `log n` over the upper half of
/// the window; `sizes[i]` is λ(U^{i+1}).
pub fn growth_degree_estimate(sizes: &[u64]) -> Result<GrowthFit> {
    if sizes.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 ball sizes, got {}", sizes.len())));
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(Error::DegenerateFit("ball sizes must be positive".into()));
    }
    let start = sizes.len() / 2;
    let xs: Vec<f64> = (start..sizes.len()).map(|i| ((i + 1) as f64).ln()).collect();
    let ys: Vec<f64> = sizes[start..].iter().map(|&s| (s as f64).ln()).collect();
    let (degree, _, residual) = linear_fit(&xs, &ys);
    Ok(GrowthFit { degree, residual, window: (start + 1, sizes.len()) })
}

/// ℤᵈ with generators F = {−1, 0, 1}ᵈ.
#[derive(Debug, Clone)]
pub struct IntegerLattice {
    pub dim: usize,
}

impl GroupLaw for IntegerLattice {
    fn spec(&self) -> String {
        format!("Z^d:{}", self.dim)
    }
    fn identity(&self) -> Elem {
        SmallVec::from_elem(0, self.dim)
    }
    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn inv(&self, a: &Elem) -> Elem {
        a.iter().map(|x| -x).collect()
    }
    fn generators(&self) -> Vec<Elem> {
        let mut gens = vec![SmallVec::new()];
        for _ in 0..self.dim {
            gens = gens
                .into_iter()
                .flat_map(|g: Elem| {
                    [-1, 0, 1].into_iter().map(move |c| {
                        let mut h = g.clone();
                        h.push(c);
                        h
                    })
                })
                .collect();
        }
        gens
    }
    fn contains(&self, a: &Elem) -> bool {
        a.len() == self.dim
    }
    fn word_length_closed_form(&self, a: &Elem) -> Option<u32> {
        Some(a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u32)
    }
    fn sphere_size_closed_form(&self, n: u32) -> Option<u64> {
        let d = self.dim as u32;
        if n == 0 {
            return Some(1);
        }
        let n = n as u64;
        Some((2 * n + 1).pow(d) - (2 * n - 1).pow(d))
    }
}

/// Discrete Heisenberg group H₃(ℤ). The element `[a, b, c]` is the matrix
/// `[[1, a, c], [0, 1, b], [0, 0, 1]]`; generators are x, y and their inverses.
#[derive(Debug, Clone, Copy)]
pub struct Heisenberg;

impl GroupLaw for Heisenberg {
    fn spec(&self) -> String {
        "H3".into()
    }
    fn identity(&self) -> Elem {
        elem(&[0, 0, 0])
    }
    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        elem(&[a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]])
    }
    fn inv(&self, a: &Elem) -> Elem {
        elem(&[-a[0], -a[1], -a[2] + a[0] * a[1]])
    }
    fn generators(&self) -> Vec<Elem> {
        vec![elem(&[1, 0, 0]), elem(&[-1, 0, 0]), elem(&[0, 1, 0]), elem(&[0, -1, 0])]
    }
    fn contains(&self, a: &Elem) -> bool {
        a.len() == 3
    }
}

/// ℤ_{n₁} × … × ℤ_{n_k} with generators {0, ±e_i}.
#[derive(Debug, Clone)]
pub struct CyclicProduct {
    pub moduli: Vec<i64>,
}

impl GroupLaw for CyclicProduct {
    fn spec(&self) -> String {
        let m: Vec<String> = self.moduli.iter().map(i64::to_string).collect();
        format!("Zn:{}", m.join("x"))
    }
    fn identity(&self) -> Elem {
        SmallVec::from_elem(0, self.moduli.len())
    }
    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
    }
    fn inv(&self, a: &Elem) -> Elem {
        a.iter().zip(&self.moduli).map(|(x, m)| (-x).rem_euclid(*m)).collect()
    }
    fn generators(&self) -> Vec<Elem> {
        let mut gens = vec![self.identity()];
        for (i, &m) in self.moduli.iter().enumerate() {
            for step in [1, -1] {
                let mut g = self.identity();
                g[i] = (step as i64).rem_euclid(m);
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
        gens
    }
    fn contains(&self, a: &Elem) -> bool {
        a.len() == self.moduli.len() && a.iter().zip(&self.moduli).all(|(x, m)| (0..*m).contains(x))
    }
    fn order(&self) -> Option<usize> {
        Some(self.moduli.iter().product::<i64>() as usize)
    }
    fn word_length_closed_form(&self, a: &Elem) -> Option<u32> {
        Some(a.iter().zip(&self.moduli).map(|(x, m)| (*x).min(m - x) as u32).sum())
    }
}

/// ⊕_{i<N} ℤ₂ with the nested chain G_i = elements supported on the first i
/// coordinates. Generators are the unit vectors.
#[derive(Debug, Clone, Copy)]
pub struct BlockGroup {
    pub blocks: usize,
}

impl BlockGroup {
    /// Least `i` with `g ∈ G_i`, i.e. one past the highest nonzero coordinate.
    pub fn level(g: &Elem) -> usize {
        g.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1)
    }
}

impl GroupLaw for BlockGroup {
    fn spec(&self) -> String {
        format!("Block:{}", self.blocks)
    }
    fn identity(&self) -> Elem {
        SmallVec::from_elem(0, self.blocks)
    }
    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }
    fn inv(&self, a: &Elem) -> Elem {
        a.clone()
    }
    fn generators(&self) -> Vec<Elem> {
        (0..self.blocks)
            .map(|i| {
                let mut g = self.identity();
                g[i] = 1;
                g
            })
            .collect()
    }
    fn contains(&self, a: &Elem) -> bool {
        a.len() == self.blocks && a.iter().all(|&x| x == 0 || x == 1)
    }
    fn order(&self) -> Option<usize> {
        Some(1usize << self.blocks)
    }
    fn word_length_closed_form(&self, a: &Elem) -> Option<u32> {
        Some(a.iter().filter(|&&x| x == 1).count() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!(Group::parse("Z^d:2").unwrap().spec(), "Z^d:2");
        assert_eq!(Group::parse("H3").unwrap().spec(), "H3");
        assert_eq!(Group::parse("Zn:4").unwrap().order(), Some(4));
        assert_eq!(Group::parse("Zn:2x2").unwrap().order(), Some(4));
        assert_eq!(Group::parse("Block:6").unwrap().order(), Some(64));
        for bad in ["Z^d:0", "Zn:0", "Q:1", "Block:x", "", "Zn:3x"] {
            assert!(Group::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn identity_has_length_zero() {
        let g = Group::parse("Z^d:2").unwrap();
        assert_eq!(g.word_length(&elem(&[0, 0])).unwrap(), 0);
        assert_eq!(g.bfs_word_length(&elem(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn lattice_length_is_chebyshev() {
        let g = Group::parse("Z^d:2").unwrap();
        assert_eq!(g.bfs_word_length(&elem(&[3, -2])).unwrap(), 3);
        assert_eq!(g.word_length(&elem(&[3, -2])).unwrap(), 3);
    }

    #[test]
    fn cyclic_sizes_saturate() {
        let g = Group::parse("Zn:5").unwrap();
        assert_eq!(g.ball_sizes(6).unwrap(), vec![3, 5, 5, 5, 5, 5]);
        assert!(g.ball_table(10).unwrap().is_saturated());
    }

    #[test]
    fn radius_cap_is_an_error() {
        let limits = BfsLimits { max_radius: 3, max_elements: 1000 };
        let g = Group::with_limits(Heisenberg, limits);
        let far = elem(&[10, 0, 0]);
        assert!(matches!(g.word_length(&far), Err(Error::RadiusExceeded { .. })));
        let tight = BfsLimits { max_radius: 64, max_elements: 50 };
        let g = Group::with_limits(Heisenberg, tight);
        assert!(matches!(g.ball(6), Err(Error::ElementCapExceeded { .. })));
    }

    #[test]
    fn invalid_elements_rejected() {
        let g = Group::parse("Zn:4").unwrap();
        assert!(g.word_length(&elem(&[4])).is_err());
        assert!(g.word_length(&elem(&[1, 1])).is_err());
    }

    #[test]
    fn degenerate_fit() {
        assert!(growth_degree_estimate(&[1, 2]).is_err());
        let fit = growth_degree_estimate(&[5, 5, 5, 5, 5]).unwrap();
        assert!(fit.degree.abs() < 1e-12);
    }

    #[test]
    fn block_level() {
        assert_eq!(BlockGroup::level(&elem(&[0, 0, 0])), 0);
        assert_eq!(BlockGroup::level(&elem(&[1, 0, 0])), 1);
        assert_eq!(BlockGroup::level(&elem(&[1, 1, 0])), 2);
        assert_eq!(BlockGroup::level(&elem(&[0, 0, 1])), 3);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let g = Group::parse("H3").unwrap();
        let x = elem(&[1, 2, -1]);
        let mut acc = g.identity();
        for n in 0..9u64 {
            assert_eq!(g.pow(&x, n), acc);
            acc = g.op(&acc, &x);
        }
    }
}
