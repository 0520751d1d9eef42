//! Functions supported on a dyadic root, stored as mean plus a sparse Haar
//! spectrum, and the leaf-value representation they convert to and from.

use std::collections::BTreeMap;

use rand::Rng;

use crate::dyadic::{meet, DyadicInterval, Sign};
use crate::error::{Error, Result};
use crate::scalar::{Amplitude, Sqrt2Scalar};

/// Piecewise-constant values on the `2^depth` leaves of `root`, left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafVector<S> {
    root: DyadicInterval,
    depth: u32,
    values: Vec<S>,
}

impl<S: Amplitude> LeafVector<S> {
    pub fn new(root: DyadicInterval, depth: u32, values: Vec<S>) -> Result<Self> {
        let expected = 1usize << depth;
        if values.len() != expected {
            return Err(Error::LeafCount { expected, got: values.len() });
        }
        Ok(Self { root, depth, values })
    }

    pub fn root(&self) -> DyadicInterval {
        self.root
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn leaf_scale(&self) -> i32 {
        self.root.scale() - self.depth as i32
    }

    pub fn leaf(&self, j: usize) -> DyadicInterval {
        DyadicInterval::leaf(&self.root, self.depth, j)
    }

    /// `Σ v_j² · |leaf|`.
    pub fn norm2(&self) -> S {
        let sum = self
            .values
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone() * v.clone());
        sum.mul_sqrt2_pow(2 * self.leaf_scale() as i64)
    }

    pub fn to_f64(&self) -> LeafVector<f64> {
        LeafVector {
            root: self.root,
            depth: self.depth,
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }
}

/// `f = ⟨f⟩_I·1_I + Σ_J f̂(J) h_J` with `J ⊆ I` and `|J| ≥ 2·(leaf size)`.
///
/// Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicFunction<S> {
    root: DyadicInterval,
    depth: u32,
    mean: S,
    coefficients: BTreeMap<DyadicInterval, S>,
}

pub type ExactFunction = DyadicFunction<Sqrt2Scalar>;

impl<S: Amplitude> DyadicFunction<S> {
    pub fn zero(root: DyadicInterval, depth: u32) -> Self {
        Self {
            root,
            depth,
            mean: S::zero(),
            coefficients: BTreeMap::new(),
        }
    }

    /// Builds a function from its parts, rejecting coefficients that do not
    /// fit the tree.
    pub fn from_parts(
        root: DyadicInterval,
        depth: u32,
        mean: S,
        coefficients: impl IntoIterator<Item = (DyadicInterval, S)>,
    ) -> Result<Self> {
        let mut f = Self::zero(root, depth);
        f.mean = mean;
        for (j, c) in coefficients {
            if !f.admits(&j) {
                return Err(Error::Misaligned {
                    interval: j,
                    root,
                    leaf_scale: f.leaf_scale(),
                });
            }
            f.add_coefficient(j, c);
        }
        Ok(f)
    }

    pub fn root(&self) -> DyadicInterval {
        self.root
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn mean(&self) -> &S {
        &self.mean
    }

    pub fn coefficients(&self) -> &BTreeMap<DyadicInterval, S> {
        &self.coefficients
    }

    pub fn coefficient(&self, j: &DyadicInterval) -> S {
        self.coefficients.get(j).cloned().unwrap_or_else(S::zero)
    }

    pub fn leaf_scale(&self) -> i32 {
        self.root.scale() - self.depth as i32
    }

    /// Whether `h_J` belongs to this tree.
    pub fn admits(&self, j: &DyadicInterval) -> bool {
        self.root.contains(j) && j.scale() > self.leaf_scale()
    }

    fn add_coefficient(&mut self, j: DyadicInterval, c: S) {
        let sum = match self.coefficients.remove(&j) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coefficients.insert(j, sum);
        }
    }

    /// `⟨f⟩_I²|I| + Σ|f̂(J)|²`.
    pub fn norm2(&self) -> S {
        let mean_part = (self.mean.clone() * self.mean.clone()).mul_sqrt2_pow(2 * self.root.scale() as i64);
        self.coefficients
            .values()
            .fold(mean_part, |acc, c| acc + c.clone() * c.clone())
    }

    /// Bottom-up cascade: averages of sibling pairs and their scaled
    /// differences.
    pub fn analyze(v: &LeafVector<S>) -> Self {
        let mut f = Self::zero(v.root, v.depth);
        let mut level: Vec<S> = v.values.clone();
        for d in (0..v.depth).rev() {
            let scale = v.root.scale() - d as i32;
            let mut next = Vec::with_capacity(level.len() / 2);
            for (j, pair) in level.chunks_exact(2).enumerate() {
                let (lo, hi) = (pair[0].clone(), pair[1].clone());
                // f̂(J) = |J|^{1/2}/2 · (avg_+ − avg_−), avg_J = (avg_− + avg_+)/2
                let coef = (hi.clone() - lo.clone()).mul_sqrt2_pow(scale as i64 - 2);
                let avg = (lo + hi).mul_sqrt2_pow(-2);
                f.add_coefficient(DyadicInterval::leaf(&v.root, d, j), coef);
                next.push(avg);
            }
            level = next;
        }
        f.mean = level.pop().expect("one value remains at the root");
        f
    }

    /// Top-down inverse cascade.
    pub fn synthesize(&self) -> LeafVector<S> {
        let mut level = vec![self.mean.clone()];
        for d in 0..self.depth {
            let scale = self.root.scale() - d as i32;
            let mut next = Vec::with_capacity(level.len() * 2);
            for (j, avg) in level.into_iter().enumerate() {
                let jv = DyadicInterval::leaf(&self.root, d, j);
                match self.coefficients.get(&jv) {
                    Some(c) => {
                        let step = c.mul_sqrt2_pow(-(scale as i64));
                        next.push(avg.clone() - step.clone());
                        next.push(avg + step);
                    }
                    None => {
                        next.push(avg.clone());
                        next.push(avg);
                    }
                }
            }
            level = next;
        }
        LeafVector {
            root: self.root,
            depth: self.depth,
            values: level,
        }
    }

    /// Average of `f` over `K ⊆ root`, where `K` is a union of leaves.
    pub fn average_on(&self, k: &DyadicInterval) -> Result<S> {
        self.check_aligned(k)?;
        let mut avg = self.mean.clone();
        for j in k.ancestors_up_to(&self.root) {
            if let Some(c) = self.coefficients.get(&j) {
                avg = avg + signed_amplitude(c, &j, k);
            }
        }
        Ok(avg)
    }

    fn check_aligned(&self, k: &DyadicInterval) -> Result<()> {
        if !self.root.contains(k) || k.scale() < self.leaf_scale() {
            return Err(Error::Misaligned {
                interval: *k,
                root: self.root,
                leaf_scale: self.leaf_scale(),
            });
        }
        Ok(())
    }

    /// Same function in a larger tree; requires `new_root ⊇ root` and a depth
    /// that keeps the leaf scale at or below the current one.
    pub fn embed(&self, new_root: DyadicInterval, new_depth: u32) -> Result<Self> {
        if !new_root.contains(&self.root) {
            return Err(Error::IncompatibleRoots(self.root, new_root));
        }
        let lift = (new_root.scale() - self.root.scale()) as u32;
        let required = self.depth + lift;
        if new_depth < required {
            return Err(Error::InsufficientDepth {
                requested: new_depth,
                required,
            });
        }
        let mut g = Self::zero(new_root, new_depth);
        for (j, c) in &self.coefficients {
            g.coefficients.insert(*j, c.clone());
        }
        if !self.mean.is_zero() {
            let si = self.root.scale() as i64;
            // ⟨f⟩|I| h_L(I) for I ⊊ L ⊆ new_root
            for l in self.root.ancestors_up_to(&new_root) {
                let mag = self.mean.mul_sqrt2_pow(2 * si - l.scale() as i64);
                let term = match child_side(&l, &self.root) {
                    Sign::Plus => mag,
                    Sign::Minus => -mag,
                };
                g.add_coefficient(l, term);
            }
            g.mean = self.mean.mul_sqrt2_pow(2 * (si - new_root.scale() as i64));
        }
        Ok(g)
    }

    /// `1_K f` re-expressed on root `K`.
    pub fn restrict(&self, k: &DyadicInterval) -> Result<Self> {
        self.check_aligned(k)?;
        let depth = self.depth - (self.root.scale() - k.scale()) as u32;
        let mut g = Self::zero(*k, depth);
        g.mean = self.average_on(k)?;
        for (j, c) in self.coefficients.range(..) {
            if k.contains(j) {
                g.coefficients.insert(*j, c.clone());
            }
        }
        Ok(g)
    }

    /// Same function with more leaves per root.
    pub fn refine(&self, new_depth: u32) -> Result<Self> {
        self.embed(self.root, new_depth)
    }

    /// `⟨f, g⟩`, computed on the spectrum after embedding both in their meet.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        let common = meet(&self.root, &other.root)
            .ok_or(Error::IncompatibleRoots(self.root, other.root))?;
        let a = self.embed_loose(common)?;
        let b = other.embed_loose(common)?;
        let mean_part = (a.mean.clone() * b.mean.clone()).mul_sqrt2_pow(2 * common.scale() as i64);
        let coef_part = a.coefficients.iter().fold(S::zero(), |acc, (j, c)| match b.coefficients.get(j) {
            Some(d) => acc + c.clone() * d.clone(),
            None => acc,
        });
        Ok(mean_part + coef_part)
    }

    fn embed_loose(&self, root: DyadicInterval) -> Result<Self> {
        let lift = (root.scale() - self.root.scale()) as u32;
        self.embed(root, self.depth + lift)
    }

    pub fn scaled(&self, s: &S) -> Self {
        let mut g = Self::zero(self.root, self.depth);
        g.mean = self.mean.clone() * s.clone();
        for (j, c) in &self.coefficients {
            g.add_coefficient(*j, c.clone() * s.clone());
        }
        g
    }

    /// Sum of two functions on the same root (the deeper depth wins).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.root != other.root {
            return Err(Error::IncompatibleRoots(self.root, other.root));
        }
        let mut g = Self::zero(self.root, self.depth.max(other.depth));
        g.mean = self.mean.clone() + other.mean.clone();
        for (j, c) in self.coefficients.iter().chain(other.coefficients.iter()) {
            g.add_coefficient(*j, c.clone());
        }
        Ok(g)
    }

    /// `f` with the mean removed.
    pub fn zero_mean_part(&self) -> Self {
        let mut g = self.clone();
        g.mean = S::zero();
        g
    }

    pub fn map<T: Amplitude>(&self, op: impl Fn(&S) -> T) -> DyadicFunction<T> {
        DyadicFunction {
            root: self.root,
            depth: self.depth,
            mean: op(&self.mean),
            coefficients: self
                .coefficients
                .iter()
                .map(|(j, c)| (*j, op(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> DyadicFunction<f64> {
        self.map(|c| c.to_f64())
    }
}

impl DyadicFunction<Sqrt2Scalar> {
    /// `1_I` on root `I`, depth 0.
    pub fn indicator(i: DyadicInterval) -> Self {
        let mut f = Self::zero(i, 0);
        f.mean = Sqrt2Scalar::one();
        f
    }

    /// `h_I` on root `I`, depth 1.
    pub fn haar(i: DyadicInterval) -> Self {
        let mut f = Self::zero(i, 1);
        f.coefficients.insert(i, Sqrt2Scalar::one());
        f
    }

    /// Pseudorandom function with small integer leaf values in `[-range, range]`.
    pub fn random<R: Rng>(root: DyadicInterval, depth: u32, range: i64, rng: &mut R) -> Self {
        let values = (0..1usize << depth)
            .map(|_| Sqrt2Scalar::from_integer(rng.random_range(-range..=range)))
            .collect();
        Self::analyze(&LeafVector::new(root, depth, values).expect("length matches"))
    }
}

/// Which child of `l` holds `k` (`k ⊊ l` assumed).
pub(crate) fn child_side(l: &DyadicInterval, k: &DyadicInterval) -> Sign {
    k.ancestor_at(l.scale() - 1).expect("k lies strictly below l").child_sign()
}

/// `c · h_J(K)` for `K ⊊ J`.
fn signed_amplitude<S: Amplitude>(c: &S, j: &DyadicInterval, k: &DyadicInterval) -> S {
    let mag = c.mul_sqrt2_pow(-(j.scale() as i64));
    match child_side(j, k) {
        Sign::Plus => mag,
        Sign::Minus => -mag,
    }
}
