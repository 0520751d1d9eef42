//! The Haar shift `Шh_I = (h_{I_+} − h_{I_−})/√2` and exact closed forms
//! for `1_K Ш f`.
//!
//! The mean part of `f` reaches every interval of its half-line through the
//! ancestors of its support. Those ancestor series are summed exactly: a
//! finite walk up to the first zero-anchored ancestor past which every term
//! has the same sign pattern, then a geometric tail.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dyadic::{epsilon_child, shift_haar_sign, DyadicInterval, HalfLineSign, Sign};
use crate::error::{Error, Result};
use crate::haar::{child_side, DyadicFunction, ExactFunction};
use crate::scalar::{pow2, Amplitude, Sqrt2Scalar};

/// Relative position of the support `I` and the observation interval `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseClass {
    Equal,
    /// `K ⊊ I`.
    Interior,
    /// `I ⊊ K`.
    Covering,
    /// Disjoint, with a common dyadic ancestor.
    GapSameHalfLine,
    OppositeHalfLines,
}

impl CaseClass {
    pub fn name(self) -> &'static str {
        match self {
            CaseClass::Equal => "equal",
            CaseClass::Interior => "interior",
            CaseClass::Covering => "covering",
            CaseClass::GapSameHalfLine => "gap",
            CaseClass::OppositeHalfLines => "opposite-half-lines",
        }
    }
}

pub fn classify(i: &DyadicInterval, k: &DyadicInterval) -> CaseClass {
    if i.half_line() != k.half_line() {
        CaseClass::OppositeHalfLines
    } else if i == k {
        CaseClass::Equal
    } else if i.strictly_contains(k) {
        CaseClass::Interior
    } else if k.strictly_contains(i) {
        CaseClass::Covering
    } else {
        CaseClass::GapSameHalfLine
    }
}

/// `c·1_K + d·h_K + Σ_L e_L·Шh_L` with every `L ⊆ K`.
///
/// The three parts are mutually orthogonal, and the `Шh_L` are orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedShiftForm {
    pub k: DyadicInterval,
    pub constant: Sqrt2Scalar,
    pub haar: Sqrt2Scalar,
    pub inner: BTreeMap<DyadicInterval, Sqrt2Scalar>,
}

impl RestrictedShiftForm {
    pub fn zero(k: DyadicInterval) -> Self {
        Self {
            k,
            constant: Sqrt2Scalar::zero(),
            haar: Sqrt2Scalar::zero(),
            inner: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.haar.is_zero() && self.inner.is_empty()
    }

    /// `c²|K| + d² + Σ e_L²`.
    pub fn norm2(&self) -> Sqrt2Scalar {
        let mut n = self.constant.square().mul_sqrt2_pow(2 * self.k.scale() as i64);
        n += self.haar.square();
        for e in self.inner.values() {
            n += e.square();
        }
        n
    }

    fn add_inner(&mut self, l: DyadicInterval, e: Sqrt2Scalar) {
        let sum = match self.inner.remove(&l) {
            Some(old) => old + e,
            None => e,
        };
        if !sum.is_zero() {
            self.inner.insert(l, sum);
        }
    }

    pub fn scaled(&self, s: &Sqrt2Scalar) -> Self {
        let mut out = Self::zero(self.k);
        out.constant = &self.constant * s;
        out.haar = &self.haar * s;
        for (l, e) in &self.inner {
            out.add_inner(*l, e * s);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::Precondition(format!(
                "forms observed on different intervals {} and {}",
                self.k, other.k
            )));
        }
        let mut out = self.clone();
        out.constant += &other.constant;
        out.haar += &other.haar;
        for (l, e) in &other.inner {
            out.add_inner(*l, e.clone());
        }
        Ok(out)
    }

    /// `−R(form)` transported to `−K`, where `R` reflects about 0.
    pub fn reflected_negated(&self) -> Self {
        let mut out = Self::zero(self.k.reflect());
        out.constant = -&self.constant;
        out.haar = self.haar.clone();
        for (l, e) in &self.inner {
            out.add_inner(l.reflect(), -e);
        }
        out
    }

    /// Smallest depth below `K` at which the form is piecewise constant.
    pub fn min_depth(&self) -> u32 {
        let from_inner = self
            .inner
            .keys()
            .map(|l| (self.k.scale() - l.scale() + 2) as u32)
            .max()
            .unwrap_or(0);
        let from_haar = u32::from(!self.haar.is_zero());
        from_inner.max(from_haar)
    }

    /// The form as a function on root `K`.
    pub fn to_function(&self, depth: u32) -> Result<ExactFunction> {
        let required = self.min_depth();
        if depth < required {
            return Err(Error::InsufficientDepth { requested: depth, required });
        }
        let mut coefs: Vec<(DyadicInterval, Sqrt2Scalar)> = Vec::new();
        if !self.haar.is_zero() {
            coefs.push((self.k, self.haar.clone()));
        }
        for (l, e) in &self.inner {
            let (lm, lp) = l.children();
            let half = e.mul_sqrt2_pow(-1);
            coefs.push((lp, half.clone()));
            coefs.push((lm, -half));
        }
        DyadicFunction::from_parts(self.k, depth, self.constant.clone(), coefs)
    }
}

impl RestrictedShiftForm {
    /// Double-precision copy for fast pointwise evaluation.
    pub fn to_float(&self) -> FloatForm {
        FloatForm {
            k: self.k,
            constant: self.constant.to_f64(),
            haar: self.haar.to_f64(),
            inner: self.inner.iter().map(|(l, e)| (*l, e.to_f64())).collect(),
        }
    }

    /// Exact value on a subinterval `x ⊆ K` fine enough for the form to be
    /// constant there.
    pub fn value_on(&self, x: &DyadicInterval) -> Result<Sqrt2Scalar> {
        if x.scale() + self.min_depth() as i32 > self.k.scale() || !self.k.contains(x) {
            return Err(Error::Misaligned {
                interval: *x,
                root: self.k,
                leaf_scale: self.k.scale() - self.min_depth() as i32,
            });
        }
        let f = self.to_function(self.min_depth())?;
        let at = x.ancestor_at(f.leaf_scale()).expect("x is at or below the leaf scale");
        f.average_on(&at)
    }
}

/// A [`RestrictedShiftForm`] with `f64` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatForm {
    pub k: DyadicInterval,
    pub constant: f64,
    pub haar: f64,
    pub inner: Vec<(DyadicInterval, f64)>,
}

impl FloatForm {
    /// Value on `x ⊆ K`; `x` must be fine enough that every atom of the
    /// form is constant on it. Returns 0 outside `K`.
    pub fn value_on(&self, x: &DyadicInterval) -> f64 {
        if !self.k.contains(x) {
            return 0.0;
        }
        let mut v = self.constant;
        if self.haar != 0.0 && x.scale() < self.k.scale() {
            v += signed(child_side(&self.k, x)) * self.haar * 2f64.powf(-self.k.scale() as f64 / 2.0);
        }
        for (l, e) in &self.inner {
            if x.scale() <= l.scale() - 2 && l.contains(x) {
                let sign = shift_haar_sign(l, x).expect("x lies in a grandchild of L");
                v += signed(sign) * e * 2f64.powf(-l.scale() as f64 / 2.0);
            }
        }
        v
    }
}

fn signed(s: Sign) -> f64 {
    s.value() as f64
}

/// Dyadic rational accumulated as `Σ ±2^{-e}` with a single final division.
#[derive(Default)]
struct DyadicSum {
    terms: Vec<(i64, i64)>,
}

impl DyadicSum {
    fn push(&mut self, sign: i64, neg_exp: i64) {
        self.terms.push((sign, neg_exp));
    }

    fn value(&self) -> BigRational {
        let Some(max) = self.terms.iter().map(|t| t.1).max() else {
            return BigRational::zero();
        };
        let numer = self
            .terms
            .iter()
            .fold(BigInt::zero(), |acc, &(s, e)| acc + (BigInt::from(s) << (max - e) as u64));
        BigRational::from_integer(numer) * pow2(-max)
    }
}

/// `Σ_{L ⊋ base} h_L(I)·Шh_L(K)`.
///
/// Requires `I`, `K` in the same half-line, `base ⊋ K`, and `I` not
/// strictly above `base`. Terms with `I ⊄ L` vanish. Each surviving term is
/// `±1/|L|`, so the sum is rational.
pub fn ancestor_sum(i: &DyadicInterval, k: &DyadicInterval, base: &DyadicInterval) -> Result<BigRational> {
    if i.half_line() != k.half_line() {
        return Err(Error::OppositeHalfLines(*i, *k));
    }
    if !base.strictly_contains(k) {
        return Err(Error::InvalidBase {
            base: *base,
            reason: "the base must contain the parent of K",
        });
    }
    if i.strictly_contains(base) {
        return Err(Error::InvalidBase {
            base: *base,
            reason: "I strictly contains the base",
        });
    }
    let anchored_tail_scale = (i.apex().scale() + 1).max(k.apex().scale() + 2);
    let mut sum = DyadicSum::default();
    let mut l = base.parent();
    loop {
        if l.is_zero_anchored() && l.scale() >= anchored_tail_scale {
            // From here on I ⊆ L_∓ and K ⊆ (L_∓)_∓ at every level, with
            // terms −1/|L| on the right half-line and +1/|L| on the left;
            // the series from L upward sums to ∓2/|L|.
            let sign = match l.half_line() {
                HalfLineSign::Positive => -1,
                HalfLineSign::Negative => 1,
            };
            sum.push(sign, l.scale() as i64 - 1);
            break;
        }
        if l.strictly_contains(i) {
            let s = child_side(&l, i).times(shift_haar_sign(&l, k)?);
            sum.push(s.value(), l.scale() as i64);
        }
        l = l.parent();
    }
    Ok(sum.value())
}

/// `|I|·h_L(I)·c` scaled into Q[√2]: magnitude `|I|·|L|^{−1/2}`.
fn mass_times_haar(i: &DyadicInterval, l: &DyadicInterval) -> Sqrt2Scalar {
    let mag = Sqrt2Scalar::sqrt2_pow(2 * i.scale() as i64 - l.scale() as i64);
    match child_side(l, i) {
        Sign::Plus => mag,
        Sign::Minus => -mag,
    }
}

/// Exact `1_K Ш 1_I`.
pub fn restricted_indicator_shift(i: &DyadicInterval, k: &DyadicInterval) -> RestrictedShiftForm {
    let mut form = RestrictedShiftForm::zero(*k);
    let case = classify(i, k);
    if case == CaseClass::OppositeHalfLines {
        return form;
    }
    let mass = i.size();
    if case == CaseClass::Interior {
        // every L ⊋ I sees K inside one of its grandchildren
        let s = ancestor_sum(i, k, i).expect("preconditions hold for K ⊊ I");
        form.constant = Sqrt2Scalar::rational(mass * s);
        return form;
    }
    let k_hat = k.parent();
    let s = ancestor_sum(i, k, &k_hat).expect("preconditions hold outside the interior case");
    form.constant = Sqrt2Scalar::rational(mass * s);
    if k_hat.strictly_contains(i) {
        // 1_K Шh_{K̂} = ε(K) h_K / √2
        let d = mass_times_haar(i, &k_hat).mul_sqrt2_pow(-1);
        form.haar = match k.child_sign() {
            Sign::Plus => d,
            Sign::Minus => -d,
        };
    }
    if case == CaseClass::Covering {
        for l in i.ancestors_up_to(k) {
            form.add_inner(l, mass_times_haar(i, &l));
        }
    }
    form
}

/// `Ш` on a zero-mean function: each `h_J` goes to `(h_{J_+} − h_{J_−})/√2`.
pub fn shift_zero_mean<S: Amplitude>(f: &DyadicFunction<S>) -> Result<DyadicFunction<S>> {
    if !f.mean().is_zero() {
        return Err(Error::NonZeroMean);
    }
    let mut coefs = Vec::with_capacity(2 * f.coefficients().len());
    for (j, c) in f.coefficients() {
        let (jm, jp) = j.children();
        let half = c.mul_sqrt2_pow(-1);
        coefs.push((jp, half.clone()));
        coefs.push((jm, -half));
    }
    DyadicFunction::from_parts(f.root(), f.depth() + 1, S::zero(), coefs)
}

/// Exact `1_K Ш f` and its squared norm.
pub fn restricted_shift(f: &ExactFunction, k: &DyadicInterval) -> (RestrictedShiftForm, Sqrt2Scalar) {
    let i = f.root();
    let mut form = if f.mean().is_zero() {
        RestrictedShiftForm::zero(*k)
    } else {
        restricted_indicator_shift(&i, k).scaled(f.mean())
    };
    if i.half_line() == k.half_line() {
        let k_hat = k.parent();
        for (j, c) in f.coefficients() {
            if k.contains(j) {
                form.add_inner(*j, c.clone());
            } else if *j == k_hat {
                let d = c.mul_sqrt2_pow(-1);
                match k.child_sign() {
                    Sign::Plus => form.haar += d,
                    Sign::Minus => form.haar -= &d,
                }
            } else if j.strictly_contains(&k_hat) {
                let amp = c.mul_sqrt2_pow(-(j.scale() as i64));
                match shift_haar_sign(j, k).expect("K lies in a grandchild of J") {
                    Sign::Plus => form.constant += amp,
                    Sign::Minus => form.constant -= &amp,
                }
            }
        }
    }
    let n = form.norm2();
    (form, n)
}

/// `1_W Ш f` as a function on the window `W`, one level finer than `f`.
pub fn shift_full(f: &ExactFunction, window: &DyadicInterval) -> Result<ExactFunction> {
    if window.scale() < f.leaf_scale() {
        return Err(Error::Misaligned {
            interval: *window,
            root: f.root(),
            leaf_scale: f.leaf_scale(),
        });
    }
    let (form, _) = restricted_shift(f, window);
    let depth = ((window.scale() - f.leaf_scale() + 1) as u32).max(form.min_depth());
    form.to_function(depth)
}

/// `Σ_{i≥0} b_i 2^{−i}` over the two's-complement bits of `index`, with the
/// infinite run of ones of a negative index summed in closed form.
fn bit_reversal(index: i64) -> BigRational {
    let mut acc = DyadicSum::default();
    for b in 0..64 {
        if (index >> b) & 1 == 1 {
            acc.push(1, b);
        }
    }
    if index < 0 {
        acc.push(1, 63);
    }
    acc.value()
}

/// Constant value of `1_I Ш 1_I − (√|I|/2)·h_I` on `I`, from the binary
/// digits of the index: `(rev(ℓ) − 1)/2`.
pub fn self_constant(i: &DyadicInterval) -> BigRational {
    match i.half_line() {
        HalfLineSign::Positive => (bit_reversal(i.index()) - BigRational::from_integer(1.into())) / BigRational::from_integer(2.into()),
        // oddness: 1_{−I}Ш1_{−I} = −R(1_IШ1_I)
        HalfLineSign::Negative => -self_constant(&i.reflect()),
    }
}

/// Constant value of `1_K Ш 1_I` for `K ⊊ I`: `ε(K,I)/2 + T(I)`.
pub fn interior_constant(i: &DyadicInterval, k: &DyadicInterval) -> Result<BigRational> {
    let eps = epsilon_child(k, i)?;
    let half = BigRational::new(eps.value().into(), 2.into());
    Ok(half + self_constant(i))
}

/// `‖1_K Ш f‖²` for `K ⊊ root(f)` from the three-term orthogonal split:
/// `[⟨f⟩·C(I,K) + Σ_{K̂⊊J⊆I} f̂(J)·Шh_J(K)]²|K| + f̂(K̂)²/2 + Σ_{J⊆K} f̂(J)²`,
/// with the interior constant `C` taken from the digit formula.
pub fn interior_norm2(f: &ExactFunction, k: &DyadicInterval) -> Result<Sqrt2Scalar> {
    interior_three_terms(f, k, InteriorVariant::Exact)
}

/// The same three-term expression with `C(I,K)` replaced by `ε(K,I)` and
/// `Шh_J(K)` by `ε(K,J)/√|J|`, as it is commonly stated.
pub fn printed_interior_norm2(f: &ExactFunction, k: &DyadicInterval) -> Result<Sqrt2Scalar> {
    interior_three_terms(f, k, InteriorVariant::Printed)
}

#[derive(Clone, Copy, PartialEq)]
enum InteriorVariant {
    Exact,
    Printed,
}

fn interior_three_terms(f: &ExactFunction, k: &DyadicInterval, variant: InteriorVariant) -> Result<Sqrt2Scalar> {
    let i = f.root();
    if !i.strictly_contains(k) {
        return Err(Error::NotStrictlyContained { inner: *k, outer: i });
    }
    let k_hat = k.parent();
    let c = match variant {
        InteriorVariant::Exact => interior_constant(&i, k)?,
        InteriorVariant::Printed => BigRational::from_integer(epsilon_child(k, &i)?.value().into()),
    };
    let mut level = f.mean() * &Sqrt2Scalar::rational(c);
    let mut atom = Sqrt2Scalar::zero();
    let mut inner = Sqrt2Scalar::zero();
    for (j, coef) in f.coefficients() {
        if j.strictly_contains(&k_hat) {
            let sign = match variant {
                InteriorVariant::Exact => {
                    let s = epsilon_child(k, j)?;
                    let t = epsilon_child(k, &k.ancestor_at(j.scale() - 1).expect("below J"))?;
                    s.times(t)
                }
                InteriorVariant::Printed => epsilon_child(k, j)?,
            };
            let amp = coef.mul_sqrt2_pow(-(j.scale() as i64));
            match sign {
                Sign::Plus => level += amp,
                Sign::Minus => level -= &amp,
            }
        } else if *j == k_hat {
            atom = coef.square().mul_sqrt2_pow(-2);
        } else if k.contains(j) {
            inner += coef.square();
        }
    }
    Ok(level.square().mul_sqrt2_pow(2 * k.scale() as i64) + atom + inner)
}

/// `‖1_K Ш 1_I‖² / |I|`, the sharp constant for `f = 1_I`.
pub fn indicator_constant(i: &DyadicInterval, k: &DyadicInterval) -> BigRational {
    let n = restricted_indicator_shift(i, k).norm2();
    let r = n.to_rational().expect("squared norms of indicator shifts are rational");
    r / i.size()
}
