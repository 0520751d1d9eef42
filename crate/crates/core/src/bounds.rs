//! Lower-bound constants for `‖1_K Ш f‖² ≥ C‖f‖²`, extremal functions, and
//! the Poincaré–Wirtinger machinery that turns a derivative bound into a
//! mean bound for the gap configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::{epsilon_child, meet, shift_haar_value, DyadicInterval, HalfLineSign};
use crate::error::{Error, Result};
use crate::haar::{DyadicFunction, ExactFunction, LeafVector};
use crate::scalar::{pow2, Sqrt2Scalar};
use crate::shift::{classify, indicator_constant, interior_constant, CaseClass};

/// The sharp constant for `f = 1_I` next to the constant claimed for the
/// configuration by the lower-bound theorems.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub i: DyadicInterval,
    pub k: DyadicInterval,
    pub case: CaseClass,
    /// `‖1_K Ш 1_I‖² / |I|`.
    pub exact_constant: BigRational,
    /// Constant asserted for this configuration; `None` where no uniform
    /// constant is asserted (interior) or the configuration is not covered.
    pub claimed_bound: Option<BigRational>,
    /// Which statement the claimed bound comes from.
    pub claim_label: &'static str,
    /// `(1 − η)²` when a derivative constraint is in force.
    pub eta_factor: Option<f64>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Covering bound `1 − (3/4)|I|/|K|`.
pub fn covering_bound(i: &DyadicInterval, k: &DyadicInterval) -> BigRational {
    rat(1, 1) - rat(3, 4) * i.size() / k.size()
}

/// Where a disjoint pair sits relative to the zero-anchored apex of `I`,
/// for `I` in the right half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapConfiguration {
    /// `K` in the other half-line.
    OppositeHalfLine,
    /// `K ⊆ [2^{M₀+k}, 2^{M₀+k+1})` for `k ≥ 0`.
    Beyond { k: i32 },
    /// `I ⊆ [2^{M₀−1}, 2^{M₀})` and `K ⊆ [0, 2^{M₀−2})`.
    FarLeft,
    /// `I ⊆ [2^{M₀−1}, 2^{M₀})` and `K ⊆ [2^{M₀−2}, 2^{M₀−1})`.
    NearLeft,
    /// `I`, `K` disjoint inside `[2^{M₀−1}, 2^{M₀})`.
    SameHalf,
    /// `K = [0, 2^{M₀−1})`, not covered by any sub-case.
    Uncovered,
}

/// Gap sub-case of a disjoint pair with `I` in the right half-line.
pub fn gap_configuration(i: &DyadicInterval, k: &DyadicInterval) -> Result<GapConfiguration> {
    if i.half_line() != HalfLineSign::Positive {
        return Err(Error::Precondition(format!("{i} is not in the right half-line")));
    }
    if k.half_line() == HalfLineSign::Negative {
        return Ok(GapConfiguration::OppositeHalfLine);
    }
    if i.intersects(k) {
        return Err(Error::Precondition(format!("{i} and {k} intersect")));
    }
    let m0 = i.apex().scale();
    let top = i.apex();
    if !top.contains(k) {
        let mk = k.apex().scale();
        return Ok(GapConfiguration::Beyond { k: mk - 1 - m0 });
    }
    // I is not zero-anchored here, so it sits in the right child of its apex
    let (left, right) = top.children();
    if right.contains(k) {
        return Ok(GapConfiguration::SameHalf);
    }
    let (ll, lr) = left.children();
    Ok(if ll.contains(k) && *k != left {
        GapConfiguration::FarLeft
    } else if lr.contains(k) {
        GapConfiguration::NearLeft
    } else {
        GapConfiguration::Uncovered
    })
}

/// The constant asserted for a disjoint pair (right half-line for `I`).
pub fn claimed_gap_constant(i: &DyadicInterval, k: &DyadicInterval) -> Result<(Option<BigRational>, &'static str)> {
    let m0 = i.apex().scale() as i64;
    let mass = i.size() * k.size();
    Ok(match gap_configuration(i, k)? {
        GapConfiguration::OppositeHalfLine => (Some(BigRational::zero()), "gap, opposite half-line"),
        GapConfiguration::Beyond { k: j } => (Some(mass * pow2(-2 * (m0 + j as i64))), "gap, K beyond the apex of I"),
        GapConfiguration::FarLeft => (Some(BigRational::zero()), "gap, K in the far left quarter"),
        GapConfiguration::NearLeft => (Some(mass * pow2(-2 * (m0 - 1))), "gap, K in the near left quarter"),
        GapConfiguration::SameHalf => {
            let m = meet(i, k).expect("same half-line").size();
            (Some(mass * &m * &m * pow2(-4 * m0)), "gap, both in the right half of the apex")
        }
        GapConfiguration::Uncovered => (None, "gap, K is the left half of the apex"),
    })
}

pub fn bound_constant(i: &DyadicInterval, k: &DyadicInterval) -> BoundReport {
    let case = classify(i, k);
    let exact_constant = indicator_constant(i, k);
    let (claimed_bound, claim_label) = match case {
        CaseClass::Covering | CaseClass::Equal => (Some(covering_bound(i, k)), "covering"),
        CaseClass::Interior => (None, "interior, no uniform constant"),
        CaseClass::OppositeHalfLines => (Some(BigRational::zero()), "gap, opposite half-line"),
        CaseClass::GapSameHalfLine => {
            // the gap statements are made for the right half-line; the left
            // one follows by reflection
            let (ri, rk) = match i.half_line() {
                HalfLineSign::Positive => (*i, *k),
                HalfLineSign::Negative => (i.reflect(), k.reflect()),
            };
            claimed_gap_constant(&ri, &rk).expect("disjoint pair in the right half-line")
        }
    };
    BoundReport {
        i: *i,
        k: *k,
        case,
        exact_constant,
        claimed_bound,
        claim_label,
        eta_factor: None,
    }
}

/// A function supported in `I` with `1_K Ш f = 0`, for `K ⊊ I`, `I ⊋ K̂`:
/// `f = σ·1_I − C·h_I` with `σ = Шh_I(K)` and `C` the interior constant.
/// Its squared norm is `1 + C²`.
pub fn extremal_interior(i: &DyadicInterval, k: &DyadicInterval) -> Result<ExactFunction> {
    check_extremal_pair(i, k)?;
    let sigma = shift_haar_value(i, k)?;
    let c = Sqrt2Scalar::rational(interior_constant(i, k)?);
    DyadicFunction::from_parts(*i, 1, sigma, [(*i, -c)])
}

/// `f = −ε(K,I)|I|^{−1/2}·1_I + h_I`, the candidate usually given for the
/// same purpose. It equals `−2ε(K,I)|I|^{−1/2}·1_{I_{−ε}}` and is not
/// annihilated in general.
pub fn printed_extremal_interior(i: &DyadicInterval, k: &DyadicInterval) -> Result<ExactFunction> {
    check_extremal_pair(i, k)?;
    let eps = epsilon_child(k, i)?;
    let amp = Sqrt2Scalar::inv_sqrt_len(i.scale());
    let mean = Sqrt2Scalar::from_integer(-eps.value()) * amp;
    DyadicFunction::from_parts(*i, 1, mean, [(*i, Sqrt2Scalar::one())])
}

fn check_extremal_pair(i: &DyadicInterval, k: &DyadicInterval) -> Result<()> {
    if !i.strictly_contains(k) {
        return Err(Error::NotStrictlyContained { inner: *k, outer: *i });
    }
    if k.parent() == *i {
        return Err(Error::Precondition(format!(
            "{i} is the parent of {k}; no annihilated function exists there"
        )));
    }
    Ok(())
}

/// `h_I`: zero mean, unit norm, invisible to `1_K Ш` for every `K` disjoint
/// from `I`.
pub fn zero_mean_gap_witness(i: &DyadicInterval) -> ExactFunction {
    DyadicFunction::haar(*i)
}

/// Complex Fourier coefficient `a_k = re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `f(t) = Σ a_k e^{2πik(t − left(I))/|I|}` on `I`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    pub interval: DyadicInterval,
    coefficients: BTreeMap<i64, (f64, f64)>,
}

impl TrigPolynomial {
    /// Rejects empty or all-zero spectra and non-real functions
    /// (`a_{−k}` must be the conjugate of `a_k`).
    pub fn new(interval: DyadicInterval, modes: &[Mode]) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for m in modes {
            let e = coefficients.entry(m.k).or_insert((0.0, 0.0));
            e.0 += m.re;
            e.1 += m.im;
        }
        if coefficients.values().all(|(re, im)| *re == 0.0 && *im == 0.0) {
            return Err(Error::Precondition("all Fourier coefficients are zero".into()));
        }
        for (&k, &(re, im)) in &coefficients {
            let (cre, cim) = coefficients.get(&-k).copied().unwrap_or((0.0, 0.0));
            let tol = 1e-12 * (1.0 + re.abs() + im.abs());
            if (cre - re).abs() > tol || (cim + im).abs() > tol {
                return Err(Error::Precondition(format!(
                    "coefficients of modes {k} and {} are not conjugate, so f is not real",
                    -k
                )));
            }
        }
        Ok(Self { interval, coefficients })
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, (f64, f64)> {
        &self.coefficients
    }

    pub fn value(&self, t: f64) -> f64 {
        let left = self.interval.left_f64();
        let len = self.interval.size_f64();
        self.coefficients
            .iter()
            .map(|(&k, &(re, im))| {
                let phase = 2.0 * PI * k as f64 * (t - left) / len;
                re * phase.cos() - im * phase.sin()
            })
            .sum()
    }

    /// `‖f‖² = |I|·Σ|a_k|²`.
    pub fn norm2(&self) -> f64 {
        self.interval.size_f64() * self.coefficients.values().map(|(re, im)| re * re + im * im).sum::<f64>()
    }

    /// `‖f′‖² = |I|·Σ (2πk/|I|)²|a_k|²`.
    pub fn derivative_norm2(&self) -> f64 {
        let len = self.interval.size_f64();
        len * self
            .coefficients
            .iter()
            .map(|(&k, &(re, im))| (2.0 * PI * k as f64 / len).powi(2) * (re * re + im * im))
            .sum::<f64>()
    }

    /// `η = |I|·‖f′‖ / (2π‖f‖)`.
    pub fn eta(&self) -> f64 {
        self.interval.size_f64() * self.derivative_norm2().sqrt() / (2.0 * PI * self.norm2().sqrt())
    }

    /// Midpoint samples on the leaves of depth `depth`.
    pub fn sample(&self, depth: u32) -> LeafVector<f64> {
        let n = 1usize << depth;
        let leaf = self.interval.size_f64() / n as f64;
        let left = self.interval.left_f64();
        let values = (0..n).map(|j| self.value(left + (j as f64 + 0.5) * leaf)).collect();
        LeafVector::new(self.interval, depth, values).expect("length matches")
    }
}

/// Coefficients with `η` equal to the requested value: `a_0 = α/η` with
/// `α² = Σ_{k≠0} k²|a_k|²` as in the usual construction gives
/// `η_f = α/√(a_0² + Σ_{k≠0}|a_k|²)`, so `a_0` is solved for the exact
/// target instead.
pub fn modes_for_eta(perturbation: &[Mode], eta: f64) -> Result<Vec<Mode>> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Precondition(format!("eta {eta} is outside [0, 1)")));
    }
    let alpha2: f64 = perturbation.iter().map(|m| (m.k * m.k) as f64 * (m.re * m.re + m.im * m.im)).sum();
    let rest: f64 = perturbation.iter().filter(|m| m.k != 0).map(|m| m.re * m.re + m.im * m.im).sum();
    if eta == 0.0 {
        return Ok(vec![Mode { k: 0, re: 1.0, im: 0.0 }]);
    }
    let a0_sq = alpha2 / (eta * eta) - rest;
    if alpha2 == 0.0 || a0_sq <= 0.0 {
        return Err(Error::Precondition("perturbation cannot reach the requested eta".into()));
    }
    let mut modes: Vec<Mode> = perturbation.iter().copied().filter(|m| m.k != 0).collect();
    modes.push(Mode { k: 0, re: a0_sq.sqrt(), im: 0.0 });
    Ok(modes)
}

/// Result of [`pw_build`].
#[derive(Debug, Clone)]
pub struct PwSample {
    pub function: DyadicFunction<f64>,
    pub eta: f64,
    /// `⟨f⟩²|I|` of the sampled function.
    pub mean_mass: f64,
    /// `‖f‖²` of the sampled function.
    pub norm2: f64,
    /// `‖f − ⟨f⟩1_I‖²` of the sampled function.
    pub oscillation2: f64,
}

impl PwSample {
    /// `⟨f⟩²|I| ≥ (1 − η)²‖f‖²` within the given relative tolerance.
    pub fn mean_bound_holds(&self, rel_tol: f64) -> bool {
        let rhs = (1.0 - self.eta).powi(2) * self.norm2;
        self.mean_mass >= rhs - rel_tol * self.norm2
    }

    /// `‖f − ⟨f⟩1_I‖ ≤ (|I|/2π)‖f′‖`, given `‖f′‖²`, within the tolerance.
    pub fn poincare_holds(&self, interval: &DyadicInterval, derivative_norm2: f64, rel_tol: f64) -> bool {
        let rhs = interval.size_f64() / (2.0 * PI) * derivative_norm2.sqrt();
        self.oscillation2.sqrt() <= rhs + rel_tol * self.norm2.sqrt().max(1e-300)
    }
}

/// Samples `Σ a_k e^{2πik(t−left)/|I|}` at leaf midpoints of depth `depth`
/// and reports `η` computed from the coefficients.
pub fn pw_build(i: &DyadicInterval, modes: &[Mode], depth: u32) -> Result<PwSample> {
    if depth < 4 {
        return Err(Error::InsufficientDepth { requested: depth, required: 4 });
    }
    let poly = TrigPolynomial::new(*i, modes)?;
    let function = DyadicFunction::analyze(&poly.sample(depth));
    let mean_mass = function.mean() * function.mean() * i.size_f64();
    let norm2 = function.norm2();
    Ok(PwSample {
        eta: poly.eta(),
        mean_mass,
        norm2,
        oscillation2: norm2 - mean_mass,
        function,
    })
}

/// `‖1_K Ш f‖²` for a disjoint pair against `(1 − η)²·C·‖f‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCheck {
    pub exact_constant: BigRational,
    pub claimed_constant: Option<BigRational>,
    /// `‖1_K Ш f‖²`, from the rank-one identity.
    pub lhs: f64,
    /// `(1 − η)²·exact_constant·‖f‖²`.
    pub rhs: f64,
    /// `(1 − η)²·claimed_constant·‖f‖²`, recorded but not asserted.
    pub claimed_rhs: Option<f64>,
}

impl GapCheck {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs >= self.rhs - rel_tol * self.rhs.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn gap_lower_bound_check(
    f: &DyadicFunction<f64>,
    i: &DyadicInterval,
    k: &DyadicInterval,
    eta: f64,
) -> Result<GapCheck> {
    match classify(i, k) {
        CaseClass::GapSameHalfLine | CaseClass::OppositeHalfLines => {}
        other => {
            return Err(Error::Precondition(format!(
                "{i} and {k} are in the {} configuration, not a gap",
                other.name()
            )))
        }
    }
    if f.root() != *i {
        return Err(Error::IncompatibleRoots(f.root(), *i));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Precondition(format!("eta {eta} is outside [0, 1)")));
    }
    let report = bound_constant(i, k);
    let c = report.exact_constant.to_f64().unwrap_or(f64::NAN);
    let factor = (1.0 - eta).powi(2);
    let norm2 = f.norm2();
    Ok(GapCheck {
        lhs: f.mean() * f.mean() * i.size_f64() * c,
        rhs: factor * c * norm2,
        claimed_rhs: report
            .claimed_bound
            .as_ref()
            .map(|b| factor * b.to_f64().unwrap_or(f64::NAN) * norm2),
        exact_constant: report.exact_constant,
        claimed_constant: report.claimed_bound,
    })
}
