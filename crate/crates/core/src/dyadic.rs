//! Dyadic intervals `[ℓ·2^k, (ℓ+1)·2^k)` and the combinatorial symbols built
//! on them: children, parents, child signs, meets, apexes, reflections and
//! the two pointwise amplitudes `h_L(K)` and `Шh_L(K)`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{pow2, Sqrt2Scalar};

/// Which child of its parent an interval is, or which child of `L` holds `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    /// Product of two signs.
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfLineSign {
    Positive,
    Negative,
}

impl HalfLineSign {
    pub fn flip(self) -> HalfLineSign {
        match self {
            HalfLineSign::Positive => HalfLineSign::Negative,
            HalfLineSign::Negative => HalfLineSign::Positive,
        }
    }
}

/// The half-open interval `[index·2^scale, (index+1)·2^scale)`.
///
/// Identity is the integer pair, so equality and hashing never touch
/// rational endpoints. Ordering is by scale, then index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicInterval {
    scale: i32,
    index: i64,
}

impl DyadicInterval {
    pub const fn new(scale: i32, index: i64) -> Self {
        Self { scale, index }
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    /// `|I| = 2^scale`.
    pub fn size(&self) -> BigRational {
        pow2(self.scale as i64)
    }

    pub fn left(&self) -> BigRational {
        self.size() * BigRational::from_integer(BigInt::from(self.index))
    }

    pub fn right(&self) -> BigRational {
        self.size() * BigRational::from_integer(BigInt::from(self.index) + 1)
    }

    pub fn left_f64(&self) -> f64 {
        self.index as f64 * 2f64.powi(self.scale)
    }

    pub fn size_f64(&self) -> f64 {
        2f64.powi(self.scale)
    }

    /// `(I_−, I_+)`.
    pub fn children(&self) -> (DyadicInterval, DyadicInterval) {
        (self.child(Sign::Minus), self.child(Sign::Plus))
    }

    pub fn child(&self, sign: Sign) -> DyadicInterval {
        let offset = match sign {
            Sign::Minus => 0,
            Sign::Plus => 1,
        };
        Self::new(self.scale - 1, 2 * self.index + offset)
    }

    pub fn parent(&self) -> DyadicInterval {
        Self::new(self.scale + 1, self.index.div_euclid(2))
    }

    /// The `n`-fold parent.
    pub fn ancestor(&self, n: u32) -> DyadicInterval {
        Self::new(self.scale + n as i32, shift_floor(self.index, n as i64))
    }

    /// The dyadic interval of the given scale containing this one, if any.
    pub fn ancestor_at(&self, scale: i32) -> Option<DyadicInterval> {
        (scale >= self.scale).then(|| self.ancestor((scale - self.scale) as u32))
    }

    /// Which child of the parent this interval is.
    pub fn child_sign(&self) -> Sign {
        if self.index.rem_euclid(2) == 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn half_line(&self) -> HalfLineSign {
        if self.index >= 0 {
            HalfLineSign::Positive
        } else {
            HalfLineSign::Negative
        }
    }

    /// Set containment `other ⊆ self`.
    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.ancestor_at(self.scale) == Some(*self)
    }

    /// `other ⊊ self`.
    pub fn strictly_contains(&self, other: &DyadicInterval) -> bool {
        other.scale < self.scale && self.contains(other)
    }

    pub fn intersects(&self, other: &DyadicInterval) -> bool {
        self.contains(other) || other.contains(self)
    }

    /// `−I` as a half-open dyadic interval: `(k, ℓ) ↦ (k, −ℓ−1)`.
    pub fn reflect(&self) -> DyadicInterval {
        Self::new(self.scale, -self.index - 1)
    }

    /// Whether the interval is `[0, 2^k)` or `[−2^k, 0)`.
    pub fn is_zero_anchored(&self) -> bool {
        self.index == 0 || self.index == -1
    }

    /// Smallest zero-anchored ancestor (the interval itself if anchored).
    pub fn apex(&self) -> DyadicInterval {
        let target = match self.half_line() {
            HalfLineSign::Positive => 0,
            HalfLineSign::Negative => -1,
        };
        if self.index == target {
            return *self;
        }
        // number of bits needed to bring the index to 0 or −1
        let bits = if self.index >= 0 {
            64 - self.index.leading_zeros()
        } else {
            64 - (!self.index).leading_zeros()
        };
        self.ancestor(bits)
    }

    /// Position of this interval among the `2^depth` leaves of `root`, if it
    /// is exactly a leaf.
    pub fn leaf_position(&self, root: &DyadicInterval, depth: u32) -> Option<usize> {
        if self.scale != root.scale - depth as i32 || !root.contains(self) {
            return None;
        }
        Some((self.index - (root.index << depth)) as usize)
    }

    /// The `j`-th leaf of `root` at the given depth.
    pub fn leaf(root: &DyadicInterval, depth: u32, j: usize) -> DyadicInterval {
        DyadicInterval::new(root.scale - depth as i32, (root.index << depth) + j as i64)
    }

    /// All ancestors `L ⊋ self` up to and including `top`, innermost first.
    pub fn ancestors_up_to(&self, top: &DyadicInterval) -> Vec<DyadicInterval> {
        let mut out = Vec::new();
        let mut cur = *self;
        while cur.scale < top.scale {
            cur = cur.parent();
            out.push(cur);
        }
        out
    }
}

fn shift_floor(index: i64, n: i64) -> i64 {
    if n >= 63 {
        if index >= 0 {
            0
        } else {
            -1
        }
    } else {
        index >> n
    }
}

/// `+1` if `K ⊆ I_+`, `−1` if `K ⊆ I_−`; requires `K ⊊ I`.
pub fn epsilon_child(k: &DyadicInterval, i: &DyadicInterval) -> Result<Sign> {
    if !i.strictly_contains(k) {
        return Err(Error::NotStrictlyContained { inner: *k, outer: *i });
    }
    let below = k.ancestor_at(i.scale - 1).expect("scale checked");
    Ok(below.child_sign())
}

/// Minimal dyadic interval containing both, or `None` across half-lines.
pub fn meet(i: &DyadicInterval, k: &DyadicInterval) -> Option<DyadicInterval> {
    if i.half_line() != k.half_line() {
        return None;
    }
    let scale = i.scale.max(k.scale);
    let mut a = i.ancestor_at(scale).expect("scale is at least i.scale");
    let mut b = k.ancestor_at(scale).expect("scale is at least k.scale");
    while a != b {
        a = a.parent();
        b = b.parent();
    }
    Some(a)
}

/// Smallest zero-anchored interval containing both (same half-line only).
pub fn pair_apex(i: &DyadicInterval, k: &DyadicInterval) -> Option<DyadicInterval> {
    meet(i, k).map(|m| m.apex())
}

/// `h_L` evaluated on `K ⊊ L`: `±|L|^{−1/2}` according to the child of `L`
/// holding `K`.
pub fn haar_value(l: &DyadicInterval, k: &DyadicInterval) -> Result<Sqrt2Scalar> {
    let s = epsilon_child(k, l)?;
    let amp = Sqrt2Scalar::inv_sqrt_len(l.scale);
    Ok(match s {
        Sign::Plus => amp,
        Sign::Minus => -amp,
    })
}

/// Sign of `Шh_L` on the grandchild `(L_s)_t`, which is `s·t`.
pub fn shift_haar_sign(l: &DyadicInterval, k: &DyadicInterval) -> Result<Sign> {
    if k.scale > l.scale - 2 || !l.contains(k) {
        return Err(Error::NotInGrandchild { inner: *k, outer: *l });
    }
    let child = k.ancestor_at(l.scale - 1).expect("scale checked");
    let grandchild = k.ancestor_at(l.scale - 2).expect("scale checked");
    Ok(child.child_sign().times(grandchild.child_sign()))
}

/// `Шh_L` evaluated on `K` inside a grandchild `(L_s)_t`: `s·t·|L|^{−1/2}`.
pub fn shift_haar_value(l: &DyadicInterval, k: &DyadicInterval) -> Result<Sqrt2Scalar> {
    let sign = shift_haar_sign(l, k)?;
    let amp = Sqrt2Scalar::inv_sqrt_len(l.scale);
    Ok(match sign {
        Sign::Plus => amp,
        Sign::Minus => -amp,
    })
}

/// `Σ 1/|L|` over the `m` nearest strict ancestors of `l`.
pub fn inverse_length_sum(l: &DyadicInterval, m: u32) -> BigRational {
    (1..=m)
        .map(|j| pow2(-(l.scale as i64 + j as i64)))
        .fold(BigRational::from_integer(0.into()), |acc, x| acc + x)
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.scale, self.index)
    }
}

impl FromStr for DyadicInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid interval {s:?}, expected k:l"));
        let (k, l) = s.trim().split_once(':').ok_or_else(bad)?;
        let scale: i32 = k.trim().parse().map_err(|_| bad())?;
        let index: i64 = l.trim().parse().map_err(|_| bad())?;
        if scale.unsigned_abs() > 1 << 20 {
            return Err(bad());
        }
        Ok(Self::new(scale, index))
    }
}

impl Serialize for DyadicInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn di(k: i32, l: i64) -> DyadicInterval {
        DyadicInterval::new(k, l)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn children_of_examples() {
        assert_eq!(di(1, 0).children(), (di(0, 0), di(0, 1)));
        let (m, p) = di(0, -1).children();
        assert_eq!((m.left(), m.right()), (q(-1, 1), q(-1, 2)));
        assert_eq!((p.left(), p.right()), (q(-1, 2), q(0, 1)));
        let (m, p) = di(-1, 5).children();
        assert_eq!((m.left(), m.right(), p.right()), (q(5, 2), q(11, 4), q(3, 1)));
    }

    #[test]
    fn parents() {
        assert_eq!(di(0, 1).parent(), di(1, 0));
        assert_eq!(di(0, -1).parent(), di(1, -1));
        assert_eq!(di(1, 1).parent(), di(2, 0));
        assert_eq!(di(0, 1).child_sign(), Sign::Plus);
        assert_eq!(di(0, -2).child_sign(), Sign::Minus);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_child(&di(0, 0), &di(2, 0)), Ok(Sign::Minus));
        assert_eq!(epsilon_child(&di(0, 3), &di(2, 0)), Ok(Sign::Plus));
        assert!(epsilon_child(&di(2, 0), &di(2, 0)).is_err());
        assert!(epsilon_child(&di(0, 4), &di(2, 0)).is_err());
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&di(0, 0), &di(0, 3)), Some(di(2, 0)));
        assert_eq!(meet(&di(0, 2), &di(0, 1)), Some(di(2, 0)));
        assert_eq!(meet(&di(0, 0), &di(0, -1)), None);
        assert_eq!(meet(&di(0, 0), &di(3, 0)), Some(di(3, 0)));
        assert_eq!(meet(&di(-2, -7), &di(0, -1)), Some(di(1, -1)));
    }

    #[test]
    fn apex_examples() {
        assert_eq!(di(0, 3).apex(), di(2, 0));
        assert_eq!(di(0, 0).apex(), di(0, 0));
        assert_eq!(di(-1, 5).apex(), di(2, 0));
        assert_eq!(di(0, -3).apex(), di(2, -1));
        assert_eq!(di(0, -1).apex(), di(0, -1));
        assert_eq!(di(0, i64::MAX).apex(), di(63, 0));
    }

    #[test]
    fn haar_value_examples() {
        assert_eq!(haar_value(&di(2, 0), &di(0, 0)).unwrap(), Sqrt2Scalar::from_ratio(-1, 2));
        assert_eq!(haar_value(&di(1, 0), &di(0, 1)).unwrap(), "1/2√2".parse().unwrap());
        assert_eq!(haar_value(&di(3, 0), &di(1, 2)).unwrap(), "1/4√2".parse().unwrap());
        assert!(haar_value(&di(1, 0), &di(1, 0)).is_err());
    }

    #[test]
    fn shift_haar_value_examples() {
        assert_eq!(shift_haar_value(&di(2, 0), &di(0, 3)).unwrap(), Sqrt2Scalar::from_ratio(1, 2));
        assert_eq!(shift_haar_value(&di(2, 0), &di(0, 2)).unwrap(), Sqrt2Scalar::from_ratio(-1, 2));
        assert_eq!(shift_haar_value(&di(2, 0), &di(0, 0)).unwrap(), Sqrt2Scalar::from_ratio(1, 2));
        assert!(shift_haar_value(&di(2, 0), &di(1, 1)).is_err());
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(di(0, 0).reflect(), di(0, -1));
        assert_eq!(di(1, 1).reflect(), di(1, -2));
        assert_eq!(di(-3, 7).reflect().reflect(), di(-3, 7));
    }

    #[test]
    fn geometric_ancestor_sums() {
        for scale in -5..5 {
            let l = di(scale, 3);
            for m in 0..12u32 {
                let expected = (BigRational::from_integer(1.into()) - pow2(-(m as i64))) / l.size();
                assert_eq!(inverse_length_sum(&l, m), expected);
            }
            // sum over l ⊊ L ⊆ top equals (1/|l|)(1 − |l|/|top|)
            let top = l.ancestor(6);
            let direct: BigRational = l
                .ancestors_up_to(&top)
                .iter()
                .map(|a| BigRational::from_integer(1.into()) / a.size())
                .sum();
            let one = BigRational::from_integer(1.into());
            assert_eq!(direct, (one - l.size() / top.size()) / l.size());
        }
    }

    #[test]
    fn text_round_trip() {
        let i: DyadicInterval = "-1:5".parse().unwrap();
        assert_eq!(i, di(-1, 5));
        assert_eq!(i.to_string(), "-1:5");
        assert!("1".parse::<DyadicInterval>().is_err());
        assert!("a:b".parse::<DyadicInterval>().is_err());
    }

    fn arb_interval() -> impl Strategy<Value = DyadicInterval> {
        (-12i32..=12, -(1i64 << 20)..=(1i64 << 20)).prop_map(|(k, l)| di(k, l))
    }

    /// Every ancestor by repeated parent steps, up to a bounded scale.
    fn ancestor_list(i: &DyadicInterval, max_scale: i32) -> Vec<DyadicInterval> {
        let mut out = vec![*i];
        let mut cur = *i;
        while cur.scale() < max_scale {
            cur = cur.parent();
            out.push(cur);
        }
        out
    }

    proptest! {
        #[test]
        fn children_partition_parent(i in arb_interval()) {
            let (m, p) = i.children();
            prop_assert_eq!(m.parent(), i);
            prop_assert_eq!(p.parent(), i);
            prop_assert_eq!(m.left(), i.left());
            prop_assert_eq!(m.right(), p.left());
            prop_assert_eq!(p.right(), i.right());
            prop_assert_eq!(m.size() * BigRational::from_integer(2.into()), i.size());
        }

        #[test]
        fn meet_is_minimal_common_ancestor(i in arb_interval(), k in arb_interval()) {
            let m = meet(&i, &k);
            prop_assert_eq!(m, meet(&k, &i));
            if i.half_line() != k.half_line() {
                prop_assert!(m.is_none());
            } else {
                let m = m.unwrap();
                prop_assert!(m.contains(&i) && m.contains(&k));
                let ai = ancestor_list(&i, 40);
                let first = ai.iter().find(|a| a.contains(&k)).copied();
                prop_assert_eq!(first, Some(m));
            }
        }

        #[test]
        fn apex_is_smallest_anchored_ancestor(i in arb_interval()) {
            let a = i.apex();
            let first = ancestor_list(&i, 40).into_iter().find(|x| x.is_zero_anchored());
            prop_assert_eq!(Some(a), first);
            prop_assert_eq!(a.half_line(), i.half_line());
        }

        #[test]
        fn haar_value_constant_on_children(l in arb_interval(), d1 in 1u32..6, d2 in 1u32..6, j1 in 0i64..32, j2 in 0i64..32) {
            let (m, _) = l.children();
            let k1 = DyadicInterval::new(m.scale() - d1 as i32 + 1, (m.index() << (d1 - 1)) + j1 % (1 << (d1 - 1)));
            let k2 = DyadicInterval::new(m.scale() - d2 as i32 + 1, (m.index() << (d2 - 1)) + j2 % (1 << (d2 - 1)));
            prop_assert_eq!(haar_value(&l, &k1).unwrap(), haar_value(&l, &k2).unwrap());
        }

        #[test]
        fn reflection_swaps_child_signs(i in arb_interval()) {
            let (m, p) = i.children();
            prop_assert_eq!(p.reflect(), i.reflect().children().0);
            prop_assert_eq!(m.reflect(), i.reflect().children().1);
            prop_assert_eq!(i.reflect().half_line(), i.half_line().flip());
            prop_assert_eq!(i.reflect().reflect(), i);
            prop_assert_eq!(i.reflect().left(), -i.right());
        }
    }
}
