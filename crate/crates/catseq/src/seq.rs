//! Sequences N -> N u {inf} with sigma(0) = 0 and strictly increasing finite
//! values, plus the operations used everywhere else: pointwise min, the star
//! product, superadditive closure, length, the formality test and optimal
//! sequences, and cat bounds from length.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What is known about the value of a sequence at one index.
///
/// `UnknownAbove(d)` means the exact value is not known, only that it exceeds
/// `d`; it shows up when a sequence was read off a truncated algebra whose
/// behaviour above degree `d` is not recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqValue {
    Finite(u64),
    UnknownAbove(u64),
    Infinite,
}

impl SeqValue {
    pub fn is_finite(self) -> bool {
        matches!(self, SeqValue::Finite(_))
    }

    /// Least value consistent with this knowledge (`None` for infinity).
    pub fn lower_bound(self) -> Option<u64> {
        match self {
            SeqValue::Finite(n) => Some(n),
            SeqValue::UnknownAbove(d) => Some(d + 1),
            SeqValue::Infinite => None,
        }
    }

    /// Sum of two values; any unknown ingredient makes the result unknown.
    pub fn add(self, other: SeqValue) -> SeqValue {
        use SeqValue::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => Finite(a + b),
            (Finite(a), UnknownAbove(d)) | (UnknownAbove(d), Finite(a)) => UnknownAbove(a + d),
            // v1 > d1 and v2 > d2 give v1 + v2 > d1 + d2 + 1
            (UnknownAbove(d1), UnknownAbove(d2)) => UnknownAbove(d1 + d2 + 1),
        }
    }

    /// Minimum of a set of values. The result is exact iff some finite
    /// candidate attains the least possible bound of the whole set.
    pub fn min_of<I: IntoIterator<Item = SeqValue>>(vals: I) -> SeqValue {
        let mut best_lb: Option<u64> = None;
        let mut best_exact = false;
        for v in vals {
            match v.lower_bound() {
                None => {}
                Some(lb) => {
                    if best_lb.map_or(true, |b| lb < b) {
                        best_lb = Some(lb);
                        best_exact = v.is_finite();
                    } else if best_lb == Some(lb) && v.is_finite() {
                        best_exact = true;
                    }
                }
            }
        }
        match best_lb {
            None => SeqValue::Infinite,
            Some(lb) if best_exact => SeqValue::Finite(lb),
            Some(lb) => SeqValue::UnknownAbove(lb - 1),
        }
    }
}

impl fmt::Display for SeqValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqValue::Finite(n) => write!(f, "{n}"),
            SeqValue::UnknownAbove(d) => write!(f, ">{d}"),
            SeqValue::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence must start with 0 (got {0:?})")]
    BadOrigin(Option<u64>),
    #[error("finite values must be strictly increasing ({0} followed by {1})")]
    NotMonotone(u64, u64),
    #[error("finite value {0} after an infinite entry")]
    FiniteAfterInfinite(u64),
    #[error("length depends on entries that are only known to exceed {0}")]
    CapAmbiguous(u64),
    #[error("bad input: {0}")]
    BadInput(String),
}

/// A sequence sigma: N -> N u {inf}. Only the finite prefix is stored;
/// indices past it are exactly infinite, unless `cap_note = Some(d)` in which
/// case they are merely unknown above degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    finite: Vec<u64>,
    cap_note: Option<u64>,
}

/// One entry of raw user input for [`Sequence::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqEntry {
    Finite(u64),
    Infinite,
}

impl Sequence {
    /// Validate raw values: first entry 0, finite entries strictly
    /// increasing, no finite entry after an infinite one. Trailing infinite
    /// entries are normalized away.
    pub fn new(values: &[SeqEntry]) -> Result<Sequence, SeqError> {
        match values.first() {
            Some(SeqEntry::Finite(0)) => {}
            Some(SeqEntry::Finite(n)) => return Err(SeqError::BadOrigin(Some(*n))),
            Some(SeqEntry::Infinite) | None => return Err(SeqError::BadOrigin(None)),
        }
        let mut finite = Vec::new();
        let mut seen_inf = false;
        for &v in values {
            match v {
                SeqEntry::Finite(n) => {
                    if seen_inf {
                        return Err(SeqError::FiniteAfterInfinite(n));
                    }
                    if let Some(&last) = finite.last() {
                        if n <= last {
                            return Err(SeqError::NotMonotone(last, n));
                        }
                    }
                    finite.push(n);
                }
                SeqEntry::Infinite => seen_inf = true,
            }
        }
        Ok(Sequence { finite, cap_note: None })
    }

    /// Build from an already-valid strictly increasing finite prefix.
    pub fn from_finite(finite: Vec<u64>) -> Result<Sequence, SeqError> {
        let entries: Vec<SeqEntry> = finite.iter().map(|&n| SeqEntry::Finite(n)).collect();
        Sequence::new(&entries)
    }

    /// Attach a cap note: entries past the stored prefix are unknown above
    /// degree `d` instead of provably infinite.
    pub fn with_cap_note(mut self, d: u64) -> Sequence {
        self.cap_note = Some(d);
        self
    }

    pub fn cap_note(&self) -> Option<u64> {
        self.cap_note
    }

    /// The stored finite values, starting with sigma(0) = 0.
    pub fn finite_values(&self) -> &[u64] {
        &self.finite
    }

    pub fn at(&self, k: usize) -> SeqValue {
        match self.finite.get(k) {
            Some(&n) => SeqValue::Finite(n),
            None => match self.cap_note {
                Some(d) => SeqValue::UnknownAbove(d),
                None => SeqValue::Infinite,
            },
        }
    }

    /// Largest index with a finite value.
    pub fn length(&self) -> Result<u64, SeqError> {
        match self.cap_note {
            Some(d) => Err(SeqError::CapAmbiguous(d)),
            None => Ok((self.finite.len() - 1) as u64),
        }
    }

    /// Length of the known finite prefix, ignoring any cap note.
    pub fn known_length(&self) -> u64 {
        (self.finite.len() - 1) as u64
    }

    /// Pointwise minimum (infinity is the top element).
    pub fn min(&self, other: &Sequence) -> Sequence {
        let limit = self.finite.len().max(other.finite.len());
        let mut finite = Vec::new();
        let mut cap_note = None;
        for k in 0..=limit {
            match SeqValue::min_of([self.at(k), other.at(k)]) {
                SeqValue::Finite(n) => finite.push(n),
                SeqValue::UnknownAbove(d) => {
                    cap_note = Some(d);
                    break;
                }
                SeqValue::Infinite => break,
            }
        }
        Sequence { finite, cap_note }
    }

    /// Star product: (s*t)(k) = min { s(i) + t(j) | i + j = k }.
    pub fn star(&self, other: &Sequence) -> Sequence {
        let limit = self.finite.len() + other.finite.len();
        let mut finite = Vec::new();
        let mut cap_note = None;
        for k in 0..=limit {
            let candidates = (0..=k).map(|i| self.at(i).add(other.at(k - i)));
            match SeqValue::min_of(candidates) {
                SeqValue::Finite(n) => finite.push(n),
                SeqValue::UnknownAbove(d) => {
                    cap_note = Some(d);
                    break;
                }
                SeqValue::Infinite => break,
            }
        }
        Sequence { finite, cap_note }
    }

    /// Least sequence `t` that majorizes the known prefix of `self`, has
    /// strictly increasing values, and satisfies t(k+l) >= t(k) + t(l) for
    /// all k, l >= 1, computed out to `index_cap`. Entries of `self` past its
    /// known prefix are treated as unconstrained, matching the convention of
    /// deleting terms not yet known.
    pub fn superadditive_closure(&self, index_cap: u64) -> Sequence {
        let cap = index_cap as usize;
        let mut t: Vec<u64> = vec![0];
        for k in 1..=cap {
            let mut val = t[k - 1] + 1;
            for i in 1..k {
                val = val.max(t[i] + t[k - i]);
            }
            match self.finite.get(k) {
                Some(&s) => val = val.max(s),
                None => {
                    if let Some(d) = self.cap_note {
                        // the input is only known to exceed d here; stop with
                        // the same uncertainty rather than invent values
                        let lb = val.max(d + 1);
                        return Sequence { finite: t, cap_note: Some(lb - 1) };
                    }
                }
            }
            t.push(val);
        }
        // entries of self beyond index_cap would be lost; keep them visible
        if self.finite.len() > cap + 1 {
            t.extend_from_slice(&self.finite[cap + 1..]);
        }
        Sequence { finite: t, cap_note: self.cap_note }
    }

    /// Formality test: sigma(1) > 1 and k * sigma(k+1) >= (k+1) * sigma(k)
    /// for every k >= 1 with sigma(k+1) finite. Exact integer arithmetic.
    pub fn is_formal(&self) -> bool {
        if let Some(&v1) = self.finite.get(1) {
            if v1 <= 1 {
                return false;
            }
        }
        for k in 1..self.finite.len().saturating_sub(1) {
            let k64 = k as u64;
            if k64 * self.finite[k + 1] < (k64 + 1) * self.finite[k] {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Sequence {
    /// Abbreviated style with trailing infinities suppressed: `(0,3,7,10)`,
    /// or `(0,3,...)` when a cap note leaves later entries unknown.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.finite.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        if self.cap_note.is_some() {
            write!(f, ",...")?;
        }
        write!(f, ")")
    }
}

/// Bounds on cat(X) derived from the length of sigma_X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatBounds {
    pub lower: u64,
    pub upper: Option<u64>,
}

/// For finite-dimensional X, cat(X) equals the length; otherwise the length
/// bounds cat(X) between itself and its double.
pub fn cat_bounds_from_length(len: u64, finite_dimensional: bool) -> CatBounds {
    if finite_dimensional {
        CatBounds { lower: len, upper: Some(len) }
    } else {
        CatBounds { lower: len, upper: Some(2 * len) }
    }
}

/// Enumerate every formal sequence with finite values bounded by `max_val`
/// and length between 1 and `max_len`, in depth-first order.
pub fn enumerate_formal_sequences(max_val: u64, max_len: usize) -> Vec<Sequence> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = vec![vec![0]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() > 1 {
            out.push(Sequence::from_finite(prefix.clone()).unwrap());
        }
        if prefix.len() > max_len {
            continue;
        }
        let k = prefix.len() - 1;
        let lo = if k == 0 {
            2
        } else {
            let (k, v) = (k as u64, prefix[k]);
            // least v' with k * v' >= (k+1) * v, and strictly larger than v
            ((k + 1) * v).div_ceil(k).max(v + 1)
        };
        for v in lo..=max_val {
            let mut next = prefix.clone();
            next.push(v);
            if next.len() - 1 <= max_len {
                stack.push(next);
            }
        }
    }
    out
}

/// The optimal k-term sequence with tau(k) = n: writing n = kx + r with
/// 0 <= r < k and s = k - r, tau climbs by x for s steps and by x + 1 for the
/// remaining r steps. It is the pointwise largest formal sequence of length k
/// ending at n (provided n >= 2k, so that x >= 2).
pub fn optimal_sequence(k: u64, n: u64) -> Result<Sequence, SeqError> {
    if k == 0 || k > n {
        return Err(SeqError::BadInput(format!(
            "optimal sequence needs 0 < k <= n, got k = {k}, n = {n}"
        )));
    }
    let x = n / k;
    let r = n % k;
    let s = k - r;
    let mut finite = vec![0];
    for i in 1..=s {
        finite.push(i * x);
    }
    for j in 1..=r {
        finite.push(s * x + j * (x + 1));
    }
    debug_assert_eq!(*finite.last().unwrap(), n);
    Ok(Sequence { finite, cap_note: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(vals: &[u64]) -> Sequence {
        Sequence::from_finite(vals.to_vec()).unwrap()
    }

    #[test]
    fn make_sequence_validates() {
        let s = Sequence::new(&[
            SeqEntry::Finite(0),
            SeqEntry::Finite(3),
            SeqEntry::Finite(7),
            SeqEntry::Finite(10),
        ])
        .unwrap();
        assert_eq!(s.length().unwrap(), 3);

        assert_eq!(Sequence::new(&[SeqEntry::Finite(0)]).unwrap().length().unwrap(), 0);

        assert_eq!(
            Sequence::new(&[SeqEntry::Finite(0), SeqEntry::Finite(3), SeqEntry::Finite(3)]),
            Err(SeqError::NotMonotone(3, 3))
        );
        assert_eq!(
            Sequence::new(&[SeqEntry::Finite(1), SeqEntry::Finite(3)]),
            Err(SeqError::BadOrigin(Some(1)))
        );
        assert_eq!(Sequence::new(&[]), Err(SeqError::BadOrigin(None)));
        assert_eq!(
            Sequence::new(&[SeqEntry::Finite(0), SeqEntry::Infinite, SeqEntry::Finite(4)]),
            Err(SeqError::FiniteAfterInfinite(4))
        );
        // trailing infinities normalize away
        let s = Sequence::new(&[SeqEntry::Finite(0), SeqEntry::Finite(4), SeqEntry::Infinite])
            .unwrap();
        assert_eq!(s, seq(&[0, 4]));
        assert_eq!(s.length().unwrap(), 1);
    }

    #[test]
    fn min_examples() {
        assert_eq!(seq(&[0, 3, 7, 10]).min(&seq(&[0, 2])), seq(&[0, 2, 7, 10]));
        let s = seq(&[0, 3, 7, 10]);
        assert_eq!(s.min(&s), s);
        assert_eq!(seq(&[0, 3]).min(&seq(&[0, 3, 7])), seq(&[0, 3, 7]));
    }

    #[test]
    fn star_examples() {
        // (0,2,10) * (0,2) = (0,2,4,12)
        assert_eq!(seq(&[0, 2, 10]).star(&seq(&[0, 2])), seq(&[0, 2, 4, 12]));
        // (0) is the unit
        assert_eq!(seq(&[0, 3, 7]).star(&seq(&[0])), seq(&[0, 3, 7]));
        assert_eq!(seq(&[0, 3]).star(&seq(&[0, 7])), seq(&[0, 3, 10]));
    }

    /// Brute-force star product over plain optional values, as an oracle.
    fn star_naive(s: &Sequence, t: &Sequence) -> Vec<Option<u64>> {
        let at = |u: &Sequence, k: usize| u.finite_values().get(k).copied();
        let len = s.finite_values().len() + t.finite_values().len();
        (0..=len)
            .map(|k| {
                (0..=k)
                    .filter_map(|i| Some(at(s, i)? + at(t, k - i)?))
                    .min()
            })
            .collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(seq(&[0, 3]).superadditive_closure(4), seq(&[0, 3, 6, 9, 12]));
        assert_eq!(seq(&[0, 3, 7]).superadditive_closure(4), seq(&[0, 3, 7, 10, 14]));
        // already superadditive: closure is the identity
        let t = seq(&[0, 3, 7, 10, 14]);
        assert_eq!(t.superadditive_closure(4), t);
    }

    #[test]
    fn closure_with_cap_note_stays_unknown() {
        let s = seq(&[0, 3]).with_cap_note(14);
        let c = s.superadditive_closure(4);
        assert_eq!(c.finite_values(), &[0, 3]);
        // t(2) >= max(6, 15) = 15, so everything past the prefix is > 14
        assert_eq!(c.cap_note(), Some(14));
    }

    #[test]
    fn length_with_cap_note_is_ambiguous() {
        let s = seq(&[0, 4]).with_cap_note(9);
        assert_eq!(s.length(), Err(SeqError::CapAmbiguous(9)));
        assert_eq!(s.at(2), SeqValue::UnknownAbove(9));
    }

    #[test]
    fn min_with_cap_note() {
        // unknown beyond index 1 above degree 10 vs. a finite 7: 7 wins
        // exactly, and past the finite side the uncertainty remains
        let s = seq(&[0, 3]).with_cap_note(10);
        let t = seq(&[0, 3, 7]);
        let m = s.min(&t);
        assert_eq!(m.finite_values(), &[0, 3, 7]);
        assert_eq!(m.cap_note(), Some(10));
        // a finite 12 > 10 + 1 cannot win exactly
        let t2 = seq(&[0, 3, 12]);
        let m = s.min(&t2);
        assert_eq!(m.finite_values(), &[0, 3]);
        assert_eq!(m.cap_note(), Some(10));
    }

    #[test]
    fn is_formal_examples() {
        assert!(!seq(&[0, 3, 7, 10, 18, 21]).is_formal()); // 2*10 < 3*7 fails at k=2: 20 < 21
        assert!(!seq(&[0, 3, 8, 11]).is_formal()); // 11 < 3/2 * 8
        assert!(seq(&[0, 2, 4, 6]).is_formal());
        // (0,3,7,10): 2*10 >= 3*7 fails, so not formal
        assert!(!seq(&[0, 3, 7, 10]).is_formal());
        assert!(seq(&[0, 3, 7]).is_formal());
        assert!(!seq(&[0, 1, 2]).is_formal()); // sigma(1) must exceed 1
        assert!(seq(&[0]).is_formal());
    }

    #[test]
    fn optimal_sequence_examples() {
        assert_eq!(optimal_sequence(2, 7).unwrap(), seq(&[0, 3, 7]));
        assert_eq!(optimal_sequence(3, 7).unwrap(), seq(&[0, 2, 4, 7]));
        assert_eq!(optimal_sequence(1, 5).unwrap(), seq(&[0, 5]));
        assert!(optimal_sequence(0, 5).is_err());
        assert!(optimal_sequence(6, 5).is_err());
    }

    #[test]
    fn optimal_sequence_is_formal_when_n_at_least_2k() {
        // For n < 2k the formula yields tau(1) = 1, which no formal sequence
        // allows; the useful range n >= 2k is exactly where realization needs it.
        for k in 1..=40u64 {
            for n in k..=40 {
                let tau = optimal_sequence(k, n).unwrap();
                assert_eq!(tau.at(k as usize), SeqValue::Finite(n));
                assert_eq!(tau.length().unwrap(), k);
                if n >= 2 * k {
                    assert!(tau.is_formal(), "tau({k},{n}) = {tau} should be formal");
                } else {
                    assert_eq!(tau.finite_values()[1], 1);
                }
            }
        }
    }

    #[test]
    fn cat_bounds() {
        assert_eq!(
            cat_bounds_from_length(3, true),
            CatBounds { lower: 3, upper: Some(3) }
        );
        assert_eq!(
            cat_bounds_from_length(1, false),
            CatBounds { lower: 1, upper: Some(2) }
        );
        assert_eq!(
            cat_bounds_from_length(0, false),
            CatBounds { lower: 0, upper: Some(0) }
        );
    }

    #[test]
    fn optimal_sequence_majorizes_formal_sequences() {
        // every formal sigma with sigma(k) = n satisfies sigma <= tau(k, n)
        for sigma in enumerate_formal_sequences(20, 6) {
            for k in 1..=sigma.length().unwrap() {
                let SeqValue::Finite(n) = sigma.at(k as usize) else { unreachable!() };
                let tau = optimal_sequence(k, n).unwrap();
                for j in 0..=k as usize {
                    let SeqValue::Finite(sv) = sigma.at(j) else { unreachable!() };
                    let SeqValue::Finite(tv) = tau.at(j) else { unreachable!() };
                    assert!(sv <= tv, "sigma = {sigma}, tau = {tau}, j = {j}");
                }
            }
        }
    }

    fn arb_sequence() -> impl Strategy<Value = Sequence> {
        proptest::collection::vec(1u64..=12, 0..6).prop_map(|steps| {
            let mut finite = vec![0];
            for s in steps {
                finite.push(finite.last().unwrap() + s);
            }
            Sequence::from_finite(finite).unwrap()
        })
    }

    proptest! {
        #[test]
        fn min_is_commutative_and_idempotent(s in arb_sequence(), t in arb_sequence()) {
            prop_assert_eq!(s.min(&t), t.min(&s));
            prop_assert_eq!(s.min(&s), s);
        }

        #[test]
        fn star_is_commutative(s in arb_sequence(), t in arb_sequence()) {
            prop_assert_eq!(s.star(&t), t.star(&s));
        }

        #[test]
        fn star_is_associative(s in arb_sequence(), t in arb_sequence(), u in arb_sequence()) {
            prop_assert_eq!(s.star(&t).star(&u), s.star(&t.star(&u)));
        }

        #[test]
        fn star_unit(s in arb_sequence()) {
            let unit = Sequence::from_finite(vec![0]).unwrap();
            prop_assert_eq!(s.star(&unit), s);
        }

        #[test]
        fn star_matches_naive(s in arb_sequence(), t in arb_sequence()) {
            let fast = s.star(&t);
            for (k, expect) in star_naive(&s, &t).into_iter().enumerate() {
                match expect {
                    Some(n) => prop_assert_eq!(fast.at(k), SeqValue::Finite(n)),
                    None => prop_assert_eq!(fast.at(k), SeqValue::Infinite),
                }
            }
        }

        #[test]
        fn star_is_monotone(s in arb_sequence(), t in arb_sequence(), delta in 0u64..5) {
            // raise every positive value of s by delta: s <= s2 pointwise
            let s2 = Sequence::from_finite(
                s.finite_values()
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| if k == 0 { 0 } else { v + delta })
                    .collect(),
            )
            .unwrap();
            let a = s.star(&t);
            let b = s2.star(&t);
            for k in 0..=(a.finite_values().len() + b.finite_values().len()) {
                match (a.at(k), b.at(k)) {
                    (SeqValue::Finite(x), SeqValue::Finite(y)) => prop_assert!(x <= y),
                    (SeqValue::Finite(_), SeqValue::Infinite) => {}
                    (SeqValue::Infinite, SeqValue::Finite(_)) => {
                        prop_assert!(false, "star not monotone at {}", k)
                    }
                    _ => {}
                }
            }
        }

        #[test]
        fn closure_is_extensive_monotone_idempotent(s in arb_sequence()) {
            let cap = 8;
            let c = s.superadditive_closure(cap);
            // extensive on the known prefix
            for (k, &v) in s.finite_values().iter().enumerate() {
                if k <= cap as usize {
                    prop_assert!(c.finite_values()[k] >= v);
                }
            }
            // superadditive and strictly increasing on the cap range
            let vals = c.finite_values();
            for k in 1..vals.len().min(cap as usize + 1) {
                prop_assert!(vals[k] > vals[k - 1]);
                for i in 1..k {
                    prop_assert!(vals[k] >= vals[i] + vals[k - i]);
                }
            }
            // idempotent
            prop_assert_eq!(c.superadditive_closure(cap), c);
        }

        #[test]
        fn min_and_star_stay_valid(s in arb_sequence(), t in arb_sequence()) {
            for r in [s.min(&t), s.star(&t)] {
                prop_assert!(Sequence::from_finite(r.finite_values().to_vec()).is_ok());
            }
        }
    }
}
