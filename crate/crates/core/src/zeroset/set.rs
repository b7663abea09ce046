//! Zero sets `I_{k;n}`: ranges of the renewal walk restricted to `{0, …, n}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::law::StepLaw;
use crate::error::{Error, Result};

/// Sorted, deduplicated, nonempty subset of `{0, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSet {
    n: u64,
    points: Vec<u64>,
}

impl ZeroSet {
    /// Builds a zero set from sorted distinct points inside `{0, …, n}`.
    pub fn from_points(n: u64, points: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if points.windows(2).any(|w| w[0] >= w[1]) || *points.last().unwrap() > n {
            return Err(Error::InvalidParams {
                field: "points",
                reason: "must be strictly increasing and at most n".into(),
            });
        }
        Ok(Self { n, points })
    }

    /// The full set `{0, …, n}`.
    pub fn full(n: u64) -> Self {
        Self {
            n,
            points: (0..=n).collect(),
        }
    }

    pub fn horizon(&self) -> u64 {
        self.n
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> u64 {
        self.points[0]
    }

    pub fn max(&self) -> u64 {
        *self.points.last().unwrap()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// Points in the closed window `[lo, hi]`.
    pub fn window(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.points.partition_point(|&p| p < lo);
        let b = self.points.partition_point(|&p| p <= hi);
        &self.points[a..b.max(a)]
    }
}

/// `I_{0;n}`: initial position with `P(j) ∝ F̄(j)` followed by i.i.d. steps.
pub fn sample_zero_set<R: Rng + ?Sized>(n: u64, law: &StepLaw, rng: &mut R) -> ZeroSet {
    let mut points = Vec::new();
    walk_into(n, law, rng, &mut points);
    ZeroSet { n, points }
}

/// Appends the points of a fresh zero set to `buf` (cleared first).
pub(crate) fn walk_into<R: Rng + ?Sized>(n: u64, law: &StepLaw, rng: &mut R, buf: &mut Vec<u64>) {
    buf.clear();
    let mut pos = law.sample_initial_position(n, rng);
    while pos <= n {
        buf.push(pos);
        pos = pos.saturating_add(law.sample_step(rng));
    }
}

/// Whether a fresh zero set meets `target`, without materializing it.
pub(crate) fn walk_meets<R: Rng + ?Sized>(target: &[u64], n: u64, law: &StepLaw, rng: &mut R) -> bool {
    let mut pos = law.sample_initial_position(n, rng);
    let mut i = 0;
    let last = match target.last() {
        Some(&l) => l,
        None => return false,
    };
    while pos <= last {
        while target[i] < pos {
            i += 1;
        }
        if target[i] == pos {
            return true;
        }
        pos = pos.saturating_add(law.sample_step(rng));
    }
    false
}

/// Sorted intersection by linear merge.
pub fn intersect(a: &ZeroSet, b: &ZeroSet) -> Result<Vec<u64>> {
    if a.n != b.n {
        return Err(Error::HorizonMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(intersect_sorted(&a.points, &b.points))
}

pub(crate) fn intersect_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Gap-and-varint encoding: horizon, count, first point, then successive gaps,
/// each as unsigned LEB128.
pub fn encode(set: &ZeroSet) -> Vec<u8> {
    let mut out = Vec::new();
    put_varint(&mut out, set.n);
    put_varint(&mut out, set.points.len() as u64);
    let mut prev = 0;
    for (i, &p) in set.points.iter().enumerate() {
        put_varint(&mut out, if i == 0 { p } else { p - prev });
        prev = p;
    }
    out
}

/// Inverse of [`encode`]; returns the set and the number of bytes consumed.
pub fn decode(bytes: &[u8]) -> Result<(ZeroSet, usize)> {
    let mut at = 0;
    let n = get_varint(bytes, &mut at)?;
    let len = get_varint(bytes, &mut at)? as usize;
    let mut points = Vec::with_capacity(len.min(bytes.len()));
    let mut prev = 0u64;
    for i in 0..len {
        let d = get_varint(bytes, &mut at)?;
        let p = if i == 0 {
            d
        } else {
            if d == 0 {
                return Err(Error::Decode("zero gap"));
            }
            prev.checked_add(d).ok_or(Error::Decode("overflow"))?
        };
        points.push(p);
        prev = p;
    }
    let set = ZeroSet::from_points(n, points).map_err(|_| Error::Decode("invalid set"))?;
    Ok((set, at))
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

fn get_varint(bytes: &[u8], at: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let b = *bytes.get(*at).ok_or(Error::Decode("truncated varint"))?;
        *at += 1;
        v |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err(Error::Decode("varint too long"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ModelParams;
    use crate::rng::stream;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn law() -> StepLaw {
        StepLaw::from_params(&ModelParams::default()).unwrap()
    }

    #[test]
    fn sets_are_valid() {
        let l = law();
        let mut rng = stream(60, 0);
        for &n in &[0u64, 1, 10, 1000, 100_000] {
            for _ in 0..200 {
                let s = sample_zero_set(n, &l, &mut rng);
                assert!(!s.is_empty());
                assert!(s.points().windows(2).all(|w| w[0] < w[1]));
                assert!(s.max() <= n);
            }
        }
    }

    #[test]
    fn intersect_basics() {
        let a = ZeroSet::from_points(10, vec![1, 3, 5]).unwrap();
        assert_eq!(intersect(&a, &a).unwrap(), vec![1, 3, 5]);
        let b = ZeroSet::from_points(10, vec![2]).unwrap();
        let c = ZeroSet::from_points(10, vec![4]).unwrap();
        assert!(intersect(&b, &c).unwrap().is_empty());
        let d = ZeroSet::from_points(11, vec![2]).unwrap();
        assert!(intersect(&b, &d).is_err());
    }

    #[test]
    fn intersect_matches_hash_oracle() {
        let l = law();
        let mut rng = stream(61, 0);
        for _ in 0..500 {
            let a = sample_zero_set(2000, &l, &mut rng);
            let b = sample_zero_set(2000, &l, &mut rng);
            let ha: HashSet<u64> = a.points().iter().copied().collect();
            let mut want: Vec<u64> = b.points().iter().copied().filter(|p| ha.contains(p)).collect();
            want.sort_unstable();
            assert_eq!(intersect(&a, &b).unwrap(), want);
            let mut r2 = stream(62, 0);
            let mut r3 = stream(62, 0);
            let fresh = sample_zero_set(2000, &l, &mut r2);
            assert_eq!(walk_meets(a.points(), 2000, &l, &mut r3), !intersect(&a, &fresh).unwrap().is_empty());
        }
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(decode(&[0x80]).is_err());
        assert!(decode(&[5, 2, 1, 0]).is_err());
        assert!(decode(&[1, 1, 9]).is_err());
    }

    proptest! {
        #[test]
        fn varint_round_trip(mut pts in prop::collection::btree_set(0u64..1_000_000_000_000, 1..50)) {
            let v: Vec<u64> = std::mem::take(&mut pts).into_iter().collect();
            let n = *v.last().unwrap() + 7;
            let s = ZeroSet::from_points(n, v).unwrap();
            let bytes = encode(&s);
            let (back, used) = decode(&bytes).unwrap();
            prop_assert_eq!(used, bytes.len());
            prop_assert_eq!(back, s);
        }
    }
}
