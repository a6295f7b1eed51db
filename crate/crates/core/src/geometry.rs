//! Exact integer points and closed axis-parallel boxes in `Z^d`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::setsystem::SetSystem;

/// A labelled point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub label: String,
    #[serde(with = "int_vec")]
    pub coords: Vec<BigInt>,
}

/// A labelled closed box `[lo_1, hi_1] x ... x [lo_d, hi_d]`. A box with
/// `lo_i = hi_i` on some axes stands for a line, flat or hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisBox {
    pub label: String,
    #[serde(with = "int_vec")]
    pub lo: Vec<BigInt>,
    #[serde(with = "int_vec")]
    pub hi: Vec<BigInt>,
}

impl Point {
    pub fn new(label: impl Into<String>, coords: Vec<BigInt>) -> Self {
        Point {
            label: label.into(),
            coords,
        }
    }

    pub fn from_i64(label: impl Into<String>, coords: &[i64]) -> Self {
        Point::new(label, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl AxisBox {
    pub fn new(label: impl Into<String>, lo: Vec<BigInt>, hi: Vec<BigInt>) -> Self {
        AxisBox {
            label: label.into(),
            lo,
            hi,
        }
    }

    pub fn from_i64(label: impl Into<String>, lo: &[i64], hi: &[i64]) -> Self {
        AxisBox::new(
            label,
            lo.iter().map(|&c| BigInt::from(c)).collect(),
            hi.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// The smallest box containing all `points`, or `None` if there are none.
    pub fn bounding<'a>(label: impl Into<String>, points: impl IntoIterator<Item = &'a [BigInt]>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in it {
            for (i, c) in p.iter().enumerate() {
                if *c < lo[i] {
                    lo[i] = c.clone();
                }
                if *c > hi[i] {
                    hi[i] = c.clone();
                }
            }
        }
        Some(AxisBox::new(label, lo, hi))
    }

    /// All `2^d` corners, in binary order of the choice of `hi` per axis.
    pub fn corners(&self) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            self.hi[i].clone()
                        } else {
                            self.lo[i].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn contains_coords(&self, p: &[BigInt]) -> bool {
        p.iter()
            .zip(&self.lo)
            .zip(&self.hi)
            .all(|((c, lo), hi)| lo <= c && c <= hi)
    }
}

/// Closed containment test.
pub fn contains(b: &AxisBox, p: &Point) -> Result<bool> {
    if b.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: p.dim(),
        });
    }
    Ok(b.contains_coords(&p.coords))
}

/// Properties a generator asserts about its output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
    /// Largest `t` for which the system is claimed `t`-disjunct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjunct: Option<usize>,
    /// A `t` for which the system is claimed not `t`-disjunct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_disjunct: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separable: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_separable: Option<usize>,
}

impl Claims {
    pub fn is_empty(&self) -> bool {
        *self == Claims::default()
    }

    pub fn named(construction: &str, params: &[(&str, i64)]) -> Self {
        Claims {
            construction: Some(construction.to_string()),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ..Default::default()
        }
    }
}

/// Labelled points and boxes in a common dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    dim: usize,
    points: Vec<Point>,
    boxes: Vec<AxisBox>,
    #[serde(skip_serializing_if = "Claims::is_empty")]
    claims: Claims,
}

impl Config {
    pub fn new(dim: usize, points: Vec<Point>, boxes: Vec<AxisBox>) -> Result<Self> {
        let config = Config {
            dim,
            points,
            boxes,
            claims: Claims::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_claims(mut self, claims: Claims) -> Self {
        self.claims = claims;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        let check = |found: usize| {
            if found == self.dim {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found,
                })
            }
        };
        let mut seen = HashSet::new();
        for p in &self.points {
            check(p.dim())?;
            if !seen.insert(p.label.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate point label {:?}", p.label)));
            }
        }
        seen.clear();
        for b in &self.boxes {
            check(b.lo.len())?;
            check(b.hi.len())?;
            if b.lo.iter().zip(&b.hi).any(|(lo, hi)| lo > hi) {
                return Err(Error::InvalidConfig(format!("box {:?} has lo > hi", b.label)));
            }
            if !seen.insert(b.label.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate box label {:?}", b.label)));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn claims(&self) -> &Claims {
        &self.claims
    }

    pub fn claims_mut(&mut self) -> &mut Claims {
        &mut self.claims
    }

    /// Every box corner, box by box.
    pub fn corners(&self) -> Vec<Vec<BigInt>> {
        self.boxes.iter().flat_map(AxisBox::corners).collect()
    }

    /// The set system with one item per point and one test per box.
    /// Duplicate boxes stay separate tests. Fails only for a configuration
    /// without points, since a set system needs at least one item.
    pub fn induce(&self) -> Result<SetSystem> {
        if self.points.is_empty() {
            return Err(Error::InvalidConfig("no points to induce a set system on".into()));
        }
        if self.points.len() as u128 * self.boxes.len() as u128 > crate::setsystem::MAX_INCIDENCES {
            return Err(Error::InvalidConfig(format!(
                "{} points by {} boxes is too large to induce",
                self.points.len(),
                self.boxes.len()
            )));
        }
        let row = |p: &Point| {
            BitSet::from_indices(
                self.boxes.len(),
                self.boxes
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.contains_coords(&p.coords))
                    .map(|(j, _)| j),
            )
        };
        let rows: Vec<BitSet> = if self.points.len() * self.boxes.len() > 4096 {
            self.points.par_iter().map(row).collect()
        } else {
            self.points.iter().map(row).collect()
        };
        SetSystem::from_bit_rows(self.boxes.len(), rows)?.with_labels(
            self.points.iter().map(|p| p.label.clone()).collect(),
            self.boxes.iter().map(|b| b.label.clone()).collect(),
        )
    }

    /// True iff on every axis all point coordinates and all facet
    /// coordinates are pairwise distinct.
    pub fn is_general_position(&self) -> bool {
        (0..self.dim).all(|axis| {
            let mut seen = HashSet::new();
            self.points.iter().all(|p| seen.insert(&p.coords[axis]))
                && self
                    .boxes
                    .iter()
                    .all(|b| seen.insert(&b.lo[axis]) && seen.insert(&b.hi[axis]))
        })
    }

    /// An equivalent configuration in general position.
    pub fn to_general_position(&self) -> Config {
        self.to_general_position_report().0
    }

    /// Like [`Config::to_general_position`], also listing the index pairs of
    /// points that coincided in the input. Such points are separated too:
    /// the rank rule places them strictly between the facets at their
    /// common coordinate, so their incidence is kept.
    ///
    /// Per axis, the events sharing a value `v` are ordered lower facets,
    /// then points, then upper facets (ties by index) and the event of rank
    /// `r` moves to `v * s + r`, where `s` is the largest number of events
    /// sharing a value on that axis. A configuration already in general
    /// position is returned unchanged.
    pub fn to_general_position_report(&self) -> (Config, Vec<(usize, usize)>) {
        let mut out = self.clone();
        for axis in 0..self.dim {
            // (value, kind, index): kind 0 = lower facet, 1 = point, 2 = upper facet
            let mut events: Vec<(&BigInt, u8, usize)> = Vec::with_capacity(self.points.len() + 2 * self.boxes.len());
            events.extend(self.points.iter().enumerate().map(|(i, p)| (&p.coords[axis], 1, i)));
            for (j, b) in self.boxes.iter().enumerate() {
                events.push((&b.lo[axis], 0, j));
                events.push((&b.hi[axis], 2, j));
            }
            events.sort();
            let mut spread = 1usize;
            let mut run = 0usize;
            for w in 0..events.len() {
                run = if w > 0 && events[w - 1].0 == events[w].0 {
                    run + 1
                } else {
                    1
                };
                spread = spread.max(run);
            }
            let spread = BigInt::from(spread);
            let mut rank = 0usize;
            for w in 0..events.len() {
                rank = if w > 0 && events[w - 1].0 == events[w].0 {
                    rank + 1
                } else {
                    0
                };
                let (value, kind, idx) = events[w];
                let moved = value * &spread + rank;
                match kind {
                    0 => out.boxes[idx].lo[axis] = moved,
                    1 => out.points[idx].coords[axis] = moved,
                    _ => out.boxes[idx].hi[axis] = moved,
                }
            }
        }
        let mut coincident = Vec::new();
        let mut first: BTreeMap<&[BigInt], usize> = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            match first.get(p.coords.as_slice()) {
                Some(&j) => coincident.push((j, i)),
                None => {
                    first.insert(&p.coords, i);
                }
            }
        }
        (out, coincident)
    }

    /// An equivalent configuration whose coordinates are integers in
    /// `[1, 4n]` for `n` boxes.
    ///
    /// After moving to general position, the sorted facet coordinates
    /// `f_1 < ... < f_F` on each axis map to `2, 4, ..., 2F`. Points strictly
    /// between `f_j` and `f_{j+1}` share the strip coordinate `2j + 1`;
    /// points outside every facet lie in no box and map to `1`.
    pub fn compress_to_grid(&self) -> Result<Config> {
        if self.boxes.is_empty() && self.points.len() > 1 {
            return Err(Error::InvalidConfig(format!(
                "{} points cannot be placed on a grid of side 0",
                self.points.len()
            )));
        }
        let gp = self.to_general_position();
        let mut out = gp.clone();
        for axis in 0..self.dim {
            let mut facets: Vec<&BigInt> = gp.boxes.iter().flat_map(|b| [&b.lo[axis], &b.hi[axis]]).collect();
            facets.sort();
            let rank = |v: &BigInt| facets.partition_point(|f| *f < v);
            for (j, b) in gp.boxes.iter().enumerate() {
                out.boxes[j].lo[axis] = BigInt::from(2 * (rank(&b.lo[axis]) + 1));
                out.boxes[j].hi[axis] = BigInt::from(2 * (rank(&b.hi[axis]) + 1));
            }
            for (i, p) in gp.points.iter().enumerate() {
                let below = rank(&p.coords[axis]);
                let strip = if below == 0 || below == facets.len() {
                    1
                } else {
                    2 * below + 1
                };
                out.points[i].coords[axis] = BigInt::from(strip);
            }
        }
        Ok(out)
    }

    /// Point coordinates as `i64`, or an error naming the first that does
    /// not fit.
    pub fn points_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.points.iter().map(|p| to_i64_vec(&p.coords)).collect()
    }
}

pub(crate) fn to_i64_vec(coords: &[BigInt]) -> Result<Vec<i64>> {
    coords
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::CoordinateOverflow(c.to_string())))
        .collect()
}

#[derive(Deserialize)]
struct ConfigJson {
    dim: usize,
    #[serde(default)]
    points: Vec<Point>,
    #[serde(default)]
    boxes: Vec<AxisBox>,
    #[serde(default)]
    claims: Claims,
}

impl<'de> Deserialize<'de> for Config {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ConfigJson::deserialize(deserializer)?;
        Config::new(raw.dim, raw.points, raw.boxes)
            .map(|c| c.with_claims(raw.claims))
            .map_err(serde::de::Error::custom)
    }
}

/// Integers as JSON numbers when they fit in 64 bits, decimal strings
/// otherwise. Both forms are accepted on input.
pub(crate) mod int_vec {
    use std::fmt;

    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::{self, SeqAccess, Visitor};
    use serde::ser::SerializeSeq;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            match x.to_i64() {
                Some(small) => seq.serialize_element(&small)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }

    struct Int(BigInt);

    impl<'de> de::Deserialize<'de> for Int {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            struct IntVisitor;
            impl<'de> Visitor<'de> for IntVisitor {
                type Value = Int;
                fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                    f.write_str("an integer or a decimal integer string")
                }
                fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                    Ok(Int(v.into()))
                }
                fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                    Ok(Int(v.into()))
                }
                fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                    let digits = v.strip_prefix('-').unwrap_or(v);
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(E::custom(format!("not a decimal integer: {v:?}")));
                    }
                    v.parse().map(Int).map_err(E::custom)
                }
            }
            d.deserialize_any(IntVisitor)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        struct SeqVisitor;
        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = Vec<BigInt>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<BigInt>, A::Error> {
                let mut out = Vec::new();
                while let Some(Int(x)) = seq.next_element()? {
                    out.push(x);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(SeqVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(lo: i64, hi: i64) -> AxisBox {
        AxisBox::from_i64("b", &[lo, lo], &[hi, hi])
    }

    #[test]
    fn containment_is_closed() {
        let b = square(0, 2);
        assert!(contains(&b, &Point::from_i64("p", &[2, 2])).unwrap());
        assert!(!contains(&b, &Point::from_i64("p", &[3, 1])).unwrap());
        let line = AxisBox::from_i64("l", &[1, 0], &[1, 5]);
        assert!(contains(&line, &Point::from_i64("p", &[1, 3])).unwrap());
        assert!(matches!(
            contains(&b, &Point::from_i64("p", &[1])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn validation() {
        assert!(Config::new(0, vec![], vec![]).is_err());
        assert!(Config::new(2, vec![Point::from_i64("a", &[1])], vec![]).is_err());
        assert!(Config::new(1, vec![], vec![AxisBox::from_i64("b", &[2], &[1])]).is_err());
        let dup = vec![Point::from_i64("a", &[1]), Point::from_i64("a", &[2])];
        assert!(Config::new(1, dup, vec![]).is_err());
    }

    #[test]
    fn induce_without_boxes_gives_empty_rows() {
        let c = Config::new(
            2,
            vec![Point::from_i64("a", &[1, 1]), Point::from_i64("b", &[2, 2])],
            vec![],
        )
        .unwrap();
        let sys = c.induce().unwrap();
        assert_eq!(sys.item_count(), 2);
        assert_eq!(sys.test_count(), 0);
        assert!(sys.rows().iter().all(BitSet::none));
    }

    #[test]
    fn general_position_separates_coincident_points() {
        let c = Config::new(
            1,
            vec![Point::from_i64("a", &[3]), Point::from_i64("b", &[3])],
            vec![AxisBox::from_i64("x", &[3], &[3]), AxisBox::from_i64("y", &[0], &[2])],
        )
        .unwrap();
        let (g, pairs) = c.to_general_position_report();
        assert_eq!(pairs, vec![(0, 1)]);
        assert!(g.is_general_position());
        assert_eq!(g.induce().unwrap(), c.induce().unwrap());
    }

    #[test]
    fn general_input_is_unchanged() {
        let c = Config::new(
            2,
            vec![Point::from_i64("a", &[1, 2])],
            vec![AxisBox::from_i64("x", &[0, 1], &[3, 4])],
        )
        .unwrap();
        assert!(c.is_general_position());
        assert_eq!(c.to_general_position(), c);
    }

    #[test]
    fn compression_aligns_points_in_a_strip() {
        let c = Config::new(
            1,
            vec![
                Point::from_i64("a", &[5]),
                Point::from_i64("b", &[7]),
                Point::from_i64("c", &[100]),
            ],
            vec![AxisBox::from_i64("x", &[4], &[8])],
        )
        .unwrap();
        let g = c.compress_to_grid().unwrap();
        let xs: Vec<i64> = g.points_i64().unwrap().into_iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![3, 3, 1]);
        assert_eq!(g.induce().unwrap(), c.induce().unwrap());
        let err = Config::new(1, vec![Point::from_i64("a", &[1]), Point::from_i64("b", &[2])], vec![]).unwrap();
        assert!(err.compress_to_grid().is_err());
    }

    #[test]
    fn big_coordinates_round_trip_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let c = Config::new(1, vec![Point::new("a", vec![big.clone()])], vec![]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""123456789012345678901234567890""#));
        let back: Config = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Config>(r#"{"dim":1,"points":[{"label":"a","coords":["1e3"]}]}"#).is_err());
        assert!(serde_json::from_str::<Config>(r#"{"dim":1,"points":[{"label":"a","coords":[1.5]}]}"#).is_err());
    }
}
