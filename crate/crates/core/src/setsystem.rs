//! Abstract set systems: items, tests, and exact checks of separability
//! and disjunctness, plus outcome simulation and decoding.
//!
//! All verifiers enumerate item subsets in a fixed order (by size, then
//! lexicographically by sorted index tuple) so the witness they report is
//! reproducible across runs and across the sequential and parallel paths.

use std::borrow::Cow;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::combinatorics::{binomial, find_combination, next_combination, subsets_up_to};
use crate::error::{Error, Result};
use crate::witness::{Verdict, Witness};

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest incidence matrix, in bits, a set system may hold.
pub const MAX_INCIDENCES: u128 = 1 << 30;

/// The union of incidence rows over an item subset.
pub type Signature = BitSet;

/// Which subset sizes a separability check or signature decoder admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubsetMode {
    /// Exactly `t` items.
    Exactly,
    /// Between 0 and `t` items; the empty subset is admissible.
    AtMost,
    /// Between 1 and `t` items.
    AtMostNonEmpty,
}

impl SubsetMode {
    fn sizes(self, t: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            SubsetMode::Exactly => t..=t,
            SubsetMode::AtMost => 0..=t,
            SubsetMode::AtMostNonEmpty => 1..=t,
        }
    }

    fn count(self, m: usize, t: usize) -> u128 {
        self.sizes(t).fold(0u128, |acc, s| acc.saturating_add(binomial(m, s)))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Maximum number of subsets a single check may enumerate.
    pub budget: u64,
    /// Spread per-item work over the rayon pool. Results are identical
    /// to the sequential path.
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

impl VerifyOptions {
    pub fn sequential() -> Self {
        VerifyOptions {
            parallel: false,
            ..Default::default()
        }
    }

    fn check(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            Err(Error::Budget {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

/// Test results: bit `j` is set iff test `j` is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub results: BitSet,
}

impl Outcome {
    pub fn positives(&self) -> Vec<usize> {
        self.results.iter_ones().collect()
    }
}

/// `m` items, `n` tests, and for every item the set of tests containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    test_count: usize,
    rows: Vec<BitSet>,
    item_labels: Vec<String>,
    test_labels: Vec<String>,
}

impl SetSystem {
    /// Builds a system from per-item lists of test indices.
    pub fn from_rows(test_count: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidSetSystem("at least one item is required".into()));
        }
        if rows.len() as u128 * test_count as u128 > MAX_INCIDENCES {
            return Err(Error::InvalidSetSystem(format!(
                "{} items by {test_count} tests exceeds {MAX_INCIDENCES} incidences",
                rows.len()
            )));
        }
        let mut bit_rows = Vec::with_capacity(rows.len());
        for row in rows {
            let mut bits = BitSet::new(test_count);
            for &j in row {
                if j >= test_count {
                    return Err(Error::TestOutOfRange {
                        index: j,
                        len: test_count,
                    });
                }
                bits.insert(j);
            }
            bit_rows.push(bits);
        }
        Ok(SetSystem {
            test_count,
            rows: bit_rows,
            item_labels: Vec::new(),
            test_labels: Vec::new(),
        })
    }

    pub fn from_bit_rows(test_count: usize, rows: Vec<BitSet>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidSetSystem("at least one item is required".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != test_count) {
            return Err(Error::InvalidSetSystem(format!(
                "row width {} differs from test count {test_count}",
                bad.len()
            )));
        }
        Ok(SetSystem {
            test_count,
            rows,
            item_labels: Vec::new(),
            test_labels: Vec::new(),
        })
    }

    /// Attaches labels. Either list may be empty to mean "unlabelled".
    pub fn with_labels(mut self, item_labels: Vec<String>, test_labels: Vec<String>) -> Result<Self> {
        if !item_labels.is_empty() && item_labels.len() != self.rows.len() {
            return Err(Error::InvalidSetSystem(format!(
                "{} item labels for {} items",
                item_labels.len(),
                self.rows.len()
            )));
        }
        if !test_labels.is_empty() && test_labels.len() != self.test_count {
            return Err(Error::InvalidSetSystem(format!(
                "{} test labels for {} tests",
                test_labels.len(),
                self.test_count
            )));
        }
        self.item_labels = item_labels;
        self.test_labels = test_labels;
        Ok(self)
    }

    pub fn item_count(&self) -> usize {
        self.rows.len()
    }

    pub fn test_count(&self) -> usize {
        self.test_count
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn row(&self, item: usize) -> &BitSet {
        &self.rows[item]
    }

    pub fn item_labels(&self) -> &[String] {
        &self.item_labels
    }

    pub fn test_labels(&self) -> &[String] {
        &self.test_labels
    }

    /// The item's label, or its index when the system is unlabelled.
    pub fn item_label(&self, item: usize) -> Cow<'_, str> {
        match self.item_labels.get(item) {
            Some(l) => Cow::Borrowed(l),
            None => Cow::Owned(item.to_string()),
        }
    }

    pub fn test_label(&self, test: usize) -> Cow<'_, str> {
        match self.test_labels.get(test) {
            Some(l) => Cow::Borrowed(l),
            None => Cow::Owned(test.to_string()),
        }
    }

    pub fn item_index(&self, label: &str) -> Option<usize> {
        if self.item_labels.is_empty() {
            label.parse().ok().filter(|i| *i < self.rows.len())
        } else {
            self.item_labels.iter().position(|l| l == label)
        }
    }

    fn check_items(&self, items: &[usize]) -> Result<()> {
        match items.iter().find(|&&i| i >= self.rows.len()) {
            Some(&index) => Err(Error::ItemOutOfRange {
                index,
                len: self.rows.len(),
            }),
            None => Ok(()),
        }
    }

    fn union_of(&self, items: &[usize], into: &mut BitSet) {
        into.clear();
        for &i in items {
            into.union_with(&self.rows[i]);
        }
    }

    /// The set of tests containing at least one of `items`.
    pub fn signature(&self, items: &[usize]) -> Result<Signature> {
        self.check_items(items)?;
        let mut sig = BitSet::new(self.test_count);
        self.union_of(items, &mut sig);
        Ok(sig)
    }

    /// Simulates the tests with `defectives` as the defective set.
    pub fn run_tests(&self, defectives: &[usize]) -> Result<Outcome> {
        Ok(Outcome {
            results: self.signature(defectives)?,
        })
    }

    fn require_more_items_than(&self, t: usize) -> Result<()> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be positive".into()));
        }
        if self.rows.len() <= t {
            return Err(Error::InvalidParameter(format!(
                "the property needs more than t = {t} items, the system has {}",
                self.rows.len()
            )));
        }
        Ok(())
    }

    /// Checks that no two distinct admissible subsets share a signature.
    ///
    /// Signatures are indexed by a 64-bit hash pointing at the first subset
    /// that produced it; a hash hit is confirmed bit-exactly before it is
    /// reported, and genuine hash clashes fall back to an exact map.
    pub fn verify_separable(&self, t: usize, mode: SubsetMode, opts: &VerifyOptions) -> Result<Verdict> {
        self.require_more_items_than(t)?;
        let m = self.rows.len();
        opts.check(mode.count(m, t))?;

        let mut index = SignatureIndex::default();
        for size in mode.sizes(t) {
            let found = enumerate_unions(&self.rows, self.test_count, size, |combo, sig| {
                index.insert_or_collide(self, combo, sig)
            });
            if let Some(w) = found {
                return Ok(Verdict::Refuted(w));
            }
        }
        Ok(Verdict::Holds)
    }

    /// Checks that no item's tests are all covered by `t` other items.
    ///
    /// For each item `x` the search only considers items whose trace on
    /// `x`'s tests is nonempty, keeps one item per distinct trace, and drops
    /// traces strictly contained in another. None of this changes whether a
    /// cover of size at most `t` exists.
    pub fn verify_disjunct(&self, t: usize, opts: &VerifyOptions) -> Result<Verdict> {
        self.require_more_items_than(t)?;
        let m = self.rows.len();

        let candidates: Vec<Vec<(usize, BitSet)>> = if opts.parallel {
            (0..m).into_par_iter().map(|x| self.cover_candidates(x)).collect()
        } else {
            (0..m).map(|x| self.cover_candidates(x)).collect()
        };
        let needed = candidates
            .iter()
            .fold(0u128, |acc, c| acc.saturating_add(subsets_up_to(c.len(), t)));
        opts.check(needed)?;

        let search = |x: usize| {
            self.first_cover(x, t, &candidates[x])
                .map(|cover| Witness::DisjunctCover { item: x, cover })
        };
        let found = if opts.parallel {
            (0..m).into_par_iter().filter_map(search).min_by_key(witness_item)
        } else {
            (0..m).find_map(search)
        };
        Ok(Verdict::from_option(found))
    }

    fn cover_candidates(&self, x: usize) -> Vec<(usize, BitSet)> {
        let target = &self.rows[x];
        let mut by_trace: HashMap<BitSet, usize> = HashMap::new();
        let mut distinct: Vec<(usize, BitSet)> = Vec::new();
        for (y, row) in self.rows.iter().enumerate() {
            if y == x {
                continue;
            }
            let trace = row.intersection(target);
            if trace.none() || by_trace.contains_key(&trace) {
                continue;
            }
            by_trace.insert(trace.clone(), y);
            distinct.push((y, trace));
        }
        let maximal: Vec<bool> = distinct
            .iter()
            .map(|(_, a)| !distinct.iter().any(|(_, b)| a != b && a.is_subset(b)))
            .collect();
        distinct
            .into_iter()
            .zip(maximal)
            .filter_map(|(c, keep)| keep.then_some(c))
            .collect()
    }

    fn first_cover(&self, x: usize, t: usize, candidates: &[(usize, BitSet)]) -> Option<Vec<usize>> {
        let target = &self.rows[x];
        let mut cover: Vec<usize> = Vec::new();
        if !target.none() {
            let traces: Vec<BitSet> = candidates.iter().map(|(_, tr)| tr.clone()).collect();
            let need = target.count_ones();
            let widest = traces.iter().map(BitSet::count_ones).max().unwrap_or(0);
            let mut hit = None;
            for size in 1..=t.min(traces.len()) {
                if size * widest < need {
                    continue;
                }
                hit = enumerate_unions(&traces, self.test_count, size, |combo, sig| {
                    (sig == target).then(|| combo.to_vec())
                });
                if hit.is_some() {
                    break;
                }
            }
            cover = hit?.into_iter().map(|c| candidates[c].0).collect();
        }
        // pad with the smallest unused items so |cover| = t
        let filler: Vec<usize> = (0..self.rows.len())
            .filter(|&y| y != x && !cover.contains(&y))
            .take(t.saturating_sub(cover.len()))
            .collect();
        cover.extend(filler);
        if cover.len() < t {
            return None;
        }
        cover.sort_unstable();
        Some(cover)
    }

    /// Keeps every item that appears in no negative test. Errors unless
    /// exactly `t` items survive.
    pub fn decode_disjunct(&self, outcome: &Outcome, t: usize) -> Result<Vec<usize>> {
        self.check_outcome(outcome)?;
        let survivors: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].is_subset(&outcome.results))
            .collect();
        if survivors.len() != t {
            return Err(Error::CardinalityMismatch {
                expected: t,
                found: survivors,
            });
        }
        Ok(survivors)
    }

    /// Returns the unique admissible subset whose signature equals the
    /// outcome. Only items contained in positive tests alone can take part,
    /// so the enumeration runs over those.
    pub fn decode_by_signature(
        &self,
        outcome: &Outcome,
        t: usize,
        mode: SubsetMode,
        opts: &VerifyOptions,
    ) -> Result<Vec<usize>> {
        self.check_outcome(outcome)?;
        let eligible: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].is_subset(&outcome.results))
            .collect();
        opts.check(mode.count(eligible.len(), t))?;
        let rows: Vec<BitSet> = eligible.iter().map(|&i| self.rows[i].clone()).collect();

        let mut first: Option<Vec<usize>> = None;
        for size in mode.sizes(t) {
            let second = enumerate_unions(&rows, self.test_count, size, |combo, sig| {
                if *sig != outcome.results {
                    return None;
                }
                let items: Vec<usize> = combo.iter().map(|&c| eligible[c]).collect();
                match &first {
                    None => {
                        first = Some(items);
                        None
                    }
                    Some(_) => Some(items),
                }
            });
            if let Some(second) = second {
                return Err(Error::Ambiguous(first.unwrap_or_default(), second));
            }
        }
        first.ok_or(Error::NoMatch)
    }

    fn check_outcome(&self, outcome: &Outcome) -> Result<()> {
        if outcome.results.len() != self.test_count {
            return Err(Error::InvalidParameter(format!(
                "outcome has {} results for {} tests",
                outcome.results.len(),
                self.test_count
            )));
        }
        Ok(())
    }
}

fn witness_item(w: &Witness) -> usize {
    match w {
        Witness::DisjunctCover { item, .. } => *item,
        _ => usize::MAX,
    }
}

/// Walks all `size`-subsets of `rows` lexicographically, handing each one
/// and the union of its rows to `visit`. Prefix unions are cached so a step
/// that changes position `i` recomputes only positions `i..`.
fn enumerate_unions<T>(
    rows: &[BitSet],
    width: usize,
    size: usize,
    mut visit: impl FnMut(&[usize], &BitSet) -> Option<T>,
) -> Option<T> {
    let n = rows.len();
    if size > n {
        return None;
    }
    if size == 0 {
        return visit(&[], &BitSet::new(width));
    }
    let mut combo: Vec<usize> = (0..size).collect();
    let mut prefix: Vec<BitSet> = vec![BitSet::new(width); size];
    let mut dirty = 0;
    loop {
        for i in dirty..size {
            let (before, rest) = prefix.split_at_mut(i);
            let slot = &mut rest[0];
            match before.last() {
                Some(prev) => slot.clone_from(prev),
                None => slot.clear(),
            }
            slot.union_with(&rows[combo[i]]);
        }
        if let Some(found) = visit(&combo, &prefix[size - 1]) {
            return Some(found);
        }
        let old = combo.clone();
        if !next_combination(&mut combo, n) {
            return None;
        }
        dirty = old.iter().zip(&combo).position(|(a, b)| a != b).unwrap_or(size);
    }
}

fn hash_words(sig: &BitSet) -> u64 {
    sig.words().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &w| {
        (h.rotate_left(5) ^ w).wrapping_mul(0x517c_c1b7_2722_0a95)
    })
}

/// Maps signatures to the first subset that produced them.
#[derive(Default)]
struct SignatureIndex {
    by_hash: HashMap<u64, u32>,
    clashes: HashMap<BitSet, u32>,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl SignatureIndex {
    fn subset(&self, slot: u32) -> Vec<usize> {
        let s = slot as usize;
        let lo = self.starts[s] as usize;
        let hi = self.starts.get(s + 1).map_or(self.items.len(), |&e| e as usize);
        self.items[lo..hi].iter().map(|&i| i as usize).collect()
    }

    fn push(&mut self, combo: &[usize]) -> u32 {
        let slot = self.starts.len() as u32;
        self.starts.push(self.items.len() as u32);
        self.items.extend(combo.iter().map(|&i| i as u32));
        slot
    }

    fn insert_or_collide(&mut self, sys: &SetSystem, combo: &[usize], sig: &BitSet) -> Option<Witness> {
        let h = hash_words(sig);
        let Some(&slot) = self.by_hash.get(&h) else {
            let slot = self.push(combo);
            self.by_hash.insert(h, slot);
            return None;
        };
        let prior = self.subset(slot);
        let mut prior_sig = BitSet::new(sys.test_count);
        sys.union_of(&prior, &mut prior_sig);
        if prior_sig == *sig {
            return Some(Witness::SeparabilityCollision {
                first: prior,
                second: combo.to_vec(),
            });
        }
        if let Some(&other) = self.clashes.get(sig) {
            return Some(Witness::SeparabilityCollision {
                first: self.subset(other),
                second: combo.to_vec(),
            });
        }
        let slot = self.push(combo);
        self.clashes.insert(sig.clone(), slot);
        None
    }
}

/// On-disk form: `{"m", "n", "rows", "item_labels", "test_labels"}`.
#[derive(Serialize, Deserialize)]
struct SetSystemJson {
    m: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
    #[serde(default)]
    item_labels: Vec<String>,
    #[serde(default)]
    test_labels: Vec<String>,
}

impl Serialize for SetSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetSystemJson {
            m: self.rows.len(),
            n: self.test_count,
            rows: self.rows.iter().map(|r| r.iter_ones().collect()).collect(),
            item_labels: self.item_labels.clone(),
            test_labels: self.test_labels.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SetSystemJson::deserialize(deserializer)?;
        if raw.rows.len() != raw.m {
            return Err(D::Error::custom(format!(
                "m = {} but {} rows given",
                raw.m,
                raw.rows.len()
            )));
        }
        SetSystem::from_rows(raw.n, &raw.rows)
            .and_then(|s| s.with_labels(raw.item_labels, raw.test_labels))
            .map_err(D::Error::custom)
    }
}

/// Convenience for callers that only need the verdict of a
/// separability check run sequentially with the default budget.
pub fn is_separable(sys: &SetSystem, t: usize, mode: SubsetMode) -> Result<bool> {
    sys.verify_separable(t, mode, &VerifyOptions::sequential())
        .map(|v| v.holds())
}

pub fn is_disjunct(sys: &SetSystem, t: usize) -> Result<bool> {
    sys.verify_disjunct(t, &VerifyOptions::sequential()).map(|v| v.holds())
}

/// Reference enumeration over every pair of admissible subsets; quadratic,
/// kept for cross-checking the indexed verifier on tiny systems.
pub fn separable_by_pairs(sys: &SetSystem, t: usize, mode: SubsetMode) -> bool {
    let m = sys.item_count();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for size in mode.sizes(t) {
        find_combination(m, size, |c| {
            subsets.push(c.to_vec());
            None::<()>
        });
    }
    let sigs: Vec<BitSet> = subsets.iter().map(|s| sys.signature(s).unwrap()).collect();
    for i in 0..sigs.len() {
        for j in i + 1..sigs.len() {
            if sigs[i] == sigs[j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_2x2() -> SetSystem {
        // items (1,1),(1,2),(2,1),(2,2); tests: rows y=1, y=2, columns x=1, x=2
        SetSystem::from_rows(4, &[vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3]]).unwrap()
    }

    #[test]
    fn signature_examples() {
        let sys = grid_2x2();
        assert!(sys.signature(&[]).unwrap().none());
        assert_eq!(sys.signature(&[0]).unwrap().iter_ones().collect::<Vec<_>>(), vec![0, 2]);
        assert!(sys.signature(&[0, 3]).unwrap().all());
        assert!(matches!(
            sys.signature(&[4]),
            Err(Error::ItemOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn opposite_corners_collide() {
        let sys = grid_2x2();
        let v = sys
            .verify_separable(2, SubsetMode::Exactly, &VerifyOptions::default())
            .unwrap();
        assert_eq!(
            v,
            Verdict::Refuted(Witness::SeparabilityCollision {
                first: vec![0, 3],
                second: vec![1, 2]
            })
        );
    }

    #[test]
    fn duplicate_rows_are_not_one_separable() {
        let sys = SetSystem::from_rows(3, &[vec![0, 1], vec![2], vec![0, 1]]).unwrap();
        let v = sys
            .verify_separable(1, SubsetMode::Exactly, &VerifyOptions::default())
            .unwrap();
        assert_eq!(
            v.witness(),
            Some(&Witness::SeparabilityCollision {
                first: vec![0],
                second: vec![2]
            })
        );
    }

    #[test]
    fn at_most_includes_empty_set() {
        let sys = SetSystem::from_rows(2, &[vec![0], vec![], vec![1]]).unwrap();
        let v = sys
            .verify_separable(1, SubsetMode::AtMost, &VerifyOptions::default())
            .unwrap();
        assert_eq!(
            v.witness(),
            Some(&Witness::SeparabilityCollision {
                first: vec![],
                second: vec![1]
            })
        );
        let v = sys
            .verify_separable(1, SubsetMode::AtMostNonEmpty, &VerifyOptions::default())
            .unwrap();
        assert!(v.holds());
    }

    #[test]
    fn budget_is_enforced() {
        let sys = grid_2x2();
        let opts = VerifyOptions {
            budget: 5,
            parallel: false,
        };
        assert!(matches!(
            sys.verify_separable(2, SubsetMode::Exactly, &opts),
            Err(Error::Budget { needed: 6, budget: 5 })
        ));
    }

    #[test]
    fn t_must_be_below_item_count() {
        let sys = grid_2x2();
        assert!(sys
            .verify_separable(4, SubsetMode::Exactly, &VerifyOptions::default())
            .is_err());
        assert!(sys.verify_disjunct(0, &VerifyOptions::default()).is_err());
    }

    #[test]
    fn disjunct_cover_is_padded_to_t() {
        // item 0 has no tests: any t items cover it
        let sys = SetSystem::from_rows(2, &[vec![], vec![0], vec![1], vec![0, 1]]).unwrap();
        let v = sys.verify_disjunct(2, &VerifyOptions::sequential()).unwrap();
        assert_eq!(
            v.witness(),
            Some(&Witness::DisjunctCover {
                item: 0,
                cover: vec![1, 2]
            })
        );
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let sys = SetSystem::from_rows(
            5,
            &[
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![4, 0],
                vec![0, 2],
                vec![1, 3],
            ],
        )
        .unwrap();
        for t in 1..=3 {
            let a = sys.verify_disjunct(t, &VerifyOptions::sequential()).unwrap();
            let b = sys.verify_disjunct(t, &VerifyOptions::default()).unwrap();
            assert_eq!(a, b, "t = {t}");
        }
    }

    #[test]
    fn decoders() {
        let sys = SetSystem::from_rows(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let out = sys.run_tests(&[0, 2]).unwrap();
        assert_eq!(sys.decode_disjunct(&out, 2).unwrap(), vec![0, 2]);
        assert!(matches!(
            sys.decode_disjunct(&out, 1),
            Err(Error::CardinalityMismatch { .. })
        ));
        let opts = VerifyOptions::default();
        assert_eq!(
            sys.decode_by_signature(&out, 2, SubsetMode::Exactly, &opts).unwrap(),
            vec![0, 2]
        );
        assert!(matches!(
            sys.decode_by_signature(&out, 1, SubsetMode::Exactly, &opts),
            Err(Error::NoMatch)
        ));
        let none = sys.run_tests(&[]).unwrap();
        assert_eq!(
            sys.decode_by_signature(&none, 2, SubsetMode::AtMost, &opts).unwrap(),
            Vec::<usize>::new()
        );
    }

    #[test]
    fn ambiguous_signature_reports_both_subsets() {
        let sys = grid_2x2();
        let out = Outcome {
            results: BitSet::from_indices(4, 0..4),
        };
        match sys.decode_by_signature(&out, 2, SubsetMode::Exactly, &VerifyOptions::default()) {
            Err(Error::Ambiguous(a, b)) => {
                assert_eq!(a, vec![0, 3]);
                assert_eq!(b, vec![1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_shape_is_stable() {
        let sys = grid_2x2()
            .with_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()], vec![])
            .unwrap();
        let text = serde_json::to_string(&sys).unwrap();
        assert_eq!(
            text,
            r#"{"m":4,"n":4,"rows":[[0,2],[1,2],[0,3],[1,3]],"item_labels":["a","b","c","d"],"test_labels":[]}"#
        );
        let back: SetSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn json_rejects_out_of_range_tests() {
        let bad = r#"{"m":1,"n":2,"rows":[[2]]}"#;
        assert!(serde_json::from_str::<SetSystem>(bad).is_err());
        let bad = r#"{"m":2,"n":2,"rows":[[1]]}"#;
        assert!(serde_json::from_str::<SetSystem>(bad).is_err());
        let bad = r#"{"m":0,"n":2,"rows":[]}"#;
        assert!(serde_json::from_str::<SetSystem>(bad).is_err());
    }
}
