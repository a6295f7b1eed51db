//! Forbidden point patterns, stabbing, weighted rectangle coverings of the
//! grid, and exhaustive extremal oracles on small grids.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{to_i64_vec, Config};
use crate::witness::{Verdict, Witness};

/// A point of the integer grid.
pub type GridPoint = Vec<i64>;

/// The patterns whose absence bounds the size of a point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    /// Four corners of an axis-parallel rectangle.
    InducedRectangle,
    /// `w, x, y, z` with `w1 < x1 = y1 < z1` and `w2 = x2 < y2 = z2`.
    ZShape,
    /// A center `x` and, for every axis `i`, a point differing from `x`
    /// only in coordinate `i`.
    Star(usize),
}

impl PatternKind {
    pub fn dim(self) -> usize {
        match self {
            PatternKind::InducedRectangle | PatternKind::ZShape => 2,
            PatternKind::Star(d) => d,
        }
    }

    fn check_dim(self, points: &[GridPoint]) -> Result<()> {
        match points.iter().find(|p| p.len() != self.dim()) {
            Some(p) => Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.len(),
            }),
            None if self.dim() == 0 => Err(Error::InvalidParameter("stars need dimension >= 1".into())),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PatternOptions {
    /// Also match Z-shapes reflected in the second axis
    /// (`w2 = x2 > y2 = z2`). These are reported only when no Z-shape in the
    /// stated orientation qualifies.
    pub mirrored_z: bool,
}

struct Index {
    sorted: Vec<GridPoint>,
    set: HashSet<GridPoint>,
    /// For every axis, points grouped by all other coordinates and sorted
    /// along the axis.
    lines: Vec<BTreeMap<GridPoint, Vec<i64>>>,
}

impl Index {
    fn new(points: &[GridPoint]) -> Self {
        let sorted: Vec<GridPoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let d = sorted.first().map_or(0, Vec::len);
        let mut lines: Vec<BTreeMap<GridPoint, Vec<i64>>> = vec![BTreeMap::new(); d];
        for p in &sorted {
            for (axis, map) in lines.iter_mut().enumerate() {
                map.entry(line_key(p, axis)).or_default().push(p[axis]);
            }
        }
        for map in &mut lines {
            for v in map.values_mut() {
                v.sort_unstable();
            }
        }
        Index {
            set: sorted.iter().cloned().collect(),
            sorted,
            lines,
        }
    }

    /// Coordinates along `axis` of the points sharing `p`'s other coordinates.
    fn line(&self, p: &GridPoint, axis: usize) -> &[i64] {
        self.lines[axis].get(&line_key(p, axis)).map_or(&[], Vec::as_slice)
    }
}

fn line_key(p: &GridPoint, axis: usize) -> GridPoint {
    let mut key = p.clone();
    key[axis] = 0;
    key
}

fn with(p: &GridPoint, axis: usize, v: i64) -> GridPoint {
    let mut q = p.clone();
    q[axis] = v;
    q
}

/// Visits every occurrence of `kind` in lexicographic order of its point
/// tuple until `visit` returns `Some`.
fn occurrences<T>(idx: &Index, kind: PatternKind, mut visit: impl FnMut(&[GridPoint]) -> Option<T>) -> Option<T> {
    match kind {
        PatternKind::InducedRectangle => {
            for p1 in &idx.sorted {
                let (a, r) = (p1[0], p1[1]);
                for &s in idx.line(p1, 1).iter().filter(|&&s| s > r) {
                    for &b in idx.line(p1, 0).iter().filter(|&&b| b > a) {
                        let p4 = vec![b, s];
                        if idx.set.contains(&p4) {
                            if let Some(t) = visit(&[p1.clone(), vec![a, s], vec![b, r], p4]) {
                                return Some(t);
                            }
                        }
                    }
                }
            }
            None
        }
        PatternKind::ZShape => {
            for w in &idx.sorted {
                let (a, r) = (w[0], w[1]);
                for &c in idx.line(w, 0).iter().filter(|&&c| c > a) {
                    let x = vec![c, r];
                    for &s in idx.line(&x, 1).iter().filter(|&&s| s > r) {
                        let y = vec![c, s];
                        for &e in idx.line(&y, 0).iter().filter(|&&e| e > c) {
                            if let Some(t) = visit(&[w.clone(), x.clone(), y.clone(), vec![e, s]]) {
                                return Some(t);
                            }
                        }
                    }
                }
            }
            None
        }
        PatternKind::Star(d) => {
            for center in &idx.sorted {
                let options: Vec<Vec<i64>> = (0..d)
                    .map(|axis| {
                        idx.line(center, axis)
                            .iter()
                            .copied()
                            .filter(|&v| v != center[axis])
                            .collect()
                    })
                    .collect();
                if options.iter().any(Vec::is_empty) {
                    continue;
                }
                let limits: Vec<usize> = options.iter().map(Vec::len).collect();
                let mut choice = vec![0usize; d];
                loop {
                    let mut tuple = vec![center.clone()];
                    tuple.extend((0..d).map(|axis| with(center, axis, options[axis][choice[axis]])));
                    if let Some(t) = visit(&tuple) {
                        return Some(t);
                    }
                    if !advance(&mut choice, &limits) {
                        break;
                    }
                }
            }
            None
        }
    }
}

/// Steps a mixed-radix counter, last digit fastest. Returns `false` after
/// the last value.
fn advance(digits: &mut [usize], limits: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < limits[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn mirror(points: &[GridPoint]) -> Vec<GridPoint> {
    points.iter().map(|p| vec![p[0], p[1].saturating_neg()]).collect()
}

fn first_occurrence<T>(
    points: &[GridPoint],
    kind: PatternKind,
    opts: &PatternOptions,
    mut visit: impl FnMut(&[GridPoint]) -> Option<T>,
) -> Result<Option<T>> {
    kind.check_dim(points)?;
    if let Some(t) = occurrences(&Index::new(points), kind, &mut visit) {
        return Ok(Some(t));
    }
    if kind == PatternKind::ZShape && opts.mirrored_z {
        let flipped = Index::new(&mirror(points));
        return Ok(occurrences(&flipped, kind, |occ| visit(&mirror(occ))));
    }
    Ok(None)
}

/// The lexicographically first occurrence of `kind` in `points`.
pub fn find_pattern(points: &[GridPoint], kind: PatternKind) -> Result<Option<Vec<GridPoint>>> {
    find_pattern_with(points, kind, &PatternOptions::default())
}

pub fn find_pattern_with(
    points: &[GridPoint],
    kind: PatternKind,
    opts: &PatternOptions,
) -> Result<Option<Vec<GridPoint>>> {
    first_occurrence(points, kind, opts, |occ| Some(occ.to_vec()))
}

fn bounds(points: &[GridPoint]) -> (GridPoint, GridPoint) {
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in points {
        for i in 0..p.len() {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (lo, hi)
}

fn strictly_inside(v: &[i64], lo: &[i64], hi: &[i64]) -> bool {
    v.iter().zip(lo).zip(hi).all(|((c, l), h)| l < c && c < h)
}

/// Holds iff every occurrence of `kind` in `p` has a point of `v` strictly
/// inside its bounding box; otherwise returns the first occurrence that
/// does not.
pub fn stabs(v: &[GridPoint], p: &[GridPoint], kind: PatternKind) -> Result<Verdict> {
    stabs_with(v, p, kind, &PatternOptions::default())
}

pub fn stabs_with(v: &[GridPoint], p: &[GridPoint], kind: PatternKind, opts: &PatternOptions) -> Result<Verdict> {
    kind.check_dim(v)?;
    let found = first_occurrence(p, kind, opts, |occ| {
        let (lo, hi) = bounds(occ);
        (!v.iter().any(|x| strictly_inside(x, &lo, &hi))).then(|| Witness::Pattern {
            pattern: kind,
            points: occ.to_vec(),
        })
    })?;
    Ok(Verdict::from_option(found))
}

/// Box corners stabbing the points of `config` after it is moved onto the
/// `[1, 4n]` grid, where no corner shares a coordinate with a point.
pub fn stabs_config(config: &Config, kind: PatternKind) -> Result<Verdict> {
    let grid = config.compress_to_grid()?;
    let corners = grid
        .corners()
        .iter()
        .map(|c| to_i64_vec(c))
        .collect::<Result<Vec<_>>>()?;
    stabs(&corners, &grid.points_i64()?, kind)
}

/// Weight function attached to a covering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Induced-rectangle capacity `ceil(sqrt(p)) q + p` for `p >= q`.
    #[serde(rename = "zar")]
    Zar,
    /// Z-shape capacity `C_Z (p + q)`.
    #[serde(rename = "zshape")]
    ZShape,
    /// Star capacity: the number of axis-parallel lines through the box.
    #[serde(rename = "star")]
    Star,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Zar => "zar",
            Scheme::ZShape => "zshape",
            Scheme::Star => "star",
        }
    }

    pub fn pattern(self, d: usize) -> PatternKind {
        match self {
            Scheme::Zar => PatternKind::InducedRectangle,
            Scheme::ZShape => PatternKind::ZShape,
            Scheme::Star => PatternKind::Star(d),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zar" => Ok(Scheme::Zar),
            "zshape" => Ok(Scheme::ZShape),
            "star" => Ok(Scheme::Star),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Smallest integer `c` with `z'(p x q) <= c (p + q)` on every grid up to
/// 5 x 5, as measured by [`brute_pattern_free_max`].
pub const C_Z: u128 = 2;

fn ceil_sqrt(p: u64) -> u64 {
    let r = p.isqrt();
    if r * r == p {
        r
    } else {
        r + 1
    }
}

/// Upper bound on the number of pattern-free points in a box with the given
/// side counts (numbers of integral coordinates per axis).
pub fn weight(dims: &[u64], scheme: Scheme) -> Result<u128> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "box sides must be positive, got {dims:?}"
        )));
    }
    match scheme {
        Scheme::Zar | Scheme::ZShape if dims.len() != 2 => Err(Error::DimensionMismatch {
            expected: 2,
            found: dims.len(),
        }),
        Scheme::Zar => {
            let (p, q) = (dims[0].max(dims[1]), dims[0].min(dims[1]));
            Ok(ceil_sqrt(p) as u128 * q as u128 + p as u128)
        }
        Scheme::ZShape => Ok(C_Z * (dims[0] as u128 + dims[1] as u128)),
        Scheme::Star => Ok((0..dims.len())
            .map(|i| {
                dims.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &p)| p as u128)
                    .product::<u128>()
            })
            .sum()),
    }
}

/// A labelled integer box of a covering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBox {
    pub label: String,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl GridBox {
    /// Number of integral coordinates per axis.
    pub fn dims(&self) -> Vec<u64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as u64).collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter().zip(&self.lo).zip(&self.hi).all(|((c, l), h)| l <= c && c <= h)
    }

    pub fn has_interior_point(&self, p: &[i64]) -> bool {
        strictly_inside(p, &self.lo, &self.hi)
    }
}

/// Boxes meant to cover `[grid_side]^dim`, weighted by `scheme`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Covering {
    scheme: Scheme,
    grid_side: u64,
    dim: usize,
    boxes: Vec<GridBox>,
}

impl Covering {
    pub fn new(scheme: Scheme, grid_side: u64, dim: usize, boxes: Vec<GridBox>) -> Result<Self> {
        if dim == 0 || grid_side == 0 {
            return Err(Error::InvalidCovering(
                "grid side and dimension must be positive".into(),
            ));
        }
        if matches!(scheme, Scheme::Zar | Scheme::ZShape) && dim != 2 {
            return Err(Error::InvalidCovering(format!("scheme {} is planar", scheme.name())));
        }
        for b in &boxes {
            if b.lo.len() != dim || b.hi.len() != dim {
                return Err(Error::InvalidCovering(format!(
                    "box {:?} has the wrong dimension",
                    b.label
                )));
            }
            if b.lo.iter().zip(&b.hi).any(|(l, h)| l > h) {
                return Err(Error::InvalidCovering(format!("box {:?} has lo > hi", b.label)));
            }
            if b.lo.iter().chain(&b.hi).any(|c| c.unsigned_abs() > 1 << 40) {
                return Err(Error::InvalidCovering(format!("box {:?} is out of range", b.label)));
            }
        }
        Ok(Covering {
            scheme,
            grid_side,
            dim,
            boxes,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn grid_side(&self) -> u64 {
        self.grid_side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[GridBox] {
        &self.boxes
    }
}

#[derive(Deserialize)]
struct CoveringJson {
    scheme: Scheme,
    grid_side: u64,
    dim: usize,
    boxes: Vec<GridBox>,
}

impl<'de> Deserialize<'de> for Covering {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CoveringJson::deserialize(deserializer)?;
        Covering::new(raw.scheme, raw.grid_side, raw.dim, raw.boxes).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoverOptions {
    /// Axis of the hyperplane used to split a box around a point of `V`.
    pub split_axis: usize,
}

/// The perfect power `k^e >= n` with the smallest `k`.
fn root_ceil(n: u64, e: u32) -> u64 {
    let mut k = 1u64;
    while k.pow(e) < n {
        k += 1;
    }
    k
}

/// Side of the grid actually covered for a requested side `n`: the next
/// cube (zar), square (zshape) or `d`-th power (star).
pub fn padded_side(n: u64, d: usize, scheme: Scheme) -> u64 {
    let e = match scheme {
        Scheme::Zar => 3,
        Scheme::ZShape => 2,
        Scheme::Star => d as u32,
    };
    root_ceil(n, e).pow(e)
}

/// A covering of `[n]^d` with no point of `v` strictly inside any box.
///
/// The grid is padded to the next suitable power `N` of `k` and tiled
/// regularly: `k^2 x k` tiles for zar, `k x k` for zshape and cubes of side
/// `k^(d-1)` for star. Then, for each point of `v` in lexicographic order,
/// the box holding it in its interior is split by the hyperplane through
/// it normal to the split axis; both halves keep that hyperplane.
pub fn cover(n: u64, d: usize, v: &[GridPoint], scheme: Scheme) -> Result<Covering> {
    cover_with(n, d, v, scheme, &CoverOptions::default())
}

pub fn cover_with(n: u64, d: usize, v: &[GridPoint], scheme: Scheme, opts: &CoverOptions) -> Result<Covering> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "grid side and dimension must be positive".into(),
        ));
    }
    if matches!(scheme, Scheme::Zar | Scheme::ZShape) && d != 2 {
        return Err(Error::InvalidParameter(format!("scheme {} needs d = 2", scheme.name())));
    }
    if n > 1 << 20 {
        return Err(Error::InvalidParameter(format!("grid side {n} is too large")));
    }
    if opts.split_axis >= d {
        return Err(Error::InvalidParameter(format!(
            "split axis {} out of range",
            opts.split_axis
        )));
    }
    if let Some(p) = v
        .iter()
        .find(|p| p.len() != d || p.iter().any(|&c| c < 1 || c as u64 > n))
    {
        return Err(Error::InvalidParameter(format!(
            "point {p:?} is not in the grid [{n}]^{d}"
        )));
    }
    let distinct: BTreeSet<&GridPoint> = v.iter().collect();
    if scheme != Scheme::Star && distinct.len() as u64 > n {
        return Err(Error::InvalidParameter(format!(
            "{} points exceed the limit n = {n}",
            distinct.len()
        )));
    }
    let side = padded_side(n, d, scheme) as i64;
    let tile: Vec<i64> = match scheme {
        Scheme::Zar => {
            let k = root_ceil(side as u64, 3) as i64;
            vec![k * k, k]
        }
        Scheme::ZShape => {
            let k = root_ceil(side as u64, 2) as i64;
            vec![k, k]
        }
        Scheme::Star => {
            let k = root_ceil(side as u64, d as u32) as i64;
            vec![k.pow(d as u32 - 1); d]
        }
    };
    let counts: Vec<usize> = tile.iter().map(|t| (side / t) as usize).collect();
    let mut boxes: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut cell = vec![0usize; d];
    loop {
        let lo: Vec<i64> = (0..d).map(|i| cell[i] as i64 * tile[i] + 1).collect();
        let hi: Vec<i64> = (0..d).map(|i| (cell[i] as i64 + 1) * tile[i]).collect();
        boxes.push((lo, hi));
        if !advance(&mut cell, &counts) {
            break;
        }
    }
    let a = opts.split_axis;
    for p in distinct {
        if let Some(i) = boxes.iter().position(|(lo, hi)| strictly_inside(p, lo, hi)) {
            let (lo, hi) = boxes[i].clone();
            let mut left_hi = hi.clone();
            left_hi[a] = p[a];
            let mut right_lo = lo.clone();
            right_lo[a] = p[a];
            boxes[i] = (lo, left_hi);
            boxes.insert(i + 1, (right_lo, hi));
        }
    }
    let boxes = boxes
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| GridBox {
            label: format!("Q{i}"),
            lo,
            hi,
        })
        .collect();
    Covering::new(scheme, side as u64, d, boxes)
}

/// Per-box and total weights of a valid covering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub scheme: Scheme,
    pub dims: Vec<Vec<u64>>,
    pub weights: Vec<u128>,
    pub total: u128,
}

impl WeightReport {
    /// CSV with header `box,label,dims,weight`.
    pub fn to_csv(&self, covering: &Covering) -> String {
        let mut out = String::from("box,label,dims,weight\n");
        for (i, (b, w)) in covering.boxes().iter().zip(&self.weights).enumerate() {
            let dims: Vec<String> = self.dims[i].iter().map(ToString::to_string).collect();
            out.push_str(&format!("{i},{},{},{w}\n", b.label, dims.join("x")));
        }
        out
    }
}

/// Why a covering is not valid for a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringWitness {
    UncoveredPoint { point: GridPoint },
    InteriorPoint { box_index: usize, point: GridPoint },
}

/// Checks that the boxes cover every grid point and that no point of `v`
/// lies strictly inside a box, then weighs the boxes.
pub fn covering_check(cov: &Covering, v: &[GridPoint]) -> Result<std::result::Result<WeightReport, CoveringWitness>> {
    let side = cov.grid_side as i64;
    let d = cov.dim;
    let cells = (side as u128)
        .checked_pow(d as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or_else(|| Error::InvalidCovering(format!("grid [{side}]^{d} is too large to check")))?
        as usize;
    let mut covered = vec![false; cells];
    for b in &cov.boxes {
        let lo: Vec<i64> = b.lo.iter().map(|&l| l.max(1)).collect();
        let hi: Vec<i64> = b.hi.iter().map(|&h| h.min(side)).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            continue;
        }
        let limits: Vec<usize> = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as usize).collect();
        let mut offset = vec![0usize; d];
        loop {
            let idx = (0..d).fold(0usize, |acc, i| acc * side as usize + (lo[i] - 1) as usize + offset[i]);
            covered[idx] = true;
            if !advance(&mut offset, &limits) {
                break;
            }
        }
    }
    if let Some(idx) = covered.iter().position(|c| !c) {
        let mut point = vec![0i64; d];
        let mut rest = idx;
        for slot in point.iter_mut().rev() {
            *slot = (rest % side as usize) as i64 + 1;
            rest /= side as usize;
        }
        return Ok(Err(CoveringWitness::UncoveredPoint { point }));
    }
    for (i, b) in cov.boxes.iter().enumerate() {
        if let Some(p) = v.iter().find(|p| p.len() == d && b.has_interior_point(p)) {
            return Ok(Err(CoveringWitness::InteriorPoint {
                box_index: i,
                point: p.clone(),
            }));
        }
    }
    let dims: Vec<Vec<u64>> = cov.boxes.iter().map(GridBox::dims).collect();
    let weights = dims
        .iter()
        .map(|dm| weight(dm, cov.scheme))
        .collect::<Result<Vec<_>>>()?;
    let total = weights.iter().sum();
    Ok(Ok(WeightReport {
        scheme: cov.scheme,
        dims,
        weights,
        total,
    }))
}

/// Closed-form bound on the total weight of [`cover`]'s output for a
/// requested side `n`, evaluated at the padded side `N = k^e`:
/// `4 k^5` (zar), `4 C_Z k^3` (zshape), `(1 + c) d k^(d(d-1)+1)` (star)
/// with `c = max(1, ceil(|V| / N))`.
pub fn cover_bound(n: u64, d: usize, v_len: usize, scheme: Scheme) -> u128 {
    let side = padded_side(n, d, scheme);
    match scheme {
        Scheme::Zar => 4 * (root_ceil(side, 3) as u128).pow(5),
        Scheme::ZShape => 4 * C_Z * (root_ceil(side, 2) as u128).pow(3),
        Scheme::Star => {
            let k = root_ceil(side, d as u32) as u128;
            let c = (v_len as u128).div_ceil(side as u128).max(1);
            (1 + c) * d as u128 * k.pow((d * (d - 1) + 1) as u32)
        }
    }
}

/// The `k^3` points of a `k x k` arrangement of `k^2 x k^2` cells, each
/// holding `k` evenly spaced points on its diagonal, inside `[k^3]^2`.
pub fn hard_instance(k: u64) -> Vec<GridPoint> {
    let k = k as i64;
    let mut out = Vec::with_capacity((k * k * k) as usize);
    for a in 0..k {
        for b in 0..k {
            for s in 0..k {
                out.push(vec![a * k * k + 1 + s * k, b * k * k + 1 + s * k]);
            }
        }
    }
    out.sort();
    out
}

/// Exhaustively checks, over all boxes in `[k^3]^2`, that a box with no
/// point of `hard_instance(k)` strictly inside and width `hi - lo > k^2`
/// along axis 1 has height `hi - lo <= k` along axis 2. Returns the first
/// counterexample as `(lo, hi)`.
pub fn hard_instance_counterexample(k: u64) -> Option<(GridPoint, GridPoint)> {
    let v = hard_instance(k);
    let n = (k * k * k) as i64;
    let k = k as i64;
    for x0 in 1..=n {
        for x1 in x0 + k * k + 1..=n {
            for y0 in 1..=n {
                for y1 in y0 + k + 1..=n {
                    let (lo, hi) = (vec![x0, y0], vec![x1, y1]);
                    if !v.iter().any(|p| strictly_inside(p, &lo, &hi)) {
                        return Some((lo, hi));
                    }
                }
            }
        }
    }
    None
}

/// Default cell budget of [`brute_pattern_free_max`].
pub fn default_brute_budget(kind: PatternKind) -> usize {
    match kind {
        PatternKind::Star(_) => 27,
        _ => 25,
    }
}

struct Grid<'a> {
    dims: &'a [usize],
    strides: Vec<usize>,
    on: Vec<bool>,
}

impl Grid<'_> {
    fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut c = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            c[i] = idx % self.dims[i];
            idx /= self.dims[i];
        }
        c
    }

    fn at(&self, c: &[usize]) -> bool {
        self.on[c.iter().zip(&self.strides).map(|(a, s)| a * s).sum::<usize>()]
    }

    fn at2(&self, x: usize, y: usize) -> bool {
        self.on[x * self.strides[0] + y]
    }

    fn has_other_on_line(&self, c: &[usize], axis: usize) -> bool {
        let mut q = c.to_vec();
        (0..self.dims[axis]).any(|v| {
            q[axis] = v;
            v != c[axis] && self.at(&q)
        })
    }

    /// Whether switching on cell `c` creates an occurrence through it.
    fn completes(&self, c: &[usize], kind: PatternKind) -> bool {
        match kind {
            PatternKind::InducedRectangle => {
                let (x, y) = (c[0], c[1]);
                (0..self.dims[0]).any(|b| {
                    b != x && self.at2(b, y) && (0..self.dims[1]).any(|s| s != y && self.at2(x, s) && self.at2(b, s))
                })
            }
            PatternKind::ZShape => {
                let (w, h) = (self.dims[0], self.dims[1]);
                let (cx, cy) = (c[0], c[1]);
                // c as w = (a, r)
                let as_w = (cx + 1..w).any(|m| {
                    self.at2(m, cy) && (cy + 1..h).any(|s| self.at2(m, s) && (m + 1..w).any(|e| self.at2(e, s)))
                });
                // c as x = (m, r)
                let as_x = (0..cx).any(|a| self.at2(a, cy))
                    && (cy + 1..h).any(|s| self.at2(cx, s) && (cx + 1..w).any(|e| self.at2(e, s)));
                // c as y = (m, s)
                let as_y = (cx + 1..w).any(|e| self.at2(e, cy))
                    && (0..cy).any(|r| self.at2(cx, r) && (0..cx).any(|a| self.at2(a, r)));
                // c as z = (e, s)
                let as_z = (0..cx)
                    .any(|m| self.at2(m, cy) && (0..cy).any(|r| self.at2(m, r) && (0..m).any(|a| self.at2(a, r))));
                as_w || as_x || as_y || as_z
            }
            PatternKind::Star(d) => {
                if (0..d).all(|axis| self.has_other_on_line(c, axis)) {
                    return true;
                }
                (0..d).any(|axis| {
                    let mut center = c.to_vec();
                    (0..self.dims[axis]).any(|v| {
                        center[axis] = v;
                        v != c[axis]
                            && self.at(&center)
                            && (0..d)
                                .filter(|&j| j != axis)
                                .all(|j| self.has_other_on_line(&center, j))
                    })
                })
            }
        }
    }
}

/// The largest number of cells of a grid with the given side counts that
/// can be chosen without forming `kind`, by exhaustive branch and bound.
pub fn brute_pattern_free_max(dims: &[usize], kind: PatternKind) -> Result<usize> {
    brute_pattern_free_max_with_budget(dims, kind, default_brute_budget(kind))
}

pub fn brute_pattern_free_max_with_budget(dims: &[usize], kind: PatternKind, budget: usize) -> Result<usize> {
    if dims.len() != kind.dim() {
        return Err(Error::DimensionMismatch {
            expected: kind.dim(),
            found: dims.len(),
        });
    }
    if dims.contains(&0) {
        return Err(Error::InvalidParameter("grid sides must be positive".into()));
    }
    let cells = dims.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    let cells = match cells {
        Some(c) if c <= budget => c,
        _ => {
            return Err(Error::Budget {
                needed: cells.map_or(u128::MAX, |c| c as u128),
                budget: budget as u64,
            })
        }
    };
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut grid = Grid {
        dims,
        strides,
        on: vec![false; cells],
    };
    let coords: Vec<Vec<usize>> = (0..cells).map(|i| grid.coords(i)).collect();
    let mut best = 0;
    search(&mut grid, &coords, kind, 0, 0, &mut best);
    Ok(best)
}

fn search(grid: &mut Grid, coords: &[Vec<usize>], kind: PatternKind, idx: usize, count: usize, best: &mut usize) {
    if count > *best {
        *best = count;
    }
    if idx == coords.len() || count + (coords.len() - idx) <= *best {
        return;
    }
    if !grid.completes(&coords[idx], kind) {
        grid.on[idx] = true;
        search(grid, coords, kind, idx + 1, count + 1, best);
        grid.on[idx] = false;
    }
    search(grid, coords, kind, idx + 1, count, best);
}

/// Result of comparing a point set against a weighted covering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pigeonhole {
    /// `|P|` is at most the total weight.
    WithinBound { points: usize, total: u128 },
    /// A box holds more points than its weight and contains the pattern.
    PatternInBox { box_index: usize, pattern: Vec<GridPoint> },
    /// A box holds more points than its weight yet no pattern: the weight
    /// function is not a valid capacity for that box.
    WeightViolated {
        box_index: usize,
        points: usize,
        weight: u128,
    },
}

/// If `|P|` exceeds the total weight of `report`, some box holds more
/// points than its weight; that box is located and searched for the
/// covering scheme's pattern.
pub fn pigeonhole_check(points: &[GridPoint], cov: &Covering, report: &WeightReport) -> Result<Pigeonhole> {
    let distinct: BTreeSet<&GridPoint> = points.iter().collect();
    if (distinct.len() as u128) <= report.total {
        return Ok(Pigeonhole::WithinBound {
            points: distinct.len(),
            total: report.total,
        });
    }
    let kind = cov.scheme.pattern(cov.dim);
    for (i, b) in cov.boxes.iter().enumerate() {
        let inside: Vec<GridPoint> = distinct
            .iter()
            .filter(|p| b.contains(p))
            .map(|p| (*p).clone())
            .collect();
        if inside.len() as u128 > report.weights[i] {
            return Ok(match find_pattern(&inside, kind)? {
                Some(pattern) => Pigeonhole::PatternInBox { box_index: i, pattern },
                None => Pigeonhole::WeightViolated {
                    box_index: i,
                    points: inside.len(),
                    weight: report.weights[i],
                },
            });
        }
    }
    Err(Error::InvalidCovering("points outside the covered grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[[i64; 2]]) -> Vec<GridPoint> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn finds_the_basic_patterns() {
        let square = pts(&[[1, 1], [1, 2], [2, 1], [2, 2]]);
        assert_eq!(
            find_pattern(&square, PatternKind::InducedRectangle).unwrap(),
            Some(square.clone())
        );
        let z = pts(&[[0, 0], [1, 0], [1, 1], [2, 1]]);
        assert_eq!(find_pattern(&z, PatternKind::ZShape).unwrap(), Some(z.clone()));
        let diag = pts(&[[1, 1], [2, 2], [3, 3]]);
        for kind in [PatternKind::InducedRectangle, PatternKind::ZShape, PatternKind::Star(2)] {
            assert_eq!(find_pattern(&diag, kind).unwrap(), None);
        }
        let star = pts(&[[2, 2], [1, 2], [2, 3]]);
        assert_eq!(
            find_pattern(&star, PatternKind::Star(2)).unwrap(),
            Some(pts(&[[2, 2], [1, 2], [2, 3]]))
        );
        assert!(find_pattern(&star, PatternKind::Star(3)).is_err());
    }

    #[test]
    fn z_orientation_is_strict_unless_mirrored() {
        let s = pts(&[[0, 1], [1, 1], [1, 0], [2, 0]]);
        assert_eq!(find_pattern(&s, PatternKind::ZShape).unwrap(), None);
        let opts = PatternOptions { mirrored_z: true };
        let found = find_pattern_with(&s, PatternKind::ZShape, &opts).unwrap().unwrap();
        let mut sorted = found.clone();
        sorted.sort();
        let mut expect = s.clone();
        expect.sort();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn stabbing_examples() {
        let unit = pts(&[[0, 0], [0, 1], [1, 0], [1, 1]]);
        assert!(!stabs(&[], &unit, PatternKind::InducedRectangle).unwrap().holds());
        let big = pts(&[[0, 0], [0, 2], [2, 0], [2, 2]]);
        assert!(stabs(&pts(&[[1, 1]]), &big, PatternKind::InducedRectangle)
            .unwrap()
            .holds());
        assert!(!stabs(&pts(&[[0, 1]]), &big, PatternKind::InducedRectangle)
            .unwrap()
            .holds());
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&[4, 2], Scheme::Zar).unwrap(), 8);
        assert_eq!(weight(&[2, 4], Scheme::Zar).unwrap(), 8);
        assert_eq!(weight(&[1, 1], Scheme::Zar).unwrap(), 2);
        assert_eq!(weight(&[3, 3], Scheme::Star).unwrap(), 6);
        assert_eq!(weight(&[4, 4, 4], Scheme::Star).unwrap(), 48);
        assert_eq!(weight(&[2, 3], Scheme::ZShape).unwrap(), 5 * C_Z);
        assert!(weight(&[0, 3], Scheme::Zar).is_err());
        assert!(weight(&[2, 2, 2], Scheme::Zar).is_err());
    }

    #[test]
    fn base_zar_cover() {
        let cov = cover(8, 2, &[], Scheme::Zar).unwrap();
        assert_eq!(cov.boxes().len(), 8);
        assert!(cov.boxes().iter().all(|b| b.dims() == vec![4, 2]));
        let report = covering_check(&cov, &[]).unwrap().unwrap();
        assert_eq!(report.total, 64);
        assert!(report.total <= cover_bound(8, 2, 0, Scheme::Zar));
        assert_eq!(cover_bound(8, 2, 0, Scheme::Zar), 128);
    }

    #[test]
    fn interior_point_splits_one_tile() {
        let v = pts(&[[2, 1]]);
        let cov = cover(8, 2, &v, Scheme::Zar).unwrap();
        // (2, 1) sits on the boundary of [1,4]x[1,2], so nothing splits
        assert_eq!(cov.boxes().len(), 8);
        let v = pts(&[[2, 2]]);
        let cov = cover(8, 2, &v, Scheme::Zar).unwrap();
        assert_eq!(cov.boxes().len(), 8);
        let v = pts(&[[2, 3]]);
        let cov = cover(8, 2, &v, Scheme::Zar).unwrap();
        assert_eq!(cov.boxes().len(), 8);
        let cov = cover(27, 2, &pts(&[[5, 2]]), Scheme::Zar).unwrap();
        assert_eq!(cov.boxes().len(), 28);
        let report = covering_check(&cov, &pts(&[[5, 2]])).unwrap().unwrap();
        let base = covering_check(&cover(27, 2, &[], Scheme::Zar).unwrap(), &[])
            .unwrap()
            .unwrap();
        assert!(report.total <= base.total + weight(&[9, 3], Scheme::Zar).unwrap());
    }

    #[test]
    fn star_tiles() {
        let cov = cover(8, 3, &[], Scheme::Star).unwrap();
        assert_eq!(cov.boxes().len(), 8);
        assert!(cov.boxes().iter().all(|b| b.dims() == vec![4, 4, 4]));
        let cov = cover(9, 2, &[], Scheme::Star).unwrap();
        assert!(cov.boxes().iter().all(|b| b.dims() == vec![3, 3]));
    }

    #[test]
    fn padding() {
        assert_eq!(padded_side(8, 2, Scheme::ZShape), 9);
        assert_eq!(padded_side(27, 2, Scheme::ZShape), 36);
        assert_eq!(padded_side(10, 2, Scheme::Zar), 27);
        assert_eq!(padded_side(27, 3, Scheme::Star), 27);
    }

    #[test]
    fn uncovered_and_interior_witnesses() {
        let boxes = vec![GridBox {
            label: "a".into(),
            lo: vec![2, 1],
            hi: vec![2, 2],
        }];
        let cov = Covering::new(Scheme::Zar, 2, 2, boxes).unwrap();
        assert_eq!(
            covering_check(&cov, &[]).unwrap(),
            Err(CoveringWitness::UncoveredPoint { point: vec![1, 1] })
        );
        let boxes = vec![GridBox {
            label: "a".into(),
            lo: vec![1, 1],
            hi: vec![3, 3],
        }];
        let cov = Covering::new(Scheme::Zar, 3, 2, boxes).unwrap();
        assert_eq!(
            covering_check(&cov, &pts(&[[2, 2]])).unwrap(),
            Err(CoveringWitness::InteriorPoint {
                box_index: 0,
                point: vec![2, 2]
            })
        );
    }

    #[test]
    fn hard_instance_shape() {
        assert_eq!(hard_instance(1), pts(&[[1, 1]]));
        let v = hard_instance(2);
        assert_eq!(v.len(), 8);
        assert!(v.iter().all(|p| p.iter().all(|&c| (1..=8).contains(&c))));
        assert_eq!(hard_instance_counterexample(2), None);
    }

    #[test]
    fn small_oracles() {
        assert_eq!(
            brute_pattern_free_max(&[2, 2], PatternKind::InducedRectangle).unwrap(),
            3
        );
        assert_eq!(
            brute_pattern_free_max(&[1, 1], PatternKind::InducedRectangle).unwrap(),
            1
        );
        // any three cells of a 2 x 2 grid form a 2-star
        assert_eq!(brute_pattern_free_max(&[2, 2], PatternKind::Star(2)).unwrap(), 2);
        assert!(brute_pattern_free_max(&[6, 6], PatternKind::InducedRectangle).is_err());
    }

    #[test]
    fn pigeonhole_finds_pattern_when_overfull() {
        let cov = Covering::new(
            Scheme::Zar,
            2,
            2,
            vec![GridBox {
                label: "a".into(),
                lo: vec![1, 1],
                hi: vec![2, 2],
            }],
        )
        .unwrap();
        let mut report = covering_check(&cov, &[]).unwrap().unwrap();
        let full = pts(&[[1, 1], [1, 2], [2, 1], [2, 2]]);
        // pretend the box weighs 3 to force the search
        report.weights[0] = 3;
        report.total = 3;
        assert!(matches!(
            pigeonhole_check(&full, &cov, &report).unwrap(),
            Pigeonhole::PatternInBox { box_index: 0, .. }
        ));
        assert!(matches!(
            pigeonhole_check(&full[..3], &cov, &report).unwrap(),
            Pigeonhole::WithinBound { points: 3, total: 3 }
        ));
    }
}
