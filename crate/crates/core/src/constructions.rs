//! Generators for the lower-bound configurations, each returned with the
//! properties it is known to have attached as [`Claims`].

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinatorics::find_combination;
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Claims, Config, Point};
use crate::setsystem::{SetSystem, SubsetMode, VerifyOptions};
use crate::witness::Verdict;

/// A partition of the items `0..universe_size` into labelled parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    universe_size: usize,
    parts: Vec<Vec<usize>>,
    part_labels: Vec<String>,
}

impl Partition {
    pub fn new(universe_size: usize, parts: Vec<Vec<usize>>, part_labels: Vec<String>) -> Result<Self> {
        if part_labels.len() != parts.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} parts",
                part_labels.len(),
                parts.len()
            )));
        }
        let mut seen = vec![false; universe_size];
        for &x in parts.iter().flatten() {
            match seen.get_mut(x) {
                None => {
                    return Err(Error::ItemOutOfRange {
                        index: x,
                        len: universe_size,
                    })
                }
                Some(true) => return Err(Error::InvalidParameter(format!("item {x} lies in two parts"))),
                Some(s) => *s = true,
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!("item {x} lies in no part")));
        }
        Ok(Partition {
            universe_size,
            parts,
            part_labels,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_labels(&self) -> &[String] {
        &self.part_labels
    }

    /// Index of the part containing each item.
    pub fn part_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.universe_size];
        for (j, part) in self.parts.iter().enumerate() {
            for &x in part {
                of[x] = j;
            }
        }
        of
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn int(v: usize) -> BigInt {
    BigInt::from(v)
}

/// The points of `[m]^d` in lexicographic order.
fn grid_points(m: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    let count = (m as u128)
        .checked_pow(d as u32)
        .filter(|&c| c <= 1 << 26)
        .ok_or_else(|| Error::InvalidParameter(format!("grid [{m}]^{d} is too large to materialize")))?
        as usize;
    Ok((0..count)
        .map(|mut idx| {
            let mut x = vec![0; d];
            for slot in x.iter_mut().rev() {
                *slot = idx % m + 1;
                idx /= m;
            }
            x
        })
        .collect())
}

fn tuple_label(x: &[usize]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn grid_point(x: &[usize]) -> Point {
    Point::new(tuple_label(x), x.iter().map(|&c| int(c)).collect())
}

fn flat_label(fixed: &[Option<usize>]) -> String {
    let parts: Vec<String> = fixed
        .iter()
        .map(|f| f.map_or_else(|| "*".to_string(), |v| v.to_string()))
        .collect();
    format!("H({})", parts.join(","))
}

/// Every axis-parallel `k`-flat through `[m]^d`, free axes in lexicographic
/// order of the axis set, then fixed coordinates in lexicographic order.
fn flats(k: usize, d: usize, m: usize) -> Result<Vec<Vec<Option<usize>>>> {
    let fixed_count = d - k;
    let tails = grid_points(m, fixed_count)?;
    let mut out = Vec::new();
    find_combination(d, k, |free| {
        for tail in &tails {
            let mut fixed = vec![None; d];
            let mut it = tail.iter();
            for (axis, slot) in fixed.iter_mut().enumerate() {
                if !free.contains(&axis) {
                    *slot = it.next().copied();
                }
            }
            out.push(fixed);
        }
        None::<()>
    });
    Ok(out)
}

fn flat_box(fixed: &[Option<usize>], m: usize) -> AxisBox {
    AxisBox::new(
        flat_label(fixed),
        fixed.iter().map(|f| int(f.unwrap_or(1))).collect(),
        fixed.iter().map(|f| int(f.unwrap_or(m))).collect(),
    )
}

fn grid_flats(k: usize, d: usize, m: usize) -> Result<Config> {
    let points = grid_points(m, d)?.iter().map(|x| grid_point(x)).collect();
    let boxes = flats(k, d, m)?.iter().map(|f| flat_box(f, m)).collect();
    Config::new(d, points, boxes)
}

fn grid_lines_claims(n: usize, d: usize) -> Claims {
    let mut claims = Claims::named("grid-lines", &[("n", n as i64), ("d", d as i64)]);
    claims.disjunct = (d >= 2).then_some(d - 1);
    claims.not_disjunct = Some(d);
    match d {
        1 | 2 => claims.not_separable = Some(d),
        3 => {
            claims.separable = Some(3);
            claims.not_separable = Some(4);
        }
        _ => {
            claims.separable = Some(2 * d - 2);
            claims.not_separable = Some(2 * d - 1);
        }
    }
    claims
}

/// The grid `[n]^d` tested by all of its axis-parallel lines.
pub fn grid_lines(n: usize, d: usize) -> Result<Config> {
    require(n >= 2 && d >= 1, || {
        format!("grid lines need n >= 2 and d >= 1, got n = {n}, d = {d}")
    })?;
    Ok(grid_flats(1, d, n)?.with_claims(grid_lines_claims(n, d)))
}

/// The grid `[m]^d` tested by all of its axis-parallel `k`-flats.
pub fn subspace_config(k: usize, d: usize, m: usize) -> Result<Config> {
    require(k >= 1 && k < d && m >= 2, || {
        format!("subspaces need 1 <= k <= d - 1 and m >= 2, got k = {k}, d = {d}, m = {m}")
    })?;
    let mut claims = Claims::named("subspaces", &[("k", k as i64), ("d", d as i64), ("m", m as i64)]);
    claims.disjunct = Some(d - k);
    Ok(grid_flats(k, d, m)?.with_claims(claims))
}

fn check_equivalent(built: &Config, reference: &Config, what: &str) -> Result<()> {
    if built.induce()? != reference.induce()? {
        return Err(Error::EquivalenceFailure(what.to_string()));
    }
    Ok(())
}

/// Replaces every point by `f(x)` and every box by the bounding box of the
/// images of the points it contains.
fn remap(reference: &Config, dim: usize, f: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Result<Config> {
    let points: Vec<Point> = reference
        .points()
        .iter()
        .map(|p| Point::new(p.label.clone(), f(&p.coords)))
        .collect();
    let sys = reference.induce()?;
    let mut boxes = Vec::with_capacity(reference.boxes().len());
    for (j, b) in reference.boxes().iter().enumerate() {
        let members = (0..points.len()).filter(|&i| sys.row(i).contains(j));
        let bbox = AxisBox::bounding(b.label.clone(), members.map(|i| points[i].coords.as_slice()))
            .ok_or_else(|| Error::EquivalenceFailure(format!("box {} contains no point", b.label)))?;
        boxes.push(bbox);
    }
    Config::new(dim, points, boxes)
}

/// A planar configuration equivalent to `grid_lines(n, d)`: the point `x`
/// maps to `(sum (n+1)^(d-i) x_i, sum (n+1)^(i-1) x_i)` and each line to
/// the bounding box of its image.
pub fn embed_grid_lines_2d(n: usize, d: usize) -> Result<Config> {
    require(n >= 2 && d >= 2, || {
        format!("embedding needs n >= 2 and d >= 2, got n = {n}, d = {d}")
    })?;
    let reference = grid_lines(n, d)?;
    let base = int(n + 1);
    let f = |x: &[BigInt]| {
        let mut first = BigInt::from(0);
        let mut second = BigInt::from(0);
        let mut weight = BigInt::from(1);
        for xi in &x[..d] {
            first = first * &base + xi;
            second += xi * &weight;
            weight *= &base;
        }
        vec![first, second]
    };
    let mut claims = reference.claims().clone();
    claims.construction = Some("embed-grid-lines-2d".into());
    let out = remap(&reference, 2, f)?.with_claims(claims);
    check_equivalent(&out, &reference, &format!("grid_lines({n}, {d})"))?;
    Ok(out)
}

/// A `(d-1)`-dimensional configuration equivalent to `subspace_config(k,
/// d, m)`, with coordinate `i` of the image equal to `(m+1) x_i + x_d`.
pub fn project_subspace_config(k: usize, d: usize, m: usize) -> Result<Config> {
    require(k >= 1 && k + 2 <= d, || {
        format!("projection needs 1 <= k <= d - 2, got k = {k}, d = {d}")
    })?;
    let reference = subspace_config(k, d, m)?;
    let scale = int(m + 1);
    let f = |x: &[BigInt]| (0..d - 1).map(|i| &x[i] * &scale + &x[d - 1]).collect();
    let mut claims = reference.claims().clone();
    claims.construction = Some("project-subspaces".into());
    let out = remap(&reference, d - 1, f)?.with_claims(claims);
    check_equivalent(&out, &reference, &format!("subspace_config({k}, {d}, {m})"))?;
    Ok(out)
}

/// The `(k-1)t + 1` partitions of `[m]^k` into the classes of `c_i . x`
/// with `c_i = (1, i-1, ..., (i-1)^(k-1))`. Items are the grid points in
/// lexicographic order; classes are listed by increasing value and only
/// nonempty ones are kept.
pub fn hyperplane_partitions(k: usize, t: usize, m: usize) -> Result<Vec<Partition>> {
    require(k >= 1 && t >= 1 && m > k, || {
        format!("hyperplanes need k >= 1, t >= 1 and m > k, got k = {k}, t = {t}, m = {m}")
    })?;
    let points = grid_points(m, k)?;
    let ell = (k - 1) * t + 1;
    (0..ell)
        .map(|i| {
            let c = normal(i, k);
            let values: Vec<u128> = points
                .iter()
                .map(|x| c.iter().zip(x).map(|(a, b)| a * *b as u128).sum())
                .collect();
            let mut distinct = values.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let mut parts = vec![Vec::new(); distinct.len()];
            for (x, v) in values.iter().enumerate() {
                parts[distinct.binary_search(v).expect("value listed")].push(x);
            }
            let labels = distinct.iter().map(|v| format!("H{}={v}", i + 1)).collect();
            Partition::new(points.len(), parts, labels)
        })
        .collect()
}

/// `c_{i+1} = (1, i, i^2, ..., i^(k-1))`.
pub fn normal(i: usize, k: usize) -> Vec<u128> {
    (0..k as u32).map(|e| (i as u128).pow(e)).collect()
}

/// Realizes `D` partitions of one universe as points and boxes in `Z^D`.
///
/// Item `x` becomes the point whose `i`-th coordinate is the 1-based index
/// of its part in partition `i`; part `j` of partition `i` becomes the box
/// fixing axis `i` to `j` and spanning `[1, q]` elsewhere, where `q` is the
/// largest part count.
pub fn partitions_to_boxes(partitions: &[Partition], item_labels: Option<Vec<String>>) -> Result<Config> {
    let first = partitions
        .first()
        .ok_or_else(|| Error::InvalidParameter("at least one partition is required".into()))?;
    let m = first.universe_size;
    if let Some(p) = partitions.iter().find(|p| p.universe_size != m) {
        return Err(Error::InvalidParameter(format!(
            "universes differ: {m} and {}",
            p.universe_size
        )));
    }
    let labels = item_labels.unwrap_or_else(|| (0..m).map(|x| x.to_string()).collect());
    require(labels.len() == m, || format!("{} labels for {m} items", labels.len()))?;
    let dim = partitions.len();
    let q = partitions.iter().map(|p| p.parts.len()).max().unwrap_or(0).max(1);
    let owners: Vec<Vec<usize>> = partitions.iter().map(Partition::part_of).collect();
    let points = labels
        .into_iter()
        .enumerate()
        .map(|(x, label)| Point::new(label, owners.iter().map(|o| int(o[x] + 1)).collect()))
        .collect();
    let mut boxes = Vec::new();
    for (i, p) in partitions.iter().enumerate() {
        for (j, label) in p.part_labels.iter().enumerate() {
            let mut lo = vec![int(1); dim];
            let mut hi = vec![int(q); dim];
            lo[i] = int(j + 1);
            hi[i] = int(j + 1);
            boxes.push(AxisBox::new(label.clone(), lo, hi));
        }
    }
    Config::new(dim, points, boxes)
}

/// `hyperplane_partitions(k, t, m)` realized in dimension `(k-1)t + 1`.
pub fn hyperplane_config(k: usize, t: usize, m: usize) -> Result<Config> {
    let partitions = hyperplane_partitions(k, t, m)?;
    let labels = grid_points(m, k)?.iter().map(|x| tuple_label(x)).collect();
    let mut claims = Claims::named("hyperplanes", &[("k", k as i64), ("t", t as i64), ("m", m as i64)]);
    claims.disjunct = Some(t);
    Ok(partitions_to_boxes(&partitions, Some(labels))?.with_claims(claims))
}

/// The `n x n` grid tested by its rows and columns.
pub fn single_defective_grid(n: usize) -> Result<Config> {
    require(n >= 1, || "the grid needs n >= 1".to_string())?;
    let points = grid_points(n, 2)?.iter().map(|x| grid_point(x)).collect();
    let mut boxes = Vec::with_capacity(2 * n);
    for j in 1..=n as i64 {
        boxes.push(AxisBox::from_i64(format!("row{j}"), &[1, j], &[n as i64, j]));
    }
    for i in 1..=n as i64 {
        boxes.push(AxisBox::from_i64(format!("col{i}"), &[i, 1], &[i, n as i64]));
    }
    let mut claims = Claims::named("single-defective-grid", &[("n", n as i64)]);
    claims.disjunct = (n >= 2).then_some(1);
    Ok(Config::new(2, points, boxes)?.with_claims(claims))
}

/// `m` pairwise disjoint boxes, each with one point strictly inside.
pub fn disjoint_boxes(m: usize, d: usize) -> Result<Config> {
    require(m >= 1 && d >= 1, || {
        format!("disjoint boxes need m >= 1 and d >= 1, got m = {m}, d = {d}")
    })?;
    let mut points = Vec::with_capacity(m);
    let mut boxes = Vec::with_capacity(m);
    for i in 0..m as i64 {
        let mut p = vec![1; d];
        let mut lo = vec![0; d];
        let mut hi = vec![2; d];
        p[0] = 3 * i + 1;
        lo[0] = 3 * i;
        hi[0] = 3 * i + 2;
        points.push(Point::from_i64(format!("p{i}"), &p));
        boxes.push(AxisBox::from_i64(format!("B{i}"), &lo, &hi));
    }
    let mut claims = Claims::named("disjoint", &[("m", m as i64), ("d", d as i64)]);
    claims.disjunct = (m >= 2).then_some(m - 1);
    Ok(Config::new(d, points, boxes)?.with_claims(claims))
}

/// An equivalent configuration in which, on every axis, the points have
/// the coordinates `1..=m` and every box is the bounding box of the points
/// it contains. Boxes containing no point collapse to the origin.
pub fn canonicalize(config: &Config) -> Result<Config> {
    let gp = config.to_general_position();
    let m = gp.points().len();
    let mut ranks = vec![vec![BigInt::from(0); config.dim()]; m];
    #[allow(clippy::needless_range_loop)]
    for axis in 0..config.dim() {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| gp.points()[a].coords[axis].cmp(&gp.points()[b].coords[axis]));
        for (r, &i) in order.iter().enumerate() {
            ranks[i][axis] = int(r + 1);
        }
    }
    let sys = gp.induce()?;
    let boxes = gp
        .boxes()
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let members = (0..m).filter(|&i| sys.row(i).contains(j));
            AxisBox::bounding(b.label.clone(), members.map(|i| ranks[i].as_slice())).unwrap_or_else(|| {
                AxisBox::new(b.label.clone(), vec![int(0); config.dim()], vec![int(0); config.dim()])
            })
        })
        .collect();
    let points = gp
        .points()
        .iter()
        .zip(ranks)
        .map(|(p, r)| Point::new(p.label.clone(), r))
        .collect();
    Ok(Config::new(config.dim(), points, boxes)?.with_claims(config.claims().clone()))
}

/// Lifts a `t`-disjunct configuration to a `(t+1)`-disjunct one: `k`
/// copies side by side along axis 1, plus for every original point a box
/// spanning all copies along axis 1 and fixing the other coordinates.
///
/// The input must be at least two-dimensional and carry a disjunctness
/// claim.
pub fn long_rect_step(config: &Config, k: usize) -> Result<Config> {
    require(k >= 1, || "k must be at least 1".to_string())?;
    require(config.dim() >= 2, || {
        "the long-rectangle step needs dimension >= 2".to_string()
    })?;
    let t = config
        .claims()
        .disjunct
        .ok_or_else(|| Error::InvalidParameter("the input carries no disjunctness claim".into()))?;
    let canon = canonicalize(config)?;
    let m = canon.points().len();
    let d = canon.dim();
    let mut points = Vec::with_capacity(k * m);
    let mut boxes = Vec::with_capacity(k * canon.boxes().len() + m);
    for copy in 0..k {
        let shift = int(copy * m);
        for p in canon.points() {
            let mut coords = p.coords.clone();
            coords[0] += &shift;
            points.push(Point::new(format!("{}@{copy}", p.label), coords));
        }
        for b in canon.boxes() {
            let mut lo = b.lo.clone();
            let mut hi = b.hi.clone();
            lo[0] += &shift;
            hi[0] += &shift;
            boxes.push(AxisBox::new(format!("{}@{copy}", b.label), lo, hi));
        }
    }
    for p in canon.points() {
        let mut lo = p.coords.clone();
        let mut hi = p.coords.clone();
        lo[0] = int(1);
        hi[0] = int(k * m);
        boxes.push(AxisBox::new(format!("R[{}]", p.label), lo, hi));
    }
    let base = config.claims().construction.clone().unwrap_or_else(|| "input".into());
    let mut claims = Claims {
        construction: Some(format!("long-rect/{base}")),
        params: config.claims().params.clone(),
        disjunct: Some(t + 1),
        ..Default::default()
    };
    let key = (1..)
        .map(|i| {
            if i == 1 {
                "copies".to_string()
            } else {
                format!("copies{i}")
            }
        })
        .find(|key| !claims.params.contains_key(key))
        .expect("unbounded key search");
    claims.params.insert(key, k as i64);
    Ok(Config::new(d, points, boxes)?.with_claims(claims))
}

/// Starting from the `(d-1)`-disjunct hyperplane configuration on `[m]^2`
/// in dimension `d`, applies long-rectangle steps until the result is
/// `t`-disjunct. Each step uses `k = ceil(n^(c-1))` for the current box
/// count `n` and exponent `c` (starting at 2, then `c <- 2 - 1/c`), unless
/// `k_override` fixes it.
pub fn long_rect_tower(d: usize, t: usize, m: usize, k_override: Option<usize>) -> Result<Config> {
    require(d >= 2 && t + 1 >= d, || {
        format!("the tower needs d >= 2 and t >= d - 1, got d = {d}, t = {t}")
    })?;
    let mut config = hyperplane_config(2, d - 1, m)?;
    let mut c = 2.0f64;
    for _ in d - 1..t {
        let n = config.boxes().len() as f64;
        let k = k_override.unwrap_or_else(|| n.powf(c - 1.0).ceil().max(1.0) as usize);
        config = long_rect_step(&config, k)?;
        c = 2.0 - 1.0 / c;
    }
    let mut claims = Claims::named("long-rect-tower", &[("d", d as i64), ("t", t as i64), ("m", m as i64)]);
    if let Some(k) = k_override {
        claims.params.insert("k".into(), k as i64);
    }
    claims.disjunct = Some(t);
    Ok(config.with_claims(claims))
}

/// The outcome of checking one attached claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub property: &'static str,
    pub t: usize,
    pub expected: bool,
    pub verdict: Verdict,
}

impl ClaimCheck {
    pub fn confirmed(&self) -> bool {
        self.verdict.holds() == self.expected
    }
}

/// Runs every attached claim through the exact verifiers.
pub fn verify_claims(config: &Config, opts: &VerifyOptions) -> Result<Vec<ClaimCheck>> {
    let sys = config.induce()?;
    verify_system_claims(&sys, config.claims(), opts)
}

pub fn verify_system_claims(sys: &SetSystem, claims: &Claims, opts: &VerifyOptions) -> Result<Vec<ClaimCheck>> {
    let mut checks = Vec::new();
    let entries = [
        ("disjunct", claims.disjunct, true),
        ("disjunct", claims.not_disjunct, false),
        ("separable", claims.separable, true),
        ("separable", claims.not_separable, false),
    ];
    for (property, t, expected) in entries {
        let Some(t) = t else { continue };
        let verdict = if property == "disjunct" {
            sys.verify_disjunct(t, opts)?
        } else {
            sys.verify_separable(t, SubsetMode::Exactly, opts)?
        };
        checks.push(ClaimCheck {
            property,
            t,
            expected,
            verdict,
        });
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        for (n, d, m, tests) in [(5, 2, 25, 10), (3, 3, 27, 27), (2, 1, 2, 1), (2, 4, 16, 32)] {
            let c = grid_lines(n, d).unwrap();
            assert_eq!((c.points().len(), c.boxes().len()), (m, tests), "n = {n}, d = {d}");
        }
        assert!(grid_lines(1, 2).is_err());
        assert!(grid_lines(2, 0).is_err());
    }

    #[test]
    fn grid_lines_are_one_flats() {
        let a = grid_lines(3, 2).unwrap();
        let b = subspace_config(1, 2, 3).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.boxes(), b.boxes());
        assert_eq!(a.boxes()[0].label, "H(*,1)");
        assert_eq!(a.points()[1].label, "(1,2)");
    }

    #[test]
    fn subspace_sizes() {
        let c = subspace_config(2, 3, 3).unwrap();
        assert_eq!((c.points().len(), c.boxes().len()), (27, 9));
        let c = subspace_config(2, 4, 2).unwrap();
        assert_eq!((c.points().len(), c.boxes().len()), (16, 24));
        assert_eq!(c.claims().disjunct, Some(2));
        assert!(subspace_config(3, 3, 2).is_err());
    }

    #[test]
    fn embedding_point_example() {
        let c = embed_grid_lines_2d(3, 3).unwrap();
        let x = c.points().iter().find(|p| p.label == "(1,1,2)").unwrap();
        // 16 + 4 + 2 and 1 + 4 + 32
        assert_eq!(x.coords, vec![BigInt::from(22), BigInt::from(37)]);
        let line = c.boxes().iter().find(|b| b.label == "H(1,1,*)").unwrap();
        assert!(crate::geometry::contains(line, x).unwrap());
    }

    #[test]
    fn hyperplane_normals_and_classes() {
        let parts = hyperplane_partitions(2, 2, 5).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(
            (0..3).map(|i| normal(i, 2)).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        let counts: Vec<usize> = parts.iter().map(|p| p.parts().len()).collect();
        // x1 in 1..=5, x1 + x2 in 2..=10, x1 + 2 x2 in 3..=15
        assert_eq!(counts, vec![5, 9, 13]);
        let singletons = hyperplane_partitions(1, 3, 4).unwrap();
        assert_eq!(singletons.len(), 1);
        assert!(singletons[0].parts().iter().all(|p| p.len() == 1));
        assert!(hyperplane_partitions(2, 2, 2).is_err());
    }

    #[test]
    fn partitions_must_agree_and_cover() {
        assert!(Partition::new(3, vec![vec![0, 1]], vec!["a".into()]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![1]], vec!["a".into(), "b".into()]).is_err());
        let a = Partition::new(2, vec![vec![0], vec![1]], vec!["a".into(), "b".into()]).unwrap();
        let b = Partition::new(3, vec![vec![0, 1, 2]], vec!["c".into()]).unwrap();
        assert!(partitions_to_boxes(&[a, b], None).is_err());
    }

    #[test]
    fn identical_partitions_lie_on_the_diagonal() {
        let p = |tag: &str| {
            Partition::new(3, vec![vec![0], vec![1, 2]], vec![format!("{tag}1"), format!("{tag}2")]).unwrap()
        };
        let c = partitions_to_boxes(&[p("a"), p("b")], None).unwrap();
        assert!(c.points().iter().all(|x| x.coords[0] == x.coords[1]));
        let sys = c.induce().unwrap();
        for j in 0..2 {
            let first: Vec<bool> = (0..3).map(|i| sys.row(i).contains(j)).collect();
            let second: Vec<bool> = (0..3).map(|i| sys.row(i).contains(j + 2)).collect();
            assert_eq!(first, second);
        }
    }

    #[test]
    fn long_rect_sizes() {
        let base = single_defective_grid(3).unwrap();
        for k in 1..=3 {
            let c = long_rect_step(&base, k).unwrap();
            assert_eq!((c.points().len(), c.boxes().len()), (9 * k, 6 * k + 9));
            assert_eq!(c.claims().disjunct, Some(2));
        }
        let line = disjoint_boxes(3, 1).unwrap();
        assert!(long_rect_step(&line, 2).is_err());
        let bare = Config::new(2, base.points().to_vec(), base.boxes().to_vec()).unwrap();
        assert!(long_rect_step(&bare, 2).is_err());
    }

    #[test]
    fn canonical_form_is_equivalent() {
        let base = grid_lines(3, 2).unwrap();
        let canon = canonicalize(&base).unwrap();
        assert_eq!(canon.induce().unwrap(), base.induce().unwrap());
        for axis in 0..2 {
            let mut xs: Vec<BigInt> = canon.points().iter().map(|p| p.coords[axis].clone()).collect();
            xs.sort();
            assert_eq!(xs, (1..=9).map(BigInt::from).collect::<Vec<_>>());
        }
    }

    #[test]
    fn small_generators() {
        let g = single_defective_grid(1).unwrap();
        assert_eq!((g.points().len(), g.boxes().len()), (1, 2));
        let d = disjoint_boxes(3, 2).unwrap();
        let sys = d.induce().unwrap();
        for i in 0..3 {
            assert_eq!(sys.row(i).iter_ones().collect::<Vec<_>>(), vec![i]);
        }
    }

    #[test]
    fn tower_reaches_requested_level() {
        let c = long_rect_tower(2, 2, 3, None).unwrap();
        // base: 9 points, 3 + 5 boxes; step k = 8
        assert_eq!((c.points().len(), c.boxes().len()), (72, 73));
        assert_eq!(c.claims().disjunct, Some(2));
        let c = long_rect_tower(2, 3, 3, Some(1)).unwrap();
        assert_eq!((c.points().len(), c.boxes().len()), (9, 8 + 9 + 9));
    }
}
