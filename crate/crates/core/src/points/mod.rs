//! Enumeration of S-integral points of bounded height, `S = {inf, p}`.
//!
//! A point with reduced denominator `p^k` is stored as its integer numerator
//! vector `a` with `x = a / p^k`. Bucket `k` of a census holds the primitive
//! solutions (not all `a_i` divisible by `p`) of the cleared equation at
//! level `p^(2k)`.
//!
//! Sphere censuses are stored symmetry-reduced: each bucket keeps one
//! representative per orbit of signed coordinate permutations (absolute
//! values sorted in decreasing order). Height and the sup metric are
//! invariant under that group, so counts, nearest-point and `omega` queries
//! can all be answered on representatives. [`HeightCensus::bucket_points`]
//! expands the orbits when the full point list is needed.

mod census_file;
mod variety;

use std::collections::BTreeSet;

use crate::arith::{self, HeightValue, PlaceSet, Prime, RationalVector};
use crate::error::{Error, Result};

pub use census_file::{read_census, read_census_file, write_census, write_census_file};
pub use variety::VarietySpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnumeratedPoint {
    numerators: Vec<i64>,
    denominator: u64,
    k: u32,
    height: u64,
}

impl EnumeratedPoint {
    pub(crate) fn new(numerators: Vec<i64>, k: u32, denominator: u64) -> Self {
        let top = numerators.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0);
        EnumeratedPoint {
            height: top.max(denominator),
            numerators,
            denominator,
            k,
        }
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    /// `p^k`.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Exponent of the reduced denominator.
    pub fn denominator_exponent(&self) -> u32 {
        self.k
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn height_value(&self) -> HeightValue {
        HeightValue::from(self.height)
    }

    pub fn point(&self) -> RationalVector {
        RationalVector::from_integers(&self.numerators, self.denominator as i64)
            .expect("enumerated points are nonempty")
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        let den = self.denominator as f64;
        self.numerators.iter().map(|&a| a as f64 / den).collect()
    }
}

/// Wraps a solution of the cleared equation at level `k`, rejecting it when
/// `p` divides every entry (it then belongs to a lower bucket).
pub fn primitive_reduce(raw: &[i64], p: Prime, k: u32) -> Option<EnumeratedPoint> {
    let p = p.get() as i64;
    if k >= 1 && raw.iter().all(|a| a % p == 0) {
        return None;
    }
    let den = (p as u64).checked_pow(k)?;
    Some(EnumeratedPoint::new(raw.to_vec(), k, den))
}

/// Number of distinct images of a sorted nonnegative representative under
/// signed permutations.
pub fn orbit_size(rep: &[i64]) -> u64 {
    let n = rep.len() as u64;
    let mut size: u64 = (1..=n).product();
    let mut run = 1u64;
    for w in rep.windows(2) {
        if w[0] == w[1] {
            run += 1;
            size /= run;
        } else {
            run = 1;
        }
    }
    let nonzero = rep.iter().filter(|&&a| a != 0).count() as u32;
    size << nonzero
}

/// Every signed permutation of `rep`, sorted lexicographically, no repeats.
pub fn expand_orbit(rep: &[i64]) -> Vec<Vec<i64>> {
    let mut base: Vec<i64> = rep.iter().map(|a| a.abs()).collect();
    base.sort_unstable();
    let mut perms = Vec::new();
    loop {
        perms.push(base.clone());
        if !next_permutation(&mut base) {
            break;
        }
    }
    let mut out = Vec::with_capacity(orbit_size(rep) as usize);
    for perm in perms {
        let nz: Vec<usize> = (0..perm.len()).filter(|&i| perm[i] != 0).collect();
        for mask in 0u32..(1 << nz.len()) {
            let mut v = perm.clone();
            for (bit, &i) in nz.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v[i] = -v[i];
                }
            }
            out.push(v);
        }
    }
    out.sort_unstable();
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Sorted absolute values, decreasing.
pub fn canonical_rep(nums: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = nums.iter().map(|a| a.abs()).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Numerator bound `max_i |a_i| <= cap` for indefinite varieties.
    /// Defaults to `p^max_k`, which makes the census exactly the set of
    /// points of height at most `p^max_k`.
    pub cap: Option<u64>,
    /// Maximum number of stored points (representatives, for spheres).
    pub budget: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            cap: None,
            budget: 50_000_000,
        }
    }
}

/// All enumerated points of a variety up to a denominator exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCensus {
    variety: VarietySpec,
    p: Prime,
    max_k: u32,
    cap: Option<u64>,
    symmetric: bool,
    buckets: Vec<Vec<EnumeratedPoint>>,
    warnings: Vec<String>,
}

impl HeightCensus {
    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    /// Numerator box bound for indefinite varieties.
    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    pub fn place_set(&self) -> PlaceSet {
        PlaceSet::single_prime(self.p)
    }

    /// True when buckets hold orbit representatives.
    pub fn is_symmetry_reduced(&self) -> bool {
        self.symmetric
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Stored points of bucket `k`: orbit representatives for spheres,
    /// every point otherwise.
    pub fn representatives(&self, k: u32) -> &[EnumeratedPoint] {
        self.buckets.get(k as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn multiplicity(&self, point: &EnumeratedPoint) -> u64 {
        if self.symmetric {
            orbit_size(&point.numerators)
        } else {
            1
        }
    }

    pub fn bucket_len(&self, k: u32) -> u64 {
        self.representatives(k).iter().map(|pt| self.multiplicity(pt)).sum()
    }

    pub fn total_points(&self) -> u64 {
        (0..=self.max_k).map(|k| self.bucket_len(k)).sum()
    }

    pub fn stored_len(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.iter().all(Vec::is_empty)
    }

    /// Every point of bucket `k`, sorted lexicographically by numerators.
    pub fn bucket_points(&self, k: u32) -> Vec<EnumeratedPoint> {
        let reps = self.representatives(k);
        if !self.symmetric {
            return reps.to_vec();
        }
        let mut out: Vec<EnumeratedPoint> = reps
            .iter()
            .flat_map(|rep| {
                expand_orbit(&rep.numerators)
                    .into_iter()
                    .map(move |nums| EnumeratedPoint::new(nums, rep.k, rep.denominator))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Stored points with their multiplicities, bucket by bucket.
    pub fn iter_weighted(&self) -> impl Iterator<Item = (&EnumeratedPoint, u64)> + '_ {
        self.buckets.iter().flatten().map(move |pt| (pt, self.multiplicity(pt)))
    }

    /// Builds a census from arbitrary points, canonicalizing and
    /// deduplicating. Points must satisfy the equation and have reduced
    /// denominator `p^k` with `k <= max_k`.
    pub fn from_points(
        variety: VarietySpec,
        p: Prime,
        max_k: u32,
        cap: Option<u64>,
        points: impl IntoIterator<Item = EnumeratedPoint>,
    ) -> Result<Self> {
        let symmetric = variety.has_signed_permutation_symmetry();
        let mut sets: Vec<BTreeSet<EnumeratedPoint>> = vec![BTreeSet::new(); max_k as usize + 1];
        for pt in points {
            if pt.k > max_k || !variety.satisfies(&pt.numerators, pt.denominator) {
                return Err(Error::InvalidArgument(format!(
                    "point {:?}/{} is not on {variety} within k <= {max_k}",
                    pt.numerators, pt.denominator
                )));
            }
            let pt = if symmetric {
                EnumeratedPoint::new(canonical_rep(&pt.numerators), pt.k, pt.denominator)
            } else {
                pt
            };
            sets[pt.k as usize].insert(pt);
        }
        let mut census = HeightCensus {
            variety,
            p,
            max_k,
            cap,
            symmetric,
            buckets: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            warnings: Vec::new(),
        };
        census.add_advisories();
        Ok(census)
    }

    fn add_advisories(&mut self) {
        if matches!(self.variety, VarietySpec::Sphere { .. }) && self.p.get() % 4 != 1 {
            self.warnings.push(format!(
                "p = {} is not 1 mod 4; sphere points over Z[1/p] need not be dense",
                self.p
            ));
        }
    }
}

fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|v| *v <= i64::MAX as u64)
        .ok_or_else(|| Error::Overflow(format!("{p}^{k} does not fit in i64")))
}

/// Enumerates buckets `0..=max_k` with default options.
pub fn enumerate_points(variety: &VarietySpec, p: Prime, max_k: u32) -> Result<HeightCensus> {
    enumerate_points_with(variety, p, max_k, &EnumerateOptions::default())
}

pub fn enumerate_points_with(
    variety: &VarietySpec,
    p: Prime,
    max_k: u32,
    opts: &EnumerateOptions,
) -> Result<HeightCensus> {
    let cap = if variety.is_definite() {
        None
    } else {
        Some(match opts.cap {
            Some(c) => c,
            None => checked_pow(p.get(), max_k)?,
        })
    };
    let symmetric = variety.has_signed_permutation_symmetry();
    let mut buckets = Vec::with_capacity(max_k as usize + 1);
    let mut stored = 0usize;
    for k in 0..=max_k {
        let den = checked_pow(p.get(), k)?;
        let mut bucket = Vec::new();
        let mut sink = |nums: &[i64]| -> bool {
            if let Some(pt) = primitive_reduce(nums, p, k) {
                bucket.push(pt);
                stored += 1;
            }
            stored <= opts.budget
        };
        let finished = match variety {
            VarietySpec::Sphere { .. } => sphere_descent(variety.ambient_dim(), den, &mut sink)?,
            VarietySpec::Hyperboloid { coeffs, level } => {
                let bound = match cap {
                    Some(c) => c,
                    None => definite_bound(*coeffs, *level, den)?,
                };
                hyperboloid_descent(*coeffs, *level, den, bound, &mut sink)?
            }
            VarietySpec::Sl2 => sl2_descent(den, cap.expect("sl2 carries a cap"), &mut sink)?,
        };
        if !finished {
            return Err(Error::ResourceBound {
                budget: opts.budget,
                completed_k: k.checked_sub(1),
            });
        }
        bucket.sort_unstable();
        buckets.push(bucket);
    }
    let mut census = HeightCensus {
        variety: variety.clone(),
        p,
        max_k,
        cap,
        symmetric,
        buckets,
        warnings: Vec::new(),
    };
    census.add_advisories();
    Ok(census)
}

/// Sorted nonnegative solutions `a_1 >= ... >= a_n >= 0` of
/// `sum a_i^2 = den^2`. Returns false if the sink asked to stop.
fn sphere_descent(n: usize, den: u64, sink: &mut dyn FnMut(&[i64]) -> bool) -> Result<bool> {
    let target = (den as u128) * (den as u128);
    if target > u64::MAX as u128 / 2 {
        return Err(Error::Overflow(format!("{den}^2 too large for sphere descent")));
    }
    let mut coords = vec![0i64; n];
    Ok(descend(&mut coords, 0, target as u64, den, sink))
}

fn descend(coords: &mut [i64], pos: usize, rest: u64, upper: u64, sink: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    let left = (coords.len() - pos) as u64;
    if left == 1 {
        let s = rest.isqrt();
        if s * s == rest && s <= upper {
            coords[pos] = s as i64;
            return sink(coords);
        }
        return true;
    }
    // the current coordinate is the largest of the remaining ones
    let lo = ceil_sqrt(rest.div_ceil(left));
    let hi = upper.min(rest.isqrt());
    for a in lo..=hi {
        coords[pos] = a as i64;
        if !descend(coords, pos + 1, rest - a * a, a, sink) {
            return false;
        }
    }
    true
}

fn ceil_sqrt(v: u64) -> u64 {
    let s = v.isqrt();
    if s * s == v {
        s
    } else {
        s + 1
    }
}

/// Bound on `|a_i|` for `sum c_i a_i^2 = level * den^2` with a definite form.
fn definite_bound(coeffs: [i64; 3], level: i64, den: u64) -> Result<u64> {
    let smallest = coeffs.iter().map(|c| c.unsigned_abs()).min().unwrap() as u128;
    let top = level.unsigned_abs() as u128 * den as u128 * den as u128 / smallest;
    u64::try_from(top.isqrt()).map_err(|_| Error::Overflow("definite bound".into()))
}

fn hyperboloid_descent(
    coeffs: [i64; 3],
    level: i64,
    den: u64,
    cap: u64,
    sink: &mut dyn FnMut(&[i64]) -> bool,
) -> Result<bool> {
    let b = i64::try_from(cap).map_err(|_| Error::Overflow("cap".into()))?;
    let rhs0 = level as i128 * den as i128 * den as i128;
    let c3 = coeffs[2] as i128;
    for x in -b..=b {
        for y in -b..=b {
            let rest = rhs0 - coeffs[0] as i128 * (x as i128).pow(2) - coeffs[1] as i128 * (y as i128).pow(2);
            if rest % c3 != 0 {
                continue;
            }
            let z2 = rest / c3;
            if z2 < 0 {
                continue;
            }
            let z2 = u128::try_from(z2).unwrap();
            let z = z2.isqrt();
            if z * z != z2 || z > cap as u128 {
                continue;
            }
            let z = z as i64;
            if !sink(&[x, y, z]) {
                return Ok(false);
            }
            if z != 0 && !sink(&[x, y, -z]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn sl2_descent(den: u64, cap: u64, sink: &mut dyn FnMut(&[i64]) -> bool) -> Result<bool> {
    let b = i64::try_from(cap).map_err(|_| Error::Overflow("cap".into()))?;
    let n = den as i128 * den as i128;
    for a in -b..=b {
        for bb in -b..=b {
            for c in -b..=b {
                let bc = bb as i128 * c as i128;
                if a != 0 {
                    let num = n + bc;
                    if num % a as i128 != 0 {
                        continue;
                    }
                    let d = num / a as i128;
                    if d.abs() <= b as i128 && !sink(&[a, bb, c, d as i64]) {
                        return Ok(false);
                    }
                } else if bc == -n {
                    for d in -b..=b {
                        if !sink(&[a, bb, c, d]) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustive box scan for bucket `k`, used as an independent completeness
/// oracle. Spheres use the box `p^k`; definite hyperboloids a bound derived
/// from the coefficients; indefinite varieties need an explicit `cap`.
pub fn brute_force_oracle(variety: &VarietySpec, p: Prime, k: u32, cap: Option<u64>) -> Result<Vec<EnumeratedPoint>> {
    let den = checked_pow(p.get(), k)?;
    let bound = match variety {
        VarietySpec::Sphere { .. } => den,
        VarietySpec::Hyperboloid { coeffs, level } if variety.is_definite() => definite_bound(*coeffs, *level, den)?,
        _ => cap.ok_or_else(|| Error::CapRequired(variety.tag()))?,
    };
    let b = i64::try_from(bound).map_err(|_| Error::Overflow("oracle box".into()))?;
    let n = variety.ambient_dim();
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        if variety.satisfies(&cur, den) {
            if let Some(pt) = primitive_reduce(&cur, p, k) {
                out.push(pt);
            }
        }
        // odometer increment
        let mut i = n;
        loop {
            if i == 0 {
                out.sort_unstable();
                out.dedup();
                return Ok(out);
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

/// `(p^k, A(p^k))` for `k = 0..=max_k`, where `A(h)` counts census points
/// of height at most `h`.
pub fn count_by_height(census: &HeightCensus) -> Vec<(u64, u64)> {
    let p = census.p.get();
    let mut by_k = vec![0u64; census.max_k as usize + 1];
    for (pt, mult) in census.iter_weighted() {
        // smallest k with p^k >= height
        let mut k = 0usize;
        let mut h = 1u64;
        while h < pt.height && k <= census.max_k as usize {
            h = h.saturating_mul(p);
            k += 1;
        }
        if k <= census.max_k as usize {
            by_k[k] += mult;
        }
    }
    let mut acc = 0;
    let mut h = 1u64;
    by_k.iter()
        .map(|c| {
            acc += c;
            let row = (h, acc);
            h = h.saturating_mul(p);
            row
        })
        .collect()
}

/// Checks a point against the census invariants: on the variety,
/// S-integral for `S = {inf, p}`, and stored height equal to `H(x)`.
pub fn check_point(census: &HeightCensus, pt: &EnumeratedPoint) -> bool {
    let x = pt.point();
    census.variety.satisfies(&pt.numerators, pt.denominator)
        && arith::is_s_integral(&x, &census.place_set())
        && arith::height(&x) == pt.height_value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five() -> Prime {
        Prime::new(5).unwrap()
    }

    fn s2() -> VarietySpec {
        VarietySpec::sphere(2).unwrap()
    }

    #[test]
    fn sphere2_small_buckets() {
        let census = enumerate_points(&s2(), five(), 1).unwrap();
        assert_eq!(census.bucket_len(0), 6);
        assert_eq!(census.bucket_len(1), 24);
        let pts = census.bucket_points(1);
        assert!(pts.iter().all(|pt| pt.height() == 5));
        assert!(pts.iter().any(|pt| pt.numerators() == [3, 4, 0]));
        assert!(pts.iter().all(|pt| check_point(&census, pt)));
    }

    #[test]
    fn sphere3_bucket_one() {
        let census = enumerate_points(&VarietySpec::sphere(3).unwrap(), five(), 1).unwrap();
        // r_4(25) = 248 minus the 8 imprimitive points 5 e_i
        assert_eq!(census.bucket_len(1), 240);
        assert_eq!(census.bucket_len(0), 8);
    }

    #[test]
    fn primitive_reduce_examples() {
        assert!(primitive_reduce(&[5, 0, 0], five(), 1).is_none());
        let pt = primitive_reduce(&[3, 4, 0], five(), 1).unwrap();
        assert_eq!(pt.point(), RationalVector::from_integers(&[3, 4, 0], 5).unwrap());
        assert_eq!(pt.height(), 5);
        let pt = primitive_reduce(&[7, 24, 0], five(), 2).unwrap();
        assert_eq!(pt.height(), 25);
        assert_eq!(pt.denominator(), 25);
        // k = 0 is never rejected
        assert!(primitive_reduce(&[5, 0, 0], five(), 0).is_some());
    }

    #[test]
    fn count_by_height_examples() {
        let census = enumerate_points(&s2(), five(), 1).unwrap();
        assert_eq!(count_by_height(&census), vec![(1, 6), (5, 30)]);
        let s3 = enumerate_points(&VarietySpec::sphere(3).unwrap(), five(), 1).unwrap();
        assert_eq!(count_by_height(&s3), vec![(1, 8), (5, 248)]);

        let empty = HeightCensus::from_points(s2(), five(), 2, None, []).unwrap();
        assert_eq!(count_by_height(&empty), vec![(1, 0), (5, 0), (25, 0)]);
    }

    #[test]
    fn oracle_matches_descent_on_sphere2() {
        let census = enumerate_points(&s2(), five(), 2).unwrap();
        for k in 0..=2 {
            let oracle = brute_force_oracle(&s2(), five(), k, None).unwrap();
            assert_eq!(census.bucket_points(k), oracle, "bucket {k}");
        }
        assert_eq!(census.bucket_len(2), 120);
    }

    #[test]
    fn oracle_requires_cap_for_indefinite() {
        let h = VarietySpec::hyperboloid([1, 1, -1], 1).unwrap();
        assert!(matches!(
            brute_force_oracle(&h, five(), 0, None),
            Err(Error::CapRequired(_))
        ));
        assert!(matches!(
            brute_force_oracle(&VarietySpec::Sl2, five(), 0, None),
            Err(Error::CapRequired(_))
        ));
    }

    #[test]
    fn sl2_unit_box() {
        let two = Prime::new(2).unwrap();
        let oracle = brute_force_oracle(&VarietySpec::Sl2, two, 0, Some(1)).unwrap();
        // independent count: determinant-one matrices with entries in {-1,0,1}
        let mut count = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    for d in -1i64..=1 {
                        if a * d - b * c == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(oracle.len(), count);
        let opts = EnumerateOptions {
            cap: Some(1),
            ..Default::default()
        };
        let census = enumerate_points_with(&VarietySpec::Sl2, two, 0, &opts).unwrap();
        assert_eq!(census.bucket_points(0), oracle);
    }

    #[test]
    fn anisotropic_hyperboloid_gives_empty_buckets() {
        // x^2 + y^2 + z^2 = -1 has no real points
        let h = VarietySpec::hyperboloid([1, 1, 1], -1).unwrap();
        let census = enumerate_points(&h, five(), 2).unwrap();
        assert!(census.is_empty());
    }

    #[test]
    fn budget_reports_completed_bucket() {
        // stored representatives per bucket: 1, 1, 3, 13
        let opts = EnumerateOptions { cap: None, budget: 4 };
        match enumerate_points_with(&s2(), five(), 3, &opts) {
            Err(Error::ResourceBound { completed_k, budget }) => {
                assert_eq!(budget, 4);
                assert_eq!(completed_k, Some(1));
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 0, 0]), 6);
        assert_eq!(orbit_size(&[4, 3, 0]), 24);
        assert_eq!(orbit_size(&[1, 1, 1, 1]), 16);
        assert_eq!(orbit_size(&[2, 1, 1, 1]), 64);
        for rep in [vec![3i64, 2, 1, 0], vec![2, 2, 0, 0], vec![5, 0, 0]] {
            assert_eq!(expand_orbit(&rep).len() as u64, orbit_size(&rep));
        }
    }

    #[test]
    fn warns_on_p_3_mod_4() {
        let census = enumerate_points(&s2(), Prime::new(3).unwrap(), 1).unwrap();
        assert_eq!(census.warnings().len(), 1);
    }
}
