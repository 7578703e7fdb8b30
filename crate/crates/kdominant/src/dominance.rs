//! Dominance predicates and exact algorithms on concrete datasets: skylines,
//! k-dominant skylines, dominator-count histograms, and dominant-cycle
//! counting.
//!
//! Smaller is better in every coordinate. All comparisons are exact; a tie
//! counts toward the "less than or equal" side of the predicate and never as
//! strict. For k < d the k-dominance relation is not transitive, so
//! k-dominant skylines can be empty and cycles can exist; the algorithms here
//! never assume transitivity except where k = d makes it available.

use crate::data::Dataset;
use crate::{Error, Result};

/// Default work budget for [`count_dominant_cycles`], in dominance tests.
pub const DEFAULT_CYCLE_WORK_LIMIT: u128 = 1_000_000_000;

fn check_k(k: usize, d: usize) -> Result<()> {
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    Ok(())
}

/// Unchecked core predicate: at least `k` coordinates with p <= q, at least
/// one strict. Bails out early once `k` is unreachable.
#[inline]
fn k_dominates_raw(p: &[f64], q: &[f64], k: usize) -> bool {
    let d = p.len();
    let mut leq = 0usize;
    let mut strict = false;
    for j in 0..d {
        if p[j] <= q[j] {
            leq += 1;
            strict |= p[j] < q[j];
        } else if leq + (d - j - 1) < k {
            return false;
        }
    }
    leq >= k && strict
}

/// True when `p` k-dominates `q`: `p` is less than or equal to `q` in at
/// least `k` coordinates and strictly smaller in at least one coordinate.
pub fn k_dominates(p: &[f64], q: &[f64], k: usize) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    check_k(k, p.len())?;
    Ok(k_dominates_raw(p, q, k))
}

/// Full dominance: `p` less than or equal to `q` everywhere, strictly smaller
/// somewhere. Equivalent to `k_dominates(p, q, d)`.
pub fn dominates(p: &[f64], q: &[f64]) -> Result<bool> {
    k_dominates(p, q, p.len().max(1))
}

/// Indices of the points not k-dominated by any other point, ascending.
/// Direct O(n^2 d) evaluation of the definition; the reference oracle for
/// [`k_dominant_skyline`].
pub fn k_dominant_skyline_exhaustive(ds: &Dataset, k: usize) -> Result<Vec<usize>> {
    check_k(k, ds.dim())?;
    let n = ds.n();
    let mut out = Vec::new();
    for i in 0..n {
        let q = ds.point(i);
        let dominated =
            (0..n).any(|j| j != i && k_dominates_raw(ds.point(j), q, k));
        if !dominated {
            out.push(i);
        }
    }
    Ok(out)
}

/// Indices of the points not k-dominated by any other point, ascending.
///
/// Three phases. Phase 1 visits points in ascending coordinate-sum order and
/// keeps a candidate pool: a point enters the pool unless some pooled point
/// already k-dominates it. Every true answer point enters the pool (nothing
/// at all k-dominates it), so the pool is a superset of the answer. Phase 2
/// tests each pooled point against the whole pool. Phase 3 tests the
/// remaining points against everything discarded in phase 1; this pass is
/// what removes points that sit on dominance cycles, since for k < d the
/// point that eliminated a discard does not inherit the discard's victims.
/// Together the phases decide "is anything k-dominating this point" exactly,
/// so the result always equals the exhaustive scan.
pub fn k_dominant_skyline(ds: &Dataset, k: usize) -> Result<Vec<usize>> {
    check_k(k, ds.dim())?;
    let n = ds.n();
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sums: Vec<f64> = ds.iter().map(|p| p.iter().sum()).collect();
    order.sort_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(a.cmp(&b)));

    let mut pool: Vec<usize> = Vec::new();
    let mut discarded: Vec<usize> = Vec::new();
    for &i in &order {
        let q = ds.point(i);
        if pool.iter().any(|&c| k_dominates_raw(ds.point(c), q, k)) {
            discarded.push(i);
        } else {
            pool.push(i);
        }
    }

    let mut survivors: Vec<usize> = Vec::new();
    for &c in &pool {
        let q = ds.point(c);
        let dominated =
            pool.iter().any(|&c2| c2 != c && k_dominates_raw(ds.point(c2), q, k));
        if !dominated {
            survivors.push(c);
        }
    }

    let mut out: Vec<usize> = Vec::new();
    for &s in &survivors {
        let q = ds.point(s);
        let dominated = discarded.iter().any(|&e| k_dominates_raw(ds.point(e), q, k));
        if !dominated {
            out.push(s);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The classical skyline: points dominated (in all `d` coordinates) by no
/// other point. Exact duplicates never dominate each other, so duplicated
/// skyline points all stay.
pub fn skyline(ds: &Dataset) -> Vec<usize> {
    // k = d is always in range for a well-formed dataset.
    k_dominant_skyline(ds, ds.dim()).expect("dimension is at least 1")
}

/// Per-point dominator counts for a fixed `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatorHistogram {
    k: usize,
    counts: Vec<usize>,
}

impl DominatorHistogram {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `counts()[i]` = number of other points that k-dominate point `i`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of points k-dominated by exactly `j` others.
    pub fn cell(&self, j: usize) -> usize {
        self.counts.iter().filter(|&&c| c == j).count()
    }

    /// Histogram cells for j = 0..n-1; the entries sum to n.
    pub fn cells(&self) -> Vec<usize> {
        let n = self.counts.len();
        let mut cells = vec![0usize; n];
        for &c in &self.counts {
            cells[c] += 1;
        }
        cells
    }

    /// Number of points k-dominated by at most `m` others.
    pub fn cumulative(&self, m: usize) -> usize {
        self.counts.iter().filter(|&&c| c <= m).count()
    }

    /// The j = 0 cell, which is the k-dominant skyline cardinality.
    pub fn skyline_size(&self) -> usize {
        self.cell(0)
    }
}

/// Count, for every point, how many other points k-dominate it.
pub fn dominator_histogram(ds: &Dataset, k: usize) -> Result<DominatorHistogram> {
    check_k(k, ds.dim())?;
    let n = ds.n();
    let mut counts = vec![0usize; n];
    for (i, count) in counts.iter_mut().enumerate() {
        let q = ds.point(i);
        *count = (0..n)
            .filter(|&j| j != i && k_dominates_raw(ds.point(j), q, k))
            .count();
    }
    Ok(DominatorHistogram { k, counts })
}

/// Result of a cycle count: the number of cycles found and the work spent,
/// in dominance tests (adjacency probes during the search count as one each).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleCount {
    pub cycles: u64,
    pub work: u128,
}

/// Count k-dominant cycles of exactly `length` distinct points, where each
/// point k-dominates the next and the last k-dominates the first.
///
/// A cycle is identified by its point set plus traversal orientation, and
/// counted once: the search roots every cycle at its smallest point index,
/// so for length >= 3 the two orientations of one point set are found as two
/// distinct root-anchored walks, while a 2-cycle (a mutually dominating
/// pair) is found once. Work above `work_limit` aborts with an error rather
/// than running for hours; the search is Theta(n^2) at best because it
/// materializes the dominance adjacency matrix first.
pub fn count_dominant_cycles(
    ds: &Dataset,
    length: usize,
    k: usize,
    work_limit: u128,
) -> Result<CycleCount> {
    check_k(k, ds.dim())?;
    let n = ds.n();
    if length < 2 || length > n {
        return Err(Error::InvalidParameter(format!(
            "cycle length must be between 2 and n = {n}, got {length}"
        )));
    }

    let adj_work = (n as u128) * (n as u128);
    if adj_work > work_limit {
        return Err(Error::WorkLimit { needed: adj_work, limit: work_limit });
    }
    let mut adj = vec![false; n * n];
    for i in 0..n {
        let p = ds.point(i);
        for j in 0..n {
            if i != j {
                adj[i * n + j] = k_dominates_raw(p, ds.point(j), k);
            }
        }
    }

    let mut state = CycleSearch {
        n,
        length,
        adj: &adj,
        visited: vec![false; n],
        work: adj_work,
        work_limit,
        cycles: 0,
    };
    for root in 0..n {
        state.visited[root] = true;
        state.extend(root, root, 1)?;
        state.visited[root] = false;
    }
    Ok(CycleCount { cycles: state.cycles, work: state.work })
}

struct CycleSearch<'a> {
    n: usize,
    length: usize,
    adj: &'a [bool],
    visited: Vec<bool>,
    work: u128,
    work_limit: u128,
    cycles: u64,
}

impl CycleSearch<'_> {
    /// Depth-first walk from `root` with `depth` points on the path ending
    /// at `last`. Only indices above the root may extend the path, which
    /// anchors each cycle at its minimum index exactly once per orientation.
    fn extend(&mut self, root: usize, last: usize, depth: usize) -> Result<()> {
        if depth == self.length {
            self.work += 1;
            self.cycles += u64::from(self.adj[last * self.n + root]);
            return self.check_budget();
        }
        for next in root + 1..self.n {
            self.work += 1;
            if self.adj[last * self.n + next] && !self.visited[next] {
                self.visited[next] = true;
                self.extend(root, next, depth + 1)?;
                self.visited[next] = false;
            }
        }
        self.check_budget()
    }

    fn check_budget(&self) -> Result<()> {
        if self.work > self.work_limit {
            Err(Error::WorkLimit { needed: self.work, limit: self.work_limit })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> Dataset {
        Dataset::from_rows(
            5,
            &[
                vec![1.0, 2.0, 2.0, 3.0, 3.0],
                vec![3.0, 1.0, 2.0, 2.0, 3.0],
                vec![3.0, 3.0, 1.0, 2.0, 2.0],
                vec![2.0, 3.0, 3.0, 1.0, 2.0],
                vec![2.0, 2.0, 3.0, 3.0, 1.0],
                vec![2.0, 3.0, 1.0, 1.0, 3.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn predicate_basics() {
        assert!(k_dominates(&[1.0, 2.0], &[2.0, 3.0], 2).unwrap());
        assert!(!k_dominates(&[1.0, 2.0], &[1.0, 2.0], 1).unwrap());
        assert!(k_dominates(
            &[3.0, 1.0, 2.0, 2.0, 3.0],
            &[1.0, 2.0, 2.0, 3.0, 3.0],
            4
        )
        .unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 4.0], &[1.0, 3.0]).unwrap());
        assert!(matches!(
            k_dominates(&[1.0], &[1.0, 2.0], 1),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            k_dominates(&[1.0, 2.0], &[2.0, 3.0], 3),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn six_level_points() {
        let ds = table1();
        // All six points survive full dominance, none survives k <= 4: the
        // last two rows dominate each other in four coordinates, and every
        // other point is 4-dominated as well.
        assert_eq!(skyline(&ds), vec![0, 1, 2, 3, 4, 5]);
        for k in 1..=4 {
            assert_eq!(k_dominant_skyline(&ds, k).unwrap(), Vec::<usize>::new());
        }
        assert!(k_dominates(ds.point(3), ds.point(5), 4).unwrap());
        assert!(k_dominates(ds.point(5), ds.point(3), 4).unwrap());

        let hist = dominator_histogram(&ds, 5).unwrap();
        assert_eq!(hist.counts(), &[0, 0, 0, 0, 0, 0]);
        assert_eq!(hist.skyline_size(), 6);

        // Dropping the last point leaves a five-point set whose k-dominant
        // skylines are all empty for k <= 4.
        let five = Dataset::from_rows(
            5,
            &(0..5).map(|i| ds.point(i).to_vec()).collect::<Vec<_>>(),
        )
        .unwrap();
        for k in 1..=4 {
            assert_eq!(k_dominant_skyline_exhaustive(&five, k).unwrap(), Vec::<usize>::new());
            let h = dominator_histogram(&five, k).unwrap();
            assert!(h.counts().iter().all(|&c| c >= 1));
        }
        assert_eq!(skyline(&five).len(), 5);
    }

    #[test]
    fn duplicates_do_not_dominate_each_other() {
        let ds = Dataset::from_rows(2, &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(skyline(&ds), vec![0, 1]);
        assert_eq!(k_dominant_skyline(&ds, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn histogram_partitions_dataset() {
        let ds = table1();
        for k in 1..=5 {
            let hist = dominator_histogram(&ds, k).unwrap();
            assert_eq!(hist.cells().iter().sum::<usize>(), 6);
            assert_eq!(hist.skyline_size(), k_dominant_skyline(&ds, k).unwrap().len());
            assert_eq!(hist.cumulative(5), 6);
        }
    }

    #[test]
    fn mutual_pair_is_one_cycle() {
        let ds = Dataset::from_rows(2, &[vec![0.1, 0.9], vec![0.2, 0.3]]).unwrap();
        let got = count_dominant_cycles(&ds, 2, 1, DEFAULT_CYCLE_WORK_LIMIT).unwrap();
        assert_eq!(got.cycles, 1);
    }

    #[test]
    fn full_dominance_has_no_cycles() {
        let ds = table1();
        for length in 2..=6 {
            let got = count_dominant_cycles(&ds, length, 5, DEFAULT_CYCLE_WORK_LIMIT).unwrap();
            assert_eq!(got.cycles, 0, "length {length}");
        }
    }

    #[test]
    fn triangle_counts_both_orientations() {
        // Three points that 1-dominate each other cyclically in both
        // directions: every ordered pair shares a strictly smaller
        // coordinate, so all six directed edges exist.
        let ds = Dataset::from_rows(
            3,
            &[vec![1.0, 6.0, 5.0], vec![5.0, 1.0, 6.0], vec![6.0, 5.0, 1.0]],
        )
        .unwrap();
        let got = count_dominant_cycles(&ds, 3, 1, DEFAULT_CYCLE_WORK_LIMIT).unwrap();
        assert_eq!(got.cycles, 2);
    }

    #[test]
    fn work_limit_refuses() {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, -(i as f64)]).collect();
        let ds = Dataset::from_rows(2, &rows).unwrap();
        match count_dominant_cycles(&ds, 5, 1, 2_000) {
            Err(Error::WorkLimit { needed, limit }) => {
                assert!(needed > limit);
                assert_eq!(limit, 2_000);
            }
            other => panic!("expected work-limit refusal, got {other:?}"),
        }
    }

    #[test]
    fn cycle_parameter_validation() {
        let ds = table1();
        assert!(count_dominant_cycles(&ds, 1, 1, 1_000).is_err());
        assert!(count_dominant_cycles(&ds, 7, 1, 1_000).is_err());
        assert!(matches!(
            count_dominant_cycles(&ds, 2, 9, 1_000),
            Err(Error::KOutOfRange { .. })
        ));
    }
}
