//! Incremental tuple state: per-prime class occupancy with O(rows) updates.
//!
//! A state tracks, for each active prime, how many tuple elements fall in each
//! residue class, plus the number of classes left empty. A tuple is admissible
//! exactly when every active prime still has an empty class; membership in the
//! candidate pool covers all other primes. Add/remove touch one counter per
//! row, so feasibility probes stay cheap inside the search loops.

use crate::context::ProblemContext;

/// A subset of the candidate pool with live occupancy bookkeeping.
#[derive(Clone)]
pub struct TupleState<'a> {
    ctx: &'a ProblemContext,
    values: Vec<i64>,
    /// Flattened occupancy counters, rows concatenated in prime order.
    class_counts: Vec<u32>,
    /// Start of each prime's row inside `class_counts`.
    row_offsets: Vec<usize>,
    /// Empty-class count per row.
    free_counts: Vec<u32>,
    /// Rows with no empty class left; admissible iff zero.
    exhausted_rows: u32,
    /// Rows down to exactly one empty class, in no particular order. Only
    /// these rows can be exhausted by a single addition, so feasibility
    /// probes loop over this short list instead of every row.
    critical_rows: Vec<usize>,
}

impl<'a> TupleState<'a> {
    /// The empty tuple over `ctx`.
    pub fn new(ctx: &'a ProblemContext) -> Self {
        let primes = ctx.active_primes();
        let mut row_offsets = Vec::with_capacity(primes.len());
        let mut total = 0usize;
        for &p in primes {
            row_offsets.push(total);
            total += p as usize;
        }
        TupleState {
            ctx,
            values: Vec::new(),
            class_counts: vec![0; total],
            row_offsets,
            free_counts: primes.iter().map(|&p| p as u32).collect(),
            exhausted_rows: 0,
            critical_rows: Vec::new(),
        }
    }

    /// Build a state holding `values`, which must all lie in the pool.
    pub fn from_values(ctx: &'a ProblemContext, values: &[i64]) -> Self {
        let mut s = TupleState::new(ctx);
        for &v in values {
            s.add(v);
        }
        s
    }

    pub fn ctx(&self) -> &'a ProblemContext {
        self.ctx
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> i64 {
        self.values[0]
    }

    pub fn last(&self) -> i64 {
        *self.values.last().unwrap()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    /// Occupancy counter of `class` in the row of active prime number `row`.
    pub fn class_count(&self, row: usize, class: usize) -> u32 {
        self.class_counts[self.row_offsets[row] + class]
    }

    /// The whole occupancy row of active prime number `row`.
    pub fn class_row(&self, row: usize) -> &[u32] {
        let p = self.ctx.active_primes()[row] as usize;
        let off = self.row_offsets[row];
        &self.class_counts[off..off + p]
    }

    /// Number of still-empty classes in `row`.
    pub fn free_count(&self, row: usize) -> u32 {
        self.free_counts[row]
    }

    /// True iff every active prime keeps at least one empty class.
    pub fn is_admissible(&self) -> bool {
        self.exhausted_rows == 0
    }

    /// Span of the tuple. Panics on an empty tuple: a silent zero would
    /// corrupt best-so-far comparisons.
    pub fn diameter(&self) -> i64 {
        diameter_of(&self.values)
    }

    /// Insert `v`, updating one counter per row.
    pub fn add(&mut self, v: i64) {
        let idx = self
            .ctx
            .index_of(v)
            .unwrap_or_else(|| panic!("value {v} is not in the candidate pool"));
        let pos = match self.values.binary_search(&v) {
            Err(pos) => pos,
            Ok(_) => panic!("value {v} is already in the tuple"),
        };
        self.values.insert(pos, v);
        for (row, &r) in self.ctx.residue_row(idx).iter().enumerate() {
            let slot = self.row_offsets[row] + r as usize;
            self.class_counts[slot] += 1;
            if self.class_counts[slot] == 1 {
                self.free_counts[row] -= 1;
                match self.free_counts[row] {
                    0 => {
                        self.exhausted_rows += 1;
                        self.drop_critical(row);
                    }
                    1 => self.critical_rows.push(row),
                    _ => {}
                }
            }
        }
    }

    /// Remove `v`, the exact inverse of `add`.
    pub fn remove(&mut self, v: i64) {
        let idx = self
            .ctx
            .index_of(v)
            .unwrap_or_else(|| panic!("value {v} is not in the candidate pool"));
        let pos = self
            .values
            .binary_search(&v)
            .unwrap_or_else(|_| panic!("value {v} is not in the tuple"));
        self.values.remove(pos);
        for (row, &r) in self.ctx.residue_row(idx).iter().enumerate() {
            let slot = self.row_offsets[row] + r as usize;
            self.class_counts[slot] -= 1;
            if self.class_counts[slot] == 0 {
                if self.free_counts[row] == 0 {
                    self.exhausted_rows -= 1;
                }
                self.free_counts[row] += 1;
                match self.free_counts[row] {
                    1 => self.critical_rows.push(row),
                    2 => self.drop_critical(row),
                    _ => {}
                }
            }
        }
    }

    fn drop_critical(&mut self, row: usize) {
        let at = self
            .critical_rows
            .iter()
            .position(|&r| r == row)
            .expect("row was tracked as critical");
        self.critical_rows.swap_remove(at);
    }

    /// Number of rows that would lose their last empty class if `v` were
    /// added: zero means the addition keeps the tuple admissible.
    pub fn violation_delta(&self, v: i64) -> u32 {
        let idx = self
            .ctx
            .index_of(v)
            .unwrap_or_else(|| panic!("value {v} is not in the candidate pool"));
        self.violation_delta_at(idx)
    }

    /// [`violation_delta`](Self::violation_delta) addressed by pool index,
    /// for scan loops that already track indices.
    pub fn violation_delta_at(&self, idx: usize) -> u32 {
        let residues = self.ctx.residue_row(idx);
        let mut delta = 0;
        for &row in &self.critical_rows {
            if self.class_counts[self.row_offsets[row] + residues[row] as usize] == 0 {
                delta += 1;
            }
        }
        delta
    }

    /// The unique row `violation_delta(v)` counts. Only meaningful when the
    /// delta is exactly 1; panics when no row qualifies.
    pub fn violation_row(&self, v: i64) -> usize {
        let idx = self.ctx.index_of(v).expect("value not in the candidate pool");
        self.violation_row_at(idx)
    }

    /// [`violation_row`](Self::violation_row) addressed by pool index.
    pub fn violation_row_at(&self, idx: usize) -> usize {
        let residues = self.ctx.residue_row(idx);
        for &row in &self.critical_rows {
            if self.class_counts[self.row_offsets[row] + residues[row] as usize] == 0 {
                return row;
            }
        }
        panic!("violation_row called on a value with no violating row")
    }

    /// Replace the held tuple by `target` through element-wise removes and
    /// adds, preserving all bookkeeping along the way.
    pub fn morph_into(&mut self, target: &[i64]) {
        let drop: Vec<i64> = self
            .values
            .iter()
            .copied()
            .filter(|v| target.binary_search(v).is_err())
            .collect();
        for v in drop {
            self.remove(v);
        }
        let take: Vec<i64> = target
            .iter()
            .copied()
            .filter(|&v| !self.contains(v))
            .collect();
        for v in take {
            self.add(v);
        }
    }
}

/// Span of a non-empty sorted tuple. Panics on empty input.
pub fn diameter_of(values: &[i64]) -> i64 {
    assert!(!values.is_empty(), "diameter of an empty tuple is undefined");
    values[values.len() - 1] - values[0]
}

/// Size of the symmetric difference of two sorted duplicate-free tuples.
pub fn symmetric_distance(a: &[i64], b: &[i64]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{build_context, custom_context};

    /// Context with the full interval pool and all four primes active, as in
    /// the worked 7-tuple example.
    fn plain7() -> ProblemContext {
        custom_context(7, (0..=30).collect(), vec![2, 3, 5, 7]).unwrap()
    }

    const H7: [i64; 7] = [0, 2, 8, 12, 14, 18, 30];

    #[test]
    fn empty_state_counts() {
        let ctx = custom_context(2, (0..=10).collect(), vec![2, 3]).unwrap();
        let s = TupleState::new(&ctx);
        assert_eq!(s.free_count(0), 2);
        assert_eq!(s.free_count(1), 3);
        assert_eq!(s.class_row(0), &[0, 0]);
        assert_eq!(s.class_row(1), &[0, 0, 0]);
        assert!(s.is_admissible());
        assert_eq!(s.violation_delta(4), 0);
    }

    #[test]
    fn single_add_counts() {
        let ctx = custom_context(2, (0..=10).collect(), vec![2, 3]).unwrap();
        let mut s = TupleState::new(&ctx);
        s.add(0);
        assert_eq!(s.class_row(0), &[1, 0]);
        assert_eq!(s.class_row(1), &[1, 0, 0]);
        assert_eq!(s.free_count(0), 1);
        assert_eq!(s.free_count(1), 2);
    }

    #[test]
    fn worked_tuple_occupancy() {
        let ctx = plain7();
        let s = TupleState::from_values(&ctx, &H7);
        assert_eq!(s.class_row(0), &[7, 0]);
        assert_eq!(s.class_row(1), &[4, 0, 3]);
        assert_eq!(s.class_row(2), &[2, 0, 2, 2, 1]);
        assert_eq!(s.class_row(3), &[2, 1, 2, 0, 1, 1, 0]);
        assert_eq!(
            (0..4).map(|r| s.free_count(r)).collect::<Vec<_>>(),
            vec![1, 1, 1, 2]
        );
        assert!(s.is_admissible());
        assert_eq!(s.diameter(), 30);
    }

    #[test]
    fn violation_probes_on_worked_tuple() {
        let ctx = plain7();
        let s = TupleState::from_values(&ctx, &H7);
        // 1 hits the single free class of the rows for 2, 3 and 5 at once.
        assert_eq!(s.violation_delta(1), 3);
        // 3 is odd but harmless mod 3 (class 0) and mod 5 (class 3).
        assert_eq!(s.violation_delta(3), 1);
        assert_eq!(s.violation_row(3), 0);
        // 4 lands in the free class mod 3 only.
        assert_eq!(s.violation_delta(4), 1);
        assert_eq!(s.violation_row(4), 1);
        // 6 lands in the free class mod 5 only.
        assert_eq!(s.violation_delta(6), 1);
        assert_eq!(s.violation_row(6), 2);
        // 24 is 0 mod 2/3, 4 mod 5, 3 mod 7: only the row of 7 has class 3
        // free, and that row has two free classes, so no violation.
        assert_eq!(s.violation_delta(24), 0);
    }

    #[test]
    #[should_panic(expected = "no violating row")]
    fn violation_row_requires_a_violation() {
        let ctx = plain7();
        let s = TupleState::from_values(&ctx, &H7);
        s.violation_row(24);
    }

    #[test]
    fn delta_counts_rows_exhausted_by_add() {
        let ctx = plain7();
        let mut s = TupleState::from_values(&ctx, &H7);
        let delta = s.violation_delta(1);
        s.add(1);
        assert!(!s.is_admissible());
        assert_eq!(s.exhausted_rows, delta);
        s.remove(1);
        assert!(s.is_admissible());
    }

    #[test]
    fn add_remove_is_identity() {
        let ctx = plain7();
        let s0 = TupleState::from_values(&ctx, &H7);
        let mut s = s0.clone();
        s.add(24);
        s.remove(24);
        assert_eq!(s.values(), s0.values());
        assert_eq!(s.class_counts, s0.class_counts);
        assert_eq!(s.free_counts, s0.free_counts);
        assert_eq!(s.exhausted_rows, s0.exhausted_rows);
    }

    #[test]
    fn removal_keeps_admissibility() {
        let ctx = plain7();
        let mut s = TupleState::from_values(&ctx, &H7);
        s.remove(30);
        assert!(s.is_admissible());
        assert_eq!(s.diameter(), 18);
        s.remove(0);
        s.remove(2);
        s.remove(8);
        s.remove(12);
        s.remove(14);
        s.remove(18);
        assert!(s.is_empty());
        assert!(s.is_admissible());
    }

    #[test]
    #[should_panic(expected = "not in the candidate pool")]
    fn add_requires_pool_membership() {
        let ctx = build_context(7, 30).unwrap();
        let mut s = TupleState::new(&ctx);
        s.add(1); // sieved out of the pool
    }

    #[test]
    #[should_panic(expected = "empty tuple")]
    fn empty_diameter_is_an_error() {
        let ctx = plain7();
        TupleState::new(&ctx).diameter();
    }

    #[test]
    fn diameter_basics() {
        assert_eq!(diameter_of(&[5]), 0);
        assert_eq!(diameter_of(&[0, 2]), 2);
        assert_eq!(diameter_of(&H7), 30);
    }

    #[test]
    fn symmetric_distance_basics() {
        assert_eq!(symmetric_distance(&H7, &H7), 0);
        assert_eq!(symmetric_distance(&[0, 2, 6], &[0, 2, 8]), 2);
        assert_eq!(symmetric_distance(&[0, 2], &[4, 6, 8]), 5);
        assert_eq!(symmetric_distance(&[], &[]), 0);
    }

    #[test]
    fn morph_reaches_target_exactly() {
        let ctx = plain7();
        let mut s = TupleState::from_values(&ctx, &H7);
        let target = [0, 2, 6, 8, 12, 18, 20];
        s.morph_into(&target);
        assert_eq!(s.values(), &target);
        let fresh = TupleState::from_values(&ctx, &target);
        assert_eq!(s.class_counts, fresh.class_counts);
        assert_eq!(s.free_counts, fresh.free_counts);
    }

    /// Slow recount straight from the definitions, used to cross-check the
    /// incremental bookkeeping.
    fn recount(ctx: &ProblemContext, values: &[i64]) -> (Vec<Vec<u32>>, Vec<u32>) {
        let mut rows = Vec::new();
        let mut free = Vec::new();
        for &p in ctx.active_primes() {
            let mut row = vec![0u32; p as usize];
            for &v in values {
                row[(v % p) as usize] += 1;
            }
            free.push(row.iter().filter(|c| **c == 0).count() as u32);
            rows.push(row);
        }
        (rows, free)
    }

    #[test]
    fn random_walk_matches_recount() {
        use rand::prelude::*;
        let ctx = build_context(20, crate::context::default_search_bound(20)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut s = TupleState::new(&ctx);
        for _ in 0..400 {
            let v = ctx.candidates()[rng.random_range(0..ctx.candidates().len())];
            if s.contains(v) {
                s.remove(v);
            } else {
                s.add(v);
            }
            let (rows, free) = recount(&ctx, s.values());
            for r in 0..ctx.rows() {
                assert_eq!(s.class_row(r), &rows[r][..]);
            }
            assert_eq!(s.free_counts, free);
            // Row sums always equal the tuple size.
            for r in 0..ctx.rows() {
                let sum: u32 = s.class_row(r).iter().sum();
                assert_eq!(sum as usize, s.len());
            }
            assert_eq!(s.is_admissible(), free.iter().all(|&f| f > 0));
            // The critical list is exactly the rows with one empty class.
            let mut tracked = s.critical_rows.clone();
            tracked.sort_unstable();
            let expect: Vec<usize> =
                (0..ctx.rows()).filter(|&r| free[r] == 1).collect();
            assert_eq!(tracked, expect);
        }
    }

    #[test]
    fn offset_preserves_shape() {
        // The same gap pattern shifted by a constant keeps all counts, free
        // classes and the diameter, up to a rotation of class labels.
        let base: Vec<i64> = vec![0, 2, 6, 8, 12];
        for c in [1i64, 5, 12] {
            let shifted: Vec<i64> = base.iter().map(|v| v + c).collect();
            let ctx_a = custom_context(5, (0..=12).collect(), vec![2, 3, 5]).unwrap();
            let ctx_b = custom_context(5, (0..=12 + c).collect(), vec![2, 3, 5]).unwrap();
            let sa = TupleState::from_values(&ctx_a, &base);
            let sb = TupleState::from_values(&ctx_b, &shifted);
            assert_eq!(sa.diameter(), sb.diameter());
            for r in 0..3 {
                assert_eq!(sa.free_count(r), sb.free_count(r));
                let mut ra = sa.class_row(r).to_vec();
                let mut rb = sb.class_row(r).to_vec();
                ra.sort_unstable();
                rb.sort_unstable();
                assert_eq!(ra, rb);
            }
            assert_eq!(sa.is_admissible(), sb.is_admissible());
        }
    }
}
