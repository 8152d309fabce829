//! Local-search operators: endpoint moves, repair, shifting, and interior
//! insert/exchange moves.
//!
//! All operators work in place on a [`TupleState`] and only ever produce
//! admissible states. The shift operator may return the tuple it was given;
//! the insert operator reports which action fired so callers (and tests) can
//! track cardinality changes exactly.

use crate::state::TupleState;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn reverse(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn random(rng: &mut impl Rng) -> Side {
        if rng.random_range(0..2u8) == 0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// Remove the endpoint on `side`. Panics on an empty tuple.
pub fn side_remove(state: &mut TupleState, side: Side) {
    assert!(!state.is_empty(), "cannot remove an endpoint from an empty tuple");
    let v = match side {
        Side::Left => state.first(),
        Side::Right => state.last(),
    };
    state.remove(v);
}

/// First pool value beyond the `side` endpoint whose addition keeps the tuple
/// admissible, or `None` when the scan runs off the pool.
pub fn side_add_candidate(state: &TupleState, side: Side) -> Option<i64> {
    let ctx = state.ctx();
    let anchor = match side {
        Side::Left => state.first(),
        Side::Right => state.last(),
    };
    let mut idx = ctx.index_of(anchor).expect("endpoint must be a pool member") as isize;
    let step: isize = match side {
        Side::Left => -1,
        Side::Right => 1,
    };
    loop {
        idx += step;
        if idx < 0 || idx as usize >= ctx.candidates().len() {
            return None;
        }
        if state.violation_delta_at(idx as usize) == 0 {
            return Some(ctx.candidates()[idx as usize]);
        }
    }
}

/// Extend the tuple outward on `side` with the nearest feasible pool value.
/// Leaves the tuple unchanged and returns `None` when the side is exhausted.
pub fn side_add(state: &mut TupleState, side: Side) -> Option<i64> {
    let v = side_add_candidate(state, side)?;
    state.add(v);
    Some(v)
}

/// Grow or shrink the tuple back to exactly `k` elements, always taking the
/// endpoint move that yields the smaller diameter (ties go left). Returns
/// false when both sides are exhausted before the tuple reaches size `k`.
pub fn repair(state: &mut TupleState, k: usize) -> bool {
    if state.is_empty() && k > 0 {
        return false;
    }
    // Once a side's scan fails it stays infeasible for the rest of the growth
    // phase: additions only tighten the feasibility of unseen values.
    let mut left_open = true;
    let mut right_open = true;
    while state.len() < k {
        let cl = if left_open { side_add_candidate(state, Side::Left) } else { None };
        let cr = if right_open { side_add_candidate(state, Side::Right) } else { None };
        left_open = cl.is_some();
        right_open = cr.is_some();
        match (cl, cr) {
            (None, None) => return false,
            (Some(a), None) => state.add(a),
            (None, Some(b)) => state.add(b),
            (Some(a), Some(b)) => {
                if state.last() - a <= b - state.first() {
                    state.add(a);
                } else {
                    state.add(b);
                }
            }
        }
    }
    while state.len() > k {
        let h = state.values();
        let n = h.len();
        let after_left = h[n - 1] - h[1];
        let after_right = h[n - 2] - h[0];
        if after_left <= after_right {
            side_remove(state, Side::Left);
        } else {
            side_remove(state, Side::Right);
        }
    }
    true
}

/// Slide the whole tuple up to `max_shifts` steps toward a random side and
/// keep the best intermediate, accepting a worsening of `delta` with
/// probability `0.5 / delta^beta`. The tuple is restored when no shift
/// succeeds or the result is rejected.
pub fn shift_search(state: &mut TupleState, rng: &mut impl Rng, max_shifts: u32, beta: f64) {
    let original = state.values().to_vec();
    let size = state.len();
    let d_orig = state.diameter();
    let side = Side::random(rng);
    let back = side.reverse();
    let mut best: Option<(i64, Vec<i64>)> = None;
    for _ in 0..max_shifts {
        side_remove(state, back);
        if side_add(state, side).is_none() {
            break;
        }
        debug_assert_eq!(state.len(), size);
        let d = state.diameter();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, state.values().to_vec()));
        }
    }
    match best {
        // The acceptance draw is only consumed for a strictly worse result.
        Some((d_new, tuple))
            if d_new <= d_orig
                || 0.5 / ((d_new - d_orig) as f64).powf(beta) > rng.random::<f64>() =>
        {
            state.morph_into(&tuple);
        }
        _ => state.morph_into(&original),
    }
}

/// Outcome of one [`insert_move`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertAction {
    /// Nothing fired; the tuple is unchanged.
    None,
    /// A single interior value was added (tuple grows by one).
    Inserted { value: i64 },
    /// All pending values of one row were swapped in for the thinnest
    /// occupied class of that row.
    Exchanged { row: usize, added: usize, removed: usize, level: u8 },
    /// An exchange broke another row and was rolled back; tuple unchanged.
    Reverted { row: usize },
}

/// The occupied class with the fewest members in `row` (ties to the lowest
/// class index), with its count.
pub fn min_occupied_class(state: &TupleState, row: usize) -> (usize, u32) {
    let mut best: Option<(usize, u32)> = None;
    for (class, &count) in state.class_row(row).iter().enumerate() {
        if count > 0 && best.is_none_or(|(_, c)| count < c) {
            best = Some((class, count));
        }
    }
    best.expect("row of a non-empty tuple has at least one occupied class")
}

/// Tuple members falling in `class` of `row`, in increasing order.
pub fn class_members(state: &TupleState, row: usize, class: usize) -> Vec<i64> {
    let p = state.ctx().active_primes()[row];
    state
        .values()
        .iter()
        .copied()
        .filter(|&v| v % p == class as i64)
        .collect()
}

/// Try to grow (or at `level` 2 reshape) the tuple using interior pool values.
///
/// The scan walks every pool value strictly inside the current span. A value
/// that violates nothing is inserted immediately and the call returns. Values
/// blocked by exactly one row queue up per row; afterwards `level >= 1`
/// swaps a queue strictly larger than its row's thinnest occupied class for
/// that class (rows in increasing order), and `level >= 2` additionally
/// allows equal-size swaps (rows in random order). Exchanges that break some
/// other row are rolled back. `strict_levels` suppresses the immediate
/// insert and the lower exchange phase, running only the behavior of the
/// requested level.
pub fn insert_move(
    state: &mut TupleState,
    rng: &mut impl Rng,
    level: u8,
    strict_levels: bool,
) -> InsertAction {
    if state.len() < 2 {
        return InsertAction::None;
    }
    let ctx = state.ctx();
    let lo = ctx.index_of(state.first()).expect("endpoint in pool");
    let hi = ctx.index_of(state.last()).expect("endpoint in pool");
    let mut queues: Vec<Vec<i64>> = vec![Vec::new(); ctx.rows()];
    let mut member = 0usize; // walks the tuple in step with the pool scan
    for idx in lo + 1..hi {
        let v = ctx.candidates()[idx];
        while member < state.len() && state.values()[member] < v {
            member += 1;
        }
        if member < state.len() && state.values()[member] == v {
            continue;
        }
        match state.violation_delta_at(idx) {
            0 => {
                if !(strict_levels && level >= 1) {
                    state.add(v);
                    return InsertAction::Inserted { value: v };
                }
            }
            1 => {
                queues[state.violation_row_at(idx)].push(v);
            }
            _ => {}
        }
    }
    if level >= 1 && !(strict_levels && level >= 2) {
        for row in 0..ctx.rows() {
            if queues[row].is_empty() {
                continue;
            }
            let (class, count) = min_occupied_class(state, row);
            if queues[row].len() > count as usize {
                return exchange(state, row, &queues[row], class, 1);
            }
        }
    }
    if level >= 2 {
        let mut order: Vec<usize> = (0..ctx.rows()).collect();
        shuffle(&mut order, rng);
        for row in order {
            if queues[row].is_empty() {
                continue;
            }
            let (class, count) = min_occupied_class(state, row);
            if count > 0 && queues[row].len() == count as usize {
                return exchange(state, row, &queues[row], class, 2);
            }
        }
    }
    InsertAction::None
}

/// Swap `incoming` for the members of (`row`, `class`), rolling back when the
/// combined addition breaks some other row.
fn exchange(
    state: &mut TupleState,
    row: usize,
    incoming: &[i64],
    class: usize,
    level: u8,
) -> InsertAction {
    let outgoing = class_members(state, row, class);
    for &v in &outgoing {
        state.remove(v);
    }
    for &v in incoming {
        state.add(v);
    }
    if state.is_admissible() {
        InsertAction::Exchanged { row, added: incoming.len(), removed: outgoing.len(), level }
    } else {
        for &v in incoming {
            state.remove(v);
        }
        for &v in &outgoing {
            state.add(v);
        }
        InsertAction::Reverted { row }
    }
}

/// Fisher-Yates driven by the solver's single generator.
fn shuffle(items: &mut [usize], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// What a [`local_search`] call did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchOutcome {
    /// The insert phase grew the tuple back to full size (which guarantees a
    /// strictly smaller diameter than at entry).
    pub insert_refilled: bool,
    /// Repair could not restore full size; the tuple was reset to its entry
    /// value.
    pub stalled: bool,
    /// Exchanges rolled back by the admissibility guard during this call.
    pub reverted_exchanges: u32,
}

/// Shrink-and-refill local search: drop `shrink` random endpoints, run up to
/// `max_inserts` insert moves (stopping once full size is regained), then
/// repair back to the entry size. On repair failure the entry tuple is
/// restored unchanged.
pub fn local_search(
    state: &mut TupleState,
    rng: &mut impl Rng,
    shrink: u32,
    max_inserts: u32,
    level: u8,
    strict_levels: bool,
) -> LocalSearchOutcome {
    let entry = state.values().to_vec();
    let full = entry.len();
    let mut outcome =
        LocalSearchOutcome { insert_refilled: false, stalled: false, reverted_exchanges: 0 };
    for _ in 0..shrink {
        if state.is_empty() {
            break;
        }
        side_remove(state, Side::random(rng));
    }
    for _ in 0..max_inserts {
        match insert_move(state, rng, level, strict_levels) {
            InsertAction::None => break,
            InsertAction::Reverted { .. } => outcome.reverted_exchanges += 1,
            _ => {}
        }
        if state.len() >= full {
            outcome.insert_refilled = true;
            break;
        }
    }
    if !repair(state, full) {
        state.morph_into(&entry);
        outcome.stalled = true;
        outcome.insert_refilled = false;
    }
    outcome
}
