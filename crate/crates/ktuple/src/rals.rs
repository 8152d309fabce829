//! Adaptive search over start values: a solution database keyed by the first
//! tuple element, region-based selection, and the shift/insert improvement
//! loop.
//!
//! The search space [0, U] splits into equal-width regions. Each region holds
//! greedy-seeded tuples; every iteration picks a promising start (tournament
//! over per-region champions, with an exploration probability), perturbs it
//! by shifting, contracts it by local search, and stores whatever improved.
//! The answer is the narrowest tuple the database ever held.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::baselines::greedy_reduce;
use crate::context::{build_context, default_search_bound, ContextError, ProblemContext};
use crate::operators::{local_search, shift_search};
use crate::state::TupleState;

/// Tuning knobs of [`rals_solve`]. Start from [`RalsConfig::base`] or
/// [`RalsConfig::best`] and override fields as needed.
#[derive(Debug, Clone, PartialEq)]
pub struct RalsConfig {
    /// Improvement iterations T. Zero returns the best greedy seed.
    pub iterations: u64,
    /// Number of equal-width start regions.
    pub regions: u32,
    /// Probability of picking a uniform random region champion instead of
    /// running a tournament.
    pub gamma: f64,
    /// Tournament draws (with replacement) per selection.
    pub tournament: u32,
    /// Shift budget per shift-search call.
    pub max_shifts: u32,
    /// Worsening-acceptance exponent for shift search.
    pub beta: f64,
    /// Insert-move level for both local-search calls.
    pub level: u8,
    /// Run each insert level in isolation instead of cumulatively.
    pub strict_levels: bool,
    /// Reinterpret the two local-search stages as insert levels 1 and 2
    /// instead of removal counts, for experiments.
    pub literal_levels: bool,
    /// Endpoints removed by the first local search.
    pub shrink_first: u32,
    /// Insert budget of the first local search.
    pub inserts_first: u32,
    /// Endpoints removed by the second local search.
    pub shrink_second: u32,
    /// Insert budget of the second local search; zero skips the stage.
    pub inserts_second: u32,
    /// Seed of the single generator driving all random choices.
    pub seed: u64,
    /// Search range override; defaults to [`default_search_bound`].
    pub bound: Option<i64>,
}

impl RalsConfig {
    /// Conservative defaults: low exploration, single-stage local search.
    pub fn base() -> Self {
        RalsConfig {
            iterations: 1000,
            regions: 20,
            gamma: 0.01,
            tournament: 4,
            max_shifts: 10,
            beta: 1.0,
            level: 2,
            strict_levels: false,
            literal_levels: false,
            shrink_first: 1,
            inserts_first: 500,
            shrink_second: 2,
            inserts_second: 0,
            seed: 1,
            bound: None,
        }
    }

    /// Tuned defaults: more exploration and a second, stronger perturbation
    /// stage. The best-performing preset.
    pub fn best() -> Self {
        RalsConfig { gamma: 0.1, inserts_second: 10, ..RalsConfig::base() }
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Error)]
pub enum RalsError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("no admissible k-window fits the search range; raise the bound")]
    EmptyDatabase,
}

/// One stored solution: the best tuple seen for its start value.
#[derive(Debug, Clone)]
pub struct DbEntry {
    pub diameter: i64,
    pub tuple: Vec<i64>,
}

/// Best-per-start solution store with region bookkeeping.
///
/// Keys are start values (first tuple elements); an entry is replaced only by
/// a strictly narrower tuple with the same start. The region of an entry is
/// derived from its start value.
pub struct SolutionDatabase {
    entries: BTreeMap<i64, DbEntry>,
    regions: u32,
    span: i64,
    best: Option<(i64, i64)>,
}

impl SolutionDatabase {
    /// Empty database over starts in [0, bound] split into `regions` parts.
    pub fn new(regions: u32, bound: i64) -> Self {
        assert!(regions >= 1, "at least one region required");
        SolutionDatabase { entries: BTreeMap::new(), regions, span: bound + 1, best: None }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn region_of(&self, start: i64) -> u32 {
        (start * self.regions as i64 / self.span) as u32
    }

    pub fn entry(&self, start: i64) -> Option<&DbEntry> {
        self.entries.get(&start)
    }

    /// Store `tuple` under its start value, keeping only the narrower of old
    /// and new. Returns true when the database changed.
    pub fn save(&mut self, tuple: &[i64], diameter: i64) -> bool {
        debug_assert_eq!(
            crate::verify::full_verify(tuple, tuple.len()),
            Ok(()),
            "database accepts only admissible tuples"
        );
        let start = tuple[0];
        let known = self.entries.get(&start);
        if known.is_some_and(|e| e.diameter <= diameter) {
            return false;
        }
        self.entries.insert(start, DbEntry { diameter, tuple: tuple.to_vec() });
        if self.best.is_none_or(|b| (diameter, start) < b) {
            self.best = Some((diameter, start));
        }
        true
    }

    /// The narrowest stored tuple (earliest start on ties).
    pub fn best(&self) -> Option<&DbEntry> {
        self.best.map(|(_, start)| &self.entries[&start])
    }

    /// All (start, best diameter) pairs in start order: the explored part of
    /// the quality landscape over start values.
    pub fn landscape(&self) -> Vec<(i64, i64)> {
        self.entries.iter().map(|(&v, e)| (v, e.diameter)).collect()
    }

    /// Champion (diameter, start) of each nonempty region, in region order.
    fn region_champions(&self) -> Vec<(i64, i64)> {
        let mut champ: Vec<Option<(i64, i64)>> = vec![None; self.regions as usize];
        for (&v, e) in &self.entries {
            let r = self.region_of(v) as usize;
            if champ[r].is_none_or(|c| (e.diameter, v) < c) {
                champ[r] = Some((e.diameter, v));
            }
        }
        champ.into_iter().flatten().collect()
    }

    /// Pick a start value to work on: with probability `gamma` a uniform
    /// random region champion, otherwise the best of `tournament` champion
    /// draws with replacement.
    pub fn select(&self, rng: &mut impl Rng, gamma: f64, tournament: u32) -> i64 {
        let champions = self.region_champions();
        assert!(!champions.is_empty(), "cannot select from an empty database");
        let chosen = if rng.random::<f64>() < gamma {
            champions[rng.random_range(0..champions.len())]
        } else {
            (0..tournament.max(1))
                .map(|_| champions[rng.random_range(0..champions.len())])
                .min()
                .unwrap()
        };
        chosen.1
    }
}

/// Greedy class removal over a slice of the candidate pool, then the
/// narrowest k-window starting inside [start_lo, start_hi).
fn greedy_window(
    ctx: &ProblemContext,
    from: usize,
    to: usize,
    start_lo: i64,
    start_hi: i64,
) -> Option<(i64, Vec<i64>)> {
    let mut alive = ctx.candidates()[from..to].to_vec();
    greedy_reduce(&mut alive, ctx.active_primes(), 0.0);
    let k = ctx.k();
    if alive.len() < k {
        return None;
    }
    let mut best: Option<(i64, usize)> = None;
    for a in 0..=alive.len() - k {
        let h1 = alive[a];
        if h1 < start_lo || h1 >= start_hi {
            continue;
        }
        let d = alive[a + k - 1] - h1;
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, a));
        }
    }
    best.map(|(d, a)| (d, alive[a..a + k].to_vec()))
}

/// Seed the database: one greedy tuple per region, each anchored so its
/// start value lands inside the region. A region whose window cannot fit in
/// the search range stays empty.
pub fn initial_database(ctx: &ProblemContext, regions: u32) -> SolutionDatabase {
    let mut db = SolutionDatabase::new(regions, ctx.bound());
    let diameter_estimate = ctx.k() as f64 * (ctx.k() as f64).ln() + ctx.k() as f64;
    for r in 0..regions as i64 {
        let lo = r * db.span / regions as i64;
        let hi = (r + 1) * db.span / regions as i64;
        let mut margin = 1.3 * diameter_estimate + (hi - lo) as f64;
        for _ in 0..3 {
            let from = ctx.candidates().partition_point(|&v| v < lo);
            let reach = ctx.bound().min(hi + margin as i64);
            let to = ctx.candidates().partition_point(|&v| v <= reach);
            if let Some((d, tuple)) = greedy_window(ctx, from, to, lo, hi) {
                db.save(&tuple, d);
                break;
            }
            margin *= 1.5;
        }
    }
    db
}

/// Which operator a trace row records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOp {
    Shift,
    FirstSearch,
    SecondSearch,
}

impl TraceOp {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceOp::Shift => "shift",
            TraceOp::FirstSearch => "ls1",
            TraceOp::SecondSearch => "ls2",
        }
    }
}

/// One operator application in the run log.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub iteration: u64,
    /// Best diameter stored anywhere after this step.
    pub best_diameter: i64,
    /// Start value selected for this iteration.
    pub selected_start: i64,
    pub op: TraceOp,
    /// Whether the step's result improved the database.
    pub accepted: bool,
}

/// Outcome of a search run.
#[derive(Debug, Clone)]
pub struct RalsReport {
    /// Best tuple found, shifted to start at 0.
    pub tuple: Vec<i64>,
    pub diameter: i64,
    /// Start value the best tuple was found at, before normalization.
    pub start: i64,
    pub iterations: u64,
    pub db_size: usize,
    pub seconds: f64,
    /// Exchanges rolled back by the insert operator's admissibility guard.
    pub reverted_exchanges: u64,
    pub trace: Vec<TraceRecord>,
    /// Final (start, diameter) landscape snapshot.
    pub landscape: Vec<(i64, i64)>,
}

/// Search for a narrow admissible k-tuple with a default-sized context.
pub fn rals_solve(k: usize, config: &RalsConfig) -> Result<RalsReport, RalsError> {
    let bound = config.bound.unwrap_or_else(|| default_search_bound(k));
    let ctx = build_context(k, bound)?;
    rals_solve_in_context(&ctx, config)
}

/// Search inside an already-built context (shared across seeds or runs).
pub fn rals_solve_in_context(
    ctx: &ProblemContext,
    config: &RalsConfig,
) -> Result<RalsReport, RalsError> {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut db = initial_database(ctx, config.regions.max(1));
    if db.is_empty() {
        return Err(RalsError::EmptyDatabase);
    }
    let (level1, level2) = if config.literal_levels { (1, 2) } else { (config.level, config.level) };
    let mut trace = Vec::new();
    let mut reverted = 0u64;
    for iteration in 0..config.iterations {
        let selected = db.select(&mut rng, config.gamma, config.tournament);
        let mut state = TupleState::from_values(ctx, &db.entry(selected).unwrap().tuple);

        shift_search(&mut state, &mut rng, config.max_shifts, config.beta);
        let accepted = db.save(state.values(), state.diameter());
        push_trace(&mut trace, &db, iteration, selected, TraceOp::Shift, accepted);

        let before = state.diameter();
        let out = local_search(
            &mut state,
            &mut rng,
            config.shrink_first,
            config.inserts_first,
            level1,
            config.strict_levels,
        );
        reverted += out.reverted_exchanges as u64;
        debug_assert!(!out.insert_refilled || state.diameter() < before);
        let accepted = db.save(state.values(), state.diameter());
        push_trace(&mut trace, &db, iteration, selected, TraceOp::FirstSearch, accepted);

        if config.inserts_second > 0 {
            let before = state.diameter();
            let out = local_search(
                &mut state,
                &mut rng,
                config.shrink_second,
                config.inserts_second,
                level2,
                config.strict_levels,
            );
            reverted += out.reverted_exchanges as u64;
            debug_assert!(!out.insert_refilled || state.diameter() < before);
            let accepted = db.save(state.values(), state.diameter());
            push_trace(&mut trace, &db, iteration, selected, TraceOp::SecondSearch, accepted);
        }
    }
    let best = db.best().unwrap();
    let start = best.tuple[0];
    Ok(RalsReport {
        tuple: best.tuple.iter().map(|v| v - start).collect(),
        diameter: best.diameter,
        start,
        iterations: config.iterations,
        db_size: db.len(),
        seconds: clock.elapsed().as_secs_f64(),
        reverted_exchanges: reverted,
        trace,
        landscape: db.landscape(),
    })
}

fn push_trace(
    trace: &mut Vec<TraceRecord>,
    db: &SolutionDatabase,
    iteration: u64,
    selected_start: i64,
    op: TraceOp,
    accepted: bool,
) {
    trace.push(TraceRecord {
        iteration,
        best_diameter: db.best().unwrap().diameter,
        selected_start,
        op,
        accepted,
    });
}
