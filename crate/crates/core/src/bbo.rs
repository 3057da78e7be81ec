//! Biogeography-based optimization over row and column permutations.
//!
//! Two populations of islands are kept, one per mode. Each island holds a
//! permutation of its mode and is scored against the working permutation
//! of the other mode. Features (permutation entries) migrate from high-HSI
//! (low-cost) islands into low-HSI islands at rates taken from a
//! [`MigrationSchedule`], and a migration is kept only when it lowers the
//! island's cost.
//!
//! Optimizing one mode at a time can stall where no row ordering helps the
//! current columns and vice versa. When the working arrangement stops
//! improving for `restart_window` generations, both populations are
//! re-seeded around a fresh random arrangement; the best arrangement seen
//! so far is kept throughout.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{bandwidth_cost, Arrangement, DataMatrix, Mode, ModeProfile, Permutation};
use crate::migration::{schedule_for, LvParams, MigrationSchedule};
use crate::rng;

/// One habitat: a candidate permutation for a single mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Island {
    pub perm: Permutation,
    /// Objective with the other mode held at its current best; `None` after
    /// an operator changed `perm`.
    pub cost: Option<f64>,
}

impl Island {
    pub fn new(perm: Permutation) -> Self {
        Self { perm, cost: None }
    }
}

/// A single row or column interchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interchange {
    pub mode: Mode,
    pub source: usize,
    pub dest: usize,
}

impl Interchange {
    pub fn new(mode: Mode, source: usize, dest: usize) -> Self {
        Self { mode, source, dest }
    }
}

/// Island encoding as an ordered list of interchanges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterchangeList(pub Vec<Interchange>);

impl InterchangeList {
    /// Shortest interchange list that turns the identity into `arr`.
    pub fn from_arrangement(arr: &Arrangement) -> Self {
        let mut moves = Vec::new();
        for mode in [Mode::Rows, Mode::Cols] {
            let target = arr.perm(mode).as_slice();
            let mut cur: Vec<usize> = (0..target.len()).collect();
            let mut pos: Vec<usize> = (0..target.len()).collect();
            for p in 0..target.len() {
                if cur[p] != target[p] {
                    let q = pos[target[p]];
                    moves.push(Interchange::new(mode, p, q));
                    pos[cur[p]] = q;
                    pos[cur[q]] = p;
                    cur.swap(p, q);
                }
            }
        }
        Self(moves)
    }
}

/// Apply `list` in order, starting from the identity arrangement of an
/// `m x n` matrix.
pub fn interchanges_to_arrangement(
    list: &InterchangeList,
    m: usize,
    n: usize,
) -> Result<Arrangement> {
    let mut arr = Arrangement::identity(m, n);
    for (k, mv) in list.0.iter().enumerate() {
        let size = match mv.mode {
            Mode::Rows => m,
            Mode::Cols => n,
        };
        if mv.source >= size || mv.dest >= size || mv.source == mv.dest {
            return Err(Error::Index(format!(
                "interchange {k} ({}, {}, {}) invalid for {size} {}",
                mv.mode, mv.source, mv.dest, mv.mode
            )));
        }
        arr.perm_mut(mv.mode).swap(mv.source, mv.dest);
    }
    Ok(arr)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BboConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub mutation_prob: f64,
    pub elite_count: usize,
    /// Stop after this many generations without improvement; 0 disables.
    pub stagnation_window: usize,
    /// Re-seed the search after this many generations in which the working
    /// arrangement did not improve; 0 disables.
    pub restart_window: usize,
    pub seed: u64,
    pub lv: LvParams,
}

impl Default for BboConfig {
    fn default() -> Self {
        Self {
            pop_size: 30,
            generations: 1000,
            mutation_prob: 0.05,
            elite_count: 2,
            stagnation_window: 200,
            restart_window: 3,
            seed: 0,
            lv: LvParams::default(),
        }
    }
}

impl BboConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::Config(format!(
                "pop_size must be at least 2, got {}",
                self.pop_size
            )));
        }
        if self.generations == 0 {
            return Err(Error::Config("generations must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::Config(format!(
                "mutation_prob must lie in [0, 1], got {}",
                self.mutation_prob
            )));
        }
        if self.elite_count == 0 || self.elite_count >= self.pop_size {
            return Err(Error::Config(format!(
                "elite_count must be in 1..{}, got {}",
                self.pop_size, self.elite_count
            )));
        }
        self.lv.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best: Arrangement,
    pub best_cost: f64,
    pub initial_cost: f64,
    pub cost_trace: Vec<f64>,
    pub generations_run: usize,
    /// Kept out of the JSON so that identical runs serialize identically.
    #[serde(skip)]
    pub wall_time: f64,
    pub seed: u64,
    pub config: BboConfig,
}

/// One identity permutation followed by `pop_size - 1` uniform random ones.
pub fn initialize_population<R: Rng + ?Sized>(
    k: usize,
    pop_size: usize,
    rng: &mut R,
) -> Vec<Island> {
    let mut pop = Vec::with_capacity(pop_size);
    pop.push(Island::new(Permutation::identity(k)));
    for _ in 1..pop_size {
        pop.push(Island::new(Permutation::random(k, rng)));
    }
    pop
}

/// Fitness ranks: rank 0 is the highest cost (lowest HSI), ties keep island
/// order. Returns the rank of every island.
pub fn rank_by_hsi(costs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[b].total_cmp(&costs[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; costs.len()];
    for (rank, &island) in order.iter().enumerate() {
        ranks[island] = rank;
    }
    ranks
}

/// Import `donor[p]` into position `p` of `target` by swapping it with the
/// position currently holding that value. Returns the swapped position.
fn migrate_in_place(target: &mut Permutation, p: usize, value: usize) -> Option<usize> {
    if target[p] == value {
        return None;
    }
    let q = target
        .as_slice()
        .iter()
        .position(|&v| v == value)
        .expect("target is a permutation");
    target.swap(p, q);
    Some(q)
}

pub fn migrate_position(target: &Island, p: usize, donor: &Island) -> Island {
    assert_eq!(target.perm.len(), donor.perm.len(), "island sizes differ");
    let mut out = target.clone();
    if migrate_in_place(&mut out.perm, p, donor.perm[p]).is_some() {
        out.cost = None;
    }
    out
}

fn random_transposition<R: Rng + ?Sized>(k: usize, rng: &mut R) -> (usize, usize) {
    let p = rng.gen_range(0..k);
    let mut q = rng.gen_range(0..k - 1);
    if q >= p {
        q += 1;
    }
    (p, q)
}

/// With probability `prob`, swap two random positions.
pub fn mutate<R: Rng + ?Sized>(island: &Island, prob: f64, rng: &mut R) -> Island {
    let mut out = island.clone();
    let k = out.perm.len();
    if rng.gen::<f64>() < prob && k >= 2 {
        let (p, q) = random_transposition(k, rng);
        out.perm.swap(p, q);
        out.cost = None;
    }
    out
}

/// Roulette over `weights`, excluding `skip`. Falls back to a uniform draw
/// when every eligible weight is zero.
fn roulette<R: Rng + ?Sized>(weights: &[f64], skip: usize, rng: &mut R) -> usize {
    let total: f64 = weights
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(_, w)| w)
        .sum();
    if total > 0.0 {
        let mut u = rng.gen::<f64>() * total;
        let mut last = None;
        for (j, &w) in weights.iter().enumerate() {
            if j == skip || w <= 0.0 {
                continue;
            }
            if u < w {
                return j;
            }
            u -= w;
            last = Some(j);
        }
        if let Some(j) = last {
            return j;
        }
    }
    let j = rng.gen_range(0..weights.len() - 1);
    if j >= skip {
        j + 1
    } else {
        j
    }
}

fn mode_index(mode: Mode) -> u64 {
    match mode {
        Mode::Rows => 0,
        Mode::Cols => 1,
    }
}

struct Population {
    mode: Mode,
    islands: Vec<Island>,
    migration_rngs: Vec<ChaCha8Rng>,
    mutation_rngs: Vec<ChaCha8Rng>,
}

impl Population {
    fn new(mode: Mode, k: usize, config: &BboConfig) -> Self {
        let mode_index = mode_index(mode);
        let islands = Self::seed_islands(mode, k, config, 0);
        let stream = |name: &str| {
            (0..config.pop_size as u64)
                .map(|i| rng::substream(config.seed, name, (mode_index << 32) | i))
                .collect::<Vec<_>>()
        };
        Self {
            mode,
            islands,
            migration_rngs: stream(rng::MIGRATION),
            mutation_rngs: stream(rng::MUTATION),
        }
    }

    fn seed_islands(mode: Mode, k: usize, config: &BboConfig, epoch: u64) -> Vec<Island> {
        let mut init = rng::substream(config.seed, rng::INIT, (epoch << 1) | mode_index(mode));
        initialize_population(k, config.pop_size, &mut init)
    }

    fn refresh(&mut self, profile: &ModeProfile) {
        self.islands
            .par_iter_mut()
            .for_each(|isl| isl.cost = Some(profile.cost(isl.perm.as_slice())));
    }

    fn costs(&self) -> Vec<f64> {
        self.islands
            .iter()
            .map(|isl| isl.cost.expect("costs refreshed before ranking"))
            .collect()
    }
}

/// Search state of a run; exposed so tests can observe generation
/// boundaries.
///
/// Islands are scored against the *working* arrangement. It normally
/// coincides with the best arrangement found so far, and departs from it
/// only after a restart, when the search is re-seeded from a fresh random
/// arrangement to leave a point where neither mode alone can improve.
pub struct Solver<'a> {
    matrix: &'a DataMatrix,
    config: BboConfig,
    schedule: MigrationSchedule,
    rows: Population,
    cols: Population,
    working: Arrangement,
    working_cost: f64,
    best: Arrangement,
    best_cost: f64,
    idle: usize,
    epoch: u64,
    restart_rng: ChaCha8Rng,
}

impl<'a> Solver<'a> {
    pub fn new(matrix: &'a DataMatrix, config: &BboConfig) -> Result<Self> {
        config.validate()?;
        let schedule = schedule_for(&config.lv, config.pop_size)?;
        let best = Arrangement::identity(matrix.rows(), matrix.cols());
        let best_cost = bandwidth_cost(matrix, &best)?;
        Ok(Self {
            matrix,
            config: config.clone(),
            schedule,
            rows: Population::new(Mode::Rows, matrix.rows(), config),
            cols: Population::new(Mode::Cols, matrix.cols(), config),
            working: best.clone(),
            working_cost: best_cost,
            best,
            best_cost,
            idle: 0,
            epoch: 0,
            restart_rng: rng::substream(config.seed, rng::RESTART, 0),
        })
    }

    pub fn best(&self) -> &Arrangement {
        &self.best
    }

    pub fn best_cost(&self) -> f64 {
        self.best_cost
    }

    /// The arrangement islands are currently scored against.
    pub fn working(&self) -> &Arrangement {
        &self.working
    }

    /// Number of restarts so far.
    pub fn restarts(&self) -> u64 {
        self.epoch
    }

    pub fn islands(&self, mode: Mode) -> &[Island] {
        match mode {
            Mode::Rows => &self.rows.islands,
            Mode::Cols => &self.cols.islands,
        }
    }

    /// Run one generation (rows, then columns). Returns whether the global
    /// best improved.
    pub fn generation(&mut self) -> bool {
        let before = (self.best_cost, self.working_cost);
        self.step(Mode::Rows);
        self.step(Mode::Cols);
        if self.working_cost < before.1 {
            self.idle = 0;
        } else {
            self.idle += 1;
        }
        if self.config.restart_window > 0 && self.idle >= self.config.restart_window {
            self.restart();
        }
        // Column moves (or a restart) change the reference for row islands.
        let profile = ModeProfile::new(self.matrix, Mode::Rows, &self.working.cols);
        self.rows.refresh(&profile);
        self.best_cost < before.0
    }

    fn restart(&mut self) {
        self.epoch += 1;
        self.idle = 0;
        let (m, n) = (self.matrix.rows(), self.matrix.cols());
        self.working = Arrangement::new(
            Permutation::random(m, &mut self.restart_rng),
            Permutation::random(n, &mut self.restart_rng),
        );
        self.working_cost = bandwidth_cost(self.matrix, &self.working).expect("dimensions fixed");
        self.rows.islands = Population::seed_islands(Mode::Rows, m, &self.config, self.epoch);
        self.cols.islands = Population::seed_islands(Mode::Cols, n, &self.config, self.epoch);
        let profile = ModeProfile::new(self.matrix, Mode::Cols, &self.working.rows);
        self.cols.refresh(&profile);
    }

    fn step(&mut self, mode: Mode) {
        let profile = ModeProfile::new(self.matrix, mode, self.working.perm(mode.other()));
        let pop = match mode {
            Mode::Rows => &mut self.rows,
            Mode::Cols => &mut self.cols,
        };
        debug_assert_eq!(pop.mode, mode);
        pop.refresh(&profile);

        let size = pop.islands.len();
        let ranks = rank_by_hsi(&pop.costs());
        let weights: Vec<f64> = ranks.iter().map(|&r| self.schedule.emigration[r]).collect();
        let donors: Vec<Permutation> = pop.islands.iter().map(|isl| isl.perm.clone()).collect();
        let elite_from = size - self.config.elite_count;
        let immigration = &self.schedule.immigration;
        let mutation_prob = self.config.mutation_prob;

        pop.islands
            .par_iter_mut()
            .zip(pop.migration_rngs.par_iter_mut())
            .zip(pop.mutation_rngs.par_iter_mut())
            .enumerate()
            .filter(|(i, _)| ranks[*i] < elite_from)
            .for_each(|(i, ((island, mig_rng), mut_rng))| {
                let rate = immigration[ranks[i]];
                let mut cost = island.cost.expect("refreshed");
                let k = island.perm.len();
                #[allow(clippy::needless_range_loop)] // `p` is a position in two permutations
                for p in 0..k {
                    if mig_rng.gen::<f64>() >= rate {
                        continue;
                    }
                    let donor = roulette(&weights, i, mig_rng);
                    let value = donors[donor][p];
                    if island.perm[p] == value {
                        continue;
                    }
                    let q = island
                        .perm
                        .as_slice()
                        .iter()
                        .position(|&v| v == value)
                        .expect("island is a permutation");
                    let delta = profile.swap_delta(island.perm.as_slice(), p, q);
                    if delta < 0.0 {
                        island.perm.swap(p, q);
                        cost += delta;
                    }
                }
                island.cost = Some(cost);
                let mutated = mutate(island, mutation_prob, mut_rng);
                if mutated.cost.is_none() {
                    island.perm = mutated.perm;
                    island.cost = Some(profile.cost(island.perm.as_slice()));
                }
            });

        let champion = pop
            .islands
            .iter()
            .enumerate()
            .min_by(|(a, x), (b, y)| x.cost.unwrap().total_cmp(&y.cost.unwrap()).then(a.cmp(b)))
            .map(|(i, _)| i)
            .expect("population is non-empty");
        if pop.islands[champion].cost.unwrap() < self.working_cost {
            let mut candidate = self.working.clone();
            *candidate.perm_mut(mode) = pop.islands[champion].perm.clone();
            let exact = bandwidth_cost(self.matrix, &candidate).expect("dimensions fixed");
            if exact < self.working_cost {
                if exact < self.best_cost {
                    self.best = candidate.clone();
                    self.best_cost = exact;
                }
                self.working = candidate;
                self.working_cost = exact;
            }
        }
    }
}

/// Minimize the weighted bandwidth of `a` over row and column orderings.
pub fn run_bbo(a: &DataMatrix, config: &BboConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let mut solver = Solver::new(a, config)?;
    let initial_cost = solver.best_cost;
    let mut trace = Vec::with_capacity(config.generations);
    let mut idle = 0;
    for _ in 0..config.generations {
        if solver.generation() {
            idle = 0;
        } else {
            idle += 1;
        }
        trace.push(solver.best_cost);
        if config.stagnation_window > 0 && idle >= config.stagnation_window {
            break;
        }
    }
    Ok(SolveResult {
        best: solver.best.clone(),
        best_cost: solver.best_cost,
        initial_cost,
        generations_run: trace.len(),
        cost_trace: trace,
        wall_time: start.elapsed().as_secs_f64(),
        seed: config.seed,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::apply_arrangement;
    use rand::SeedableRng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::try_from(v.to_vec()).unwrap()
    }

    #[test]
    fn interchange_examples() {
        let id = interchanges_to_arrangement(&InterchangeList::default(), 3, 2).unwrap();
        assert_eq!(id, Arrangement::identity(3, 2));

        let twice = InterchangeList(vec![Interchange::new(Mode::Rows, 0, 1); 2]);
        assert_eq!(
            interchanges_to_arrangement(&twice, 3, 3).unwrap(),
            Arrangement::identity(3, 3)
        );

        let list = InterchangeList(vec![
            Interchange::new(Mode::Rows, 0, 1),
            Interchange::new(Mode::Cols, 2, 0),
        ]);
        let arr = interchanges_to_arrangement(&list, 3, 3).unwrap();
        assert_eq!(arr.rows, perm(&[1, 0, 2]));
        assert_eq!(arr.cols, perm(&[2, 1, 0]));

        // Same arrangement obtained by swapping rows/cols of an actual matrix.
        let a = DataMatrix::new(3, 3, (0..9).map(f64::from).collect()).unwrap();
        let b = apply_arrangement(&a, &arr).unwrap();
        assert_eq!(b.row(0), &[5.0, 4.0, 3.0]);
        assert_eq!(b.row(1), &[2.0, 1.0, 0.0]);
    }

    #[test]
    fn interchange_rejects_bad_index() {
        let list = InterchangeList(vec![Interchange::new(Mode::Cols, 0, 3)]);
        assert!(matches!(
            interchanges_to_arrangement(&list, 5, 3),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn interchange_list_round_trip() {
        let arr = Arrangement::new(perm(&[2, 0, 3, 1]), perm(&[1, 2, 0]));
        let list = InterchangeList::from_arrangement(&arr);
        assert_eq!(interchanges_to_arrangement(&list, 4, 3).unwrap(), arr);
    }

    #[test]
    fn population_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pop = initialize_population(1, 2, &mut rng);
        assert_eq!(pop.len(), 2);
        assert!(pop.iter().all(|i| i.perm == Permutation::identity(1)));

        let pop = initialize_population(6, 9, &mut rng);
        assert_eq!(pop.len(), 9);
        assert!(pop[0].perm.is_identity());
        assert!(pop.iter().all(|i| Permutation::is_valid(i.perm.as_slice())));
    }

    #[test]
    fn population_diversity() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pop = initialize_population(18, 30, &mut rng);
            let distinct: std::collections::HashSet<_> =
                pop.iter().map(|i| i.perm.clone()).collect();
            assert!(distinct.len() >= 25);
        }
    }

    #[test]
    fn ranking() {
        assert_eq!(rank_by_hsi(&[5.0, 1.0, 3.0]), vec![0, 2, 1]);
        assert_eq!(rank_by_hsi(&[2.0; 4]), vec![0, 1, 2, 3]);
        assert_eq!(rank_by_hsi(&[1.0, 4.0, 1.0, 0.5]), vec![1, 0, 2, 3]);
    }

    #[test]
    fn migration_examples() {
        let target = Island::new(perm(&[0, 1, 2]));
        let donor = Island::new(perm(&[2, 1, 0]));
        assert_eq!(migrate_position(&target, 0, &donor).perm, perm(&[2, 1, 0]));
        for p in 0..3 {
            let same = migrate_position(&target, p, &target);
            assert_eq!(same, target);
        }
    }

    #[test]
    fn mutation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let isl = Island {
            perm: perm(&[3, 1, 0, 2]),
            cost: Some(1.0),
        };
        for _ in 0..50 {
            assert_eq!(mutate(&isl, 0.0, &mut rng), isl);
        }
        let single = Island::new(Permutation::identity(1));
        assert_eq!(mutate(&single, 1.0, &mut rng), single);
        for _ in 0..50 {
            let out = mutate(&isl, 1.0, &mut rng);
            let diff = (0..4).filter(|&p| out.perm[p] != isl.perm[p]).count();
            assert_eq!(diff, 2);
            assert!(out.cost.is_none());
        }
    }

    #[test]
    fn roulette_respects_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let j = roulette(&[0.0, 0.0, 1.0, 0.0], 0, &mut rng);
            assert_eq!(j, 2);
            let j = roulette(&[0.0, 0.0, 1.0], 2, &mut rng);
            assert!(j < 2);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BboConfig::default().validate().is_ok());
        let bad = [
            BboConfig {
                pop_size: 1,
                ..Default::default()
            },
            BboConfig {
                generations: 0,
                ..Default::default()
            },
            BboConfig {
                mutation_prob: 1.5,
                ..Default::default()
            },
            BboConfig {
                elite_count: 0,
                ..Default::default()
            },
            BboConfig {
                elite_count: 30,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn solves_anti_diagonal() {
        let a = DataMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let cfg = BboConfig {
            pop_size: 4,
            generations: 10,
            ..Default::default()
        };
        let res = run_bbo(&a, &cfg).unwrap();
        assert_eq!(res.best_cost, 0.0);
        assert_eq!(bandwidth_cost(&a, &res.best).unwrap(), 0.0);
        assert_eq!(res.initial_cost, 2.0);
    }

    #[test]
    fn keeps_optimal_incumbent() {
        let a = DataMatrix::from_rows(&[
            vec![2.0, 0.0, 0.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let res = run_bbo(
            &a,
            &BboConfig {
                seed: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(res.best_cost, 0.0);
        assert_eq!(bandwidth_cost(&a, &res.best).unwrap(), 0.0);
    }

    #[test]
    fn cached_costs_coherent_at_generation_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> = (0..9 * 7)
            .map(|_| f64::from(rng.gen_range(0..4u8)))
            .collect();
        let a = DataMatrix::new(9, 7, values).unwrap();
        let cfg = BboConfig {
            pop_size: 8,
            seed: 2,
            ..Default::default()
        };
        let mut solver = Solver::new(&a, &cfg).unwrap();
        for _ in 0..40 {
            solver.generation();
            assert_eq!(
                bandwidth_cost(&a, solver.best()).unwrap(),
                solver.best_cost()
            );
            let working = solver.working().clone();
            for mode in [Mode::Rows, Mode::Cols] {
                for isl in solver.islands(mode) {
                    assert!(Permutation::is_valid(isl.perm.as_slice()));
                    let mut arr = working.clone();
                    *arr.perm_mut(mode) = isl.perm.clone();
                    let exact = bandwidth_cost(&a, &arr).unwrap();
                    assert!((isl.cost.unwrap() - exact).abs() < 1e-9);
                }
            }
        }
        assert!(solver.restarts() > 0, "restarts exercised");
    }

    #[test]
    fn restarts_escape_coordinatewise_optimum() {
        // Without restarts this instance settles at 91 with P = 4: neither
        // mode can improve alone. The exhaustive optimum is 76.
        let a = DataMatrix::new(
            4,
            4,
            vec![
                1., 3., 0., 3., 1., 1., 1., 1., 2., 3., 2., 0., 3., 2., 3., 2.,
            ],
        )
        .unwrap();
        let stuck = BboConfig {
            pop_size: 4,
            restart_window: 0,
            ..Default::default()
        };
        assert_eq!(run_bbo(&a, &stuck).unwrap().best_cost, 91.0);
        let cfg = BboConfig {
            pop_size: 4,
            ..Default::default()
        };
        assert_eq!(run_bbo(&a, &cfg).unwrap().best_cost, 76.0);
    }

    #[test]
    fn restart_window_zero_never_restarts() {
        let a = DataMatrix::identity(5).unwrap();
        let cfg = BboConfig {
            pop_size: 6,
            restart_window: 0,
            ..Default::default()
        };
        let mut solver = Solver::new(&a, &cfg).unwrap();
        for _ in 0..30 {
            solver.generation();
        }
        assert_eq!(solver.restarts(), 0);
        assert_eq!(solver.working(), solver.best());
    }
}
