//! Pointer-based crossover (PBX) and its pheromone-guided ant form.
//!
//! Each parent carries k cursors sweeping disjoint cyclic segments of its
//! order. At every step the set of cities currently pointed at (PC) is the
//! candidate set; the greedy form appends the candidate nearest to the last
//! placed city, the ant form applies the pseudo-random-proportional rule
//! (argmax of tau*eta^beta with probability q0, else roulette) over PC.
//! The chosen candidate's cursor advances one position; a cursor dies when
//! it reaches the start of the next cursor's segment. The plain
//! ant-colony-system constructor over the full unvisited set is included
//! as a comparison baseline.

use thiserror::Error;

use crate::pheromone::{AcsParams, PheromoneMatrix};
use crate::rng::SolverRng;
use crate::tour::{tour_cost, Tour};
use crate::tsplib::DistanceMatrix;

/// Visibility cap for coincident cities: eta = 1/d is undefined at d = 0.
const ETA_CAP: f64 = 1e6;

#[derive(Debug, Error, PartialEq)]
pub enum CrossoverError {
    #[error("pointer count k = {k} out of range, expected 3 <= k <= {n}")]
    PointerCount { k: usize, n: usize },
    #[error("parents have different sizes: {father} vs {mother}")]
    ParentMismatch { father: usize, mother: usize },
    #[error("start city {0} not present in parent")]
    BadStartCity(usize),
    #[error("cursor start positions must be distinct and in range")]
    BadCursorStarts,
}

#[derive(Debug, Clone, Copy)]
struct Cursor {
    pos: usize,
    segment_end: usize,
    alive: bool,
}

/// Which parent a cursor (and hence a candidate) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Father,
    Mother,
}

/// The cursor set of one parent. Cursor segments partition the parent's
/// cyclic position space; a cursor only ever points inside its own segment.
#[derive(Debug, Clone)]
pub struct ParentCursors<'a> {
    order: &'a [usize],
    cursors: Vec<Cursor>,
}

impl<'a> ParentCursors<'a> {
    /// Standard placement: cursor 0 immediately after `start_city`
    /// (cyclically), cursors 1..k at evenly spaced cyclic offsets
    /// nint(i*n/k) from cursor 0. Each segment ends where the next
    /// cursor starts.
    pub fn new(order: &'a [usize], start_city: usize, k: usize) -> Result<Self, CrossoverError> {
        let n = order.len();
        if k < 3 || k > n {
            return Err(CrossoverError::PointerCount { k, n });
        }
        let at = order
            .iter()
            .position(|&c| c == start_city)
            .ok_or(CrossoverError::BadStartCity(start_city))?;
        let base = (at + 1) % n;
        let starts: Vec<usize> = (0..k)
            .map(|i| {
                let offset = ((i * n) as f64 / k as f64 + 0.5).floor() as usize;
                (base + offset) % n
            })
            .collect();
        Self::with_starts(order, &starts)
    }

    /// Explicit cursor layout; start positions must be distinct. Exposed so
    /// worked-example traces can pin exact cursor placements.
    pub fn with_starts(order: &'a [usize], starts: &[usize]) -> Result<Self, CrossoverError> {
        let n = order.len();
        let k = starts.len();
        if k == 0 || k > n {
            return Err(CrossoverError::BadCursorStarts);
        }
        let mut seen = vec![false; n];
        for &s in starts {
            if s >= n || seen[s] {
                return Err(CrossoverError::BadCursorStarts);
            }
            seen[s] = true;
        }
        // segment_end of cursor i = start of the cyclically next cursor
        let mut sorted = starts.to_vec();
        sorted.sort_unstable();
        let cursors = starts
            .iter()
            .map(|&s| {
                let next = sorted
                    .iter()
                    .copied()
                    .find(|&t| t > s)
                    .unwrap_or(sorted[0]);
                Cursor {
                    pos: s,
                    segment_end: next,
                    alive: true,
                }
            })
            .collect();
        Ok(ParentCursors { order, cursors })
    }

    pub fn order(&self) -> &[usize] {
        self.order
    }

    /// (position, segment_end, alive) for each cursor, for inspection.
    pub fn cursor_states(&self) -> Vec<(usize, usize, bool)> {
        self.cursors
            .iter()
            .map(|c| (c.pos, c.segment_end, c.alive))
            .collect()
    }

    /// Move a cursor past already-visited cities; it dies when it would
    /// enter the next segment.
    fn skip_visited(&mut self, idx: usize, visited: &[bool]) {
        let n = self.order.len();
        let cur = &mut self.cursors[idx];
        while cur.alive && visited[self.order[cur.pos]] {
            cur.pos = (cur.pos + 1) % n;
            if cur.pos == cur.segment_end {
                cur.alive = false;
            }
        }
    }

    /// Advance a cursor one position after its city was consumed.
    fn advance(&mut self, idx: usize) {
        let n = self.order.len();
        let cur = &mut self.cursors[idx];
        cur.pos = (cur.pos + 1) % n;
        if cur.pos == cur.segment_end {
            cur.alive = false;
        }
    }
}

/// A candidate city and the cursor that owns it. When several cursors
/// point at the same city, the father's, then lower-indexed, cursor owns it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub city: usize,
    pub side: Side,
    pub cursor: usize,
}

/// Which branch of the transition rule produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Greedy,
    Exploit,
    Explore,
}

/// Record of one child-building step.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub from: usize,
    pub chosen: usize,
    pub candidates: Vec<usize>,
    pub branch: Branch,
}

/// In-progress crossover: the growing child plus both parents' cursors.
#[derive(Debug)]
pub struct CrossoverState<'a> {
    father: ParentCursors<'a>,
    mother: ParentCursors<'a>,
    child: Vec<usize>,
    visited: Vec<bool>,
    current: usize,
}

impl<'a> CrossoverState<'a> {
    pub fn new(
        father: ParentCursors<'a>,
        mother: ParentCursors<'a>,
        start_city: usize,
    ) -> Result<Self, CrossoverError> {
        let n = father.order.len();
        if n != mother.order.len() {
            return Err(CrossoverError::ParentMismatch {
                father: n,
                mother: mother.order.len(),
            });
        }
        if start_city >= n {
            return Err(CrossoverError::BadStartCity(start_city));
        }
        let mut visited = vec![false; n];
        visited[start_city] = true;
        Ok(CrossoverState {
            father,
            mother,
            child: vec![start_city],
            visited,
            current: start_city,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.child.len() == self.visited.len()
    }

    pub fn child(&self) -> &[usize] {
        &self.child
    }

    pub fn current_city(&self) -> usize {
        self.current
    }

    pub fn father_cursor_states(&self) -> Vec<(usize, usize, bool)> {
        self.father.cursor_states()
    }

    pub fn mother_cursor_states(&self) -> Vec<(usize, usize, bool)> {
        self.mother.cursor_states()
    }

    /// The pointed-city set PC with owners, in collection order (father
    /// cursors by index, then mother cursors by index). Cursors are swept
    /// past visited cities as a side effect. Empty only when the child is
    /// complete.
    pub fn candidates(&mut self) -> Vec<Candidate> {
        let mut out: Vec<Candidate> = Vec::new();
        for side in [Side::Father, Side::Mother] {
            let parent = match side {
                Side::Father => &mut self.father,
                Side::Mother => &mut self.mother,
            };
            for idx in 0..parent.cursors.len() {
                if !parent.cursors[idx].alive {
                    continue;
                }
                parent.skip_visited(idx, &self.visited);
                if !parent.cursors[idx].alive {
                    continue;
                }
                let city = parent.order[parent.cursors[idx].pos];
                if !out.iter().any(|c| c.city == city) {
                    out.push(Candidate {
                        city,
                        side,
                        cursor: idx,
                    });
                }
            }
        }
        if !self.is_complete() && out.is_empty() {
            // The father's cursors jointly sweep every position, so an
            // incomplete child always has a candidate.
            unreachable!("candidate set empty with incomplete child");
        }
        out
    }

    fn commit(&mut self, cand: Candidate, branch: Branch, pc: Vec<usize>) -> StepRecord {
        let record = StepRecord {
            from: self.current,
            chosen: cand.city,
            candidates: pc,
            branch,
        };
        match cand.side {
            Side::Father => self.father.advance(cand.cursor),
            Side::Mother => self.mother.advance(cand.cursor),
        }
        self.child.push(cand.city);
        self.visited[cand.city] = true;
        self.current = cand.city;
        record
    }

    /// Greedy step: append the candidate nearest to the current city.
    /// Distance ties resolve to the earliest candidate in collection order
    /// (father first, then lower cursor index), then lowest city index.
    pub fn greedy_step(&mut self, d: &DistanceMatrix) -> StepRecord {
        let cands = self.candidates();
        let pc: Vec<usize> = cands.iter().map(|c| c.city).collect();
        let cur = self.current;
        let (_, best) = cands
            .iter()
            .enumerate()
            .min_by_key(|(i, c)| (d.dist(cur, c.city), *i, c.city))
            .map(|(i, c)| (i, *c))
            .expect("incomplete child has candidates");
        self.commit(best, Branch::Greedy, pc)
    }

    /// tau * eta^beta for one candidate edge.
    fn weight(&self, to: usize, tau: &PheromoneMatrix, params: &AcsParams, d: &DistanceMatrix) -> f64 {
        let dist = d.dist(self.current, to);
        let eta = if dist == 0 { ETA_CAP } else { 1.0 / dist as f64 };
        tau.get(self.current, to) * eta.powf(params.beta)
    }

    /// The roulette distribution over the current candidate set,
    /// normalized to sum to 1. For inspection and tests.
    pub fn transition_probabilities(
        &mut self,
        tau: &PheromoneMatrix,
        params: &AcsParams,
        d: &DistanceMatrix,
    ) -> Vec<(usize, f64)> {
        let cands = self.candidates();
        let weights: Vec<f64> = cands
            .iter()
            .map(|c| self.weight(c.city, tau, params, d))
            .collect();
        let total: f64 = weights.iter().sum();
        cands
            .iter()
            .zip(weights)
            .map(|(c, w)| (c.city, w / total))
            .collect()
    }

    /// Pseudo-random-proportional step over PC: draw q uniform on [0,1);
    /// exploit (argmax of tau*eta^beta) when q <= q0, otherwise sample
    /// proportionally. Weight ties resolve as in [`Self::greedy_step`].
    pub fn ant_step(
        &mut self,
        tau: &PheromoneMatrix,
        params: &AcsParams,
        d: &DistanceMatrix,
        rng: &mut SolverRng,
    ) -> StepRecord {
        let cands = self.candidates();
        let pc: Vec<usize> = cands.iter().map(|c| c.city).collect();
        let q = rng.unit();
        if q <= params.q0 {
            let weights: Vec<f64> = cands
                .iter()
                .map(|c| self.weight(c.city, tau, params, d))
                .collect();
            let mut best = 0;
            for i in 1..cands.len() {
                // strict > keeps the earliest candidate on ties
                if weights[i] > weights[best] {
                    best = i;
                }
            }
            self.commit(cands[best], Branch::Exploit, pc)
        } else {
            let weights: Vec<f64> = cands
                .iter()
                .map(|c| self.weight(c.city, tau, params, d))
                .collect();
            let total: f64 = weights.iter().sum();
            debug_assert!(
                (weights.iter().map(|w| w / total).sum::<f64>() - 1.0).abs() <= 1e-9,
                "roulette probabilities must sum to 1"
            );
            let spin = rng.unit() * total;
            let mut acc = 0.0;
            let mut pick = cands.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if spin < acc {
                    pick = i;
                    break;
                }
            }
            self.commit(cands[pick], Branch::Explore, pc)
        }
    }
}

/// Deterministic-greedy pointer-based crossover. The start city is drawn
/// uniformly; every later step appends the pointed city nearest to the
/// last placed one.
pub fn pbx_crossover(
    father: &Tour,
    mother: &Tour,
    k: usize,
    rng: &mut SolverRng,
    d: &DistanceMatrix,
) -> Result<Tour, CrossoverError> {
    if father.len() != mother.len() {
        return Err(CrossoverError::ParentMismatch {
            father: father.len(),
            mother: mother.len(),
        });
    }
    let start = rng.index(father.len());
    let mut state = CrossoverState::new(
        ParentCursors::new(father.order(), start, k)?,
        ParentCursors::new(mother.order(), start, k)?,
        start,
    )?;
    while !state.is_complete() {
        state.greedy_step(d);
    }
    Ok(Tour::new(state.child, d))
}

/// Ant crossover: the PBX cursor machinery with the transition rule of the
/// ant colony system, applying the local pheromone update to each traversed
/// edge (n-1 updates per child).
pub fn ant_crossover(
    father: &Tour,
    mother: &Tour,
    k: usize,
    tau: &mut PheromoneMatrix,
    params: &AcsParams,
    d: &DistanceMatrix,
    rng: &mut SolverRng,
) -> Result<Tour, CrossoverError> {
    if father.len() != mother.len() {
        return Err(CrossoverError::ParentMismatch {
            father: father.len(),
            mother: mother.len(),
        });
    }
    let start = rng.index(father.len());
    let mut state = CrossoverState::new(
        ParentCursors::new(father.order(), start, k)?,
        ParentCursors::new(mother.order(), start, k)?,
        start,
    )?;
    while !state.is_complete() {
        let step = state.ant_step(tau, params, d, rng);
        tau.local_update(step.from, step.chosen, params.rho)
            .expect("transition edges join distinct cities");
    }
    Ok(Tour::new(state.child, d))
}

/// Roulette distribution of the plain ant-colony-system constructor over
/// the full unvisited set, normalized. For inspection and tests.
pub fn acs_transition_probabilities(
    current: usize,
    visited: &[bool],
    tau: &PheromoneMatrix,
    params: &AcsParams,
    d: &DistanceMatrix,
) -> Vec<(usize, f64)> {
    let weights: Vec<(usize, f64)> = (0..visited.len())
        .filter(|&j| !visited[j])
        .map(|j| {
            let dist = d.dist(current, j);
            let eta = if dist == 0 { ETA_CAP } else { 1.0 / dist as f64 };
            (j, tau.get(current, j) * eta.powf(params.beta))
        })
        .collect();
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    weights.into_iter().map(|(j, w)| (j, w / total)).collect()
}

/// Baseline tour constructor: the classic ant-colony-system walk over the
/// full unvisited set with a local update per step. For comparison runs.
pub fn acs_construct_tour(
    tau: &mut PheromoneMatrix,
    params: &AcsParams,
    d: &DistanceMatrix,
    rng: &mut SolverRng,
) -> Tour {
    let n = d.n();
    let start = rng.index(n);
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut current = start;
    for _ in 1..n {
        let q = rng.unit();
        let next = if q <= params.q0 {
            let mut best = None;
            let mut best_w = f64::NEG_INFINITY;
            for (j, seen) in visited.iter().enumerate() {
                if *seen {
                    continue;
                }
                let dist = d.dist(current, j);
                let eta = if dist == 0 { ETA_CAP } else { 1.0 / dist as f64 };
                let w = tau.get(current, j) * eta.powf(params.beta);
                if w > best_w {
                    best_w = w;
                    best = Some(j);
                }
            }
            best.expect("unvisited city exists")
        } else {
            let probs = acs_transition_probabilities(current, &visited, tau, params, d);
            debug_assert!(
                (probs.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() <= 1e-9,
                "roulette probabilities must sum to 1"
            );
            let spin = rng.unit();
            let mut acc = 0.0;
            let mut pick = probs[probs.len() - 1].0;
            for &(j, p) in &probs {
                acc += p;
                if spin < acc {
                    pick = j;
                    break;
                }
            }
            pick
        };
        tau.local_update(current, next, params.rho)
            .expect("distinct cities");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    let cost = tour_cost(&order, d);
    Tour::with_cost(order, cost, d)
}
