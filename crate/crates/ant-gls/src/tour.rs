//! Tours (closed permutation routes with cached integer cost) and the
//! population container.

use crate::rng::SolverRng;
use crate::tsplib::DistanceMatrix;

/// A closed tour: a permutation of `0..n` plus its cached cost.
///
/// Costs are integers throughout (EUC_2D distances are integers), so every
/// delta check in the local searches is exact.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Tour {
    order: Vec<usize>,
    cost: u64,
}

impl Tour {
    /// Build a tour from a city order, computing its cost.
    pub fn new(order: Vec<usize>, d: &DistanceMatrix) -> Self {
        debug_assert!(is_permutation(&order, d.n()));
        let cost = tour_cost(&order, d);
        Tour { order, cost }
    }

    /// Build from an order and an already-known cost (exact delta updates).
    /// Debug builds re-derive the cost to catch drift.
    pub(crate) fn with_cost(order: Vec<usize>, cost: u64, d: &DistanceMatrix) -> Self {
        debug_assert!(is_permutation(&order, d.n()));
        debug_assert_eq!(cost, tour_cost(&order, d), "cached cost drifted");
        let _ = d;
        Tour { order, cost }
    }

    #[inline]
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn cost(&self) -> u64 {
        self.cost
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Text form used by the CLI and golden fixtures: space-separated
    /// 0-based city indices, then `cost=<integer>`.
    pub fn to_line(&self) -> String {
        let mut s = String::with_capacity(self.order.len() * 4 + 16);
        for (i, c) in self.order.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&c.to_string());
        }
        s.push_str(&format!(" cost={}", self.cost));
        s
    }

    /// Parse the [`Tour::to_line`] form back, re-deriving the cost.
    pub fn parse_line(line: &str, d: &DistanceMatrix) -> Option<Self> {
        let mut order = Vec::new();
        let mut declared = None;
        for tok in line.split_whitespace() {
            if let Some(c) = tok.strip_prefix("cost=") {
                declared = Some(c.parse::<u64>().ok()?);
            } else {
                order.push(tok.parse::<usize>().ok()?);
            }
        }
        if !is_permutation(&order, d.n()) {
            return None;
        }
        let tour = Tour::new(order, d);
        match declared {
            Some(c) if c != tour.cost => None,
            _ => Some(tour),
        }
    }
}

/// Closed-tour length: sum of `d[order[i]][order[(i+1) % n]]`.
pub fn tour_cost(order: &[usize], d: &DistanceMatrix) -> u64 {
    let n = order.len();
    let mut total = 0u64;
    for i in 0..n {
        total += d.dist(order[i], order[(i + 1) % n]) as u64;
    }
    total
}

/// True when `order` visits each of `0..n` exactly once.
pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

/// Uniformly random tour via unbiased shuffle.
pub fn random_tour(n: usize, rng: &mut SolverRng, d: &DistanceMatrix) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    Tour::new(order, d)
}

/// Fixed-capacity multiset of tours in insertion order. Duplicates are
/// allowed; selection pressure comes from truncation at reduction time.
#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Tour>,
    capacity: usize,
}

impl Population {
    pub fn new(capacity: usize) -> Self {
        Population {
            members: Vec::with_capacity(capacity * 2),
            capacity,
        }
    }

    pub fn push(&mut self, tour: Tour) {
        self.members.push(tour);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn get(&self, i: usize) -> &Tour {
        &self.members[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tour> {
        self.members.iter()
    }

    /// Minimum-cost member; ties broken by earliest insertion.
    pub fn best(&self) -> Option<&Tour> {
        self.members
            .iter()
            .enumerate()
            .min_by_key(|(i, t)| (t.cost(), *i))
            .map(|(_, t)| t)
    }

    /// Truncation reduction: keep the `capacity` lowest-cost members, ties
    /// by insertion order. Returns true when membership changed, i.e. at
    /// least one member appended after the first `capacity` slots survived.
    pub fn reduce(&mut self) -> bool {
        if self.members.len() <= self.capacity {
            return false;
        }
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by_key(|&i| (self.members[i].cost(), i));
        idx.truncate(self.capacity);
        let changed = idx.iter().any(|&i| i >= self.capacity);
        idx.sort_unstable();
        let mut keep = std::collections::HashSet::new();
        keep.extend(idx.iter().copied());
        let mut i = 0;
        self.members.retain(|_| {
            let k = keep.contains(&i);
            i += 1;
            k
        });
        changed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::demo8_matrix;
    use proptest::prelude::*;

    fn demo_tour(cities_1_based: &[usize]) -> Vec<usize> {
        cities_1_based.iter().map(|c| c - 1).collect()
    }

    #[test]
    fn golden_costs_on_demo_instance() {
        let d = demo8_matrix();
        assert_eq!(tour_cost(&demo_tour(&[4, 5, 7, 3, 1, 2, 6, 8]), &d), 210);
        assert_eq!(tour_cost(&demo_tour(&[3, 1, 7, 5, 6, 4, 2, 8]), &d), 208);
    }

    #[test]
    fn all_unit_distances_cost_n() {
        let d = crate::tsplib::DistanceMatrix::from_literal("3 0 1 1 1 0 1 1 1 0").unwrap();
        assert_eq!(tour_cost(&[0, 1, 2], &d), 3);
        assert_eq!(tour_cost(&[2, 0, 1], &d), 3);
    }

    #[test]
    fn random_tour_is_deterministic_and_valid() {
        let d = demo8_matrix();
        let t1 = random_tour(8, &mut SolverRng::seeded(5), &d);
        let t2 = random_tour(8, &mut SolverRng::seeded(5), &d);
        assert_eq!(t1, t2);
        assert!(is_permutation(t1.order(), 8));
    }

    #[test]
    fn random_tour_position_frequencies_are_uniform() {
        let d = demo8_matrix();
        let mut rng = SolverRng::seeded(99);
        let samples = 10_000;
        let mut counts = [0usize; 8];
        for _ in 0..samples {
            let t = random_tour(8, &mut rng, &d);
            counts[t.order()[0]] += 1;
        }
        for c in counts {
            let freq = c as f64 / samples as f64;
            assert!((freq - 0.125).abs() < 0.02, "freq {freq}");
        }
    }

    #[test]
    fn population_best_prefers_lower_cost_then_insertion() {
        let d = demo8_matrix();
        let t210 = Tour::new(demo_tour(&[4, 5, 7, 3, 1, 2, 6, 8]), &d);
        let t208 = Tour::new(demo_tour(&[3, 1, 7, 5, 6, 4, 2, 8]), &d);
        let mut pop = Population::new(4);
        pop.push(t210.clone());
        pop.push(t208.clone());
        assert_eq!(pop.best().unwrap().cost(), 208);

        let mut single = Population::new(1);
        single.push(t210.clone());
        assert_eq!(single.best().unwrap(), &t210);

        // tie: first inserted wins
        let other208 = Tour::new(demo_tour(&[8, 2, 4, 6, 5, 7, 1, 3]), &d);
        assert_eq!(other208.cost(), 208);
        let mut tied = Population::new(2);
        tied.push(t208.clone());
        tied.push(other208.clone());
        assert!(std::ptr::eq(tied.best().unwrap(), tied.get(0)));
    }

    #[test]
    fn empty_population_has_no_best() {
        assert!(Population::new(3).best().is_none());
    }

    #[test]
    fn tour_line_round_trips() {
        let d = demo8_matrix();
        let t = Tour::new(demo_tour(&[4, 5, 7, 3, 1, 2, 6, 8]), &d);
        let line = t.to_line();
        assert_eq!(line, "3 4 6 2 0 1 5 7 cost=210");
        assert_eq!(Tour::parse_line(&line, &d).unwrap(), t);
        assert!(Tour::parse_line("0 1 2 cost=999", &d).is_none());
    }

    proptest! {
        #[test]
        fn cost_is_rotation_and_reversal_invariant(seed in 0u64..500) {
            let d = demo8_matrix();
            let t = random_tour(8, &mut SolverRng::seeded(seed), &d);
            let base = t.cost();
            let order = t.order();
            for k in 0..8 {
                let rotated: Vec<usize> =
                    (0..8).map(|i| order[(i + k) % 8]).collect();
                prop_assert_eq!(tour_cost(&rotated, &d), base);
            }
            let reversed: Vec<usize> = order.iter().rev().copied().collect();
            prop_assert_eq!(tour_cost(&reversed, &d), base);
        }
    }
}
