//! Evaluate-or-estimate dispatch over a history of seen data points.
//!
//! Every fitness request produces a record in the [`HistoryStore`]. For a new
//! position `p` with nearest stored record `q` at distance `dist`:
//!
//! - no record, or `dist > d`: evaluate ([`Rule::Far`]);
//! - `q` holds the best fitness in the store: evaluate ([`Rule::NearBest`]);
//! - otherwise: copy `q`'s fitness ([`Rule::NearOther`]).

use alloc::vec::Vec;

use crate::de::FitnessKind;
use crate::{Error, Result};

pub type Position = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvaluationRecord {
    pub position: Position,
    pub fitness: f64,
    pub kind: FitnessKind,
    pub rule: Rule,
}

/// Which branch of the dispatch handled a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Rule {
    /// Nearest record is within `d` and holds the best fitness: evaluate.
    NearBest,
    /// Store empty or nearest record farther than `d`: evaluate.
    Far,
    /// Nearest record within `d` but not the best: copy its fitness.
    NearOther,
}

impl Rule {
    pub fn evaluates(self) -> bool {
        !matches!(self, Rule::NearOther)
    }

    /// 1, 2 or 3, in the order the rules are usually listed.
    pub fn number(self) -> u8 {
        match self {
            Rule::NearBest => 1,
            Rule::Far => 2,
            Rule::NearOther => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyParams {
    /// Euclidean distance threshold in pixels.
    pub d: f64,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams { d: 2.5 }
    }
}

impl StrategyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::InvalidConfig(alloc::format!("distance threshold must be positive, got {}", self.d)));
        }
        Ok(())
    }
}

/// All records seen during one block search.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HistoryStore {
    records: Vec<EvaluationRecord>,
    best: Option<usize>,
}

impl HistoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        HistoryStore { records: Vec::with_capacity(n), best: None }
    }

    pub fn records(&self) -> &[EvaluationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Index of the record with minimal fitness (earliest on ties).
    pub fn best_index(&self) -> Option<usize> {
        self.best
    }

    pub fn best(&self) -> Option<&EvaluationRecord> {
        self.best.map(|i| &self.records[i])
    }

    pub fn evaluations(&self) -> usize {
        self.records.iter().filter(|r| r.kind == FitnessKind::Evaluated).count()
    }

    pub fn estimations(&self) -> usize {
        self.records.iter().filter(|r| r.kind == FitnessKind::Estimated).count()
    }

    pub fn reset(&mut self) {
        self.records.clear();
        self.best = None;
    }

    fn push(&mut self, record: EvaluationRecord) -> Result<()> {
        if !(record.fitness >= 0.0) || !record.position.iter().all(|c| c.is_finite()) {
            return Err(Error::ContractViolation(alloc::format!(
                "record at {:?} with fitness {} violates the store invariants",
                record.position,
                record.fitness
            )));
        }
        let index = self.records.len();
        if self.best().is_none_or(|b| record.fitness < b.fitness) {
            self.best = Some(index);
        }
        self.records.push(record);
        Ok(())
    }

    /// Nearest stored record to `p` and its Euclidean distance. Ties go to
    /// the earliest insertion.
    pub fn nearest(&self, p: &Position) -> Option<(usize, f64)> {
        let mut found: Option<(usize, f64)> = None;
        for (i, r) in self.records.iter().enumerate() {
            let d2 = dist2(&r.position, p);
            if found.is_none_or(|(_, best)| d2 < best) {
                found = Some((i, d2));
            }
        }
        found.map(|(i, d2)| (i, libm::sqrt(d2)))
    }

    /// Which rule applies to `p`. Does not modify the store.
    pub fn classify(&self, p: &Position, params: &StrategyParams) -> Rule {
        match self.nearest(p) {
            None => Rule::Far,
            Some((_, dist)) if dist > params.d => Rule::Far,
            Some((i, _)) if Some(i) == self.best => Rule::NearBest,
            Some(_) => Rule::NearOther,
        }
    }

    /// Fitness of `p`: evaluated with `objective` under the first two rules,
    /// copied from the nearest record under the third. The result is always
    /// appended. On objective failure the store is left untouched.
    pub fn fitness_of<E: From<Error>>(
        &mut self,
        p: &Position,
        params: &StrategyParams,
        objective: impl FnOnce(&Position) -> core::result::Result<f64, E>,
    ) -> core::result::Result<(f64, FitnessKind), E> {
        let rule = self.classify(p, params);
        let (fitness, kind) = if rule.evaluates() {
            (objective(p)?, FitnessKind::Evaluated)
        } else {
            let (i, _) = self.nearest(p).expect("rule 3 implies a neighbour");
            (self.records[i].fitness, FitnessKind::Estimated)
        };
        self.push(EvaluationRecord { position: *p, fitness, kind, rule })?;
        Ok((fitness, kind))
    }
}

#[inline]
fn dist2(a: &Position, b: &Position) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::cell::Cell;

    fn seeded(points: &[(Position, f64)]) -> HistoryStore {
        let mut s = HistoryStore::new();
        let params = StrategyParams { d: 1e-9 };
        for (p, f) in points {
            // A tiny threshold forces every insertion through the evaluating
            // branch unless the point is an exact duplicate of a non-best one.
            s.fitness_of(p, &params, |_| Ok::<_, Error>(*f)).unwrap();
        }
        s
    }

    #[test]
    fn nearest_cases() {
        assert_eq!(HistoryStore::new().nearest(&[0.0, 0.0]), None);
        let s = seeded(&[([0.0, 0.0], 100.0)]);
        assert_eq!(s.nearest(&[3.0, 4.0]), Some((0, 5.0)));
        let s = seeded(&[([0.0, 0.0], 100.0), ([3.0, 4.0], 90.0)]);
        assert_eq!(s.nearest(&[3.0, 3.0]), Some((1, 1.0)));
        // Equidistant: earliest insertion.
        let s = seeded(&[([-1.0, 0.0], 5.0), ([1.0, 0.0], 4.0)]);
        assert_eq!(s.nearest(&[0.0, 0.0]), Some((0, 1.0)));
    }

    #[test]
    fn classify_cases() {
        let params = StrategyParams::default();
        assert_eq!(HistoryStore::new().classify(&[1.0, 1.0], &params), Rule::Far);
        let s = seeded(&[([5.0, 4.0], 10.0), ([0.0, 0.0], 20.0)]);
        assert_eq!(s.classify(&[6.0, 4.0], &params), Rule::NearBest);
        let s = seeded(&[([0.0, 0.0], 50.0), ([6.0, 0.0], 80.0)]);
        assert_eq!(s.classify(&[6.0, 1.0], &params), Rule::NearOther);
        assert_eq!(s.classify(&[3.0, 0.0], &params), Rule::Far);
        // Exactly at the threshold counts as close.
        assert_eq!(s.classify(&[2.5, 0.0], &params), Rule::NearBest);
    }

    #[test]
    fn fitness_of_dispatch_counts_objective_calls() {
        let params = StrategyParams::default();
        let calls = Cell::new(0);
        let obj = |v: f64| {
            let calls = &calls;
            move |_: &Position| {
                calls.set(calls.get() + 1);
                Ok::<_, Error>(v)
            }
        };

        let mut s = HistoryStore::new();
        assert_eq!(s.fitness_of(&[0.0, 0.0], &params, obj(1234.0)).unwrap(), (1234.0, FitnessKind::Evaluated));
        assert_eq!((s.len(), calls.get()), (1, 1));

        let mut s = seeded(&[([2.0, 2.0], 500.0)]);
        let (_, kind) = s.fitness_of(&[2.0, 3.0], &params, obj(450.0)).unwrap();
        assert_eq!((kind, calls.get()), (FitnessKind::Evaluated, 2));
        assert_eq!(s.best().unwrap().fitness, 450.0);

        let mut s = seeded(&[([0.0, 0.0], 50.0), ([6.0, 0.0], 80.0)]);
        let got = s.fitness_of(&[6.0, 1.0], &params, obj(1.0)).unwrap();
        assert_eq!(got, (80.0, FitnessKind::Estimated));
        assert_eq!(calls.get(), 2);
        assert_eq!(s.records().last().unwrap().rule, Rule::NearOther);
    }

    #[test]
    fn failed_objective_leaves_store_untouched() {
        let mut s = seeded(&[([0.0, 0.0], 10.0)]);
        let before = s.clone();
        let r = s.fitness_of(&[9.0, 9.0], &StrategyParams::default(), |_| Err(Error::InvalidInput("boom".into())));
        assert!(r.is_err());
        assert_eq!(s, before);
    }

    #[test]
    fn reset_empties_and_is_idempotent() {
        let mut s = seeded(&[([0.0, 0.0], 10.0), ([5.0, 5.0], 3.0)]);
        s.reset();
        assert!(s.is_empty());
        s.reset();
        assert_eq!(s.len(), 0);
        assert_eq!(s.best_index(), None);
        assert_eq!(s.classify(&[0.0, 0.0], &StrategyParams::default()), Rule::Far);
    }

    #[test]
    fn rejects_negative_fitness() {
        let mut s = HistoryStore::new();
        let r = s.fitness_of(&[0.0, 0.0], &StrategyParams::default(), |_| Ok::<_, Error>(-1.0));
        assert!(matches!(r, Err(Error::ContractViolation(_))));
        assert!(s.is_empty());
    }

    #[test]
    fn params_validation() {
        assert!(StrategyParams { d: 0.0 }.validate().is_err());
        assert!(StrategyParams { d: f64::NAN }.validate().is_err());
        assert!(StrategyParams::default().validate().is_ok());
    }
}
