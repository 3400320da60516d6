use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Equation, Substitution};
use crate::error::{Error, Result};
use crate::free_product::{FpElement, Syllable};

/// Per-variable candidate values, in the order they should be tried.
#[derive(Debug, Clone, Default)]
pub struct Candidates(BTreeMap<u32, Vec<FpElement>>);

impl Candidates {
    pub fn new() -> Self {
        Candidates(BTreeMap::new())
    }

    /// The same list for every variable of `eq`.
    pub fn uniform(eq: &Equation, values: &[FpElement]) -> Self {
        Candidates(eq.lhs.variables().into_iter().map(|v| (v, values.to_vec())).collect())
    }

    pub fn with(mut self, index: u32, values: Vec<FpElement>) -> Self {
        self.0.insert(index, values);
        self
    }

    pub fn get(&self, index: u32) -> Option<&[FpElement]> {
        self.0.get(&index).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    First,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Satisfying substitutions in enumeration order (one in `First` mode).
    Solutions(Vec<Substitution>),
    /// Every tuple was checked and none satisfies the equation.
    NoSolutionInSet { tuples_checked: u128 },
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solutions(_))
    }
}

/// Exhaustive search over the Cartesian product of the candidate lists.
///
/// Tuples are visited in lexicographic order of candidate indices with the
/// lowest-numbered variable most significant, so the first solution does
/// not depend on how the work is split across threads.
pub fn solve_bounded(eq: &Equation, candidates: &Candidates, mode: SearchMode) -> Result<SolveOutcome> {
    let ambient = Arc::clone(eq.lhs.ambient());
    let compiled = eq.lhs.compile();
    let mut lists: Vec<Vec<&[Syllable]>> = Vec::with_capacity(compiled.slots.len());
    for &v in &compiled.slots {
        let list = candidates.get(v).ok_or(Error::UnboundVariable(v))?;
        if list.is_empty() {
            return Err(Error::EmptyCandidates(v));
        }
        if list.iter().any(|c| !Arc::ptr_eq(c.ambient(), &ambient)) {
            return Err(Error::MixedAmbient);
        }
        lists.push(list.iter().map(FpElement::syllables).collect());
    }
    let total: u128 = lists.iter().map(|l| l.len() as u128).product();
    let total_usize = usize::try_from(total).map_err(|_| Error::syntax(0, "search space too large"))?;
    let target = eq.rhs.syllables();

    let decode = |mut i: usize| -> Vec<usize> {
        let mut idx = vec![0; lists.len()];
        for (slot, list) in lists.iter().enumerate().rev() {
            idx[slot] = i % list.len();
            i /= list.len();
        }
        idx
    };
    let satisfies = |i: usize| -> bool {
        let idx = decode(i);
        let values: Vec<&[Syllable]> = idx.iter().enumerate().map(|(s, &k)| lists[s][k]).collect();
        compiled.eval(&ambient, &values) == target
    };

    let hits: Vec<usize> = match mode {
        SearchMode::First => (0..total_usize).into_par_iter().find_first(|&i| satisfies(i)).into_iter().collect(),
        SearchMode::All => (0..total_usize).into_par_iter().filter(|&i| satisfies(i)).collect(),
    };
    if hits.is_empty() {
        return Ok(SolveOutcome::NoSolutionInSet { tuples_checked: total });
    }
    let mut solutions = Vec::with_capacity(hits.len());
    for i in hits {
        let subst: Substitution = decode(i)
            .into_iter()
            .enumerate()
            .map(|(s, k)| (compiled.slots[s], candidates.get(compiled.slots[s]).unwrap()[k].clone()))
            .collect();
        // independent re-check through the public evaluator
        assert!(eq.is_solution(&subst)?, "solver returned a non-solution {subst}");
        solutions.push(subst);
    }
    Ok(SolveOutcome::Solutions(solutions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{ElementId, FiniteGroup};
    use crate::free_product::{FreeProduct, SubgroupPart};
    use crate::words::MixedWord;

    fn c2_c3() -> Arc<FreeProduct> {
        FreeProduct::new(vec![
            FiniteGroup::cyclic(2).unwrap().with_labels(&["a"]).unwrap(),
            FiniteGroup::cyclic(3).unwrap().with_labels(&["b"]).unwrap(),
        ])
        .unwrap()
    }

    fn ball(g: &Arc<FreeProduct>, radius: usize) -> Vec<FpElement> {
        let parts: Vec<SubgroupPart> = (0..2)
            .map(|f| {
                let sub = g.factors()[f].generated_subgroup([ElementId(1)]).unwrap();
                SubgroupPart::new(f, sub, g.identity())
            })
            .collect();
        g.enumerate_ball(&parts, radius).unwrap()
    }

    #[test]
    fn commutator_has_trivial_first_solution() {
        let g = c2_c3();
        let eq = Equation::parse("[x1,x2] = 1", &g).unwrap();
        let cands = Candidates::uniform(&eq, &ball(&g, 1));
        let SolveOutcome::Solutions(sols) = solve_bounded(&eq, &cands, SearchMode::First).unwrap() else {
            panic!("expected a solution");
        };
        assert_eq!(sols.len(), 1);
        assert!(sols[0].get(1).unwrap().is_identity());
        assert!(sols[0].get(2).unwrap().is_identity());
    }

    #[test]
    fn all_mode_matches_naive_double_loop() {
        let g = c2_c3();
        let eq = Equation::parse("x1 x2 x1^-1 = b", &g).unwrap();
        let b = ball(&g, 2);
        let cands = Candidates::uniform(&eq, &b);
        let SolveOutcome::Solutions(sols) = solve_bounded(&eq, &cands, SearchMode::All).unwrap() else {
            panic!("expected solutions");
        };
        let mut naive = Vec::new();
        for u in &b {
            for v in &b {
                if &(u * v) * &u.inverse() == g.generator_element("b").unwrap() {
                    naive.push((u.clone(), v.clone()));
                }
            }
        }
        let got: Vec<(FpElement, FpElement)> =
            sols.iter().map(|s| (s.get(1).unwrap().clone(), s.get(2).unwrap().clone())).collect();
        assert_eq!(got, naive);
    }

    #[test]
    fn unsolvable_in_set() {
        let g = c2_c3();
        let eq = Equation::parse("x1^2 = a", &g).unwrap();
        let cands = Candidates::uniform(&eq, &ball(&g, 3));
        assert!(matches!(solve_bounded(&eq, &cands, SearchMode::First).unwrap(), SolveOutcome::NoSolutionInSet { .. }));
    }

    #[test]
    fn candidate_errors() {
        let g = c2_c3();
        let eq = Equation::parse("x1 x2 = a", &g).unwrap();
        let cands = Candidates::new().with(1, vec![g.identity()]).with(2, vec![]);
        assert_eq!(solve_bounded(&eq, &cands, SearchMode::First).unwrap_err(), Error::EmptyCandidates(2));
        let cands = Candidates::new().with(1, vec![g.identity()]);
        assert_eq!(solve_bounded(&eq, &cands, SearchMode::First).unwrap_err(), Error::UnboundVariable(2));
    }

    #[test]
    fn constant_equation_has_empty_tuple() {
        let g = c2_c3();
        let w = MixedWord::parse("a a", &g).unwrap();
        let eq = Equation::new(w, g.identity()).unwrap();
        assert!(solve_bounded(&eq, &Candidates::new(), SearchMode::First).unwrap().is_solved());
    }
}
