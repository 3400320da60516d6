//! Builders for the two explicit equation families used to refute verbal
//! closedness:
//!
//! * `x₁ᵖ x₂ᵖ ⋯ x_mᵖ = f` for an infinite cyclic subgroup `⟨f⟩`, solvable in
//!   the ambient group by `x_j = s_jᵏʲ` with `k_j·p ≡ 1` modulo the order of
//!   the letter `s_j`;
//! * `f(x)^{k₁N} g(x) f(x)^{k₂N} g(x)⁻¹ = f^{k₁} g f^{k₂} g⁻¹` with
//!   `N = 1 + ∏ #G_i`, solvable by `x_i = s_i`.

use std::sync::Arc;

use super::{Candidates, Equation, Letter, MixedWord, SearchMode, SolveOutcome, Substitution};
use crate::error::{Error, Result};
use crate::finite_group::ElementId;
use crate::free_product::{FpElement, FreeProduct, SubgroupPart};

pub fn least_prime_above(n: u64) -> u64 {
    let is_prime = |p: u64| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    (n + 1..).find(|&p| is_prime(p)).unwrap()
}

fn mod_inverse(p: u64, modulus: u64) -> u64 {
    (1..=modulus).find(|k| (k * p) % modulus == 1 % modulus).expect("p is coprime to the modulus")
}

#[derive(Debug, Clone)]
pub struct Lemma4Construction {
    pub equation: Equation,
    /// Least prime exceeding every factor order.
    pub prime: u64,
    /// The letters `s_j` of the coefficient word, one per variable.
    pub letters: Vec<FpElement>,
    pub exponents: Vec<u64>,
    pub solution: Substitution,
}

/// Builds `x₁ᵖ⋯x_mᵖ = f` from a generator word for `f`.
pub fn build_lemma4(ambient: &Arc<FreeProduct>, f_word: &str) -> Result<Lemma4Construction> {
    let word = MixedWord::parse(f_word, ambient)?;
    if let Some(v) = word.variables().into_iter().next() {
        return Err(Error::syntax(0, format!("coefficient word contains variable x{v}")));
    }
    let letters: Vec<FpElement> = word
        .letters()
        .iter()
        .filter_map(|l| match l {
            Letter::Const(c) if !c.is_identity() => Some(c.clone()),
            _ => None,
        })
        .collect();
    if letters.is_empty() {
        return Err(Error::EmptyWord);
    }
    let f = word.evaluate(&Substitution::new())?;
    let prime = least_prime_above(ambient.max_factor_order() as u64);

    let mut lhs = MixedWord::new(ambient, Vec::new())?;
    let mut exponents = Vec::with_capacity(letters.len());
    let mut solution = Substitution::new();
    for (j, s) in letters.iter().enumerate() {
        let var = j as u32 + 1;
        lhs = lhs.concat(&MixedWord::var(ambient, var).pow(prime as i64))?;
        let order = match s.order() {
            crate::free_product::Order::Finite(k) => k as u64,
            crate::free_product::Order::Infinite => unreachable!("letters are single syllables"),
        };
        let k = mod_inverse(prime, order);
        exponents.push(k);
        solution.insert(var, s.pow(k as i64));
    }
    let equation = Equation::new(lhs, f)?;
    assert!(equation.is_solution(&solution)?, "constructed substitution must solve the equation");
    Ok(Lemma4Construction { equation, prime, letters, exponents, solution })
}

impl Lemma4Construction {
    pub fn coefficient(&self) -> &FpElement {
        &self.equation.rhs
    }

    pub fn verify(&self) -> Result<bool> {
        self.equation.is_solution(&self.solution)
    }

    /// Looks for `x_j = f^{n_j}`, `|n_j| ≤ bound`, solving the equation.
    ///
    /// Exhaustive over all `(2·bound+1)^m` tuples. Powers of one element
    /// commute, so a tuple evaluates to `f^{p·Σn_j}` and only the sum
    /// matters; every sum in `[−m·bound, m·bound]` occurs. Each sum is
    /// evaluated in the group and a hit is confirmed through the equation.
    pub fn search_cyclic_subgroup(&self, bound: i64) -> Result<Option<Vec<i64>>> {
        let f = self.coefficient();
        let p = self.prime as i64;
        let m = self.letters.len() as i64;
        for sum in -m * bound..=m * bound {
            if &f.pow(p * sum) != f {
                continue;
            }
            // spread the sum over the variables, each within the bound
            let mut rest = sum;
            let exps: Vec<i64> = (0..m)
                .map(|_| {
                    let n = rest.clamp(-bound, bound);
                    rest -= n;
                    n
                })
                .collect();
            let subst: Substitution = exps.iter().enumerate().map(|(j, &n)| (j as u32 + 1, f.pow(n))).collect();
            if self.equation.is_solution(&subst)? {
                return Ok(Some(exps));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone)]
pub struct Lemma5Construction {
    pub equation: Equation,
    /// `N = 1 + ∏ #G_i`.
    pub n: u64,
    pub k1: u64,
    pub k2: u64,
    pub f: FpElement,
    pub g: FpElement,
    pub solution: Substitution,
}

/// Builds `f(x)^{k₁N} g(x) f(x)^{k₂N} g(x)⁻¹ = f^{k₁} g f^{k₂} g⁻¹` where
/// the variable `x_i` stands for the `i`-th ambient generator.
pub fn build_lemma5(
    ambient: &Arc<FreeProduct>,
    f_word: &str,
    g_word: &str,
    k1: u64,
    k2: u64,
) -> Result<Lemma5Construction> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::syntax(0, "exponents k1, k2 must be positive"));
    }
    let n = ambient
        .factors()
        .iter()
        .try_fold(1u64, |acc, g| acc.checked_mul(g.order() as u64))
        .and_then(|p| p.checked_add(1))
        .ok_or_else(|| Error::syntax(0, "product of factor orders overflows"))?;
    let f = MixedWord::parse(f_word, ambient)?.evaluate(&Substitution::new())?;
    let g = MixedWord::parse(g_word, ambient)?.evaluate(&Substitution::new())?;
    let fx = MixedWord::parse_as_variables(f_word, ambient)?;
    let gx = MixedWord::parse_as_variables(g_word, ambient)?;

    let e1 = i64::try_from(k1 * n).map_err(|_| Error::syntax(0, "exponent overflow"))?;
    let e2 = i64::try_from(k2 * n).map_err(|_| Error::syntax(0, "exponent overflow"))?;
    let lhs = fx.pow(e1).concat(&gx)?.concat(&fx.pow(e2))?.concat(&gx.inverse())?;
    let rhs = &(&(&f.pow(k1 as i64) * &g) * &f.pow(k2 as i64)) * &g.inverse();
    let equation = Equation::new(lhs, rhs)?;

    let solution: Substitution = ambient
        .generators()
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((i as u32 + 1, ambient.embed(s.factor, s.elem)?)))
        .collect::<Result<_>>()?;
    assert!(equation.is_solution(&solution)?, "generator substitution must solve the equation");
    Ok(Lemma5Construction { equation, n, k1, k2, f, g, solution })
}

impl Lemma5Construction {
    pub fn verify(&self) -> Result<bool> {
        self.equation.is_solution(&self.solution)
    }

    /// `a = f^{k₁}`.
    pub fn a(&self) -> FpElement {
        self.f.pow(self.k1 as i64)
    }

    /// `b = g f^{k₂} g⁻¹`.
    pub fn b(&self) -> FpElement {
        self.f.pow(self.k2 as i64).conjugate(&self.g)
    }

    /// The parts `⟨f^{k₁}⟩` and `g⟨f^{k₂}⟩g⁻¹` when `f` lies in a single
    /// factor and both powers are nontrivial.
    pub fn subgroup_parts(&self) -> Option<Vec<SubgroupPart>> {
        let [s] = self.f.syllables() else { return None };
        let ambient = self.f.ambient();
        let factor = &ambient.factors()[s.factor()];
        let p1 = factor.pow(s.elem, self.k1 as i64);
        let p2 = factor.pow(s.elem, self.k2 as i64);
        if p1 == ElementId::IDENTITY || p2 == ElementId::IDENTITY {
            return None;
        }
        let h1 = factor.generated_subgroup([p1]).ok()?;
        let h2 = factor.generated_subgroup([p2]).ok()?;
        Some(vec![
            SubgroupPart::new(s.factor(), h1, ambient.identity()),
            SubgroupPart::new(s.factor(), h2, self.g.clone()),
        ])
    }

    /// Bounded search for a solution inside `H₁ * H₂^g`, every variable
    /// ranging over the ball of the given radius.
    pub fn search_subgroup(&self, radius: usize) -> Result<Option<SolveOutcome>> {
        let Some(parts) = self.subgroup_parts() else { return Ok(None) };
        let ball = self.f.ambient().enumerate_ball(&parts, radius)?;
        let cands = Candidates::uniform(&self.equation, &ball);
        solve_and_wrap(&self.equation, &cands)
    }
}

fn solve_and_wrap(eq: &Equation, cands: &Candidates) -> Result<Option<SolveOutcome>> {
    super::solve_bounded(eq, cands, SearchMode::First).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::FiniteGroup;

    fn c2_c3() -> Arc<FreeProduct> {
        FreeProduct::new(vec![
            FiniteGroup::cyclic(2).unwrap().with_labels(&["a"]).unwrap(),
            FiniteGroup::cyclic(3).unwrap().with_labels(&["b"]).unwrap(),
        ])
        .unwrap()
    }

    fn z6_c2() -> Arc<FreeProduct> {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        FreeProduct::new(vec![
            FiniteGroup::direct_product(&c2.clone().with_labels(&["a"]).unwrap(), &c3.with_labels(&["b"]).unwrap())
                .unwrap(),
            c2.with_labels(&["c"]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn primes() {
        assert_eq!(least_prime_above(2), 3);
        assert_eq!(least_prime_above(3), 5);
        assert_eq!(least_prime_above(6), 7);
        assert_eq!(least_prime_above(7), 11);
        assert_eq!(mod_inverse(5, 3), 2);
        assert_eq!(mod_inverse(7, 2), 1);
    }

    #[test]
    fn lemma4_c2_c3() {
        let g = c2_c3();
        let c = build_lemma4(&g, "a b").unwrap();
        assert_eq!(c.prime, 5);
        assert_eq!(c.exponents, vec![1, 2]);
        assert_eq!(c.solution.get(2).unwrap().to_string(), "b^2");
        assert!(c.verify().unwrap());
        assert_eq!(c.equation.lhs.to_string(), "x1 x1 x1 x1 x1 x2 x2 x2 x2 x2");

        let c = build_lemma4(&g, "a").unwrap();
        assert_eq!((c.prime, c.exponents.clone()), (5, vec![1]));
        assert_eq!(c.solution.get(1).unwrap(), &g.generator_element("a").unwrap());
    }

    #[test]
    fn lemma4_s3_c2() {
        let g = FreeProduct::new(vec![
            FiniteGroup::dihedral_reflections(3).unwrap(),
            FiniteGroup::cyclic(2).unwrap().with_labels(&["c"]).unwrap(),
        ])
        .unwrap();
        let c = build_lemma4(&g, "a b c").unwrap();
        assert_eq!(c.prime, 7);
        assert_eq!(c.exponents, vec![1, 1, 1]);
        assert!(c.verify().unwrap());
    }

    #[test]
    fn lemma4_errors() {
        let g = c2_c3();
        assert_eq!(build_lemma4(&g, "1").unwrap_err(), Error::EmptyWord);
        assert_eq!(build_lemma4(&g, "a q").unwrap_err(), Error::UnknownGenerator("q".into()));
    }

    #[test]
    fn lemma4_no_solution_in_cyclic_subgroup() {
        let g = c2_c3();
        let c = build_lemma4(&g, "a b").unwrap();
        assert_eq!(c.search_cyclic_subgroup(20).unwrap(), None);
    }

    #[test]
    fn cyclic_search_agrees_with_tuple_enumeration() {
        let g = c2_c3();
        for word in ["a b", "a", "b a b", "a b^2 a"] {
            let c = build_lemma4(&g, word).unwrap();
            let f = c.coefficient().clone();
            let m = c.letters.len() as u32;
            let bound = 3i64;
            let width = (2 * bound + 1) as usize;
            let brute = (0..width.pow(m)).any(|mut i| {
                let subst: Substitution = (1..=m)
                    .map(|v| {
                        let n = (i % width) as i64 - bound;
                        i /= width;
                        (v, f.pow(n))
                    })
                    .collect();
                c.equation.is_solution(&subst).unwrap()
            });
            let found = c.search_cyclic_subgroup(bound).unwrap();
            assert_eq!(found.is_some(), brute, "{word}");
        }
        // a has order 2, so x1 = a solves x1^5 = a inside <a>
        assert!(build_lemma4(&g, "a").unwrap().search_cyclic_subgroup(3).unwrap().is_some());
    }

    #[test]
    fn lemma5_desk_instance() {
        let g = z6_c2();
        let c = build_lemma5(&g, "a b", "c", 3, 2).unwrap();
        assert_eq!(c.n, 13);
        assert_eq!(c.equation.rhs.to_string(), "a c b^2 c");
        assert_eq!(c.equation.rhs.norm(), 4);
        assert_eq!(c.equation.rhs, &c.a() * &c.b());
        assert!(c.verify().unwrap());
        let parts = c.subgroup_parts().unwrap();
        assert_eq!(parts[0].subgroup.len(), 2);
        assert_eq!(parts[1].subgroup.len(), 3);
    }

    #[test]
    fn lemma5_rejects_zero_exponent() {
        assert!(build_lemma5(&z6_c2(), "a b", "c", 0, 2).is_err());
    }
}
