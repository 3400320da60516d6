//! Words over variables and constants (elements of `F(X) * G`), equations
//! `w(x) = h`, bounded solving, and builders for the explicit equations used
//! to refute verbal closedness.

mod constructions;
mod parse;
mod solve;
mod theorem2;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free_product::{FpElement, FreeProduct, Syllable};

pub use constructions::{build_lemma4, build_lemma5, least_prime_above, Lemma4Construction, Lemma5Construction};
pub use solve::{solve_bounded, Candidates, SearchMode, SolveOutcome};
pub use theorem2::{theorem2_report, CaseReport, LinearForm, Mismatch, Theorem2Report, PRINTED_CASES, THEOREM2_WORD};

use parse::{expand, parse_expr, Expr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    Var { index: u32, inverse: bool },
    Const(FpElement),
}

impl Letter {
    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Var { index, inverse } => Letter::Var { index: *index, inverse: !inverse },
            Letter::Const(c) => Letter::Const(c.inverse()),
        }
    }
}

/// A word in variables `x1, x2, …` and constants from one free product.
#[derive(Debug, Clone)]
pub struct MixedWord {
    ambient: Arc<FreeProduct>,
    letters: Vec<Letter>,
}

impl PartialEq for MixedWord {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) && self.letters == other.letters
    }
}

impl Eq for MixedWord {}

impl MixedWord {
    pub fn new(ambient: &Arc<FreeProduct>, letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            if let Letter::Const(c) = l {
                if !Arc::ptr_eq(c.ambient(), ambient) {
                    return Err(Error::MixedAmbient);
                }
            }
        }
        Ok(MixedWord { ambient: Arc::clone(ambient), letters })
    }

    /// Parses the word grammar; generator labels resolve in `ambient`.
    pub fn parse(text: &str, ambient: &Arc<FreeProduct>) -> Result<Self> {
        let expr = parse_expr(text)?;
        let letters = expand(
            &expr,
            &mut |e: &Expr| match e {
                Expr::Var(i) => Ok(vec![Letter::Var { index: *i, inverse: false }]),
                Expr::Gen { label, .. } => Ok(vec![Letter::Const(ambient.generator_element(label)?)]),
                _ => unreachable!("expand only hands leaves to the callback"),
            },
            &Letter::inverse,
        )?;
        Ok(MixedWord { ambient: Arc::clone(ambient), letters })
    }

    /// Parses a word over generator labels in which every generator `s_i`
    /// is replaced by the variable `x_i` (1-based, declaration order).
    pub fn parse_as_variables(text: &str, ambient: &Arc<FreeProduct>) -> Result<Self> {
        let expr = parse_expr(text)?;
        let letters = expand(
            &expr,
            &mut |e: &Expr| match e {
                Expr::Gen { label, .. } => {
                    let pos = ambient
                        .generators()
                        .iter()
                        .position(|g| g.label == *label)
                        .ok_or_else(|| Error::UnknownGenerator(label.clone()))?;
                    Ok(vec![Letter::Var { index: pos as u32 + 1, inverse: false }])
                }
                Expr::Var(i) => Err(Error::syntax(0, format!("variable x{i} where a generator word was expected"))),
                _ => unreachable!("expand only hands leaves to the callback"),
            },
            &Letter::inverse,
        )?;
        Ok(MixedWord { ambient: Arc::clone(ambient), letters })
    }

    pub fn var(ambient: &Arc<FreeProduct>, index: u32) -> Self {
        MixedWord { ambient: Arc::clone(ambient), letters: vec![Letter::Var { index, inverse: false }] }
    }

    pub fn constant(value: &FpElement) -> Self {
        MixedWord { ambient: Arc::clone(value.ambient()), letters: vec![Letter::Const(value.clone())] }
    }

    pub fn ambient(&self) -> &Arc<FreeProduct> {
        &self.ambient
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { index, .. } => Some(*index),
                Letter::Const(_) => None,
            })
            .collect()
    }

    pub fn concat(&self, other: &MixedWord) -> Result<MixedWord> {
        if !Arc::ptr_eq(&self.ambient, &other.ambient) {
            return Err(Error::MixedAmbient);
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(MixedWord { ambient: Arc::clone(&self.ambient), letters })
    }

    pub fn inverse(&self) -> MixedWord {
        MixedWord {
            ambient: Arc::clone(&self.ambient),
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> MixedWord {
        let unit = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(unit.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend(unit.letters.iter().cloned());
        }
        MixedWord { ambient: Arc::clone(&self.ambient), letters }
    }

    /// Substitutes and reduces.
    pub fn evaluate(&self, subst: &Substitution) -> Result<FpElement> {
        let compiled = self.compile();
        let mut values = Vec::with_capacity(compiled.slots.len());
        for &v in &compiled.slots {
            let value = subst.get(v).ok_or(Error::UnboundVariable(v))?;
            if !Arc::ptr_eq(value.ambient(), &self.ambient) {
                return Err(Error::MixedAmbient);
            }
            values.push(value.syllables());
        }
        Ok(self.ambient.wrap(compiled.eval(&self.ambient, &values)))
    }

    pub(crate) fn compile(&self) -> CompiledWord {
        let slots: Vec<u32> = self.variables().into_iter().collect();
        let letters = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Var { index, inverse } => {
                    CompiledLetter::Slot { slot: slots.binary_search(index).unwrap(), inverse: *inverse }
                }
                Letter::Const(c) => CompiledLetter::Const(c.syllables().to_vec()),
            })
            .collect();
        CompiledWord { slots, letters }
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                Letter::Var { index, inverse: false } => write!(f, "x{index}")?,
                Letter::Var { index, inverse: true } => write!(f, "x{index}^-1")?,
                Letter::Const(c) => {
                    let word = c.to_string();
                    if word.contains(' ') {
                        write!(f, "({word})")?
                    } else {
                        f.write_str(&word)?
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CompiledLetter {
    Slot { slot: usize, inverse: bool },
    Const(Vec<Syllable>),
}

/// A word with variables resolved to dense slots, for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct CompiledWord {
    pub(crate) slots: Vec<u32>,
    letters: Vec<CompiledLetter>,
}

impl CompiledWord {
    pub(crate) fn eval(&self, ambient: &FreeProduct, values: &[&[Syllable]]) -> Vec<Syllable> {
        let mut acc = Vec::new();
        for l in &self.letters {
            match l {
                CompiledLetter::Slot { slot, inverse: false } => ambient.absorb(&mut acc, values[*slot]),
                CompiledLetter::Slot { slot, inverse: true } => ambient.absorb_inverse(&mut acc, values[*slot]),
                CompiledLetter::Const(c) => ambient.absorb(&mut acc, c),
            }
        }
        acc
    }
}

/// `lhs = rhs`, i.e. `w(x)·h⁻¹ = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: MixedWord,
    pub rhs: FpElement,
}

impl Equation {
    pub fn new(lhs: MixedWord, rhs: FpElement) -> Result<Self> {
        if !Arc::ptr_eq(lhs.ambient(), rhs.ambient()) {
            return Err(Error::MixedAmbient);
        }
        Ok(Equation { lhs, rhs })
    }

    /// Parses `lhs = rhs`; the right side must be free of variables.
    pub fn parse(text: &str, ambient: &Arc<FreeProduct>) -> Result<Self> {
        let (l, r) = text.split_once('=').ok_or_else(|| Error::syntax(text.len(), "expected `=` in equation"))?;
        let lhs = MixedWord::parse(l, ambient)?;
        let rhs_word = MixedWord::parse(r, ambient).map_err(|e| shift_offset(e, l.len() + 1))?;
        if let Some(v) = rhs_word.variables().into_iter().next() {
            return Err(Error::syntax(l.len() + 1, format!("variable x{v} on the right-hand side")));
        }
        let rhs = rhs_word.evaluate(&Substitution::new())?;
        Ok(Equation { lhs, rhs })
    }

    pub fn is_solution(&self, subst: &Substitution) -> Result<bool> {
        Ok(self.lhs.evaluate(subst)? == self.rhs)
    }
}

fn shift_offset(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { offset, message } => Error::Syntax { offset: offset + by, message },
        other => other,
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Values for variables, keyed by variable index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<u32, FpElement>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn with(mut self, index: u32, value: FpElement) -> Self {
        self.0.insert(index, value);
        self
    }

    pub fn insert(&mut self, index: u32, value: FpElement) {
        self.0.insert(index, value);
    }

    pub fn get(&self, index: u32) -> Option<&FpElement> {
        self.0.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &FpElement)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(u32, FpElement)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (u32, FpElement)>>(iter: T) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("x{k}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
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

    #[test]
    fn parse_variables() {
        let g = c2_c3();
        let w = MixedWord::parse("x1 x2^-1", &g).unwrap();
        assert_eq!(w.letters(), &[Letter::Var { index: 1, inverse: false }, Letter::Var { index: 2, inverse: true }]);
        assert!(matches!(MixedWord::parse("x1^", &g), Err(Error::Syntax { .. })));
        assert_eq!(MixedWord::parse("x1 q", &g).unwrap_err(), Error::UnknownGenerator("q".into()));
    }

    #[test]
    fn commutator_expansion_matches_manual_word() {
        let g = c2_c3();
        let w = MixedWord::parse("[x1, x2^x3]", &g).unwrap();
        let manual = MixedWord::parse("x1 x3 x2 x3^-1 x1^-1 x3 x2^-1 x3^-1", &g).unwrap();
        assert_eq!(w, manual);
    }

    #[test]
    fn evaluate_examples() {
        let g = c2_c3();
        let a = g.generator_element("a").unwrap();
        let b = g.generator_element("b").unwrap();
        let s = Substitution::new().with(1, a.clone()).with(2, b.clone());
        assert_eq!(MixedWord::parse("x1 x2", &g).unwrap().evaluate(&s).unwrap(), &a * &b);

        let s = s.with(3, g.identity());
        let v = MixedWord::parse("[x1, x2^x3]", &g).unwrap().evaluate(&s).unwrap();
        assert_eq!(v.to_string(), "a b a b^2");

        let err = MixedWord::parse("x1 x4", &g).unwrap().evaluate(&s).unwrap_err();
        assert_eq!(err, Error::UnboundVariable(4));
        let other = c2_c3();
        let bad = Substitution::new().with(1, other.identity());
        assert_eq!(MixedWord::parse("x1", &g).unwrap().evaluate(&bad).unwrap_err(), Error::MixedAmbient);
    }

    #[test]
    fn constants_and_identity_atom() {
        let g = c2_c3();
        let w = MixedWord::parse("a^3 b^-1 1 b", &g).unwrap();
        assert_eq!(w.evaluate(&Substitution::new()).unwrap(), g.generator_element("a").unwrap());
        let eq = Equation::parse("[x1,x2] = 1", &g).unwrap();
        assert!(eq.rhs.is_identity());
        assert!(matches!(Equation::parse("x1 = x2", &g), Err(Error::Syntax { .. })));
        assert!(matches!(Equation::parse("x1 x2", &g), Err(Error::Syntax { .. })));
    }

    #[test]
    fn generator_words_as_variables() {
        let g = c2_c3();
        let w = MixedWord::parse_as_variables("a b^2", &g).unwrap();
        assert_eq!(w.to_string(), "x1 x2 x2");
    }
}
