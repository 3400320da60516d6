//! Free products `G₁ * … * Gₙ` of finite groups and their reduced words.
//!
//! An element is stored in its unique alternating normal form: a sequence of
//! syllables, each a non-identity element of one factor, with neighbouring
//! syllables in different factors. Equality of elements is equality of these
//! sequences, so every operation ends by restoring the normal form.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::finite_group::{ElementId, FiniteGroup, IdSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub factor: usize,
    pub elem: ElementId,
}

/// The ambient group. Always handled behind an `Arc`; elements keep a
/// pointer to it and two elements are only comparable when the pointers agree.
#[derive(Debug)]
pub struct FreeProduct {
    factors: Vec<FiniteGroup>,
    generators: Vec<Generator>,
    by_label: HashMap<String, usize>,
}

pub(crate) fn is_valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    let is_variable = label.len() > 1 && label.starts_with('x') && label[1..].bytes().all(|b| b.is_ascii_digit());
    head_ok && tail_ok && !is_variable
}

impl FreeProduct {
    pub fn new(factors: Vec<FiniteGroup>) -> Result<Arc<Self>> {
        if factors.is_empty() {
            return Err(Error::OrderTooSmall(0));
        }
        let mut generators = Vec::new();
        let mut by_label = HashMap::new();
        for (i, g) in factors.iter().enumerate() {
            if g.order() < 2 {
                return Err(Error::OrderTooSmall(g.order()));
            }
            for (label, elem) in g.generators() {
                if !is_valid_label(label) {
                    return Err(Error::InvalidLabel(label.clone()));
                }
                if by_label.insert(label.clone(), generators.len()).is_some() {
                    return Err(Error::DuplicateLabel(label.clone()));
                }
                generators.push(Generator { label: label.clone(), factor: i, elem: *elem });
            }
        }
        Ok(Arc::new(FreeProduct { factors, generators, by_label }))
    }

    pub fn factors(&self) -> &[FiniteGroup] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> Result<&FiniteGroup> {
        self.factors.get(index).ok_or(Error::BadFactorIndex { index, factors: self.factors.len() })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, label: &str) -> Result<&Generator> {
        self.by_label.get(label).map(|&i| &self.generators[i]).ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn max_factor_order(&self) -> usize {
        self.factors.iter().map(FiniteGroup::order).max().unwrap_or(0)
    }

    pub fn identity(self: &Arc<Self>) -> FpElement {
        FpElement { ambient: Arc::clone(self), syllables: Vec::new() }
    }

    /// The image of a factor element; the identity maps to the empty word.
    pub fn embed(self: &Arc<Self>, factor: usize, elem: ElementId) -> Result<FpElement> {
        self.factor(factor)?.check(elem)?;
        let syllables = if elem.is_identity() { Vec::new() } else { vec![Syllable { factor: factor as u32, elem }] };
        Ok(FpElement { ambient: Arc::clone(self), syllables })
    }

    pub fn generator_element(self: &Arc<Self>, label: &str) -> Result<FpElement> {
        let g = self.generator(label)?;
        self.embed(g.factor, g.elem)
    }

    /// Reduces an arbitrary sequence of factor elements to normal form.
    pub fn normalize(self: &Arc<Self>, raw: &[(usize, ElementId)]) -> Result<FpElement> {
        let mut syllables: Vec<Syllable> = Vec::with_capacity(raw.len());
        for &(factor, elem) in raw {
            self.factor(factor)?.check(elem)?;
            self.push_syllable(&mut syllables, Syllable { factor: factor as u32, elem });
        }
        Ok(FpElement { ambient: Arc::clone(self), syllables })
    }

    #[inline]
    fn push_syllable(&self, acc: &mut Vec<Syllable>, s: Syllable) {
        if s.elem.is_identity() {
            return;
        }
        match acc.last_mut() {
            Some(last) if last.factor == s.factor => {
                let prod = self.factors[s.factor as usize].mul(last.elem, s.elem);
                if prod.is_identity() {
                    acc.pop();
                } else {
                    last.elem = prod;
                }
            }
            _ => acc.push(s),
        }
    }

    /// `acc ← acc · rhs` for a reduced `rhs`, in place.
    pub(crate) fn absorb(&self, acc: &mut Vec<Syllable>, rhs: &[Syllable]) {
        let mut j = 0;
        while j < rhs.len() {
            let Some(last) = acc.last_mut() else { break };
            let s = rhs[j];
            if last.factor != s.factor {
                break;
            }
            j += 1;
            let prod = self.factors[s.factor as usize].mul(last.elem, s.elem);
            if prod.is_identity() {
                acc.pop();
            } else {
                last.elem = prod;
                break;
            }
        }
        acc.extend_from_slice(&rhs[j..]);
    }

    /// `acc ← acc · rhs⁻¹` for a reduced `rhs`, in place.
    pub(crate) fn absorb_inverse(&self, acc: &mut Vec<Syllable>, rhs: &[Syllable]) {
        for s in rhs.iter().rev() {
            let inv = self.factors[s.factor as usize].inv(s.elem);
            self.push_syllable(acc, Syllable { factor: s.factor, elem: inv });
        }
    }

    pub(crate) fn wrap(self: &Arc<Self>, syllables: Vec<Syllable>) -> FpElement {
        FpElement { ambient: Arc::clone(self), syllables }
    }

    /// A uniformly random reduced word with exactly `norm` syllables.
    pub fn random_element<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R, norm: usize) -> FpElement {
        let n = self.factors.len();
        if n == 1 && norm > 1 {
            // a single factor has no words longer than one syllable
            return self.random_element(rng, 1);
        }
        let mut syllables = Vec::with_capacity(norm);
        let mut prev: Option<usize> = None;
        for _ in 0..norm {
            let factor = match prev {
                None => rng.gen_range(0..n),
                Some(p) => {
                    let f = rng.gen_range(0..n - 1);
                    if f >= p {
                        f + 1
                    } else {
                        f
                    }
                }
            };
            let order = self.factors[factor].order();
            let elem = ElementId(rng.gen_range(1..order) as u32);
            syllables.push(Syllable { factor: factor as u32, elem });
            prev = Some(factor);
        }
        self.wrap(syllables)
    }

    /// All products `t₁⋯t_m`, `m ≤ radius`, of nontrivial elements taken from
    /// the conjugated parts with consecutive factors from different parts,
    /// deduplicated by normal form. Order: by `m`, then lexicographic in
    /// (part, element) indices.
    pub fn enumerate_ball(self: &Arc<Self>, parts: &[SubgroupPart], radius: usize) -> Result<Vec<FpElement>> {
        for (i, p) in parts.iter().enumerate() {
            p.validate(self, i)?;
        }
        let letters: Vec<Vec<FpElement>> = parts
            .iter()
            .map(|p| {
                p.subgroup
                    .iter()
                    .filter(|h| !h.is_identity())
                    .map(|&h| {
                        let h = self.wrap(vec![Syllable { factor: p.factor as u32, elem: h }]);
                        h.conjugate(&p.conjugator)
                    })
                    .collect()
            })
            .collect();

        let mut out = vec![self.identity()];
        let mut seen: HashSet<Vec<Syllable>> = HashSet::from([Vec::new()]);
        let mut frontier: Vec<(Vec<Syllable>, Option<usize>)> = vec![(Vec::new(), None)];
        for _ in 0..radius {
            let mut next = Vec::new();
            let mut next_seen: HashSet<(Vec<Syllable>, usize)> = HashSet::new();
            for (value, last) in &frontier {
                for (pi, elems) in letters.iter().enumerate() {
                    if Some(pi) == *last {
                        continue;
                    }
                    for t in elems {
                        let mut v = value.clone();
                        self.absorb(&mut v, &t.syllables);
                        if next_seen.insert((v.clone(), pi)) {
                            if seen.insert(v.clone()) {
                                out.push(self.wrap(v.clone()));
                            }
                            next.push((v, Some(pi)));
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

/// One non-identity factor element inside a reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: u32,
    pub elem: ElementId,
}

impl Syllable {
    pub fn factor(&self) -> usize {
        self.factor as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// `original = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub conjugator: FpElement,
    pub core: FpElement,
}

#[derive(Clone)]
pub struct FpElement {
    ambient: Arc<FreeProduct>,
    syllables: Vec<Syllable>,
}

impl FpElement {
    pub fn ambient(&self) -> &Arc<FreeProduct> {
        &self.ambient
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Syllable length `|u|`.
    pub fn norm(&self) -> usize {
        self.syllables.len()
    }

    pub fn same_ambient(&self, other: &FpElement) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient)
    }

    fn ensure_same(&self, other: &FpElement) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(Error::MixedAmbient)
        }
    }

    pub fn try_mul(&self, other: &FpElement) -> Result<FpElement> {
        self.ensure_same(other)?;
        let mut acc = Vec::with_capacity(self.norm() + other.norm());
        acc.extend_from_slice(&self.syllables);
        self.ambient.absorb(&mut acc, &other.syllables);
        Ok(self.ambient.wrap(acc))
    }

    pub fn inverse(&self) -> FpElement {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable { factor: s.factor, elem: self.ambient.factors[s.factor()].inv(s.elem) })
            .collect();
        self.ambient.wrap(syllables)
    }

    /// `u^k` by square-and-multiply; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> FpElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.ambient.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `g·self·g⁻¹`.
    pub fn try_conjugate(&self, g: &FpElement) -> Result<FpElement> {
        self.ensure_same(g)?;
        let mut acc = g.syllables.clone();
        self.ambient.absorb(&mut acc, &self.syllables);
        self.ambient.absorb_inverse(&mut acc, &g.syllables);
        Ok(self.ambient.wrap(acc))
    }

    /// `g·self·g⁻¹`; panics on elements of different free products.
    pub fn conjugate(&self, g: &FpElement) -> FpElement {
        self.try_conjugate(g).expect("conjugate: elements of different free products")
    }

    /// Strips matching boundary syllables from the front until the first
    /// and last syllables lie in different factors (or the word is short).
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let ambient = &self.ambient;
        let mut core: std::collections::VecDeque<Syllable> = self.syllables.iter().copied().collect();
        let mut conj = Vec::new();
        while core.len() >= 2 && core.front().unwrap().factor == core.back().unwrap().factor {
            let s = core.pop_front().unwrap();
            let last = core.back_mut().unwrap();
            let merged = ambient.factors[s.factor()].mul(last.elem, s.elem);
            if merged.is_identity() {
                core.pop_back();
            } else {
                last.elem = merged;
            }
            conj.push(s);
        }
        CyclicReduction { conjugator: ambient.wrap(conj), core: ambient.wrap(core.into_iter().collect()) }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.norm() < 2 || self.syllables[0].factor != self.syllables[self.norm() - 1].factor
    }

    /// Finite exactly when the element is conjugate into a factor.
    pub fn order(&self) -> Order {
        let core = self.cyclic_reduce().core;
        match core.syllables.as_slice() {
            [] => Order::Finite(1),
            [s] => Order::Finite(self.ambient.factors[s.factor()].element_order(s.elem).unwrap()),
            _ => Order::Infinite,
        }
    }

    pub fn try_commutes_with(&self, other: &FpElement) -> Result<bool> {
        Ok(self.try_mul(other)? == other.try_mul(self)?)
    }

    pub fn commutes_with(&self, other: &FpElement) -> bool {
        self.try_commutes_with(other).expect("commutes_with: elements of different free products")
    }

    /// Drops one trailing syllable from `factor`, giving the canonical
    /// representative of the coset `self·G_factor`.
    pub fn strip_trailing(&self, factor: usize) -> FpElement {
        let mut syllables = self.syllables.clone();
        if syllables.last().is_some_and(|s| s.factor() == factor) {
            syllables.pop();
        }
        self.ambient.wrap(syllables)
    }

    /// Drops one leading syllable from `factor`.
    pub fn strip_leading(&self, factor: usize) -> FpElement {
        let start = usize::from(self.syllables.first().is_some_and(|s| s.factor() == factor));
        self.ambient.wrap(self.syllables[start..].to_vec())
    }

    /// The first `len` syllables.
    pub fn prefix(&self, len: usize) -> FpElement {
        self.ambient.wrap(self.syllables[..len].to_vec())
    }
}

impl PartialEq for FpElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.syllables == other.syllables
    }
}

impl Eq for FpElement {}

impl Hash for FpElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.syllables.hash(state);
    }
}

impl Mul for &FpElement {
    type Output = FpElement;

    fn mul(self, rhs: &FpElement) -> FpElement {
        self.try_mul(rhs).expect("multiply: elements of different free products")
    }
}

impl Mul for FpElement {
    type Output = FpElement;

    fn mul(self, rhs: FpElement) -> FpElement {
        &self * &rhs
    }
}

/// Renders as generator words, `1` for the identity, e.g. `a b^2 a`.
impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for s in &self.syllables {
            for (label, k) in self.ambient.factors[s.factor()].spelling(s.elem) {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                if k == 1 {
                    f.write_str(label)?;
                } else {
                    write!(f, "{label}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpElement({self})")
    }
}

/// A finite subgroup of one factor, conjugated by an ambient element:
/// `conjugator · subgroup · conjugator⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupPart {
    pub factor: usize,
    pub subgroup: IdSet,
    pub conjugator: FpElement,
}

impl SubgroupPart {
    pub fn new(factor: usize, subgroup: IdSet, conjugator: FpElement) -> Self {
        SubgroupPart { factor, subgroup, conjugator }
    }

    /// Checks this part against `ambient`; `position` is reported on a
    /// trivial subgroup.
    pub fn validate(&self, ambient: &Arc<FreeProduct>, position: usize) -> Result<()> {
        let g = ambient.factor(self.factor)?;
        if !Arc::ptr_eq(ambient, &self.conjugator.ambient) {
            return Err(Error::MixedAmbient);
        }
        g.check_subgroup(&self.subgroup)?;
        if self.subgroup.len() < 2 {
            return Err(Error::TrivialSubgroup(position));
        }
        Ok(())
    }
}
