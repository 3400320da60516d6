//! Finite groups stored as validated Cayley tables.
//!
//! Elements are dense ids `0..order` with the identity pinned at id 0. Every
//! constructor funnels through [`FiniteGroup::from_cayley_table`], so the
//! group axioms are checked once, eagerly, for every group in the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Index of an element inside one [`FiniteGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type IdSet = BTreeSet<ElementId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<ElementId>,
    inverses: Vec<ElementId>,
    element_orders: Vec<u32>,
    generators: Vec<(String, ElementId)>,
    // shortest spelling of each element as generator indices, BFS order
    spellings: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from `table[x][y] = x·y`. If the identity is not at
    /// id 0 the ids 0 and e are swapped everywhere, generators included.
    pub fn from_cayley_table(table: &[Vec<usize>], generators: &[(&str, usize)]) -> Result<Self> {
        let n = table.len();
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotLatinSquare(format!("row {i} has length {} (expected {n})", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::NotLatinSquare(format!("entry {bad} in row {i} is out of range")));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[table[i][j]], true) {
                    return Err(Error::NotLatinSquare(format!("row {i} repeats {}", table[i][j])));
                }
                if std::mem::replace(&mut seen_col[table[j][i]], true) {
                    return Err(Error::NotLatinSquare(format!("column {i} repeats {}", table[j][i])));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(Error::NotAssociative(x, y, z));
                    }
                }
            }
        }
        let e = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)).ok_or(Error::NoIdentity)?;

        let relabel = |x: usize| -> usize {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut flat = vec![ElementId(0); n * n];
        for x in 0..n {
            for y in 0..n {
                flat[relabel(x) * n + relabel(y)] = ElementId(relabel(table[x][y]) as u32);
            }
        }

        let mut gens = Vec::with_capacity(generators.len());
        for &(label, id) in generators {
            if id >= n {
                return Err(Error::ForeignElement { id, order: n });
            }
            gens.push((label.to_string(), ElementId(relabel(id) as u32)));
        }

        let mut inverses = vec![ElementId(0); n];
        for x in 0..n {
            let inv = (0..n).find(|&y| flat[x * n + y].is_identity()).expect("latin square row contains identity");
            inverses[x] = ElementId(inv as u32);
        }

        let mut element_orders = vec![0u32; n];
        for x in 0..n {
            let mut k = 1u32;
            let mut acc = x;
            while acc != 0 {
                acc = flat[acc * n + x].index();
                k += 1;
            }
            element_orders[x] = k;
        }

        let mut spellings: Vec<Option<Vec<usize>>> = vec![None; n];
        spellings[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for (gi, (_, g)) in gens.iter().enumerate() {
                let y = flat[x * n + g.index()].index();
                if spellings[y].is_none() {
                    let mut word = spellings[x].clone().unwrap();
                    word.push(gi);
                    spellings[y] = Some(word);
                    queue.push_back(y);
                    reached += 1;
                }
            }
        }
        if reached != n {
            return Err(Error::GeneratorsDoNotGenerate { generated: reached, order: n });
        }

        Ok(FiniteGroup {
            name: format!("table{n}"),
            order: n,
            table: flat,
            inverses,
            element_orders,
            generators: gens,
            spellings: spellings.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Closes `generators` under right multiplication (breadth first) and
    /// builds the table. Element ids follow discovery order.
    fn from_closure<T, F>(name: String, identity: T, generators: Vec<(String, T)>, mul: F) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut cursor = 0;
        while cursor < elements.len() {
            let x = elements[cursor].clone();
            for (_, g) in &generators {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            cursor += 1;
        }
        let table: Vec<Vec<usize>> =
            elements.iter().map(|x| elements.iter().map(|y| index[&mul(x, y)]).collect()).collect();
        let gens: Vec<(&str, usize)> = generators.iter().map(|(l, g)| (l.as_str(), index[g])).collect();
        let mut group = Self::from_cayley_table(&table, &gens)?;
        group.name = name;
        Ok(group)
    }

    /// Cyclic group of order `n` generated by `g`; id `k` is `g^k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        Self::from_closure(format!("C{n}"), 0usize, vec![("g".into(), 1usize)], |x, y| (x + y) % n)
    }

    /// Dihedral group of order `2n` generated by two reflections `a`, `b`
    /// whose product has order `n`. For `n = 2` this is the Klein four group.
    pub fn dihedral_reflections(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        // (k, f) stands for r^k s^f with s r s = r^-1
        let mul = move |&(k1, f1): &(usize, bool), &(k2, f2): &(usize, bool)| {
            let k = if f1 { (k1 + n - k2) % n } else { (k1 + k2) % n };
            (k, f1 ^ f2)
        };
        Self::from_closure(format!("D{n}"), (0, false), vec![("a".into(), (0, true)), ("b".into(), (1, true))], mul)
    }

    /// `A × B` with element `(x, y)` at id `x·#B + y`. Generators are those
    /// of `A` followed by those of `B`, labels kept.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|p| {
                (0..n)
                    .map(|q| {
                        let x = a.mul(ElementId((p / nb) as u32), ElementId((q / nb) as u32));
                        let y = b.mul(ElementId((p % nb) as u32), ElementId((q % nb) as u32));
                        x.index() * nb + y.index()
                    })
                    .collect()
            })
            .collect();
        let gens: Vec<(&str, usize)> = a
            .generators
            .iter()
            .map(|(l, g)| (l.as_str(), g.index() * nb))
            .chain(b.generators.iter().map(|(l, g)| (l.as_str(), g.index())))
            .collect();
        let mut group = Self::from_cayley_table(&table, &gens)?;
        group.name = format!("({} x {})", a.name, b.name);
        Ok(group)
    }

    /// Returns the same group with its generators renamed in order.
    pub fn with_labels<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.generators.len() {
            return Err(Error::InvalidLabel(format!(
                "{} labels given for {} generators of {}",
                labels.len(),
                self.generators.len(),
                self.name
            )));
        }
        for ((label, _), new) in self.generators.iter_mut().zip(labels) {
            *label = new.as_ref().to_string();
        }
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElementId {
        ElementId::IDENTITY
    }

    pub fn generators(&self) -> &[(String, ElementId)] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order as u32).map(ElementId)
    }

    pub fn contains(&self, x: ElementId) -> bool {
        x.index() < self.order
    }

    pub fn check(&self, x: ElementId) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement { id: x.index(), order: self.order })
        }
    }

    /// Product `x·y`. Ids must belong to this group.
    #[inline]
    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        self.table[x.index() * self.order + y.index()]
    }

    #[inline]
    pub fn inv(&self, x: ElementId) -> ElementId {
        self.inverses[x.index()]
    }

    pub fn pow(&self, x: ElementId, k: i64) -> ElementId {
        let ord = self.element_orders[x.index()] as i64;
        let e = k.rem_euclid(ord);
        (0..e).fold(ElementId::IDENTITY, |acc, _| self.mul(acc, x))
    }

    /// Least `k ≥ 1` with `x^k = 1`.
    pub fn element_order(&self, x: ElementId) -> Result<u32> {
        self.check(x)?;
        Ok(self.element_orders[x.index()])
    }

    /// The Cayley table as plain rows of ids.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| (0..self.order).map(|y| self.table[x * self.order + y].index()).collect()).collect()
    }

    /// Shortest spelling of `x` as `(generator label, exponent)` runs.
    pub fn spelling(&self, x: ElementId) -> Vec<(&str, u32)> {
        let mut runs: Vec<(&str, u32)> = Vec::new();
        for &gi in &self.spellings[x.index()] {
            let label = self.generators[gi].0.as_str();
            match runs.last_mut() {
                Some((l, k)) if *l == label => *k += 1,
                _ => runs.push((label, 1)),
            }
        }
        runs
    }

    /// Closure of `gens ∪ {1}` under multiplication.
    pub fn generated_subgroup<I>(&self, gens: I) -> Result<IdSet>
    where
        I: IntoIterator<Item = ElementId>,
    {
        let gens: Vec<ElementId> = gens.into_iter().collect();
        for &g in &gens {
            self.check(g)?;
        }
        let mut set = IdSet::from([ElementId::IDENTITY]);
        let mut frontier = vec![ElementId::IDENTITY];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(set)
    }

    pub fn check_subgroup(&self, set: &IdSet) -> Result<()> {
        for &x in set {
            self.check(x)?;
        }
        if !set.contains(&ElementId::IDENTITY) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &x in set {
            for &y in set {
                let xy = self.mul(x, y);
                if !set.contains(&xy) {
                    return Err(Error::NotASubgroup(format!("{x}·{y} = {xy} leaves the set")));
                }
            }
        }
        Ok(())
    }

    /// `g·H·g⁻¹`.
    pub fn conjugate_subgroup(&self, subgroup: &IdSet, g: ElementId) -> Result<IdSet> {
        self.check(g)?;
        self.check_subgroup(subgroup)?;
        let gi = self.inv(g);
        Ok(subgroup.iter().map(|&h| self.mul(self.mul(g, h), gi)).collect())
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}
