//! The tree a free product acts on: element vertices `g` and coset vertices
//! `gG_i`, with `g` adjacent to `gG_i` for every factor `i`. Vertices are
//! computed from normal forms; the tree itself is never built.
//!
//! Distances are in edges. One syllable of norm is two edges.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::free_product::FpElement;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeVertex {
    Element(FpElement),
    /// `rep·G_factor`, with `rep` free of a trailing `factor` syllable.
    Coset {
        factor: usize,
        rep: FpElement,
    },
}

impl TreeVertex {
    pub fn element(g: FpElement) -> Self {
        TreeVertex::Element(g)
    }

    /// The coset `r·G_i`, canonicalized.
    pub fn coset(factor: usize, r: &FpElement) -> Self {
        TreeVertex::Coset { factor, rep: r.strip_trailing(factor) }
    }

    fn anchor(&self) -> &FpElement {
        match self {
            TreeVertex::Element(g) => g,
            TreeVertex::Coset { rep, .. } => rep,
        }
    }

    /// All adjacent vertices. Element vertices have one neighbour per
    /// factor; coset vertices one per element of their factor.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let ambient = self.anchor().ambient();
        match self {
            TreeVertex::Element(g) => (0..ambient.factors().len()).map(|i| TreeVertex::coset(i, g)).collect(),
            TreeVertex::Coset { factor, rep } => ambient.factors()[*factor]
                .elements()
                .map(|x| TreeVertex::Element(rep * &ambient.embed(*factor, x).expect("element of the factor")))
                .collect(),
        }
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeVertex::Element(g) => write!(f, "E:{g}"),
            TreeVertex::Coset { factor, rep } => write!(f, "C{factor}:{rep}"),
        }
    }
}

fn same_ambient(h: &FpElement, v: &TreeVertex) -> Result<()> {
    if h.same_ambient(v.anchor()) {
        Ok(())
    } else {
        Err(Error::MixedAmbient)
    }
}

/// Left action: `h·g` and `h·rG_i`.
pub fn act(h: &FpElement, v: &TreeVertex) -> Result<TreeVertex> {
    same_ambient(h, v)?;
    Ok(match v {
        TreeVertex::Element(g) => TreeVertex::Element(h * g),
        TreeVertex::Coset { factor, rep } => TreeVertex::coset(*factor, &(h * rep)),
    })
}

pub fn vertex_distance(v: &TreeVertex, w: &TreeVertex) -> Result<usize> {
    same_ambient(v.anchor(), w)?;
    Ok(match (v, w) {
        (TreeVertex::Element(g), TreeVertex::Element(h)) => 2 * (&g.inverse() * h).norm(),
        (TreeVertex::Element(g), TreeVertex::Coset { factor, rep })
        | (TreeVertex::Coset { factor, rep }, TreeVertex::Element(g)) => {
            2 * (&g.inverse() * rep).strip_trailing(*factor).norm() + 1
        }
        (TreeVertex::Coset { factor: i, rep: r }, TreeVertex::Coset { factor: j, rep: q }) => {
            // move the first vertex to G_i, then walk to q'·G_j
            let q1 = (&r.inverse() * q).strip_trailing(*j);
            if i == j && q1.is_identity() {
                0
            } else {
                2 + 2 * q1.strip_leading(*i).norm()
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisInfo {
    pub conjugator: FpElement,
    /// Cyclically reduced, norm at least 2.
    pub core: FpElement,
    pub translation_length_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Elliptic(TreeVertex),
    Hyperbolic(AxisInfo),
}

impl Classification {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Classification::Hyperbolic(_))
    }
}

/// Elliptic elements are reported with one fixed vertex; hyperbolic ones
/// with their axis data.
pub fn classify(u: &FpElement) -> Classification {
    let red = u.cyclic_reduce();
    match red.core.syllables() {
        [] => Classification::Elliptic(TreeVertex::Element(u.ambient().identity())),
        [s] => Classification::Elliptic(TreeVertex::coset(s.factor(), &red.conjugator)),
        _ => Classification::Hyperbolic(AxisInfo {
            translation_length_edges: 2 * red.core.norm(),
            conjugator: red.conjugator,
            core: red.core,
        }),
    }
}

/// Consecutive axis vertices over `2·window + 1` translation periods centred
/// on the conjugator: `E(c Dᵏ p_j)` followed by the coset vertex towards
/// `E(c Dᵏ p_{j+1})`, where `p_j` runs over the proper prefixes of `D`.
pub fn axis_vertices(u: &FpElement, window: usize) -> Result<Vec<TreeVertex>> {
    let Classification::Hyperbolic(axis) = classify(u) else {
        return Err(Error::NotHyperbolic);
    };
    let d = &axis.core;
    let m = d.norm();
    let w = window as i64;
    let mut out = Vec::with_capacity((2 * window + 1) * 2 * m);
    for k in -w..=w {
        let base = &axis.conjugator * &d.pow(k);
        for j in 0..m {
            let g = &base * &d.prefix(j);
            let next = TreeVertex::coset(d.syllables()[j].factor(), &g);
            out.push(TreeVertex::Element(g));
            out.push(next);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisOverlap {
    Disjoint,
    /// Length in edges of the shared segment; 0 for a single shared vertex.
    Edges(usize),
}

/// Overlap of the two axis windows. Two paths in a tree meet in a path, so
/// the shared vertex count minus one is its length.
pub fn axes_intersection(u: &FpElement, v: &FpElement, window: usize) -> Result<AxisOverlap> {
    let first: HashSet<TreeVertex> = axis_vertices(u, window)?.into_iter().collect();
    let common = axis_vertices(v, window)?.into_iter().filter(|x| first.contains(x)).count();
    Ok(match common {
        0 => AxisOverlap::Disjoint,
        n => AxisOverlap::Edges(n - 1),
    })
}
