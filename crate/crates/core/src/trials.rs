//! Seeded randomized drivers shared by the command line and the test suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bass_serre::{act, axes_intersection, axis_vertices, vertex_distance, AxisOverlap, TreeVertex};
use crate::closure::{check_condition2, KuroshData};
use crate::error::Result;
use crate::finite_group::{ElementId, IdSet};
use crate::free_product::{FpElement, FreeProduct, SubgroupPart};
use crate::words::build_lemma4;

#[derive(Debug, Clone, Default, Serialize)]
pub struct TrialReport {
    pub trials: usize,
    /// Trials where the extra check applied (infinite order for the
    /// power-equation trials).
    pub special: usize,
    /// Smallest observed margin over the bound, where one applies.
    pub min_slack: Option<i64>,
    pub failures: Vec<String>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn slack(&mut self, s: i64) {
        self.min_slack = Some(self.min_slack.map_or(s, |m| m.min(s)));
    }
}

/// Random coefficient words of norm 1 to 5: the constructed substitution
/// must solve `x₁ᵖ⋯x_mᵖ = f`, and for `f` of infinite order no tuple of
/// powers `f^{n_j}`, `|n_j| ≤ 20`, may.
pub fn lemma4_trials(ambient: &Arc<FreeProduct>, trials: usize, seed: u64) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, ..Default::default() };
    for _ in 0..trials {
        let norm = rng.gen_range(1..=5);
        let f = ambient.random_element(&mut rng, norm);
        let word = f.to_string();
        let c = build_lemma4(ambient, &word)?;
        if c.coefficient() != &f {
            report.failures.push(format!("{word}: coefficient parsed as {}", c.coefficient()));
        }
        if !c.verify()? {
            report.failures.push(format!("{word}: constructed substitution {} fails", c.solution));
        }
        if !f.order().is_finite() {
            report.special += 1;
            if let Some(exps) = c.search_cyclic_subgroup(20)? {
                report.failures.push(format!("{word}: solved inside <f> by exponents {exps:?}"));
            }
        }
    }
    Ok(report)
}

/// A cyclically reduced `A` of infinite order and norm at most 6, a
/// conjugator `g` with `A` and `A^g` not commuting, and powers in `[2, 5]`.
#[derive(Debug, Clone)]
pub struct Lemma7Sample {
    pub a: FpElement,
    pub g: FpElement,
    pub n1: u32,
    pub n2: u32,
}

impl Lemma7Sample {
    pub fn draw<R: Rng + ?Sized>(ambient: &Arc<FreeProduct>, rng: &mut R) -> Self {
        loop {
            let norm = rng.gen_range(2..=6);
            let a = ambient.random_element(rng, norm).cyclic_reduce().core;
            if a.norm() < 2 {
                continue;
            }
            let gnorm = rng.gen_range(0..=6);
            let g = ambient.random_element(rng, gnorm);
            if a.commutes_with(&a.conjugate(&g)) {
                continue;
            }
            return Lemma7Sample { a, g, n1: rng.gen_range(2..=5), n2: rng.gen_range(2..=5) };
        }
    }

    pub fn conjugate(&self) -> FpElement {
        self.a.conjugate(&self.g)
    }

    /// `A^{N₁} (A^g)^{N₂}`.
    pub fn product(&self) -> FpElement {
        &self.a.pow(self.n1 as i64) * &self.conjugate().pow(self.n2 as i64)
    }

    /// `(N₁ + N₂ − 4)·|A|`, in syllables.
    pub fn norm_bound(&self) -> i64 {
        (self.n1 as i64 + self.n2 as i64 - 4) * self.a.norm() as i64
    }
}

/// The cyclic core of `A^{N₁}(A^g)^{N₂}` must be longer than
/// `(N₁ + N₂ − 4)·|A|`.
pub fn lemma7_trials(ambient: &Arc<FreeProduct>, trials: usize, seed: u64) -> TrialReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, ..Default::default() };
    for _ in 0..trials {
        let s = Lemma7Sample::draw(ambient, &mut rng);
        let core = s.product().cyclic_reduce().core.norm() as i64;
        let slack = core - s.norm_bound();
        report.slack(slack);
        if slack <= 0 {
            report.failures.push(format!(
                "A={} g={} N1={} N2={}: core norm {core} <= {}",
                s.a,
                s.g,
                s.n1,
                s.n2,
                s.norm_bound()
            ));
        }
    }
    report
}

/// The axes of `A` and `A^g` share fewer than `4|A|` edges, and every
/// sampled vertex is moved by `A^{N₁}(A^g)^{N₂}` at least
/// `2((N₁ + N₂ − 4)|A| + 2)` edges.
pub fn axis_trials(ambient: &Arc<FreeProduct>, trials: usize, seed: u64) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, ..Default::default() };
    for _ in 0..trials {
        let s = Lemma7Sample::draw(ambient, &mut rng);
        let ag = s.conjugate();
        let len = s.a.norm();
        let window = 4 * len + s.g.norm();
        let tag = format!("A={} g={} N1={} N2={}", s.a, s.g, s.n1, s.n2);
        if let AxisOverlap::Edges(e) = axes_intersection(&s.a, &ag, window)? {
            report.special += 1;
            if e >= 4 * len {
                report.failures.push(format!("{tag}: axes share {e} edges"));
            }
        }

        let w = s.product();
        let bound = 2 * (s.norm_bound() + 2);
        let translation = 2 * w.cyclic_reduce().core.norm() as i64;
        if translation < bound {
            report.failures.push(format!("{tag}: translation length {translation} < {bound}"));
        }
        let mut sample: Vec<TreeVertex> = vec![TreeVertex::element(ambient.identity())];
        sample.extend((0..ambient.factors().len()).map(|i| TreeVertex::coset(i, &ambient.identity())));
        sample.extend(axis_vertices(&s.a, 1)?);
        sample.extend(axis_vertices(&ag, 1)?);
        for _ in 0..8 {
            let norm = rng.gen_range(0..=8);
            let x = ambient.random_element(&mut rng, norm);
            let i = rng.gen_range(0..=ambient.factors().len());
            sample.push(if i == 0 { TreeVertex::element(x) } else { TreeVertex::coset(i - 1, &x) });
        }
        let mut least = i64::MAX;
        for v in &sample {
            least = least.min(vertex_distance(v, &act(&w, v)?)? as i64);
        }
        report.slack(least - bound);
        if least < bound {
            report.failures.push(format!("{tag}: a vertex moves only {least} < {bound} edges"));
        }
    }
    Ok(report)
}

fn random_subgroup<R: Rng + ?Sized>(ambient: &FreeProduct, factor: usize, rng: &mut R) -> Result<IdSet> {
    let g = &ambient.factors()[factor];
    let x = ElementId(rng.gen_range(1..g.order()) as u32);
    let mut gens = vec![x];
    if rng.gen_bool(0.3) {
        gens.push(ElementId(rng.gen_range(0..g.order()) as u32));
    }
    g.generated_subgroup(gens)
}

/// Decompositions with a repeated `(factor, subgroup)` part must violate
/// the shared-powers condition; decompositions with parts in pairwise
/// distinct factors must not. Half of the trials are of each kind.
pub fn duplicated_part_trials(ambients: &[Arc<FreeProduct>], trials: usize, seed: u64) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport { trials, ..Default::default() };
    for t in 0..trials {
        let ambient = ambients.choose(&mut rng).expect("at least one ambient group");
        let n = ambient.factors().len();
        let conj = |rng: &mut ChaCha8Rng| {
            let norm = rng.gen_range(0..=3);
            ambient.random_element(rng, norm)
        };
        let duplicated = t % 2 == 0;
        let mut parts = Vec::new();
        if duplicated {
            let i = rng.gen_range(0..n);
            let h = random_subgroup(ambient, i, &mut rng)?;
            parts.push(SubgroupPart::new(i, h.clone(), conj(&mut rng)));
            parts.push(SubgroupPart::new(i, h, conj(&mut rng)));
            for _ in 0..rng.gen_range(0..=2) {
                let j = rng.gen_range(0..n);
                parts.push(SubgroupPart::new(j, random_subgroup(ambient, j, &mut rng)?, conj(&mut rng)));
            }
            parts.shuffle(&mut rng);
        } else {
            let mut factors: Vec<usize> = (0..n).collect();
            factors.shuffle(&mut rng);
            factors.truncate(rng.gen_range(1..=n));
            for i in factors {
                parts.push(SubgroupPart::new(i, random_subgroup(ambient, i, &mut rng)?, conj(&mut rng)));
            }
        }
        let data = KuroshData::new(ambient, 0, parts);
        if let Err(errs) = data.validate() {
            report.failures.push(format!("trial {t}: invalid decomposition {errs:?}"));
            continue;
        }
        let violations = check_condition2(&data)?;
        if duplicated {
            report.special += 1;
        }
        if duplicated == violations.is_empty() {
            report.failures.push(format!(
                "trial {t}: {} parts, duplicated={duplicated}, {} violations",
                data.parts.len(),
                violations.len()
            ));
        }
    }
    Ok(report)
}
