//! Exhaustive check of the eight closed forms for
//! `(x³ [x, y^z] y³)² [x, y^z]³` over `C₂ * C₂ = ⟨a⟩ * ⟨b⟩`, where every
//! element is `(ba)ᵏ` or `(ba)ᵏa`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{MixedWord, Substitution};
use crate::finite_group::FiniteGroup;
use crate::free_product::{FpElement, FreeProduct};

pub const THEOREM2_WORD: &str = "(x1^3 [x1, x2^x3] x2^3)^2 [x1, x2^x3]^3";

/// Exponent `n` of `(ba)ⁿ` as a linear function of `(k, t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub k: i64,
    pub t: i64,
    pub s: i64,
}

impl LinearForm {
    pub const fn new(k: i64, t: i64, s: i64) -> Self {
        LinearForm { k, t, s }
    }

    pub fn at(&self, k: i64, t: i64, s: i64) -> i64 {
        self.k * k + self.t * t + self.s * s
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, v) in [(self.k, "k"), (self.t, "t"), (self.s, "s")] {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            out.push_str(&format!("{sign}{}{v}", c.abs()));
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "(ba)^({out})")
    }
}

/// The printed table: `(ε₁, ε₂, ε₃)` and the claimed exponent.
pub const PRINTED_CASES: [([u8; 3], LinearForm); 8] = [
    ([0, 0, 0], LinearForm::new(6, 6, 0)),
    ([1, 0, 0], LinearForm::new(0, -6, 0)),
    ([0, 1, 0], LinearForm::new(6, 0, 0)),
    ([0, 0, 1], LinearForm::new(6, 6, 0)),
    ([1, 1, 0], LinearForm::new(-4, 4, -4)),
    ([1, 0, 1], LinearForm::new(0, 6, 0)),
    ([0, 1, 1], LinearForm::new(6, 0, 0)),
    ([1, 1, 1], LinearForm::new(-4, 0, 4)),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub k: i64,
    pub t: i64,
    pub s: i64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    /// 1-based position in the printed table.
    pub case: usize,
    pub epsilons: [u8; 3],
    pub printed: LinearForm,
    pub evaluations: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Mismatch>,
    /// The form the evaluations actually follow, if they are all powers of
    /// `ba` linear in `(k, t, s)`.
    pub fitted: Option<LinearForm>,
    /// Evaluations equal to `(ab)²`.
    pub rhs_matches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    pub range: i64,
    pub cases: Vec<CaseReport>,
    /// Value of the word at `(a, c d c, c)` in `(C₂×C₂) * C₂`.
    pub lifted_value: String,
    /// `(a c d c)²`, the image of `(ab)²`.
    pub lifted_target: String,
    pub lifted_norm: usize,
    pub lifted_ok: bool,
}

impl Theorem2Report {
    pub fn evaluations(&self) -> usize {
        self.cases.iter().map(|c| c.evaluations).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.cases.iter().map(|c| c.mismatches).sum()
    }

    pub fn rhs_matches(&self) -> usize {
        self.cases.iter().map(|c| c.rhs_matches).sum()
    }

    pub fn formulas_confirmed(&self) -> bool {
        self.mismatches() == 0
    }

    pub fn passed(&self) -> bool {
        self.formulas_confirmed() && self.rhs_matches() == 0 && self.lifted_ok
    }
}

fn infinite_dihedral() -> Arc<FreeProduct> {
    let c2 = FiniteGroup::cyclic(2).expect("C2");
    FreeProduct::new(vec![c2.clone().with_labels(&["a"]).unwrap(), c2.with_labels(&["b"]).unwrap()]).expect("C2 * C2")
}

fn lifted_check() -> (String, String, usize, bool) {
    let c2 = FiniteGroup::cyclic(2).expect("C2");
    let klein =
        FiniteGroup::direct_product(&c2.clone().with_labels(&["a"]).unwrap(), &c2.clone().with_labels(&["d"]).unwrap())
            .expect("C2 x C2");
    let g = FreeProduct::new(vec![klein, c2.with_labels(&["c"]).unwrap()]).expect("(C2 x C2) * C2");
    let a = g.generator_element("a").unwrap();
    let c = g.generator_element("c").unwrap();
    let d = g.generator_element("d").unwrap();
    let y = d.conjugate(&c);
    let word = MixedWord::parse(THEOREM2_WORD, &g).expect("fixed word parses");
    let subst = Substitution::new().with(1, a.clone()).with(2, y.clone()).with(3, c);
    let value = word.evaluate(&subst).expect("all variables bound");
    let target = (&a * &y).pow(2);
    (value.to_string(), target.to_string(), value.norm(), value == target)
}

/// `n` with `v = (ba)ⁿ`, if any.
fn ba_exponent(v: &FpElement, ba: &FpElement) -> Option<i64> {
    let n = (v.norm() / 2) as i64;
    [n, -n].into_iter().find(|&n| &ba.pow(n) == v)
}

fn run_case(case: usize, range: i64) -> CaseReport {
    let g = infinite_dihedral();
    let a = g.generator_element("a").unwrap();
    let b = g.generator_element("b").unwrap();
    let ba = &b * &a;
    let target = (&a * &b).pow(2);
    let word = MixedWord::parse(THEOREM2_WORD, &g).expect("fixed word parses");
    let (eps, printed) = PRINTED_CASES[case];
    let element = |n: i64, e: u8| &ba.pow(n) * &a.pow(e as i64);

    let mut report = CaseReport {
        case: case + 1,
        epsilons: eps,
        printed,
        evaluations: 0,
        mismatches: 0,
        first_mismatch: None,
        fitted: None,
        rhs_matches: 0,
    };
    let mut exponents = Vec::new();
    for k in -range..=range {
        for t in -range..=range {
            for s in -range..=range {
                let subst = Substitution::new()
                    .with(1, element(k, eps[0]))
                    .with(2, element(t, eps[1]))
                    .with(3, element(s, eps[2]));
                let value = word.evaluate(&subst).expect("all variables bound");
                let expected = ba.pow(printed.at(k, t, s));
                report.evaluations += 1;
                if value == target {
                    report.rhs_matches += 1;
                }
                if value != expected {
                    report.mismatches += 1;
                    report.first_mismatch.get_or_insert_with(|| Mismatch {
                        k,
                        t,
                        s,
                        expected: expected.to_string(),
                        actual: value.to_string(),
                    });
                }
                exponents.push(((k, t, s), ba_exponent(&value, &ba)));
            }
        }
    }

    let lookup = |k, t, s| exponents.iter().find(|(p, _)| *p == (k, t, s)).and_then(|(_, n)| *n);
    report.fitted = (|| {
        if lookup(0, 0, 0)? != 0 {
            return None;
        }
        let form = LinearForm::new(lookup(1, 0, 0)?, lookup(0, 1, 0)?, lookup(0, 0, 1)?);
        exponents.iter().all(|&((k, t, s), n)| n == Some(form.at(k, t, s))).then_some(form)
    })();
    report
}

/// Evaluates every case over `(k, t, s) ∈ [−range, range]³`.
pub fn theorem2_report(range: i64) -> Theorem2Report {
    let range = range.max(1);
    let cases: Vec<CaseReport> = (0..PRINTED_CASES.len()).into_par_iter().map(|c| run_case(c, range)).collect();
    let (lifted_value, lifted_target, lifted_norm, lifted_ok) = lifted_check();
    Theorem2Report { range, cases, lifted_value, lifted_target, lifted_norm, lifted_ok }
}
