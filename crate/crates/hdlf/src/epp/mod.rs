//! Artin-Schreier data over k((t_2))((t_1)) and the recursion that removes
//! wild ramification by passing up a tower of parameter changes.
//!
//! A datum records ξ, the case (b2: θ^p - θ = ξ, c: θ^p = ξ), the tower
//! constant c and the current scale e with v¹(t_1) = 1/e. All invariants are
//! reported divided by e so that every step lives in one v¹ frame.

mod char0;
mod lemmas;
mod random;
mod step;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::fq::Fq;
use crate::arith::rat::{ceil_i64, floor_i64, rat, serde_ext, serde_rat, serde_rat_vec, ExtRat, Rat};
use crate::error::{invalid, Error, Result};
use crate::laurent::{LaurentJson, MLaurent, TruncBox};

pub use char0::{char0_translate, find_pi1, Char0Translation};
pub use lemmas::{check_lemmas, LemmaCheck, LemmaReport};
pub use random::random_datum;
pub use step::{rewrite_step, Perturbation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AsCase {
    /// θ^p - θ = ξ
    B2,
    /// θ^p = ξ
    C,
}

impl fmt::Display for AsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AsCase::B2 => "b2",
            AsCase::C => "c",
        })
    }
}

#[derive(Clone, PartialEq)]
pub struct ASDatum {
    xi: MLaurent<Fq>,
    case: AsCase,
    c: Rat,
    e_scale: i64,
}

impl fmt::Debug for ASDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ASDatum({}, c={}, e={}, {:?})", self.case, self.c, self.e_scale, self.xi)
    }
}

/// Raw first exponents allowed in the window: everything up to c·e in case
/// c, nothing above zero in case b2.
pub(crate) fn window_top(case: AsCase, c: &Rat, e_scale: i64) -> i64 {
    match case {
        AsCase::B2 => 0,
        AsCase::C => floor_i64(&(c * Rat::from_integer(e_scale.into()))),
    }
}

impl ASDatum {
    /// Validates the normal form and the box conventions.
    pub fn new(xi: MLaurent<Fq>, case: AsCase, c: Rat, e_scale: i64) -> Result<ASDatum> {
        if xi.n() != 2 {
            return Err(Error::DimMismatch(format!("only N = 2 data are simulated, got N = {}", xi.n())));
        }
        if xi.denom() != 1 {
            return invalid("exponents must be integers (box denominator 1)");
        }
        if !c.is_positive() {
            return invalid("c must be positive");
        }
        if e_scale < 1 {
            return invalid("e_scale must be >= 1");
        }
        let bx = xi.bx();
        if bx.lo[1] > 0 || bx.hi[1] < 0 {
            return invalid("the t_2 window must contain 0");
        }
        if bx.hi[0] != window_top(case, &c, e_scale) {
            return invalid(format!(
                "the t_1 window must end at {} for case {case} with c = {c}, e = {e_scale}",
                window_top(case, &c, e_scale)
            ));
        }
        let d = ASDatum { xi, case, c, e_scale };
        if let Some(bad) = d.normal_form_violation() {
            return invalid(format!("term t^{bad:?} violates the normal form"));
        }
        Ok(d)
    }

    fn normal_form_violation(&self) -> Option<Vec<i64>> {
        let p = self.p() as i64;
        self.xi
            .terms()
            .find(|(e, c)| match self.case {
                AsCase::B2 => !self.xi_b2_term_ok(e, c),
                AsCase::C => e.iter().all(|x| x % p == 0),
            })
            .map(|(e, _)| e.clone())
    }

    fn xi_b2_term_ok(&self, e: &[i64], c: &Fq) -> bool {
        let p = self.p() as i64;
        match (e[0].signum(), e[1].signum()) {
            (0, 0) => c.wp_coset_rep() == *c,
            (1, _) | (0, 1) => false,
            _ => e.iter().any(|x| x % p != 0),
        }
    }

    pub fn xi(&self) -> &MLaurent<Fq> {
        &self.xi
    }

    pub fn case(&self) -> AsCase {
        self.case
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn e_scale(&self) -> i64 {
        self.e_scale
    }

    pub fn p(&self) -> u64 {
        self.xi.p()
    }

    /// v¹ of a raw first exponent.
    pub fn normalize(&self, a1: i64) -> Rat {
        rat(a1, self.e_scale)
    }

    pub fn to_json(&self) -> ASDatumJson {
        ASDatumJson { series: self.xi.to_json(), case: self.case, c: self.c.clone(), e_scale: self.e_scale }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ASDatumJson {
    pub series: LaurentJson,
    pub case: AsCase,
    #[serde(with = "serde_rat")]
    pub c: Rat,
    #[serde(default = "one_i64")]
    pub e_scale: i64,
}

fn one_i64() -> i64 {
    1
}

impl ASDatumJson {
    pub fn to_datum(&self) -> Result<ASDatum> {
        ASDatum::new(self.series.to_series()?, self.case, self.c.clone(), self.e_scale)
    }
}

/// Builds a datum from (a_1, a_2, coefficient) triples over F_p with the
/// smallest box that holds them.
pub fn datum_from_terms(p: u64, case: AsCase, c: Rat, terms: &[(i64, i64, i64)]) -> Result<ASDatum> {
    let field = crate::arith::fq::FqField::new(p, 1)?;
    let lo1 = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0);
    let lo2 = terms.iter().map(|t| t.1).min().unwrap_or(0).min(0);
    let hi2 = terms.iter().map(|t| t.1).max().unwrap_or(0).max(0);
    let bx = TruncBox::new(1, vec![lo1, lo2], vec![window_top(case, &c, 1), hi2])?;
    let xi = MLaurent::from_terms(
        &Fq::zero(&field),
        bx,
        terms.iter().map(|&(a, b, k)| (vec![a, b], Fq::from_int(&field, k))),
    )?;
    ASDatum::new(xi, case, c, 1)
}

/// The invariants A, B and B^(s), normalized by e.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EppInvariants {
    #[serde(rename = "A", with = "serde_ext")]
    pub a: ExtRat,
    #[serde(rename = "B", with = "serde_rat")]
    pub b: Rat,
    /// B^(s) for s = 0..=s_max; empty classes read 0. Case c has only s = 0.
    #[serde(rename = "B_s", with = "serde_rat_vec")]
    pub b_s: Vec<Rat>,
}

impl EppInvariants {
    /// B^(s), with 0 beyond s_max.
    pub fn b_at(&self, s: usize) -> Rat {
        self.b_s.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terminated(&self) -> bool {
        self.a > ExtRat::Finite(self.b.clone())
    }
}

pub fn invariants(d: &ASDatum) -> Result<EppInvariants> {
    let p = d.p() as i64;
    let mut a: Option<i64> = None;
    let mut classes: Vec<Option<i64>> = Vec::new();
    for (e, _) in d.xi.terms() {
        let (a1, a2) = (e[0], e[1]);
        let first_set = match d.case {
            AsCase::B2 => a2 == 0,
            AsCase::C => a2 % p == 0,
        };
        if first_set {
            a = Some(a.map_or(a1, |x| x.min(a1)));
            continue;
        }
        let s = match d.case {
            AsCase::B2 => vp_i64(p, a2),
            AsCase::C => 0,
        };
        if classes.len() <= s {
            classes.resize(s + 1, None);
        }
        classes[s] = Some(classes[s].map_or(a1, |x| x.min(a1)));
    }
    if classes.is_empty() {
        return Err(Error::EmptySecondSet);
    }
    let b_s: Vec<Rat> = classes.iter().map(|x| x.map_or_else(Rat::zero, |v| d.normalize(v))).collect();
    let b = b_s.iter().min().cloned().unwrap();
    let a = match (a, d.case) {
        (Some(v), _) => ExtRat::Finite(d.normalize(v)),
        (None, AsCase::B2) => ExtRat::Finite(Rat::zero()),
        (None, AsCase::C) => ExtRat::Infinity,
    };
    Ok(EppInvariants { a, b, b_s })
}

pub(crate) fn vp_i64(p: i64, mut n: i64) -> usize {
    let mut k = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Unit change of parameter, t_old = t_new (1 + δ).
    Tilde,
    /// Degree-p step, t_old = t_new^p (1 + δ).
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub phase: Phase,
    pub e_scale: i64,
    pub terms: usize,
    pub invariants: EppInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Terminated { n_star: usize },
    NonTerminated { max_steps: usize },
}

/// Entry 0 is the input datum (plain); step i >= 1 contributes a tilde
/// entry followed by a plain entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EppTrace {
    pub p: u64,
    pub case: AsCase,
    #[serde(with = "serde_rat")]
    pub c: Rat,
    pub entries: Vec<TraceEntry>,
    pub outcome: Outcome,
}

impl EppTrace {
    pub fn n_star(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Terminated { n_star } => Some(n_star),
            Outcome::NonTerminated { .. } => None,
        }
    }

    /// Plain entries, in step order.
    pub fn plain(&self) -> impl Iterator<Item = &TraceEntry> {
        self.entries.iter().filter(|e| e.phase == Phase::Plain)
    }

    pub fn tilde_at(&self, i: usize) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.phase == Phase::Tilde && e.step == i)
    }

    pub fn plain_at(&self, i: usize) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.phase == Phase::Plain && e.step == i)
    }
}

/// How each phase picks its perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// δ = 0.
    Zero,
    /// δ = t_1^m with m the least integer >= c·e that is prime to p.
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub tilde: Rule,
    pub plain: Rule,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { tilde: Rule::Minimal, plain: Rule::Minimal }
    }
}

impl Schedule {
    pub fn perturbation(&self, phase: Phase, d: &ASDatum) -> Result<Perturbation> {
        let rule = match phase {
            Phase::Tilde => self.tilde,
            Phase::Plain => self.plain,
        };
        let e_new = match phase {
            Phase::Tilde => d.e_scale,
            Phase::Plain => d.e_scale.checked_mul(d.p() as i64).ok_or_else(overflow)?,
        };
        match rule {
            Rule::Zero => Ok(Perturbation::zero()),
            Rule::Minimal => {
                let p = d.p() as i64;
                let mut m = ceil_i64(&(&d.c * Rat::from_integer(e_new.into())));
                while m % p == 0 {
                    m += 1;
                }
                Ok(Perturbation::monomial(m, 1))
            }
        }
    }
}

pub(crate) fn overflow() -> Error {
    Error::BoxExhausted("exponents left the i64 range".into())
}

fn entry(d: &ASDatum, step: usize, phase: Phase) -> Result<TraceEntry> {
    Ok(TraceEntry { step, phase, e_scale: d.e_scale, terms: d.xi.len(), invariants: invariants(d)? })
}

/// Runs the recursion until A > B on a plain entry or `max_steps` steps.
pub fn run(xi0: &ASDatum, max_steps: usize, schedule: &Schedule) -> Result<EppTrace> {
    let (trace, _) = run_with_final(xi0, max_steps, schedule)?;
    Ok(trace)
}

/// [`run`], also returning the last datum.
pub fn run_with_final(xi0: &ASDatum, max_steps: usize, schedule: &Schedule) -> Result<(EppTrace, ASDatum)> {
    let mut entries = vec![entry(xi0, 0, Phase::Plain)?];
    let mut cur = xi0.clone();
    let mut outcome = Outcome::NonTerminated { max_steps };
    if entries[0].invariants.terminated() {
        outcome = Outcome::Terminated { n_star: 0 };
    } else {
        for i in 1..=max_steps {
            let d = schedule.perturbation(Phase::Tilde, &cur)?;
            cur = rewrite_step(&cur, Phase::Tilde, &d)?;
            entries.push(entry(&cur, i, Phase::Tilde)?);
            let d = schedule.perturbation(Phase::Plain, &cur)?;
            cur = rewrite_step(&cur, Phase::Plain, &d)?;
            let e = entry(&cur, i, Phase::Plain)?;
            let done = e.invariants.terminated();
            entries.push(e);
            if done {
                outcome = Outcome::Terminated { n_star: i };
                break;
            }
        }
    }
    let trace = EppTrace { p: xi0.p(), case: xi0.case, c: xi0.c.clone(), entries, outcome };
    Ok((trace, cur))
}

/// The least n with A_0 + n c > B, where A_0 and B are read off the input.
/// It equals ⌈(B - A_0)/c⌉ unless (B - A_0)/c is an integer, where the
/// strict inequality needs one more step.
pub fn case_c_bound(inv0: &EppInvariants, c: &Rat) -> usize {
    match &inv0.a {
        ExtRat::Infinity => 0,
        ExtRat::Finite(a0) => {
            let k = floor_i64(&((&inv0.b - a0) / c)) + 1;
            k.max(0) as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::ri;

    #[test]
    fn invariants_read_minima() {
        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-2, 0, 1), (-5, -1, 1)]).unwrap();
        let inv = invariants(&d).unwrap();
        assert_eq!(inv.a, ExtRat::Finite(ri(-2)));
        assert_eq!(inv.b_s, vec![ri(-5)]);
        assert_eq!(inv.b, ri(-5));

        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-5, 0, 1), (-2, -3, 1)]).unwrap();
        let inv = invariants(&d).unwrap();
        assert_eq!(inv.a, ExtRat::Finite(ri(-5)));
        assert_eq!(inv.b_s, vec![ri(0), ri(-2)]);
        assert_eq!(inv.b, ri(-2));
    }

    #[test]
    fn empty_first_set_sentinels() {
        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-4, 1, 1)]).unwrap();
        assert_eq!(invariants(&d).unwrap().a, ExtRat::Finite(ri(0)));
        let d = datum_from_terms(3, AsCase::C, ri(1), &[(-4, 1, 1)]).unwrap();
        assert_eq!(invariants(&d).unwrap().a, ExtRat::Infinity);
    }

    #[test]
    fn empty_second_set_is_an_error() {
        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-4, 0, 1)]).unwrap();
        assert_eq!(invariants(&d), Err(Error::EmptySecondSet));
    }

    #[test]
    fn normal_form_is_enforced() {
        assert!(datum_from_terms(3, AsCase::B2, ri(1), &[(-3, 3, 1)]).is_err());
        assert!(datum_from_terms(3, AsCase::B2, ri(1), &[(0, 2, 1)]).is_err());
        assert!(datum_from_terms(3, AsCase::C, ri(1), &[(0, 0, 1)]).is_err());
    }

    #[test]
    fn already_terminated_input_stops_at_zero() {
        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-1, 0, 1), (-5, -1, 1)]).unwrap();
        let t = run(&d, 50, &Schedule::default()).unwrap();
        assert_eq!(t.n_star(), Some(0));
        assert_eq!(t.entries.len(), 1);
    }

    #[test]
    fn b2_example_terminates() {
        let d = datum_from_terms(3, AsCase::B2, ri(1), &[(-5, 0, 1), (-2, -1, 1)]).unwrap();
        let t = run(&d, 50, &Schedule::default()).unwrap();
        let n = t.n_star().expect("terminates");
        assert!(n >= 1);
        assert!(check_lemmas(&t).pass);
        // the B^(0) floor never moves
        assert!(t.plain().all(|e| e.invariants.b == ri(-2)));
    }

    #[test]
    fn case_c_respects_bound() {
        let d = datum_from_terms(2, AsCase::C, ri(1), &[(-7, 0, 1), (-3, 1, 1), (-1, 2, 1)]).unwrap();
        let inv0 = invariants(&d).unwrap();
        let t = run(&d, 50, &Schedule::default()).unwrap();
        let n = t.n_star().unwrap();
        assert!(n <= case_c_bound(&inv0, d.c()), "{n} > {}", case_c_bound(&inv0, d.c()));
        assert!(check_lemmas(&t).pass);
    }

    #[test]
    fn run_is_deterministic_and_round_trips() {
        let d = datum_from_terms(2, AsCase::B2, ri(1), &[(-7, 0, 1), (-3, 2, 1), (-5, 1, 1)]).unwrap();
        let a = run(&d, 50, &Schedule::default()).unwrap();
        let b = run(&d, 50, &Schedule::default()).unwrap();
        assert_eq!(a, b);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<EppTrace>(&s).unwrap(), a);
        let j = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(serde_json::from_str::<ASDatumJson>(&j).unwrap().to_datum().unwrap(), d);
    }
}
