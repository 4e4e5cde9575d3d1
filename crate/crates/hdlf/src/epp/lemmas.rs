use num_traits::Zero;
use serde::Serialize;

use super::{AsCase, EppInvariants, EppTrace, TraceEntry};
use crate::arith::rat::{ri, ExtRat, Rat};

/// One evaluated inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub step: usize,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
    pub pass: bool,
}

impl LemmaReport {
    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Ctx {
    checks: Vec<LemmaCheck>,
}

impl Ctx {
    fn ge(&mut self, name: &'static str, step: usize, lhs: &ExtRat, rhs: &ExtRat) {
        self.checks.push(LemmaCheck {
            name,
            step,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs >= rhs,
        });
    }

    fn eq(&mut self, name: &'static str, step: usize, lhs: &Rat, rhs: &Rat) {
        self.checks.push(LemmaCheck { name, step, lhs: lhs.to_string(), rhs: rhs.to_string(), pass: lhs == rhs });
    }
}

fn fin(r: Rat) -> ExtRat {
    ExtRat::Finite(r)
}

fn min_of(xs: impl IntoIterator<Item = Rat>) -> Rat {
    xs.into_iter().min().expect("nonempty minimum")
}

/// Highest class index worth inspecting on either side: beyond it every
/// B^(s) is the empty-set 0.
fn s_top(a: &EppInvariants, b: &EppInvariants) -> usize {
    a.b_s.len().max(b.b_s.len())
}

fn p_pow(p: u64, u: usize) -> Rat {
    ri(p.pow(u as u32) as i64)
}

/// Evaluates every step inequality of the recursion on a trace.
pub fn check_lemmas(trace: &EppTrace) -> LemmaReport {
    let mut cx = Ctx { checks: Vec::new() };
    let p = trace.p;
    let c = &trace.c;
    let plain: Vec<&TraceEntry> = trace.plain().collect();
    for w in plain.windows(2) {
        let (prev, cur) = (w[0], w[1]);
        let i = cur.step;
        let Some(tilde) = trace.tilde_at(i) else {
            cx.checks.push(LemmaCheck {
                name: "tilde_phase_present",
                step: i,
                lhs: "missing".into(),
                rhs: "present".into(),
                pass: false,
            });
            continue;
        };
        let (e0, et, e1) = (&prev.invariants, &tilde.invariants, &cur.invariants);
        cx.ge("tilde_a_monotone", i, &et.a, &e0.a);
        match trace.case {
            AsCase::B2 => b2_step(&mut cx, p, c, i, e0, et, e1),
            AsCase::C => {
                cx.eq("c_tilde_b_equal", i, &et.b, &e0.b);
                cx.ge("c_plain_a_gain", i, &e1.a, &et.a.add_rat(c));
                cx.eq("c_plain_b_equal", i, &e1.b, &et.b);
            }
        }
    }
    if trace.case == AsCase::B2 {
        b2_global(&mut cx, &plain);
    }
    let pass = cx.checks.iter().all(|c| c.pass);
    LemmaReport { checks: cx.checks, pass }
}

fn b2_step(cx: &mut Ctx, p: u64, c: &Rat, i: usize, e0: &EppInvariants, et: &EppInvariants, e1: &EppInvariants) {
    // tilde phase: each class only gains from classes above it, divided down
    let top = s_top(e0, et);
    for s in 0..top {
        let rhs = min_of((0..=top - s).map(|u| e0.b_at(s + u) / p_pow(p, u)));
        cx.ge("tilde_b_classes", i, &fin(et.b_at(s)), &fin(rhs));
    }
    // plain phase
    let at = et.a.finite().cloned().unwrap_or_else(Rat::zero);
    let rhs = (&at / ri(p as i64)).min(&at + c);
    cx.ge("plain_a_step", i, &e1.a, &fin(rhs));
    let top = s_top(et, e1) + 1;
    let mut b0 = vec![et.b_at(0), et.b_at(1) / ri(p as i64)];
    b0.extend((2..=top).map(|u| (et.b_at(u) + c) / p_pow(p, u)));
    cx.ge("plain_b0_step", i, &fin(e1.b_at(0)), &fin(min_of(b0)));
    for s in 1..top {
        let mut r = vec![et.b_at(s + 1) / ri(p as i64)];
        r.extend((0..=top - s).map(|u| (et.b_at(s + u) + c) / p_pow(p, u)));
        cx.ge("plain_bs_step", i, &fin(e1.b_at(s)), &fin(min_of(r)));
    }
}

fn b2_global(cx: &mut Ctx, plain: &[&TraceEntry]) {
    for w in plain.windows(2) {
        cx.ge("a_nondecreasing", w[1].step, &w[1].invariants.a, &w[0].invariants.a);
    }
    for e in plain {
        cx.ge("a_nonpositive", e.step, &fin(Rat::zero()), &e.invariants.a);
    }
    // once B^(0) is strictly below every other class it is the floor forever
    for (k, e) in plain.iter().enumerate() {
        let inv = &e.invariants;
        let b0 = inv.b_at(0);
        if (1..inv.b_s.len().max(2)).all(|s| b0 < inv.b_at(s)) {
            for later in &plain[k..] {
                cx.eq("b_floor_stable", later.step, &later.invariants.b, &b0);
            }
        }
    }
}
