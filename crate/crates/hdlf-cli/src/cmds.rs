use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hdlf::arith::fq::{Fq, FqField};
use hdlf::arith::rat::{rat, rat_to_string, ri, ExtRat, Rat};
use hdlf::arith::EisElem;
use hdlf::epp::{self, AsCase, EppTrace, Rule, Schedule};
use hdlf::herbrand::{random_jumps, HerbrandMap, JumpParams, LexIndex, RamJumps};
use hdlf::krasner::{self, EisPolyJson};
use hdlf::laurent::{LaurentJson, MLaurent, TruncBox};
use hdlf::norms::{self, CycTower};
use hdlf::witt::{self, WittJson, WittVec};

use crate::io::{canonical, from_value, parse_value, to_value, write_text, CliError, CliResult};
use crate::{
    CorpusCmd, CorpusKind, DualityElement, EppCmd, GammaElement, HerbrandCmd, Inputs, KrasnerCmd, NormsCmd, Outcome,
    RuleArg, TowerArgs, WittCmd, PRECISION_ENV,
};

fn load(inputs: &mut Inputs, key: &str, src: &str) -> CliResult<Value> {
    let v = parse_value(src)?;
    inputs.insert(key.to_string(), v.clone());
    Ok(v)
}

fn index(s: &str) -> CliResult<LexIndex> {
    Ok(s.parse::<LexIndex>()?)
}

fn ext(x: &ExtRat) -> Value {
    json!(x.to_json_string())
}

fn r(x: &Rat) -> Value {
    json!(rat_to_string(x))
}

fn done(result: Value, pass: bool) -> CliResult<Outcome> {
    Ok(Outcome { result, pass })
}

/// A HerbrandMap, or RamJumps turned into one.
fn load_map(inputs: &mut Inputs, key: &str, src: &str) -> CliResult<HerbrandMap> {
    let v = load(inputs, key, src)?;
    if v.get("jumps").is_some() {
        let d: RamJumps = from_value(src, v)?;
        d.validate()?;
        Ok(HerbrandMap::from_jumps(&d)?)
    } else {
        from_value(src, v)
    }
}

fn load_jumps(inputs: &mut Inputs, key: &str, src: &str) -> CliResult<RamJumps> {
    let d: RamJumps = from_value(src, load(inputs, key, src)?)?;
    d.validate()?;
    Ok(d)
}

fn edge(m: &HerbrandMap) -> Value {
    let (i, j) = m.last_edge();
    json!({ "i": to_value(&i), "j": to_value(&j) })
}

pub fn herbrand(cmd: &HerbrandCmd, inputs: &mut Inputs) -> CliResult<Outcome> {
    match cmd {
        HerbrandCmd::FromJumps { input, at } => {
            let m = load_map(inputs, "jumps", input)?;
            let mut evals = Vec::new();
            let mut pass = true;
            for s in at {
                let x = index(s)?;
                let y = m.evaluate(&x)?;
                pass &= m.preimage(&y)? == x;
                evals.push(json!({ "at": to_value(&x), "value": to_value(&y) }));
            }
            done(json!({ "map": to_value(&m), "degree": r(&m.degree()), "last_edge": edge(&m), "evaluations": evals }), pass)
        }
        HerbrandCmd::Compose { outer, inner } => {
            let f = load_map(inputs, "outer", outer)?;
            let g = load_map(inputs, "inner", inner)?;
            let h = HerbrandMap::compose(&f, &g)?;
            // every breakpoint of either factor, seen from the input side
            let mut pts: Vec<LexIndex> = vec![LexIndex::zero(g.r())];
            pts.extend(g.breakpoints().iter().map(|b| b.input.clone()));
            for b in f.breakpoints() {
                pts.push(g.preimage(&b.input)?);
            }
            let far = pts.iter().max().cloned().unwrap();
            pts.push(&far + &LexIndex::last_unit(g.r()));
            let mut first = LexIndex::zero(g.r());
            first.0[0] = far.first() + ri(1);
            pts.push(first);
            let mut mismatches = Vec::new();
            for x in &pts {
                let lhs = h.evaluate(x)?;
                let rhs = f.evaluate(&g.evaluate(x)?)?;
                if lhs != rhs {
                    mismatches.push(json!({ "at": to_value(x), "composed": to_value(&lhs), "pointwise": to_value(&rhs) }));
                }
            }
            let pass = mismatches.is_empty();
            done(json!({ "map": to_value(&h), "checked_points": pts.len(), "mismatches": mismatches }), pass)
        }
        HerbrandCmd::Invert { input } => {
            let m = load_map(inputs, "map", input)?;
            let inv = m.invert();
            let mut pass = inv.invert() == m;
            for b in m.breakpoints() {
                pass &= inv.evaluate(&b.output)? == b.input;
            }
            done(json!({ "map": to_value(&inv) }), pass)
        }
        HerbrandCmd::LastEdge { input } => {
            let m = load_map(inputs, "map", input)?;
            done(edge(&m), true)
        }
    }
}

/// Points where the value identity is worth testing: 0, every jump, and
/// points between and beyond them.
fn default_grid(d: &RamJumps) -> Vec<LexIndex> {
    let mut pts = vec![LexIndex::zero(d.r)];
    let mut prev = LexIndex::zero(d.r);
    for j in &d.jumps {
        pts.push((&prev + j).scale(&rat(1, 2)));
        pts.push(j.clone());
        prev = j.clone();
    }
    let mut beyond = prev.clone();
    beyond.0[0] = prev.first() + ri(1);
    pts.push(beyond);
    pts.retain(|a| a.in_j());
    pts.dedup();
    pts
}

pub fn krasner(cmd: &KrasnerCmd, inputs: &mut Inputs) -> CliResult<Outcome> {
    match cmd {
        KrasnerCmd::Locate { input, value } => {
            let d = load_jumps(inputs, "jumps", input)?;
            let big_a = index(value)?;
            let (a, unique) = krasner::locate_root(&d, &big_a)?;
            // feeding a back must reproduce A
            let back = HerbrandMap::from_jumps(&d)?.evaluate(&a)?;
            done(json!({ "A": to_value(&big_a), "a": to_value(&a), "unique": unique }), back == big_a)
        }
        KrasnerCmd::Disc { input, v_theta } => {
            let v = load(inputs, "input", input)?;
            if v.get("minpoly").is_some() {
                let f = from_value::<EisPolyJson>(input, v)?.to_poly()?;
                let disc = f.disc_valuation()?;
                return done(json!({ "resultant_disc": r(&disc), "eisenstein": f.is_eisenstein() }), true);
            }
            let d: RamJumps = from_value(input, v)?;
            d.validate()?;
            let vt = match v_theta {
                Some(s) => index(s)?,
                None => LexIndex::last_unit(d.r),
            };
            let closed = krasner::disc_closed_form(&d)?;
            let distances = krasner::disc_from_distances(&d, &vt)?;
            let bound = krasner::disc_bound_check(&d)?;
            let unweighted = krasner::disc_bound_unweighted(&d)?;
            let pass = closed == distances && bound;
            done(
                json!({
                    "closed_form": to_value(&closed),
                    "from_distances": to_value(&distances),
                    "bound_holds": bound,
                    "unweighted_bound_holds": unweighted,
                }),
                pass,
            )
        }
        KrasnerCmd::Check { input, a } => {
            let d = load_jumps(inputs, "jumps", input)?;
            let pts = if a.is_empty() { default_grid(&d) } else { a.iter().map(|s| index(s)).collect::<CliResult<_>>()? };
            let mut rows = Vec::new();
            let mut pass = true;
            for x in &pts {
                let c = krasner::value_check(&d, x)?;
                let ok = c.distance_sum == c.herbrand_side;
                pass &= ok;
                rows.push(json!({
                    "a": to_value(x),
                    "distance_sum": to_value(&c.distance_sum),
                    "herbrand_side": to_value(&c.herbrand_side),
                    "agree": ok,
                }));
            }
            let disc = match krasner::disc_closed_form(&d) {
                Ok(closed) => {
                    let oracle = krasner::disc_from_distances(&d, &LexIndex::last_unit(d.r))?;
                    let bound = krasner::disc_bound_check(&d)?;
                    let unweighted = krasner::disc_bound_unweighted(&d)?;
                    pass &= closed == oracle && bound;
                    json!({
                        "closed_form": to_value(&closed),
                        "from_distances": to_value(&oracle),
                        "bound_holds": bound,
                        "unweighted_bound_holds": unweighted,
                    })
                }
                Err(hdlf::Error::ShapeMismatch(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            done(json!({ "values": rows, "disc": disc }), pass)
        }
    }
}

/// M from `--precision p^M`, else $HDLF_PRECISION, else a default.
pub fn precision_m(t: &TowerArgs) -> CliResult<u32> {
    if let Some(q) = t.precision {
        return Ok(CycTower::precision_exponent(t.p, q)?);
    }
    if let Ok(s) = std::env::var(PRECISION_ENV) {
        return s
            .trim()
            .parse::<u32>()
            .map_err(|_| CliError::Io(format!("{PRECISION_ENV}={s:?} is not a precision exponent")));
    }
    Ok(if t.p == 2 { 16 } else { 8 })
}

fn build_tower(t: &TowerArgs) -> CliResult<(Arc<CycTower>, u32)> {
    let m = precision_m(t)?;
    Ok((CycTower::new(t.p, t.depth, m)?, m))
}

fn coords(x: &EisElem) -> Value {
    json!(x.coords())
}

pub fn witt(cmd: &WittCmd, inputs: &mut Inputs) -> CliResult<Outcome> {
    let load_witt = |inputs: &mut Inputs, key: &str, src: &str| -> CliResult<witt::AnyWitt> {
        Ok(from_value::<WittJson>(src, load(inputs, key, src)?)?.parse()?)
    };
    match cmd {
        WittCmd::Add { a, b } | WittCmd::Mul { a, b } => {
            let mul = matches!(cmd, WittCmd::Mul { .. });
            let x = load_witt(inputs, "a", a)?;
            let y = load_witt(inputs, "b", b)?;
            let z = if mul { x.mul(&y)? } else { x.add(&y)? };
            let ghost_ok = x.ghost_respects(&y, &z, mul);
            done(json!({ "value": to_value(&z.to_json()), "ghost_homomorphism": ghost_ok }), ghost_ok)
        }
        WittCmd::Ghost { a } => {
            let x = load_witt(inputs, "a", a)?;
            done(json!({ "ghost": x.ghost_json() }), true)
        }
        WittCmd::ArtinHasse { p, degree } => {
            let e = witt::artin_hasse(*p, *degree)?;
            let rep = witt::artin_hasse_congruence_check(*p, *degree)?;
            let coeffs: Vec<Value> = e.coeffs.iter().map(r).collect();
            done(
                json!({
                    "coeffs": coeffs,
                    "integral": rep.integral,
                    "exact_identity": rep.exact_identity,
                    "congruence": rep.congruence,
                }),
                rep.passed(),
            )
        }
        WittCmd::Gamma { tower, element, length } => {
            let (t, m) = build_tower(tower)?;
            let e = norms::epsilon(&t)?;
            let w = witt::WittArith::new(t.p, *length)?;
            let (x, expected) = match element {
                GammaElement::Kernel => (witt::kernel_generator(&t, *length)?, 0),
                GammaElement::Epsilon => (WittVec::teichmueller(t.p, &e, *length), 1),
                GammaElement::EpsilonMinusOne => (norms::epsilon_minus_one(&t, *length)?, 0),
                GammaElement::P => (w.from_int(&e, t.p as i64)?, t.p as i64),
            };
            let g = witt::fontaine_gamma(&x, None)?;
            let residual = &g.value - &EisElem::from_i64(t.ring(g.level), expected);
            let v = residual.valuation();
            let pass = v >= ExtRat::Finite(g.precision.clone());
            done(
                json!({
                    "M": m,
                    "level": g.level,
                    "value": coords(&g.value),
                    "expected": expected,
                    "precision": r(&g.precision),
                    "residual_valuation": ext(&v),
                }),
                pass,
            )
        }
    }
}

fn rule(r: RuleArg) -> Rule {
    match r {
        RuleArg::Zero => Rule::Zero,
        RuleArg::Minimal => Rule::Minimal,
    }
}

fn load_datum(inputs: &mut Inputs, src: &str) -> CliResult<epp::ASDatum> {
    Ok(from_value::<epp::ASDatumJson>(src, load(inputs, "datum", src)?)?.to_datum()?)
}

pub fn epp(cmd: &EppCmd, inputs: &mut Inputs, config: &Value) -> CliResult<Outcome> {
    match cmd {
        EppCmd::Invariants { input } => {
            let d = load_datum(inputs, input)?;
            let inv = epp::invariants(&d)?;
            let bound = (d.case() == AsCase::C).then(|| epp::case_c_bound(&inv, d.c()));
            done(json!({ "invariants": to_value(&inv), "terminated": inv.terminated(), "case_c_bound": bound }), true)
        }
        EppCmd::Run { datum, input, steps, emit, tilde, plain } => {
            let src = match (datum, input) {
                (Some(s), None) | (None, Some(s)) => s,
                _ => return Err(CliError::Io("give the datum either positionally or with --input".into())),
            };
            let d = load_datum(inputs, src)?;
            let schedule = Schedule { tilde: rule(*tilde), plain: rule(*plain) };
            let (trace, last) = epp::run_with_final(&d, *steps, &schedule)?;
            let report = epp::check_lemmas(&trace);
            let inv0 = &trace.entries[0].invariants;
            let bound = (d.case() == AsCase::C).then(|| epp::case_c_bound(inv0, d.c()));
            let within = match (trace.n_star(), bound) {
                (Some(n), Some(b)) => n <= b,
                (Some(_), None) => true,
                (None, _) => false,
            };
            if let Some(path) = emit {
                let art = json!({ "config": config, "trace": to_value(&trace) });
                write_text(Some(path), &canonical(&art))?;
            }
            let failures: Vec<Value> = report.failures().map(to_value).collect();
            done(
                json!({
                    "outcome": to_value(&trace.outcome),
                    "n_star": trace.n_star(),
                    "flagged": trace.n_star().is_none(),
                    "case_c_bound": bound,
                    "steps_taken": trace.plain().count() - 1,
                    "final": to_value(&last.to_json()),
                    "final_invariants": to_value(&trace.entries.last().unwrap().invariants),
                    "lemmas": { "checks": report.checks.len(), "pass": report.pass, "failures": failures },
                }),
                within && report.pass,
            )
        }
        EppCmd::Check { trace } => {
            let mut v = load(inputs, "trace", trace)?;
            if let Some(inner) = v.get("trace") {
                v = inner.clone();
            }
            let t: EppTrace = from_value(trace, v)?;
            let report = epp::check_lemmas(&t);
            let failures: Vec<Value> = report.failures().map(to_value).collect();
            done(json!({ "checks": report.checks.len(), "failures": failures, "n_star": t.n_star() }), report.pass)
        }
    }
}

fn certs_pass(cs: &[norms::Certificate]) -> bool {
    cs.iter().all(|c| c.pass)
}

fn random_witt_over(t: &Arc<CycTower>, len: usize, rng: &mut ChaCha8Rng) -> CliResult<WittVec<norms::CompatSeq>> {
    let comps = (0..len).map(|_| norms::random_maximal(t, rng)).collect::<hdlf::Result<Vec<_>>>()?;
    Ok(WittVec::new(t.p, comps)?)
}

pub fn norms(cmd: &NormsCmd, inputs: &mut Inputs) -> CliResult<Outcome> {
    match cmd {
        NormsCmd::Tower { tower, basic_2d } => {
            let (t, m) = build_tower(tower)?;
            let eps = norms::epsilon(&t)?.certificates()?;
            let pi = norms::build_pi_seq(&t)?;
            let pi_certs = pi.certificates()?;
            let mut pass = certs_pass(&eps) && certs_pass(&pi_certs) && *pi.threshold() > Rat::from_integer(0.into());
            let mut projections = Vec::new();
            if *basic_2d {
                let b = norms::BasicTower2D::new(t.p, t.depth(), m)?;
                for n in 0..b.depth() {
                    let rep = b.pth_projection_check(n)?;
                    pass &= rep.pass;
                    projections.push(to_value(&rep));
                }
            }
            done(
                json!({
                    "M": m,
                    "units": "v_T = (p-1) v with v(p) = 1",
                    "epsilon": to_value(&eps),
                    "pi_seq": { "c": r(pi.threshold()), "certificates": to_value(&pi_certs) },
                    "basic_2d": projections,
                }),
                pass,
            )
        }
        NormsCmd::Epsilon { tower } => {
            let (t, m) = build_tower(tower)?;
            let e = norms::epsilon(&t)?;
            let positions: Vec<Value> = e
                .values()
                .iter()
                .enumerate()
                .map(|(n, x)| Ok(json!({ "position": n, "level": t.level_of(x)?, "coords": coords(x) })))
                .collect::<hdlf::Result<_>>()?;
            let certs = e.certificates()?;
            done(json!({ "M": m, "positions": positions, "certificates": to_value(&certs) }), certs_pass(&certs))
        }
        NormsCmd::Embed { series, tower } => {
            let (t, m) = build_tower(tower)?;
            let f = from_value::<LaurentJson>(series, load(inputs, "series", series)?)?.to_series()?;
            let pi = norms::build_pi_seq(&t)?;
            let emb = norms::embed_series(&[pi], &f)?;
            let certs = emb.seq.certificates()?;
            let positions: Vec<Value> = (0..emb.seq.len())
                .map(|n| json!({ "position": n, "coords": coords(emb.seq.value(n)), "guarantee": ext(&emb.guarantee(n)) }))
                .collect();
            done(json!({ "M": m, "positions": positions, "certificates": to_value(&certs) }), certs_pass(&certs))
        }
        NormsCmd::Descend { tower, level, control } => {
            let (t, m) = build_tower(tower)?;
            let u = *level;
            if u == 0 || u + 1 >= t.depth() {
                return Err(hdlf::Error::Invalid(format!("--level must lie in 1..{}", t.depth() - 1)).into());
            }
            let c1 = norms::step_coefficient_threshold(&t, u)?;
            if *control {
                let f = norms::perturbed_step(&t, u)?;
                return match norms::norm_descend(&t, u, &f, &t.pi(u + 1), &c1) {
                    Err(hdlf::Error::NoCloseRoot(msg)) => {
                        done(json!({ "M": m, "control": true, "no_close_root": msg }), true)
                    }
                    Err(e) => Err(e.into()),
                    Ok(d) => done(json!({ "M": m, "control": true, "certificate": to_value(&d.certificate) }), false),
                };
            }
            let d = norms::norm_descend(&t, u, &t.step_poly(u)?, &t.pi(u + 1), &c1)?;
            let recovered = d.root == t.pi(u);
            done(
                json!({
                    "M": m,
                    "control": false,
                    "recovered_pi": recovered,
                    "root": coords(&d.root),
                    "certificate": to_value(&d.certificate),
                }),
                recovered && d.certificate.pass,
            )
        }
        NormsCmd::Duality { tower, m: shifts, length, element, seed } => {
            let (t, m) = build_tower(tower)?;
            let f = match element {
                DualityElement::EpsilonMinusOne => norms::epsilon_minus_one(&t, *length)?,
                DualityElement::Zero => WittVec::zero(t.p, &norms::zero_seq(&t)?, *length),
                DualityElement::Random => random_witt_over(&t, *length, &mut ChaCha8Rng::seed_from_u64(*seed))?,
            };
            let d = norms::duality_map(&f, *shifts)?;
            let rep = d.report();
            let mut pass = rep.in_one_plus_p;
            let mut expected = Value::Null;
            if matches!(element, DualityElement::EpsilonMinusOne) && *shifts == 1 {
                let want = ri(1) + rat(1, t.p as i64 - 1);
                pass &= rep.log_arg_valuation == ExtRat::Finite(want.clone());
                expected = r(&want);
            }
            done(json!({ "M": m, "report": to_value(&rep), "expected_log_arg_valuation": expected }), pass)
        }
    }
}

fn random_series(rng: &mut ChaCha8Rng, p: u64) -> CliResult<LaurentJson> {
    let k = FqField::new(p, 1)?;
    let bx = TruncBox::new(1, vec![0], vec![8])?;
    let mut terms: Vec<(Vec<i64>, Fq)> = Vec::new();
    for e in 1..=8 {
        if rng.gen_bool(0.4) {
            terms.push((vec![e], Fq::from_int(&k, rng.gen_range(1..p as i64))));
        }
    }
    Ok(MLaurent::from_terms(&Fq::zero(&k), bx, terms)?.to_json())
}

pub fn corpus(cmd: &CorpusCmd) -> CliResult<Outcome> {
    let CorpusCmd::Gen { kind, count, seed, p } = cmd;
    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
    let mut items = Vec::with_capacity(*count);
    for k in 0..*count {
        let pk = p.unwrap_or(if k % 2 == 0 { 2 } else { 3 });
        let item = match kind {
            CorpusKind::RamJumps => to_value(&random_jumps(&mut rng, &JumpParams::default())),
            CorpusKind::Epp => {
                let case = if k % 4 < 2 { AsCase::B2 } else { AsCase::C };
                to_value(&epp::random_datum(&mut rng, pk, case, 20, ri(1))?.to_json())
            }
            CorpusKind::Witt => {
                let len = rng.gen_range(1..=3);
                let comps = (0..len).map(|_| rng.gen_range(-50i64..=50).to_string()).collect();
                to_value(&WittJson::Int { p: pk, comps })
            }
            CorpusKind::Series => to_value(&random_series(&mut rng, pk)?),
        };
        items.push(item);
    }
    done(json!({ "kind": to_value(kind), "seed": seed, "items": items }), true)
}
