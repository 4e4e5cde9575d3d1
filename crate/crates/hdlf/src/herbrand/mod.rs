//! The index set J(N) and piecewise-linear Herbrand functions.
//!
//! A [`HerbrandMap`] on J_r is stored as a fixed diagonal matrix (for maps
//! built from jump data, the inverse vector ramification index) together
//! with breakpoints b_1 < ... < b_k and positive scalar slopes s_0, ..., s_k:
//! on the segment starting at b_t the map is `x -> phi(b_t) + s_t * diag * (x - b_t)`.

mod lex;
mod random;

pub use lex::LexIndex;
pub use random::{random_index, random_jumps, random_nonneg, JumpParams};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::rat::{ri, serde_rat_vec, Rat};
use crate::error::{invalid, Error, Result};

/// Ramification data of an extension in dimension class r: lower jumps
/// i_1 < ... < i_s and the orders g_0 > ... > g_s = 1 of the groups between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamJumps {
    pub r: usize,
    pub ebar: Vec<u64>,
    pub jumps: Vec<LexIndex>,
    pub orders: Vec<u64>,
}

impl RamJumps {
    pub fn new(ebar: Vec<u64>, jumps: Vec<LexIndex>, orders: Vec<u64>) -> Result<RamJumps> {
        let d = RamJumps { r: ebar.len(), ebar, jumps, orders };
        d.validate()?;
        Ok(d)
    }

    /// The trivial datum: no jumps, degree 1.
    pub fn trivial(r: usize) -> RamJumps {
        RamJumps { r, ebar: vec![1; r], jumps: vec![], orders: vec![1] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.ebar.len() != self.r {
            return invalid(format!("ebar must have length r = {}", self.r));
        }
        if self.ebar.contains(&0) {
            return invalid("ebar entries must be positive");
        }
        if self.orders.len() != self.jumps.len() + 1 {
            return invalid("need exactly one more order than jumps");
        }
        if self.orders.last() != Some(&1) {
            return invalid("the last order must be 1");
        }
        if self.orders.windows(2).any(|w| w[0] <= w[1]) {
            return invalid("orders must be strictly decreasing");
        }
        for j in &self.jumps {
            if j.r() != self.r {
                return Err(Error::DimMismatch(format!("jump {j} in dimension class {}", self.r)));
            }
        }
        if let Some(first) = self.jumps.first() {
            if *first <= LexIndex::zero(self.r) {
                return invalid("jumps must be positive");
            }
        }
        if self.jumps.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("jumps must be strictly increasing");
        }
        Ok(())
    }

    pub fn degree(&self) -> u64 {
        self.orders[0]
    }

    pub fn ebar_inv(&self) -> Vec<Rat> {
        self.ebar.iter().map(|&e| Rat::new(1.into(), e.into())).collect()
    }

    /// The last jump, or zero without jumps.
    pub fn last_jump(&self) -> LexIndex {
        self.jumps.last().cloned().unwrap_or_else(|| LexIndex::zero(self.r))
    }

    /// Distances from a root to its other conjugates: i_t + v(theta) with
    /// multiplicity g_{t-1} - g_t. Multiplicities sum to d - 1.
    pub fn root_distances(&self, v_theta: &LexIndex) -> Vec<(LexIndex, u64)> {
        self.jumps
            .iter()
            .enumerate()
            .map(|(t, i)| (i + v_theta, self.orders[t] - self.orders[t + 1]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Breakpoint {
    pub input: LexIndex,
    pub output: LexIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandMap {
    diag: Vec<Rat>,
    breaks: Vec<Breakpoint>,
    slopes: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HerbrandJson {
    r: usize,
    #[serde(with = "serde_rat_vec")]
    diag: Vec<Rat>,
    breakpoints: Vec<Breakpoint>,
    #[serde(with = "serde_rat_vec")]
    slopes: Vec<Rat>,
}

impl Serialize for HerbrandMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HerbrandJson { r: self.r(), diag: self.diag.clone(), breakpoints: self.breaks.clone(), slopes: self.slopes.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HerbrandMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HerbrandJson::deserialize(d)?;
        HerbrandMap::from_parts(j.r, j.diag, j.breakpoints, j.slopes).map_err(serde::de::Error::custom)
    }
}

impl HerbrandMap {
    pub fn identity(r: usize) -> HerbrandMap {
        HerbrandMap { diag: vec![Rat::one(); r], breaks: vec![], slopes: vec![Rat::one()] }
    }

    /// Validates serialized data: increasing breakpoints, positive slopes,
    /// outputs consistent with the slopes, canonical (no redundant breaks).
    pub fn from_parts(r: usize, diag: Vec<Rat>, breaks: Vec<Breakpoint>, slopes: Vec<Rat>) -> Result<HerbrandMap> {
        if r == 0 || diag.len() != r {
            return invalid("diag must have length r >= 1");
        }
        if diag.iter().any(|x| !x.is_positive()) || slopes.iter().any(|x| !x.is_positive()) {
            return invalid("diag and slopes must be positive");
        }
        if slopes.len() != breaks.len() + 1 {
            return invalid("need exactly one more slope than breakpoints");
        }
        for b in &breaks {
            if b.input.r() != r || b.output.r() != r {
                return Err(Error::DimMismatch("breakpoint dimension".into()));
            }
        }
        let claimed = HerbrandMap { diag, breaks: breaks.clone(), slopes };
        let mut prev = LexIndex::zero(r);
        for (t, b) in breaks.iter().enumerate() {
            if b.input <= prev {
                return invalid("breakpoints must be positive and increasing");
            }
            prev = b.input.clone();
            let from_left = claimed.eval_on(t, &b.input);
            if from_left != b.output {
                return invalid(format!("breakpoint output {} does not match the slopes ({from_left})", b.output));
            }
        }
        if claimed.slopes.windows(2).any(|w| w[0] == w[1]) {
            return invalid("adjacent segments with equal slope must be merged");
        }
        Ok(claimed)
    }

    /// phi(j) = ebar^{-1} * integral from 0 to j of the group order.
    pub fn from_jumps(d: &RamJumps) -> Result<HerbrandMap> {
        d.validate()?;
        let diag = d.ebar_inv();
        let slopes: Vec<Rat> = d.orders.iter().map(|&g| ri(g as i64)).collect();
        let mut m = HerbrandMap { diag, breaks: vec![], slopes: vec![slopes[0].clone()] };
        for (t, i) in d.jumps.iter().enumerate() {
            let out = m.eval_on(t, i);
            m.breaks.push(Breakpoint { input: i.clone(), output: out });
            m.slopes.push(slopes[t + 1].clone());
        }
        Ok(m.canonical())
    }

    pub fn r(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Rat] {
        &self.diag
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[Rat] {
        &self.slopes
    }

    /// Evaluates the affine piece of segment `t` at `j`.
    fn eval_on(&self, t: usize, j: &LexIndex) -> LexIndex {
        let (x0, y0) = if t == 0 {
            (LexIndex::zero(self.r()), LexIndex::zero(self.r()))
        } else {
            (self.breaks[t - 1].input.clone(), self.breaks[t - 1].output.clone())
        };
        let step = (j - &x0).diag_mul(&self.diag).scale(&self.slopes[t]);
        &y0 + &step
    }

    /// Index of the segment containing `j` (segments are closed on the left).
    fn segment_of(&self, j: &LexIndex) -> usize {
        self.breaks.partition_point(|b| b.input <= *j)
    }

    fn segment_of_output(&self, y: &LexIndex) -> usize {
        self.breaks.partition_point(|b| b.output <= *y)
    }

    pub fn evaluate(&self, j: &LexIndex) -> Result<LexIndex> {
        if j.r() != self.r() {
            return Err(Error::DimMismatch(format!("index {j} for a map on J_{}", self.r())));
        }
        Ok(self.eval_on(self.segment_of(j), j))
    }

    /// Preimage of `y` under the map.
    pub fn preimage(&self, y: &LexIndex) -> Result<LexIndex> {
        if y.r() != self.r() {
            return Err(Error::DimMismatch(format!("index {y} for a map on J_{}", self.r())));
        }
        let t = self.segment_of_output(y);
        let (x0, y0) = if t == 0 {
            (LexIndex::zero(self.r()), LexIndex::zero(self.r()))
        } else {
            (self.breaks[t - 1].input.clone(), self.breaks[t - 1].output.clone())
        };
        let inv_diag: Vec<Rat> = self.diag.iter().map(|x| x.recip()).collect();
        Ok(&x0 + &(y - &y0).diag_mul(&inv_diag).scale(&self.slopes[t].recip()))
    }

    fn canonical(mut self) -> HerbrandMap {
        let mut breaks = Vec::new();
        let mut slopes = vec![self.slopes[0].clone()];
        for (b, s) in self.breaks.drain(..).zip(self.slopes.drain(1..)) {
            if *slopes.last().unwrap() == s {
                continue;
            }
            breaks.push(b);
            slopes.push(s);
        }
        HerbrandMap { diag: self.diag, breaks, slopes }
    }

    /// `outer` after `inner`.
    pub fn compose(outer: &HerbrandMap, inner: &HerbrandMap) -> Result<HerbrandMap> {
        if outer.r() != inner.r() {
            return Err(Error::DimMismatch(format!("J_{} after J_{}", outer.r(), inner.r())));
        }
        let mut points: Vec<LexIndex> = inner.breaks.iter().map(|b| b.input.clone()).collect();
        for b in &outer.breaks {
            points.push(inner.preimage(&b.input)?);
        }
        points.sort();
        points.dedup();
        let diag: Vec<Rat> = outer.diag.iter().zip(&inner.diag).map(|(a, b)| a * b).collect();
        let slope_at = |x: &LexIndex| -> Result<Rat> {
            let s_in = &inner.slopes[inner.segment_of(x)];
            let s_out = &outer.slopes[outer.segment_of(&inner.evaluate(x)?)];
            Ok(s_in * s_out)
        };
        let zero = LexIndex::zero(inner.r());
        let mut m = HerbrandMap { diag, breaks: vec![], slopes: vec![slope_at(&zero)?] };
        for x in points {
            let y = outer.evaluate(&inner.evaluate(&x)?)?;
            m.slopes.push(slope_at(&x)?);
            m.breaks.push(Breakpoint { input: x, output: y });
        }
        Ok(m.canonical())
    }

    pub fn invert(&self) -> HerbrandMap {
        HerbrandMap {
            diag: self.diag.iter().map(|x| x.recip()).collect(),
            breaks: self.breaks.iter().map(|b| Breakpoint { input: b.output.clone(), output: b.input.clone() }).collect(),
            slopes: self.slopes.iter().map(|x| x.recip()).collect(),
        }
    }

    /// The last point of slope change, (0, 0) when there is none.
    pub fn last_edge(&self) -> (LexIndex, LexIndex) {
        match self.breaks.last() {
            Some(b) => (b.input.clone(), b.output.clone()),
            None => (LexIndex::zero(self.r()), LexIndex::zero(self.r())),
        }
    }

    /// Ratio of the slopes left and right of `j`; 1 away from edges.
    pub fn multiplicity(&self, j: &LexIndex) -> Rat {
        match self.breaks.iter().position(|b| b.input == *j) {
            Some(t) => &self.slopes[t] / &self.slopes[t + 1],
            None => Rat::one(),
        }
    }

    /// Product of the multiplicities over all edges.
    pub fn degree(&self) -> Rat {
        self.breaks.iter().map(|b| self.multiplicity(&b.input)).fold(Rat::one(), |a, b| a * b)
    }

    pub fn is_identity(&self) -> bool {
        *self == HerbrandMap::identity(self.r())
    }
}
