use num_traits::{One, Zero};

use crate::arith::rat::{ri, vp_rat, Rat};
use crate::error::{invalid, Result};

/// A one-variable power series over Q truncated after degree D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries1 {
    /// Coefficients of X^0, ..., X^D.
    pub coeffs: Vec<Rat>,
}

impl PowerSeries1 {
    pub fn zero(deg: usize) -> PowerSeries1 {
        PowerSeries1 { coeffs: vec![Rat::zero(); deg + 1] }
    }

    pub fn one(deg: usize) -> PowerSeries1 {
        let mut s = Self::zero(deg);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &PowerSeries1) -> PowerSeries1 {
        PowerSeries1 { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &PowerSeries1) -> PowerSeries1 {
        PowerSeries1 { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &PowerSeries1) -> PowerSeries1 {
        let d = self.degree().min(o.degree());
        let mut c = vec![Rat::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(d + 1 - i) {
                c[i + j] += a * b;
            }
        }
        PowerSeries1 { coeffs: c }
    }

    pub fn scale(&self, k: &Rat) -> PowerSeries1 {
        PowerSeries1 { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn pow(&self, e: u64) -> PowerSeries1 {
        let mut acc = Self::one(self.degree());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// exp of a series without constant term, via n e_n = sum k l_k e_{n-k}.
    pub fn exp(&self) -> Result<PowerSeries1> {
        if !self.coeffs[0].is_zero() {
            return invalid("exp needs a series without constant term");
        }
        let d = self.degree();
        let mut e = vec![Rat::zero(); d + 1];
        e[0] = Rat::one();
        for n in 1..=d {
            let mut acc = Rat::zero();
            for k in 1..=n {
                acc += ri(k as i64) * &self.coeffs[k] * &e[n - k];
            }
            e[n] = acc / ri(n as i64);
        }
        Ok(PowerSeries1 { coeffs: e })
    }

    /// f(g) for g without constant term.
    pub fn compose(&self, g: &PowerSeries1) -> Result<PowerSeries1> {
        if !g.coeffs[0].is_zero() {
            return invalid("inner series must have no constant term");
        }
        let d = self.degree().min(g.degree());
        let mut acc = Self::zero(d);
        for c in self.coeffs.iter().take(d + 1).rev() {
            acc = acc.mul(g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// X^k truncated to degree D.
    pub fn monomial(deg: usize, k: usize, c: Rat) -> PowerSeries1 {
        let mut s = Self::zero(deg);
        if k <= deg {
            s.coeffs[k] = c;
        }
        s
    }

    /// Every coefficient has nonnegative p-adic valuation.
    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| vp_rat(p, c).is_none_or(|v| v >= 0))
    }
}

/// E(X) = exp(X + X^p/p + X^{p^2}/p^2 + ...) to degree D.
pub fn artin_hasse(p: u64, deg: usize) -> Result<PowerSeries1> {
    if deg == 0 {
        return invalid("degree must be >= 1");
    }
    let mut log = PowerSeries1::zero(deg);
    let mut k = 1usize;
    while k <= deg {
        log.coeffs[k] = Rat::new(1.into(), k.into());
        k *= p as usize;
    }
    log.exp()
}

/// Outcome of the congruence check; all fields must hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinHasseReport {
    pub p: u64,
    pub degree: usize,
    /// E(X) has p-integral coefficients.
    pub integral: bool,
    /// E(X)^p = E(X^p) exp(pX) exactly.
    pub exact_identity: bool,
    /// E(X)^p - E(X^p + pX) lies in the ideal (p^2 X, p X^p).
    pub congruence: bool,
}

impl ArtinHasseReport {
    pub fn passed(&self) -> bool {
        self.integral && self.exact_identity && self.congruence
    }
}

/// A series lies in the ideal (p^2 X, p X^p) of Z_p[[X]].
fn in_ideal(p: u64, s: &PowerSeries1) -> bool {
    s.coeffs.iter().enumerate().all(|(n, c)| {
        let need = match n {
            0 => return c.is_zero(),
            n if n < p as usize => 2,
            _ => 1,
        };
        vp_rat(p, c).is_none_or(|v| v >= need)
    })
}

pub fn artin_hasse_congruence_check(p: u64, deg: usize) -> Result<ArtinHasseReport> {
    let e = artin_hasse(p, deg)?;
    let xp = PowerSeries1::monomial(deg, p as usize, Rat::one());
    let px = PowerSeries1::monomial(deg, 1, ri(p as i64));
    let lhs = e.pow(p);
    let e_xp = e.compose(&xp)?;
    let rhs_exact = e_xp.mul(&px.exp()?);
    let rhs_cong = e.compose(&xp.add(&px))?;
    Ok(ArtinHasseReport {
        p,
        degree: deg,
        integral: e.is_p_integral(p),
        exact_identity: lhs == rhs_exact,
        congruence: in_ideal(p, &lhs.sub(&rhs_cong)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;

    #[test]
    fn low_coefficients() {
        let e = artin_hasse(2, 6).unwrap();
        assert_eq!(e.coeffs[0], ri(1));
        assert_eq!(e.coeffs[1], ri(1));
        assert_eq!(e.coeffs[2], ri(1));
        let e3 = artin_hasse(3, 6).unwrap();
        // 1/2 from X^2/2!, nothing else contributes below X^3
        assert_eq!(e3.coeffs[2], rat(1, 2));
    }

    #[test]
    fn exp_is_not_integral() {
        let x = PowerSeries1::monomial(8, 1, Rat::one());
        assert!(!x.exp().unwrap().is_p_integral(2));
        assert!(artin_hasse(2, 8).unwrap().is_p_integral(2));
    }

    #[test]
    fn congruence_examples() {
        assert!(artin_hasse_congruence_check(3, 9).unwrap().passed());
        assert!(artin_hasse_congruence_check(2, 8).unwrap().passed());
    }

    #[test]
    fn ideal_membership() {
        let mut s = PowerSeries1::zero(5);
        s.coeffs[1] = ri(9);
        s.coeffs[4] = ri(3);
        assert!(in_ideal(3, &s));
        s.coeffs[2] = ri(3);
        assert!(!in_ideal(3, &s));
    }
}
