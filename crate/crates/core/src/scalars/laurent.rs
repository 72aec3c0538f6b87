use std::fmt;

use super::{Rat, Ring};

/// Default truncation order: far above anything the desk-scale identities
/// can reach, so exactness certificates stay available.
pub const DEFAULT_HBAR_ORDER: i64 = 64;

/// Truncated Laurent series in `h` over ℚ.
///
/// Arithmetic is exact below the truncation order `order`; terms of exponent
/// `>= order` are discarded and the discard is recorded in `lossy`. The
/// order only decreases under multiplication by negative powers of `h`, as
/// dictated by how little is known about the unseen tail.
#[derive(Clone, Debug)]
pub struct LaurentTrunc {
    lower: i64,
    coeffs: Vec<Rat>,
    order: i64,
    lossy: bool,
}

impl LaurentTrunc {
    pub fn zero_at_order(order: i64) -> Self {
        LaurentTrunc {
            lower: 0,
            coeffs: Vec::new(),
            order,
            lossy: false,
        }
    }

    pub fn from_rat_at(r: Rat, order: i64) -> Self {
        let mut v = LaurentTrunc {
            lower: 0,
            coeffs: vec![r],
            order,
            lossy: false,
        };
        v.normalize();
        v
    }

    /// `c * h^n`.
    pub fn monomial(c: Rat, n: i64, order: i64) -> Self {
        let mut v = LaurentTrunc {
            lower: n,
            coeffs: vec![c],
            order,
            lossy: false,
        };
        v.normalize();
        v
    }

    pub fn hbar_pow(n: i64) -> Self {
        Self::monomial(Rat::one(), n, DEFAULT_HBAR_ORDER)
    }

    pub fn from_terms(terms: &[(i64, Rat)], order: i64) -> Self {
        let mut acc = Self::zero_at_order(order);
        for (n, c) in terms {
            acc = acc.add(&Self::monomial(c.clone(), *n, order));
        }
        acc
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_lossy(&self) -> bool {
        self.lossy
    }

    /// Exponent of the lowest stored term.
    pub fn min_exp(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lower)
        }
    }

    pub fn max_exp(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lower + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, n: i64) -> Rat {
        if n < self.lower || n >= self.lower + self.coeffs.len() as i64 {
            Rat::zero()
        } else {
            self.coeffs[(n - self.lower) as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lower + i as i64, c))
    }

    fn normalize(&mut self) {
        // discard unknown-order terms, flagging any nonzero loss
        let mut kept = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let exp = self.lower + i as i64;
            if exp >= self.order {
                if !c.is_zero() {
                    self.lossy = true;
                }
            } else {
                kept.push(c.clone());
            }
        }
        self.coeffs = kept;
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        let leading_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros > 0 {
            self.coeffs.drain(..leading_zeros);
            self.lower += leading_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.lower = 0;
        }
    }

    /// `a(h) -> a(-h)`: involutive ring homomorphism.
    pub fn hbar_reflect(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let exp = out.lower + i as i64;
            if exp.rem_euclid(2) == 1 {
                *c = c.neg();
            }
        }
        out
    }

    /// The derivation `h d/dh`: multiplies the `h^n` term by `n`.
    pub fn hbar_d_hbar(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let exp = out.lower + i as i64;
            *c = c.mul(&Rat::from_int(exp));
        }
        out.normalize();
        out
    }

    /// Multiplication by `h^k`; shifts the truncation order along.
    pub fn mul_hbar_pow(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.lower += k;
        out.order = out.order.saturating_add(k);
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            let mut z = Self::zero_at_order(self.order);
            z.lossy = false;
            return z;
        }
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x = x.mul(c);
        }
        out
    }

    /// Certifies exact equality with zero, or reports that truncation has
    /// destroyed the information needed to decide.
    pub fn certify_zero(&self) -> Result<bool, TruncationUncertain> {
        if !self.coeffs.is_empty() {
            return Ok(false);
        }
        if self.lossy {
            Err(TruncationUncertain { order: self.order })
        } else {
            Ok(true)
        }
    }

    /// Comparison below the common truncation order.
    pub fn eq_below_order(&self, other: &Self) -> bool {
        let bound = self.order.min(other.order);
        let lo = match (self.min_exp(), other.min_exp()) {
            (None, None) => return true,
            (a, b) => a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX)),
        };
        let hi = self
            .max_exp()
            .unwrap_or(lo)
            .max(other.max_exp().unwrap_or(lo))
            .min(bound - 1);
        (lo..=hi).all(|n| self.coeff(n) == other.coeff(n))
    }
}

/// A zero test or comparison was requested at or beyond the truncation order.
#[derive(Debug, Clone, thiserror::Error)]
#[error("value is only known below h^{order}; comparison refused")]
pub struct TruncationUncertain {
    pub order: i64,
}

impl PartialEq for LaurentTrunc {
    fn eq(&self, other: &Self) -> bool {
        if self.lossy || other.lossy {
            // conservative: equal only when both carry the same knowledge
            return self.order == other.order
                && self.lossy == other.lossy
                && self.eq_below_order(other);
        }
        self.lower == other.lower && self.coeffs == other.coeffs
    }
}

impl Ring for LaurentTrunc {
    fn zero() -> Self {
        Self::zero_at_order(DEFAULT_HBAR_ORDER)
    }
    fn one() -> Self {
        Self::from_rat_at(Rat::one(), DEFAULT_HBAR_ORDER)
    }

    fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let lower = match (self.min_exp(), other.min_exp()) {
            (None, None) => {
                return LaurentTrunc {
                    lower: 0,
                    coeffs: Vec::new(),
                    order,
                    lossy: self.lossy || other.lossy,
                }
            }
            (a, b) => a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX)),
        };
        let upper = self
            .max_exp()
            .unwrap_or(lower)
            .max(other.max_exp().unwrap_or(lower));
        let mut coeffs = Vec::with_capacity((upper - lower + 1) as usize);
        for n in lower..=upper {
            coeffs.push(self.coeff(n).add(&other.coeff(n)));
        }
        let mut out = LaurentTrunc {
            lower,
            coeffs,
            order,
            lossy: self.lossy || other.lossy,
        };
        out.normalize();
        out
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.neg();
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        // knowledge bound: a*O(h^Nb) = O(h^(Nb+la)), and symmetrically
        let order = match (self.min_exp(), other.min_exp()) {
            (Some(la), Some(lb)) => (self.order.saturating_add(lb))
                .min(other.order.saturating_add(la))
                .min(self.order.saturating_add(other.order)),
            // one factor has no visible terms
            (Some(la), None) => other.order.saturating_add(la),
            (None, Some(lb)) => self.order.saturating_add(lb),
            (None, None) => self.order.saturating_add(other.order),
        };
        let lossy = (self.lossy && (other.lossy || !other.coeffs.is_empty()))
            || (other.lossy && !self.coeffs.is_empty());
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            let mut z = Self::zero_at_order(order);
            z.lossy = lossy;
            return z;
        }
        let lower = self.lower + other.lower;
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut out = LaurentTrunc {
            lower,
            coeffs,
            order,
            lossy,
        };
        out.normalize();
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && !self.lossy
    }

    fn from_int(n: i64) -> Self {
        Self::from_rat_at(Rat::from_int(n), DEFAULT_HBAR_ORDER)
    }

    fn from_rat(r: &Rat) -> Self {
        Self::from_rat_at(r.clone(), DEFAULT_HBAR_ORDER)
    }
}

impl fmt::Display for LaurentTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.terms() {
            if wrote {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match n {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "h")?,
                1 => write!(f, "{}*h", a)?,
                _ if a.is_one() => write!(f, "h^{}", n)?,
                _ => write!(f, "{}*h^{}", a, n)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        if self.lossy {
            write!(f, " + O(h^{})", self.order)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_parity() {
        let h = LaurentTrunc::hbar_pow(1);
        assert_eq!(h.hbar_reflect(), h.neg());
        let even = LaurentTrunc::from_terms(&[(0, Rat::one()), (2, Rat::one())], 64);
        assert_eq!(even.hbar_reflect(), even);
        let mixed = LaurentTrunc::from_terms(&[(-1, Rat::from_int(2)), (1, Rat::from_int(3))], 64);
        assert_eq!(mixed.hbar_reflect(), mixed.neg());
        assert_eq!(mixed.hbar_reflect().hbar_reflect(), mixed);
    }

    #[test]
    fn truncation_is_tracked() {
        // (1 + h^5)^2 at order 6: the h^10 term falls outside the window
        let v = LaurentTrunc::from_terms(&[(0, Rat::one()), (5, Rat::one())], 6);
        let sq = v.mul(&v);
        assert!(sq.is_lossy());
        assert_eq!(sq.coeff(5), Rat::from_int(2));
        let diff = sq.sub(&sq.clone());
        assert!(diff.certify_zero().is_err());
        // pure monomials square exactly: h^5 . h^5 is known below order 11
        let mono = LaurentTrunc::monomial(Rat::one(), 5, 6);
        let exact = mono.mul(&mono);
        assert!(!exact.is_lossy());
        assert_eq!(exact.min_exp(), Some(10));
        assert!(matches!(exact.certify_zero(), Ok(false)));
    }

    #[test]
    fn order_shifts_with_negative_powers() {
        let v = LaurentTrunc::monomial(Rat::one(), 0, 6);
        let w = v.mul_hbar_pow(-2);
        assert_eq!(w.order(), 4);
        assert_eq!(w.min_exp(), Some(-2));
    }

    #[test]
    fn hbar_derivation() {
        let v = LaurentTrunc::from_terms(
            &[
                (-1, Rat::from_int(2)),
                (0, Rat::from_int(5)),
                (3, Rat::one()),
            ],
            64,
        );
        let d = v.hbar_d_hbar();
        assert_eq!(d.coeff(-1), Rat::from_int(-2));
        assert_eq!(d.coeff(0), Rat::zero());
        assert_eq!(d.coeff(3), Rat::from_int(3));
    }
}
