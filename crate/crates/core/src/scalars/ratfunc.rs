use std::fmt;

use super::{EliminationField, Field, Matrix, Rat, Ring};

/// Dense univariate polynomial in `h` over ℚ. Zero is the empty vector.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyQ {
    coeffs: Vec<Rat>,
}

impl PolyQ {
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = PolyQ { coeffs };
        p.trim();
        p
    }

    pub fn hbar() -> Self {
        PolyQ::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        PolyQ::from_coeffs(vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().unwrap();
                PolyQ::from_coeffs(self.coeffs.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PolyQ::from_coeffs(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// `h -> -h`.
    pub fn hbar_reflect(&self) -> Self {
        PolyQ::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        PolyQ::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Rat::from_int(i as i64)))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on zero divisor.
    pub fn divmod(&self, div: &PolyQ) -> (PolyQ, PolyQ) {
        let dd = div.degree().expect("division by zero polynomial");
        let lead_inv = div.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (PolyQ::from_coeffs(vec![]), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].mul(&lead_inv);
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for j in 0..=dd {
                let sub = q.mul(&div.coeffs[j]);
                rem[i - dd + j] = rem[i - dd + j].sub(&sub);
            }
        }
        (PolyQ::from_coeffs(quot), PolyQ::from_coeffs(rem))
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let mut a = self.clone();
        let mut b = other.clone();
        while !Ring::is_zero(&b) {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl Ring for PolyQ {
    fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }
    fn one() -> Self {
        PolyQ::constant(Rat::one())
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyQ::from_coeffs((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        PolyQ::from_coeffs(self.coeffs.iter().map(|c| c.neg()).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PolyQ::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        PolyQ::from_coeffs(out)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_int(n: i64) -> Self {
        PolyQ::constant(Rat::from_int(n))
    }
    fn from_rat(r: &Rat) -> Self {
        PolyQ::constant(r.clone())
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "h")?,
                1 => write!(f, "{}*h", a)?,
                _ if a.is_one() => write!(f, "h^{}", i)?,
                _ => write!(f, "{}*h^{}", a, i)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Element of ℚ(h): a reduced fraction of polynomials with monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: PolyQ,
    den: PolyQ,
}

impl RatFunc {
    pub fn new(num: PolyQ, den: PolyQ) -> Self {
        assert!(!Ring::is_zero(&den), "zero denominator");
        let mut rf = RatFunc { num, den };
        rf.reduce();
        rf
    }

    pub fn from_poly(p: PolyQ) -> Self {
        RatFunc {
            num: p,
            den: PolyQ::one(),
        }
    }

    pub fn hbar() -> Self {
        Self::from_poly(PolyQ::hbar())
    }

    pub fn hbar_pow(n: i64) -> Self {
        let mut p = PolyQ::one();
        for _ in 0..n.unsigned_abs() {
            p = p.mul(&PolyQ::hbar());
        }
        if n >= 0 {
            Self::from_poly(p)
        } else {
            RatFunc {
                num: PolyQ::one(),
                den: p,
            }
        }
    }

    pub fn numerator(&self) -> &PolyQ {
        &self.num
    }

    pub fn denominator(&self) -> &PolyQ {
        &self.den
    }

    fn reduce(&mut self) {
        if Ring::is_zero(&self.num) {
            self.den = PolyQ::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.divmod(&g).0;
            self.den = self.den.divmod(&g).0;
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn hbar_reflect(&self) -> Self {
        RatFunc::new(self.num.hbar_reflect(), self.den.hbar_reflect())
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: PolyQ::zero(),
            den: PolyQ::one(),
        }
    }
    fn one() -> Self {
        RatFunc {
            num: PolyQ::one(),
            den: PolyQ::one(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn is_zero(&self) -> bool {
        Ring::is_zero(&self.num)
    }
    fn from_int(n: i64) -> Self {
        Self::from_poly(PolyQ::from_int(n))
    }
    fn from_rat(r: &Rat) -> Self {
        Self::from_poly(PolyQ::constant(r.clone()))
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl EliminationField for RatFunc {
    fn matrix_rank(m: &Matrix<Self>) -> usize {
        super::matrix::rank_fraction_free(m)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_monic_denominator() {
        // (h^2 - 1) / (2h - 2) = (h + 1)/2
        let num = PolyQ::from_coeffs(vec![Rat::from_int(-1), Rat::zero(), Rat::one()]);
        let den = PolyQ::from_coeffs(vec![Rat::from_int(-2), Rat::from_int(2)]);
        let r = RatFunc::new(num, den);
        assert!(r.denominator().is_one());
        assert_eq!(r.numerator().coeff(0), Rat::new(1, 2));
        assert_eq!(r.numerator().coeff(1), Rat::new(1, 2));
    }

    #[test]
    fn field_laws() {
        let r = RatFunc::new(
            PolyQ::from_coeffs(vec![Rat::one(), Rat::one()]),
            PolyQ::from_coeffs(vec![Rat::zero(), Rat::from_int(3)]),
        );
        let i = r.inv().unwrap();
        assert_eq!(r.mul(&i), RatFunc::one());
        assert!(r.add(&r.neg()).is_zero());
    }

    #[test]
    fn reflect_is_homomorphism() {
        let r = RatFunc::new(
            PolyQ::hbar(),
            PolyQ::from_coeffs(vec![Rat::one(), Rat::one()]),
        );
        let s = RatFunc::from_poly(PolyQ::from_coeffs(vec![Rat::from_int(2), Rat::one()]));
        assert_eq!(
            r.hbar_reflect().mul(&s.hbar_reflect()),
            r.mul(&s).hbar_reflect()
        );
        assert_eq!(r.hbar_reflect().hbar_reflect(), r);
    }
}
