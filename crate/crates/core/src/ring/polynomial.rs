use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Monomial;
use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Coeff::one())
    }

    /// `sign * m`, the common shape of resolution differential entries.
    pub fn signed(m: Monomial, negative: bool) -> Self {
        Self::term(m, coeff(if negative { -1 } else { 1 }))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// The unique term, if there is exactly one.
    pub fn single_term(&self) -> Option<(&Monomial, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self * other)
    }

    /// `c * m * self`.
    pub fn checked_mul_term(&self, m: &Monomial, c: &Coeff) -> Result<Polynomial> {
        if m.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                left: self.nvars,
                right: m.nvars(),
            });
        }
        Ok(self.mul_term(m, c))
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul_with(m), v * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Value of the polynomial with `x_i := point[i]`.
    pub fn evaluate(&self, point: &[Coeff]) -> Coeff {
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            total += v;
        }
        total
    }

    /// Leading term in degrevlex.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| a.0.degrevlex_cmp(b.0))
    }

    /// The quotient `q` with `q * divisor = self`, or `None` when the
    /// division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() || self.nvars != divisor.nvars {
            return None;
        }
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.try_div(&lm)?;
            let c = rc / &lc;
            rem = &rem - &divisor.mul_term(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// True if every term has strictly positive degree.
    pub fn in_maximal_ideal(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul_with(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degrevlex_cmp(a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn d_squared_cancellation() {
        // (-x2 * x1x3) + (x3 * x1x2) = 0
        let a = Polynomial::term(mono(&[1, 1, 1]), coeff(-1));
        let b = Polynomial::term(mono(&[1, 1, 1]), coeff(1));
        assert!(a.checked_add(&b).unwrap().is_zero());
    }

    #[test]
    fn identities() {
        let p = &Polynomial::var(2, 0) + &Polynomial::constant(2, coeff(3));
        assert_eq!(p.checked_add(&Polynomial::zero(2)).unwrap(), p);
        assert!(p.checked_sub(&p).unwrap().is_zero());
        assert!(p.checked_add(&Polynomial::zero(3)).is_err());
        assert_eq!(p.to_string(), "x1 + 3");
    }

    #[test]
    fn exact_division() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.div_exact(&(&x + &y)).unwrap(), &x - &y);
        assert!(p.div_exact(&(&x + &Polynomial::one(2))).is_none());
        assert!(x.div_exact(&y).is_none());
    }

    fn poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..3, 3), -3i64..4),
            0..4,
        )
        .prop_map(|ts| {
            let mut p = Polynomial::zero(3);
            for (e, c) in ts {
                p.add_term(Monomial::new(e), coeff(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in poly(), q in poly(), r in poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn division_inverts_multiplication(p in poly(), q in poly()) {
            prop_assume!(!q.is_zero());
            let prod = &p * &q;
            prop_assert_eq!(prod.div_exact(&q), Some(p));
        }
    }
}
