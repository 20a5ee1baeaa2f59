use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial `x_1^{a_1} ... x_n^{a_n}` in a fixed number of variables.
///
/// Variables are 0-based internally; `Display` prints them 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

fn check_dims(a: &Monomial, b: &Monomial) -> Result<()> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch {
            left: a.nvars(),
            right: b.nvars(),
        });
    }
    Ok(())
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    /// Squarefree product of the given 0-based variables.
    pub fn squarefree(nvars: usize, vars: &[usize]) -> Self {
        let mut m = Self::one(nvars);
        for &v in vars {
            m.exps[v] = 1;
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// `nu_i(u)` for a 0-based variable index.
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// 0-based indices of the variables dividing this monomial.
    pub fn support(&self) -> Vec<usize> {
        (0..self.exps.len()).filter(|&i| self.exps[i] > 0).collect()
    }

    /// Largest 0-based variable index in the support, i.e. `m(u) - 1`.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Componentwise `self <= other`. False on dimension mismatch.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.nvars() == other.nvars() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        check_dims(self, other)?;
        Ok(self.lcm_with(other))
    }

    /// The bracket `[u, v]`: componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Result<Monomial> {
        check_dims(self, other)?;
        Ok(self.gcd_with(other))
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        check_dims(self, other)?;
        Ok(self.mul_with(other))
    }

    /// `w` with `other * w = self`.
    pub fn divide_exact(&self, other: &Monomial) -> Result<Monomial> {
        check_dims(self, other)?;
        self.try_div(other).ok_or_else(|| Error::NotDivisible {
            dividend: self.to_string(),
            divisor: other.to_string(),
        })
    }

    /// Strict comparison in the degree reverse lexicographic order with
    /// `x_1 > x_2 > ... > x_n`.
    pub fn degrevlex_greater(&self, other: &Monomial) -> Result<bool> {
        check_dims(self, other)?;
        Ok(self.degrevlex_cmp(other) == Ordering::Greater)
    }

    /// Total order: higher degree first; on ties the rightmost nonzero entry
    /// of `self - other` being negative means `self` is greater.
    pub fn degrevlex_cmp(&self, other: &Monomial) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().zip(&other.exps).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    pub(crate) fn lcm_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub(crate) fn gcd_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    pub(crate) fn mul_with(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub(crate) fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[i] += 1;
        m
    }

    /// Divides by `x_{i+1}`; `None` if it does not divide.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        Some(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn lcm_examples() {
        // x1^2 x2 and x1 x3
        let u = m(&[2, 1, 0]);
        let v = m(&[1, 0, 1]);
        assert_eq!(u.lcm(&v).unwrap(), m(&[2, 1, 1]));
        assert_eq!(u.lcm(&Monomial::one(3)).unwrap(), u);
        assert_eq!(u.lcm(&u).unwrap(), u);
    }

    #[test]
    fn gcd_examples() {
        let u = m(&[2, 1, 0]);
        let v = m(&[1, 0, 1]);
        assert_eq!(u.gcd(&v).unwrap(), m(&[1, 0, 0]));
        assert_eq!(u.gcd(&Monomial::one(3)).unwrap(), Monomial::one(3));
        assert_eq!(
            u.lcm(&v).unwrap().mul(&u.gcd(&v).unwrap()).unwrap(),
            u.mul(&v).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch() {
        let u = m(&[1, 0]);
        let v = m(&[1, 0, 0]);
        assert_eq!(
            u.lcm(&v),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
        assert!(u.gcd(&v).is_err());
        assert!(u.divide_exact(&v).is_err());
        assert!(u.degrevlex_greater(&v).is_err());
    }

    #[test]
    fn divide_exact_examples() {
        let u = m(&[1, 1, 1]);
        assert_eq!(u.divide_exact(&m(&[1, 1, 0])).unwrap(), m(&[0, 0, 1]));
        assert_eq!(u.divide_exact(&Monomial::one(3)).unwrap(), u);
        assert_eq!(u.divide_exact(&u).unwrap(), Monomial::one(3));
        assert!(matches!(
            u.divide_exact(&m(&[2, 0, 0])),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn degrevlex_examples() {
        // x1 x3 > x2 x3
        assert!(m(&[1, 0, 1]).degrevlex_greater(&m(&[0, 1, 1])).unwrap());
        let u = m(&[1, 2, 0]);
        assert!(!u.degrevlex_greater(&u).unwrap());
        // x1 x2 > x3 by degree
        assert!(m(&[1, 1, 0]).degrevlex_greater(&m(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn support_and_max_var() {
        let u = m(&[0, 3, 0, 1, 0]);
        assert_eq!(u.support(), vec![1, 3]);
        assert_eq!(u.max_var(), Some(3));
        assert_eq!(Monomial::one(3).max_var(), None);
        assert_eq!(u.to_string(), "x2^3*x4");
        assert_eq!(Monomial::one(2).to_string(), "1");
    }

    fn mono(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..4, n).prop_map(Monomial::new)
    }

    proptest! {
        #[test]
        fn lcm_is_divisible_by_both(u in mono(4), v in mono(4)) {
            let l = u.lcm(&v).unwrap();
            prop_assert!(l.divide_exact(&u).is_ok());
            prop_assert!(l.divide_exact(&v).is_ok());
            prop_assert!(l.exponents().iter().zip(u.exponents()).all(|(a, b)| a >= b));
        }

        #[test]
        fn degrevlex_is_strict_total_order(u in mono(3), v in mono(3), w in mono(3)) {
            let uv = u.degrevlex_greater(&v).unwrap();
            let vu = v.degrevlex_greater(&u).unwrap();
            let eq = u == v;
            prop_assert_eq!([uv, vu, eq].iter().filter(|&&b| b).count(), 1);
            if uv && v.degrevlex_greater(&w).unwrap() {
                prop_assert!(u.degrevlex_greater(&w).unwrap());
            }
        }

        #[test]
        fn degrevlex_is_multiplicative(u in mono(3), v in mono(3), w in mono(3)) {
            prop_assert_eq!(
                u.degrevlex_cmp(&v),
                u.mul_with(&w).degrevlex_cmp(&v.mul_with(&w))
            );
        }
    }
}
