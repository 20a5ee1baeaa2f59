//! The decomposition function `g: M(I) -> G(I)` of an ideal with linear
//! quotients, its complement `c(u) = u / g(u)`, and regularity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{OrderedIdeal, VarSet};
use crate::ring::Monomial;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub generator_index: usize,
    pub complement: Monomial,
}

/// `set(g(x_s u)) = found` is not contained in `set(u)` for `u = generators[generator]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RegularityWitness {
    pub generator: usize,
    pub s: usize,
    pub found: VarSet,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularityReport {
    pub regular: bool,
    pub witness: Option<RegularityWitness>,
}

/// Result of a bounded check of `g(x_s g(x_t u)) = g(x_t g(x_s u))`.
/// The identity quantifies over all of `M(I)`; only the sample is checked.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExchangeReport {
    pub holds: bool,
    pub sampled: usize,
    pub witness: Option<(Monomial, usize, usize)>,
}

/// An ideal with linear quotients together with its sets; answers
/// decomposition queries on demand (M(I) is never materialized).
#[derive(Clone, Debug)]
pub struct Decomposer<'a> {
    ideal: &'a OrderedIdeal,
    sets: Vec<VarSet>,
}

impl<'a> Decomposer<'a> {
    pub fn new(ideal: &'a OrderedIdeal) -> Result<Self> {
        let sets = ideal.require_sets()?;
        Ok(Decomposer { ideal, sets })
    }

    pub fn ideal(&self) -> &OrderedIdeal {
        self.ideal
    }

    pub fn sets(&self) -> &[VarSet] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> &VarSet {
        &self.sets[j]
    }

    /// Index of `g(u)`: the first generator dividing `u`.
    pub fn g(&self, u: &Monomial) -> Option<usize> {
        self.ideal.membership(u, self.ideal.len())
    }

    pub fn decompose(&self, u: &Monomial) -> Result<Decomposition> {
        let j = self.g(u).ok_or_else(|| Error::NotInIdeal(u.clone()))?;
        let complement = u.divide_exact(self.ideal.generator(j))?;
        if self.sets[j].iter().any(|&i| complement.exponent(i) > 0) {
            return Err(Error::InvariantViolation(format!(
                "set(g({u})) meets supp(c({u}))"
            )));
        }
        Ok(Decomposition {
            generator_index: j,
            complement,
        })
    }

    /// `set(u)` for `u` in `M(I)`, read as `set(g(u))`.
    fn set_of(&self, u: &Monomial) -> Option<&VarSet> {
        self.g(u).map(|j| &self.sets[j])
    }

    /// Checks `set(g(x_s u)) ⊆ set(u)` for every generator `u` and `s` in `set(u)`.
    pub fn is_regular(&self) -> RegularityReport {
        for (j, u) in self.ideal.generators().iter().enumerate() {
            for &s in &self.sets[j] {
                let k = self.g(&u.mul_var(s)).expect("x_s u lies in I_{j-1}");
                let found = &self.sets[k];
                if !found.iter().all(|i| self.sets[j].contains(i)) {
                    return RegularityReport {
                        regular: false,
                        witness: Some(RegularityWitness {
                            generator: j,
                            s,
                            found: found.clone(),
                        }),
                    };
                }
            }
        }
        RegularityReport {
            regular: true,
            witness: None,
        }
    }

    /// Fails with [`Error::NotRegular`] when the decomposition function is
    /// not regular.
    pub fn require_regular(&self) -> Result<()> {
        match self.is_regular().witness {
            None => Ok(()),
            Some(w) => Err(Error::NotRegular {
                generator: self.ideal.generator(w.generator).clone(),
                s: w.s + 1,
                found: w.found.iter().map(|i| i + 1).collect(),
            }),
        }
    }

    /// `G(I)` together with every `x_s u_j` for `s` in `set(u_j)`.
    pub fn default_sample(&self) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self.ideal.generators().to_vec();
        for (j, u) in self.ideal.generators().iter().enumerate() {
            for &s in &self.sets[j] {
                out.push(u.mul_var(s));
            }
        }
        out
    }

    pub fn exchange_identity_check(&self, sample: Option<&[Monomial]>) -> ExchangeReport {
        let owned;
        let sample = match sample {
            Some(s) => s,
            None => {
                owned = self.default_sample();
                &owned
            }
        };
        let gen = |u: &Monomial| self.ideal.generator(self.g(u).expect("in ideal"));
        for u in sample {
            let Some(set) = self.set_of(u) else { continue };
            for &s in set {
                for &t in set {
                    if s >= t {
                        continue;
                    }
                    let left = self.g(&gen(&u.mul_var(t)).mul_var(s));
                    let right = self.g(&gen(&u.mul_var(s)).mul_var(t));
                    if left != right {
                        return ExchangeReport {
                            holds: false,
                            sampled: sample.len(),
                            witness: Some((u.clone(), s, t)),
                        };
                    }
                }
            }
        }
        ExchangeReport {
            holds: true,
            sampled: sample.len(),
            witness: None,
        }
    }

    /// Returns whether `g(uv) = g(u)`, asserting that this agrees with
    /// `set(g(u)) ∩ supp(v) = ∅`.
    pub fn locality_check(&self, u: &Monomial, v: &Monomial) -> Result<bool> {
        let gu = self.g(u).ok_or_else(|| Error::NotInIdeal(u.clone()))?;
        let uv = u.mul(v)?;
        let same = self.g(&uv) == Some(gu);
        let disjoint = self.sets[gu].iter().all(|&i| v.exponent(i) == 0);
        if same != disjoint {
            return Err(Error::InvariantViolation(format!(
                "g({u}*{v}) = g({u}) is {same} but set/support disjointness is {disjoint}"
            )));
        }
        Ok(same)
    }
}
