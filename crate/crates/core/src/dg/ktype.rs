use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::{single, DgAlgebra};
use crate::error::{Error, Result};
use crate::linalg;
use crate::resolution::{ComplexMap, SparseMatrix};
use crate::ring::{coeff, Coeff, Monomial, Polynomial};

/// Number of random evaluation points tried before the symbolic fallback.
pub const EVALUATION_POINTS: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Evaluation,
    Symbolic,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PairingCheck {
    pub degree: usize,
    pub injective: bool,
    pub method: RankMethod,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct KoszulTypeReport {
    pub n: usize,
    pub ranks: Vec<usize>,
    pub rank_condition: bool,
    pub pairings: Vec<PairingCheck>,
}

impl KoszulTypeReport {
    pub fn passed(&self) -> bool {
        self.rank_condition && self.pairings.iter().all(|p| p.injective)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Entry `(r, c)` is the coefficient of the top basis element in
/// `a_r · b_c` for `a_r ∈ A_i`, `b_c ∈ A_{n−i}`.
pub fn pairing_matrix(a: &DgAlgebra, i: usize, n: usize) -> Vec<Vec<Polynomial>> {
    let nvars = a.nvars();
    (0..a.complex().rank(i))
        .map(|r| {
            (0..a.complex().rank(n - i))
                .map(|c| {
                    a.product_basis((i, r), (n - i, c))
                        .remove(&0)
                        .unwrap_or_else(|| Polynomial::zero(nvars))
                })
                .collect()
        })
        .collect()
}

fn evaluate(m: &[Vec<Polynomial>], point: &[Coeff]) -> Vec<Vec<Coeff>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.evaluate(point)).collect())
        .collect()
}

/// Rank condition `rank A_i = C(n, i)` and injectivity of
/// `A_i -> Hom(A_{n−i}, A_n)`. Injectivity is certified by a full-rank
/// evaluation at a seeded random integer point; if every point is
/// deficient, the symbolic determinant decides.
pub fn koszul_type_check(a: &DgAlgebra, n: usize, seed: u64) -> KoszulTypeReport {
    let c = a.complex();
    let ranks = (0..=n.max(c.length())).map(|i| c.rank(i)).collect::<Vec<_>>();
    let rank_condition = c.length() <= n && (0..=n).all(|i| c.rank(i) == binomial(n, i));
    let mut report = KoszulTypeReport {
        n,
        ranks,
        rank_condition,
        pairings: Vec::new(),
    };
    if !rank_condition {
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..=n {
        let p = pairing_matrix(a, i, n);
        let size = p.len();
        let certified = (0..EVALUATION_POINTS).any(|_| {
            let point: Vec<Coeff> = (0..a.nvars())
                .map(|_| coeff(rng.gen_range(-1000..=1000)))
                .collect();
            linalg::rank(&evaluate(&p, &point)) == size
        });
        report.pairings.push(if certified {
            PairingCheck {
                degree: i,
                injective: true,
                method: RankMethod::Evaluation,
            }
        } else {
            PairingCheck {
                degree: i,
                injective: !linalg::det(&p, a.nvars()).is_zero(),
                method: RankMethod::Symbolic,
            }
        });
    }
    report
}

/// `φ̃: M -> A` with `φ̃(m) a = m φ(a)` on top coefficients, stored as
/// `numerators[i] / denominators[i]` per degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TildePhi {
    /// Coefficient of `φ(e)` on `ē`.
    pub delta: Polynomial,
    pub numerators: Vec<SparseMatrix>,
    pub denominators: Vec<Polynomial>,
}

/// Identities `φ̃ ∘ φ = δ · id_A` and `φ ∘ φ̃ = δ · id_M`, per degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CompositeReport {
    pub tilde_after_phi: bool,
    pub phi_after_tilde: bool,
}

impl CompositeReport {
    pub fn passed(&self) -> bool {
        self.tilde_after_phi && self.phi_after_tilde
    }
}

fn monic_monomial(p: &Polynomial) -> Option<Monomial> {
    match p.single_term() {
        Some((m, c)) if *c == coeff(1) => Some(m.clone()),
        _ => None,
    }
}

impl TildePhi {
    /// True when every denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.denominators.iter().all(Polynomial::is_constant)
    }

    pub fn composites(&self, phi: &ComplexMap) -> CompositeReport {
        let mut report = CompositeReport {
            tilde_after_phi: true,
            phi_after_tilde: true,
        };
        for (i, (num, den)) in self.numerators.iter().zip(&self.denominators).enumerate() {
            let scale = &self.delta * den;
            let phi_i = phi.matrix(i);
            if num.compose(&phi_i) != SparseMatrix::scalar(num.nrows(), &scale) {
                report.tilde_after_phi = false;
            }
            if phi_i.compose(num) != SparseMatrix::scalar(num.ncols(), &scale) {
                report.phi_after_tilde = false;
            }
        }
        report
    }

    /// `(f / δ) φ̃` as a complex map `M -> A`; fails with
    /// [`Error::DivisibilityFailure`] unless every entry of `f · φ̃` is
    /// divisible by `δ`. With `f = δ` this is `φ̃` itself.
    pub fn scaled_map(&self, phi: &ComplexMap, f: &Polynomial) -> Result<ComplexMap> {
        let mut matrices = Vec::with_capacity(self.numerators.len());
        for (i, (num, den)) in self.numerators.iter().zip(&self.denominators).enumerate() {
            let divisor = &self.delta * den;
            let mut out = SparseMatrix::zero(num.nrows(), num.ncols(), num.nvars());
            for (r, c, p) in num.entries() {
                let q = (f * p).div_exact(&divisor).ok_or_else(|| {
                    Error::DivisibilityFailure(format!(
                        "({f}) * ({p}) / ({divisor}) in degree {i}, entry ({}, {})",
                        r + 1,
                        c + 1
                    ))
                })?;
                out.set(r, c, q);
            }
            matrices.push(out);
        }
        let source = phi.target().clone();
        let target = phi.source().clone();
        ComplexMap::new(source, target, matrices, monic_monomial(f))
    }

    /// `φ̃` itself; requires polynomial entries.
    pub fn to_map(&self, phi: &ComplexMap) -> Result<ComplexMap> {
        self.scaled_map(phi, &self.delta)
    }
}

/// Solves `b · a = m · φ(a)` (top coefficients, all `a ∈ A_{n−i}`) for
/// `b ∈ A_i`, for each basis element `m` of `M_i`, by Cramer's rule.
pub fn tilde_phi(a: &DgAlgebra, m: &DgAlgebra, phi: &ComplexMap, n: usize) -> Result<TildePhi> {
    let nvars = a.nvars();
    if a.complex().rank(n) != 1 || m.complex().rank(n) != 1 {
        return Err(Error::SingularPairing { degree: n });
    }
    let delta = phi
        .apply(n, &single(0, nvars))
        .remove(&0)
        .ok_or(Error::SingularPairing { degree: n })?;
    let mut numerators = Vec::with_capacity(n + 1);
    let mut denominators = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let p = pairing_matrix(a, i, n);
        let size = p.len();
        let d = linalg::det(&p, nvars);
        if d.is_zero() {
            return Err(Error::SingularPairing { degree: i });
        }
        let mcols = m.complex().rank(i);
        let mut columns: Vec<Vec<Polynomial>> = Vec::with_capacity(mcols);
        for k in 0..mcols {
            let rhs: Vec<Polynomial> = (0..a.complex().rank(n - i))
                .map(|c| {
                    let pa = phi.apply(n - i, &single(c, nvars));
                    m.mul(i, &single(k, nvars), n - i, &pa)
                        .remove(&0)
                        .unwrap_or_else(|| Polynomial::zero(nvars))
                })
                .collect();
            // b^T P = rhs^T: b_j = det(P with row j replaced by rhs) / det(P)
            let col = (0..size)
                .map(|j| {
                    let mut q = p.clone();
                    q[j] = rhs.clone();
                    linalg::det(&q, nvars)
                })
                .collect();
            columns.push(col);
        }
        let exact: Option<Vec<Vec<Polynomial>>> = columns
            .iter()
            .map(|col| col.iter().map(|x| x.div_exact(&d)).collect())
            .collect();
        let (cols, den) = match exact {
            Some(q) => (q, Polynomial::one(nvars)),
            None => (columns, d),
        };
        let mut num = SparseMatrix::zero(size, mcols, nvars);
        for (k, col) in cols.into_iter().enumerate() {
            for (j, x) in col.into_iter().enumerate() {
                num.set(j, k, x);
            }
        }
        numerators.push(num);
        denominators.push(den);
    }
    Ok(TildePhi {
        delta,
        numerators,
        denominators,
    })
}

#[cfg(test)]
mod tests {
    use super::super::algebra::{koszul_dg, taylor_dg};
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn koszul_complex_is_koszul_type() {
        let k = koszul_dg(&[Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2)])
            .unwrap();
        let r = koszul_type_check(&k, 3, 7);
        assert!(r.passed(), "{r:?}");
        assert!(r.pairings.iter().all(|p| p.method == RankMethod::Evaluation));
    }

    #[test]
    fn taylor_rank_condition() {
        let t = taylor_dg(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        let r = koszul_type_check(&t, 3, 1);
        assert!(r.rank_condition);
        assert_eq!(r.ranks, vec![1, 3, 3, 1]);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn wrong_ranks_fail_immediately() {
        let t = taylor_dg(&[mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        let r = koszul_type_check(&t, 1, 0);
        assert!(!r.rank_condition && r.pairings.is_empty());
    }

    #[test]
    fn degenerate_pairing_is_decided_symbolically() {
        let mut t = taylor_dg(&[mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        for x in t.basis() {
            for y in t.basis() {
                if x.0 == 1 && y.0 == 1 {
                    t.set_product(x, y, Default::default());
                }
            }
        }
        let r = koszul_type_check(&t, 2, 3);
        assert!(!r.passed());
        assert_eq!(r.pairings[1].method, RankMethod::Symbolic);
    }

    #[test]
    fn one_dimensional_tilde_phi() {
        // f1 = a g1 with a = x, g1 = y: φ(e) = x h
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let a = koszul_dg(&[&x * &y]).unwrap();
        let m = koszul_dg(std::slice::from_ref(&y)).unwrap();
        let phi = ComplexMap::new(
            a.complex().clone(),
            m.complex().clone(),
            vec![SparseMatrix::identity(1, 2), SparseMatrix::scalar(1, &x)],
            None,
        )
        .unwrap();
        let t = tilde_phi(&a, &m, &phi, 1).unwrap();
        assert_eq!(t.delta, x);
        assert_eq!(t.numerators[0].entry(0, 0), x);
        assert_eq!(t.numerators[1].entry(0, 0), Polynomial::one(2));
        assert!(t.composites(&phi).passed());
        let map = t.to_map(&phi).unwrap();
        assert_eq!(map.matrix(0).entry(0, 0), x);
    }

    #[test]
    fn identity_tilde_phi() {
        let k = koszul_dg(&[Polynomial::var(2, 0), Polynomial::var(2, 1)]).unwrap();
        let id = ComplexMap::identity(k.complex());
        let t = tilde_phi(&k, &k, &id, 2).unwrap();
        assert_eq!(t.delta, Polynomial::one(2));
        assert!(t.is_polynomial());
        for (i, n) in t.numerators.iter().enumerate() {
            assert_eq!(*n, SparseMatrix::identity(k.complex().rank(i), 2));
        }
    }

    #[test]
    fn indivisible_scaling_is_refused() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let a = koszul_dg(&[&x * &y]).unwrap();
        let m = koszul_dg(std::slice::from_ref(&y)).unwrap();
        let phi = ComplexMap::new(
            a.complex().clone(),
            m.complex().clone(),
            vec![SparseMatrix::identity(1, 2), SparseMatrix::scalar(1, &x)],
            None,
        )
        .unwrap();
        let t = tilde_phi(&a, &m, &phi, 1).unwrap();
        assert!(matches!(t.scaled_map(&phi, &y), Err(Error::DivisibilityFailure(_))));
    }
}
