use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::resolution::{
    chain_add_scaled, koszul_complex, lcm_of, taylor_complex, BasisLabel, Chain, FreeComplex,
};
use crate::ring::{Monomial, Polynomial};

/// A basis element: `(homological degree, index)`.
pub type Basis = (usize, usize);

/// A free complex with an explicit product table on basis pairs. Missing
/// entries are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgAlgebra {
    complex: FreeComplex,
    table: BTreeMap<(Basis, Basis), Chain>,
}

impl DgAlgebra {
    pub fn new(complex: FreeComplex, table: BTreeMap<(Basis, Basis), Chain>) -> Result<Self> {
        for (&((i, a), (j, b)), v) in &table {
            let bad_index = a >= complex.rank(i) || b >= complex.rank(j);
            let bad_value = v.keys().any(|&k| k >= complex.rank(i + j));
            if bad_index || bad_value {
                return Err(Error::InvariantViolation(format!(
                    "product table entry ({i},{a})*({j},{b}) is out of range"
                )));
            }
        }
        let table = table.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(DgAlgebra { complex, table })
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn nvars(&self) -> usize {
        self.complex.nvars()
    }

    pub fn unit(&self) -> Basis {
        (0, 0)
    }

    pub fn label(&self, x: Basis) -> &BasisLabel {
        &self.complex.labels(x.0)[x.1]
    }

    /// Every basis element, by degree then index.
    pub fn basis(&self) -> Vec<Basis> {
        (0..=self.complex.length())
            .flat_map(|i| (0..self.complex.rank(i)).map(move |k| (i, k)))
            .collect()
    }

    pub fn product_basis(&self, x: Basis, y: Basis) -> Chain {
        self.table.get(&(x, y)).cloned().unwrap_or_default()
    }

    /// Replaces one table entry.
    pub fn set_product(&mut self, x: Basis, y: Basis, value: Chain) {
        if value.is_empty() {
            self.table.remove(&(x, y));
        } else {
            self.table.insert((x, y), value);
        }
    }

    /// Nonzero table entries in key order.
    pub fn products(&self) -> impl Iterator<Item = (Basis, Basis, &Chain)> {
        self.table.iter().map(|(&(x, y), v)| (x, y, v))
    }

    /// Product of `x ∈ A_i` and `y ∈ A_j`, an element of `A_{i+j}`.
    pub fn mul(&self, i: usize, x: &Chain, j: usize, y: &Chain) -> Chain {
        let mut out = Chain::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                if let Some(v) = self.table.get(&((i, a), (j, b))) {
                    chain_add_scaled(&mut out, v, &(ca * cb));
                }
            }
        }
        out
    }
}

pub(crate) fn single(k: usize, nvars: usize) -> Chain {
    Chain::from([(k, Polynomial::one(nvars))])
}

/// Parity of `#{(s, t) ∈ σ × τ : s > t}`, the sign of `e_σ ∧ e_τ = ± e_{σ∪τ}`.
pub fn shuffle_sign_odd(sigma: &[usize], tau: &[usize]) -> bool {
    sigma
        .iter()
        .map(|s| tau.iter().filter(|&t| s > t).count())
        .sum::<usize>()
        % 2
        == 1
}

fn union(sigma: &[usize], tau: &[usize]) -> Option<Vec<usize>> {
    if sigma.iter().any(|s| tau.contains(s)) {
        return None;
    }
    let mut u: Vec<usize> = sigma.iter().chain(tau).copied().collect();
    u.sort_unstable();
    Some(u)
}

// Exterior-style table on a complex whose basis is labeled by `Wedge(σ)`:
// e_σ e_τ = ± coefficient(σ, τ) e_{σ∪τ} for disjoint σ, τ.
fn wedge_table(
    complex: &FreeComplex,
    coefficient: impl Fn(&[usize], &[usize], &[usize]) -> Polynomial,
) -> BTreeMap<(Basis, Basis), Chain> {
    let wedge = |l: &BasisLabel| match l {
        BasisLabel::Wedge(s) => s.clone(),
        _ => unreachable!("wedge-labeled complex"),
    };
    let index: Vec<_> = (0..=complex.length()).map(|i| complex.label_index(i)).collect();
    let mut table = BTreeMap::new();
    for i in 0..=complex.length() {
        for (a, la) in complex.labels(i).iter().enumerate() {
            let sigma = wedge(la);
            for j in 0..=complex.length() - i {
                for (b, lb) in complex.labels(j).iter().enumerate() {
                    let tau = wedge(lb);
                    let Some(u) = union(&sigma, &tau) else { continue };
                    let k = index[i + j][&BasisLabel::Wedge(u.clone())];
                    let c = coefficient(&sigma, &tau, &u);
                    let c = if shuffle_sign_odd(&sigma, &tau) { -&c } else { c };
                    table.insert(((i, a), (j, b)), Chain::from([(k, c)]));
                }
            }
        }
    }
    table
}

/// The Koszul complex on `elements` with the exterior product.
pub fn koszul_dg(elements: &[Polynomial]) -> Result<DgAlgebra> {
    let complex = koszul_complex(elements)?;
    let nvars = complex.nvars();
    let table = wedge_table(&complex, |_, _, _| Polynomial::one(nvars));
    DgAlgebra::new(complex, table)
}

/// The Taylor complex with `e_σ e_τ = (f_σ f_τ / f_{σ∪τ}) e_σ ∧ e_τ`.
pub fn taylor_dg(monomials: &[Monomial]) -> Result<DgAlgebra> {
    let complex = taylor_complex(monomials)?;
    let nvars = complex.nvars();
    let table = wedge_table(&complex, |s, t, u| {
        let num = lcm_of(monomials, s, nvars).mul_with(&lcm_of(monomials, t, nvars));
        Polynomial::monomial(num.try_div(&lcm_of(monomials, u, nvars)).expect("lcm divides product"))
    });
    DgAlgebra::new(complex, table)
}

/// Result of [`dg_check`]; `first_violation` names the first failing law
/// and basis elements.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DgReport {
    pub dsq_zero: bool,
    pub unit: bool,
    pub graded_commutative: bool,
    pub odd_squares_zero: bool,
    pub leibniz: bool,
    pub associative: bool,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub first_violation: Option<String>,
}

impl DgReport {
    pub fn passed(&self) -> bool {
        self.dsq_zero
            && self.unit
            && self.graded_commutative
            && self.odd_squares_zero
            && self.leibniz
            && self.associative
    }
}

fn describe(a: &DgAlgebra, x: Basis) -> String {
    a.label(x).to_string()
}

/// Exhaustive check of the DG-algebra laws on all basis pairs and triples.
pub fn dg_check(a: &DgAlgebra) -> DgReport {
    let c = a.complex();
    let nvars = a.nvars();
    let basis = a.basis();
    let mut report = DgReport {
        dsq_zero: c.dsq_failure().is_none(),
        unit: true,
        graded_commutative: true,
        odd_squares_zero: true,
        leibniz: true,
        associative: true,
        pairs_checked: 0,
        triples_checked: 0,
        first_violation: None,
    };
    let note = |report: &mut DgReport, msg: String| {
        if report.first_violation.is_none() {
            report.first_violation = Some(msg);
        }
    };
    if !report.dsq_zero {
        note(&mut report, format!("d^2 != 0 in degree {}", c.dsq_failure().unwrap()));
    }
    let one = single(0, nvars);
    let len = c.length();
    for &x in &basis {
        let ex = single(x.1, nvars);
        if a.mul(0, &one, x.0, &ex) != ex || a.mul(x.0, &ex, 0, &one) != ex {
            report.unit = false;
            note(&mut report, format!("unit law fails at {}", describe(a, x)));
        }
    }
    for &x in &basis {
        let ex = single(x.1, nvars);
        for &y in &basis {
            report.pairs_checked += 1;
            let ey = single(y.1, nvars);
            let xy = a.mul(x.0, &ex, y.0, &ey);
            if x.0 + y.0 > len {
                if !xy.is_empty() {
                    report.leibniz = false;
                    note(&mut report, format!("product {}*{} above the top degree", describe(a, x), describe(a, y)));
                }
                continue;
            }
            let yx = a.mul(y.0, &ey, x.0, &ex);
            let expected = if (x.0 * y.0) % 2 == 1 {
                crate::resolution::chain_neg(&yx)
            } else {
                yx
            };
            if xy != expected {
                report.graded_commutative = false;
                note(&mut report, format!("{}*{} is not graded commutative", describe(a, x), describe(a, y)));
            }
            if x == y && x.0 % 2 == 1 && !xy.is_empty() {
                report.odd_squares_zero = false;
                note(&mut report, format!("{}^2 != 0", describe(a, x)));
            }
            // ∂(xy) = ∂(x) y + (−1)^{|x|} x ∂(y)
            let lhs = c.apply_d(x.0 + y.0, &xy);
            let mut rhs = Chain::new();
            if x.0 > 0 {
                let dx = c.apply_d(x.0, &ex);
                chain_add_scaled(&mut rhs, &a.mul(x.0 - 1, &dx, y.0, &ey), &Polynomial::one(nvars));
            }
            if y.0 > 0 {
                let dy = c.apply_d(y.0, &ey);
                let s = crate::resolution::sign_of(x.0 % 2 == 1, nvars);
                chain_add_scaled(&mut rhs, &a.mul(x.0, &ex, y.0 - 1, &dy), &s);
            }
            if lhs != rhs {
                report.leibniz = false;
                note(&mut report, format!("Leibniz rule fails for {}*{}", describe(a, x), describe(a, y)));
            }
        }
    }
    for &x in &basis {
        let ex = single(x.1, nvars);
        for &y in &basis {
            if x.0 + y.0 > len {
                continue;
            }
            let xy = a.mul(x.0, &ex, y.0, &single(y.1, nvars));
            for &z in &basis {
                if x.0 + y.0 + z.0 > len {
                    continue;
                }
                report.triples_checked += 1;
                let ez = single(z.1, nvars);
                let left = a.mul(x.0 + y.0, &xy, z.0, &ez);
                let yz = a.mul(y.0, &single(y.1, nvars), z.0, &ez);
                let right = a.mul(x.0, &ex, y.0 + z.0, &yz);
                if left != right {
                    report.associative = false;
                    note(
                        &mut report,
                        format!("({}*{})*{} != {}*({}*{})", describe(a, x), describe(a, y), describe(a, z), describe(a, x), describe(a, y), describe(a, z)),
                    );
                }
            }
        }
    }
    report
}

/// Result of comparing two DG algebras along a signed label bijection.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IsoReport {
    pub bijective: bool,
    pub differentials: bool,
    pub products: bool,
    pub first_failure: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.differentials && self.products
    }
}

/// Checks that `x ↦ ±α(x)` is an isomorphism `source -> target` of DG
/// algebras, where `alpha(label) = (target label, negate)`.
pub fn check_label_isomorphism(
    source: &DgAlgebra,
    target: &DgAlgebra,
    alpha: impl Fn(&BasisLabel) -> Option<(BasisLabel, bool)>,
) -> IsoReport {
    let (s, t) = (source.complex(), target.complex());
    let nvars = s.nvars();
    let mut report = IsoReport {
        bijective: true,
        differentials: true,
        products: true,
        first_failure: None,
    };
    let len = s.length().max(t.length());
    // image[i][k] = (target index, sign)
    let mut image: Vec<Vec<(usize, Polynomial)>> = Vec::new();
    for i in 0..=len {
        if s.rank(i) != t.rank(i) {
            report.bijective = false;
            report.first_failure = Some(format!("ranks differ in degree {i}"));
            return report;
        }
        let index = t.label_index(i);
        let mut seen = vec![false; t.rank(i)];
        let mut row = Vec::new();
        for l in s.labels(i) {
            let Some((k, neg)) = alpha(l).and_then(|(tl, neg)| index.get(&tl).map(|&k| (k, neg))) else {
                report.bijective = false;
                report.first_failure = Some(format!("{l} has no image in degree {i}"));
                return report;
            };
            if std::mem::replace(&mut seen[k], true) {
                report.bijective = false;
                report.first_failure = Some(format!("two labels map onto {}", t.labels(i)[k]));
                return report;
            }
            row.push((k, crate::resolution::sign_of(neg, nvars)));
        }
        image.push(row);
    }
    let map = |i: usize, x: &Chain| -> Chain {
        let mut out = Chain::new();
        for (&k, c) in x {
            let (tk, sg) = &image[i][k];
            chain_add_scaled(&mut out, &single(*tk, nvars), &(c * sg));
        }
        out
    };
    let basis = source.basis();
    for &x in &basis {
        let ex = single(x.1, nvars);
        if x.0 >= 1 && map(x.0 - 1, &s.apply_d(x.0, &ex)) != t.apply_d(x.0, &map(x.0, &ex)) {
            report.differentials = false;
            report
                .first_failure
                .get_or_insert_with(|| format!("differential differs at {}", source.label(x)));
        }
        for &y in &basis {
            if x.0 + y.0 > len {
                continue;
            }
            let ey = single(y.1, nvars);
            let lhs = map(x.0 + y.0, &source.mul(x.0, &ex, y.0, &ey));
            let rhs = target.mul(x.0, &map(x.0, &ex), y.0, &map(y.0, &ey));
            if lhs != rhs {
                report.products = false;
                report.first_failure.get_or_insert_with(|| {
                    format!("product differs at {}*{}", source.label(x), source.label(y))
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn e(a: &DgAlgebra, sigma: &[usize]) -> Basis {
        let l = BasisLabel::Wedge(sigma.to_vec());
        let i = sigma.len();
        (i, a.complex().index_of(i, &l).unwrap())
    }

    #[test]
    fn taylor_product_examples() {
        let t = taylor_dg(&[mono(&[2, 0]), mono(&[1, 1])]).unwrap();
        let p = t.product_basis(e(&t, &[0]), e(&t, &[1]));
        assert_eq!(p, Chain::from([(0, Polynomial::var(2, 0))]));
        assert!(t.product_basis(e(&t, &[0]), e(&t, &[0])).is_empty());
        let q = t.product_basis(e(&t, &[1]), e(&t, &[0]));
        assert_eq!(q, Chain::from([(0, -&Polynomial::var(2, 0))]));
        let u = t.product_basis(t.unit(), e(&t, &[0, 1]));
        assert_eq!(u, single(0, 2));
        assert!(dg_check(&t).passed());
    }

    #[test]
    fn exterior_algebra_passes() {
        let k = koszul_dg(&[Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2)])
            .unwrap();
        let r = dg_check(&k);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.pairs_checked, 64);
    }

    #[test]
    fn mutated_sign_breaks_leibniz() {
        let mut t = taylor_dg(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        let (x, y) = (e(&t, &[0]), e(&t, &[1]));
        let v = t.product_basis(x, y);
        t.set_product(x, y, crate::resolution::chain_neg(&v));
        let r = dg_check(&t);
        assert!(!r.leibniz);
        assert!(!r.graded_commutative);
        assert!(r.first_violation.is_some());
    }

    #[test]
    fn shuffle_signs() {
        assert!(!shuffle_sign_odd(&[0], &[1]));
        assert!(shuffle_sign_odd(&[1], &[0]));
        assert!(!shuffle_sign_odd(&[1, 2], &[0]));
        assert!(!shuffle_sign_odd(&[2], &[0, 1, 3]));
    }

    #[test]
    fn identity_label_map_is_iso() {
        let t = taylor_dg(&[mono(&[2, 0]), mono(&[1, 1])]).unwrap();
        assert!(check_label_isomorphism(&t, &t, |l| Some((l.clone(), false))).passed());
        let r = check_label_isomorphism(&t, &t, |l| Some((l.clone(), matches!(l, BasisLabel::Wedge(s) if s.len() == 1))));
        assert!(!r.passed());
    }
}
