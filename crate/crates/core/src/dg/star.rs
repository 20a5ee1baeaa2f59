use std::collections::BTreeMap;

use super::algebra::{check_label_isomorphism, single, taylor_dg, Basis, DgAlgebra, IsoReport};
use crate::error::{Error, Result};
use crate::resolution::{
    chain_add_scaled, lcm_of, mapping_cone, sign_of, BasisLabel, Chain, ComplexMap, SparseMatrix,
};
use crate::ring::{Monomial, Polynomial};

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::NotDgHomomorphism(msg))
}

/// Checks the hypotheses of the star product: `φ` is a multiplicative,
/// unital chain map, `ψ` is a chain map, `φ ∘ ψ = f · id_M` and
/// `ψ(m) n = m ψ(n)` under the action `a n = φ(a) n`.
pub fn check_star_hypotheses(
    a: &DgAlgebra,
    m: &DgAlgebra,
    phi: &ComplexMap,
    psi: &ComplexMap,
    f_next: &Polynomial,
) -> Result<()> {
    let nvars = a.nvars();
    if phi.source().ranks() != a.complex().ranks() || phi.target().ranks() != m.complex().ranks() {
        return fail("φ does not map A to M".into());
    }
    if psi.source().ranks() != m.complex().ranks() || psi.target().ranks() != a.complex().ranks() {
        return fail("ψ does not map M to A".into());
    }
    if let Some(i) = phi.commutation_failure() {
        return fail(format!("φ is not a chain map in degree {i}"));
    }
    if let Some(i) = psi.commutation_failure() {
        return fail(format!("ψ is not a chain map in degree {i}"));
    }
    if phi.apply(0, &single(0, nvars)) != single(0, nvars) {
        return fail("φ(1) != 1".into());
    }
    let lm = m.complex().length();
    let basis = a.basis();
    for &x in &basis {
        let px = phi.apply(x.0, &single(x.1, nvars));
        for &y in &basis {
            if x.0 + y.0 > lm {
                continue;
            }
            let lhs = phi.apply(x.0 + y.0, &a.product_basis(x, y));
            let rhs = m.mul(x.0, &px, y.0, &phi.apply(y.0, &single(y.1, nvars)));
            if lhs != rhs {
                return fail(format!(
                    "φ({}*{}) != φ({})φ({})",
                    a.label(x),
                    a.label(y),
                    a.label(x),
                    a.label(y)
                ));
            }
        }
    }
    for i in 0..=lm {
        let comp = phi.matrix(i).compose(&psi.matrix(i));
        if comp != SparseMatrix::scalar(m.complex().rank(i), f_next) {
            return fail(format!("φ∘ψ != f·id in degree {i}"));
        }
    }
    let phipsi = |x: Basis| phi.apply(x.0, &psi.apply(x.0, &single(x.1, nvars)));
    for &x in &m.basis() {
        for &y in &m.basis() {
            if x.0 + y.0 > lm {
                continue;
            }
            let lhs = m.mul(x.0, &phipsi(x), y.0, &single(y.1, nvars));
            let rhs = m.mul(x.0, &single(x.1, nvars), y.0, &phipsi(y));
            if lhs != rhs {
                return fail(format!("ψ({})·{} != {}·ψ({})", m.label(x), m.label(y), m.label(x), m.label(y)));
            }
        }
    }
    Ok(())
}

/// `A * M`: the mapping cone of `ψ: M -> A` with the product
/// `(a, m)(b, n) = (ab, (−1)^{|a|} φ(a) n + m φ(b))`. Labels of `M` are
/// wrapped in [`BasisLabel::Bar`].
pub fn nagata_star(
    a: &DgAlgebra,
    m: &DgAlgebra,
    phi: &ComplexMap,
    psi: &ComplexMap,
    f_next: &Polynomial,
) -> Result<DgAlgebra> {
    check_star_hypotheses(a, m, phi, psi, f_next)?;
    let nvars = a.nvars();
    let bar = psi.with_source_relabeled(|l| BasisLabel::Bar(Box::new(l.clone())));
    let cone = mapping_cone(&bar)?;
    let ra = |i: usize| a.complex().rank(i);
    let len = cone.length();
    let shift_m = |i: usize, x: &Chain| -> Chain { x.iter().map(|(&k, p)| (ra(i) + k, p.clone())).collect() };
    let mut table: BTreeMap<(Basis, Basis), Chain> = BTreeMap::new();
    for i in 0..=len {
        for x in 0..cone.rank(i) {
            for j in 0..=len - i {
                for y in 0..cone.rank(j) {
                    let (xa, ya) = (x < ra(i), y < ra(j));
                    let value = match (xa, ya) {
                        (true, true) => a.product_basis((i, x), (j, y)),
                        (true, false) => {
                            let n = single(y - ra(j), nvars);
                            let px = phi.apply(i, &single(x, nvars));
                            let mut v = Chain::new();
                            chain_add_scaled(&mut v, &m.mul(i, &px, j - 1, &n), &sign_of(i % 2 == 1, nvars));
                            shift_m(i + j, &v)
                        }
                        (false, true) => {
                            let mm = single(x - ra(i), nvars);
                            let py = phi.apply(j, &single(y, nvars));
                            shift_m(i + j, &m.mul(i - 1, &mm, j, &py))
                        }
                        (false, false) => Chain::new(),
                    };
                    if !value.is_empty() {
                        table.insert(((i, x), (j, y)), value);
                    }
                }
            }
        }
    }
    DgAlgebra::new(cone, table)
}

/// Label map from `T(f_1..f_m)` to the star built on `f_m` (index `last`):
/// `e_σ ↦ e_σ` if `last ∉ σ`, else `(−1)^{|σ|−1} ē_{σ∖last}`.
pub fn star_label_map(last: usize) -> impl Fn(&BasisLabel) -> Option<(BasisLabel, bool)> {
    move |l| match l {
        BasisLabel::Wedge(s) if s.contains(&last) => {
            let rest: Vec<usize> = s.iter().copied().filter(|&t| t != last).collect();
            Some((
                BasisLabel::Bar(Box::new(BasisLabel::Wedge(rest))),
                (s.len() - 1) % 2 == 1,
            ))
        }
        BasisLabel::Wedge(_) => Some((l.clone(), false)),
        _ => None,
    }
}

/// The ingredients of the Taylor star on `f_1..f_m`: `A = T(f_1..f_{m−1})`,
/// `M = T(g_1..g_{m−1})` with `g_i = f_i / gcd(f_i, f_m)`, and the maps
/// `φ(e_σ) = (f_σ f_m / f_{σ∪m}) ē_σ`, `ψ(ē_σ) = (f_{σ∪m} / f_σ) e_σ`.
pub struct TaylorStarParts {
    pub a: DgAlgebra,
    pub m: DgAlgebra,
    pub phi: ComplexMap,
    pub psi: ComplexMap,
    pub f_next: Monomial,
    /// `δ = f_{[m−1]} f_m / f_{[m]}`.
    pub delta: Monomial,
}

pub fn taylor_star_parts(f: &[Monomial]) -> Result<TaylorStarParts> {
    if f.len() < 2 {
        return Err(Error::InvariantViolation(
            "the Taylor star needs at least two monomials".into(),
        ));
    }
    let nvars = f[0].nvars();
    let last = f.len() - 1;
    let fm = &f[last];
    let head = &f[..last];
    let g: Vec<Monomial> = head
        .iter()
        .map(|fi| fi.try_div(&fi.gcd_with(fm)).expect("gcd divides"))
        .collect();
    let a = taylor_dg(head)?;
    let m = taylor_dg(&g)?;
    let len = a.complex().length();
    let mut phi_m = Vec::with_capacity(len + 1);
    let mut psi_m = Vec::with_capacity(len + 1);
    for i in 0..=len {
        let r = a.complex().rank(i);
        let mut p = SparseMatrix::zero(r, r, nvars);
        let mut q = SparseMatrix::zero(r, r, nvars);
        for (k, l) in a.complex().labels(i).iter().enumerate() {
            let BasisLabel::Wedge(sigma) = l else { unreachable!() };
            let fs = lcm_of(f, sigma, nvars);
            let fsm = fs.lcm_with(fm);
            p.add(k, k, &Polynomial::monomial(fs.mul_with(fm).try_div(&fsm).expect("lcm divides")));
            q.add(k, k, &Polynomial::monomial(fsm.try_div(&fs).expect("lcm divides")));
        }
        phi_m.push(p);
        psi_m.push(q);
    }
    let phi = ComplexMap::new_unchecked(
        a.complex().clone(),
        m.complex().clone(),
        phi_m,
        Some(Monomial::one(nvars)),
    )?;
    let psi = ComplexMap::new_unchecked(m.complex().clone(), a.complex().clone(), psi_m, Some(fm.clone()))?;
    let all: Vec<usize> = (0..last).collect();
    let top = lcm_of(f, &all, nvars);
    let delta = top
        .mul_with(fm)
        .try_div(&top.lcm_with(fm))
        .expect("lcm divides product");
    Ok(TaylorStarParts {
        a,
        m,
        phi,
        psi,
        f_next: fm.clone(),
        delta,
    })
}

pub struct TaylorStar {
    pub star: DgAlgebra,
    pub taylor: DgAlgebra,
    pub iso: IsoReport,
    pub delta: Monomial,
}

/// Builds `T(f_1..f_{m−1}) * T(g_1..g_{m−1})` and compares it with
/// `T(f_1..f_m)` along [`star_label_map`].
pub fn taylor_via_star(f: &[Monomial]) -> Result<TaylorStar> {
    let parts = taylor_star_parts(f)?;
    let star = nagata_star(
        &parts.a,
        &parts.m,
        &parts.phi,
        &parts.psi,
        &Polynomial::monomial(parts.f_next.clone()),
    )?;
    let taylor = taylor_dg(f)?;
    let iso = check_label_isomorphism(&taylor, &star, star_label_map(f.len() - 1));
    Ok(TaylorStar {
        star,
        taylor,
        iso,
        delta: parts.delta,
    })
}

#[cfg(test)]
mod tests {
    use super::super::algebra::{dg_check, koszul_dg};
    use super::*;
    use crate::resolution::verify_complex;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn two_generator_star() {
        let t = taylor_via_star(&[mono(&[2, 0]), mono(&[1, 1])]).unwrap();
        assert!(t.iso.passed(), "{:?}", t.iso);
        assert!(dg_check(&t.star).passed());
        assert_eq!(t.delta, mono(&[1, 0]));
    }

    #[test]
    fn three_generator_star() {
        let t = taylor_via_star(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        assert!(t.iso.passed(), "{:?}", t.iso);
        let r = dg_check(&t.star);
        assert!(r.passed(), "{r:?}");
        assert_eq!(verify_complex(t.star.complex()).exact, Some(true));
    }

    #[test]
    fn coprime_pair() {
        let parts = taylor_star_parts(&[mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        assert_eq!(parts.delta, Monomial::one(2));
        let t = taylor_via_star(&[mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        assert!(t.iso.passed());
    }

    #[test]
    fn unsigned_label_map_is_not_a_chain_map() {
        let t = taylor_via_star(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        let unsigned = |l: &BasisLabel| star_label_map(2)(l).map(|(x, _)| (x, false));
        assert!(!check_label_isomorphism(&t.taylor, &t.star, unsigned).passed());
    }

    #[test]
    fn regular_star_is_koszul() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let a = koszul_dg(std::slice::from_ref(&x)).unwrap();
        let id = ComplexMap::identity(a.complex());
        let psi = ComplexMap::new(
            a.complex().clone(),
            a.complex().clone(),
            (0..=1).map(|i| SparseMatrix::scalar(a.complex().rank(i), &y)).collect(),
            Some(Monomial::var(2, 1)),
        )
        .unwrap();
        let star = nagata_star(&a, &a, &id, &psi, &y).unwrap();
        let k = koszul_dg(&[x, y]).unwrap();
        assert!(check_label_isomorphism(&k, &star, star_label_map(1)).passed());
    }

    #[test]
    fn bad_psi_is_refused() {
        let parts = taylor_star_parts(&[mono(&[2, 0]), mono(&[1, 1])]).unwrap();
        let wrong = Polynomial::monomial(mono(&[0, 1]));
        assert!(matches!(
            nagata_star(&parts.a, &parts.m, &parts.phi, &parts.psi, &wrong),
            Err(Error::NotDgHomomorphism(_))
        ));
    }
}
