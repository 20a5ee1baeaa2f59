use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::builders::alpha;
use super::complex::FreeComplex;
use super::verify::box_points;
use crate::error::Result;
use crate::ideal::OrderedIdeal;
use crate::linalg;
use crate::ring::{coeff, Coeff, Monomial};

/// Above this many generators [`betti_oracle`] switches from the Taylor
/// complex to Koszul homology.
pub const TAYLOR_ORACLE_BOUND: usize = 10;

/// Graded Betti numbers `β_{i,d}` of `R/I`; zero entries are not stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), usize>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, d: usize, n: usize) {
        if n > 0 {
            *self.entries.entry((i, d)).or_insert(0) += n;
        }
    }

    pub fn get(&self, i: usize, d: usize) -> usize {
        self.entries.get(&(i, d)).copied().unwrap_or(0)
    }

    /// `(i, d, β_{i,d})` for the nonzero entries, sorted.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries.iter().map(|(&(i, d), &n)| (i, d, n))
    }

    /// `β_i = Σ_d β_{i,d}` for `i = 0..=projdim`.
    pub fn totals(&self) -> Vec<usize> {
        let len = self.entries.keys().map(|&(i, _)| i + 1).max().unwrap_or(0);
        let mut out = vec![0; len];
        for (&(i, _), &n) in &self.entries {
            out[i] += n;
        }
        out
    }
}

impl fmt::Display for BettiTable {
    /// Rows indexed by `d - i`, columns by `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let totals = self.totals();
        let width = self
            .entries
            .values()
            .chain(&totals)
            .map(|n| n.to_string().len())
            .max()
            .unwrap_or(1);
        let rows: Vec<usize> = {
            let mut r: Vec<usize> = self.entries.keys().map(|&(i, d)| d - i).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        write!(f, "{:>6}", "")?;
        for i in 0..totals.len() {
            write!(f, " {i:>width$}")?;
        }
        writeln!(f)?;
        write!(f, "{:>6}", "total:")?;
        for n in &totals {
            write!(f, " {n:>width$}")?;
        }
        writeln!(f)?;
        for r in rows {
            write!(f, "{:>6}", format!("{r}:"))?;
            for i in 0..totals.len() {
                match self.get(i, r + i) {
                    0 => write!(f, " {:>width$}", ".")?,
                    n => write!(f, " {n:>width$}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `β_{i,d} = Σ_{u : deg u = d - i + 1} C(|set(u)|, i - 1)` for `i >= 1`,
/// `β_{0,0} = 1`.
pub fn betti_from_sets(ideal: &OrderedIdeal) -> Result<BettiTable> {
    let sets = ideal.require_sets()?;
    let mut t = BettiTable::new();
    t.add(0, 0, 1);
    for (u, set) in ideal.generators().iter().zip(&sets) {
        for k in 0..=set.len() {
            t.add(k + 1, u.degree() as usize + k, binomial(set.len(), k));
        }
    }
    Ok(t)
}

/// Ranks `Σ_u C(|set(u)|, i - 1)` of the linear-quotient resolution.
pub fn lq_ranks(ideal: &OrderedIdeal) -> Result<Vec<usize>> {
    Ok(betti_from_sets(ideal)?.totals())
}

/// Betti numbers by homology, independent of linear quotients.
pub fn betti_oracle(ideal: &OrderedIdeal) -> BettiTable {
    if ideal.len() <= TAYLOR_ORACLE_BOUND {
        betti_taylor(ideal.generators())
    } else {
        betti_koszul(ideal.generators())
    }
}

/// Homology of the Taylor complex tensored with the residue field. The
/// reduced complex splits by lcm; the strand at `a` has basis the subsets
/// with lcm exactly `a` and entries `±1` between faces of equal lcm.
pub fn betti_taylor(generators: &[Monomial]) -> BettiTable {
    let m = generators.len();
    assert!(m < 31, "Taylor oracle needs fewer than 31 generators");
    let nvars = generators.first().map_or(0, Monomial::nvars);
    let mut lcms = vec![Monomial::one(nvars); 1 << m];
    let mut groups: HashMap<Monomial, Vec<u32>> = HashMap::new();
    for mask in 0u32..(1 << m) {
        if mask != 0 {
            let low = mask.trailing_zeros() as usize;
            lcms[mask as usize] = lcms[(mask & (mask - 1)) as usize].lcm_with(&generators[low]);
        }
        groups.entry(lcms[mask as usize].clone()).or_default().push(mask);
    }
    let mut t = BettiTable::new();
    for (a, masks) in groups {
        let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
        for mask in masks {
            by_size[mask.count_ones() as usize].push(mask);
        }
        let pos: Vec<HashMap<u32, usize>> = by_size
            .iter()
            .map(|v| v.iter().enumerate().map(|(k, &s)| (s, k)).collect())
            .collect();
        let mut ranks = vec![0usize; m + 2];
        for k in 1..=m {
            if by_size[k].is_empty() || by_size[k - 1].is_empty() {
                continue;
            }
            let mut mat = vec![vec![coeff(0); by_size[k].len()]; by_size[k - 1].len()];
            for (c, &sigma) in by_size[k].iter().enumerate() {
                let elems: Vec<usize> = (0..m).filter(|&i| sigma & (1 << i) != 0).collect();
                for &i in &elems {
                    if let Some(&r) = pos[k - 1].get(&(sigma & !(1 << i))) {
                        mat[r][c] = coeff(if alpha(&elems, i) % 2 == 1 { -1 } else { 1 });
                    }
                }
            }
            ranks[k] = linalg::rank(&mat);
        }
        for k in 0..=m {
            let h = by_size[k].len() - ranks[k] - ranks[k + 1];
            t.add(k, a.degree() as usize, h);
        }
    }
    t
}

/// Betti numbers of the module resolved by a multigraded resolution `F`:
/// the homology of `F ⊗ k`, computed per multidegree from the constant
/// entries of the differentials. `None` if `F` is not multigraded.
pub fn betti_of_complex(f: &FreeComplex) -> Option<BettiTable> {
    if !f.is_multigraded() {
        return None;
    }
    let len = f.length();
    let mut groups: BTreeMap<Monomial, Vec<Vec<usize>>> = BTreeMap::new();
    for i in 0..=len {
        for (k, m) in f.multidegrees(i).expect("multigraded").iter().enumerate() {
            groups.entry(m.clone()).or_insert_with(|| vec![Vec::new(); len + 1])[i].push(k);
        }
    }
    let mut t = BettiTable::new();
    for (a, sel) in groups {
        let mut ranks = vec![0usize; len + 2];
        for i in 1..=len {
            if sel[i].is_empty() || sel[i - 1].is_empty() {
                continue;
            }
            let d = f.differential_ref(i).expect("in range");
            let mat: Vec<Vec<Coeff>> = sel[i - 1]
                .iter()
                .map(|&r| {
                    sel[i]
                        .iter()
                        .map(|&c| d.get(r, c).map_or_else(|| coeff(0), |p| p.constant_term()))
                        .collect()
                })
                .collect();
            ranks[i] = linalg::rank(&mat);
        }
        for i in 0..=len {
            t.add(i, a.degree() as usize, sel[i].len() - ranks[i] - ranks[i + 1]);
        }
    }
    Some(t)
}

/// `β_{i,a} = dim H_i(K(x_1..x_n) ⊗ R/I)_a` for every `a` in `[0, lcm G(I)]`.
pub fn betti_koszul(generators: &[Monomial]) -> BettiTable {
    let nvars = generators.first().map_or(0, Monomial::nvars);
    let corner = generators
        .iter()
        .fold(Monomial::one(nvars), |acc, g| acc.lcm_with(g));
    let in_ideal = |m: &Monomial| generators.iter().any(|g| g.divides(m));
    let mut t = BettiTable::new();
    for a in box_points(corner.exponents()) {
        let support = a.support();
        // basis of K_i ⊗ R/I in degree a: τ ⊆ supp(a) with a / x_τ ∉ I
        let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); support.len() + 1];
        for k in 0..=support.len() {
            for tau in itertools::Itertools::combinations(support.iter().copied(), k) {
                let rest = a
                    .try_div(&Monomial::squarefree(nvars, &tau))
                    .expect("τ ⊆ supp(a)");
                if !in_ideal(&rest) {
                    by_size[k].push(tau);
                }
            }
        }
        let n = support.len();
        let mut ranks = vec![0usize; n + 2];
        for k in 1..=n {
            if by_size[k].is_empty() || by_size[k - 1].is_empty() {
                continue;
            }
            let pos: HashMap<&Vec<usize>, usize> =
                by_size[k - 1].iter().enumerate().map(|(r, s)| (s, r)).collect();
            let mut mat: Vec<Vec<Coeff>> = vec![vec![coeff(0); by_size[k].len()]; by_size[k - 1].len()];
            for (c, tau) in by_size[k].iter().enumerate() {
                for &s in tau {
                    let face: Vec<usize> = tau.iter().copied().filter(|&x| x != s).collect();
                    if let Some(&r) = pos.get(&face) {
                        mat[r][c] = coeff(if alpha(tau, s) % 2 == 1 { -1 } else { 1 });
                    }
                }
            }
            ranks[k] = linalg::rank(&mat);
        }
        for k in 0..=n {
            let h = by_size[k].len() - ranks[k] - ranks[k + 1];
            t.add(k, a.degree() as usize, h);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(n: usize, vars: &[usize]) -> Monomial {
        Monomial::squarefree(n, &vars.iter().map(|v| v - 1).collect::<Vec<_>>())
    }

    fn cube_gens(n: usize, deg: u32) -> Vec<Monomial> {
        box_points(&vec![deg; n])
            .into_iter()
            .filter(|m| m.degree() == deg)
            .collect()
    }

    #[test]
    fn formula_examples() {
        let i = OrderedIdeal::new(vec![sq(3, &[1, 2]), sq(3, &[1, 3]), sq(3, &[2, 3])]).unwrap();
        assert_eq!(betti_from_sets(&i).unwrap().totals(), vec![1, 3, 2]);
        let m2 = OrderedIdeal::new(cube_gens(3, 2)).unwrap().degrevlex_order();
        let t = betti_from_sets(&m2).unwrap();
        assert_eq!(t.totals(), vec![1, 6, 8, 3]);
        assert_eq!(t.get(2, 3), 8);
        let p = OrderedIdeal::new(vec![sq(3, &[1, 2, 3])]).unwrap();
        assert_eq!(betti_from_sets(&p).unwrap().totals(), vec![1, 1]);
    }

    #[test]
    fn oracles_agree_with_formula() {
        let m2 = OrderedIdeal::new(cube_gens(3, 2)).unwrap().degrevlex_order();
        let f = betti_from_sets(&m2).unwrap();
        assert_eq!(betti_taylor(m2.generators()), f);
        assert_eq!(betti_koszul(m2.generators()), f);
    }

    #[test]
    fn complete_intersection() {
        let ci = vec![sq(4, &[1, 2]), sq(4, &[3, 4])];
        let t = betti_taylor(&ci);
        assert_eq!(t.totals(), vec![1, 2, 1]);
        assert_eq!(t.get(2, 4), 1);
        assert_eq!(betti_koszul(&ci), t);
        assert_eq!(betti_taylor(&[sq(2, &[1])]).totals(), vec![1, 1]);
    }

    #[test]
    fn betti_of_nonminimal_complex() {
        let gens = [sq(3, &[1, 2]), sq(3, &[1, 3]), sq(3, &[2, 3])];
        let t = crate::resolution::taylor_complex(&gens).unwrap();
        assert_eq!(t.ranks(), vec![1, 3, 3, 1]);
        assert_eq!(betti_of_complex(&t).unwrap(), betti_taylor(&gens));
    }

    #[test]
    fn display_layout() {
        let t = betti_taylor(&[sq(3, &[1, 2]), sq(3, &[1, 3]), sq(3, &[2, 3])]);
        let s = t.to_string();
        assert!(s.contains("total: 1 3 2"), "{s}");
        assert!(s.contains("1: . 3 2"), "{s}");
    }
}
