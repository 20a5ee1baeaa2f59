//! Enumerated test families of ideals with linear quotients, each in its
//! canonical order (ascending degree, then descending degrevlex).

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ideal::{verify_basis_exchange, OrderedIdeal};
use crate::linalg;
use crate::ring::Monomial;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Stable,
    SquarefreeStable,
    Matroid,
    RandomMatroid,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub family: Family,
    pub ideal: OrderedIdeal,
}

/// Default seed of [`random_matroids`].
pub const RANDOM_MATROID_SEED: u64 = 20_240_601;

/// All monomials of degree `1..=max_degree` in `nvars` variables.
fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for c in (0..nvars).combinations_with_replacement(d as usize) {
            let mut e = vec![0u32; nvars];
            for v in c {
                e[v] += 1;
            }
            out.push(Monomial::new(e));
        }
    }
    out
}

/// Calls `visit` on every nonempty antichain of `pool` under divisibility.
fn antichains(pool: &[Monomial], visit: &mut impl FnMut(&[Monomial])) {
    fn go(pool: &[Monomial], start: usize, chosen: &mut Vec<Monomial>, visit: &mut impl FnMut(&[Monomial])) {
        for k in start..pool.len() {
            let m = &pool[k];
            if chosen.iter().any(|c| c.divides(m) || m.divides(c)) {
                continue;
            }
            chosen.push(m.clone());
            visit(chosen);
            go(pool, k + 1, chosen, visit);
            chosen.pop();
        }
    }
    go(pool, 0, &mut Vec::new(), visit);
}

/// All stable ideals in `nvars` variables generated in degree at most
/// `max_degree`.
pub fn stable_ideals(nvars: usize, max_degree: u32) -> Vec<OrderedIdeal> {
    let pool = monomials_up_to(nvars, max_degree);
    let mut out = Vec::new();
    antichains(&pool, &mut |gens| {
        let i = OrderedIdeal::new(gens.to_vec()).expect("antichain");
        if i.is_stable() {
            out.push(i.degrevlex_order());
        }
    });
    out
}

/// All squarefree stable ideals in `nvars` variables.
pub fn squarefree_stable_ideals(nvars: usize) -> Vec<OrderedIdeal> {
    let pool: Vec<Monomial> = (1..=nvars)
        .flat_map(|k| (0..nvars).combinations(k))
        .map(|s| Monomial::squarefree(nvars, &s))
        .collect();
    let mut out = Vec::new();
    antichains(&pool, &mut |gens| {
        let i = OrderedIdeal::new(gens.to_vec()).expect("antichain");
        if i.is_squarefree_stable() {
            out.push(i.degrevlex_order());
        }
    });
    out
}

/// Bases of every matroid of rank `1..=n` on `{0..n-1}`, labeled (not up
/// to isomorphism).
pub fn matroid_bases(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for k in 1..=n {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        for mask in 1u64..(1u64 << subsets.len()) {
            let family: Vec<Vec<usize>> = subsets
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, s)| s.clone())
                .collect();
            if verify_basis_exchange(&family).is_ok() {
                out.push(family);
            }
        }
    }
    out
}

/// Matroidal ideals of all matroids of positive rank on `n` elements.
pub fn matroid_ideals(n: usize) -> Vec<OrderedIdeal> {
    matroid_bases(n)
        .iter()
        .map(|b| OrderedIdeal::from_matroid_bases(n, b).expect("verified matroid"))
        .collect()
}

/// `count` distinct representable matroids on `n` elements: column
/// matroids of seeded random integer matrices with entries in `-2..=2`
/// and `2..=n-2` rows.
pub fn random_matroids(n: usize, count: usize, seed: u64) -> Vec<OrderedIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let r = rng.gen_range(2..=n.saturating_sub(2).max(2));
        let a: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let bases: Vec<Vec<usize>> = (0..n)
            .combinations(r)
            .filter(|cols| {
                let minor: Vec<Vec<BigInt>> = a
                    .iter()
                    .map(|row| cols.iter().map(|&c| BigInt::from(row[c])).collect())
                    .collect();
                linalg::integer_rank(minor) == r
            })
            .collect();
        if bases.is_empty() || !seen.insert(bases.clone()) {
            continue;
        }
        out.push(OrderedIdeal::from_matroid_bases(n, &bases).expect("column matroid"));
    }
    out
}

/// The acceptance corpus: stable ideals in at most 3 variables generated
/// in degree at most 3, squarefree stable ideals in at most 5 variables,
/// all matroids on at most 5 elements and 50 random matroids on 6.
pub fn acceptance_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |family, ideals: Vec<OrderedIdeal>| {
        out.extend(ideals.into_iter().map(|ideal| CorpusEntry { family, ideal }));
    };
    for n in 1..=3 {
        push(Family::Stable, stable_ideals(n, 3));
    }
    for n in 1..=5 {
        push(Family::SquarefreeStable, squarefree_stable_ideals(n));
    }
    for n in 1..=5 {
        push(Family::Matroid, matroid_ideals(n));
    }
    push(Family::RandomMatroid, random_matroids(6, 50, RANDOM_MATROID_SEED));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_counts_small() {
        // (x1), (x1^2), (x1^3) in one variable
        assert_eq!(stable_ideals(1, 3).len(), 3);
        // two variables, degree <= 1: (x1), (x1, x2)
        assert_eq!(stable_ideals(2, 1).len(), 2);
        assert!(stable_ideals(3, 3).iter().all(OrderedIdeal::is_stable));
    }

    #[test]
    fn squarefree_stable_small() {
        // (x1), (x1, x2), (x1x2)
        assert_eq!(squarefree_stable_ideals(2).len(), 3);
    }

    #[test]
    fn labeled_matroid_counts() {
        // rank 1 and 2 on two elements: {0},{1},{0,1} as singletons, and {01}
        assert_eq!(matroid_bases(2).len(), 4);
        // known labeled counts of matroids of positive rank
        assert_eq!(matroid_bases(3).len(), 15);
    }

    #[test]
    fn random_matroids_are_seeded_and_distinct() {
        let a = random_matroids(6, 5, 7);
        let b = random_matroids(6, 5, 7);
        assert_eq!(a, b);
        let gens: std::collections::BTreeSet<_> = a.iter().map(|i| i.generators().to_vec()).collect();
        assert_eq!(gens.len(), 5);
    }

    #[test]
    fn corpus_size() {
        let c = acceptance_corpus();
        assert!(c.len() >= 200, "{}", c.len());
    }
}
