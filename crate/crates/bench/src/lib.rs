//! Benchmark fixtures.

use mapcone_core::{Monomial, OrderedIdeal};

/// `(x_1, ..., x_n)^d` in its canonical order.
pub fn maximal_ideal_power(n: usize, d: usize) -> OrderedIdeal {
    let gens = (0..n)
        .map(|_| 0..=d as u32)
        .fold(vec![Vec::new()], |acc: Vec<Vec<u32>>, r| {
            acc.into_iter()
                .flat_map(|p| r.clone().map(move |e| [p.clone(), vec![e]].concat()))
                .collect()
        })
        .into_iter()
        .filter(|e| e.iter().sum::<u32>() == d as u32)
        .map(Monomial::new)
        .collect();
    OrderedIdeal::new(gens).expect("antichain").degrevlex_order()
}

/// The squarefree Veronese ideal of degree `d` in `n` variables, a matroidal ideal.
pub fn squarefree_veronese(n: usize, d: usize) -> OrderedIdeal {
    let bases: Vec<Vec<usize>> = (0..1usize << n)
        .filter(|m| m.count_ones() as usize == d)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    OrderedIdeal::from_matroid_bases(n, &bases).expect("uniform matroid")
}

/// `count` monomials `x_1^{count-1-k} x_2^k`.
pub fn staircase(count: usize) -> Vec<Monomial> {
    (0..count as u32)
        .map(|k| Monomial::new(vec![count as u32 - 1 - k, k]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(maximal_ideal_power(3, 2).len(), 6);
        assert_eq!(squarefree_veronese(5, 2).len(), 10);
        assert_eq!(staircase(4).len(), 4);
    }
}
