use serde::Serialize;

use super::complex::{FreeComplex, SparseMatrix};
use crate::linalg;
use crate::ring::{Coeff, Monomial};

/// Outcome of [`verify_complex`]. Positions are homological degrees.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyReport {
    pub dsq_zero: bool,
    /// First `i` with `d_{i-1} d_i != 0`.
    pub dsq_failure: Option<usize>,
    pub minimal: bool,
    /// `(i, row, col)` of the first differential entry with a nonzero
    /// constant term.
    pub minimal_failure: Option<(usize, usize, usize)>,
    pub homogeneous: bool,
    /// Box-certified exactness; `None` when the complex is not multigraded
    /// or not homogeneous.
    pub exact: Option<bool>,
    pub exact_failure: Option<StrandFailure>,
    pub strands_checked: usize,
}

/// A multidegree whose strand has homology at `position`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StrandFailure {
    pub multidegree: Vec<u32>,
    pub position: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.dsq_zero && self.minimal && self.homogeneous && self.exact == Some(true)
    }
}

/// Checks `d² = 0`, minimality, homogeneity and exactness of the augmented
/// complex `F -> R/I -> 0`, where `I` is generated by the monomials
/// occurring in `d_1`.
pub fn verify_complex(f: &FreeComplex) -> VerifyReport {
    let nvars = f.nvars();
    let mut gens: Vec<Monomial> = Vec::new();
    if let Some(d1) = f.differential_ref(1) {
        for (_, _, p) in d1.entries() {
            gens.extend(p.terms().map(|(m, _)| m.clone()));
        }
    }
    gens.sort();
    gens.dedup();
    debug_assert!(gens.iter().all(|g| g.nvars() == nvars));
    verify_resolution_of(f, &gens)
}

/// As [`verify_complex`], with the degree-0 cokernel compared against the
/// ideal generated by `generators`.
pub fn verify_resolution_of(f: &FreeComplex, generators: &[Monomial]) -> VerifyReport {
    let dsq_failure = f.dsq_failure();
    let mut minimal_failure = None;
    'outer: for i in 1..=f.length() {
        for (r, c, p) in f.differential(i).entries() {
            if !p.in_maximal_ideal() {
                minimal_failure = Some((i, r, c));
                break 'outer;
            }
        }
    }
    let homogeneous = f.is_multigraded() && is_homogeneous(f);
    let (exact, exact_failure, strands_checked) = if homogeneous {
        let (failure, n) = box_exactness(f, generators);
        (Some(failure.is_none()), failure, n)
    } else {
        (None, None, 0)
    };
    VerifyReport {
        dsq_zero: dsq_failure.is_none(),
        dsq_failure,
        minimal: minimal_failure.is_none(),
        minimal_failure,
        homogeneous,
        exact,
        exact_failure,
        strands_checked,
    }
}

// Every entry is a scalar multiple of mdeg(col) / mdeg(row).
fn is_homogeneous(f: &FreeComplex) -> bool {
    (1..=f.length()).all(|i| {
        let rows = f.multidegrees(i - 1).expect("multigraded");
        let cols = f.multidegrees(i).expect("multigraded");
        f.differential(i).entries().all(|(r, c, p)| {
            match (p.single_term(), cols[c].try_div(&rows[r])) {
                (Some((m, _)), Some(q)) => *m == q,
                _ => false,
            }
        })
    })
}

fn box_corner(f: &FreeComplex, generators: &[Monomial]) -> Vec<u32> {
    let mut corner = vec![0u32; f.nvars()];
    let all = (0..=f.length())
        .flat_map(|i| f.multidegrees(i).expect("multigraded").iter())
        .chain(generators);
    for m in all {
        for (c, &e) in corner.iter_mut().zip(m.exponents()) {
            *c = (*c).max(e);
        }
    }
    corner
}

/// Every exponent vector in `[0, corner]`.
pub(crate) fn box_points(corner: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Vec::<u32>::new()];
    for &c in corner {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=c).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Monomial::new).collect()
}

// Matrix of the degree-`a` strand of `d`, rows and columns restricted to
// basis elements whose multidegree divides `a`.
fn strand_matrix(
    d: &SparseMatrix,
    rows: &[Monomial],
    cols: &[Monomial],
    row_sel: &[usize],
    col_sel: &[usize],
) -> Vec<Vec<Coeff>> {
    let mut row_pos = vec![usize::MAX; rows.len()];
    for (k, &r) in row_sel.iter().enumerate() {
        row_pos[r] = k;
    }
    let mut m = vec![vec![Coeff::from_integer(0.into()); col_sel.len()]; row_sel.len()];
    for (k, &c) in col_sel.iter().enumerate() {
        for (&r, p) in d.column(c) {
            if row_pos[r] == usize::MAX {
                continue;
            }
            if let Some(q) = cols[c].try_div(&rows[r]) {
                m[row_pos[r]][k] = p.coefficient(&q);
            }
        }
    }
    m
}

fn box_exactness(f: &FreeComplex, generators: &[Monomial]) -> (Option<StrandFailure>, usize) {
    let corner = box_corner(f, generators);
    let points = box_points(&corner);
    let n = points.len();
    let threads = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(8);
    let failure = if threads > 1 && n >= 64 {
        let chunk = n.div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|ch| scope.spawn(move || ch.iter().find_map(|a| strand_failure(f, generators, a))))
                .collect();
            handles
                .into_iter()
                .filter_map(|h| h.join().expect("strand worker"))
                .next()
        })
    } else {
        points.iter().find_map(|a| strand_failure(f, generators, a))
    };
    (failure, n)
}

fn strand_failure(f: &FreeComplex, generators: &[Monomial], a: &Monomial) -> Option<StrandFailure> {
    let len = f.length();
    let sel: Vec<Vec<usize>> = (0..=len)
        .map(|i| {
            f.multidegrees(i)
                .expect("multigraded")
                .iter()
                .enumerate()
                .filter(|(_, m)| m.divides(a))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    // ranks[i] = rank of d_i on the strand, i in 1..=len; ranks[len+1] = 0
    let mut ranks = vec![0usize; len + 2];
    for i in 1..=len {
        if sel[i].is_empty() || sel[i - 1].is_empty() {
            continue;
        }
        let m = strand_matrix(
            f.differential_ref(i).expect("in range"),
            f.multidegrees(i - 1).expect("multigraded"),
            f.multidegrees(i).expect("multigraded"),
            &sel[i - 1],
            &sel[i],
        );
        ranks[i] = linalg::rank(&m);
    }
    let in_ideal = generators.iter().any(|g| g.divides(a));
    let quotient_dim = usize::from(!in_ideal);
    let fail = |position| {
        Some(StrandFailure {
            multidegree: a.exponents().to_vec(),
            position,
        })
    };
    if sel[0].len() < ranks[1] || sel[0].len() - ranks[1] != quotient_dim {
        return fail(0);
    }
    for i in 1..=len {
        if sel[i].len() != ranks[i] + ranks[i + 1] {
            return fail(i);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::builders::{koszul_complex, lq_resolution, taylor_complex};
    use super::*;
    use crate::ideal::OrderedIdeal;
    use crate::ring::Polynomial;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn lq_resolution_of_stable_ideal_verifies() {
        let st = OrderedIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])
            .unwrap()
            .with_sets()
            .unwrap();
        let r = verify_complex(&lq_resolution(&st).unwrap());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.strands_checked, 9);
    }

    #[test]
    fn taylor_report() {
        let t = taylor_complex(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        let r = verify_complex(&t);
        assert!(r.dsq_zero && r.exact == Some(true));
        // e_{13} -> e_{1}, e_{3} and e_{123} -> e_{13} with coefficient 1
        assert!(!r.minimal);
    }

    #[test]
    fn koszul_on_squares_is_exact() {
        let x2 = Polynomial::monomial(mono(&[2, 0]));
        let y2 = Polynomial::monomial(mono(&[0, 2]));
        assert!(verify_complex(&koszul_complex(&[x2, y2]).unwrap()).passed());
    }

    #[test]
    fn corrupted_sign_is_detected() {
        let st = OrderedIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])
            .unwrap()
            .with_sets()
            .unwrap();
        let mut f = lq_resolution(&st).unwrap();
        let d = &mut f.differentials_mut()[1];
        let (r, c, p) = d.entries().map(|(r, c, p)| (r, c, p.clone())).next().unwrap();
        d.set(r, c, -&p);
        let rep = verify_complex(&f);
        assert!(!rep.dsq_zero);
        assert_eq!(rep.dsq_failure, Some(2));
    }

    #[test]
    fn truncated_complex_is_not_exact() {
        let t = taylor_complex(&[mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        let cut = FreeComplex::new(
            2,
            vec![t.module(0).unwrap().clone(), t.module(1).unwrap().clone()],
            vec![t.differential(1)],
        )
        .unwrap();
        let r = verify_complex(&cut);
        assert_eq!(r.exact, Some(false));
        assert_eq!(
            r.exact_failure,
            Some(StrandFailure {
                multidegree: vec![1, 1],
                position: 1
            })
        );
    }
}
