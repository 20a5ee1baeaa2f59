use itertools::Itertools;

use super::complex::{mapping_cone, BasisLabel, ComplexMap, FreeComplex, Module, SparseMatrix};
use crate::decomposition::Decomposer;
use crate::error::{Error, Result};
use crate::ideal::OrderedIdeal;
use crate::ring::{Monomial, Polynomial};

/// `α(σ; t) = #{s ∈ σ : s < t}`.
pub fn alpha(sigma: &[usize], t: usize) -> usize {
    sigma.iter().filter(|&&s| s < t).count()
}

pub(crate) fn sign(p: &Polynomial, odd: bool) -> Polynomial {
    if odd {
        -p
    } else {
        p.clone()
    }
}

/// `-1` if `negative`, else `1`.
pub fn sign_of(negative: bool, nvars: usize) -> Polynomial {
    Polynomial::signed(Monomial::one(nvars), negative)
}

fn without(sigma: &[usize], t: usize) -> Vec<usize> {
    sigma.iter().copied().filter(|&s| s != t).collect()
}

/// All subsets of `items` of every size, grouped by size, each group in
/// lexicographic order.
pub(crate) fn subsets_by_size(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    (0..=items.len())
        .map(|k| items.iter().copied().combinations(k).collect())
        .collect()
}

fn as_monomial(p: &Polynomial) -> Option<Monomial> {
    match p.single_term() {
        Some((m, c)) if *c == crate::ring::coeff(1) => Some(m.clone()),
        _ => None,
    }
}

/// Exterior-algebra complex on `elements` with basis `e_σ` over subsets of
/// element indices. Multigraded when every element is a monic monomial.
pub fn koszul_complex(elements: &[Polynomial]) -> Result<FreeComplex> {
    let first = elements.first().ok_or(Error::EmptyInput)?;
    let nvars = first.nvars();
    if let Some(p) = elements.iter().find(|p| p.nvars() != nvars) {
        return Err(Error::DimensionMismatch {
            left: nvars,
            right: p.nvars(),
        });
    }
    let monos: Option<Vec<Monomial>> = elements.iter().map(as_monomial).collect();
    let idx: Vec<usize> = (0..elements.len()).collect();
    let subsets = subsets_by_size(&idx);
    let modules = subsets
        .iter()
        .map(|group| Module {
            labels: group.iter().map(|s| BasisLabel::Wedge(s.clone())).collect(),
            multidegrees: monos.as_ref().map(|ms| {
                group
                    .iter()
                    .map(|s| {
                        s.iter()
                            .fold(Monomial::one(nvars), |acc, &i| acc.mul_with(&ms[i]))
                    })
                    .collect()
            }),
        })
        .collect();
    let differentials = exterior_differentials(&subsets, nvars, |sigma, t| {
        sign(&elements[t], alpha(sigma, t) % 2 == 1)
    });
    FreeComplex::new(nvars, modules, differentials)
}

// ∂(e_σ) = Σ_{t∈σ} coefficient(σ, t) e_{σ∖t} over the given subset layout.
fn exterior_differentials(
    subsets: &[Vec<Vec<usize>>],
    nvars: usize,
    coefficient: impl Fn(&[usize], usize) -> Polynomial,
) -> Vec<SparseMatrix> {
    (1..subsets.len())
        .map(|k| {
            let rows = &subsets[k - 1];
            let mut d = SparseMatrix::zero(rows.len(), subsets[k].len(), nvars);
            for (c, sigma) in subsets[k].iter().enumerate() {
                for &t in sigma {
                    let r = rows
                        .binary_search(&without(sigma, t))
                        .expect("faces are listed");
                    d.add(r, c, &coefficient(sigma, t));
                }
            }
            d
        })
        .collect()
}

/// Koszul complex on the variables `vars`, labeled `f(σ; u_generator)`,
/// with multidegree `x_σ`.
pub fn koszul_on_variables(nvars: usize, vars: &[usize], generator: usize) -> FreeComplex {
    let subsets = subsets_by_size(vars);
    let modules = subsets
        .iter()
        .map(|group| Module {
            labels: group
                .iter()
                .map(|s| BasisLabel::Gen {
                    sigma: s.clone(),
                    generator,
                })
                .collect(),
            multidegrees: Some(group.iter().map(|s| Monomial::squarefree(nvars, s)).collect()),
        })
        .collect();
    let differentials = exterior_differentials(&subsets, nvars, |sigma, t| {
        Polynomial::signed(Monomial::var(nvars, t), alpha(sigma, t) % 2 == 1)
    });
    FreeComplex::new(nvars, modules, differentials).expect("well-formed Koszul complex")
}

/// Lcm of the monomials indexed by `sigma`; `1` for the empty set.
pub fn lcm_of(monomials: &[Monomial], sigma: &[usize], nvars: usize) -> Monomial {
    sigma
        .iter()
        .fold(Monomial::one(nvars), |acc, &i| acc.lcm_with(&monomials[i]))
}

/// Taylor complex: basis `e_σ` for all subsets of generator indices,
/// `∂e_σ = Σ (−1)^{α(σ;i)} (f_σ / f_{σ∖i}) e_{σ∖i}` with `f_σ` the lcm.
pub fn taylor_complex(monomials: &[Monomial]) -> Result<FreeComplex> {
    let first = monomials.first().ok_or(Error::EmptyInput)?;
    let nvars = first.nvars();
    if let Some(m) = monomials.iter().find(|m| m.nvars() != nvars) {
        return Err(Error::DimensionMismatch {
            left: nvars,
            right: m.nvars(),
        });
    }
    let idx: Vec<usize> = (0..monomials.len()).collect();
    let subsets = subsets_by_size(&idx);
    let modules = subsets
        .iter()
        .map(|group| Module {
            labels: group.iter().map(|s| BasisLabel::Wedge(s.clone())).collect(),
            multidegrees: Some(group.iter().map(|s| lcm_of(monomials, s, nvars)).collect()),
        })
        .collect();
    let differentials = exterior_differentials(&subsets, nvars, |sigma, t| {
        let full = lcm_of(monomials, sigma, nvars);
        let face = lcm_of(monomials, &without(sigma, t), nvars);
        Polynomial::signed(
            full.try_div(&face).expect("lcm of a face divides"),
            alpha(sigma, t) % 2 == 1,
        )
    });
    FreeComplex::new(nvars, modules, differentials)
}

fn check_lq_preconditions(ideal: &OrderedIdeal) -> Result<Decomposer<'_>> {
    let dec = Decomposer::new(ideal)?;
    if let Some(w) = ideal
        .generators()
        .windows(2)
        .position(|w| w[0].degree() > w[1].degree())
    {
        return Err(Error::DegreeOrderViolation { position: w + 2 });
    }
    dec.require_regular()?;
    Ok(dec)
}

/// `Σ_{t∈σ} (−1)^{α(σ;t)} (x_t u / g(x_t u)) f(σ∖t; g(x_t u))` for
/// `u = u_j`, as `(label, coefficient)` pairs. Terms whose face is not
/// contained in the set of its generator vanish.
fn psi_terms(dec: &Decomposer<'_>, j: usize, sigma: &[usize]) -> Vec<(BasisLabel, Polynomial)> {
    let ideal = dec.ideal();
    let u = ideal.generator(j);
    let nvars = ideal.nvars();
    let mut out = Vec::new();
    for &t in sigma {
        let xu = u.mul_var(t);
        let k = dec.g(&xu).expect("x_t u lies in the ideal");
        let face = without(sigma, t);
        if !face.iter().all(|s| dec.set(k).contains(s)) {
            continue;
        }
        let cof = xu.try_div(ideal.generator(k)).expect("g(v) divides v");
        out.push((
            BasisLabel::Gen {
                sigma: face,
                generator: k,
            },
            Polynomial::signed(cof, alpha(sigma, t) % 2 == 1),
        ));
        debug_assert_eq!(out.last().unwrap().1.nvars(), nvars);
    }
    out
}

/// The resolution of `R/I` with basis `f(σ; u)`, `σ ⊆ set(u)`, for an
/// ideal with linear quotients, nondecreasing degrees and regular
/// decomposition function. In each degree the basis is ordered by
/// generator, then lexicographically in `σ`.
pub fn lq_resolution(ideal: &OrderedIdeal) -> Result<FreeComplex> {
    let dec = check_lq_preconditions(ideal)?;
    let nvars = ideal.nvars();
    let len = dec.sets().iter().map(Vec::len).max().unwrap_or(0) + 1;
    let mut modules = vec![Module {
        labels: vec![BasisLabel::Unit],
        multidegrees: Some(vec![Monomial::one(nvars)]),
    }];
    for i in 1..=len {
        let mut labels = Vec::new();
        let mut md = Vec::new();
        for (j, u) in ideal.generators().iter().enumerate() {
            for sigma in dec.set(j).iter().copied().combinations(i - 1) {
                md.push(u.mul_with(&Monomial::squarefree(nvars, &sigma)));
                labels.push(BasisLabel::Gen {
                    sigma,
                    generator: j,
                });
            }
        }
        modules.push(Module {
            labels,
            multidegrees: Some(md),
        });
    }
    let mut differentials = Vec::with_capacity(len);
    for i in 1..=len {
        let rows: std::collections::HashMap<&BasisLabel, usize> = modules[i - 1]
            .labels
            .iter()
            .enumerate()
            .map(|(k, l)| (l, k))
            .collect();
        let mut d = SparseMatrix::zero(modules[i - 1].rank(), modules[i].rank(), nvars);
        for (c, label) in modules[i].labels.iter().enumerate() {
            let BasisLabel::Gen { sigma, generator: j } = label else {
                unreachable!("lq bases carry generator labels")
            };
            let u = ideal.generator(*j);
            if sigma.is_empty() {
                d.add(0, c, &Polynomial::monomial(u.clone()));
                continue;
            }
            for &t in sigma {
                let face = BasisLabel::Gen {
                    sigma: without(sigma, t),
                    generator: *j,
                };
                d.add(
                    rows[&face],
                    c,
                    &Polynomial::signed(Monomial::var(nvars, t), alpha(sigma, t).is_multiple_of(2)),
                );
            }
            for (face, coef) in psi_terms(&dec, *j, sigma) {
                d.add(rows[&face], c, &coef);
            }
        }
        differentials.push(d);
    }
    FreeComplex::new(nvars, modules, differentials)
}

/// `ψ^{(j)}: K^{(j)} -> F^{(j)}` lifting multiplication by `u_j`, where
/// `K^{(j)}` is the Koszul complex on `set(u_j)` and `F^{(j)}` the
/// resolution of `R/(u_0, ..., u_{j-1})` (`R` itself for `j = 0`).
pub fn comparison_map(ideal: &OrderedIdeal, j: usize) -> Result<ComplexMap> {
    if j >= ideal.len() {
        return Err(Error::IndexOutOfRange {
            index: j + 1,
            len: ideal.len(),
        });
    }
    let target = if j == 0 {
        FreeComplex::ring(ideal.nvars())
    } else {
        lq_resolution(&ideal.prefix(j))?
    };
    comparison_map_into(ideal, j, target)
}

/// As [`comparison_map`] with a caller-supplied target whose labels must
/// follow the `f(σ; u)` convention.
pub fn comparison_map_into(ideal: &OrderedIdeal, j: usize, target: FreeComplex) -> Result<ComplexMap> {
    let prefix = ideal.prefix(j + 1);
    let dec = check_lq_preconditions(&prefix)?;
    let nvars = ideal.nvars();
    let u = ideal.generator(j);
    let source = koszul_on_variables(nvars, dec.set(j), j);
    let mut matrices = Vec::with_capacity(source.length() + 1);
    for i in 0..=source.length() {
        let index = target.label_index(i);
        let mut m = SparseMatrix::zero(target.rank(i), source.rank(i), nvars);
        for (c, label) in source.labels(i).iter().enumerate() {
            let BasisLabel::Gen { sigma, .. } = label else {
                unreachable!()
            };
            if sigma.is_empty() {
                m.add(0, c, &Polynomial::monomial(u.clone()));
                continue;
            }
            for (face, coef) in psi_terms(&dec, j, sigma) {
                let r = *index.get(&face).ok_or_else(|| {
                    Error::InvariantViolation(format!("target has no basis element {face}"))
                })?;
                m.add(r, c, &coef);
            }
        }
        matrices.push(m);
    }
    ComplexMap::new(source, target, matrices, Some(u.clone()))
}

/// Builds the resolution one generator at a time as
/// `F^{(j+1)} = C(ψ^{(j)})`, starting from `F^{(0)} = R`.
pub fn iterated_cone_resolution(ideal: &OrderedIdeal) -> Result<FreeComplex> {
    check_lq_preconditions(ideal)?;
    let mut current = FreeComplex::ring(ideal.nvars());
    for j in 0..ideal.len() {
        let psi = comparison_map_into(ideal, j, current)?;
        current = mapping_cone(&psi)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::coeff;

    fn sq(n: usize, vars: &[usize]) -> Monomial {
        Monomial::squarefree(n, &vars.iter().map(|v| v - 1).collect::<Vec<_>>())
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn gen(sigma: &[usize], generator: usize) -> BasisLabel {
        BasisLabel::Gen {
            sigma: sigma.to_vec(),
            generator,
        }
    }

    fn column_of(c: &FreeComplex, i: usize, label: &BasisLabel) -> Vec<(BasisLabel, Polynomial)> {
        let k = c.index_of(i, label).unwrap();
        c.differential(i)
            .column(k)
            .iter()
            .map(|(&r, p)| (c.labels(i - 1)[r].clone(), p.clone()))
            .collect()
    }

    #[test]
    fn koszul_examples() {
        let k = koszul_complex(&[Polynomial::var(2, 1)]).unwrap();
        assert_eq!(k.ranks(), vec![1, 1]);
        let k = koszul_complex(&[Polynomial::var(2, 0), Polynomial::var(2, 1)]).unwrap();
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert_eq!(k.dsq_failure(), None);
        let d2 = k.differential(2);
        assert_eq!(d2.entry(0, 0), -&Polynomial::var(2, 1));
        assert_eq!(d2.entry(1, 0), Polynomial::var(2, 0));
        assert_eq!(koszul_complex(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn taylor_examples() {
        let t = taylor_complex(&[mono(&[2, 0]), mono(&[1, 1])]).unwrap();
        assert_eq!(t.ranks(), vec![1, 2, 1]);
        let d2 = t.differential(2);
        assert_eq!(d2.entry(0, 0), -&Polynomial::var(2, 1));
        assert_eq!(d2.entry(1, 0), Polynomial::var(2, 0));
        let t = taylor_complex(&[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 3])]).unwrap();
        assert_eq!(t.dsq_failure(), None);
        assert_eq!(taylor_complex(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn lq_differential_examples() {
        let i = OrderedIdeal::new(vec![sq(3, &[1, 2]), sq(3, &[1, 3]), sq(3, &[2, 3])])
            .unwrap()
            .with_sets()
            .unwrap();
        let f = lq_resolution(&i).unwrap();
        assert_eq!(f.ranks(), vec![1, 3, 2]);
        let mut col = column_of(&f, 2, &gen(&[1], 1));
        col.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            col,
            vec![
                (gen(&[], 0), Polynomial::var(3, 2)),
                (gen(&[], 1), -&Polynomial::var(3, 1)),
            ]
        );
        for j in 0..3 {
            assert_eq!(
                column_of(&f, 1, &gen(&[], j)),
                vec![(BasisLabel::Unit, Polynomial::monomial(i.generator(j).clone()))]
            );
        }

        let st = OrderedIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])
            .unwrap()
            .with_sets()
            .unwrap();
        let f = lq_resolution(&st).unwrap();
        let mut col = column_of(&f, 2, &gen(&[0], 2));
        col.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            col,
            vec![
                (gen(&[], 1), Polynomial::var(2, 1)),
                (gen(&[], 2), -&Polynomial::var(2, 0)),
            ]
        );
    }

    #[test]
    fn lq_refusals() {
        let i = OrderedIdeal::new(vec![sq(4, &[1, 2]), sq(4, &[2, 3, 4]), sq(4, &[1, 3])]).unwrap();
        assert_eq!(lq_resolution(&i), Err(Error::DegreeOrderViolation { position: 3 }));
        let k = OrderedIdeal::new(vec![sq(4, &[2, 4]), sq(4, &[1, 2]), sq(4, &[1, 3])]).unwrap();
        assert!(matches!(lq_resolution(&k), Err(Error::NotRegular { .. })));
        let n = OrderedIdeal::new(vec![sq(4, &[1, 2]), sq(4, &[3, 4])]).unwrap();
        assert!(matches!(lq_resolution(&n), Err(Error::NotLinearQuotients { .. })));
    }

    #[test]
    fn comparison_map_examples() {
        let st = OrderedIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])
            .unwrap()
            .with_sets()
            .unwrap();
        let psi = comparison_map(&st, 2).unwrap();
        let k = psi.source().index_of(1, &gen(&[0], 2)).unwrap();
        let col = psi.matrix(1).column(k).clone();
        assert_eq!(col.len(), 1);
        let (&r, p) = col.iter().next().unwrap();
        assert_eq!(psi.target().labels(1)[r], gen(&[], 1));
        assert_eq!(*p, Polynomial::var(2, 1));
        assert_eq!(
            psi.matrix(0).entry(0, 0),
            Polynomial::monomial(mono(&[0, 2]))
        );
        // image in the maximal ideal
        for m in psi.matrices() {
            assert!(m.entries().all(|(_, _, p)| p.constant_term() == coeff(0)));
        }
    }

    #[test]
    fn iterated_cone_matches_direct() {
        let st = OrderedIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])
            .unwrap()
            .with_sets()
            .unwrap();
        assert_eq!(iterated_cone_resolution(&st).unwrap(), lq_resolution(&st).unwrap());
        let sqs = OrderedIdeal::new(vec![sq(3, &[1, 2]), sq(3, &[1, 3]), sq(3, &[2, 3])])
            .unwrap()
            .with_sets()
            .unwrap();
        assert_eq!(
            iterated_cone_resolution(&sqs).unwrap(),
            lq_resolution(&sqs).unwrap()
        );
    }
}
