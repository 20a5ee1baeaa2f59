use serde::Serialize;

use super::algebra::{check_label_isomorphism, dg_check, koszul_dg, taylor_dg, DgAlgebra};
use super::ktype::{koszul_type_check, tilde_phi, CompositeReport, KoszulTypeReport, TildePhi};
use super::star::{nagata_star, star_label_map, taylor_star_parts};
use crate::error::{Error, Result};
use crate::linalg;
use crate::resolution::{verify_complex, ComplexMap, SparseMatrix, VerifyReport};
use crate::ring::{Monomial, Polynomial};

/// A regular sequence `f` inside another regular sequence `g`, linked by
/// `f_i = Σ_j a_ij g_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AciInput {
    pub f: Vec<Polynomial>,
    pub g: Vec<Polynomial>,
    pub a: Vec<Vec<Polynomial>>,
}

impl AciInput {
    pub fn new(f: Vec<Polynomial>, g: Vec<Polynomial>, a: Vec<Vec<Polynomial>>) -> Result<Self> {
        let input = AciInput { f, g, a };
        input.validate()?;
        Ok(input)
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn nvars(&self) -> usize {
        self.f.first().map_or(0, Polynomial::nvars)
    }

    /// `Δ = det(a_ij)`.
    pub fn delta(&self) -> Polynomial {
        linalg::det(&self.a, self.nvars())
    }

    /// Checks shapes and `f = A g` exactly.
    pub fn validate(&self) -> Result<()> {
        let n = self.f.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if self.g.len() != n || self.a.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: if self.g.len() != n { self.g.len() } else { self.a.len() },
            });
        }
        let nvars = self.nvars();
        for (i, row) in self.a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            let polys = row.iter().chain(&self.g).chain(std::iter::once(&self.f[i]));
            if let Some(p) = polys.into_iter().find(|p| p.nvars() != nvars) {
                return Err(Error::DimensionMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
            let mut sum = Polynomial::zero(nvars);
            for (aij, gj) in row.iter().zip(&self.g) {
                sum.add_assign_ref(&(aij * gj));
            }
            if sum != self.f[i] {
                return Err(Error::RelationViolation { row: i + 1 });
            }
        }
        if self.delta().is_zero() {
            return Err(Error::InvariantViolation("det(a) = 0".into()));
        }
        Ok(())
    }
}

/// The star `Koszul(f) * Koszul(g)` resolving `R/(f_1, ..., f_n, Δ)`.
pub struct AciResolution {
    pub star: DgAlgebra,
    pub a: DgAlgebra,
    pub m: DgAlgebra,
    pub phi: ComplexMap,
    pub tilde: TildePhi,
    pub psi: ComplexMap,
    pub delta: Polynomial,
    pub composites: CompositeReport,
}

/// `φ(e_σ) = Σ_τ det(a_{σ,τ}) h_τ`, the algebra map extending
/// `φ(e_i) = Σ_j a_ij h_j`.
pub fn linkage_map(a: &DgAlgebra, m: &DgAlgebra, matrix: &[Vec<Polynomial>]) -> Result<ComplexMap> {
    use crate::resolution::BasisLabel;
    let nvars = a.nvars();
    let len = a.complex().length();
    let wedge = |l: &BasisLabel| match l {
        BasisLabel::Wedge(s) => s.clone(),
        _ => unreachable!("Koszul labels"),
    };
    let mut mats = Vec::with_capacity(len + 1);
    for k in 0..=len {
        let mut mat = SparseMatrix::zero(m.complex().rank(k), a.complex().rank(k), nvars);
        for (c, lc) in a.complex().labels(k).iter().enumerate() {
            let sigma = wedge(lc);
            for (r, lr) in m.complex().labels(k).iter().enumerate() {
                let tau = wedge(lr);
                let minor: Vec<Vec<Polynomial>> = sigma
                    .iter()
                    .map(|&s| tau.iter().map(|&t| matrix[s][t].clone()).collect())
                    .collect();
                mat.set(r, c, linalg::det(&minor, nvars));
            }
        }
        mats.push(mat);
    }
    ComplexMap::new_unchecked(
        a.complex().clone(),
        m.complex().clone(),
        mats,
        Some(Monomial::one(nvars)),
    )
}

pub fn aci_resolution(input: &AciInput) -> Result<AciResolution> {
    input.validate()?;
    let n = input.n();
    let a = koszul_dg(&input.f)?;
    let m = koszul_dg(&input.g)?;
    let phi = linkage_map(&a, &m, &input.a)?;
    if let Some(degree) = phi.commutation_failure() {
        return Err(Error::NotDgHomomorphism(format!(
            "φ is not a chain map in degree {degree}"
        )));
    }
    let tilde = tilde_phi(&a, &m, &phi, n)?;
    let delta = input.delta();
    let composites = tilde.composites(&phi);
    let psi = tilde.scaled_map(&phi, &delta)?;
    let star = nagata_star(&a, &m, &phi, &psi, &delta)?;
    Ok(AciResolution {
        star,
        a,
        m,
        phi,
        tilde,
        psi,
        delta,
        composites,
    })
}

/// How the resolution of `(f_1..f_i) : f_{i+1}` is obtained at one step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SequenceStep {
    /// The colon is `(f_1..f_i)`; `M = A`, `φ = id`, `ψ = f_{i+1} · id`.
    Regular,
    /// Monomials; `M` is the Taylor algebra of `f_k / gcd(f_k, f_{i+1})`.
    Monomial,
    /// `f_{i+1} = det(a)` with `f_k = Σ a_kj g_j`; `M = Koszul(g)`.
    Linked {
        g: Vec<Polynomial>,
        a: Vec<Vec<Polynomial>>,
    },
}

impl SequenceStep {
    fn name(&self) -> &'static str {
        match self {
            SequenceStep::Regular => "regular",
            SequenceStep::Monomial => "monomial",
            SequenceStep::Linked { .. } => "linked",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StepReport {
    /// Length of the sequence after this step.
    pub length: usize,
    pub kind: &'static str,
    pub a_koszul_type: KoszulTypeReport,
    pub m_koszul_type: KoszulTypeReport,
    pub star_koszul_type: KoszulTypeReport,
    pub star_dg: bool,
    /// `None` for linked steps, which have no canonical model.
    pub isomorphic_to_canonical: Option<bool>,
    pub verify: VerifyReport,
}

impl StepReport {
    pub fn resolves(&self) -> bool {
        self.verify.dsq_zero && self.verify.exact == Some(true)
    }

    pub fn passed(&self) -> bool {
        self.a_koszul_type.passed()
            && self.m_koszul_type.passed()
            && self.star_koszul_type.passed()
            && self.star_dg
            && self.isomorphic_to_canonical != Some(false)
            && self.resolves()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SequenceReport {
    pub initial_koszul_type: KoszulTypeReport,
    pub initial_verify: VerifyReport,
    pub steps: Vec<StepReport>,
}

impl SequenceReport {
    pub fn passed(&self) -> bool {
        self.initial_koszul_type.passed()
            && self.initial_verify.dsq_zero
            && self.initial_verify.exact == Some(true)
            && self.steps.iter().all(StepReport::passed)
    }
}

fn monomials(f: &[Polynomial]) -> Result<Vec<Monomial>> {
    f.iter()
        .map(|p| match p.single_term() {
            Some((m, c)) if *c == crate::ring::coeff(1) => Ok(m.clone()),
            _ => Err(Error::InvariantViolation(format!("{p} is not a monomial"))),
        })
        .collect()
}

/// Builds `A^{(i+1)} = A^{(i)} * M^{(i)}` step by step from
/// `A^{(1)} = Koszul(f_1)` and checks each star: Koszul type of `A`, `M`
/// and the star, the DG laws, agreement with the canonical Koszul or
/// Taylor algebra where there is one, and that the star resolves
/// `R/(f_1..f_{i+1})`.
pub fn koszul_sequence_check(
    f: &[Polynomial],
    steps: &[SequenceStep],
    seed: u64,
) -> Result<SequenceReport> {
    if f.is_empty() {
        return Err(Error::EmptyInput);
    }
    if steps.len() + 1 != f.len() {
        return Err(Error::DimensionMismatch {
            left: f.len() - 1,
            right: steps.len(),
        });
    }
    let mut current = koszul_dg(&f[..1])?;
    let initial_koszul_type = koszul_type_check(&current, 1, seed);
    let initial_verify = verify_complex(current.complex());
    let mut reports = Vec::with_capacity(steps.len());
    for (k, step) in steps.iter().enumerate() {
        let i = k + 1;
        let next = &f[i];
        let (a, m, phi, psi, canonical) = match step {
            SequenceStep::Regular => {
                let a = current.clone();
                let phi = ComplexMap::identity(a.complex());
                let len = a.complex().length();
                let psi = ComplexMap::new_unchecked(
                    a.complex().clone(),
                    a.complex().clone(),
                    (0..=len)
                        .map(|d| SparseMatrix::scalar(a.complex().rank(d), next))
                        .collect(),
                    monomials(std::slice::from_ref(next)).ok().map(|v| v[0].clone()),
                )?;
                let canonical = koszul_dg(&f[..=i])?;
                (a.clone(), a, phi, psi, Some(canonical))
            }
            SequenceStep::Monomial => {
                let ms = monomials(&f[..=i])?;
                let parts = taylor_star_parts(&ms)?;
                if parts.a != current {
                    return Err(Error::InvariantViolation(format!(
                        "step {i}: the previous algebra is not the Taylor algebra"
                    )));
                }
                (parts.a, parts.m, parts.phi, parts.psi, Some(taylor_dg(&ms)?))
            }
            SequenceStep::Linked { g, a } => {
                let input = AciInput::new(f[..i].to_vec(), g.clone(), a.clone())?;
                if input.delta() != *next {
                    return Err(Error::RelationViolation { row: i + 1 });
                }
                let aci = aci_resolution(&input)?;
                if aci.a != current {
                    return Err(Error::InvariantViolation(format!(
                        "step {i}: the previous algebra is not the Koszul algebra"
                    )));
                }
                (aci.a, aci.m, aci.phi, aci.psi, None)
            }
        };
        let star = nagata_star(&a, &m, &phi, &psi, next)?;
        let iso = canonical
            .as_ref()
            .map(|c| check_label_isomorphism(c, &star, star_label_map(i)).passed());
        let report = StepReport {
            length: i + 1,
            kind: step.name(),
            a_koszul_type: koszul_type_check(&a, i, seed),
            m_koszul_type: koszul_type_check(&m, i, seed),
            star_koszul_type: koszul_type_check(&star, i + 1, seed),
            star_dg: dg_check(&star).passed(),
            isomorphic_to_canonical: iso,
            verify: verify_complex(star.complex()),
        };
        current = match (canonical, iso) {
            (Some(c), Some(true)) => c,
            _ => star,
        };
        reports.push(report);
    }
    Ok(SequenceReport {
        initial_koszul_type,
        initial_verify,
        steps: reports,
    })
}
