//! Deterministic JSON views (schema `mapcone-v1`).
//!
//! Every index in these views is 1-based. Basis elements of each module
//! are sorted by `(|σ|, σ lex, generator)`, and rows and columns refer to
//! that order. Field order is the declaration order below.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::decomposition::{RegularityReport, RegularityWitness};
use crate::dg::DgAlgebra;
use crate::ideal::{ClassReport, OrderedIdeal, VarSet};
use crate::resolution::{BasisLabel, BettiTable, FreeComplex, SparseMatrix, VerifyReport};
use crate::ring::{Coeff, Monomial, Polynomial};

pub const SCHEMA: &str = "mapcone-v1";

/// An integer that falls back to a decimal string outside the `i64` range.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&num_bigint::BigInt> for JsonInt {
    fn from(n: &num_bigint::BigInt) -> Self {
        n.to_i64().map_or_else(|| JsonInt::Big(n.to_string()), JsonInt::Small)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TermJson {
    pub coeff_numerator: JsonInt,
    pub coeff_denominator: JsonInt,
    pub exponent_vector: Vec<u32>,
}

fn term_json(m: &Monomial, c: &Coeff) -> TermJson {
    TermJson {
        coeff_numerator: c.numer().into(),
        coeff_denominator: c.denom().into(),
        exponent_vector: m.exponents().to_vec(),
    }
}

pub fn polynomial_terms(p: &Polynomial) -> Vec<TermJson> {
    p.terms().map(|(m, c)| term_json(m, c)).collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LabelJson {
    pub sigma: Vec<usize>,
    pub generator: Option<usize>,
    /// Number of mapping-cone bars around the label.
    pub bar: usize,
    pub text: String,
    pub multidegree: Option<Vec<u32>>,
}

fn plus_one(s: &[usize]) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

// (|σ|, σ, generator, bar depth, kind)
type LabelKey = (usize, Vec<usize>, Option<usize>, usize, u8);

fn label_key(l: &BasisLabel) -> LabelKey {
    match l {
        BasisLabel::Unit => (0, Vec::new(), None, 0, 0),
        BasisLabel::Gen { sigma, generator } => (sigma.len(), sigma.clone(), Some(*generator), 0, 1),
        BasisLabel::Wedge(s) => (s.len(), s.clone(), None, 0, 2),
        BasisLabel::Bar(inner) => {
            let (n, s, g, bars, kind) = label_key(inner);
            (n, s, g, bars + 1, kind)
        }
    }
}

fn label_json(l: &BasisLabel, multidegree: Option<&Monomial>) -> LabelJson {
    let (_, sigma, generator, bar, _) = label_key(l);
    LabelJson {
        sigma: plus_one(&sigma),
        generator: generator.map(|g| g + 1),
        bar,
        text: l.to_string(),
        multidegree: multidegree.map(|m| m.exponents().to_vec()),
    }
}

/// `positions[i][old] = new` for the canonical order of each module.
fn canonical_positions(c: &FreeComplex) -> Vec<Vec<usize>> {
    (0..=c.length())
        .map(|i| {
            let labels = c.labels(i);
            let mut order: Vec<usize> = (0..labels.len()).collect();
            order.sort_by_cached_key(|&k| label_key(&labels[k]));
            let mut pos = vec![0; labels.len()];
            for (new, &old) in order.iter().enumerate() {
                pos[old] = new;
            }
            pos
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub coeff_numerator: JsonInt,
    pub coeff_denominator: JsonInt,
    pub exponent_vector: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ModuleJson {
    pub degree: usize,
    pub rank: usize,
    pub basis: Vec<LabelJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MatrixJson {
    /// The map goes from degree `degree` to `degree - 1`.
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ComplexJson {
    pub nvars: usize,
    pub ranks: Vec<usize>,
    pub modules: Vec<ModuleJson>,
    pub differentials: Vec<MatrixJson>,
}

fn matrix_json(degree: usize, d: &SparseMatrix, rows: &[usize], cols: &[usize]) -> MatrixJson {
    let mut entries: Vec<(usize, usize, EntryJson)> = Vec::new();
    for (r, c, p) in d.entries() {
        for (m, k) in p.terms() {
            let t = term_json(m, k);
            entries.push((
                cols[c],
                rows[r],
                EntryJson {
                    row: rows[r] + 1,
                    col: cols[c] + 1,
                    coeff_numerator: t.coeff_numerator,
                    coeff_denominator: t.coeff_denominator,
                    exponent_vector: t.exponent_vector,
                },
            ));
        }
    }
    // stable sort keeps the term order within one entry
    entries.sort_by_key(|(c, r, _)| (*c, *r));
    MatrixJson {
        degree,
        rows: d.nrows(),
        cols: d.ncols(),
        entries: entries.into_iter().map(|(_, _, e)| e).collect(),
    }
}

pub fn complex_json(c: &FreeComplex) -> ComplexJson {
    let pos = canonical_positions(c);
    let modules = (0..=c.length())
        .map(|i| {
            let labels = c.labels(i);
            let mds = c.multidegrees(i);
            let mut basis: Vec<Option<LabelJson>> = vec![None; labels.len()];
            for (old, l) in labels.iter().enumerate() {
                basis[pos[i][old]] = Some(label_json(l, mds.map(|m| &m[old])));
            }
            ModuleJson {
                degree: i,
                rank: labels.len(),
                basis: basis.into_iter().map(|b| b.expect("permutation")).collect(),
            }
        })
        .collect();
    let differentials = (1..=c.length())
        .map(|i| {
            let d = c.differential_ref(i).expect("in range");
            matrix_json(i, d, &pos[i - 1], &pos[i])
        })
        .collect();
    ComplexJson {
        nvars: c.nvars(),
        ranks: c.ranks(),
        modules,
        differentials,
    }
}

/// A basis element as `(homological degree, 1-based canonical position)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct BasisRef {
    pub degree: usize,
    pub index: usize,
    pub label: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProductTermJson {
    pub basis: BasisRef,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProductJson {
    pub left: BasisRef,
    pub right: BasisRef,
    pub result: Vec<ProductTermJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DgJson {
    pub complex: ComplexJson,
    pub products: Vec<ProductJson>,
}

/// The complex and every nonzero product of basis elements.
pub fn dg_json(a: &DgAlgebra) -> DgJson {
    let c = a.complex();
    let pos = canonical_positions(c);
    let basis_ref = |(i, k): (usize, usize)| BasisRef {
        degree: i,
        index: pos[i][k] + 1,
        label: c.labels(i)[k].to_string(),
    };
    let mut products: Vec<ProductJson> = Vec::new();
    for (x, y, chain) in a.products() {
        if chain.is_empty() {
            continue;
        }
        let deg = x.0 + y.0;
        let mut result: Vec<ProductTermJson> = chain
            .iter()
            .map(|(&k, p)| ProductTermJson {
                basis: basis_ref((deg, k)),
                terms: polynomial_terms(p),
            })
            .collect();
        result.sort_by(|a, b| a.basis.cmp(&b.basis));
        products.push(ProductJson {
            left: basis_ref(x),
            right: basis_ref(y),
            result,
        });
    }
    products.sort_by(|p, q| {
        (p.left.degree, p.left.index, p.right.degree, p.right.index)
            .cmp(&(q.left.degree, q.left.index, q.right.degree, q.right.index))
    });
    DgJson {
        complex: complex_json(c),
        products,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BettiEntryJson {
    pub i: usize,
    pub degree: usize,
    pub value: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BettiJson {
    pub totals: Vec<usize>,
    pub entries: Vec<BettiEntryJson>,
}

pub fn betti_json(b: &BettiTable) -> BettiJson {
    BettiJson {
        totals: b.totals(),
        entries: b
            .entries()
            .map(|(i, degree, value)| BettiEntryJson { i, degree, value })
            .collect(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IdealJson {
    pub nvars: usize,
    pub generators: Vec<String>,
}

pub fn ideal_json(i: &OrderedIdeal) -> IdealJson {
    IdealJson {
        nvars: i.nvars(),
        generators: i.generators().iter().map(ToString::to_string).collect(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ColonFailureJson {
    pub step: usize,
    pub colon_generator: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExchangeWitnessJson {
    pub u: usize,
    pub v: usize,
    pub i: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ClassReportJson {
    pub linear_quotients: bool,
    pub degree_nondecreasing: bool,
    pub stable: bool,
    pub squarefree_stable: bool,
    pub exchange_property: bool,
    pub matroidal: bool,
    pub failure_witness: Option<ColonFailureJson>,
    pub exchange_witness: Option<ExchangeWitnessJson>,
}

pub fn class_report_json(r: &ClassReport) -> ClassReportJson {
    ClassReportJson {
        linear_quotients: r.linear_quotients,
        degree_nondecreasing: r.degree_nondecreasing,
        stable: r.stable,
        squarefree_stable: r.squarefree_stable,
        exchange_property: r.exchange_property,
        matroidal: r.matroidal,
        failure_witness: r.failure_witness.as_ref().map(|(step, m)| ColonFailureJson {
            step: *step,
            colon_generator: m.to_string(),
        }),
        exchange_witness: r.exchange_witness.as_ref().map(|w| ExchangeWitnessJson {
            u: w.u + 1,
            v: w.v + 1,
            i: w.i + 1,
        }),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SetJson {
    pub generator: String,
    pub set: Vec<usize>,
}

pub fn sets_json(i: &OrderedIdeal, sets: &[VarSet]) -> Vec<SetJson> {
    i.generators()
        .iter()
        .zip(sets)
        .map(|(g, s)| SetJson {
            generator: g.to_string(),
            set: plus_one(s),
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RegularityWitnessJson {
    /// 1-based position of `u`.
    pub generator: usize,
    pub u: String,
    /// 1-based index of the variable `x_s`.
    pub s: usize,
    /// `set(g(x_s u))`, 1-based.
    pub found: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RegularityJson {
    pub regular: bool,
    pub witness: Option<RegularityWitnessJson>,
}

pub fn regularity_json(i: &OrderedIdeal, r: &RegularityReport) -> RegularityJson {
    RegularityJson {
        regular: r.regular,
        witness: r.witness.as_ref().map(|w: &RegularityWitness| RegularityWitnessJson {
            generator: w.generator + 1,
            u: i.generator(w.generator).to_string(),
            s: w.s + 1,
            found: plus_one(&w.found),
        }),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MinimalFailureJson {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StrandFailureJson {
    pub multidegree: Vec<u32>,
    pub position: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyJson {
    pub passed: bool,
    pub dsq_zero: bool,
    pub dsq_failure: Option<usize>,
    pub minimal: bool,
    pub minimal_failure: Option<MinimalFailureJson>,
    pub homogeneous: bool,
    pub exact: Option<bool>,
    pub exactness: &'static str,
    pub exact_failure: Option<StrandFailureJson>,
    pub strands_checked: usize,
}

/// Row and column of `minimal_failure` are positions in the original
/// basis order of `c`, mapped to the canonical order.
pub fn verify_json(c: &FreeComplex, r: &VerifyReport) -> VerifyJson {
    let pos = canonical_positions(c);
    VerifyJson {
        passed: r.passed(),
        dsq_zero: r.dsq_zero,
        dsq_failure: r.dsq_failure,
        minimal: r.minimal,
        minimal_failure: r.minimal_failure.map(|(i, row, col)| MinimalFailureJson {
            degree: i,
            row: pos[i - 1][row] + 1,
            col: pos[i][col] + 1,
        }),
        homogeneous: r.homogeneous,
        exact: r.exact,
        exactness: "box-certified",
        exact_failure: r.exact_failure.as_ref().map(|f| StrandFailureJson {
            multidegree: f.multidegree.clone(),
            position: f.position,
        }),
        strands_checked: r.strands_checked,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ErrorJson {
    pub kind: String,
    pub refusal: bool,
    pub message: String,
}

impl From<&crate::error::Error> for ErrorJson {
    fn from(e: &crate::error::Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_string();
        ErrorJson {
            kind,
            refusal: e.is_refusal(),
            message: e.to_string(),
        }
    }
}

/// The command-line report envelope. Absent sections are omitted.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<serde_value::Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_report: Option<ClassReportJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<SetJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regularity_witness: Option<RegularityWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti_formula: Option<BettiJson>,
    /// True when degrees are not nondecreasing, so the formula counts the
    /// ranks of a possibly non-minimal complex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub possibly_non_minimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti_oracle: Option<BettiJson>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dg: Option<BTreeMap<String, serde_value::Section>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            ..Report::default()
        }
    }
}

/// Heterogeneous payloads of the envelope.
pub mod serde_value {
    use serde::Serialize;

    use super::{BettiJson, ComplexJson, DgJson, IdealJson, TermJson, VerifyJson};
    use crate::dg::{CompositeReport, DgReport, IsoReport, KoszulTypeReport, SequenceReport};

    #[derive(Clone, PartialEq, Eq, Debug, Serialize)]
    #[serde(untagged)]
    pub enum Input {
        Ideal(IdealJson),
        Polynomials(PolynomialInput),
    }

    #[derive(Clone, PartialEq, Eq, Debug, Serialize)]
    pub struct PolynomialInput {
        pub nvars: usize,
        pub f: Vec<String>,
        pub g: Vec<String>,
        pub a: Vec<Vec<String>>,
        pub steps: Vec<String>,
    }

    #[derive(Clone, Debug, Serialize)]
    #[serde(untagged)]
    pub enum Section {
        Dg(DgReport),
        Iso(IsoReport),
        KoszulType(KoszulTypeReport),
        Sequence(SequenceReport),
        Algebra(Box<DgJson>),
        Complex(Box<ComplexJson>),
        Verify(VerifyJson),
        Betti(BettiJson),
        Composite(CompositeReport),
        Flag(bool),
        Polynomial(Vec<TermJson>),
        Text(String),
    }
}
