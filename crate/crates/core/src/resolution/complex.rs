use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Monomial, Polynomial};

/// Label of a free-module basis element.
///
/// Index fields are 0-based; `Display` prints them 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BasisLabel {
    /// The generator of `F_0 = R`.
    Unit,
    /// `f(sigma; u_generator)`.
    Gen { sigma: Vec<usize>, generator: usize },
    /// `e_sigma` of a Koszul or Taylor complex.
    Wedge(Vec<usize>),
    /// The copy of a source basis element inside a mapping cone.
    Bar(Box<BasisLabel>),
}

fn fmt_set(f: &mut fmt::Formatter<'_>, s: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (k, i) in s.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", i + 1)?;
    }
    f.write_str("}")
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Unit => f.write_str("1"),
            BasisLabel::Gen { sigma, generator } => {
                f.write_str("f(")?;
                fmt_set(f, sigma)?;
                write!(f, ";u{})", generator + 1)
            }
            BasisLabel::Wedge(s) => {
                f.write_str("e")?;
                fmt_set(f, s)
            }
            BasisLabel::Bar(inner) => write!(f, "bar({inner})"),
        }
    }
}

/// Element of a free module in coordinates: basis index to coefficient.
pub type Chain = BTreeMap<usize, Polynomial>;

/// `acc += scale * x`.
pub fn chain_add_scaled(acc: &mut Chain, x: &Chain, scale: &Polynomial) {
    for (&k, c) in x {
        let term = c * scale;
        add_entry(acc, k, &term);
    }
}

pub(crate) fn add_entry(acc: &mut Chain, k: usize, p: &Polynomial) {
    if p.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(e) => {
            e.add_assign_ref(p);
            if e.is_zero() {
                acc.remove(&k);
            }
        }
        None => {
            acc.insert(k, p.clone());
        }
    }
}

pub fn chain_neg(x: &Chain) -> Chain {
    x.iter().map(|(&k, c)| (k, -c)).collect()
}

/// Column-major sparse matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    nrows: usize,
    nvars: usize,
    cols: Vec<Chain>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize, nvars: usize) -> Self {
        SparseMatrix {
            nrows,
            nvars,
            cols: vec![Chain::new(); ncols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::scalar(n, &Polynomial::one(nvars))
    }

    pub fn scalar(n: usize, p: &Polynomial) -> Self {
        let mut m = Self::zero(n, n, p.nvars());
        for i in 0..n {
            m.add(i, i, p);
        }
        m
    }

    pub fn from_columns(nrows: usize, nvars: usize, cols: Vec<Chain>) -> Self {
        debug_assert!(cols.iter().all(|c| c.keys().all(|&r| r < nrows)));
        SparseMatrix { nrows, nvars, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Polynomial> {
        self.cols[c].get(&r)
    }

    pub fn entry(&self, r: usize, c: usize) -> Polynomial {
        self.get(r, c)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn add(&mut self, r: usize, c: usize, p: &Polynomial) {
        assert!(r < self.nrows, "row {r} out of range {}", self.nrows);
        add_entry(&mut self.cols[c], r, p);
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        if p.is_zero() {
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r, p);
        }
    }

    pub fn column(&self, c: usize) -> &Chain {
        &self.cols[c]
    }

    /// Nonzero entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, p)| (r, c, p)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, x: &Chain) -> Chain {
        let mut out = Chain::new();
        for (&k, c) in x {
            chain_add_scaled(&mut out, &self.cols[k], c);
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "composition shape mismatch");
        SparseMatrix {
            nrows: self.nrows,
            nvars: self.nvars,
            cols: rhs.cols.iter().map(|col| self.apply(col)).collect(),
        }
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (rhs.nrows, rhs.ncols()));
        let mut out = self.clone();
        for (r, c, p) in rhs.entries() {
            out.add(r, c, &-p);
        }
        out
    }

    pub fn scale(&self, p: &Polynomial) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            nvars: self.nvars,
            cols: self
                .cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(&r, e)| (r, e * p))
                        .filter(|(_, e)| !e.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Rows and columns reindexed: entry `(r, c)` moves to `(row_map[r], col_map[c])`.
    pub fn permuted(&self, row_map: &[usize], col_map: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.nrows, self.ncols(), self.nvars);
        for (r, c, p) in self.entries() {
            out.set(row_map[r], col_map[c], p.clone());
        }
        out
    }
}

/// A free module: labeled basis, optional multidegrees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Module {
    pub labels: Vec<BasisLabel>,
    pub multidegrees: Option<Vec<Monomial>>,
}

impl Module {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }
}

/// A bounded complex of finitely generated free modules
/// `0 <- F_0 <- F_1 <- ... <- F_len <- 0` with `F_0` the resolved ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeComplex {
    nvars: usize,
    modules: Vec<Module>,
    // differentials[i - 1] = d_i : F_i -> F_{i-1}
    differentials: Vec<SparseMatrix>,
}

impl FreeComplex {
    pub fn new(nvars: usize, modules: Vec<Module>, differentials: Vec<SparseMatrix>) -> Result<Self> {
        if modules.is_empty() || differentials.len() + 1 != modules.len() {
            return Err(Error::InvariantViolation(
                "complex needs one differential per positive degree".into(),
            ));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.nrows() != modules[i].rank() || d.ncols() != modules[i + 1].rank() {
                return Err(Error::InvariantViolation(format!(
                    "differential d_{} has shape {}x{}, expected {}x{}",
                    i + 1,
                    d.nrows(),
                    d.ncols(),
                    modules[i].rank(),
                    modules[i + 1].rank()
                )));
            }
        }
        for m in &modules {
            if let Some(md) = &m.multidegrees {
                if md.len() != m.rank() || md.iter().any(|x| x.nvars() != nvars) {
                    return Err(Error::InvariantViolation("bad multidegree list".into()));
                }
            }
        }
        Ok(FreeComplex {
            nvars,
            modules,
            differentials,
        })
    }

    /// `R` in degree 0.
    pub fn ring(nvars: usize) -> Self {
        FreeComplex {
            nvars,
            modules: vec![Module {
                labels: vec![BasisLabel::Unit],
                multidegrees: Some(vec![Monomial::one(nvars)]),
            }],
            differentials: vec![],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Top homological degree.
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn rank(&self, i: usize) -> usize {
        self.modules.get(i).map_or(0, Module::rank)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Module::rank).collect()
    }

    pub fn module(&self, i: usize) -> Option<&Module> {
        self.modules.get(i)
    }

    pub fn labels(&self, i: usize) -> &[BasisLabel] {
        self.modules.get(i).map_or(&[], |m| &m.labels)
    }

    pub fn multidegrees(&self, i: usize) -> Option<&[Monomial]> {
        match self.modules.get(i) {
            Some(m) => m.multidegrees.as_deref(),
            None => Some(&[]),
        }
    }

    pub fn is_multigraded(&self) -> bool {
        self.modules.iter().all(|m| m.multidegrees.is_some())
    }

    pub fn index_of(&self, i: usize, label: &BasisLabel) -> Option<usize> {
        self.labels(i).iter().position(|l| l == label)
    }

    pub fn label_index(&self, i: usize) -> HashMap<BasisLabel, usize> {
        self.labels(i)
            .iter()
            .enumerate()
            .map(|(k, l)| (l.clone(), k))
            .collect()
    }

    /// `d_i : F_i -> F_{i-1}`; a zero matrix outside `1..=length`.
    pub fn differential(&self, i: usize) -> SparseMatrix {
        if i >= 1 && i <= self.differentials.len() {
            self.differentials[i - 1].clone()
        } else {
            SparseMatrix::zero(self.rank(i.wrapping_sub(1)), self.rank(i), self.nvars)
        }
    }

    pub fn differential_ref(&self, i: usize) -> Option<&SparseMatrix> {
        if i >= 1 {
            self.differentials.get(i - 1)
        } else {
            None
        }
    }

    pub fn differentials_mut(&mut self) -> &mut [SparseMatrix] {
        &mut self.differentials
    }

    pub fn apply_d(&self, i: usize, x: &Chain) -> Chain {
        match self.differential_ref(i) {
            Some(d) => d.apply(x),
            None => Chain::new(),
        }
    }

    /// Same complex with every label mapped through `f`.
    pub fn relabeled(&self, f: impl Fn(&BasisLabel) -> BasisLabel) -> FreeComplex {
        let mut out = self.clone();
        for m in &mut out.modules {
            for l in &mut m.labels {
                *l = f(l);
            }
        }
        out
    }

    /// Same complex with every multidegree multiplied by `shift`.
    pub fn twisted(&self, shift: &Monomial) -> FreeComplex {
        let mut out = self.clone();
        for m in &mut out.modules {
            if let Some(md) = &mut m.multidegrees {
                for x in md.iter_mut() {
                    *x = x.mul_with(shift);
                }
            }
        }
        out
    }

    /// Basis of every degree sorted by label, matrices permuted to match.
    pub fn canonicalized(&self) -> FreeComplex {
        let perms: Vec<Vec<usize>> = self
            .modules
            .iter()
            .map(|m| {
                let mut order: Vec<usize> = (0..m.rank()).collect();
                order.sort_by(|&a, &b| m.labels[a].cmp(&m.labels[b]));
                // new position of old index
                let mut pos = vec![0; m.rank()];
                for (new, &old) in order.iter().enumerate() {
                    pos[old] = new;
                }
                pos
            })
            .collect();
        let modules = self
            .modules
            .iter()
            .zip(&perms)
            .map(|(m, pos)| {
                let mut labels = m.labels.clone();
                let mut md = m.multidegrees.clone();
                for (old, &new) in pos.iter().enumerate() {
                    labels[new] = m.labels[old].clone();
                    if let (Some(md), Some(src)) = (&mut md, &m.multidegrees) {
                        md[new] = src[old].clone();
                    }
                }
                Module {
                    labels,
                    multidegrees: md,
                }
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| d.permuted(&perms[i], &perms[i + 1]))
            .collect();
        FreeComplex {
            nvars: self.nvars,
            modules,
            differentials,
        }
    }

    /// First `i` with `d_{i-1} ∘ d_i != 0`.
    pub fn dsq_failure(&self) -> Option<usize> {
        (2..=self.length()).find(|&i| {
            !self.differentials[i - 2]
                .compose(&self.differentials[i - 1])
                .is_zero()
        })
    }
}

/// A degree-preserving map of complexes `source -> target`.
///
/// `shift` is the internal multidegree of the map: an entry in row `r`,
/// column `c` of a homogeneous map has multidegree
/// `mdeg(c) * shift / mdeg(r)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexMap {
    source: FreeComplex,
    target: FreeComplex,
    matrices: Vec<SparseMatrix>,
    shift: Option<Monomial>,
}

impl ComplexMap {
    /// Builds the map and checks that it commutes with the differentials.
    pub fn new(
        source: FreeComplex,
        target: FreeComplex,
        matrices: Vec<SparseMatrix>,
        shift: Option<Monomial>,
    ) -> Result<Self> {
        let map = Self::new_unchecked(source, target, matrices, shift)?;
        if let Some(degree) = map.commutation_failure() {
            return Err(Error::NonCommuting { degree });
        }
        Ok(map)
    }

    /// Only shapes are checked.
    pub fn new_unchecked(
        source: FreeComplex,
        target: FreeComplex,
        matrices: Vec<SparseMatrix>,
        shift: Option<Monomial>,
    ) -> Result<Self> {
        if matrices.len() != source.length() + 1 {
            return Err(Error::InvariantViolation(
                "complex map needs one matrix per source degree".into(),
            ));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.ncols() != source.rank(i) || m.nrows() != target.rank(i) {
                return Err(Error::DimensionMismatch {
                    left: m.nrows() * 1000 + m.ncols(),
                    right: target.rank(i) * 1000 + source.rank(i),
                });
            }
        }
        Ok(ComplexMap {
            source,
            target,
            matrices,
            shift,
        })
    }

    pub fn identity(c: &FreeComplex) -> ComplexMap {
        let matrices = (0..=c.length())
            .map(|i| SparseMatrix::identity(c.rank(i), c.nvars()))
            .collect();
        ComplexMap {
            source: c.clone(),
            target: c.clone(),
            matrices,
            shift: Some(Monomial::one(c.nvars())),
        }
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> ComplexMap {
        let matrices = (0..=source.length())
            .map(|i| SparseMatrix::zero(target.rank(i), source.rank(i), source.nvars()))
            .collect();
        ComplexMap {
            source: source.clone(),
            target: target.clone(),
            matrices,
            shift: Some(Monomial::one(source.nvars())),
        }
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn shift(&self) -> Option<&Monomial> {
        self.shift.as_ref()
    }

    pub fn matrix(&self, i: usize) -> SparseMatrix {
        match self.matrices.get(i) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.target.rank(i), self.source.rank(i), self.source.nvars()),
        }
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.matrices
    }

    pub fn apply(&self, i: usize, x: &Chain) -> Chain {
        match self.matrices.get(i) {
            Some(m) => m.apply(x),
            None => Chain::new(),
        }
    }

    /// First `i >= 1` where `d^T_i ∘ f_i != f_{i-1} ∘ d^S_i`.
    pub fn commutation_failure(&self) -> Option<usize> {
        (1..=self.source.length()).find(|&i| {
            let lhs = self.target.differential(i).compose(&self.matrices[i]);
            let rhs = self.matrices[i - 1].compose(&self.source.differential(i));
            lhs != rhs
        })
    }

    /// Same map with the source labels rewritten.
    pub fn with_source_relabeled(&self, f: impl Fn(&BasisLabel) -> BasisLabel) -> ComplexMap {
        ComplexMap {
            source: self.source.relabeled(f),
            ..self.clone()
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ComplexMap) -> ComplexMap {
        let matrices = (0..=self.source.length())
            .map(|i| other.matrix(i).compose(&self.matrices[i]))
            .collect();
        let shift = match (&self.shift, &other.shift) {
            (Some(a), Some(b)) => Some(a.mul_with(b)),
            _ => None,
        };
        ComplexMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrices,
            shift,
        }
    }
}

/// Mapping cone of `psi: A -> B`: `C_i = B_i ⊕ A_{i-1}` with
/// `d(b, a) = (psi(a) + ∂b, -∂a)`. Labels are carried over unchanged
/// (`B` first), so the two label sets must be disjoint in each degree.
pub fn mapping_cone(psi: &ComplexMap) -> Result<FreeComplex> {
    if let Some(degree) = psi.commutation_failure() {
        return Err(Error::NonCommuting { degree });
    }
    let a = psi.source();
    let b = psi.target();
    let nvars = b.nvars();
    if a.nvars() != nvars {
        return Err(Error::DimensionMismatch {
            left: nvars,
            right: a.nvars(),
        });
    }
    let len = b.length().max(a.length() + 1);
    let multigraded = a.is_multigraded() && b.is_multigraded() && psi.shift().is_some();
    let mut modules = Vec::with_capacity(len + 1);
    for i in 0..=len {
        let mut labels: Vec<BasisLabel> = b.labels(i).to_vec();
        if i >= 1 {
            labels.extend(a.labels(i - 1).iter().cloned());
        }
        let mut seen = std::collections::HashSet::new();
        if !labels.iter().all(|l| seen.insert(l)) {
            return Err(Error::DuplicateLabel { degree: i });
        }
        let multidegrees = if multigraded {
            let shift = psi.shift().expect("checked");
            let mut md: Vec<Monomial> = b.multidegrees(i).expect("multigraded").to_vec();
            if i >= 1 {
                md.extend(
                    a.multidegrees(i - 1)
                        .expect("multigraded")
                        .iter()
                        .map(|x| x.mul_with(shift)),
                );
            }
            Some(md)
        } else {
            None
        };
        modules.push(Module {
            labels,
            multidegrees,
        });
    }
    let mut differentials = Vec::with_capacity(len);
    for i in 1..=len {
        let (b_prev, b_cur) = (b.rank(i - 1), b.rank(i));
        let rows = modules[i - 1].rank();
        let mut d = SparseMatrix::zero(rows, modules[i].rank(), nvars);
        if let Some(db) = b.differential_ref(i) {
            for (r, c, p) in db.entries() {
                d.add(r, c, p);
            }
        }
        let psi_i = psi.matrix(i - 1);
        for (r, c, p) in psi_i.entries() {
            d.add(r, b_cur + c, p);
        }
        if i >= 2 {
            if let Some(da) = a.differential_ref(i - 1) {
                for (r, c, p) in da.entries() {
                    d.add(b_prev + r, b_cur + c, &-p);
                }
            }
        }
        differentials.push(d);
    }
    FreeComplex::new(nvars, modules, differentials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn koszul_x(nvars: usize) -> FreeComplex {
        // 0 <- R <- R e1, d = x1
        let mut d = SparseMatrix::zero(1, 1, nvars);
        d.add(0, 0, &Polynomial::var(nvars, 0));
        FreeComplex::new(
            nvars,
            vec![
                Module {
                    labels: vec![BasisLabel::Unit],
                    multidegrees: Some(vec![Monomial::one(nvars)]),
                },
                Module {
                    labels: vec![BasisLabel::Wedge(vec![0])],
                    multidegrees: Some(vec![Monomial::var(nvars, 0)]),
                },
            ],
            vec![d],
        )
        .unwrap()
    }

    #[test]
    fn cone_of_zero_map_is_direct_sum() {
        let a = koszul_x(2).relabeled(|l| BasisLabel::Bar(Box::new(l.clone())));
        let b = koszul_x(2);
        let cone = mapping_cone(&ComplexMap::zero(&a, &b)).unwrap();
        assert_eq!(cone.ranks(), vec![1, 2, 1]);
        // d_2 has only the -∂_A block
        let d2 = cone.differential(2);
        assert_eq!(d2.entry(1, 0), -&Polynomial::var(2, 0));
        assert!(d2.get(0, 0).is_none());
        assert_eq!(cone.dsq_failure(), None);
    }

    #[test]
    fn cone_rejects_label_clash() {
        let a = FreeComplex::ring(1).relabeled(|_| BasisLabel::Wedge(vec![0]));
        let b = koszul_x(1);
        assert_eq!(
            mapping_cone(&ComplexMap::zero(&a, &b)),
            Err(Error::DuplicateLabel { degree: 1 })
        );
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let a = koszul_x(2);
        let b = a.relabeled(|l| BasisLabel::Bar(Box::new(l.clone())));
        let mats = vec![SparseMatrix::identity(1, 2); 2];
        let id = ComplexMap::new(a, b, mats, Some(Monomial::one(2))).unwrap();
        let cone = mapping_cone(&id).unwrap();
        let r = crate::resolution::verify_complex(&cone);
        assert!(r.dsq_zero && !r.minimal);
        assert_eq!(r.exact, Some(true));
    }

    #[test]
    fn non_commuting_map_is_rejected() {
        let a = koszul_x(2);
        let b = a.relabeled(|l| BasisLabel::Bar(Box::new(l.clone())));
        let mut m0 = SparseMatrix::identity(1, 2);
        m0.set(0, 0, Polynomial::var(2, 1));
        let m1 = SparseMatrix::identity(1, 2);
        assert_eq!(
            ComplexMap::new(a, b, vec![m0, m1], None),
            Err(Error::NonCommuting { degree: 1 })
        );
    }

    #[test]
    fn canonicalize_sorts_labels() {
        let mut d = SparseMatrix::zero(1, 2, 1);
        d.add(0, 0, &Polynomial::var(1, 0));
        d.add(0, 1, &Polynomial::one(1));
        let c = FreeComplex::new(
            1,
            vec![
                Module {
                    labels: vec![BasisLabel::Unit],
                    multidegrees: None,
                },
                Module {
                    labels: vec![BasisLabel::Wedge(vec![1]), BasisLabel::Wedge(vec![0])],
                    multidegrees: None,
                },
            ],
            vec![d],
        )
        .unwrap();
        let can = c.canonicalized();
        assert_eq!(can.labels(1)[0], BasisLabel::Wedge(vec![0]));
        assert_eq!(can.differential(1).entry(0, 0), Polynomial::one(1));
        assert_eq!(can.canonicalized(), can);
    }
}
