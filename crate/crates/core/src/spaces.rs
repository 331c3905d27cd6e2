//! Spanning sets and bases of the polynomial form spaces on a simplex.
//!
//! Two families are covered: the full spaces `P_r Lambda^k`, spanned by
//! `lambda^alpha dlambda_sigma` with `|alpha| = r`, and the trimmed spaces
//! `P^-_r Lambda^k`, spanned by `lambda^alpha phi_rho` with `|alpha| = r - 1`.
//! Each has a "ring" variant of forms whose traces vanish on every proper face.
//! All forms of a space are stored at polynomial degree `r`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::combinatorics::{enum_alternators, multiindices, sigma, sigma0, Alternator, Floor, MultiIndex};
use crate::error::{Error, Result};
use crate::forms::{NormalForm, TermKey};
use crate::linalg::ExactMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    P,
    Pminus,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "P",
            Family::Pminus => "Pminus",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" | "p" => Ok(Family::P),
            "Pminus" | "pminus" | "P-" => Ok(Family::Pminus),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpaceId {
    pub family: Family,
    pub ring: bool,
    pub r: usize,
    pub k: usize,
    pub n: usize,
}

impl SpaceId {
    pub fn new(family: Family, ring: bool, r: usize, k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::ShapeMismatch(format!("form degree {k} exceeds dimension {n}")));
        }
        Ok(SpaceId { family, ring, r, k, n })
    }

    pub fn full(family: Family, r: usize, k: usize, n: usize) -> Result<Self> {
        SpaceId::new(family, false, r, k, n)
    }

    pub fn trace_free(family: Family, r: usize, k: usize, n: usize) -> Result<Self> {
        SpaceId::new(family, true, r, k, n)
    }

    /// Same family and degrees on a simplex of another dimension.
    pub fn on(&self, n: usize) -> Result<Self> {
        SpaceId::new(self.family, self.ring, self.r, self.k, n)
    }

    pub fn with_ring(&self, ring: bool) -> Self {
        SpaceId { ring, ..*self }
    }

    /// Polynomial degree at which members are stored.
    pub fn degree(&self) -> usize {
        self.r
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = if self.ring { "ring" } else { "" };
        write!(f, "{ring}{} r={} k={} n={}", self.family, self.r, self.k, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpanningTerm {
    /// `lambda^alpha dlambda_sigma`
    PolyAlternator { alpha: MultiIndex, sigma: Alternator },
    /// `lambda^alpha phi_rho`
    PolyWhitney { alpha: MultiIndex, rho: Alternator },
}

impl SpanningTerm {
    pub fn realize(&self) -> Result<NormalForm> {
        match self {
            SpanningTerm::PolyAlternator { alpha, sigma } => NormalForm::make_term(alpha, sigma),
            SpanningTerm::PolyWhitney { alpha, rho } => {
                NormalForm::whitney(alpha.hi(), rho)?.times_monomial(alpha)
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            SpanningTerm::PolyAlternator { alpha, .. } => alpha.degree(),
            SpanningTerm::PolyWhitney { alpha, .. } => alpha.degree() + 1,
        }
    }

    pub fn alpha(&self) -> &MultiIndex {
        match self {
            SpanningTerm::PolyAlternator { alpha, .. } | SpanningTerm::PolyWhitney { alpha, .. } => alpha,
        }
    }

    /// The alternator index: `sigma` resp. `rho`.
    pub fn index(&self) -> &Alternator {
        match self {
            SpanningTerm::PolyAlternator { sigma, .. } => sigma,
            SpanningTerm::PolyWhitney { rho, .. } => rho,
        }
    }
}

impl fmt::Display for SpanningTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanningTerm::PolyAlternator { alpha, sigma } => write!(f, "l^{alpha} dl{sigma}"),
            SpanningTerm::PolyWhitney { alpha, rho } => write!(f, "l^{alpha} phi{rho}"),
        }
    }
}

pub fn realize(term: &SpanningTerm) -> Result<NormalForm> {
    term.realize()
}

fn covers(alpha: &MultiIndex, index: &Alternator, n: usize) -> bool {
    (0..=n).all(|i| alpha.exp(i) > 0 || index.contains(i))
}

fn poly_alternators(r: usize, k: usize, n: usize) -> Vec<SpanningTerm> {
    let mut out = Vec::new();
    for alpha in multiindices(r, n) {
        for sigma in sigma(k, n) {
            out.push(SpanningTerm::PolyAlternator {
                alpha: alpha.clone(),
                sigma,
            });
        }
    }
    out
}

fn poly_whitneys(r: usize, k: usize, n: usize) -> Vec<SpanningTerm> {
    if r == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for alpha in multiindices(r - 1, n) {
        for rho in sigma0(k, n) {
            out.push(SpanningTerm::PolyWhitney {
                alpha: alpha.clone(),
                rho,
            });
        }
    }
    out
}

/// `dlambda_sigma` with `0` not in `sigma`: a basis of the constant `k`-forms.
fn constant_forms(k: usize, n: usize) -> Vec<SpanningTerm> {
    enum_alternators(1, k, 1, n)
        .into_iter()
        .map(|sigma| SpanningTerm::PolyAlternator {
            alpha: MultiIndex::zeros(n),
            sigma,
        })
        .collect()
}

/// Constant forms with vanishing traces: only the volume form, and only at top degree.
fn trace_free_constants(k: usize, n: usize) -> Vec<SpanningTerm> {
    if k == n {
        constant_forms(k, n)
    } else {
        Vec::new()
    }
}

/// The canonical spanning set, in deterministic order.
///
/// The trace-free full family at `r = 0` is spanned by the volume form when
/// `k = n`, which the covering predicate cannot produce.
pub fn spanning_set(s: &SpaceId) -> Vec<SpanningTerm> {
    let SpaceId { family, ring, r, k, n } = *s;
    match (family, ring) {
        (Family::P, true) if r == 0 => trace_free_constants(k, n),
        (Family::P, false) => poly_alternators(r, k, n),
        (Family::P, true) => poly_alternators(r, k, n)
            .into_iter()
            .filter(|t| covers(t.alpha(), t.index(), n))
            .collect(),
        (Family::Pminus, false) => poly_whitneys(r, k, n),
        (Family::Pminus, true) => poly_whitneys(r, k, n)
            .into_iter()
            .filter(|t| covers(t.alpha(), t.index(), n))
            .collect(),
    }
}

/// Basis of the space, as a subset of the spanning set for `r >= 1`.
///
/// The full family at `r = 0` uses the constant forms `dlambda_sigma` with
/// `0` not in `sigma`; the spanning-set predicate would keep the one linear
/// relation among the `dlambda_i` there.
pub fn basis(s: &SpaceId) -> Vec<SpanningTerm> {
    let SpaceId { family, ring, r, k, n } = *s;
    match (family, ring) {
        (Family::P, false) if r == 0 => constant_forms(k, n),
        (Family::P, true) if r == 0 => trace_free_constants(k, n),
        (Family::P, false) => poly_alternators(r, k, n)
            .into_iter()
            .filter(|t| !t.alpha().floor().finite().is_some_and(|f| t.index().contains(f)))
            .collect(),
        (Family::P, true) => spanning_set(s)
            .into_iter()
            .filter(|t| !t.alpha().floor().finite().is_some_and(|f| t.index().contains(f)))
            .collect(),
        (Family::Pminus, false) => poly_whitneys(r, k, n)
            .into_iter()
            .filter(|t| t.alpha().floor() >= t.index().floor())
            .collect(),
        (Family::Pminus, true) => spanning_set(s)
            .into_iter()
            .filter(|t| t.index().floor() == Floor::At(0))
            .collect(),
    }
}

pub fn dimension(s: &SpaceId) -> usize {
    basis(s).len()
}

/// Rank of the spanning set, computed by elimination.
pub fn rank_dimension(s: &SpaceId) -> Result<usize> {
    Ok(coeff_matrix(&spanning_set(s), s.n, s.k, s.degree())?.rank())
}

/// Coordinate system for `k`-forms on the `n`-simplex of a fixed polynomial
/// degree: one row per stored `(alpha, sigma)` key.
#[derive(Debug, Clone)]
pub struct Layout {
    n: usize,
    k: usize,
    degree: usize,
    keys: Vec<TermKey>,
    index: HashMap<TermKey, usize>,
}

impl Layout {
    pub fn new(n: usize, k: usize, degree: usize) -> Self {
        let mut keys = Vec::new();
        for alpha in multiindices(degree, n) {
            for s in enum_alternators(1, k, 1, n) {
                keys.push((alpha.clone(), s));
            }
        }
        let index = keys.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect();
        Layout {
            n,
            k,
            degree,
            keys,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[TermKey] {
        &self.keys
    }

    pub fn coordinates(&self, form: &NormalForm) -> Result<Vec<Rational>> {
        if form.n() != self.n || form.k() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "form with (n={}, k={}) in layout (n={}, k={})",
                form.n(),
                form.k(),
                self.n,
                self.k
            )));
        }
        let lifted = form.homogenize(self.degree)?;
        let mut out = vec![Rational::zero(); self.keys.len()];
        for (key, c) in lifted.terms() {
            out[self.index[key]] = c.clone();
        }
        Ok(out)
    }

    pub fn form(&self, coordinates: &[Rational]) -> NormalForm {
        let mut out = NormalForm::zero(self.n, self.k, self.degree);
        for (key, c) in self.keys.iter().zip(coordinates) {
            if !c.is_zero() {
                let term = NormalForm::make_term(&key.0, &key.1).expect("layout key");
                out.add_scaled(&term, c).expect("same shape");
            }
        }
        out
    }
}

/// Column `j` holds the coordinates of `terms[j]` at the given degree.
pub fn coeff_matrix(terms: &[SpanningTerm], n: usize, k: usize, degree: usize) -> Result<ExactMatrix> {
    let layout = Layout::new(n, k, degree);
    forms_matrix(&layout, &terms.iter().map(SpanningTerm::realize).collect::<Result<Vec<_>>>()?)
}

/// Column `j` holds the coordinates of `forms[j]` in the layout.
pub fn forms_matrix(layout: &Layout, forms: &[NormalForm]) -> Result<ExactMatrix> {
    let columns = forms
        .iter()
        .map(|f| layout.coordinates(f))
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_columns(layout.len(), columns)
}

/// Coefficients of `form` with respect to `basis(s)`.
pub fn express(form: &NormalForm, s: &SpaceId) -> Result<Vec<Rational>> {
    if form.n() != s.n || form.k() != s.k {
        return Err(Error::ShapeMismatch(format!(
            "form with (n={}, k={}) in space {s}",
            form.n(),
            form.k()
        )));
    }
    let terms = basis(s);
    if terms.is_empty() {
        return if form.is_zero() { Ok(Vec::new()) } else { Err(Error::NotInSpace) };
    }
    let degree = form.r().max(s.degree());
    let layout = Layout::new(s.n, s.k, degree);
    let matrix = coeff_matrix(&terms, s.n, s.k, degree)?;
    matrix
        .solve(&layout.coordinates(form)?)?
        .ok_or(Error::NotInSpace)
}

/// `sum_i coefficients[i] * basis(s)[i]`.
pub fn combine(s: &SpaceId, coefficients: &[Rational]) -> Result<NormalForm> {
    let terms = basis(s);
    if terms.len() != coefficients.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} coefficients for a basis of size {}",
            coefficients.len(),
            terms.len()
        )));
    }
    let mut out = NormalForm::zero(s.n, s.k, s.degree());
    for (t, c) in terms.iter().zip(coefficients) {
        out.add_scaled(&t.realize()?, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn space(family: Family, ring: bool, r: usize, k: usize, n: usize) -> SpaceId {
        SpaceId::new(family, ring, r, k, n).unwrap()
    }

    #[test]
    fn spanning_set_examples() {
        let s = spanning_set(&space(Family::P, false, 1, 0, 1));
        let forms: Vec<_> = s.iter().map(|t| t.realize().unwrap()).collect();
        assert_eq!(forms, vec![NormalForm::lambda(1, 0), NormalForm::lambda(1, 1)]);
        let s = spanning_set(&space(Family::Pminus, false, 1, 1, 2));
        let shown: Vec<_> = s.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, ["l^(0,0,0) phi{0,1}", "l^(0,0,0) phi{0,2}", "l^(0,0,0) phi{1,2}"]);
        assert_eq!(spanning_set(&space(Family::P, false, 1, 1, 2)).len(), 9);
    }

    #[test]
    fn basis_examples() {
        let b = basis(&space(Family::P, false, 1, 1, 1));
        let shown: Vec<_> = b.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, ["l^(1,0) dl{1}", "l^(0,1) dl{0}"]);
        let s = space(Family::Pminus, false, 1, 1, 2);
        assert_eq!(basis(&s), spanning_set(&s));
        assert!(basis(&space(Family::Pminus, true, 1, 1, 2)).is_empty());
        assert!(basis(&space(Family::Pminus, false, 0, 1, 2)).is_empty());
    }

    #[test]
    fn constant_forms_at_degree_zero() {
        let b = basis(&space(Family::P, false, 0, 1, 2));
        assert_eq!(b.len(), 2);
        assert_eq!(coeff_matrix(&spanning_set(&space(Family::P, false, 0, 1, 2)), 2, 1, 0).unwrap().rank(), 2);
        assert_eq!(basis(&space(Family::P, true, 0, 2, 2)).len(), 1);
        assert!(basis(&space(Family::P, true, 0, 1, 2)).is_empty());
        assert_eq!(dimension(&space(Family::P, true, 0, 0, 0)), 1);
    }

    #[test]
    fn realize_examples() {
        let t = SpanningTerm::PolyAlternator {
            alpha: MultiIndex::from_exps(&[1, 0]),
            sigma: Alternator::sigma(&[1]).unwrap(),
        };
        assert_eq!(t.realize().unwrap(), NormalForm::lambda(1, 0).wedge(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap());
        let rho = Alternator::sigma0(&[0, 1]).unwrap();
        let t = SpanningTerm::PolyWhitney {
            alpha: MultiIndex::zeros(2),
            rho: rho.clone(),
        };
        assert_eq!(t.realize().unwrap(), NormalForm::whitney(2, &rho).unwrap());
        let t = SpanningTerm::PolyWhitney {
            alpha: MultiIndex::from_exps(&[1, 0, 0]),
            rho: rho.clone(),
        };
        assert_eq!(t.degree(), 2);
        assert_eq!(
            t.realize().unwrap(),
            NormalForm::lambda(2, 0).wedge(&NormalForm::whitney(2, &rho).unwrap()).unwrap()
        );
    }

    #[test]
    fn coeff_matrix_examples() {
        let b = basis(&space(Family::P, false, 1, 0, 1));
        assert_eq!(coeff_matrix(&b, 1, 0, 1).unwrap(), ExactMatrix::identity(2));
        let s = spanning_set(&space(Family::P, false, 1, 1, 2));
        assert_eq!(coeff_matrix(&s, 2, 1, 1).unwrap().rank(), 6);
        let s = spanning_set(&space(Family::Pminus, false, 1, 1, 2));
        assert_eq!(coeff_matrix(&s, 2, 1, 1).unwrap().rank(), 3);
        assert!(matches!(coeff_matrix(&s, 2, 1, 0), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&space(Family::P, false, 1, 1, 2)), 6);
        assert_eq!(dimension(&space(Family::Pminus, false, 1, 1, 2)), 3);
        assert_eq!(dimension(&space(Family::Pminus, true, 1, 1, 2)), 0);
        assert_eq!(rank_dimension(&space(Family::Pminus, true, 1, 1, 2)).unwrap(), 0);
    }

    #[test]
    fn express_examples() {
        let d1 = NormalForm::dlambda(1, &[1]).unwrap();
        assert_eq!(express(&d1, &space(Family::P, false, 0, 1, 1)).unwrap(), vec![int(1)]);
        let phi = NormalForm::whitney(1, &Alternator::sigma0(&[0, 1]).unwrap()).unwrap();
        assert_eq!(express(&phi, &space(Family::Pminus, false, 1, 1, 1)).unwrap(), vec![int(1)]);
        let square = NormalForm::lambda_product(1, &[0, 0]).wedge(&d1).unwrap();
        assert_eq!(express(&square, &space(Family::P, false, 1, 1, 1)), Err(Error::NotInSpace));
        let f = combine(&space(Family::P, false, 2, 1, 2), &(1..=12).map(int).collect::<Vec<_>>()).unwrap();
        assert_eq!(
            express(&f, &space(Family::P, false, 2, 1, 2)).unwrap(),
            (1..=12).map(int).collect::<Vec<_>>()
        );
    }

    #[test]
    fn bases_are_independent_and_span() {
        for n in 0..=3 {
            for r in 0..=3 {
                for k in 0..=n {
                    for family in [Family::P, Family::Pminus] {
                        for ring in [false, true] {
                            let s = space(family, ring, r, k, n);
                            let b = basis(&s);
                            let rank_b = coeff_matrix(&b, n, k, r).unwrap().rank();
                            assert_eq!(rank_dimension(&s).unwrap(), b.len(), "{s}");
                            assert_eq!(rank_b, b.len(), "{s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("Pminus".parse::<Family>().unwrap(), Family::Pminus);
        assert_eq!("P".parse::<Family>().unwrap(), Family::P);
        assert!("Q".parse::<Family>().is_err());
        assert!(SpaceId::new(Family::P, false, 1, 3, 2).is_err());
    }
}
