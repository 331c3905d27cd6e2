//! Barycentric differential forms over an `n`-simplex.
//!
//! A [`NormalForm`] stores a form as a sum of `c * lambda^alpha dlambda_sigma`
//! with every `alpha` of the same total degree `r` and every `sigma` avoiding
//! the index 0. The barycentric monomials of a fixed degree are linearly
//! independent and `dlambda_1, ..., dlambda_n` form a basis of the constant
//! one-forms, so this representation is unique: two forms are equal exactly
//! when their terms agree after homogenizing to a common degree.
//!
//! `dlambda_0` never appears in storage; [`NormalForm::make_term`] replaces it
//! by `-(dlambda_1 + ... + dlambda_n)`.

mod identities;
mod render;

pub use identities::verify_identities;
pub use render::parse_form;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinatorics::{enum_alternators, eps_before, merge_sign, Alternator, MultiIndex, Sign};
use crate::error::{Error, Result};
use crate::rational::{one, Rational};

pub type TermKey = (MultiIndex, Alternator);

#[derive(Debug, Clone)]
pub struct NormalForm {
    n: usize,
    k: usize,
    r: usize,
    terms: BTreeMap<TermKey, Rational>,
}

/// Point given by barycentric weights `(x_0, ..., x_n)` summing to one.
/// Negative weights are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricPoint {
    weights: Vec<Rational>,
}

impl BarycentricPoint {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::ShapeMismatch("point needs at least one weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotBarycentric);
        }
        Ok(BarycentricPoint { weights })
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut weights = vec![Rational::zero(); n + 1];
        weights[i] = one();
        BarycentricPoint { weights }
    }

    pub fn barycenter(n: usize) -> Self {
        let w = Rational::new(1.into(), ((n + 1) as i64).into());
        BarycentricPoint {
            weights: vec![w; n + 1],
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn monomial(&self, alpha: &MultiIndex) -> Rational {
        let mut value = one();
        for (i, &e) in alpha.exps().iter().enumerate() {
            for _ in 0..e {
                value *= &self.weights[alpha.lo() + i];
            }
        }
        value
    }
}

/// Rewrites `dlambda_image` over `dlambda_1..dlambda_n` (image strictly
/// ascending, entries in `[0:n]`).
fn expand_alternator(image: &[usize], n: usize) -> Vec<(Sign, Alternator)> {
    if image.first() != Some(&0) {
        return vec![(Sign::Plus, Alternator::new(1, image.to_vec()).expect("ascending"))];
    }
    let rest = Alternator::new(1, image[1..].to_vec()).expect("ascending");
    // dlambda_0 ^ rest = -sum_{j >= 1, j not in rest} eps(j, rest) dlambda_{rest + j}
    (1..=n)
        .filter(|j| !rest.contains(*j))
        .map(|j| {
            let sign = -eps_before(j, &rest).expect("disjoint");
            (sign, rest.plus(j).expect("disjoint"))
        })
        .collect()
}

impl NormalForm {
    pub fn zero(n: usize, k: usize, r: usize) -> Self {
        NormalForm {
            n,
            k,
            r,
            terms: BTreeMap::new(),
        }
    }

    /// Constant 0-form.
    pub fn constant(n: usize, value: Rational) -> Self {
        let mut out = NormalForm::zero(n, 0, 0);
        out.accumulate((MultiIndex::zeros(n), Alternator::empty(1)), value);
        out
    }

    /// The 0-form `lambda^alpha`.
    pub fn monomial(alpha: &MultiIndex) -> Self {
        NormalForm::make_term(alpha, &Alternator::empty(1)).expect("valid monomial")
    }

    /// The barycentric coordinate `lambda_i`.
    pub fn lambda(n: usize, i: usize) -> Self {
        NormalForm::monomial(&MultiIndex::indicator(n, &[i]))
    }

    /// The product `lambda_{i_1} ... lambda_{i_j}` over a set of indices.
    pub fn lambda_product(n: usize, indices: &[usize]) -> Self {
        NormalForm::monomial(&MultiIndex::indicator(n, indices))
    }

    /// `dlambda_sigma` for an ascending image in `[0:n]`.
    pub fn dlambda(n: usize, image: &[usize]) -> Result<Self> {
        NormalForm::make_term(&MultiIndex::zeros(n), &Alternator::new(1, image.to_vec())?)
    }

    /// Canonical form of `lambda^alpha dlambda_sigma`; the ambient dimension is
    /// read off the multiindex, which must be indexed over `[0:n]`.
    pub fn make_term(alpha: &MultiIndex, sigma: &Alternator) -> Result<Self> {
        if alpha.lo() != 0 {
            return Err(Error::Malformed("multiindex must be indexed from 0".into()));
        }
        let n = alpha.hi();
        if let Some(&bad) = sigma.image().iter().find(|&&i| i > n) {
            return Err(Error::OutOfRange { index: bad, n });
        }
        let mut out = NormalForm::zero(n, sigma.len(), alpha.degree());
        for (sign, alt) in expand_alternator(sigma.image(), n) {
            out.accumulate((alpha.clone(), alt), sign.to_rational());
        }
        Ok(out)
    }

    /// Whitney form `phi_rho = sum_p eps(p, rho - p) lambda_p dlambda_{rho - p}`.
    pub fn whitney(n: usize, rho: &Alternator) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::Malformed("Whitney form of the empty alternator".into()));
        }
        if let Some(&bad) = rho.image().iter().find(|&&i| i > n) {
            return Err(Error::OutOfRange { index: bad, n });
        }
        let mut out = NormalForm::zero(n, rho.len() - 1, 1);
        for &p in rho.image() {
            let rest = rho.minus(p)?;
            let sign = eps_before(p, &rest)?;
            let term = NormalForm::make_term(&MultiIndex::indicator(n, &[p]), &rest)?;
            out.add_scaled(&term, &sign.to_rational())?;
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Polynomial degree of the coefficients.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &MultiIndex, sigma: &Alternator) -> Rational {
        self.terms
            .get(&(alpha.clone(), sigma.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn accumulate(&mut self, key: TermKey, value: Rational) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += value;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Multiplies the coefficients by `(lambda_0 + ... + lambda_n)^(target - r)`.
    pub fn homogenize(&self, target: usize) -> Result<Self> {
        if target < self.r {
            return Err(Error::DegreeTooLow {
                requested: target,
                actual: self.r,
            });
        }
        let mut current = self.clone();
        while current.r < target {
            let mut next = NormalForm::zero(self.n, self.k, current.r + 1);
            for ((alpha, sigma), c) in &current.terms {
                for i in 0..=self.n {
                    next.accumulate((alpha.plus(i)?, sigma.clone()), c.clone());
                }
            }
            current = next;
        }
        Ok(current)
    }

    fn check_shape(&self, other: &NormalForm) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::ShapeMismatch(format!(
                "(n={}, k={}) vs (n={}, k={})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    /// `self += factor * other`, homogenizing to the larger degree.
    pub fn add_scaled(&mut self, other: &NormalForm, factor: &Rational) -> Result<()> {
        self.check_shape(other)?;
        if factor.is_zero() || other.is_zero() {
            if other.r > self.r {
                *self = self.homogenize(other.r)?;
            }
            return Ok(());
        }
        if other.r > self.r {
            *self = self.homogenize(other.r)?;
        }
        let lifted;
        let source = if other.r < self.r {
            lifted = other.homogenize(self.r)?;
            &lifted
        } else {
            other
        };
        for (key, c) in &source.terms {
            self.accumulate(key.clone(), c * factor);
        }
        Ok(())
    }

    pub fn add(&self, other: &NormalForm) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &NormalForm) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &-one())?;
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return NormalForm::zero(self.n, self.k, self.r);
        }
        NormalForm {
            n: self.n,
            k: self.k,
            r: self.r,
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c * factor)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-one())
    }

    /// Exterior product; polynomial degrees add.
    pub fn wedge(&self, other: &NormalForm) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "wedge of forms on n={} and n={}",
                self.n, other.n
            )));
        }
        let mut out = NormalForm::zero(self.n, self.k + other.k, self.r + other.r);
        for ((a, s), c) in &self.terms {
            for ((b, t), d) in &other.terms {
                if !s.is_disjoint(t) {
                    continue;
                }
                let (sign, merged) = merge_sign(s, t)?;
                let value = c * d * sign.to_rational();
                out.accumulate((a.sum(b)?, merged), value);
            }
        }
        Ok(out)
    }

    /// `d(lambda^alpha dlambda_sigma) = sum_i alpha(i) lambda^(alpha - i) dlambda_i ^ dlambda_sigma`.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = NormalForm::zero(self.n, self.k + 1, self.r.saturating_sub(1));
        for ((alpha, sigma), c) in &self.terms {
            for i in alpha.bracket() {
                let lowered = alpha.minus(i).expect("in bracket");
                let weight = c * Rational::from_integer(alpha.exp(i).into());
                if i == 0 {
                    // dlambda_0 = -sum_{j >= 1} dlambda_j
                    for j in (1..=self.n).filter(|j| !sigma.contains(*j)) {
                        let sign = -eps_before(j, sigma).expect("disjoint");
                        out.accumulate(
                            (lowered.clone(), sigma.plus(j).expect("disjoint")),
                            &weight * sign.to_rational(),
                        );
                    }
                } else if !sigma.contains(i) {
                    let sign = eps_before(i, sigma).expect("disjoint");
                    out.accumulate(
                        (lowered.clone(), sigma.plus(i).expect("disjoint")),
                        &weight * sign.to_rational(),
                    );
                }
            }
        }
        out
    }

    /// Coefficient of each `dlambda_sigma` (`0` not in `sigma`) at a point,
    /// zero coefficients included.
    pub fn evaluate(&self, x: &BarycentricPoint) -> Result<BTreeMap<Alternator, Rational>> {
        if x.dim() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "point with {} weights for a form on n={}",
                x.weights().len(),
                self.n
            )));
        }
        let mut out: BTreeMap<Alternator, Rational> = enum_alternators(1, self.k, 1, self.n)
            .into_iter()
            .map(|s| (s, Rational::zero()))
            .collect();
        for ((alpha, sigma), c) in &self.terms {
            *out.entry(sigma.clone()).or_insert_with(Rational::zero) += c * x.monomial(alpha);
        }
        Ok(out)
    }

    /// Multiplies by the monomial `lambda^beta`.
    pub fn times_monomial(&self, beta: &MultiIndex) -> Result<Self> {
        let mut out = NormalForm::zero(self.n, self.k, self.r + beta.degree());
        for ((alpha, sigma), c) in &self.terms {
            out.accumulate((alpha.sum(beta)?, sigma.clone()), c.clone());
        }
        Ok(out)
    }
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.k != other.k {
            return false;
        }
        if self.r == other.r {
            return self.terms == other.terms;
        }
        let target = self.r.max(other.r);
        match (self.homogenize(target), other.homogenize(target)) {
            (Ok(a), Ok(b)) => a.terms == b.terms,
            _ => false,
        }
    }
}

impl Eq for NormalForm {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::multiindices;
    use crate::rational::{frac, int};

    fn key(exps: &[u32], image: &[usize]) -> TermKey {
        (MultiIndex::from_exps(exps), Alternator::sigma(image).unwrap())
    }

    fn single(exps: &[u32], image: &[usize], c: Rational) -> BTreeMap<TermKey, Rational> {
        BTreeMap::from([(key(exps, image), c)])
    }

    #[test]
    fn make_term_examples() {
        let a = NormalForm::dlambda(1, &[1]).unwrap();
        assert_eq!(a.terms(), &single(&[0, 0], &[1], int(1)));
        let b = NormalForm::dlambda(1, &[0]).unwrap();
        assert_eq!(b.terms(), &single(&[0, 0], &[1], int(-1)));
        let c = NormalForm::dlambda(2, &[0, 2]).unwrap();
        assert_eq!(c.terms(), &single(&[0, 0, 0], &[1, 2], int(-1)));
        assert!(NormalForm::dlambda(1, &[2]).is_err());
        assert!(NormalForm::dlambda(2, &[2, 1]).is_err());
    }

    #[test]
    fn make_term_is_injective_on_storage_keys() {
        for n in 1..=3 {
            for k in 0..=n {
                let keys: Vec<_> = multiindices(2, n)
                    .into_iter()
                    .flat_map(|a| {
                        crate::combinatorics::enum_alternators(1, k, 1, n)
                            .into_iter()
                            .map(move |s| (a.clone(), s))
                    })
                    .collect();
                for (i, (a, s)) in keys.iter().enumerate() {
                    let f = NormalForm::make_term(a, s).unwrap();
                    assert_eq!(f.terms().len(), 1);
                    for (b, t) in keys.iter().skip(i + 1) {
                        assert_ne!(f, NormalForm::make_term(b, t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn homogenize_examples() {
        let one1 = NormalForm::constant(1, int(1));
        let h = one1.homogenize(1).unwrap();
        assert_eq!(h, NormalForm::lambda(1, 0).add(&NormalForm::lambda(1, 1)).unwrap());
        assert_eq!(h.r(), 1);
        let l0 = NormalForm::lambda(1, 0);
        assert_eq!(l0.homogenize(1).unwrap().terms(), l0.terms());
        let h2 = l0.homogenize(2).unwrap();
        let mut expected = single(&[2, 0], &[], int(1));
        expected.insert(key(&[1, 1], &[]), int(1));
        assert_eq!(h2.terms(), &expected);
        assert_eq!(
            l0.homogenize(2).unwrap().homogenize(1),
            Err(Error::DegreeTooLow { requested: 1, actual: 2 })
        );
    }

    #[test]
    fn add_and_scale() {
        let d1 = NormalForm::dlambda(1, &[1]).unwrap();
        assert_eq!(d1.add(&NormalForm::zero(1, 1, 0)).unwrap(), d1);
        let lhs = NormalForm::lambda(1, 0)
            .wedge(&d1)
            .unwrap()
            .add(&NormalForm::lambda(1, 1).wedge(&d1).unwrap())
            .unwrap();
        assert_eq!(lhs, d1.homogenize(1).unwrap());
        assert_eq!(lhs, d1);
        assert_eq!(d1.scale(&int(2)).scale(&frac(1, 2)), d1);
        assert!(d1.add(&NormalForm::lambda(1, 0)).is_err());
        assert!(d1.add(&NormalForm::dlambda(2, &[1]).unwrap()).is_err());
    }

    #[test]
    fn wedge_examples() {
        let d1 = NormalForm::dlambda(2, &[1]).unwrap();
        let d2 = NormalForm::dlambda(2, &[2]).unwrap();
        assert_eq!(d1.wedge(&d2).unwrap().terms(), &single(&[0, 0, 0], &[1, 2], int(1)));
        assert!(d1.wedge(&d1).unwrap().is_zero());
        assert_eq!(d2.wedge(&d1).unwrap(), d1.wedge(&d2).unwrap().neg());
        assert!(d1.wedge(&NormalForm::lambda(1, 0)).is_err());
    }

    #[test]
    fn exterior_derivative_examples() {
        let l1 = NormalForm::lambda(1, 1);
        assert_eq!(l1.exterior_derivative(), NormalForm::dlambda(1, &[1]).unwrap());
        assert!(NormalForm::dlambda(1, &[1]).unwrap().exterior_derivative().is_zero());
        // d(lambda_0 lambda_1) = lambda_1 dlambda_0 + lambda_0 dlambda_1 = (lambda_0 - lambda_1) dlambda_1
        let p = NormalForm::lambda_product(1, &[0, 1]);
        let mut expected = single(&[1, 0], &[1], int(1));
        expected.insert(key(&[0, 1], &[1]), int(-1));
        assert_eq!(p.exterior_derivative().terms(), &expected);
        assert_eq!(NormalForm::constant(2, int(5)).exterior_derivative(), NormalForm::zero(2, 1, 0));
    }

    #[test]
    fn whitney_examples() {
        let rho0 = Alternator::sigma0(&[0]).unwrap();
        assert_eq!(NormalForm::whitney(1, &rho0).unwrap(), NormalForm::lambda(1, 0));
        let phi01 = NormalForm::whitney(1, &Alternator::sigma0(&[0, 1]).unwrap()).unwrap();
        assert_eq!(phi01.r(), 1);
        assert_eq!(phi01, NormalForm::dlambda(1, &[1]).unwrap());
        let phi012 = NormalForm::whitney(2, &Alternator::sigma0(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(phi012, NormalForm::dlambda(2, &[1, 2]).unwrap());
        assert!(NormalForm::whitney(2, &Alternator::empty(0)).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = NormalForm::lambda(1, 0).wedge(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap();
        let s1 = Alternator::sigma(&[1]).unwrap();
        let v = f.evaluate(&BarycentricPoint::vertex(1, 0)).unwrap();
        assert_eq!(v, BTreeMap::from([(s1.clone(), int(1))]));
        let v = f.evaluate(&BarycentricPoint::vertex(1, 1)).unwrap();
        assert_eq!(v, BTreeMap::from([(s1.clone(), int(0))]));
        let g = NormalForm::lambda_product(1, &[0, 1])
            .wedge(&NormalForm::dlambda(1, &[1]).unwrap())
            .unwrap();
        let v = g.evaluate(&BarycentricPoint::barycenter(1)).unwrap();
        assert_eq!(v, BTreeMap::from([(s1, frac(1, 4))]));
        assert_eq!(
            BarycentricPoint::new(vec![int(1), int(1)]),
            Err(Error::NotBarycentric)
        );
        let bad = BarycentricPoint::new(vec![frac(1, 3), frac(1, 3), frac(1, 3)]).unwrap();
        assert!(g.evaluate(&bad).is_err());
    }

    #[test]
    fn zero_forms_compare_equal_across_degrees() {
        assert_eq!(NormalForm::zero(2, 1, 0), NormalForm::zero(2, 1, 3));
        assert_ne!(NormalForm::zero(2, 1, 0), NormalForm::zero(2, 2, 0));
    }
}
