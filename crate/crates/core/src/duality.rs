//! Exact integration, the two wedge pairings between complementary spaces
//! and the coefficient-level isomorphisms behind them.
//!
//! Coefficient vectors are indexed by `A(r,n) x Sigma(k,n)`. Each family has a
//! representation map (the canonical spanning set written with those
//! coefficients) and an isomorphism onto a trace-free space of complementary
//! form degree:
//!
//! | family   | representation                              | isomorphism                                  |
//! |----------|---------------------------------------------|----------------------------------------------|
//! | `First`  | `w lambda^a dlambda_s` in `P_r L^k`          | `eps(s,s^c) w lambda^a lambda_s phi_{s^c}`   |
//! | `Second` | `eps(s,s^c) w lambda^a phi_{s^c}` in `P^-_{r+1} L^{n-k}` | `w lambda^a lambda_{s^c} dlambda_s` |

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::combinatorics::{
    complement, eps_after, eps_before, merge_sign, multiindices, sigma, sigma0, Alternator, MultiIndex, Sign,
};
use crate::error::{Error, Result};
use crate::forms::{BarycentricPoint, NormalForm};
use crate::linalg::ExactMatrix;
use crate::rational::{factorial, frac, sample, Rational};
use crate::report::Report;
use crate::spaces::{basis, express, realize, Family, SpaceId};

/// Selects one of the two pairings, together with its coefficient maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    First,
    Second,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::First => "first",
            Pairing::Second => "second",
        })
    }
}

impl std::str::FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Pairing::First),
            "second" => Ok(Pairing::Second),
            other => Err(Error::Parse(format!("unknown pairing {other:?}"))),
        }
    }
}

/// The two equivalent ways of stating the linear dependency conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionForm {
    Recursive,
    Theta,
}

/// `int_T lambda^alpha dlambda_1 ^ ... ^ dlambda_n = alpha! / (|alpha| + n)!`
pub fn integrate(form: &NormalForm) -> Result<Rational> {
    let n = form.n();
    if form.k() != n {
        return Err(Error::NotTopDegree { k: form.k(), n });
    }
    let mut total = Rational::zero();
    for ((alpha, _), c) in form.terms() {
        let numer: num_bigint::BigInt = alpha.exps().iter().map(|&e| factorial(e as usize)).product();
        let denom = factorial(alpha.degree() + n);
        total += c * Rational::new(numer, denom);
    }
    Ok(total)
}

/// Element of the coefficient space over `A(r,n) x Sigma(k,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    r: usize,
    k: usize,
    n: usize,
    entries: BTreeMap<(MultiIndex, Alternator), Rational>,
}

/// The index set `A(r,n) x Sigma(k,n)` in enumeration order.
pub fn index_set(r: usize, k: usize, n: usize) -> Vec<(MultiIndex, Alternator)> {
    let sigmas = sigma(k, n);
    multiindices(r, n)
        .into_iter()
        .flat_map(|a| sigmas.iter().map(move |s| (a.clone(), s.clone())))
        .collect()
}

impl CoefficientVector {
    pub fn zero(r: usize, k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::ShapeMismatch(format!("form degree {k} exceeds n={n}")));
        }
        Ok(CoefficientVector {
            r,
            k,
            n,
            entries: BTreeMap::new(),
        })
    }

    /// Values listed in `index_set` order.
    pub fn from_values(r: usize, k: usize, n: usize, values: &[Rational]) -> Result<Self> {
        let keys = index_set(r, k, n);
        if keys.len() != values.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} coefficients",
                values.len(),
                keys.len()
            )));
        }
        let mut v = CoefficientVector::zero(r, k, n)?;
        for (key, value) in keys.into_iter().zip(values) {
            v.set(&key.0, &key.1, value.clone())?;
        }
        Ok(v)
    }

    pub fn unit(r: usize, k: usize, n: usize, alpha: &MultiIndex, sigma: &Alternator) -> Result<Self> {
        let mut v = CoefficientVector::zero(r, k, n)?;
        v.set(alpha, sigma, Rational::from_integer(1.into()))?;
        Ok(v)
    }

    pub fn random(r: usize, k: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        let values: Vec<Rational> = (0..index_set(r, k, n).len()).map(|_| sample(rng)).collect();
        CoefficientVector::from_values(r, k, n, &values)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, alpha: &MultiIndex, sigma: &Alternator, value: Rational) -> Result<()> {
        if alpha.lo() != 0 || alpha.hi() != self.n || alpha.degree() != self.r {
            return Err(Error::ShapeMismatch(format!("multiindex {alpha} outside A({},{})", self.r, self.n)));
        }
        if sigma.len() != self.k || sigma.image().iter().any(|&i| i > self.n) {
            return Err(Error::ShapeMismatch(format!("alternator {sigma} outside Sigma({},{})", self.k, self.n)));
        }
        let key = (alpha.clone(), Alternator::sigma(sigma.image())?);
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// Coefficient at `(alpha, sigma)`; the domain start of `sigma` is ignored.
    pub fn get(&self, alpha: &MultiIndex, sigma: &Alternator) -> Rational {
        Alternator::sigma(sigma.image())
            .ok()
            .and_then(|s| self.entries.get(&(alpha.clone(), s)).cloned())
            .unwrap_or_else(Rational::zero)
    }

    pub fn values(&self) -> Vec<Rational> {
        index_set(self.r, self.k, self.n)
            .iter()
            .map(|(a, s)| self.get(a, s))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&MultiIndex, &Alternator, &Rational)> {
        self.entries.iter().map(|((a, s), c)| (a, s, c))
    }
}

fn complement_sign(sig: &Alternator, n: usize) -> Result<(Sign, Alternator)> {
    let comp = complement(sig, n)?;
    let (sign, _) = merge_sign(sig, &comp)?;
    Ok((sign, comp))
}

/// `sum w lambda^alpha dlambda_sigma`, in `P_r L^k`.
pub fn rep_first(v: &CoefficientVector) -> Result<NormalForm> {
    let mut out = NormalForm::zero(v.n, v.k, v.r);
    for (alpha, sig, c) in v.nonzero() {
        out.add_scaled(&NormalForm::make_term(alpha, sig)?, c)?;
    }
    Ok(out)
}

/// `sum eps(sigma, sigma^c) w lambda^alpha lambda_sigma phi_{sigma^c}`, in the
/// trace-free `P^-_{r+k+1} L^{n-k}`.
pub fn iso_first(v: &CoefficientVector) -> Result<NormalForm> {
    let mut out = NormalForm::zero(v.n, v.n - v.k, v.r + v.k + 1);
    for (alpha, sig, c) in v.nonzero() {
        let (sign, comp) = complement_sign(sig, v.n)?;
        let weight = alpha.sum(&MultiIndex::indicator(v.n, sig.image()))?;
        let term = NormalForm::whitney(v.n, &comp)?.times_monomial(&weight)?;
        out.add_scaled(&term, &(c * sign.to_rational()))?;
    }
    Ok(out)
}

/// `sum eps(sigma, sigma^c) w lambda^alpha phi_{sigma^c}`, in `P^-_{r+1} L^{n-k}`.
pub fn rep_second(v: &CoefficientVector) -> Result<NormalForm> {
    let mut out = NormalForm::zero(v.n, v.n - v.k, v.r + 1);
    for (alpha, sig, c) in v.nonzero() {
        let (sign, comp) = complement_sign(sig, v.n)?;
        let term = NormalForm::whitney(v.n, &comp)?.times_monomial(alpha)?;
        out.add_scaled(&term, &(c * sign.to_rational()))?;
    }
    Ok(out)
}

/// `sum w lambda^alpha lambda_{sigma^c} dlambda_sigma`, in the trace-free
/// `P_{r+n-k+1} L^k`.
pub fn iso_second(v: &CoefficientVector) -> Result<NormalForm> {
    let mut out = NormalForm::zero(v.n, v.k, v.r + v.n - v.k + 1);
    for (alpha, sig, c) in v.nonzero() {
        let comp = complement(sig, v.n)?;
        let weight = alpha.sum(&MultiIndex::indicator(v.n, comp.image()))?;
        out.add_scaled(&NormalForm::make_term(&weight, sig)?, c)?;
    }
    Ok(out)
}

/// Representation map of the chosen family.
pub fn representation(which: Pairing, v: &CoefficientVector) -> Result<NormalForm> {
    match which {
        Pairing::First => rep_first(v),
        Pairing::Second => rep_second(v),
    }
}

/// Isomorphism of the chosen family.
pub fn isomorphism(which: Pairing, v: &CoefficientVector) -> Result<NormalForm> {
    match which {
        Pairing::First => iso_first(v),
        Pairing::Second => iso_second(v),
    }
}

/// Whether the representation map sends `v` to zero.
pub fn in_kernel(which: Pairing, v: &CoefficientVector) -> Result<bool> {
    Ok(representation(which, v)?.is_zero())
}

/// Matrix of the representation (or isomorphism) map on unit vectors, in
/// normal-form coordinates of the target.
pub fn coefficient_map_matrix(which: Pairing, image: bool, r: usize, k: usize, n: usize) -> Result<ExactMatrix> {
    let forms = index_set(r, k, n)
        .iter()
        .map(|(a, s)| {
            let v = CoefficientVector::unit(r, k, n, a, s)?;
            if image {
                isomorphism(which, &v)
            } else {
                representation(which, &v)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (k_out, degree) = match (which, image) {
        (Pairing::First, false) => (k, r),
        (Pairing::First, true) => (n - k, r + k + 1),
        (Pairing::Second, false) => (n - k, r + 1),
        (Pairing::Second, true) => (k, r + n - k + 1),
    };
    let layout = crate::spaces::Layout::new(n, k_out, degree);
    crate::spaces::forms_matrix(&layout, &forms)
}

fn first_residuals(form: ConditionForm, v: &CoefficientVector) -> Result<Vec<Rational>> {
    let (r, k, n) = (v.r, v.k, v.n);
    let mut out = Vec::new();
    match form {
        ConditionForm::Recursive => {
            for alpha in multiindices(r, n) {
                for sig in sigma(k, n).into_iter().filter(|s| !s.contains(0)) {
                    let mut value = v.get(&alpha, &sig);
                    for &p in sig.image() {
                        let rest = sig.minus(p)?;
                        let sign = eps_before(p, &rest)?;
                        value -= sign.to_rational() * v.get(&alpha, &rest.plus(0)?);
                    }
                    out.push(value);
                }
            }
        }
        ConditionForm::Theta => {
            for alpha in multiindices(r, n) {
                for theta in sigma(k + 1, n) {
                    let mut value = Rational::zero();
                    for &p in theta.image() {
                        let rest = theta.minus(p)?;
                        value += eps_before(p, &rest)?.to_rational() * v.get(&alpha, &rest);
                    }
                    out.push(value);
                }
            }
        }
    }
    Ok(out)
}

fn second_residuals(form: ConditionForm, v: &CoefficientVector) -> Result<Vec<Rational>> {
    let (r, k, n) = (v.r, v.k, v.n);
    let mut out = Vec::new();
    match form {
        ConditionForm::Recursive => {
            for alpha in multiindices(r, n) {
                for sig in sigma(k, n) {
                    let comp = complement(&sig, n)?;
                    let lowest = comp.floor().finite().expect("complement is nonempty");
                    if alpha.floor() < lowest {
                        continue;
                    }
                    let mut value = v.get(&alpha, &sig);
                    for &q in sig.image().iter().filter(|&&q| alpha.exp(q) > 0) {
                        let rest = sig.minus(q)?;
                        let sign = eps_before(lowest, &rest)? * eps_before(q, &rest)?;
                        let shifted = alpha.plus(lowest)?.minus(q)?;
                        value -= sign.to_rational() * v.get(&shifted, &rest.plus(lowest)?);
                    }
                    out.push(value);
                }
            }
        }
        ConditionForm::Theta => {
            for beta in multiindices(r + 1, n) {
                for theta in sigma(k + 1, n) {
                    let mut value = Rational::zero();
                    for &p in theta.image().iter().filter(|&&p| beta.exp(p) > 0) {
                        let rest = theta.minus(p)?;
                        value += eps_after(&rest, p)?.to_rational() * v.get(&beta.minus(p)?, &rest);
                    }
                    out.push(value);
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates the linear conditions characterizing the kernel of the
/// representation map.
pub fn dependency_condition(which: Pairing, form: ConditionForm, v: &CoefficientVector) -> Result<bool> {
    let residuals = match which {
        Pairing::First => first_residuals(form, v)?,
        Pairing::Second => second_residuals(form, v)?,
    };
    Ok(residuals.iter().all(Zero::is_zero))
}

/// The pairing of `v` with itself, as an `n`-form before integration.
fn pairing_integrand(which: Pairing, v: &CoefficientVector) -> Result<NormalForm> {
    match which {
        Pairing::First => rep_first(v)?.wedge(&iso_first(v)?),
        Pairing::Second => iso_second(v)?.wedge(&rep_second(v)?),
    }
}

/// `(-1)^k sum_theta lambda_weight(theta) |S_theta|^2 phi_T`, where
/// `S_theta = sum_alpha sum_{p in theta} eps(p, theta - p) lambda^alpha w_{alpha, theta - p}`,
/// with an extra `lambda_p` inside the sum for the second family.
fn square_sum_integrand(which: Pairing, v: &CoefficientVector) -> Result<NormalForm> {
    let (r, k, n) = (v.r, v.k, v.n);
    let top = NormalForm::whitney(n, &sigma0(n, n)[0])?;
    let inner_degree = match which {
        Pairing::First => r,
        Pairing::Second => r + 1,
    };
    let mut out = NormalForm::zero(n, n, 2 * inner_degree + 1);
    for theta in sigma(k + 1, n) {
        let mut inner = NormalForm::zero(n, 0, inner_degree);
        for alpha in multiindices(r, n) {
            for &p in theta.image() {
                let rest = theta.minus(p)?;
                let c = v.get(&alpha, &rest);
                if c.is_zero() {
                    continue;
                }
                let monomial = match which {
                    Pairing::First => alpha.clone(),
                    Pairing::Second => alpha.plus(p)?,
                };
                let sign = eps_before(p, &rest)?;
                inner.add_scaled(&NormalForm::monomial(&monomial), &(c * sign.to_rational()))?;
            }
        }
        if inner.is_zero() {
            continue;
        }
        let weight_indices = match which {
            Pairing::First => theta.image().to_vec(),
            Pairing::Second => complement(&theta, n)?.image().to_vec(),
        };
        let weight = MultiIndex::indicator(n, &weight_indices);
        let term = inner.wedge(&inner)?.times_monomial(&weight)?.wedge(&top)?;
        out.add_scaled(&term, &Sign::power(k).to_rational())?;
    }
    Ok(out)
}

/// Both sides of the sum-of-squares identity for the pairing of `v` with
/// itself: `(pairing, sum of squares)`.
pub fn quadratic_form(which: Pairing, v: &CoefficientVector) -> Result<(Rational, Rational)> {
    Ok((
        integrate(&pairing_integrand(which, v)?)?,
        integrate(&square_sum_integrand(which, v)?)?,
    ))
}

fn top_value(form: &NormalForm, x: &BarycentricPoint) -> Result<Rational> {
    Ok(form.evaluate(x)?.into_values().next().unwrap_or_else(Rational::zero))
}

/// Both integrands of `quadratic_form`, evaluated as `n`-forms at `x`.
pub fn quadratic_form_pointwise(
    which: Pairing,
    v: &CoefficientVector,
    x: &BarycentricPoint,
) -> Result<(Rational, Rational)> {
    Ok((
        top_value(&pairing_integrand(which, v)?, x)?,
        top_value(&square_sum_integrand(which, v)?, x)?,
    ))
}

/// Whether `(-1)^k value` is nonnegative.
pub fn has_expected_sign(k: usize, value: &Rational) -> bool {
    !(Sign::power(k).to_rational() * value).is_negative()
}

/// `(left, right)` spaces of the pairing with parameters `(r, k, n)`.
pub fn pairing_spaces(which: Pairing, r: usize, k: usize, n: usize) -> Result<(SpaceId, SpaceId)> {
    if k > n {
        return Err(Error::ShapeMismatch(format!("form degree {k} exceeds n={n}")));
    }
    Ok(match which {
        Pairing::First => (
            SpaceId::full(Family::P, r, k, n)?,
            SpaceId::trace_free(Family::Pminus, r + k + 1, n - k, n)?,
        ),
        Pairing::Second => (
            SpaceId::trace_free(Family::P, r + n - k + 1, k, n)?,
            SpaceId::full(Family::Pminus, r + 1, n - k, n)?,
        ),
    })
}

/// `int_T omega ^ eta` with no membership checks.
pub fn pair_unchecked(omega: &NormalForm, eta: &NormalForm) -> Result<Rational> {
    if omega.n() != eta.n() || omega.k() + eta.k() != omega.n() {
        return Err(Error::ShapeMismatch(format!(
            "cannot pair a {}-form with a {}-form on n={}",
            omega.k(),
            eta.k(),
            omega.n()
        )));
    }
    integrate(&omega.wedge(eta)?)
}

/// `int_T omega ^ eta` after checking that both arguments lie in the spaces
/// of the chosen pairing with parameter `r`.
pub fn pairing(which: Pairing, r: usize, omega: &NormalForm, eta: &NormalForm) -> Result<Rational> {
    let (n, k) = (omega.n(), omega.k());
    if eta.n() != n || k + eta.k() != n {
        return pair_unchecked(omega, eta);
    }
    let (left, right) = pairing_spaces(which, r, k, n)?;
    express(omega, &left)?;
    express(eta, &right)?;
    pair_unchecked(omega, eta)
}

pub fn pairing_first(r: usize, omega: &NormalForm, eta: &NormalForm) -> Result<Rational> {
    pairing(Pairing::First, r, omega, eta)
}

pub fn pairing_second(r: usize, omega: &NormalForm, eta: &NormalForm) -> Result<Rational> {
    pairing(Pairing::Second, r, omega, eta)
}

/// Matrix of the pairing over the bases of its two spaces; rows follow the
/// left basis.
pub fn gram_matrix(which: Pairing, r: usize, k: usize, n: usize) -> Result<ExactMatrix> {
    let (left, right) = pairing_spaces(which, r, k, n)?;
    let rows = basis(&left).iter().map(realize).collect::<Result<Vec<_>>>()?;
    let cols = basis(&right).iter().map(realize).collect::<Result<Vec<_>>>()?;
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let entries = rows
        .iter()
        .map(|a| cols.iter().map(|b| pair_unchecked(a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_rows(cols.len(), entries)
}

/// Runs the coefficient-level checks for every form degree on the
/// `n`-simplex with coefficient degree `r`: both dependency conditions
/// against kernel membership, and both sides of the quadratic identities,
/// on a kernel basis plus `samples` random vectors.
pub fn verify_coefficient_identities(n: usize, r: usize, samples: usize, rng: &mut impl Rng) -> Report {
    let mut report = Report::new();
    for k in 0..=n {
        for which in [Pairing::First, Pairing::Second] {
            let label = format!("{which} n={n} r={r} k={k}");
            let vectors = coefficient_map_matrix(which, false, r, k, n).and_then(|rep| {
                let mut out = rep
                    .nullspace()
                    .iter()
                    .map(|x| CoefficientVector::from_values(r, k, n, x))
                    .collect::<Result<Vec<_>>>()?;
                for _ in 0..samples {
                    out.push(CoefficientVector::random(r, k, n, rng)?);
                }
                Ok(out)
            });
            let vectors = match vectors {
                Ok(v) => v,
                Err(e) => {
                    report.record("dependency conditions", format!("{label} ({e})"), false);
                    continue;
                }
            };
            // weights (2i + 1) / (n + 1)^2 sum to one
            let side = (n + 1) as i64;
            let point = BarycentricPoint::new((0..=n).map(|i| frac(2 * i as i64 + 1, side * side)).collect());
            for (i, v) in vectors.iter().enumerate() {
                let instance = format!("{label} vector {i}");
                let kernel = in_kernel(which, v);
                for form in [ConditionForm::Recursive, ConditionForm::Theta] {
                    report.record_eq(
                        "dependency conditions",
                        format!("{instance} {form:?}"),
                        dependency_condition(which, form, v),
                        kernel.clone(),
                    );
                }
                match quadratic_form(which, v) {
                    Ok((lhs, rhs)) => {
                        report.record("quadratic identity", instance.clone(), lhs == rhs);
                        report.record("semidefiniteness", instance.clone(), has_expected_sign(k, &lhs));
                        report.record_eq(
                            "quadratic kernel",
                            instance.clone(),
                            Ok(lhs.is_zero()),
                            kernel.clone(),
                        );
                    }
                    Err(e) => report.record("quadratic identity", format!("{instance} ({e})"), false),
                }
                let pointwise = point
                    .clone()
                    .and_then(|x| quadratic_form_pointwise(which, v, &x))
                    .map(|(a, b)| a == b);
                report.record_eq("pointwise quadratic identity", instance, pointwise, Ok(true));
            }
        }
    }
    report
}

fn lambda_of(n: usize, set: &Alternator) -> NormalForm {
    NormalForm::lambda_product(n, set.image())
}

/// Exhaustive check of the wedge products `dlambda_sigma ^ phi_{rho^c}` and
/// `dlambda_sigma ^ lambda_rho phi_{rho^c}` for `sigma, rho` in `Sigma(k, n)`.
pub fn verify_wedge_phi_identities(n: usize) -> Report {
    let mut report = Report::new();
    for k in 0..=n {
        for sig in sigma(k, n) {
            for rho in sigma(k, n) {
                check_pair(n, k, &sig, &rho, &mut report);
            }
        }
    }
    report
}

fn check_pair(n: usize, k: usize, sig: &Alternator, rho: &Alternator, report: &mut Report) {
    let instance = format!("n={n} sigma={sig} rho={rho}");
    let top = || NormalForm::whitney(n, &sigma0(n, n)[0]);
    let parts: Result<_> = (|| {
        let (rho_sign, rho_comp) = complement_sign(rho, n)?;
        let (sig_sign, sig_comp) = complement_sign(sig, n)?;
        let d_sig = NormalForm::dlambda(n, sig.image())?;
        let d_rho = NormalForm::dlambda(n, rho.image())?;
        let phi_rho = NormalForm::whitney(n, &rho_comp)?;
        let phi_sig = NormalForm::whitney(n, &sig_comp)?;
        let plain = d_sig.wedge(&phi_rho)?;
        let weighted = d_sig.wedge(&lambda_of(n, rho).wedge(&phi_rho)?.scale(&rho_sign.to_rational()))?;
        let swapped = d_rho.wedge(&lambda_of(n, sig).wedge(&phi_sig)?.scale(&sig_sign.to_rational()))?;
        Ok((rho_sign, sig_sign, sig_comp, plain, weighted, swapped))
    })();
    let (rho_sign, sig_sign, sig_comp, plain, weighted, swapped) = match parts {
        Ok(parts) => parts,
        Err(e) => {
            report.record("wedge phi", format!("{instance} ({e})"), false);
            return;
        }
    };
    report.record_eq("wedge phi symmetry", instance.clone(), Ok(weighted.clone()), Ok(swapped));

    let shared: Vec<usize> = sig.image().iter().copied().filter(|&i| !rho.contains(i)).collect();
    let sign_k = Sign::power(k);
    match shared.len() {
        0 => {
            // sigma = rho
            let lambda_sum: Result<NormalForm> = (|| {
                let mut acc = NormalForm::zero(n, 0, 1);
                for &q in sig_comp.image() {
                    acc.add_scaled(&NormalForm::lambda(n, q), &Rational::from_integer(1.into()))?;
                }
                Ok(acc)
            })();
            let expected = lambda_sum
                .clone()
                .and_then(|s| s.wedge(&top()?))
                .map(|f| f.scale(&(sign_k * sig_sign).to_rational()));
            report.record_eq("wedge phi disjoint case", instance.clone(), Ok(plain), expected);
            let expected = lambda_sum
                .and_then(|s| lambda_of(n, sig).wedge(&s)?.wedge(&top()?))
                .map(|f| f.scale(&sign_k.to_rational()));
            report.record_eq("wedge phi reflexive case", instance, Ok(weighted), expected);
        }
        1 => {
            let p = shared[0];
            let q = rho.image().iter().copied().find(|&i| !sig.contains(i)).expect("same size");
            let expected: Result<(NormalForm, Sign)> = (|| {
                let rest = sig.minus(p)?;
                let sign = -(eps_before(p, &rest)? * eps_before(q, &rest)?) * sign_k;
                let base = NormalForm::lambda(n, p).wedge(&top()?)?;
                Ok((base, sign))
            })();
            report.record_eq(
                "wedge phi single overlap",
                instance.clone(),
                Ok(plain),
                expected
                    .clone()
                    .map(|(base, sign)| base.scale(&(sign * rho_sign).to_rational())),
            );
            report.record_eq(
                "wedge phi exchange case",
                instance,
                Ok(weighted),
                expected.and_then(|(base, sign)| Ok(lambda_of(n, rho).wedge(&base)?.scale(&sign.to_rational()))),
            );
        }
        _ => {
            report.record_eq("wedge phi vanishing case", instance, Ok(plain.is_zero()), Ok(true));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_nonzero_vector;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alt(image: &[usize]) -> Alternator {
        Alternator::sigma(image).unwrap()
    }

    #[test]
    fn integrates_small_forms() {
        assert_eq!(integrate(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap(), int(1));
        let f = NormalForm::lambda_product(1, &[0, 1]).wedge(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap();
        assert_eq!(integrate(&f).unwrap(), frac(1, 6));
        let phi = NormalForm::whitney(2, &Alternator::sigma0(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(integrate(&phi).unwrap(), frac(1, 2));
        assert_eq!(
            integrate(&NormalForm::lambda(2, 0)).unwrap_err(),
            Error::NotTopDegree { k: 0, n: 2 }
        );
    }

    #[test]
    fn integral_is_positive_on_positive_monomials() {
        for n in 0..=3 {
            for r in 0..=3 {
                for alpha in multiindices(r, n) {
                    let f = NormalForm::make_term(&alpha, &Alternator::sigma(&(1..=n).collect::<Vec<_>>()).unwrap()).unwrap();
                    assert!(integrate(&f).unwrap().is_positive());
                }
            }
        }
    }

    #[test]
    fn small_pairings() {
        let phi = NormalForm::whitney(1, &Alternator::sigma0(&[0, 1]).unwrap()).unwrap();
        let one = NormalForm::constant(1, int(1));
        assert_eq!(pairing_first(0, &one, &phi).unwrap(), int(1));
        assert_eq!(pairing_first(0, &one, &NormalForm::zero(1, 1, 1)).unwrap(), int(0));
        let bump = NormalForm::lambda_product(1, &[0, 1]);
        let eta = NormalForm::lambda(1, 0).wedge(&phi).unwrap();
        let base = pairing_second(0, &bump, &phi.scale(&int(1))).unwrap();
        assert_eq!(base, frac(1, 6));
        assert_eq!(
            pairing_second(0, &bump.scale(&frac(3, 7)), &phi).unwrap(),
            frac(3, 7) * &base
        );
        assert_eq!(pairing_second(0, &NormalForm::zero(1, 0, 2), &phi).unwrap(), int(0));
        // lambda_0 phi_{01} is not in P^-_1
        assert_eq!(pairing_second(0, &bump, &eta).unwrap_err(), Error::NotInSpace);
        assert!(matches!(pairing_first(0, &one, &one), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn small_gram_matrices() {
        let g = gram_matrix(Pairing::First, 0, 0, 1).unwrap();
        assert_eq!((g.rows(), g.cols()), (1, 1));
        assert_eq!(g.get(0, 0), &int(1));
        let g = gram_matrix(Pairing::First, 0, 0, 2).unwrap();
        assert_eq!(g.determinant().unwrap(), frac(1, 2));
        let g = gram_matrix(Pairing::Second, 0, 1, 1).unwrap();
        assert_eq!(g.rows(), g.cols());
        assert!(!g.determinant().unwrap().is_zero());
    }

    #[test]
    fn gram_matrices_are_nonsingular() {
        for n in 0..=2 {
            for r in 0..=2 {
                for k in 0..=n {
                    for which in [Pairing::First, Pairing::Second] {
                        let g = gram_matrix(which, r, k, n).unwrap();
                        assert!(!g.determinant().unwrap().is_zero(), "{which} r={r} k={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let v = CoefficientVector::unit(0, 1, 1, &MultiIndex::zeros(1), &alt(&[1])).unwrap();
        // eps({1},{0}) lambda_1 phi_{0} = -lambda_0 lambda_1
        assert_eq!(iso_first(&v).unwrap(), NormalForm::lambda_product(1, &[0, 1]).neg());
        let zero = CoefficientVector::zero(1, 1, 2).unwrap();
        assert!(iso_first(&zero).unwrap().is_zero());
        assert!(iso_second(&zero).unwrap().is_zero());
        // lambda_{sigma^c} dlambda_sigma = lambda_0 dlambda_1
        let expected = NormalForm::lambda(1, 0).wedge(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap();
        assert_eq!(iso_second(&v).unwrap(), expected);
    }

    #[test]
    fn isomorphisms_preserve_kernels_and_hit_the_trace_free_space() {
        for n in 0..=2 {
            for r in 0..=2 {
                for k in 0..=n {
                    for which in [Pairing::First, Pairing::Second] {
                        let rep = coefficient_map_matrix(which, false, r, k, n).unwrap();
                        let iso = coefficient_map_matrix(which, true, r, k, n).unwrap();
                        for x in rep.nullspace() {
                            assert!(!is_nonzero_vector(&iso.mul_vec(&x).unwrap()));
                        }
                        assert_eq!(rep.rank(), iso.rank(), "{which} r={r} k={k} n={n}");
                        let (left, right) = pairing_spaces(which, r, k, n).unwrap();
                        let target = if which == Pairing::First { right } else { left };
                        assert_eq!(iso.rank(), crate::spaces::dimension(&target));
                    }
                }
            }
        }
    }

    #[test]
    fn conditions_match_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=2 {
            for r in 0..=2 {
                for k in 0..=n {
                    for which in [Pairing::First, Pairing::Second] {
                        let rep = coefficient_map_matrix(which, false, r, k, n).unwrap();
                        let mut samples: Vec<CoefficientVector> = rep
                            .nullspace()
                            .iter()
                            .map(|x| CoefficientVector::from_values(r, k, n, x).unwrap())
                            .collect();
                        samples.extend((0..5).map(|_| CoefficientVector::random(r, k, n, &mut rng).unwrap()));
                        for v in samples {
                            let kernel = in_kernel(which, &v).unwrap();
                            let recursive = dependency_condition(which, ConditionForm::Recursive, &v).unwrap();
                            let theta = dependency_condition(which, ConditionForm::Theta, &v).unwrap();
                            assert_eq!((recursive, theta), (kernel, kernel), "{which} r={r} k={k} n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_relation_satisfies_first_conditions() {
        for n in 1..=3 {
            let ones = vec![int(1); n + 1];
            let v = CoefficientVector::from_values(0, 1, n, &ones).unwrap();
            assert!(in_kernel(Pairing::First, &v).unwrap());
            assert!(dependency_condition(Pairing::First, ConditionForm::Recursive, &v).unwrap());
            assert!(dependency_condition(Pairing::First, ConditionForm::Theta, &v).unwrap());
            assert_eq!(quadratic_form(Pairing::First, &v).unwrap(), (int(0), int(0)));
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let c = frac(-5, 3);
        let v = CoefficientVector::from_values(0, 0, 1, std::slice::from_ref(&c)).unwrap();
        assert_eq!(quadratic_form(Pairing::First, &v).unwrap(), (&c * &c, &c * &c));
        let zero = CoefficientVector::zero(1, 1, 2).unwrap();
        for which in [Pairing::First, Pairing::Second] {
            assert_eq!(quadratic_form(which, &zero).unwrap(), (int(0), int(0)));
        }
        let v = CoefficientVector::from_values(0, 1, 1, &[int(2), int(5)]).unwrap();
        let (lhs, rhs) = quadratic_form(Pairing::First, &v).unwrap();
        assert_eq!(lhs, frac(-9, 6));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quadratic_forms_match_sums_of_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=2 {
            for r in 0..=2 {
                for k in 0..=n {
                    for which in [Pairing::First, Pairing::Second] {
                        for _ in 0..3 {
                            let v = CoefficientVector::random(r, k, n, &mut rng).unwrap();
                            let (lhs, rhs) = quadratic_form(which, &v).unwrap();
                            assert_eq!(lhs, rhs, "{which} r={r} k={k} n={n}");
                            assert!(has_expected_sign(k, &lhs));
                            assert_eq!(lhs.is_zero(), in_kernel(which, &v).unwrap());
                            for x in [BarycentricPoint::vertex(n, 0), BarycentricPoint::barycenter(n)] {
                                let (a, b) = quadratic_form_pointwise(which, &v, &x).unwrap();
                                assert_eq!(a, b, "{which} r={r} k={k} n={n} pointwise");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_suite_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let report = verify_coefficient_identities(2, 1, 2, &mut rng);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.coverage().len(), 5);
    }

    #[test]
    fn wedge_phi_identities_hold() {
        for n in 0..=3 {
            let report = verify_wedge_phi_identities(n);
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{failures:?}");
        }
        assert_eq!(verify_wedge_phi_identities(3).coverage().len(), 6);
    }
}
