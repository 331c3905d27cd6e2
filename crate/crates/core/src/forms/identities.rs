//! Exhaustive checks of the algebraic identities between barycentric
//! alternators and Whitney forms.

use super::NormalForm;
use crate::combinatorics::{enum_alternators, eps_before, multiindices, sigma, Alternator};
use crate::rational::int;
use crate::report::Report;

/// Every subset of `[0:n]` with `size` elements, as alternators starting at 0.
fn subsets(size: usize, n: usize) -> Vec<Alternator> {
    if size == 0 {
        return vec![Alternator::empty(0)];
    }
    enum_alternators(0, size - 1, 0, n)
}

fn whitney_recursion(n: usize, report: &mut Report) {
    // eps(q, rho) phi_{rho + q} = lambda_q dlambda_rho - dlambda_q ^ phi_rho
    for size in 1..=n {
        for rho in subsets(size, n) {
            for q in (0..=n).filter(|q| !rho.contains(*q)) {
                let lhs = (|| {
                    let sign = eps_before(q, &rho)?;
                    Ok(NormalForm::whitney(n, &rho.plus(q)?)?.scale(&sign.to_rational()))
                })();
                let rhs = (|| {
                    let first = NormalForm::lambda(n, q).wedge(&NormalForm::dlambda(n, rho.image())?)?;
                    let second = NormalForm::dlambda(n, &[q])?.wedge(&NormalForm::whitney(n, &rho)?)?;
                    first.sub(&second)
                })();
                report.record_eq("whitney recursion", format!("n={n} rho={rho} q={q}"), lhs, rhs);
            }
        }
    }
}

fn differential_decomposition(n: usize, report: &mut Report) {
    // dlambda_rho = sum_{q not in rho} eps(q, rho) phi_{rho + q}
    for size in 0..=n + 1 {
        for rho in subsets(size, n) {
            let lhs = NormalForm::dlambda(n, rho.image());
            let rhs = (|| {
                let mut acc = NormalForm::zero(n, size, 1);
                for q in (0..=n).filter(|q| !rho.contains(*q)) {
                    let sign = eps_before(q, &rho)?;
                    acc.add_scaled(&NormalForm::whitney(n, &rho.plus(q)?)?, &sign.to_rational())?;
                }
                Ok(acc)
            })();
            report.record_eq("differential decomposition", format!("n={n} rho={rho}"), lhs, rhs);
        }
    }
}

fn whitney_cancellation(n: usize, report: &mut Report) {
    // sum_{p in rho} eps(p, rho - p) lambda_p phi_{rho - p} = 0
    for size in 2..=n + 1 {
        for rho in subsets(size, n) {
            let k = size - 2;
            let lhs = (|| {
                let mut acc = NormalForm::zero(n, k, 2);
                for &p in rho.image() {
                    let rest = rho.minus(p)?;
                    let sign = eps_before(p, &rest)?;
                    let term = NormalForm::lambda(n, p).wedge(&NormalForm::whitney(n, &rest)?)?;
                    acc.add_scaled(&term, &sign.to_rational())?;
                }
                Ok(acc)
            })();
            report.record_eq(
                "whitney cancellation",
                format!("n={n} rho={rho}"),
                lhs,
                Ok(NormalForm::zero(n, k, 0)),
            );
        }
    }
}

fn whitney_derivative(n: usize, report: &mut Report) {
    // d phi_rho = (k + 1) dlambda_rho
    for size in 1..=n + 1 {
        for rho in subsets(size, n) {
            let lhs = NormalForm::whitney(n, &rho).map(|phi| phi.exterior_derivative());
            let rhs = NormalForm::dlambda(n, rho.image()).map(|d| d.scale(&int(size as i64)));
            report.record_eq("whitney derivative", format!("n={n} rho={rho}"), lhs, rhs);
        }
    }
}

fn alternator_splitting(n: usize, report: &mut Report) {
    // dlambda_sigma = eps(p, sigma - p) dlambda_p ^ dlambda_{sigma - p}
    for size in 1..=n + 1 {
        for sig in subsets(size, n) {
            for &p in sig.image() {
                let lhs = NormalForm::dlambda(n, sig.image());
                let rhs = (|| {
                    let rest = sig.minus(p)?;
                    let sign = eps_before(p, &rest)?;
                    let wedge = NormalForm::dlambda(n, &[p])?.wedge(&NormalForm::dlambda(n, rest.image())?)?;
                    Ok(wedge.scale(&sign.to_rational()))
                })();
                report.record_eq("alternator splitting", format!("n={n} sigma={sig} p={p}"), lhs, rhs);
            }
        }
    }
}

fn derivative_squares_to_zero(n: usize, r_max: usize, report: &mut Report) {
    for r in 0..=r_max {
        for alpha in multiindices(r, n) {
            for k in 0..=n {
                for sig in sigma(k, n).into_iter().filter(|s| !s.contains(0)) {
                    let dd = NormalForm::make_term(&alpha, &sig)
                        .map(|f| f.exterior_derivative().exterior_derivative());
                    report.record_eq(
                        "d squared",
                        format!("n={n} alpha={alpha} sigma={sig}"),
                        dd.map(|f| f.is_zero()),
                        Ok(true),
                    );
                }
            }
        }
    }
}

/// Runs every identity family on the `n`-simplex; the `d squared` family
/// sweeps coefficient degrees up to `r_max`.
pub fn verify_identities(n: usize, r_max: usize) -> Report {
    let mut report = Report::new();
    whitney_recursion(n, &mut report);
    differential_decomposition(n, &mut report);
    whitney_cancellation(n, &mut report);
    whitney_derivative(n, &mut report);
    alternator_splitting(n, &mut report);
    derivative_squares_to_zero(n, r_max, &mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Alternator;

    #[test]
    fn interval_recursion_example() {
        // eps(1, {0}) phi_{01} = lambda_1 dlambda_0 - dlambda_1 ^ lambda_0
        let rho = Alternator::sigma0(&[0]).unwrap();
        let lhs = NormalForm::whitney(1, &Alternator::sigma0(&[0, 1]).unwrap())
            .unwrap()
            .scale(&eps_before(1, &rho).unwrap().to_rational());
        let rhs = NormalForm::lambda(1, 1)
            .wedge(&NormalForm::dlambda(1, &[0]).unwrap())
            .unwrap()
            .sub(&NormalForm::dlambda(1, &[1]).unwrap().wedge(&NormalForm::lambda(1, 0)).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, NormalForm::dlambda(1, &[1]).unwrap().neg());
    }

    #[test]
    fn all_families_hold_up_to_dimension_three() {
        for n in 0..=3 {
            let report = verify_identities(n, 2);
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{failures:?}");
        }
        let report = verify_identities(2, 1);
        assert_eq!(report.coverage().len(), 6);
    }
}
