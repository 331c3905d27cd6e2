//! Text format for forms: whitespace separated terms `+3/2 l^(1,0,1) dl{1,2}`.
//! The zero form prints as `0`.

use std::fmt;

use num_traits::Signed;

use super::NormalForm;
use crate::combinatorics::{Alternator, MultiIndex};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((alpha, sigma), c)) in self.terms().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{} l^{alpha} dl{sigma}", c.abs())?;
        }
        Ok(())
    }
}

fn parse_list(body: &str) -> Result<Vec<usize>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {s:?}")))
        })
        .collect()
}

fn strip<'a>(token: &'a str, prefix: &str, suffix: &str) -> Result<&'a str> {
    token
        .strip_prefix(prefix)
        .and_then(|t| t.strip_suffix(suffix))
        .ok_or_else(|| Error::Parse(format!("expected {prefix}...{suffix}, got {token:?}")))
}

/// Parses the output of `Display` back into a form on the `n`-simplex of
/// form degree `k`. Terms may use `dl{0,..}`; they are canonicalized.
pub fn parse_form(text: &str, n: usize, k: usize) -> Result<NormalForm> {
    let text = text.trim();
    if text == "0" {
        return Ok(NormalForm::zero(n, k, 0));
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() || !tokens.len().is_multiple_of(3) {
        return Err(Error::Parse(format!("expected coefficient, l^(..), dl{{..}} triples in {text:?}")));
    }
    let mut out: Option<NormalForm> = None;
    for chunk in tokens.chunks(3) {
        let coef: Rational = rational::parse(chunk[0].strip_prefix('+').unwrap_or(chunk[0]))?;
        let exps: Vec<u32> = parse_list(strip(chunk[1], "l^(", ")")?)?
            .into_iter()
            .map(|e| e as u32)
            .collect();
        if exps.len() != n + 1 {
            return Err(Error::ShapeMismatch(format!("multiindex {} has {} slots, expected {}", chunk[1], exps.len(), n + 1)));
        }
        let sigma = Alternator::sigma(&parse_list(strip(chunk[2], "dl{", "}")?)?)?;
        if sigma.len() != k {
            return Err(Error::ShapeMismatch(format!("{} is not a {k}-alternator", chunk[2])));
        }
        let alpha = MultiIndex::from_exps(&exps);
        let term = NormalForm::make_term(&alpha, &sigma)?;
        match &mut out {
            None => out = Some(term.scale(&coef)),
            Some(acc) => {
                if acc.r() != term.r() {
                    return Err(Error::Malformed("terms of mixed polynomial degree".into()));
                }
                acc.add_scaled(&term, &coef)?;
            }
        }
    }
    Ok(out.expect("at least one term"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn renders_and_parses() {
        let f = NormalForm::make_term(&MultiIndex::from_exps(&[1, 0, 1]), &Alternator::sigma(&[1, 2]).unwrap())
            .unwrap()
            .scale(&frac(3, 2));
        assert_eq!(f.to_string(), "+3/2 l^(1,0,1) dl{1,2}");
        assert_eq!(parse_form(&f.to_string(), 2, 2).unwrap(), f);
        assert_eq!(NormalForm::zero(2, 1, 0).to_string(), "0");
        assert!(parse_form("0", 2, 1).unwrap().is_zero());
    }

    #[test]
    fn parse_canonicalizes_dlambda_zero() {
        let f = parse_form("+1 l^(0,0) dl{0}", 1, 1).unwrap();
        assert_eq!(f.to_string(), "-1 l^(0,0) dl{1}");
    }

    #[test]
    fn parse_rejects_bad_shapes() {
        assert!(parse_form("+1 l^(0,0) dl{1}", 2, 1).is_err());
        assert!(parse_form("+1 l^(0,0,0) dl{1}", 2, 2).is_err());
        assert!(parse_form("+1 l^(1,0) dl{1} +1 l^(0,0) dl{1}", 1, 1).is_err());
        assert!(parse_form("+1 l^(1,0)", 1, 1).is_err());
    }
}
