//! Multiindices, alternator indices and the permutation signs relating them.
//!
//! A multiindex over `[lo:hi]` assigns a nonnegative exponent to each slot; an
//! alternator is a strictly ascending map `[a:b] -> [lo:hi]`, stored by its
//! image together with its first domain index `a`. All enumerations are
//! deterministic (see the individual functions for the order).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Least element of a support set, with `Infinity` for the empty set.
///
/// `Infinity` compares greater than every finite index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Floor {
    At(usize),
    Infinity,
}

impl Floor {
    pub fn finite(self) -> Option<usize> {
        match self {
            Floor::At(i) => Some(i),
            Floor::Infinity => None,
        }
    }
}

impl PartialEq<usize> for Floor {
    fn eq(&self, other: &usize) -> bool {
        *self == Floor::At(*other)
    }
}

impl PartialOrd<usize> for Floor {
    fn partial_cmp(&self, other: &usize) -> Option<Ordering> {
        Some(self.cmp(&Floor::At(*other)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^exponent`
    pub fn power(exponent: usize) -> Sign {
        Sign::from_parity(exponent % 2 == 1)
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_rational(self) -> Rational {
        int(self.to_i64())
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Sign of the permutation sorting `seq` ascending, by counting the swaps of
/// an insertion sort. Entries must be pairwise distinct.
pub fn permutation_parity(seq: &[usize]) -> Sign {
    let mut work = seq.to_vec();
    let mut swaps = 0usize;
    for i in 1..work.len() {
        let mut j = i;
        while j > 0 && work[j - 1] > work[j] {
            work.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    debug_assert!(work.windows(2).all(|w| w[0] < w[1]), "repeated entries");
    Sign::power(swaps)
}

/// Exponent vector `alpha: [lo:hi] -> N_0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    lo: usize,
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn new(lo: usize, exps: Vec<u32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::Malformed("multiindex needs at least one slot".into()));
        }
        Ok(MultiIndex { lo, exps })
    }

    /// All-zero multiindex over `[0:n]`.
    pub fn zeros(n: usize) -> Self {
        MultiIndex {
            lo: 0,
            exps: vec![0; n + 1],
        }
    }

    /// Exponent vector over `[0:n]` given slot by slot.
    pub fn from_exps(exps: &[u32]) -> Self {
        MultiIndex {
            lo: 0,
            exps: exps.to_vec(),
        }
    }

    /// Indicator multiindex of a set of indices in `[0:n]`, i.e. the exponent
    /// vector of `lambda_{sigma}`.
    pub fn indicator(n: usize, indices: &[usize]) -> Self {
        let mut out = MultiIndex::zeros(n);
        for &i in indices {
            out.exps[i] += 1;
        }
        out
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.lo + self.exps.len() - 1
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent at index `i`; zero outside `[lo:hi]`.
    pub fn exp(&self, i: usize) -> u32 {
        if i < self.lo {
            return 0;
        }
        self.exps.get(i - self.lo).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn bracket(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i + self.lo)
            .collect()
    }

    pub fn floor(&self) -> Floor {
        self.exps
            .iter()
            .position(|&e| e > 0)
            .map_or(Floor::Infinity, |i| Floor::At(i + self.lo))
    }

    /// `alpha + p`.
    pub fn plus(&self, p: usize) -> Result<Self> {
        if p < self.lo || p > self.hi() {
            return Err(Error::OutOfRange {
                index: p,
                n: self.hi(),
            });
        }
        let mut out = self.clone();
        out.exps[p - self.lo] += 1;
        Ok(out)
    }

    /// `alpha - p`, defined for `p` in the support.
    pub fn minus(&self, p: usize) -> Result<Self> {
        if self.exp(p) == 0 {
            return Err(Error::NotMember(p));
        }
        let mut out = self.clone();
        out.exps[p - self.lo] -= 1;
        Ok(out)
    }

    /// Slotwise sum; both operands must share the index range.
    pub fn sum(&self, other: &MultiIndex) -> Result<Self> {
        if self.lo != other.lo || self.exps.len() != other.exps.len() {
            return Err(Error::ShapeMismatch(format!(
                "multiindex ranges [{}:{}] and [{}:{}]",
                self.lo,
                self.hi(),
                other.lo,
                other.hi()
            )));
        }
        Ok(MultiIndex {
            lo: self.lo,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Strictly ascending index map `[start : start+len-1] -> N_0`, stored by image.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternator {
    start: usize,
    image: Vec<usize>,
}

impl Alternator {
    pub fn new(start: usize, image: Vec<usize>) -> Result<Self> {
        if image.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!(
                "alternator image {image:?} is not strictly ascending"
            )));
        }
        Ok(Alternator { start, image })
    }

    pub fn empty(start: usize) -> Self {
        Alternator {
            start,
            image: Vec::new(),
        }
    }

    /// Member of `Sigma(k, n)`: domain starts at 1.
    pub fn sigma(image: &[usize]) -> Result<Self> {
        Alternator::new(1, image.to_vec())
    }

    /// Member of `Sigma_0(k, n)`: domain starts at 0.
    pub fn sigma0(image: &[usize]) -> Result<Self> {
        Alternator::new(0, image.to_vec())
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.image.binary_search(&i).is_ok()
    }

    pub fn floor(&self) -> Floor {
        self.image.first().map_or(Floor::Infinity, |&i| Floor::At(i))
    }

    /// `sigma + q` for `q` outside the image.
    pub fn plus(&self, q: usize) -> Result<Self> {
        match self.image.binary_search(&q) {
            Ok(_) => Err(Error::NotDisjoint(q)),
            Err(pos) => {
                let mut image = self.image.clone();
                image.insert(pos, q);
                Ok(Alternator {
                    start: self.start,
                    image,
                })
            }
        }
    }

    /// `sigma - p` for `p` in the image.
    pub fn minus(&self, p: usize) -> Result<Self> {
        match self.image.binary_search(&p) {
            Ok(pos) => {
                let mut image = self.image.clone();
                image.remove(pos);
                Ok(Alternator {
                    start: self.start,
                    image,
                })
            }
            Err(_) => Err(Error::NotMember(p)),
        }
    }

    pub fn is_disjoint(&self, other: &Alternator) -> bool {
        self.image.iter().all(|i| !other.contains(*i))
    }
}

impl fmt::Display for Alternator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// All multiindices of total degree `r` over `[lo:hi]`, ordered
/// lexicographically with the first slot descending: `(2,0), (1,1), (0,2)`.
pub fn enum_multiindices(r: usize, lo: usize, hi: usize) -> Result<Vec<MultiIndex>> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let slots = hi - lo + 1;
    let mut out = Vec::new();
    let mut current = vec![0u32; slots];
    fill_multiindices(r, 0, &mut current, &mut |exps| {
        out.push(MultiIndex {
            lo,
            exps: exps.to_vec(),
        })
    });
    Ok(out)
}

fn fill_multiindices(remaining: usize, slot: usize, current: &mut [u32], emit: &mut impl FnMut(&[u32])) {
    if slot + 1 == current.len() {
        current[slot] = remaining as u32;
        emit(current);
        return;
    }
    for e in (0..=remaining).rev() {
        current[slot] = e as u32;
        fill_multiindices(remaining - e, slot + 1, current, emit);
    }
    current[slot] = 0;
}

/// `A(r, n) = A(r, 0:n)`.
pub fn multiindices(r: usize, n: usize) -> Vec<MultiIndex> {
    enum_multiindices(r, 0, n).expect("0 <= n")
}

/// Strictly ascending maps `[a:b] -> [lo:hi]` in lexicographic order of their
/// images. For `a > b` the result is the single empty alternator.
pub fn enum_alternators(a: usize, b: usize, lo: usize, hi: usize) -> Vec<Alternator> {
    if a > b {
        return vec![Alternator::empty(a)];
    }
    let len = b - a + 1;
    let mut out = Vec::new();
    if lo > hi || len > hi - lo + 1 {
        return out;
    }
    let mut current = Vec::with_capacity(len);
    fill_alternators(a, len, lo, hi, &mut current, &mut out);
    out
}

fn fill_alternators(
    start: usize,
    len: usize,
    next: usize,
    hi: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Alternator>,
) {
    if current.len() == len {
        out.push(Alternator {
            start,
            image: current.clone(),
        });
        return;
    }
    let needed = len - current.len();
    let mut i = next;
    while i + needed <= hi + 1 {
        current.push(i);
        fill_alternators(start, len, i + 1, hi, current, out);
        current.pop();
        i += 1;
    }
}

/// `Sigma(k, n) = Sigma(1:k, 0:n)`.
pub fn sigma(k: usize, n: usize) -> Vec<Alternator> {
    enum_alternators(1, k, 0, n)
}

/// `Sigma_0(k, n) = Sigma(0:k, 0:n)`.
pub fn sigma0(k: usize, n: usize) -> Vec<Alternator> {
    enum_alternators(0, k, 0, n)
}

/// `eps(q, sigma)`: sign of the permutation sorting `q, sigma(a), ..., sigma(b)`.
pub fn eps_before(q: usize, sigma: &Alternator) -> Result<Sign> {
    if sigma.contains(q) {
        return Err(Error::NotDisjoint(q));
    }
    let mut seq = Vec::with_capacity(sigma.len() + 1);
    seq.push(q);
    seq.extend_from_slice(sigma.image());
    Ok(permutation_parity(&seq))
}

/// `eps(sigma, q)`: sign of the permutation sorting `sigma(a), ..., sigma(b), q`.
pub fn eps_after(sigma: &Alternator, q: usize) -> Result<Sign> {
    if sigma.contains(q) {
        return Err(Error::NotDisjoint(q));
    }
    let mut seq = sigma.image().to_vec();
    seq.push(q);
    Ok(permutation_parity(&seq))
}

/// Complement in `[0:n]`. Maps `Sigma(k, n)` to `Sigma_0(n-k, n)` and
/// `Sigma_0(l, n)` to `Sigma(n-l, n)`.
pub fn complement(x: &Alternator, n: usize) -> Result<Alternator> {
    if let Some(&bad) = x.image().iter().find(|&&i| i > n) {
        return Err(Error::OutOfRange { index: bad, n });
    }
    let start = if x.start() == 0 { 1 } else { 0 };
    let image = (0..=n).filter(|i| !x.contains(*i)).collect();
    Ok(Alternator { start, image })
}

/// `(eps(sigma, rho), sigma + rho)` for disjoint alternators.
pub fn merge_sign(sigma: &Alternator, rho: &Alternator) -> Result<(Sign, Alternator)> {
    if let Some(&shared) = sigma.image().iter().find(|&&i| rho.contains(i)) {
        return Err(Error::NotDisjoint(shared));
    }
    let mut seq = sigma.image().to_vec();
    seq.extend_from_slice(rho.image());
    let sign = permutation_parity(&seq);
    seq.sort_unstable();
    Ok((
        sign,
        Alternator {
            start: sigma.start().min(rho.start()),
            image: seq,
        },
    ))
}
