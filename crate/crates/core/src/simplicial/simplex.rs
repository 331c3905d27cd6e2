use std::fmt;

use crate::combinatorics::{Alternator, MultiIndex};
use crate::error::{Error, Result};
use crate::forms::NormalForm;
use crate::spaces::{basis, express, Family, SpaceId, SpanningTerm};

/// Simplex given by strictly ascending global vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedSimplex {
    vertices: Vec<usize>,
}

impl OrderedSimplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Malformed("simplex without vertices".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("vertices {vertices:?} are not strictly ascending")));
        }
        Ok(OrderedSimplex { vertices })
    }

    /// Reference simplex on vertices `0..=n`.
    pub fn reference(n: usize) -> Self {
        OrderedSimplex {
            vertices: (0..=n).collect(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_face_of(&self, other: &OrderedSimplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.binary_search(v).is_ok())
    }

    pub fn intersection(&self, other: &OrderedSimplex) -> Option<OrderedSimplex> {
        let shared: Vec<usize> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| other.vertices.binary_search(v).is_ok())
            .collect();
        (!shared.is_empty()).then_some(OrderedSimplex { vertices: shared })
    }

    /// All nonempty faces, including the simplex itself, by dimension and
    /// then lexicographically.
    pub fn faces(&self) -> Vec<OrderedSimplex> {
        let count = self.vertices.len();
        let mut out: Vec<OrderedSimplex> = (1u32..(1 << count))
            .map(|mask| OrderedSimplex {
                vertices: (0..count)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.vertices[i])
                    .collect(),
            })
            .collect();
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.vertices.cmp(&b.vertices)));
        out
    }
}

impl fmt::Display for OrderedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", ids.join(","))
    }
}

/// Slot map of a face into a simplex: local vertex `i` of the face is local
/// vertex `slots[i]` of the simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionMap {
    slots: Vec<usize>,
    target_dim: usize,
}

impl InclusionMap {
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Inverse on the image; `None` for slots of the simplex outside the face.
    pub fn dagger(&self, slot: usize) -> Option<usize> {
        self.slots.binary_search(&slot).ok()
    }

    pub fn as_alternator(&self) -> Alternator {
        Alternator::sigma0(&self.slots).expect("ascending")
    }

    /// `alpha o dagger`, extended by zero.
    pub fn push_multiindex(&self, alpha: &MultiIndex) -> MultiIndex {
        let mut exps = vec![0; self.target_dim + 1];
        for (i, &slot) in self.slots.iter().enumerate() {
            exps[slot] = alpha.exp(i);
        }
        MultiIndex::from_exps(&exps)
    }

    /// `alpha o inclusion`, or `None` if the support leaves the face.
    pub fn pull_multiindex(&self, alpha: &MultiIndex) -> Option<MultiIndex> {
        if alpha.bracket().iter().any(|&i| self.dagger(i).is_none()) {
            return None;
        }
        Some(MultiIndex::from_exps(
            &self.slots.iter().map(|&slot| alpha.exp(slot)).collect::<Vec<_>>(),
        ))
    }

    /// `inclusion o sigma`.
    pub fn push_alternator(&self, sigma: &Alternator) -> Alternator {
        let image = sigma.image().iter().map(|&i| self.slots[i]).collect();
        Alternator::new(sigma.start(), image).expect("inclusion is increasing")
    }

    /// `dagger o sigma`, or `None` if the image leaves the face.
    pub fn pull_alternator(&self, sigma: &Alternator) -> Option<Alternator> {
        let image = sigma
            .image()
            .iter()
            .map(|&i| self.dagger(i))
            .collect::<Option<Vec<_>>>()?;
        Some(Alternator::new(sigma.start(), image).expect("dagger is increasing"))
    }
}

pub fn inclusion(face: &OrderedSimplex, cell: &OrderedSimplex) -> Result<InclusionMap> {
    let slots = face
        .vertices
        .iter()
        .map(|v| cell.vertices.binary_search(v).ok())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotAFace {
            face: face.vertices.clone(),
            cell: cell.vertices.clone(),
        })?;
    Ok(InclusionMap {
        slots,
        target_dim: cell.dim(),
    })
}

fn check_on(form: &NormalForm, cell: &OrderedSimplex) -> Result<()> {
    if form.n() != cell.dim() {
        return Err(Error::ShapeMismatch(format!(
            "form on an {}-simplex given for {cell}",
            form.n()
        )));
    }
    Ok(())
}

/// Pullback of a form on `cell` to its face `face`.
pub fn trace(form: &NormalForm, face: &OrderedSimplex, cell: &OrderedSimplex) -> Result<NormalForm> {
    check_on(form, cell)?;
    let map = inclusion(face, cell)?;
    let m = face.dim();
    let mut out = NormalForm::zero(m, form.k(), form.r());
    for ((alpha, sigma), c) in form.terms() {
        let (Some(a), Some(s)) = (map.pull_multiindex(alpha), map.pull_alternator(sigma)) else {
            continue;
        };
        out.add_scaled(&NormalForm::make_term(&a, &s)?, c)?;
    }
    Ok(out)
}

fn push_term(map: &InclusionMap, term: &SpanningTerm) -> SpanningTerm {
    match term {
        SpanningTerm::PolyAlternator { alpha, sigma } => SpanningTerm::PolyAlternator {
            alpha: map.push_multiindex(alpha),
            sigma: map.push_alternator(sigma),
        },
        SpanningTerm::PolyWhitney { alpha, rho } => SpanningTerm::PolyWhitney {
            alpha: map.push_multiindex(alpha),
            rho: map.push_alternator(rho),
        },
    }
}

/// Constant forms on a proper face have no local extension: the extended
/// form would have to be constant with a nonzero trace on one face only.
fn check_extendable(s: &SpaceId, face: &OrderedSimplex, cell: &OrderedSimplex) -> Result<()> {
    if s.family == Family::P && s.r == 0 && face.dim() < cell.dim() {
        return Err(Error::Unsupported(format!(
            "constant forms on {face} admit no local extension into {cell}"
        )));
    }
    Ok(())
}

/// The trace-free space of the family of `s` on a `dim`-simplex; `None` when
/// `dim < k` and the space is zero.
pub(crate) fn trace_free_on(s: &SpaceId, dim: usize) -> Option<SpaceId> {
    SpaceId::new(s.family, true, s.r, s.k, dim).ok()
}

pub(crate) fn check_trace_free(s: &SpaceId, face: &OrderedSimplex, piece: &NormalForm) -> Result<()> {
    let member = match trace_free_on(s, face.dim()) {
        Some(ring) => express(piece, &ring).is_ok(),
        None => piece.is_zero(),
    };
    if member {
        Ok(())
    } else {
        Err(Error::ResidueNotTraceFree(face.vertices().to_vec()))
    }
}

/// Extends a trace-free form on `face` to `cell` by relabeling its
/// coordinates in the trace-free basis. Only the family and degrees of `s`
/// are used.
pub fn ext_local(s: &SpaceId, face: &OrderedSimplex, cell: &OrderedSimplex, form: &NormalForm) -> Result<NormalForm> {
    check_on(form, face)?;
    let map = inclusion(face, cell)?;
    let mut out = NormalForm::zero(cell.dim(), s.k, s.degree());
    let Some(local) = trace_free_on(s, face.dim()) else {
        return if form.is_zero() { Ok(out) } else { Err(Error::NotInSpace) };
    };
    check_extendable(s, face, cell)?;
    let coefficients = express(form, &local)?;
    for (term, c) in basis(&local).iter().zip(&coefficients) {
        out.add_scaled(&push_term(&map, term).realize()?, c)?;
    }
    Ok(out)
}

/// Splits a form on a single simplex into trace-free pieces on its faces,
/// lowest dimension first, so that the pieces' extensions sum to the form.
pub fn decompose_local(s: &SpaceId, cell: &OrderedSimplex, form: &NormalForm) -> Result<Vec<(OrderedSimplex, NormalForm)>> {
    check_on(form, cell)?;
    express(form, &SpaceId::new(s.family, false, s.r, s.k, cell.dim())?)?;
    let mut residual = form.clone();
    let mut pieces = Vec::new();
    for dim in 0..=cell.dim() {
        let faces: Vec<_> = cell.faces().into_iter().filter(|f| f.dim() == dim).collect();
        let mut extended = Vec::new();
        for face in faces {
            let piece = trace(&residual, &face, cell)?;
            check_trace_free(s, &face, &piece)?;
            extended.push(ext_local(s, &face, cell, &piece)?);
            pieces.push((face, piece));
        }
        for e in extended {
            residual = residual.sub(&e)?;
        }
    }
    if !residual.is_zero() {
        return Err(Error::ResidueNotTraceFree(cell.vertices().to_vec()));
    }
    Ok(pieces)
}

/// Extension of an arbitrary member of the full space on `face`: decompose
/// over the faces of `face` and extend each piece.
pub fn ext_full(s: &SpaceId, face: &OrderedSimplex, cell: &OrderedSimplex, form: &NormalForm) -> Result<NormalForm> {
    inclusion(face, cell)?;
    let mut out = NormalForm::zero(cell.dim(), s.k, s.degree());
    for (f, piece) in decompose_local(s, face, form)? {
        out = out.add(&ext_local(s, &f, cell, &piece)?)?;
    }
    Ok(out)
}
