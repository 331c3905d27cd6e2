use std::collections::BTreeMap;

use rand::Rng;
use serde::Deserialize;

use super::complex::SimplicialComplex;
use super::simplex::{check_trace_free, ext_local, trace, trace_free_on, OrderedSimplex};
use crate::combinatorics::{Alternator, MultiIndex};
use crate::error::{Error, Result};
use crate::forms::NormalForm;
use crate::linalg::ExactMatrix;
use crate::rational::{self, Rational};
use crate::spaces::{basis, combine, express, forms_matrix, Layout, SpaceId, SpanningTerm};

/// One form per top cell of a complex, with matching traces on shared faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalForm {
    space: SpaceId,
    per_cell: Vec<NormalForm>,
}

impl GlobalForm {
    /// Validates shapes, membership of every cell form in the full space
    /// `space` on that cell, and single-valuedness.
    pub fn new(complex: &SimplicialComplex, space: SpaceId, per_cell: Vec<NormalForm>) -> Result<Self> {
        let space = full_space(complex, &space)?;
        if per_cell.len() != complex.cells().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} cell forms for {} cells",
                per_cell.len(),
                complex.cells().len()
            )));
        }
        for form in &per_cell {
            express(form, &space)?;
        }
        let out = GlobalForm { space, per_cell };
        out.check_single_valued(complex)?;
        Ok(out)
    }

    pub fn zero(complex: &SimplicialComplex, space: SpaceId) -> Result<Self> {
        let space = full_space(complex, &space)?;
        let per_cell = complex
            .cells()
            .iter()
            .map(|_| NormalForm::zero(space.n, space.k, space.degree()))
            .collect();
        Ok(GlobalForm { space, per_cell })
    }

    pub fn space(&self) -> &SpaceId {
        &self.space
    }

    pub fn per_cell(&self) -> &[NormalForm] {
        &self.per_cell
    }

    pub fn check_single_valued(&self, complex: &SimplicialComplex) -> Result<()> {
        for (face, cells) in complex.shared_faces() {
            let first = trace(&self.per_cell[cells[0]], face, &complex.cells()[cells[0]])?;
            for &i in &cells[1..] {
                if trace(&self.per_cell[i], face, &complex.cells()[i])? != first {
                    return Err(Error::NotSingleValued(face.vertices().to_vec()));
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &GlobalForm) -> Result<Self> {
        self.add_scaled(other, &rational::one())
    }

    pub fn sub(&self, other: &GlobalForm) -> Result<Self> {
        self.add_scaled(other, &-rational::one())
    }

    fn add_scaled(&self, other: &GlobalForm, factor: &Rational) -> Result<Self> {
        if self.space != other.space || self.per_cell.len() != other.per_cell.len() {
            return Err(Error::ShapeMismatch("global forms over different spaces".into()));
        }
        let per_cell = self
            .per_cell
            .iter()
            .zip(&other.per_cell)
            .map(|(a, b)| {
                let mut sum = a.clone();
                sum.add_scaled(b, factor)?;
                Ok(sum)
            })
            .collect::<Result<_>>()?;
        Ok(GlobalForm {
            space: self.space,
            per_cell,
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        GlobalForm {
            space: self.space,
            per_cell: self.per_cell.iter().map(|f| f.scale(factor)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.per_cell.iter().all(NormalForm::is_zero)
    }
}

fn full_space(complex: &SimplicialComplex, space: &SpaceId) -> Result<SpaceId> {
    if space.n != complex.dim() {
        return Err(Error::ShapeMismatch(format!(
            "space on dimension {} for a complex of dimension {}",
            space.n,
            complex.dim()
        )));
    }
    Ok(space.with_ring(false))
}

/// Trace onto a face, taken through the first top cell containing it.
pub fn global_trace(complex: &SimplicialComplex, form: &GlobalForm, face: &OrderedSimplex) -> Result<NormalForm> {
    let cell = complex.cells_containing(face)?[0];
    trace(&form.per_cell[cell], face, &complex.cells()[cell])
}

/// Extends a trace-free form on `face` into every top cell containing it,
/// and by zero elsewhere.
pub fn global_extend(
    complex: &SimplicialComplex,
    space: &SpaceId,
    face: &OrderedSimplex,
    form: &NormalForm,
) -> Result<GlobalForm> {
    let mut out = GlobalForm::zero(complex, *space)?;
    for &i in complex.cells_containing(face)? {
        out.per_cell[i] = ext_local(space, face, &complex.cells()[i], form)?;
    }
    Ok(out)
}

/// Trace-free pieces on every face (by dimension, then lexicographically)
/// whose global extensions sum to `form`.
pub fn geometric_decompose(
    complex: &SimplicialComplex,
    form: &GlobalForm,
) -> Result<Vec<(OrderedSimplex, NormalForm)>> {
    let space = *form.space();
    let mut residual = form.clone();
    let mut pieces = Vec::new();
    for dim in 0..=complex.dim() {
        let mut extended = Vec::new();
        for face in complex.faces_of_dim(dim) {
            let piece = global_trace(complex, &residual, face)?;
            check_trace_free(&space, face, &piece)?;
            if trace_free_on(&space, dim).is_some() && !piece.is_zero() {
                extended.push(global_extend(complex, &space, face, &piece)?);
            }
            pieces.push((face.clone(), piece));
        }
        for e in extended {
            residual = residual.sub(&e)?;
        }
    }
    if let Some(i) = residual.per_cell.iter().position(|f| !f.is_zero()) {
        return Err(Error::ResidueNotTraceFree(complex.cells()[i].vertices().to_vec()));
    }
    Ok(pieces)
}

/// Sum of the global extensions of the pieces.
pub fn reassemble(
    complex: &SimplicialComplex,
    space: &SpaceId,
    pieces: &[(OrderedSimplex, NormalForm)],
) -> Result<GlobalForm> {
    let mut out = GlobalForm::zero(complex, *space)?;
    for (face, piece) in pieces {
        if !complex.contains(face) {
            return Err(Error::FaceNotInComplex(face.vertices().to_vec()));
        }
        out = out.add(&global_extend(complex, space, face, piece)?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GlobalBasisElement {
    pub face: OrderedSimplex,
    pub term: SpanningTerm,
    pub form: GlobalForm,
}

/// Global extensions of the trace-free basis on every face.
pub fn global_basis(complex: &SimplicialComplex, space: &SpaceId) -> Result<Vec<GlobalBasisElement>> {
    let mut out = Vec::new();
    for face in complex.faces() {
        let Some(ring) = trace_free_on(space, face.dim()) else {
            continue;
        };
        for term in basis(&ring) {
            let form = global_extend(complex, space, face, &term.realize()?)?;
            out.push(GlobalBasisElement {
                face: face.clone(),
                term,
                form,
            });
        }
    }
    Ok(out)
}

/// Matrix of the interface conditions on cellwise basis coefficients: for
/// every shared face, the trace from each containing cell minus the trace
/// from the first one.
fn jump_matrix(complex: &SimplicialComplex, space: &SpaceId) -> Result<(ExactMatrix, usize)> {
    let local = basis(space);
    let size = local.len();
    let forms = local.iter().map(SpanningTerm::realize).collect::<Result<Vec<_>>>()?;
    let columns = complex.cells().len() * size;
    let mut jumps = ExactMatrix::zeros(0, columns);
    for (face, cells) in complex.shared_faces() {
        let layout = Layout::new(face.dim(), space.k, space.degree());
        if layout.is_empty() {
            continue;
        }
        let traced = |cell: usize| -> Result<ExactMatrix> {
            let traces = forms
                .iter()
                .map(|f| trace(f, face, &complex.cells()[cell]))
                .collect::<Result<Vec<_>>>()?;
            forms_matrix(&layout, &traces)
        };
        let first = traced(cells[0])?;
        for &other in &cells[1..] {
            let second = traced(other)?;
            let mut block = ExactMatrix::zeros(layout.len(), columns);
            for i in 0..layout.len() {
                for j in 0..size {
                    block.set(i, cells[0] * size + j, first.get(i, j).clone());
                    block.set(i, other * size + j, -second.get(i, j).clone());
                }
            }
            jumps = jumps.stack(&block)?;
        }
    }
    Ok((jumps, size))
}

/// Basis of the single-valued subspace of the broken space, computed as the
/// null space of the interface conditions. Independent of the extension
/// operators.
pub fn conforming_basis(complex: &SimplicialComplex, space: &SpaceId) -> Result<Vec<GlobalForm>> {
    let space = full_space(complex, space)?;
    let (jumps, size) = jump_matrix(complex, &space)?;
    jumps
        .nullspace()
        .into_iter()
        .map(|v| {
            let per_cell = v
                .chunks(size.max(1))
                .take(complex.cells().len())
                .map(|c| combine(&space, &c[..size]))
                .collect::<Result<Vec<_>>>()?;
            Ok(GlobalForm { space, per_cell })
        })
        .collect()
}

pub fn conforming_dimension(complex: &SimplicialComplex, space: &SpaceId) -> Result<usize> {
    let space = full_space(complex, space)?;
    let (jumps, _) = jump_matrix(complex, &space)?;
    Ok(jumps.cols() - jumps.rank())
}

/// Random rational combination of a conforming basis.
pub fn random_conforming(basis: &[GlobalForm], complex: &SimplicialComplex, space: &SpaceId, rng: &mut impl Rng) -> Result<GlobalForm> {
    let mut out = GlobalForm::zero(complex, *space)?;
    for b in basis {
        out = out.add_scaled(b, &rational::sample(rng))?;
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct TermRecord(Vec<u32>, Vec<usize>, String);

/// Reads `{"<cell index>": [[alpha, sigma, "p/q"], ...], ...}`; cells not
/// listed carry the zero form.
pub fn global_form_from_json(complex: &SimplicialComplex, space: &SpaceId, text: &str) -> Result<GlobalForm> {
    let raw: BTreeMap<String, Vec<TermRecord>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let space = full_space(complex, space)?;
    let n = space.n;
    let mut per_cell: Vec<NormalForm> = complex
        .cells()
        .iter()
        .map(|_| NormalForm::zero(n, space.k, space.degree()))
        .collect();
    for (key, terms) in raw {
        let cell: usize = key
            .parse()
            .ok()
            .filter(|&i| i < per_cell.len())
            .ok_or_else(|| Error::Malformed(format!("no cell with index {key:?}")))?;
        for TermRecord(exps, image, coefficient) in terms {
            if exps.len() != n + 1 {
                return Err(Error::Malformed(format!("cell {cell}: multiindex {exps:?} needs {} entries", n + 1)));
            }
            let sigma = Alternator::sigma(&image).map_err(|e| Error::Malformed(format!("cell {cell}: {e}")))?;
            if sigma.len() != space.k {
                return Err(Error::Malformed(format!("cell {cell}: {sigma} is not a {}-alternator", space.k)));
            }
            let term = NormalForm::make_term(&MultiIndex::from_exps(&exps), &sigma)?;
            per_cell[cell].add_scaled(&term, &rational::parse(&coefficient)?)?;
        }
    }
    GlobalForm::new(complex, space, per_cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::simplicial::complex::build_complex;
    use crate::spaces::Family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_triangles() -> SimplicialComplex {
        build_complex(vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap()
    }

    fn simplex(v: &[usize]) -> OrderedSimplex {
        OrderedSimplex::new(v.to_vec()).unwrap()
    }

    fn hat(c: &SimplicialComplex, vertex: usize) -> GlobalForm {
        let space = SpaceId::full(Family::P, 1, 0, 2).unwrap();
        global_extend(c, &space, &simplex(&[vertex]), &NormalForm::constant(0, int(1)).homogenize(1).unwrap()).unwrap()
    }

    #[test]
    fn traces_of_global_forms() {
        let c = two_triangles();
        let space = SpaceId::full(Family::P, 1, 0, 2).unwrap();
        let one = NormalForm::constant(2, int(1));
        let g = GlobalForm::new(&c, space, vec![one.clone(), one]).unwrap();
        assert_eq!(global_trace(&c, &g, &simplex(&[1, 2])).unwrap(), NormalForm::constant(1, int(1)));
        let h = hat(&c, 1);
        for v in 0..4 {
            let value = global_trace(&c, &h, &simplex(&[v])).unwrap();
            let expected = NormalForm::constant(0, int(if v == 1 { 1 } else { 0 }));
            assert_eq!(value, expected);
        }
        h.check_single_valued(&c).unwrap();
        assert!(matches!(global_trace(&c, &h, &simplex(&[0, 3])), Err(Error::FaceNotInComplex(_))));
    }

    #[test]
    fn rejects_broken_forms() {
        let c = two_triangles();
        let space = SpaceId::full(Family::P, 1, 0, 2).unwrap();
        let broken = vec![NormalForm::lambda(2, 1), NormalForm::zero(2, 0, 1)];
        assert_eq!(GlobalForm::new(&c, space, broken).unwrap_err(), Error::NotSingleValued(vec![1]));
        let too_high = vec![NormalForm::lambda_product(2, &[0, 0]), NormalForm::zero(2, 0, 1)];
        assert_eq!(GlobalForm::new(&c, space, too_high).unwrap_err(), Error::NotInSpace);
    }

    #[test]
    fn edge_bubble_extension_is_local() {
        let c = two_triangles();
        let space = SpaceId::full(Family::P, 2, 1, 2).unwrap();
        let bubble = NormalForm::lambda_product(1, &[0, 1]).wedge(&NormalForm::dlambda(1, &[1]).unwrap()).unwrap();
        let g = global_extend(&c, &space, &simplex(&[0, 1]), &bubble).unwrap();
        assert!(g.per_cell()[1].is_zero());
        assert!(!g.per_cell()[0].is_zero());
        g.check_single_valued(&c).unwrap();
    }

    #[test]
    fn decomposition_examples() {
        let c = two_triangles();
        let pieces = geometric_decompose(&c, &hat(&c, 2)).unwrap();
        for (face, piece) in &pieces {
            assert_eq!(piece.is_zero(), face != &simplex(&[2]), "{face}");
        }
        let space = SpaceId::full(Family::P, 1, 0, 2).unwrap();
        let one = NormalForm::constant(2, int(1));
        let g = GlobalForm::new(&c, space, vec![one.clone(), one]).unwrap();
        let pieces = geometric_decompose(&c, &g).unwrap();
        let nonzero: Vec<_> = pieces.iter().filter(|(_, p)| !p.is_zero()).map(|(f, _)| f.dim()).collect();
        assert_eq!(nonzero, [0, 0, 0, 0]);
        assert_eq!(reassemble(&c, &space, &pieces).unwrap(), g);
    }

    #[test]
    fn random_round_trips() {
        let c = two_triangles();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in [Family::P, Family::Pminus] {
            let space = SpaceId::full(family, 2, 1, 2).unwrap();
            let conforming = conforming_basis(&c, &space).unwrap();
            assert_eq!(conforming.len(), global_basis(&c, &space).unwrap().len());
            for _ in 0..3 {
                let g = random_conforming(&conforming, &c, &space, &mut rng).unwrap();
                g.check_single_valued(&c).unwrap();
                let pieces = geometric_decompose(&c, &g).unwrap();
                assert_eq!(reassemble(&c, &space, &pieces).unwrap(), g);
            }
        }
    }

    #[test]
    fn constant_forms_decompose_only_in_top_degree() {
        let c = two_triangles();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let top = SpaceId::full(Family::P, 0, 2, 2).unwrap();
        let conforming = conforming_basis(&c, &top).unwrap();
        assert_eq!(global_basis(&c, &top).unwrap().len(), 2);
        let g = random_conforming(&conforming, &c, &top, &mut rng).unwrap();
        assert_eq!(reassemble(&c, &top, &geometric_decompose(&c, &g).unwrap()).unwrap(), g);
        let edges = SpaceId::full(Family::P, 0, 1, 2).unwrap();
        assert!(matches!(global_basis(&c, &edges), Err(Error::Unsupported(_))));
    }

    #[test]
    fn reads_global_forms() {
        let c = two_triangles();
        let space = SpaceId::full(Family::P, 1, 0, 2).unwrap();
        let text = r#"{"0": [[[0,1,0],[],"1"]], "1": [[[1,0,0],[],"1"]]}"#;
        let g = global_form_from_json(&c, &space, text).unwrap();
        assert_eq!(g, hat(&c, 1));
        assert!(matches!(global_form_from_json(&c, &space, r#"{"5": []}"#), Err(Error::Malformed(_))));
        assert!(matches!(global_form_from_json(&c, &space, "[]"), Err(Error::Parse(_))));
        let broken = r#"{"0": [[[0,1,0],[],"1"]]}"#;
        assert!(matches!(global_form_from_json(&c, &space, broken), Err(Error::NotSingleValued(_))));
    }
}
