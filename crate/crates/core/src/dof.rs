//! Degrees of freedom `omega -> int_F eta ^ tr_F omega` attached to the faces
//! of a complex, and the global DOF matrix.

use std::fmt;

use crate::duality::integrate;
use crate::error::{Error, Result};
use crate::forms::NormalForm;
use crate::linalg::ExactMatrix;
use crate::rational::Rational;
use crate::simplicial::{global_basis, global_trace, trace, GlobalBasisElement, GlobalForm, OrderedSimplex, SimplicialComplex};
use crate::spaces::{basis, Family, SpaceId, SpanningTerm};

/// One functional on a face; `family` names the space it acts on.
#[derive(Debug, Clone)]
pub struct DofFunctional {
    pub face: OrderedSimplex,
    pub family: Family,
    pub term: SpanningTerm,
    pub weight: NormalForm,
}

impl fmt::Display for DofFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.face, self.term)
    }
}

/// Space of the weights `eta` on an `m`-dimensional face, if nonzero:
/// `P^-_{r+k-m} L^{m-k}` for the full family and `P_{r+k-m-1} L^{m-k}` for
/// the trimmed one.
pub fn weight_space(family: Family, r: usize, k: usize, m: usize) -> Option<SpaceId> {
    if m < k {
        return None;
    }
    let (weight_family, degree) = match family {
        Family::P => (Family::Pminus, (r + k).checked_sub(m).filter(|&d| d > 0)?),
        Family::Pminus => (Family::P, (r + k).checked_sub(m + 1)?),
    };
    SpaceId::full(weight_family, degree, m - k, m).ok()
}

/// Functionals on `face` for the `family` space of degree `r` and form
/// degree `k`, one per basis element of the weight space.
pub fn dof_basis(face: &OrderedSimplex, family: Family, r: usize, k: usize) -> Result<Vec<DofFunctional>> {
    let Some(space) = weight_space(family, r, k, face.dim()) else {
        return Ok(Vec::new());
    };
    basis(&space)
        .into_iter()
        .map(|term| {
            Ok(DofFunctional {
                face: face.clone(),
                family,
                weight: term.realize()?,
                term,
            })
        })
        .collect()
}

fn integrate_against(dof: &DofFunctional, traced: &NormalForm) -> Result<Rational> {
    integrate(&dof.weight.wedge(traced)?)
}

/// Applies a functional to a form on a top cell containing its face.
pub fn apply_dof_local(dof: &DofFunctional, form: &NormalForm, cell: &OrderedSimplex) -> Result<Rational> {
    integrate_against(dof, &trace(form, &dof.face, cell)?)
}

/// Applies a functional to a single-valued global form.
pub fn apply_dof(dof: &DofFunctional, complex: &SimplicialComplex, form: &GlobalForm) -> Result<Rational> {
    form.check_single_valued(complex)?;
    if form.space().family != dof.family {
        return Err(Error::ShapeMismatch(format!(
            "{} functional applied to a {} form",
            dof.family,
            form.space().family
        )));
    }
    integrate_against(dof, &global_trace(complex, form, &dof.face)?)
}

/// Every functional over every face of `complex`, faces by dimension.
pub fn global_dofs(complex: &SimplicialComplex, family: Family, r: usize, k: usize) -> Result<Vec<DofFunctional>> {
    let mut out = Vec::new();
    for face in complex.faces() {
        out.extend(dof_basis(face, family, r, k)?);
    }
    Ok(out)
}

/// DOFs against the global basis obtained by extending the trace-free bases
/// of all faces.
#[derive(Debug, Clone)]
pub struct DofMatrix {
    pub rows: Vec<DofFunctional>,
    pub columns: Vec<GlobalBasisElement>,
    pub matrix: ExactMatrix,
}

impl DofMatrix {
    pub fn determinant(&self) -> Result<Rational> {
        self.matrix.determinant()
    }

    /// Whether entries vanish whenever the column's face is not a face of the
    /// row's face. With faces ordered by dimension this makes the matrix
    /// block lower triangular.
    pub fn is_local(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            self.columns
                .iter()
                .enumerate()
                .all(|(j, col)| col.face.is_face_of(&row.face) || num_traits::Zero::is_zero(self.matrix.get(i, j)))
        })
    }

    /// The square block of rows and columns attached to `face`.
    pub fn diagonal_block(&self, face: &OrderedSimplex) -> ExactMatrix {
        let rows: Vec<usize> = (0..self.rows.len()).filter(|&i| &self.rows[i].face == face).collect();
        let cols: Vec<usize> = (0..self.columns.len()).filter(|&j| &self.columns[j].face == face).collect();
        let mut out = ExactMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.matrix.get(i, j).clone());
            }
        }
        out
    }
}

pub fn dof_matrix(complex: &SimplicialComplex, family: Family, r: usize, k: usize) -> Result<DofMatrix> {
    let space = SpaceId::full(family, r, k, complex.dim())?;
    let columns = global_basis(complex, &space)?;
    let rows = global_dofs(complex, family, r, k)?;
    if rows.len() != columns.len() {
        return Err(Error::DimensionMismatch {
            rows: rows.len(),
            cols: columns.len(),
        });
    }
    let mut matrix = ExactMatrix::zeros(rows.len(), columns.len());
    for (i, dof) in rows.iter().enumerate() {
        let cell = complex.cells_containing(&dof.face)?[0];
        for (j, col) in columns.iter().enumerate() {
            let value = apply_dof_local(dof, &col.form.per_cell()[cell], &complex.cells()[cell])?;
            matrix.set(i, j, value);
        }
    }
    Ok(DofMatrix { rows, columns, matrix })
}
