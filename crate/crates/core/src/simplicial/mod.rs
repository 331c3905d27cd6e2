//! Simplices, traces and extensions, simplicial complexes, and the geometric
//! decomposition of conforming global forms.

mod complex;
mod global;
mod simplex;

pub use complex::{build_complex, complex_from_json, SimplicialComplex};
pub use global::{
    conforming_basis, conforming_dimension, geometric_decompose, global_basis, global_extend, global_form_from_json,
    global_trace, random_conforming, reassemble, GlobalBasisElement, GlobalForm,
};
pub use simplex::{decompose_local, ext_full, ext_local, inclusion, trace, InclusionMap, OrderedSimplex};

use crate::error::Result;
use crate::forms::NormalForm;
use crate::linalg::ExactMatrix;
use crate::spaces::{basis, combine, forms_matrix, Layout, SpaceId, SpanningTerm};

/// Basis of the forms in the full space on the reference simplex whose traces
/// vanish on every proper face, computed by elimination.
pub fn trace_kernel(space: &SpaceId) -> Result<Vec<NormalForm>> {
    let full = space.with_ring(false);
    let cell = OrderedSimplex::reference(full.n);
    let forms = basis(&full).iter().map(SpanningTerm::realize).collect::<Result<Vec<_>>>()?;
    let mut stacked = ExactMatrix::zeros(0, forms.len());
    for face in cell.faces().iter().filter(|f| f.dim() < full.n) {
        let layout = Layout::new(face.dim(), full.k, full.degree());
        let traces = forms.iter().map(|f| trace(f, face, &cell)).collect::<Result<Vec<_>>>()?;
        stacked = stacked.stack(&forms_matrix(&layout, &traces)?)?;
    }
    stacked.nullspace().iter().map(|v| combine(&full, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Family;

    #[test]
    fn trace_kernel_matches_trace_free_bases() {
        for n in 0..=2 {
            for r in 0..=2 {
                for k in 0..=n {
                    for family in [Family::P, Family::Pminus] {
                        let s = SpaceId::trace_free(family, r, k, n).unwrap();
                        assert_eq!(trace_kernel(&s).unwrap().len(), basis(&s).len(), "{s}");
                    }
                }
            }
        }
    }
}
