use std::collections::BTreeMap;

use serde::Deserialize;

use super::simplex::OrderedSimplex;
use crate::error::{Error, Result};

/// Pure simplicial complex given by its top cells, with the face lattice
/// stored eagerly.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    dim: usize,
    cells: Vec<OrderedSimplex>,
    faces: Vec<OrderedSimplex>,
    containing: BTreeMap<OrderedSimplex, Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct MeshFile {
    cells: Vec<Vec<usize>>,
}

pub fn build_complex(cells: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
    if cells.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let cells = cells
        .into_iter()
        .enumerate()
        .map(|(i, v)| OrderedSimplex::new(v).map_err(|e| Error::Malformed(format!("cell {i}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let dim = cells[0].dim();
    if let Some((i, c)) = cells.iter().enumerate().find(|(_, c)| c.dim() != dim) {
        return Err(Error::NonUniformDimension {
            cell: i,
            expected: dim,
            found: c.dim(),
        });
    }
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate().skip(i + 1) {
            if a == b {
                return Err(Error::Malformed(format!("cells {i} and {j} coincide")));
            }
            // a shared vertex set spans a common face of both cells
            if let Some(shared) = a.intersection(b) {
                if !shared.is_face_of(a) || !shared.is_face_of(b) {
                    return Err(Error::IntersectionNotAFace(i, j));
                }
            }
        }
    }
    let mut containing: BTreeMap<OrderedSimplex, Vec<usize>> = BTreeMap::new();
    for (i, cell) in cells.iter().enumerate() {
        for face in cell.faces() {
            containing.entry(face).or_default().push(i);
        }
    }
    let mut faces: Vec<OrderedSimplex> = containing.keys().cloned().collect();
    faces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    Ok(SimplicialComplex {
        dim,
        cells,
        faces,
        containing,
    })
}

/// Reads `{"cells": [[0,1,2], ...]}`.
pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    let mesh: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build_complex(mesh.cells)
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[OrderedSimplex] {
        &self.cells
    }

    /// Every face, by dimension and then lexicographically.
    pub fn faces(&self) -> &[OrderedSimplex] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &OrderedSimplex> {
        self.faces.iter().filter(move |f| f.dim() == d)
    }

    pub fn contains(&self, face: &OrderedSimplex) -> bool {
        self.containing.contains_key(face)
    }

    /// Indices of the top cells containing `face`.
    pub fn cells_containing(&self, face: &OrderedSimplex) -> Result<&[usize]> {
        self.containing
            .get(face)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::FaceNotInComplex(face.vertices().to_vec()))
    }

    /// Faces shared by at least two top cells.
    pub fn shared_faces(&self) -> impl Iterator<Item = (&OrderedSimplex, &[usize])> {
        self.faces.iter().filter_map(|f| {
            let cells = &self.containing[f];
            (cells.len() > 1).then_some((f, cells.as_slice()))
        })
    }
}
