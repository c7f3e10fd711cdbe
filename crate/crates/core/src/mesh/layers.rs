use std::collections::VecDeque;

use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Layer index of every element: 0 for elements whose closure contains `corner`, then
/// `j` for elements touching layer `j - 1` and not already labeled.
///
/// On a conforming mesh (hanging nodes materialized) two closures intersect exactly when the
/// elements share a vertex, so layers are breadth-first distances in the vertex-contact graph.
pub fn compute_layers(mesh: &Mesh, corner: Point2) -> Result<Vec<usize>> {
    let tol = super::VERTEX_TOL * mesh.domain_diameter().max(1.0);
    let mut vertex_elements: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_vertices()];
    for el in &mesh.elements {
        for &v in &el.vertex_loop {
            vertex_elements[v].push(el.id);
        }
    }
    let mut label = vec![usize::MAX; mesh.n_elements()];
    let mut queue = VecDeque::new();
    for (v, vertex) in mesh.vertices.iter().enumerate() {
        if vertex.position.dist(corner) <= tol {
            for &e in &vertex_elements[v] {
                if label[e] == usize::MAX {
                    label[e] = 0;
                    queue.push_back(e);
                }
            }
        }
    }
    if queue.is_empty() {
        return Err(Error::InvalidMesh(format!(
            "no element has a vertex at the singular corner {corner:?}"
        )));
    }
    while let Some(e) = queue.pop_front() {
        for &v in &mesh.elements[e].vertex_loop {
            for &nb in &vertex_elements[v] {
                if label[nb] == usize::MAX {
                    label[nb] = label[e] + 1;
                    queue.push_back(nb);
                }
            }
        }
    }
    if let Some(e) = label.iter().position(|&l| l == usize::MAX) {
        return Err(Error::InvalidMesh(format!(
            "element {e} is disconnected from the corner"
        )));
    }
    Ok(label)
}

/// Copy of `mesh` labeled by [`compute_layers`] with respect to the origin.
pub fn assign_layers(mesh: &Mesh) -> Result<Mesh> {
    let labels = compute_layers(mesh, Point2::default())?;
    mesh.clone().with_layer_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_graded_mesh, generate_square_mesh, GradedFamily};

    #[test]
    fn recomputed_labels_match_generator() {
        for fam in [GradedFamily::A, GradedFamily::B, GradedFamily::C] {
            for sigma in [0.5, 2f64.sqrt() - 1.0, (2f64.sqrt() - 1.0).powi(2)] {
                let m = generate_graded_mesh(fam, sigma, 4).unwrap();
                let gen = m.layers().unwrap();
                assert_eq!(
                    compute_layers(&m, Point2::default()).unwrap(),
                    gen,
                    "{fam:?} {sigma}"
                );
            }
        }
    }

    #[test]
    fn corner_elements_are_layer_zero() {
        let m = generate_graded_mesh(GradedFamily::A, 0.5, 3).unwrap();
        let m = assign_layers(&m).unwrap();
        for el in &m.elements {
            let touches = el.vertex_loop.iter().any(|&v| m.position(v).norm() == 0.0);
            assert_eq!(touches, el.layer == Some(0));
        }
        let single = generate_square_mesh(1).unwrap();
        assert_eq!(assign_layers(&single).unwrap().layers().unwrap(), vec![0]);
    }

    #[test]
    fn missing_corner_is_an_error() {
        let m = generate_square_mesh(2).unwrap();
        assert!(compute_layers(&m, Point2::new(0.25, 0.25)).is_err());
    }
}
