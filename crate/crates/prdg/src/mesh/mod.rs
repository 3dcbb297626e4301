//! Polygonal meshes with full edge adjacency.
//!
//! Elements are stored as counter-clockwise vertex cycles. Every edge knows
//! its two incident elements (or that it sits on the boundary), its length and
//! a unit normal pointing out of the first incident element. Meshes are
//! immutable after construction; every generator funnels through
//! [`PolyMesh::from_cells`], which derives the topology and geometric data and
//! validates the result.

mod io;
mod voronoi;

pub use io::{read_mesh, read_mesh_str, write_mesh, write_mesh_string};
pub use voronoi::{voronoi_mesh, voronoi_mesh_from_seeds};

use crate::geom::{self, Vec2};
use crate::{Error, Result};

/// Marker for the missing element on a boundary edge.
pub const BOUNDARY: usize = usize::MAX;

/// An undirected mesh edge with adjacency and geometry.
#[derive(Debug, Clone)]
pub struct Edge {
    /// Endpoint vertex indices.
    pub vertices: [usize; 2],
    /// Incident elements; `elements[1] == BOUNDARY` on the boundary. The
    /// normal points out of `elements[0]`.
    pub elements: [usize; 2],
    pub length: f64,
    /// Unit normal, outward with respect to `elements[0]`.
    pub normal: Vec2,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.elements[1] == BOUNDARY
    }

    pub fn midpoint(&self, mesh: &PolyMesh) -> Vec2 {
        (mesh.vertices[self.vertices[0]] + mesh.vertices[self.vertices[1]]) * 0.5
    }
}

/// An immutable 2D polygonal mesh.
#[derive(Debug, Clone)]
pub struct PolyMesh {
    pub vertices: Vec<Vec2>,
    /// CCW vertex-index cycles, one per element.
    pub elements: Vec<Vec<usize>>,
    pub edges: Vec<Edge>,
    /// Edge ids incident to each element, in cycle order.
    pub element_edges: Vec<Vec<usize>>,
    /// Face-adjacent neighbour element ids, per element.
    pub neighbors: Vec<Vec<usize>>,
    /// Area centroids.
    pub barycenters: Vec<Vec2>,
    pub diameters: Vec<f64>,
    pub areas: Vec<f64>,
    /// Global mesh size, `max_K h_K`.
    pub h: f64,
}

impl PolyMesh {
    /// Build a mesh from raw vertices and CCW element cycles, deriving edges,
    /// adjacency and per-element geometry. Fails on malformed input.
    pub fn from_cells(vertices: Vec<Vec2>, elements: Vec<Vec<usize>>) -> Result<Self> {
        let nv = vertices.len();
        if elements.is_empty() {
            return Err(Error::InvalidInput("mesh has no elements".into()));
        }
        for (e, cycle) in elements.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(Error::InvalidInput(format!(
                    "element {e} has fewer than 3 vertices"
                )));
            }
            for &v in cycle {
                if v >= nv {
                    return Err(Error::InvalidInput(format!(
                        "element {e} references vertex {v} of {nv}"
                    )));
                }
            }
        }

        let mut barycenters = Vec::with_capacity(elements.len());
        let mut diameters = Vec::with_capacity(elements.len());
        let mut areas = Vec::with_capacity(elements.len());
        for (e, cycle) in elements.iter().enumerate() {
            let poly: Vec<Vec2> = cycle.iter().map(|&v| vertices[v]).collect();
            let area = geom::signed_area(&poly);
            if area <= 0.0 {
                return Err(Error::Geometry(format!(
                    "element {e} is not counter-clockwise (signed area {area:.3e})"
                )));
            }
            if !geom::is_simple(&poly) {
                return Err(Error::Geometry(format!("element {e} is self-intersecting")));
            }
            areas.push(area);
            barycenters.push(geom::centroid(&poly));
            diameters.push(geom::diameter(&poly));
        }

        // Pair directed edges: (a -> b) traversed by the element on its left.
        let mut edge_map: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut element_edges = vec![Vec::new(); elements.len()];
        for (e, cycle) in elements.iter().enumerate() {
            let m = cycle.len();
            for i in 0..m {
                let a = cycle[i];
                let b = cycle[(i + 1) % m];
                if a == b {
                    return Err(Error::Geometry(format!(
                        "element {e} repeats vertex {a} consecutively"
                    )));
                }
                let key = (a.min(b), a.max(b));
                match edge_map.get(&key) {
                    None => {
                        let pa = vertices[a];
                        let pb = vertices[b];
                        let dir = pb - pa;
                        let id = edges.len();
                        edges.push(Edge {
                            vertices: [a, b],
                            elements: [e, BOUNDARY],
                            length: dir.norm(),
                            normal: dir.rot_cw().normalize(),
                        });
                        edge_map.insert(key, id);
                        element_edges[e].push(id);
                    }
                    Some(&id) => {
                        let edge = &mut edges[id];
                        if edge.elements[1] != BOUNDARY {
                            return Err(Error::Geometry(format!(
                                "edge {a}-{b} is shared by more than two elements"
                            )));
                        }
                        if edge.vertices[0] == a {
                            return Err(Error::Geometry(format!(
                                "edge {a}-{b} traversed twice in the same direction; \
                                 inconsistent orientation between elements {} and {e}",
                                edge.elements[0]
                            )));
                        }
                        edge.elements[1] = e;
                        element_edges[e].push(id);
                    }
                }
            }
        }

        let mut neighbors = vec![Vec::new(); elements.len()];
        for edge in &edges {
            if !edge.is_boundary() {
                neighbors[edge.elements[0]].push(edge.elements[1]);
                neighbors[edge.elements[1]].push(edge.elements[0]);
            }
        }

        let h = diameters.iter().cloned().fold(0.0, f64::max);
        let mesh = PolyMesh {
            vertices,
            elements,
            edges,
            element_edges,
            neighbors,
            barycenters,
            diameters,
            areas,
            h,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Vertex coordinates of element `e`, in cycle order.
    pub fn element_polygon(&self, e: usize) -> Vec<Vec2> {
        self.elements[e].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn domain_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        geom::bounding_box(&self.vertices)
    }

    /// Diameter of the bounding box, used as the domain length scale.
    pub fn domain_diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Largest number of edges on any single element.
    pub fn max_edges_per_element(&self) -> usize {
        self.element_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Find the element containing `p`, accepting boundary points.
    pub fn locate(&self, p: Vec2) -> Option<usize> {
        let tol = 1e-12 * self.h.max(1.0);
        for e in 0..self.n_elements() {
            let poly = self.element_polygon(e);
            let (lo, hi) = geom::bounding_box(&poly);
            if p.x < lo.x - tol || p.x > hi.x + tol || p.y < lo.y - tol || p.y > hi.y + tol {
                continue;
            }
            if geom::contains_point(&poly, p, tol) {
                return Some(e);
            }
        }
        None
    }

    /// Check the structural invariants: simple CCW polygons, two-sided edge
    /// adjacency, barycenters inside bounding boxes, unit normals, edge
    /// lengths bounded by element diameters.
    pub fn validate(&self) -> Result<()> {
        for (e, cycle) in self.elements.iter().enumerate() {
            let poly: Vec<Vec2> = cycle.iter().map(|&v| self.vertices[v]).collect();
            let (lo, hi) = geom::bounding_box(&poly);
            let b = self.barycenters[e];
            if b.x < lo.x || b.x > hi.x || b.y < lo.y || b.y > hi.y {
                return Err(Error::Geometry(format!(
                    "barycenter of element {e} lies outside its bounding box"
                )));
            }
        }
        for (id, edge) in self.edges.iter().enumerate() {
            if (edge.normal.norm() - 1.0).abs() > 1e-14 {
                return Err(Error::Geometry(format!("edge {id} normal is not unit")));
            }
            for side in 0..2 {
                let el = edge.elements[side];
                if el == BOUNDARY {
                    continue;
                }
                if !self.element_edges[el].contains(&id) {
                    return Err(Error::Geometry(format!(
                        "edge {id} lists element {el} but is missing from its cycle"
                    )));
                }
                if edge.length > self.diameters[el] * (1.0 + 1e-12) {
                    return Err(Error::Geometry(format!(
                        "edge {id} is longer than the diameter of element {el}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-element triangulations used for quadrature on polygons.
#[derive(Debug, Clone)]
pub struct SubTriangulation {
    /// Triangles covering each element, stored by coordinates (fan centroids
    /// are not mesh vertices).
    pub triangles: Vec<Vec<[Vec2; 3]>>,
}

/// Decompose every element into triangles: a centroid fan when the element is
/// star-shaped about its centroid (always true for convex cells), ear
/// clipping otherwise.
pub fn subtriangulate(mesh: &PolyMesh) -> Result<SubTriangulation> {
    let mut triangles = Vec::with_capacity(mesh.n_elements());
    for e in 0..mesh.n_elements() {
        let poly = mesh.element_polygon(e);
        let tris = if poly.len() == 3 {
            vec![[poly[0], poly[1], poly[2]]]
        } else {
            let c = geom::centroid(&poly);
            if geom::star_shaped_about(&poly, c) {
                let n = poly.len();
                (0..n).map(|i| [c, poly[i], poly[(i + 1) % n]]).collect()
            } else {
                geom::ear_clip(&poly).ok_or_else(|| {
                    Error::Geometry(format!("cannot triangulate element {e}"))
                })?
            }
        };
        let sum: f64 = tris.iter().map(|t| geom::signed_area(&t[..])).sum();
        let rel = (sum - mesh.areas[e]).abs() / mesh.areas[e];
        if rel > 1e-12 {
            return Err(Error::Geometry(format!(
                "sub-triangulation of element {e} covers {sum:.17} of area {:.17}",
                mesh.areas[e]
            )));
        }
        triangles.push(tris);
    }
    Ok(SubTriangulation { triangles })
}

/// Uniform triangulation of the unit square: `n x n` cells, each split along
/// the diagonal, `2 n^2` right triangles with `h = sqrt(2) / n`.
pub fn triangulate_unit_square(n: usize) -> Result<PolyMesh> {
    if n == 0 {
        return Err(Error::InvalidInput("subdivision count must be >= 1".into()));
    }
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Vec2::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut elements = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = vid(i, j);
            let v10 = vid(i + 1, j);
            let v01 = vid(i, j + 1);
            let v11 = vid(i + 1, j + 1);
            elements.push(vec![v00, v10, v11]);
            elements.push(vec![v00, v11, v01]);
        }
    }
    PolyMesh::from_cells(vertices, elements)
}
