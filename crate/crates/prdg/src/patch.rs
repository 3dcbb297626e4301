//! Element patches: agglomerations of face-adjacent elements around an owner.
//!
//! Starting from the owner, rings of Von Neumann (edge) neighbours are added
//! until at least `m` candidates exist; the `m` candidates closest to the
//! owner's barycenter are kept, ties broken by ascending element id. Each
//! non-owner member carries an inverse-squared-distance weight, normalized to
//! sum to one.

use crate::geom::Vec2;
use crate::mesh::PolyMesh;
use crate::{Error, Result};

/// Mesh families with tabulated default patch sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFamily {
    Triangulation,
    Polygonal,
    Voronoi,
}

/// Reference patch sizes per reconstruction order, when tabulated.
pub fn default_patch_size(family: MeshFamily, k: usize) -> Option<usize> {
    let m = match (family, k) {
        (MeshFamily::Triangulation, 1) => 4,
        (MeshFamily::Triangulation, 2) => 7,
        (MeshFamily::Triangulation, 3) => 11,
        (MeshFamily::Polygonal, 1) => 5,
        (MeshFamily::Polygonal, 2) => 9,
        (MeshFamily::Polygonal, 3) => 15,
        (MeshFamily::Voronoi, 1) => 7,
        (MeshFamily::Voronoi, 2) => 12,
        (MeshFamily::Voronoi, 3) => 19,
        _ => return None,
    };
    Some(m)
}

/// The patch of one element.
#[derive(Debug, Clone)]
pub struct ElementPatch {
    pub owner: usize,
    /// Member element ids; `members[0] == owner`.
    pub members: Vec<usize>,
    /// Barycenter samples, aligned with `members`.
    pub barycenters: Vec<Vec2>,
    /// Inverse-squared-distance weights for `members[1..]`; sums to one.
    pub weights: Vec<f64>,
    /// Number of ring expansions performed while gathering candidates.
    pub rings_used: usize,
}

impl ElementPatch {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn anchor(&self) -> Vec2 {
        self.barycenters[0]
    }
}

/// Grow adjacency rings around `owner` until at least `target` elements have
/// been collected (or the mesh is exhausted). Returns the candidate ids and
/// the number of rings grown.
fn grow_rings(mesh: &PolyMesh, owner: usize, target: usize) -> Result<(Vec<usize>, usize)> {
    let n = mesh.n_elements();
    let mut in_patch = vec![false; n];
    in_patch[owner] = true;
    let mut all = vec![owner];
    let mut frontier = vec![owner];
    let mut rings = 0usize;
    while all.len() < target {
        if frontier.is_empty() {
            return Err(Error::InvalidInput(format!(
                "patch of element {owner} cannot reach {target} elements; mesh exhausted at {}",
                all.len()
            )));
        }
        let mut next = Vec::new();
        for &e in &frontier {
            for &nb in &mesh.neighbors[e] {
                if !in_patch[nb] {
                    in_patch[nb] = true;
                    next.push(nb);
                }
            }
        }
        all.extend_from_slice(&next);
        frontier = next;
        rings += 1;
    }
    Ok((all, rings))
}

/// Build the patch of `owner` with exactly `m` members (Von Neumann rings,
/// then distance selection).
pub fn build_patch(mesh: &PolyMesh, owner: usize, m: usize) -> Result<ElementPatch> {
    if m == 0 {
        return Err(Error::InvalidInput("patch size must be positive".into()));
    }
    if m > mesh.n_elements() {
        return Err(Error::InvalidInput(format!(
            "patch size {m} exceeds the {} elements of the mesh",
            mesh.n_elements()
        )));
    }
    let (candidates, rings_used) = grow_rings(mesh, owner, m)?;
    let selected = select_closest(mesh, owner, candidates, m);
    finish_patch(mesh, owner, selected, rings_used)
}

/// Rebuild a patch with one more adjacency ring, keeping every candidate.
/// Used when the unisolvence check rejects the current patch.
pub fn expand_patch(mesh: &PolyMesh, patch: &ElementPatch) -> Result<ElementPatch> {
    let owner = patch.owner;
    let mut target = patch.len() + 1; // force at least one more ring of growth
    let (mut candidates, mut rings) = grow_rings(mesh, owner, target)?;
    while rings <= patch.rings_used && candidates.len() < mesh.n_elements() {
        target = candidates.len() + 1;
        let (c, r) = grow_rings(mesh, owner, target)?;
        candidates = c;
        rings = r;
    }
    let m = candidates.len();
    let selected = select_closest(mesh, owner, candidates, m);
    finish_patch(mesh, owner, selected, rings)
}

fn select_closest(mesh: &PolyMesh, owner: usize, candidates: Vec<usize>, m: usize) -> Vec<usize> {
    let a0 = mesh.barycenters[owner];
    let mut by_dist: Vec<(f64, usize)> = candidates
        .into_iter()
        .map(|e| (a0.dist(mesh.barycenters[e]), e))
        .collect();
    // distance sort with ascending-id tie break; the owner sits at distance 0
    by_dist.sort_by(|a, b| a.partial_cmp(b).unwrap());
    by_dist.truncate(m);
    by_dist.into_iter().map(|(_, e)| e).collect()
}

fn finish_patch(
    mesh: &PolyMesh,
    owner: usize,
    members: Vec<usize>,
    rings_used: usize,
) -> Result<ElementPatch> {
    debug_assert_eq!(members[0], owner);
    let barycenters: Vec<Vec2> = members.iter().map(|&e| mesh.barycenters[e]).collect();
    let weights = compute_weights(barycenters[0], &barycenters[1..])?;
    Ok(ElementPatch {
        owner,
        members,
        barycenters,
        weights,
        rings_used,
    })
}

/// Normalized inverse-squared-distance weights of the sample points around
/// `anchor`: `w_j = (1/|a_0 - a_j|^2) / sum_i (1/|a_0 - a_i|^2)`.
pub fn compute_weights(anchor: Vec2, samples: &[Vec2]) -> Result<Vec<f64>> {
    let mut inv: Vec<f64> = Vec::with_capacity(samples.len());
    for (j, s) in samples.iter().enumerate() {
        let d2 = (anchor - *s).norm_squared();
        if d2 == 0.0 {
            return Err(Error::Geometry(format!(
                "sample barycenter {j} coincides with the patch anchor"
            )));
        }
        inv.push(1.0 / d2);
    }
    let total: f64 = inv.iter().sum();
    Ok(inv.into_iter().map(|w| w / total).collect())
}

/// Build patches for every element of the mesh with a common size `m`.
pub fn build_all_patches(mesh: &PolyMesh, m: usize) -> Result<Vec<ElementPatch>> {
    (0..mesh.n_elements()).map(|e| build_patch(mesh, e, m)).collect()
}
