//! Clipped Voronoi meshes of the unit square.
//!
//! Each cell is cut from the unit square by half-plane clipping against the
//! perpendicular bisectors of nearby seeds. A uniform background grid limits
//! the candidate set: once the nearest unseen seed is provably farther than
//! twice the cell's current vertex radius, no further bisector can cut the
//! cell. Optional Lloyd iterations move every seed to its cell centroid;
//! around a hundred iterations produce the near-regular polygonal meshes used
//! by the convergence studies, while zero to two keep the general Voronoi
//! look.

use super::PolyMesh;
use crate::geom::{self, Vec2};
use crate::{Error, Result};
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED_DEDUP_TOL: f64 = 1e-12;
const VERTEX_SNAP_TOL: f64 = 1e-9;

/// Voronoi mesh from random uniform seeds.
pub fn voronoi_mesh(n_cells: usize, lloyd_iters: usize, rng_seed: u64) -> Result<PolyMesh> {
    if n_cells < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 cells, got {n_cells}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let seeds: Vec<Vec2> = (0..n_cells)
        .map(|_| Vec2::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    voronoi_mesh_from_seeds(&seeds, lloyd_iters)
}

/// Voronoi mesh from explicit seed points in the closed unit square.
pub fn voronoi_mesh_from_seeds(seeds: &[Vec2], lloyd_iters: usize) -> Result<PolyMesh> {
    if seeds.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 seeds, got {}",
            seeds.len()
        )));
    }
    for (i, s) in seeds.iter().enumerate() {
        if !(s.is_finite() && (0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y)) {
            return Err(Error::InvalidInput(format!(
                "seed {i} ({}, {}) is outside the unit square",
                s.x, s.y
            )));
        }
    }
    check_duplicate_seeds(seeds)?;

    let mut seeds = seeds.to_vec();
    for _ in 0..lloyd_iters {
        let cells = all_cells(&seeds)?;
        for (s, cell) in seeds.iter_mut().zip(&cells) {
            *s = geom::centroid(cell);
        }
    }
    let cells = all_cells(&seeds)?;
    assemble_mesh(&cells)
}

fn check_duplicate_seeds(seeds: &[Vec2]) -> Result<()> {
    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| {
        (seeds[a].x, seeds[a].y)
            .partial_cmp(&(seeds[b].x, seeds[b].y))
            .unwrap()
    });
    for w in 0..order.len() {
        for v in (w + 1)..order.len() {
            if seeds[order[v]].x - seeds[order[w]].x > SEED_DEDUP_TOL {
                break;
            }
            if seeds[order[w]].dist(seeds[order[v]]) < SEED_DEDUP_TOL {
                return Err(Error::InvalidInput(format!(
                    "seeds {} and {} coincide within {SEED_DEDUP_TOL:e}",
                    order[w].min(order[v]),
                    order[w].max(order[v])
                )));
            }
        }
    }
    Ok(())
}

/// Background grid over the unit square for nearest-seed candidate queries.
struct SeedGrid {
    cells: Vec<Vec<usize>>,
    n: usize,
    size: f64,
}

impl SeedGrid {
    fn new(seeds: &[Vec2]) -> Self {
        let n = (seeds.len() as f64).sqrt().ceil() as usize;
        let n = n.max(1);
        let size = 1.0 / n as f64;
        let mut cells = vec![Vec::new(); n * n];
        for (i, s) in seeds.iter().enumerate() {
            cells[Self::index_of(n, s)].push(i);
        }
        SeedGrid { cells, n, size }
    }

    fn index_of(n: usize, p: &Vec2) -> usize {
        let ix = ((p.x * n as f64) as usize).min(n - 1);
        let iy = ((p.y * n as f64) as usize).min(n - 1);
        iy * n + ix
    }

    /// Seed indices in the square ring at Chebyshev grid distance `ring`
    /// around the cell containing `p`.
    fn ring(&self, p: &Vec2, ring: usize, out: &mut Vec<usize>) {
        out.clear();
        let n = self.n as isize;
        let cx = (((p.x * n as f64) as isize).min(n - 1)).max(0);
        let cy = (((p.y * n as f64) as isize).min(n - 1)).max(0);
        let r = ring as isize;
        let mut push = |x: isize, y: isize| {
            if (0..n).contains(&x) && (0..n).contains(&y) {
                out.extend_from_slice(&self.cells[(y * n + x) as usize]);
            }
        };
        if r == 0 {
            push(cx, cy);
            return;
        }
        for x in (cx - r)..=(cx + r) {
            push(x, cy - r);
            push(x, cy + r);
        }
        for y in (cy - r + 1)..=(cy + r - 1) {
            push(cx - r, y);
            push(cx + r, y);
        }
    }
}

fn all_cells(seeds: &[Vec2]) -> Result<Vec<Vec<Vec2>>> {
    let grid = SeedGrid::new(seeds);
    (0..seeds.len()).map(|i| clip_cell(seeds, &grid, i)).collect()
}

/// Compute the Voronoi cell of `seeds[i]` clipped to the unit square.
fn clip_cell(seeds: &[Vec2], grid: &SeedGrid, i: usize) -> Result<Vec<Vec2>> {
    let si = seeds[i];
    let mut poly = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    let mut r_max = poly.iter().map(|v| v.dist(si)).fold(0.0, f64::max);
    let max_ring = 2 * grid.n + 2;
    let mut ring_buf = Vec::new();
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    for ring in 0..=max_ring {
        grid.ring(&si, ring, &mut ring_buf);
        candidates.extend(
            ring_buf
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (si.dist(seeds[j]), j)),
        );
        candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // every unseen seed is farther than (ring - 1) grid cells away
        let seen_bound = ring.saturating_sub(1) as f64 * grid.size;
        let mut rest = Vec::new();
        for &(d, j) in &candidates {
            if d > seen_bound && ring < max_ring {
                rest.push((d, j));
                continue;
            }
            if d <= 2.0 * r_max {
                clip_halfplane(&mut poly, si, seeds[j]);
                if poly.len() < 3 {
                    return Err(Error::Geometry(format!(
                        "Voronoi cell of seed {i} degenerated during clipping"
                    )));
                }
                r_max = poly.iter().map(|v| v.dist(si)).fold(0.0, f64::max);
            }
        }
        candidates = rest;
        if seen_bound > 2.0 * r_max || (ring == max_ring && candidates.is_empty()) {
            break;
        }
    }
    Ok(poly)
}

/// Sutherland-Hodgman clip of `poly` against the half-plane of points closer
/// to `keep` than to `cut`.
fn clip_halfplane(poly: &mut Vec<Vec2>, keep: Vec2, cut: Vec2) {
    let n = cut - keep;
    let offset = n.dot((keep + cut) * 0.5);
    let f = |p: Vec2| n.dot(p) - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
            if fq > 0.0 {
                out.push(p + (q - p) * (fp / (fp - fq)));
            }
        } else if fq <= 0.0 {
            out.push(p + (q - p) * (fp / (fp - fq)));
        }
    }
    *poly = out;
}

/// Snap shared vertices of per-cell polygons together and build the mesh.
fn assemble_mesh(cells: &[Vec<Vec2>]) -> Result<PolyMesh> {
    let mut vertices: Vec<Vec2> = Vec::new();
    let mut lookup: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    let mut snap = |p: Vec2| -> usize {
        let kx = (p.x / VERTEX_SNAP_TOL).round() as i64;
        let ky = (p.y / VERTEX_SNAP_TOL).round() as i64;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = lookup.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        if vertices[id].dist(p) <= VERTEX_SNAP_TOL {
                            return id;
                        }
                    }
                }
            }
        }
        let id = vertices.len();
        vertices.push(p);
        lookup.entry((kx, ky)).or_default().push(id);
        id
    };

    let mut elements = Vec::with_capacity(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        let mut cycle: Vec<usize> = cell.iter().map(|&p| snap(p)).collect();
        cycle.dedup();
        while cycle.len() > 1 && cycle.first() == cycle.last() {
            cycle.pop();
        }
        if cycle.len() < 3 {
            return Err(Error::Geometry(format!(
                "Voronoi cell {i} collapsed below 3 vertices after snapping"
            )));
        }
        elements.push(cycle);
    }

    let mesh = PolyMesh::from_cells(vertices, elements)?;

    // conformity guard: a boundary edge of a clipped unit-square Voronoi mesh
    // must lie on the square itself
    for edge in &mesh.edges {
        if edge.is_boundary() {
            let m = edge.midpoint(&mesh);
            let on_square = m.x.abs() < 1e-9
                || (m.x - 1.0).abs() < 1e-9
                || m.y.abs() < 1e-9
                || (m.y - 1.0).abs() < 1e-9;
            if !on_square {
                return Err(Error::Geometry(format!(
                    "nonconforming cell interface near ({}, {})",
                    m.x, m.y
                )));
            }
        }
    }
    Ok(mesh)
}
