//! Constrained weighted least-squares reconstruction.
//!
//! For an element `K` with patch `S(K) = {E_0 = K, E_1, ..., E_{M-1}}` the
//! operator maps barycenter values `(v_0, ..., v_{M-1})` to the degree-`k`
//! polynomial that matches `v_0` at the barycenter of `K` exactly and fits the
//! remaining values in a weighted least-squares sense. Substituting the
//! constraint reduces the problem to an unconstrained fit in the non-constant
//! scaled monomials; that reduced system is solved through a singular value
//! decomposition of the weighted design matrix, never through its normal
//! equations. The same factorization yields the smallest singular value used
//! by the unisolvence check.
//!
//! Writing the solution map column by column gives the local shape functions
//! `lambda_j` with `P_K^k v = sum_j v_j lambda_j`; stitched over all elements
//! they form the global one-unknown-per-element basis `phi_K`.

use crate::geom::Vec2;
use crate::mesh::PolyMesh;
use crate::patch::{self, ElementPatch};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold for accepting a patch as unisolvent.
pub const A4_RTOL: f64 = 1e-8;

/// Dimension of the polynomial space of total degree `k` in two variables.
pub fn n_poly(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Graded lexicographic exponent order: (0,0), (1,0), (0,1), (2,0), (1,1), ...
pub fn monomial_exponents(k: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(n_poly(k));
    for deg in 0..=k as u32 {
        for j in 0..=deg {
            out.push((deg - j, j));
        }
    }
    out
}

/// Monomials centered at an element barycenter and scaled by its diameter.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub owner: usize,
    pub anchor: Vec2,
    pub scale: f64,
    pub degree: usize,
    pub exponents: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn new(owner: usize, anchor: Vec2, scale: f64, degree: usize) -> Self {
        MonomialBasis {
            owner,
            anchor,
            scale,
            degree,
            exponents: monomial_exponents(degree),
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Value of the `idx`-th scaled monomial at `p`.
    pub fn eval(&self, idx: usize, p: Vec2) -> f64 {
        let u = (p.x - self.anchor.x) / self.scale;
        let v = (p.y - self.anchor.y) / self.scale;
        let (a, b) = self.exponents[idx];
        u.powi(a as i32) * v.powi(b as i32)
    }

    /// Values of all scaled monomials at `p`.
    pub fn eval_all(&self, p: Vec2, out: &mut [f64]) {
        let u = (p.x - self.anchor.x) / self.scale;
        let v = (p.y - self.anchor.y) / self.scale;
        for (o, &(a, b)) in out.iter_mut().zip(&self.exponents) {
            *o = u.powi(a as i32) * v.powi(b as i32);
        }
    }

    /// Gradients of all scaled monomials at `p`.
    pub fn grad_all(&self, p: Vec2, out: &mut [Vec2]) {
        let u = (p.x - self.anchor.x) / self.scale;
        let v = (p.y - self.anchor.y) / self.scale;
        for (o, &(a, b)) in out.iter_mut().zip(&self.exponents) {
            let gx = if a == 0 {
                0.0
            } else {
                a as f64 / self.scale * u.powi(a as i32 - 1) * v.powi(b as i32)
            };
            let gy = if b == 0 {
                0.0
            } else {
                b as f64 / self.scale * u.powi(a as i32) * v.powi(b as i32 - 1)
            };
            *o = Vec2::new(gx, gy);
        }
    }

    /// Evaluate a polynomial given by its coefficient vector.
    pub fn eval_poly(&self, coeffs: &[f64], p: Vec2) -> f64 {
        let u = (p.x - self.anchor.x) / self.scale;
        let v = (p.y - self.anchor.y) / self.scale;
        self.exponents
            .iter()
            .zip(coeffs)
            .map(|(&(a, b), c)| c * u.powi(a as i32) * v.powi(b as i32))
            .sum()
    }

    /// Gradient of a polynomial given by its coefficient vector.
    pub fn grad_poly(&self, coeffs: &[f64], p: Vec2) -> Vec2 {
        let u = (p.x - self.anchor.x) / self.scale;
        let v = (p.y - self.anchor.y) / self.scale;
        let mut g = Vec2::ZERO;
        for (&(a, b), c) in self.exponents.iter().zip(coeffs) {
            if a > 0 {
                g.x += c * a as f64 / self.scale * u.powi(a as i32 - 1) * v.powi(b as i32);
            }
            if b > 0 {
                g.y += c * b as f64 / self.scale * u.powi(a as i32) * v.powi(b as i32 - 1);
            }
        }
        g
    }
}

/// Weighted design matrix of the reduced (constraint-substituted) fit: rows
/// are `sqrt(w_j) * m_i(a_j)` over the non-constant monomials.
fn weighted_design(mesh: &PolyMesh, p: &ElementPatch, k: usize) -> (MonomialBasis, DMatrix<f64>) {
    let basis = MonomialBasis::new(p.owner, p.anchor(), mesh.diameters[p.owner], k);
    let nk = basis.len();
    let rows = p.len() - 1;
    let mut a = DMatrix::zeros(rows, nk - 1);
    let mut mono = vec![0.0; nk];
    for j in 0..rows {
        basis.eval_all(p.barycenters[j + 1], &mut mono);
        let sw = p.weights[j].sqrt();
        for i in 1..nk {
            a[(j, i - 1)] = sw * mono[i];
        }
    }
    (basis, a)
}

/// Outcome of the unisolvence (smallest singular value) check.
#[derive(Debug, Clone, Copy)]
pub struct A4Report {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub valid: bool,
}

/// Smallest/largest singular values of the weighted design matrix and the
/// verdict against [`A4_RTOL`]. A patch with fewer than `n_poly(k)` members
/// can never determine the polynomial and reports `sigma_min = 0`.
pub fn check_a4(mesh: &PolyMesh, patch: &ElementPatch, k: usize) -> A4Report {
    if k == 0 {
        // the constraint alone determines a constant
        return A4Report { sigma_min: 1.0, sigma_max: 1.0, valid: true };
    }
    let nk = n_poly(k);
    let (_, a) = weighted_design(mesh, patch, k);
    if patch.len() < nk {
        let sigma_max = if a.nrows() > 0 {
            a.singular_values().iter().cloned().fold(0.0, f64::max)
        } else {
            0.0
        };
        return A4Report { sigma_min: 0.0, sigma_max, valid: false };
    }
    let sv = a.singular_values();
    let sigma_min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    A4Report {
        sigma_min,
        sigma_max,
        valid: sigma_min > A4_RTOL * sigma_max && sigma_max > 0.0,
    }
}

/// Reconstruction data of a single element: the coefficient map from patch
/// values to polynomial coefficients, stored column-wise as the local shape
/// functions `lambda_j`.
#[derive(Debug, Clone)]
pub struct ElementReconstruction {
    pub monomials: MonomialBasis,
    pub patch: ElementPatch,
    /// `n_k x M` matrix; column `j` holds the coefficients of `lambda_j`.
    pub lambda: DMatrix<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl ElementReconstruction {
    /// Coefficients of the reconstructed polynomial for the given patch
    /// values (length `M`).
    pub fn coefficients(&self, values: &[f64]) -> DVector<f64> {
        debug_assert_eq!(values.len(), self.patch.len());
        &self.lambda * DVector::from_column_slice(values)
    }

    /// Coefficients of `lambda_j`.
    pub fn shape_function(&self, j: usize) -> Vec<f64> {
        self.lambda.column(j).iter().cloned().collect()
    }
}

fn build_element(
    mesh: &PolyMesh,
    patch: ElementPatch,
    k: usize,
) -> Result<Option<ElementReconstruction>> {
    let nk = n_poly(k);
    if patch.len() < nk {
        return Ok(None);
    }
    let (basis, a) = weighted_design(mesh, &patch, k);
    let m = patch.len();

    if k == 0 {
        let mut lambda = DMatrix::zeros(1, m);
        lambda[(0, 0)] = 1.0;
        return Ok(Some(ElementReconstruction {
            monomials: basis,
            patch,
            lambda,
            sigma_min: 1.0,
            sigma_max: 1.0,
        }));
    }

    let svd = a.clone().svd(true, true);
    let sigma_min = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if !(sigma_min > A4_RTOL * sigma_max && sigma_max > 0.0) {
        return Ok(None);
    }

    // G = pinv(A) * W maps raw differences (v_j - v_0) to coefficients
    let pinv = svd
        .pseudo_inverse(0.0)
        .map_err(|e| Error::Solver(format!("pseudo-inverse failed: {e}")))?;
    let mut g = pinv; // (nk-1) x (M-1)
    for j in 0..m - 1 {
        let sw = patch.weights[j].sqrt();
        for i in 0..nk - 1 {
            g[(i, j)] *= sw;
        }
    }

    let mut lambda = DMatrix::zeros(nk, m);
    lambda[(0, 0)] = 1.0;
    for i in 1..nk {
        let mut row_sum = 0.0;
        for j in 1..m {
            let gij = g[(i - 1, j - 1)];
            lambda[(i, j)] = gij;
            row_sum += gij;
        }
        lambda[(i, 0)] = -row_sum;
    }

    Ok(Some(ElementReconstruction {
        monomials: basis,
        patch,
        lambda,
        sigma_min,
        sigma_max,
    }))
}

/// Solve the constrained weighted fit for explicit values; returns the full
/// coefficient vector with `beta_0 = values[0]`.
pub fn fit_local(
    mesh: &PolyMesh,
    patch: &ElementPatch,
    k: usize,
    values: &[f64],
) -> Result<DVector<f64>> {
    if values.len() != patch.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} patch values, got {}",
            patch.len(),
            values.len()
        )));
    }
    let nk = n_poly(k);
    if k == 0 {
        return Ok(DVector::from_element(1, values[0]));
    }
    let report = check_a4(mesh, patch, k);
    if !report.valid {
        return Err(Error::Unisolvence {
            element: patch.owner,
            sigma_min: report.sigma_min,
            sigma_max: report.sigma_max,
        });
    }
    let (_, a) = weighted_design(mesh, patch, k);
    let rhs = DVector::from_fn(patch.len() - 1, |ج, _| {
        patch.weights[ج].sqrt() * (values[ج + 1] - values[0])
    });
    let svd = a.svd(true, true);
    let beta = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Solver(format!("least-squares solve failed: {e}")))?;
    let mut full = DVector::zeros(nk);
    full[0] = values[0];
    for i in 1..nk {
        full[i] = beta[i - 1];
    }
    Ok(full)
}

/// Per-element reconstructions for the whole mesh.
#[derive(Debug, Clone)]
pub struct ReconstructionBasis {
    pub k: usize,
    pub elements: Vec<ElementReconstruction>,
}

/// Build the reconstruction on every patch. Patches failing the unisolvence
/// check are expanded ring by ring until they pass or the mesh is exhausted.
pub fn build_reconstruction_basis(
    mesh: &PolyMesh,
    patches: Vec<ElementPatch>,
    k: usize,
) -> Result<ReconstructionBasis> {
    let mut elements = Vec::with_capacity(patches.len());
    for mut p in patches {
        loop {
            match build_element(mesh, p.clone(), k)? {
                Some(el) => {
                    elements.push(el);
                    break;
                }
                None => {
                    if p.len() >= mesh.n_elements() {
                        let report = check_a4(mesh, &p, k);
                        return Err(Error::Unisolvence {
                            element: p.owner,
                            sigma_min: report.sigma_min,
                            sigma_max: report.sigma_max,
                        });
                    }
                    p = patch::expand_patch(mesh, &p)?;
                }
            }
        }
    }
    Ok(ReconstructionBasis { k, elements })
}

/// The global basis: per-element reconstructions plus, for every degree of
/// freedom `i`, the list of elements whose patch contains `i` (the support of
/// `phi_i`).
#[derive(Debug, Clone)]
pub struct GlobalBasis {
    pub k: usize,
    pub elements: Vec<ElementReconstruction>,
    pub supports: Vec<Vec<usize>>,
    /// `member_pos[e]` maps a dof id to its position inside `S(K_e)`.
    member_pos: Vec<std::collections::HashMap<usize, usize>>,
}

pub fn build_global_basis(mesh: &PolyMesh, recon: ReconstructionBasis) -> GlobalBasis {
    let n = mesh.n_elements();
    let mut supports = vec![Vec::new(); n];
    let mut member_pos = Vec::with_capacity(n);
    for (e, el) in recon.elements.iter().enumerate() {
        let mut map = std::collections::HashMap::with_capacity(el.patch.len());
        for (pos, &dof) in el.patch.members.iter().enumerate() {
            supports[dof].push(e);
            map.insert(dof, pos);
        }
        member_pos.push(map);
    }
    for s in &mut supports {
        s.sort_unstable();
    }
    GlobalBasis {
        k: recon.k,
        elements: recon.elements,
        supports,
        member_pos,
    }
}

impl GlobalBasis {
    pub fn n_dofs(&self) -> usize {
        self.elements.len()
    }

    /// Position of dof `i` inside the patch of element `e`, if present.
    pub fn position_in_patch(&self, dof: usize, element: usize) -> Option<usize> {
        self.member_pos[element].get(&dof).copied()
    }

    /// Coefficients of `phi_dof` restricted to `element` (zero polynomial if
    /// the dof is not supported there).
    pub fn restriction(&self, dof: usize, element: usize) -> Option<Vec<f64>> {
        self.position_in_patch(dof, element)
            .map(|pos| self.elements[element].shape_function(pos))
    }

    /// Value of `phi_dof` at `p`, seen from `element`.
    pub fn eval_dof(&self, dof: usize, element: usize, p: Vec2) -> f64 {
        match self.position_in_patch(dof, element) {
            None => 0.0,
            Some(pos) => {
                let el = &self.elements[element];
                let mut mono = vec![0.0; el.monomials.len()];
                el.monomials.eval_all(p, &mut mono);
                el.lambda.column(pos).iter().zip(&mono).map(|(c, m)| c * m).sum()
            }
        }
    }

    /// Local coefficients on `element` of the field with the given global dof
    /// values.
    pub fn element_coefficients(&self, element: usize, dof_values: &[f64]) -> DVector<f64> {
        let el = &self.elements[element];
        let local: Vec<f64> = el.patch.members.iter().map(|&m| dof_values[m]).collect();
        el.coefficients(&local)
    }

    /// Apply the reconstruction operator to a point-sampled field: sample all
    /// barycenters, then build the local polynomial on every element.
    pub fn apply_pk(
        &self,
        mesh: &PolyMesh,
        sampler: impl Fn(Vec2) -> f64,
    ) -> Vec<DVector<f64>> {
        let samples: Vec<f64> = mesh.barycenters.iter().map(|&b| sampler(b)).collect();
        (0..self.n_dofs())
            .map(|e| self.element_coefficients(e, &samples))
            .collect()
    }
}

/// Write the per-element shape-function coefficient tables as CSV:
/// `element,member,c_0,...,c_{n_k-1}`.
pub fn dump_lambda_csv(basis: &GlobalBasis, path: impl AsRef<std::path::Path>) -> Result<()> {
    use std::io::Write;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let nk = n_poly(basis.k);
    write!(f, "element,member")?;
    for i in 0..nk {
        write!(f, ",c{i}")?;
    }
    writeln!(f)?;
    for (e, el) in basis.elements.iter().enumerate() {
        for (j, &member) in el.patch.members.iter().enumerate() {
            write!(f, "{e},{member}")?;
            for i in 0..nk {
                write!(f, ",{:.16e}", el.lambda[(i, j)])?;
            }
            writeln!(f)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{triangulate_unit_square, voronoi_mesh};
    use crate::patch::build_all_patches;
    use rand::RngExt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_poly(k: usize, rng: &mut ChaCha8Rng) -> impl Fn(Vec2) -> f64 {
        let coeffs: Vec<f64> = monomial_exponents(k)
            .iter()
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let exps = monomial_exponents(k);
        move |p: Vec2| {
            exps.iter()
                .zip(&coeffs)
                .map(|(&(a, b), c)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
                .sum()
        }
    }

    #[test]
    fn exponent_order_is_graded_lex() {
        assert_eq!(
            monomial_exponents(2),
            vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        );
        assert_eq!(n_poly(3), 10);
    }

    #[test]
    fn scaled_monomials_vanish_at_anchor() {
        let b = MonomialBasis::new(0, Vec2::new(0.3, 0.4), 0.25, 3);
        let mut vals = vec![0.0; b.len()];
        b.eval_all(b.anchor, &mut vals);
        assert_eq!(vals[0], 1.0);
        assert!(vals[1..].iter().all(|&v| v == 0.0));
        // unit offset along x scaled by h_K gives exactly 1 for m_(1,0)
        let p = b.anchor + Vec2::new(b.scale, 0.0);
        assert_eq!(b.eval(1, p), 1.0);
    }

    #[test]
    fn constants_reconstruct_exactly() {
        let mesh = triangulate_unit_square(3).unwrap();
        let patches = build_all_patches(&mesh, 7).unwrap();
        let values = vec![4.25; patches[5].len()];
        let beta = fit_local(&mesh, &patches[5], 2, &values).unwrap();
        assert_eq!(beta[0], 4.25);
        assert!(beta.iter().skip(1).all(|&c| c.abs() < 1e-12));
    }

    #[test]
    fn polynomials_up_to_degree_k_are_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mesh = voronoi_mesh(60, 40, 4).unwrap();
        for k in 1..=3usize {
            let m = crate::patch::default_patch_size(crate::patch::MeshFamily::Voronoi, k)
                .unwrap();
            let patches = build_all_patches(&mesh, m).unwrap();
            let p = random_poly(k, &mut rng);
            let patch = &patches[17];
            let values: Vec<f64> = patch.barycenters.iter().map(|&b| p(b)).collect();
            let beta = fit_local(&mesh, patch, k, &values).unwrap();
            let basis = MonomialBasis::new(
                patch.owner,
                patch.anchor(),
                mesh.diameters[patch.owner],
                k,
            );
            let scale = 1.0 + values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            for _ in 0..50 {
                let q = Vec2::new(rng.random::<f64>(), rng.random::<f64>());
                let got = basis.eval_poly(beta.as_slice(), q);
                assert!(
                    (got - p(q)).abs() <= 1e-10 * scale,
                    "k={k}: {got} vs {}",
                    p(q)
                );
            }
        }
    }

    /// Normal-equation oracle: beta = (A^T A)^{-1} A^T W (v - v_0).
    #[test]
    fn fit_matches_normal_equation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mesh = voronoi_mesh(50, 30, 9).unwrap();
        let patches = build_all_patches(&mesh, 12).unwrap();
        for patch in patches.iter().take(10) {
            let k = 2;
            let values: Vec<f64> = (0..patch.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
            let beta = fit_local(&mesh, patch, k, &values).unwrap();

            let (_, a) = super::weighted_design(&mesh, patch, k);
            let rhs = DVector::from_fn(patch.len() - 1, |j, _| {
                patch.weights[j].sqrt() * (values[j + 1] - values[0])
            });
            let ata = a.transpose() * &a;
            let atb = a.transpose() * rhs;
            let oracle = ata.try_inverse().unwrap() * atb;
            for i in 1..beta.len() {
                assert!(
                    (beta[i] - oracle[i - 1]).abs() < 1e-8,
                    "{} vs {}",
                    beta[i],
                    oracle[i - 1]
                );
            }
        }
    }

    #[test]
    fn lambda_matches_unit_vector_fits() {
        let mesh = triangulate_unit_square(4).unwrap();
        let patches = build_all_patches(&mesh, 7).unwrap();
        let recon = build_reconstruction_basis(&mesh, patches.clone(), 2).unwrap();
        let el = &recon.elements[9];
        for j in 0..el.patch.len() {
            let mut unit = vec![0.0; el.patch.len()];
            unit[j] = 1.0;
            let beta = fit_local(&mesh, &el.patch, 2, &unit).unwrap();
            for i in 0..beta.len() {
                assert!((beta[i] - el.lambda[(i, j)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shape_functions_partition_unity_and_interpolate_anchor() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let mesh = voronoi_mesh(40, 80, 13).unwrap();
        let patches = build_all_patches(&mesh, 9).unwrap();
        let recon = build_reconstruction_basis(&mesh, patches, 2).unwrap();
        for el in &recon.elements {
            // sum over members of lambda_j == 1 at random points
            for _ in 0..20 {
                let q = el.patch.anchor()
                    + Vec2::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
                let total: f64 = (0..el.patch.len())
                    .map(|j| el.monomials.eval_poly(&el.shape_function(j), q))
                    .sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
            // lambda_j(a_0) = delta_j0, exactly
            for j in 0..el.patch.len() {
                let v = el.monomials.eval_poly(&el.shape_function(j), el.patch.anchor());
                assert_eq!(v, if j == 0 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn insufficient_members_fail_a4() {
        let mesh = triangulate_unit_square(4).unwrap();
        // k = 2 needs n_k = 6 members; 5 can never be unisolvent
        let p = crate::patch::build_patch(&mesh, 10, 5).unwrap();
        let rep = check_a4(&mesh, &p, 2);
        assert!(!rep.valid);
        assert_eq!(rep.sigma_min, 0.0);
    }

    #[test]
    fn collinear_barycenters_fail_a4_for_k1() {
        // synthetic mesh of 4 stacked slabs: barycenters on a vertical line
        let verts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 0.25),
            Vec2::new(0.0, 0.25),
            Vec2::new(1.0, 0.5),
            Vec2::new(0.0, 0.5),
            Vec2::new(1.0, 0.75),
            Vec2::new(0.0, 0.75),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let cells = vec![
            vec![0, 1, 2, 3],
            vec![3, 2, 4, 5],
            vec![5, 4, 6, 7],
            vec![7, 6, 8, 9],
        ];
        let mesh = crate::mesh::PolyMesh::from_cells(verts, cells).unwrap();
        let p = crate::patch::build_patch(&mesh, 0, 4).unwrap();
        let rep = check_a4(&mesh, &p, 1);
        assert!(!rep.valid);
        assert!(rep.sigma_min <= A4_RTOL * rep.sigma_max);
    }

    #[test]
    fn row_deletion_interlaces_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let a = DMatrix::from_fn(8, 5, |_, _| rng.random_range(-1.0..1.0));
        let drop = rng.random_range(0..8usize);
        let b = a.clone().remove_row(drop);
        let mut sv_a: Vec<f64> = a.singular_values().iter().cloned().collect();
        let mut sv_b: Vec<f64> = b.singular_values().iter().cloned().collect();
        sv_a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sv_b.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for i in 0..5 {
            assert!(sv_a[i] >= sv_b[i] - 1e-10);
            if i + 1 < 5 {
                assert!(sv_b[i] >= sv_a[i + 1] - 1e-10);
            }
        }
    }

    #[test]
    fn global_basis_supports_match_brute_force() {
        let mesh = voronoi_mesh(30, 20, 3).unwrap();
        let patches = build_all_patches(&mesh, 7).unwrap();
        let recon = build_reconstruction_basis(&mesh, patches, 1).unwrap();
        let basis = build_global_basis(&mesh, recon);
        for dof in 0..mesh.n_elements() {
            let mut expect: Vec<usize> = (0..mesh.n_elements())
                .filter(|&e| basis.elements[e].patch.members.contains(&dof))
                .collect();
            expect.sort_unstable();
            assert_eq!(basis.supports[dof], expect);
        }
    }

    #[test]
    fn global_reconstruction_reproduces_linear_fields() {
        let mesh = voronoi_mesh(60, 60, 21).unwrap();
        let patches = build_all_patches(&mesh, 7).unwrap();
        let recon = build_reconstruction_basis(&mesh, patches, 1).unwrap();
        let basis = build_global_basis(&mesh, recon);
        let coeffs = basis.apply_pk(&mesh, |p| p.x);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for e in 0..mesh.n_elements() {
            let el = &basis.elements[e];
            for _ in 0..5 {
                let q = mesh.barycenters[e]
                    + Vec2::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05));
                let got = el.monomials.eval_poly(coeffs[e].as_slice(), q);
                assert!((got - q.x).abs() < 1e-10);
            }
        }
        // constants map to the exact constant coefficient vector
        let ones = basis.apply_pk(&mesh, |_| 1.0);
        for c in &ones {
            assert!((c[0] - 1.0).abs() < 1e-12);
            assert!(c.iter().skip(1).all(|&v| v.abs() < 1e-12));
        }
    }
}
