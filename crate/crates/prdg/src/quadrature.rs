//! Gauss quadrature on segments and triangles.
//!
//! Triangle rules are collapsed (Duffy) tensor products of 1D Gauss-Legendre
//! rules, which stay robust at any requested order. Rules on polygonal
//! elements are unions of triangle rules over the element's sub-triangulation.

use crate::geom::Vec2;
use crate::mesh::{PolyMesh, SubTriangulation};

/// Points and weights of a quadrature rule on a reference domain.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Rule on the reference triangle (0,0)-(1,0)-(0,1), exact for total degree
/// `order`, via the Duffy substitution x = u(1-v), y = uv with Jacobian u.
pub fn triangle_rule(order: usize) -> QuadRule {
    let n = (order + 3) / 2; // 2n - 1 >= order + 1 covers the extra power of u
    let (nodes, ws) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        let u = 0.5 * (nodes[i] + 1.0);
        let wu = 0.5 * ws[i];
        for j in 0..n {
            let v = 0.5 * (nodes[j] + 1.0);
            let wv = 0.5 * ws[j];
            points.push(Vec2::new(u * (1.0 - v), u * v));
            weights.push(wu * wv * u);
        }
    }
    QuadRule { points, weights }
}

/// Map a reference-triangle rule to the physical triangle (a, b, c).
pub fn map_to_triangle(rule: &QuadRule, a: Vec2, b: Vec2, c: Vec2) -> Vec<(Vec2, f64)> {
    let jac = (b - a).cross(c - a); // twice the signed area
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(p, w)| (a + (b - a) * p.x + (c - a) * p.y, w * jac))
        .collect()
}

/// Physical quadrature points and weights on element `element_id`, exact for
/// polynomials of total degree `order` on each sub-triangle.
pub fn element_quadrature(
    mesh: &PolyMesh,
    subtri: &SubTriangulation,
    element_id: usize,
    order: usize,
) -> Vec<(Vec2, f64)> {
    let rule = triangle_rule(order.max(1));
    let mut out = Vec::new();
    for tri in &subtri.triangles[element_id] {
        out.extend(map_to_triangle(&rule, tri[0], tri[1], tri[2]));
    }
    let _ = mesh;
    out
}

/// Gauss-Legendre points on the segment [a, b]; weights sum to |e|.
pub fn edge_quadrature(a: Vec2, b: Vec2, order: usize) -> Vec<(Vec2, f64)> {
    let n = (order.max(1) + 2) / 2; // 2n - 1 >= order
    let (nodes, ws) = gauss_legendre(n);
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    let len = (b - a).norm();
    nodes
        .iter()
        .zip(&ws)
        .map(|(&t, &w)| (mid + half * t, 0.5 * len * w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{subtriangulate, PolyMesh};

    fn unit_square_element() -> (PolyMesh, SubTriangulation) {
        let verts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let mesh = PolyMesh::from_cells(verts, vec![vec![0, 1, 2, 3]]).unwrap();
        let sub = subtriangulate(&mesh).unwrap();
        (mesh, sub)
    }

    fn integrate(points: &[(Vec2, f64)], f: impl Fn(Vec2) -> f64) -> f64 {
        points.iter().map(|&(p, w)| w * f(p)).sum()
    }

    #[test]
    fn unit_square_moments() {
        let (mesh, sub) = unit_square_element();
        let pts = element_quadrature(&mesh, &sub, 0, 5);
        assert!((integrate(&pts, |_| 1.0) - 1.0).abs() < 1e-14);
        assert!((integrate(&pts, |p| p.x) - 0.5).abs() < 1e-14);
        // closed form: (1/3) * (1/4)
        assert!((integrate(&pts, |p| p.x * p.x * p.y.powi(3)) - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn edge_rule_reproduces_segment_moments() {
        let pts = edge_quadrature(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), 2);
        assert!((integrate(&pts, |_| 1.0) - 1.0).abs() < 1e-15);
        assert!((integrate(&pts, |p| p.x * p.x) - 1.0 / 3.0).abs() < 1e-15);

        let pts = edge_quadrature(Vec2::new(0.0, 0.0), Vec2::new(0.0, 2.0), 3);
        assert!((integrate(&pts, |_| 1.0) - 2.0).abs() < 1e-14);
        assert!((integrate(&pts, |p| p.y.powi(3)) - 4.0).abs() < 1e-13);
    }

    /// Exact integral of x^a y^b over a triangle by the multinomial expansion
    /// of barycentric coordinates: int λ0^p λ1^q λ2^r = 2|T| p! q! r! / (p+q+r+2)!.
    fn monomial_integral_triangle(tri: [Vec2; 3], a: u32, b: u32) -> f64 {
        fn fact(n: u32) -> f64 {
            (1..=n as u64).map(|v| v as f64).product()
        }
        fn multi(n: u32, ks: [u32; 3]) -> f64 {
            fact(n) / (fact(ks[0]) * fact(ks[1]) * fact(ks[2]))
        }
        let area2 = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        let xs = [tri[0].x, tri[1].x, tri[2].x];
        let ys = [tri[0].y, tri[1].y, tri[2].y];
        let mut total = 0.0;
        for i0 in 0..=a {
            for i1 in 0..=(a - i0) {
                let i2 = a - i0 - i1;
                let cx = multi(a, [i0, i1, i2])
                    * xs[0].powi(i0 as i32)
                    * xs[1].powi(i1 as i32)
                    * xs[2].powi(i2 as i32);
                for j0 in 0..=b {
                    for j1 in 0..=(b - j0) {
                        let j2 = b - j0 - j1;
                        let cy = multi(b, [j0, j1, j2])
                            * ys[0].powi(j0 as i32)
                            * ys[1].powi(j1 as i32)
                            * ys[2].powi(j2 as i32);
                        let (p, q, r) = (i0 + j0, i1 + j1, i2 + j2);
                        total += cx * cy * fact(p) * fact(q) * fact(r) / fact(p + q + r + 2);
                    }
                }
            }
        }
        total * area2
    }

    #[test]
    fn degree_exactness_on_random_triangles() {
        use rand::RngExt;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..10 {
            let mut tri = [
                Vec2::new(rng.random::<f64>(), rng.random::<f64>()),
                Vec2::new(rng.random::<f64>(), rng.random::<f64>()),
                Vec2::new(rng.random::<f64>(), rng.random::<f64>()),
            ];
            if (tri[1] - tri[0]).cross(tri[2] - tri[0]) < 1e-3 {
                tri.swap(1, 2);
                if (tri[1] - tri[0]).cross(tri[2] - tri[0]) < 1e-3 {
                    continue;
                }
            }
            // orders up to 2k+2 for k = 3
            for order in 1..=8usize {
                let rule = triangle_rule(order);
                let pts = map_to_triangle(&rule, tri[0], tri[1], tri[2]);
                for a in 0..=order as u32 {
                    for b in 0..=(order as u32 - a) {
                        let quad = integrate(&pts, |p| p.x.powi(a as i32) * p.y.powi(b as i32));
                        let exact = monomial_integral_triangle(tri, a, b);
                        assert!(
                            (quad - exact).abs() <= 1e-13 * (1.0 + exact.abs()),
                            "order {order} monomial x^{a} y^{b}: {quad} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn weights_are_positive_and_sum_to_measure() {
        for order in 1..=10 {
            let rule = triangle_rule(order);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 0.5).abs() < 1e-14);
        }
    }
}
