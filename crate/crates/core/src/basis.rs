//! Legendre-Gauss-Lobatto nodal bases and Gauss-Legendre quadrature on [-1, 1].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mesh::{DgSpace, FieldState};

pub const MAX_ORDER: usize = 20;

/// Nodal basis of degree `order` on the LGL points of [-1, 1].
#[derive(Debug, Clone)]
pub struct NodalBasis {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    /// `diff[(i, j)] = l_j'(x_i)`.
    diff: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f` over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre polynomial P_n and its derivative at `x`.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        let d2 = d0 + (2.0 * jf - 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// LGL nodal basis of order `k`.
pub fn lgl_basis(k: usize) -> Result<NodalBasis> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::InvalidOrder(k));
    }
    let kf = k as f64;
    let mut nodes = vec![0.0; k + 1];
    nodes[0] = -1.0;
    nodes[k] = 1.0;
    // Interior nodes are the roots of P_k'; Newton from Chebyshev-Gauss-Lobatto guesses.
    for (i, node) in nodes.iter_mut().enumerate().take(k).skip(1) {
        let mut x = -(std::f64::consts::PI * i as f64 / kf).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(k, x);
            let d2p = (2.0 * x * dp - kf * (kf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        *node = x;
    }
    // Symmetrize to remove round-off asymmetry.
    for i in 0..=k / 2 {
        let a = 0.5 * (nodes[k - i] - nodes[i]);
        nodes[i] = -a;
        nodes[k - i] = a;
    }
    if k.is_multiple_of(2) {
        nodes[k / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre(k, x);
            2.0 / (kf * (kf + 1.0) * p * p)
        })
        .collect();
    let bary = barycentric_weights(&nodes);
    let diff = diff_matrix(&nodes, &bary);
    Ok(NodalBasis { order: k, nodes, weights, bary, diff })
}

/// Gauss-Legendre rule with `nq` points, exact for degree `2 nq - 1`.
pub fn gauss_quadrature(nq: usize) -> Result<QuadratureRule> {
    if nq == 0 || nq > 256 {
        return Err(Error::InvalidQuadrature(nq));
    }
    let n = nq as f64;
    let mut points = vec![0.0; nq];
    let mut weights = vec![0.0; nq];
    for i in 0..nq {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(nq, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(nq, x);
        dp = if d.is_finite() { d } else { dp };
        points[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    for i in 0..nq / 2 {
        let a = 0.5 * (points[nq - 1 - i] - points[i]);
        let w = 0.5 * (weights[i] + weights[nq - 1 - i]);
        points[i] = -a;
        points[nq - 1 - i] = a;
        weights[i] = w;
        weights[nq - 1 - i] = w;
    }
    if nq % 2 == 1 {
        points[nq / 2] = 0.0;
    }
    Ok(QuadratureRule { points, weights, exact_degree: 2 * nq - 1 })
}

/// Gauss rule used for over-integrated volume terms of order-`k` operators:
/// `ceil((3k + 2) / 2)` points.
pub fn over_integration_rule(k: usize) -> Result<QuadratureRule> {
    gauss_quadrature((3 * k + 3) / 2)
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            let prod: f64 = (0..nodes.len()).filter(|&m| m != j).map(|m| nodes[j] - nodes[m]).product();
            1.0 / prod
        })
        .collect()
}

fn diff_matrix(nodes: &[f64], bary: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = bary[j] / bary[i] / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

impl NodalBasis {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn diff_matrix(&self) -> &DMatrix<f64> {
        &self.diff
    }

    /// The collocation rule on the LGL nodes themselves (exact to degree 2k - 1).
    pub fn lgl_rule(&self) -> QuadratureRule {
        QuadratureRule { points: self.nodes.clone(), weights: self.weights.clone(), exact_degree: 2 * self.order - 1 }
    }

    /// Values of all Lagrange basis functions at `x`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        if let Some(i) = self.nodes.iter().position(|&n| n == x) {
            let mut out = vec![0.0; self.len()];
            out[i] = 1.0;
            return out;
        }
        let terms: Vec<f64> = self.nodes.iter().zip(&self.bary).map(|(&n, &b)| b / (x - n)).collect();
        let total: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / total).collect()
    }

    /// Derivatives of all Lagrange basis functions at `x`.
    pub fn eval_derivative(&self, x: f64) -> Vec<f64> {
        if let Some(i) = self.nodes.iter().position(|&n| n == x) {
            return self.diff.row(i).iter().copied().collect();
        }
        let n = self.len();
        (0..n)
            .map(|j| {
                let mut lj = self.bary[j];
                for m in 0..n {
                    if m != j {
                        lj *= x - self.nodes[m];
                    }
                }
                let s: f64 = (0..n).filter(|&m| m != j).map(|m| 1.0 / (x - self.nodes[m])).sum();
                lj * s
            })
            .collect()
    }

    /// `out[(q, j)] = l_j(points[q])`.
    pub fn interpolation_matrix(&self, points: &[f64]) -> DMatrix<f64> {
        let rows: Vec<Vec<f64>> = points.iter().map(|&x| self.eval(x)).collect();
        DMatrix::from_fn(points.len(), self.len(), |q, j| rows[q][j])
    }

    /// `out[(q, j)] = l_j'(points[q])`.
    pub fn derivative_matrix(&self, points: &[f64]) -> DMatrix<f64> {
        let rows: Vec<Vec<f64>> = points.iter().map(|&x| self.eval_derivative(x)).collect();
        DMatrix::from_fn(points.len(), self.len(), |q, j| rows[q][j])
    }

    /// Reference mass matrix `B^T W B` under `quad`.
    pub fn mass_matrix(&self, quad: &QuadratureRule) -> DMatrix<f64> {
        let b = self.interpolation_matrix(&quad.points);
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&quad.weights));
        b.transpose() * w * b
    }
}

/// L2 projection of an `m`-component function onto the space. `f(x, out)` writes
/// the `m` components at physical point `x` (the second coordinate is 0 in 1D).
pub fn l2_project<F>(space: &DgSpace, m: usize, quad: &QuadratureRule, f: F) -> Result<FieldState>
where
    F: Fn([f64; 2], &mut [f64]),
{
    let basis = space.basis();
    let k = basis.order();
    if quad.exact_degree < 2 * k {
        return Err(Error::InvalidInput(format!("projection rule exact to degree {} but order {k} needs {}", quad.exact_degree, 2 * k)));
    }
    let np = basis.len();
    let nq = quad.len();
    let b = basis.interpolation_matrix(&quad.points);
    let mref = basis.mass_matrix(quad);
    let chol = mref.clone().cholesky().ok_or_else(|| Error::InvalidInput("singular reference mass matrix".into()))?;
    let dim = space.mesh().dim();
    let mut state = FieldState::zeros(space, m);
    let mut fx = vec![0.0; m];
    let npe = space.nodes_per_element();
    for (e, elem) in space.mesh().elements().iter().enumerate() {
        if dim == 1 {
            let mut rhs = DMatrix::<f64>::zeros(np, m);
            for q in 0..nq {
                let x = elem.lower[0] + 0.5 * (quad.points[q] + 1.0) * elem.size[0];
                f([x, 0.0], &mut fx);
                for j in 0..np {
                    for c in 0..m {
                        rhs[(j, c)] += quad.weights[q] * b[(q, j)] * fx[c];
                    }
                }
            }
            let coef = chol.solve(&rhs);
            for j in 0..np {
                for c in 0..m {
                    state.values[(e * npe + j) * m + c] = coef[(j, c)];
                }
            }
        } else {
            // Tensor product: apply the 1D inverse mass along each axis.
            let mut rhs = vec![0.0; np * np * m];
            for qy in 0..nq {
                let y = elem.lower[1] + 0.5 * (quad.points[qy] + 1.0) * elem.size[1];
                for qx in 0..nq {
                    let x = elem.lower[0] + 0.5 * (quad.points[qx] + 1.0) * elem.size[0];
                    f([x, y], &mut fx);
                    let w = quad.weights[qx] * quad.weights[qy];
                    for jy in 0..np {
                        for jx in 0..np {
                            let phi = w * b[(qx, jx)] * b[(qy, jy)];
                            for c in 0..m {
                                rhs[(jx + np * jy) * m + c] += phi * fx[c];
                            }
                        }
                    }
                }
            }
            for c in 0..m {
                let mut r = DMatrix::<f64>::from_fn(np, np, |jx, jy| rhs[(jx + np * jy) * m + c]);
                r = chol.solve(&r);
                r = chol.solve(&r.transpose()).transpose();
                for jy in 0..np {
                    for jx in 0..np {
                        state.values[(e * npe + jx + np * jy) * m + c] = r[(jx, jy)];
                    }
                }
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lgl_low_orders() {
        let b1 = lgl_basis(1).unwrap();
        assert_eq!(b1.nodes(), &[-1.0, 1.0]);
        assert_eq!(b1.weights(), &[1.0, 1.0]);

        let b2 = lgl_basis(2).unwrap();
        for (x, e) in b2.nodes().iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-15);
        }
        for (w, e) in b2.weights().iter().zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-15);
        }

        let b3 = lgl_basis(3).unwrap();
        let s = 1.0 / 5f64.sqrt();
        for (x, e) in b3.nodes().iter().zip([-1.0, -s, s, 1.0]) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-15);
        }
        for (w, e) in b3.weights().iter().zip([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0]) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn order_range_is_checked() {
        assert!(matches!(lgl_basis(0), Err(Error::InvalidOrder(0))));
        assert!(matches!(lgl_basis(21), Err(Error::InvalidOrder(21))));
        assert!(lgl_basis(20).is_ok());
    }

    #[test]
    fn lgl_invariants_all_orders() {
        for k in 1..=MAX_ORDER {
            let b = lgl_basis(k).unwrap();
            let x = b.nodes();
            assert_eq!(x[0], -1.0);
            assert_eq!(x[k], 1.0);
            for i in 0..k {
                assert!(x[i] < x[i + 1]);
                assert_abs_diff_eq!(x[i], -x[k - i], epsilon = 1e-15);
            }
            assert!(b.weights().iter().all(|&w| w > 0.0));
            assert_abs_diff_eq!(b.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            let d = b.diff_matrix();
            for i in 0..=k {
                let row_sum: f64 = d.row(i).iter().sum();
                assert_abs_diff_eq!(row_sum, 0.0, epsilon = 1e-11);
                let dx: f64 = (0..=k).map(|j| d[(i, j)] * x[j]).sum();
                assert_abs_diff_eq!(dx, 1.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn diff_matrix_is_exact_on_monomials() {
        for k in 1..=12 {
            let b = lgl_basis(k).unwrap();
            let x = b.nodes();
            for p in 0..=k {
                for i in 0..=k {
                    let approx: f64 = (0..=k).map(|j| b.diff_matrix()[(i, j)] * x[j].powi(p as i32)).sum();
                    let exact = if p == 0 { 0.0 } else { p as f64 * x[i].powi(p as i32 - 1) };
                    assert_abs_diff_eq!(approx, exact, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn gauss_rules() {
        let g1 = gauss_quadrature(1).unwrap();
        assert_eq!(g1.points, vec![0.0]);
        assert_abs_diff_eq!(g1.weights[0], 2.0, epsilon = 1e-15);
        let g2 = gauss_quadrature(2).unwrap();
        assert_abs_diff_eq!(g2.points[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g2.points[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g2.weights[0], 1.0, epsilon = 1e-15);
        let g3 = gauss_quadrature(3).unwrap();
        assert_eq!(g3.exact_degree, 5);
        assert_abs_diff_eq!(g3.integrate(|x| x.powi(4)), 0.4, epsilon = 1e-15);
        assert!(gauss_quadrature(0).is_err());
    }

    #[test]
    fn gauss_monomials_up_to_exact_degree() {
        for nq in 1..=30 {
            let g = gauss_quadrature(nq).unwrap();
            assert_abs_diff_eq!(g.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for p in 0..=g.exact_degree {
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert_abs_diff_eq!(g.integrate(|x| x.powi(p as i32)), exact, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn eval_reproduces_polynomials_off_nodes() {
        let b = lgl_basis(5).unwrap();
        let coeffs: Vec<f64> = b.nodes().iter().map(|x| x.powi(5) - 2.0 * x).collect();
        for &x in &[-0.93, -0.2, 0.37, 0.8] {
            let v: f64 = b.eval(x).iter().zip(&coeffs).map(|(l, c)| l * c).sum();
            assert_abs_diff_eq!(v, x.powi(5) - 2.0 * x, epsilon = 1e-13);
            let d: f64 = b.eval_derivative(x).iter().zip(&coeffs).map(|(l, c)| l * c).sum();
            assert_abs_diff_eq!(d, 5.0 * x.powi(4) - 2.0, epsilon = 1e-12);
        }
    }
}
