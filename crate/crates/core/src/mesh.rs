//! Interval and tensor-product quadrilateral meshes, face connectivity, and nodal fields.

use crate::basis::NodalBasis;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    DirichletZero,
}

/// Element side. 1D meshes only use `West` (left) and `East` (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    West = 0,
    East = 1,
    South = 2,
    North = 3,
}

impl Side {
    pub fn normal(self) -> [f64; 2] {
        match self {
            Side::West => [-1.0, 0.0],
            Side::East => [1.0, 0.0],
            Side::South => [0.0, -1.0],
            Side::North => [0.0, 1.0],
        }
    }

    pub fn axis(self) -> usize {
        match self {
            Side::West | Side::East => 0,
            Side::South | Side::North => 1,
        }
    }
}

/// Axis-aligned element: `[lower, lower + size]` per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub lower: [f64; 2],
    pub size: [f64; 2],
}

impl Element {
    pub fn measure(&self, dim: usize) -> f64 {
        if dim == 1 {
            self.size[0]
        } else {
            self.size[0] * self.size[1]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Interior {
        element: usize,
        side: Side,
    },
    /// Partner across a periodic boundary.
    Periodic {
        element: usize,
        side: Side,
    },
    DirichletZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub owner: usize,
    pub owner_side: Side,
    pub neighbor: Neighbor,
    /// Unit outward normal of the owner.
    pub normal: [f64; 2],
    pub measure: f64,
    /// Owner element size along the normal axis (used in jump penalties).
    pub h: f64,
}

impl Face {
    pub fn neighbor_element(&self) -> Option<(usize, Side)> {
        match self.neighbor {
            Neighbor::Interior { element, side } | Neighbor::Periodic { element, side } => Some((element, side)),
            Neighbor::DirichletZero => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self.neighbor, Neighbor::Interior { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

/// Optional per-axis vertex lists for graded tensor-product meshes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grading {
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    bc: BoundaryKind,
    xs: Vec<f64>,
    ys: Vec<f64>,
    elements: Vec<Element>,
    faces: Vec<Face>,
    element_faces: Vec<[usize; 4]>,
}

fn uniform_vertices(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect()
}

/// `ne` uniform elements on `[a, b]`.
pub fn build_interval_mesh(a: f64, b: f64, ne: usize, bc: BoundaryKind) -> Result<Mesh> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidMesh(format!("degenerate interval [{a}, {b}]")));
    }
    if ne == 0 {
        return Err(Error::InvalidMesh("need at least one element".into()));
    }
    Ok(Mesh::from_vertices(1, uniform_vertices(a, b, ne), vec![0.0, 1.0], bc))
}

/// Interval mesh on explicit vertices.
pub fn build_graded_interval_mesh(vertices: Vec<f64>, bc: BoundaryKind) -> Result<Mesh> {
    check_vertices(&vertices)?;
    Ok(Mesh::from_vertices(1, vertices, vec![0.0, 1.0], bc))
}

fn check_vertices(v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::InvalidMesh("need at least two vertices per axis".into()));
    }
    if v.windows(2).any(|w| !(w[0] < w[1])) || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidMesh("vertex list must be strictly increasing".into()));
    }
    Ok(())
}

/// `nx * ny` axis-aligned quads on `domain`, uniform unless `grading` overrides an axis.
pub fn build_quad_mesh(domain: Rectangle, nx: usize, ny: usize, grading: &Grading, bc: BoundaryKind) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh("need at least one element per axis".into()));
    }
    if !(domain.x.0 < domain.x.1) || !(domain.y.0 < domain.y.1) {
        return Err(Error::InvalidMesh("degenerate rectangle".into()));
    }
    let axis = |list: &Option<Vec<f64>>, n: usize, (a, b): (f64, f64)| -> Result<Vec<f64>> {
        match list {
            None => Ok(uniform_vertices(a, b, n)),
            Some(v) => {
                check_vertices(v)?;
                if v.len() != n + 1 {
                    return Err(Error::InvalidMesh(format!("grading has {} vertices but {n} elements were requested", v.len())));
                }
                if (v[0] - a).abs() > 1e-12 * (b - a) || (v[n] - b).abs() > 1e-12 * (b - a) {
                    return Err(Error::InvalidMesh("grading does not span the domain".into()));
                }
                Ok(v.clone())
            }
        }
    };
    let xs = axis(&grading.x, nx, domain.x)?;
    let ys = axis(&grading.y, ny, domain.y)?;
    Ok(Mesh::from_vertices(2, xs, ys, bc))
}

impl Mesh {
    fn from_vertices(dim: usize, xs: Vec<f64>, ys: Vec<f64>, bc: BoundaryKind) -> Mesh {
        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let mut elements = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                elements.push(Element { lower: [xs[ix], ys[iy]], size: [xs[ix + 1] - xs[ix], ys[iy + 1] - ys[iy]] });
            }
        }
        let id = |ix: usize, iy: usize| ix + nx * iy;
        let mut faces = Vec::new();
        let mut element_faces = vec![[usize::MAX; 4]; elements.len()];
        let face_measure = |e: &Element, side: Side| if dim == 1 { 1.0 } else { e.size[1 - side.axis()] };

        let mut push = |faces: &mut Vec<Face>, owner: usize, owner_side: Side, neighbor: Neighbor| {
            let e = &elements[owner];
            let idx = faces.len();
            faces.push(Face { owner, owner_side, neighbor, normal: owner_side.normal(), measure: face_measure(e, owner_side), h: e.size[owner_side.axis()] });
            element_faces[owner][owner_side as usize] = idx;
            if let Neighbor::Interior { element, side } | Neighbor::Periodic { element, side } = neighbor {
                element_faces[element][side as usize] = idx;
            }
        };

        // x-normal faces
        for iy in 0..ny {
            if bc == BoundaryKind::DirichletZero {
                push(&mut faces, id(0, iy), Side::West, Neighbor::DirichletZero);
            }
            for ix in 0..nx {
                let owner = id(ix, iy);
                if ix + 1 < nx {
                    push(&mut faces, owner, Side::East, Neighbor::Interior { element: id(ix + 1, iy), side: Side::West });
                } else if bc == BoundaryKind::Periodic {
                    push(&mut faces, owner, Side::East, Neighbor::Periodic { element: id(0, iy), side: Side::West });
                } else {
                    push(&mut faces, owner, Side::East, Neighbor::DirichletZero);
                }
            }
        }
        if dim == 2 {
            for ix in 0..nx {
                if bc == BoundaryKind::DirichletZero {
                    push(&mut faces, id(ix, 0), Side::South, Neighbor::DirichletZero);
                }
                for iy in 0..ny {
                    let owner = id(ix, iy);
                    if iy + 1 < ny {
                        push(&mut faces, owner, Side::North, Neighbor::Interior { element: id(ix, iy + 1), side: Side::South });
                    } else if bc == BoundaryKind::Periodic {
                        push(&mut faces, owner, Side::North, Neighbor::Periodic { element: id(ix, 0), side: Side::South });
                    } else {
                        push(&mut faces, owner, Side::North, Neighbor::DirichletZero);
                    }
                }
            }
        }
        Mesh { dim, bc, xs, ys, elements, faces, element_faces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bc(&self) -> BoundaryKind {
        self.bc
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Face index on each side of element `e` (`usize::MAX` for unused sides in 1D).
    pub fn element_faces(&self, e: usize) -> [usize; 4] {
        self.element_faces[e]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.xs.len() - 1, self.ys.len() - 1)
    }

    pub fn vertices(&self, axis: usize) -> &[f64] {
        if axis == 0 {
            &self.xs
        } else {
            &self.ys
        }
    }

    pub fn domain_measure(&self) -> f64 {
        let lx = self.xs[self.xs.len() - 1] - self.xs[0];
        if self.dim == 1 {
            lx
        } else {
            lx * (self.ys[self.ys.len() - 1] - self.ys[0])
        }
    }

    /// Largest element extent, the `h` of convergence tables.
    pub fn h_max(&self) -> f64 {
        self.elements.iter().map(|e| if self.dim == 1 { e.size[0] } else { e.size[0].max(e.size[1]) }).fold(0.0, f64::max)
    }

    /// Element containing `x`, preferring the lower-index element on shared boundaries.
    pub fn locate(&self, x: [f64; 2]) -> Option<usize> {
        let find = |v: &[f64], t: f64| -> Option<usize> {
            let n = v.len() - 1;
            let tol = 1e-12 * (v[n] - v[0]);
            if t < v[0] - tol || t > v[n] + tol {
                return None;
            }
            let i = v.partition_point(|&a| a < t);
            Some(i.saturating_sub(1).min(n - 1))
        };
        let ix = find(&self.xs, x[0])?;
        let iy = if self.dim == 1 { 0 } else { find(&self.ys, x[1])? };
        Some(ix + (self.xs.len() - 1) * iy)
    }
}

/// Mesh plus nodal basis: everything needed to lay out and evaluate a field.
#[derive(Debug, Clone)]
pub struct DgSpace {
    mesh: Mesh,
    basis: NodalBasis,
    side_nodes: [Vec<usize>; 4],
}

impl DgSpace {
    pub fn new(mesh: Mesh, basis: NodalBasis) -> DgSpace {
        let np = basis.len();
        let k = np - 1;
        let side_nodes = if mesh.dim() == 1 {
            [vec![0], vec![k], vec![], vec![]]
        } else {
            [(0..np).map(|j| np * j).collect(), (0..np).map(|j| k + np * j).collect(), (0..np).collect(), (0..np).map(|i| i + np * k).collect()]
        };
        DgSpace { mesh, basis, side_nodes }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn basis(&self) -> &NodalBasis {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn nodes_per_element(&self) -> usize {
        self.basis.len().pow(self.mesh.dim() as u32)
    }

    pub fn nodes_per_face(&self) -> usize {
        if self.mesh.dim() == 1 {
            1
        } else {
            self.basis.len()
        }
    }

    /// Volume node indices on `side`, ordered along the tangential axis.
    pub fn side_nodes(&self, side: Side) -> &[usize] {
        &self.side_nodes[side as usize]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes_per_element() * self.mesh.num_elements()
    }

    pub fn node_coords(&self, e: usize, node: usize) -> [f64; 2] {
        let el = &self.mesh.elements()[e];
        let np = self.basis.len();
        let r = self.basis.nodes();
        let (i, j) = (node % np, node / np);
        let x = el.lower[0] + 0.5 * (r[i] + 1.0) * el.size[0];
        let y = if self.mesh.dim() == 1 { 0.0 } else { el.lower[1] + 0.5 * (r[j] + 1.0) * el.size[1] };
        [x, y]
    }

    /// Interpolate `state` at nodes: `f(x, out)` writes the `m` components.
    pub fn interpolate<F>(&self, m: usize, f: F) -> FieldState
    where
        F: Fn([f64; 2], &mut [f64]),
    {
        let mut s = FieldState::zeros(self, m);
        let npe = self.nodes_per_element();
        for e in 0..self.mesh.num_elements() {
            for j in 0..npe {
                let x = self.node_coords(e, j);
                let off = (e * npe + j) * m;
                f(x, &mut s.values[off..off + m]);
            }
        }
        s
    }

    /// Evaluates the piecewise polynomial at a physical point.
    pub fn evaluate(&self, state: &FieldState, x: [f64; 2]) -> Option<Vec<f64>> {
        let e = self.mesh.locate(x)?;
        Some(self.evaluate_in(state, e, x))
    }

    /// Evaluates within element `e` (no containment check).
    pub fn evaluate_in(&self, state: &FieldState, e: usize, x: [f64; 2]) -> Vec<f64> {
        let el = &self.mesh.elements()[e];
        let m = state.m;
        let np = self.basis.len();
        let npe = self.nodes_per_element();
        let xi = 2.0 * (x[0] - el.lower[0]) / el.size[0] - 1.0;
        let lx = self.basis.eval(xi);
        let mut out = vec![0.0; m];
        if self.mesh.dim() == 1 {
            for (j, l) in lx.iter().enumerate() {
                for c in 0..m {
                    out[c] += l * state.values[(e * npe + j) * m + c];
                }
            }
        } else {
            let eta = 2.0 * (x[1] - el.lower[1]) / el.size[1] - 1.0;
            let ly = self.basis.eval(eta);
            for jy in 0..np {
                for jx in 0..np {
                    let l = lx[jx] * ly[jy];
                    for c in 0..m {
                        out[c] += l * state.values[(e * npe + jx + np * jy) * m + c];
                    }
                }
            }
        }
        out
    }

    fn side_trace(&self, state: &FieldState, e: usize, side: Side) -> Vec<f64> {
        let m = state.m;
        let npe = self.nodes_per_element();
        let mut out = Vec::with_capacity(self.nodes_per_face() * m);
        for &j in self.side_nodes(side) {
            let off = (e * npe + j) * m;
            out.extend_from_slice(&state.values[off..off + m]);
        }
        out
    }

    /// `(u-, u+)` on `face`: owner trace and neighbor (or boundary) trace, laid out
    /// `[face node][component]`.
    pub fn face_traces(&self, state: &FieldState, face: usize) -> (Vec<f64>, Vec<f64>) {
        let f = &self.mesh.faces()[face];
        let inner = self.side_trace(state, f.owner, f.owner_side);
        let outer = match f.neighbor_element() {
            Some((e, side)) => self.side_trace(state, e, side),
            None => vec![0.0; inner.len()],
        };
        (inner, outer)
    }

    /// Traces seen from the neighbor: the pair of [`face_traces`](Self::face_traces) swapped.
    pub fn face_traces_from_neighbor(&self, state: &FieldState, face: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = self.face_traces(state, face);
        (b, a)
    }
}

/// Minimum physical distance between adjacent LGL nodes over all elements and axes.
pub fn min_node_spacing(mesh: &Mesh, basis: &NodalBasis) -> f64 {
    let ref_gap = basis.nodes().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    mesh.elements()
        .iter()
        .map(|e| {
            let s = if mesh.dim() == 1 { e.size[0] } else { e.size[0].min(e.size[1]) };
            0.5 * s * ref_gap
        })
        .fold(f64::INFINITY, f64::min)
}

/// Jump `[u] = u- n- + u+ n+` for a scalar on a face with owner normal component `n_minus`.
pub fn jump(u_minus: f64, u_plus: f64, n_minus: f64) -> f64 {
    (u_minus - u_plus) * n_minus
}

pub fn average(u_minus: f64, u_plus: f64) -> f64 {
    0.5 * (u_minus + u_plus)
}

/// Nodal values of an `m`-component field, laid out `[element][node][component]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub dim: usize,
    pub order: usize,
    pub m: usize,
    pub num_elements: usize,
    pub nodes_per_element: usize,
    pub values: Vec<f64>,
}

impl FieldState {
    pub fn zeros(space: &DgSpace, m: usize) -> FieldState {
        let npe = space.nodes_per_element();
        let ne = space.mesh().num_elements();
        FieldState { dim: space.mesh().dim(), order: space.order(), m, num_elements: ne, nodes_per_element: npe, values: vec![0.0; ne * npe * m] }
    }

    pub fn from_values(space: &DgSpace, m: usize, values: Vec<f64>) -> Result<FieldState> {
        let mut s = FieldState::zeros(space, m);
        if values.len() != s.values.len() {
            return Err(Error::DimensionMismatch(format!("expected {} values, got {}", s.values.len(), values.len())));
        }
        s.values = values;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, e: usize, j: usize) -> &[f64] {
        let off = (e * self.nodes_per_element + j) * self.m;
        &self.values[off..off + self.m]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn matches(&self, space: &DgSpace) -> bool {
        self.dim == space.mesh().dim()
            && self.order == space.order()
            && self.num_elements == space.mesh().num_elements()
            && self.nodes_per_element == space.nodes_per_element()
    }

    pub fn check(&self, space: &DgSpace, m: usize) -> Result<()> {
        if !self.matches(space) || self.m != m || self.values.len() != self.num_elements * self.nodes_per_element * m {
            return Err(Error::DimensionMismatch(format!(
                "state (dim {}, k {}, m {}, {} elements) does not fit the space (dim {}, k {}, m {m}, {} elements)",
                self.dim,
                self.order,
                self.m,
                self.num_elements,
                space.mesh().dim(),
                space.order(),
                space.mesh().num_elements()
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::lgl_basis;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interval_uniform() {
        let m = build_interval_mesh(0.0, 1.0, 20, BoundaryKind::DirichletZero).unwrap();
        assert_eq!(m.num_elements(), 20);
        for e in m.elements() {
            assert_abs_diff_eq!(e.size[0], 0.05, epsilon = 1e-15);
        }
        assert_eq!(m.faces().len(), 21);
        assert_eq!(m.faces().iter().filter(|f| f.is_boundary()).count(), 2);

        let m = build_interval_mesh(0.0, 10.0, 256, BoundaryKind::Periodic).unwrap();
        for e in m.elements() {
            assert_abs_diff_eq!(e.size[0], 10.0 / 256.0, epsilon = 1e-14);
        }
        assert!(build_interval_mesh(1.0, 1.0, 3, BoundaryKind::Periodic).is_err());
        assert!(build_interval_mesh(0.0, 1.0, 0, BoundaryKind::Periodic).is_err());
    }

    #[test]
    fn single_element_periodic_partners_itself() {
        let m = build_interval_mesh(0.0, 1.0, 1, BoundaryKind::Periodic).unwrap();
        assert_eq!(m.faces().len(), 1);
        let f = &m.faces()[0];
        assert_eq!(f.owner, 0);
        assert_eq!(f.owner_side, Side::East);
        assert_eq!(f.neighbor, Neighbor::Periodic { element: 0, side: Side::West });
        assert_eq!(m.element_faces(0)[0], 0);
        assert_eq!(m.element_faces(0)[1], 0);
    }

    #[test]
    fn quad_counts_and_measures() {
        let unit = Rectangle { x: (0.0, 1.0), y: (0.0, 1.0) };
        let m = build_quad_mesh(unit, 2, 2, &Grading::default(), BoundaryKind::DirichletZero).unwrap();
        assert_eq!(m.num_elements(), 4);
        assert_eq!(m.faces().iter().filter(|f| !f.is_boundary()).count(), 4);

        let dom = Rectangle { x: (0.0, 10.0), y: (-5.0, 5.0) };
        let m = build_quad_mesh(dom, 16, 16, &Grading::default(), BoundaryKind::Periodic).unwrap();
        for e in m.elements() {
            assert_abs_diff_eq!(e.measure(2), 0.625 * 0.625, epsilon = 1e-14);
        }
        let total: f64 = m.elements().iter().map(|e| e.measure(2)).sum();
        assert_abs_diff_eq!(total, 100.0, epsilon = 1e-12 * 100.0);
        assert_eq!(m.faces().len(), 2 * 256);
    }

    #[test]
    fn grading_sets_widths() {
        let unit = Rectangle { x: (0.0, 1.0), y: (0.0, 1.0) };
        let g = Grading { x: Some(vec![0.0, 0.25, 1.0]), y: None };
        let m = build_quad_mesh(unit, 2, 1, &g, BoundaryKind::Periodic).unwrap();
        assert_eq!(m.elements()[0].size[0], 0.25);
        assert_eq!(m.elements()[1].size[0], 0.75);
        let bad = Grading { x: Some(vec![0.0, 0.5, 0.4, 1.0]), y: None };
        assert!(build_quad_mesh(unit, 3, 1, &bad, BoundaryKind::Periodic).is_err());
    }

    #[test]
    fn interior_faces_have_opposite_normals() {
        let unit = Rectangle { x: (0.0, 2.0), y: (0.0, 1.0) };
        let m = build_quad_mesh(unit, 3, 2, &Grading::default(), BoundaryKind::Periodic).unwrap();
        let mut refs = vec![0usize; m.faces().len()];
        for e in 0..m.num_elements() {
            for side in [Side::West, Side::East, Side::South, Side::North] {
                let f = m.element_faces(e)[side as usize];
                refs[f] += 1;
                let face = &m.faces()[f];
                let n = side.normal();
                if face.owner == e && face.owner_side == side {
                    assert_eq!(face.normal, n);
                } else {
                    assert_eq!(face.normal, [-n[0], -n[1]]);
                }
            }
        }
        assert!(refs.iter().all(|&r| r == 2));
    }

    #[test]
    fn min_spacing() {
        let mesh = build_interval_mesh(0.0, 1.0, 40, BoundaryKind::DirichletZero).unwrap();
        let b4 = lgl_basis(4).unwrap();
        let dx = min_node_spacing(&mesh, &b4);
        assert_abs_diff_eq!(dx, 0.025 * (1.0 - (3.0f64 / 7.0).sqrt()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dx, 4.3168e-3, epsilon = 1e-7);
        assert_abs_diff_eq!(0.03 * 0.1 / (dx * dx), 161.0, epsilon = 0.05);
        let b1 = lgl_basis(1).unwrap();
        assert_abs_diff_eq!(min_node_spacing(&mesh, &b1), 0.025, epsilon = 1e-15);
    }

    #[test]
    fn traces() {
        let mesh = build_interval_mesh(0.0, 1.0, 4, BoundaryKind::DirichletZero).unwrap();
        let space = DgSpace::new(mesh, lgl_basis(2).unwrap());
        let mut s = FieldState::zeros(&space, 1);
        s.values.iter_mut().for_each(|v| *v = 0.7);
        for (i, f) in space.mesh().faces().iter().enumerate() {
            let (a, b) = space.face_traces(&s, i);
            assert_eq!(a, vec![0.7]);
            if f.is_boundary() {
                assert_eq!(b, vec![0.0]);
            } else {
                assert_eq!(b, vec![0.7]);
            }
        }

        let mesh = build_interval_mesh(0.0, 1.0, 5, BoundaryKind::Periodic).unwrap();
        let space = DgSpace::new(mesh, lgl_basis(3).unwrap());
        let s = space.interpolate(1, |_, _| {});
        let mut s = s;
        for e in 0..5 {
            for j in 0..4 {
                s.values[e * 4 + j] = e as f64;
            }
        }
        let periodic = space.mesh().faces().iter().position(|f| matches!(f.neighbor, Neighbor::Periodic { .. })).unwrap();
        let (a, b) = space.face_traces(&s, periodic);
        assert_eq!((a[0], b[0]), (4.0, 0.0));
        let (c, d) = space.face_traces_from_neighbor(&s, periodic);
        assert_eq!((c[0], d[0]), (0.0, 4.0));
    }

    #[test]
    fn jumps() {
        assert_eq!(jump(0.7, 0.0, 1.0), 0.7);
        assert_eq!(jump(0.7, 0.0, -1.0), -0.7);
        assert_eq!(jump(2.0, 2.0, 1.0), 0.0);
        assert_eq!(average(1.0, 3.0), 2.0);
    }

    #[test]
    fn locate_and_evaluate() {
        let dom = Rectangle { x: (0.0, 2.0), y: (0.0, 1.0) };
        let mesh = build_quad_mesh(dom, 4, 2, &Grading::default(), BoundaryKind::Periodic).unwrap();
        let space = DgSpace::new(mesh, lgl_basis(3).unwrap());
        let s = space.interpolate(2, |x, out| {
            out[0] = x[0] * x[0] * x[1];
            out[1] = 1.0 + x[0] - x[1];
        });
        let v = space.evaluate(&s, [1.3, 0.77]).unwrap();
        assert_abs_diff_eq!(v[0], 1.3 * 1.3 * 0.77, epsilon = 1e-13);
        assert_abs_diff_eq!(v[1], 1.0 + 1.3 - 0.77, epsilon = 1e-13);
        assert!(space.evaluate(&s, [3.0, 0.5]).is_none());
    }
}
