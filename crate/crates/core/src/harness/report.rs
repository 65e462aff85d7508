//! Error norms, observed orders, Courant numbers and CSV output.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::basis::{gauss_quadrature, NodalBasis};
use crate::error::{Error, Result};
use crate::mesh::{min_node_spacing, DgSpace, FieldState, Mesh};

/// What a discrete state is compared against.
pub enum Reference<'a> {
    /// Closed-form function `f(x, out)` writing all components.
    Exact(&'a dyn Fn([f64; 2], &mut [f64])),
    /// A discrete field, possibly on a finer mesh or higher order.
    Discrete(&'a DgSpace, &'a FieldState),
}

/// Broken L2 error per component, using `k + 4` Gauss points per axis on the
/// mesh of `state`. Discrete references are sampled at those points.
pub fn l2_error(space: &DgSpace, state: &FieldState, reference: Reference<'_>) -> Result<Vec<f64>> {
    state.check(space, state.m)?;
    let m = state.m;
    if let Reference::Discrete(rs, rf) = &reference {
        rf.check(rs, rf.m)?;
        if rf.m != m || rs.mesh().dim() != space.mesh().dim() {
            return Err(Error::DimensionMismatch("reference field has a different shape".into()));
        }
    }
    let mesh = space.mesh();
    let dim = mesh.dim();
    let quad = gauss_quadrature(space.order() + 4)?;
    let nq = quad.len();
    let mut sums = vec![0.0; m];
    let mut exact = vec![0.0; m];
    let qy_count = if dim == 1 { 1 } else { nq };
    for (e, el) in mesh.elements().iter().enumerate() {
        for qy in 0..qy_count {
            for qx in 0..nq {
                let x0 = el.lower[0] + 0.5 * (quad.points[qx] + 1.0) * el.size[0];
                let (x1, w) = if dim == 1 {
                    (0.0, 0.5 * el.size[0] * quad.weights[qx])
                } else {
                    let y = el.lower[1] + 0.5 * (quad.points[qy] + 1.0) * el.size[1];
                    (y, 0.25 * el.size[0] * el.size[1] * quad.weights[qx] * quad.weights[qy])
                };
                let x = [x0, x1];
                let uh = space.evaluate_in(state, e, x);
                match &reference {
                    Reference::Exact(f) => f(x, &mut exact),
                    Reference::Discrete(rs, rf) => {
                        exact = rs.evaluate(rf, x).ok_or_else(|| Error::DimensionMismatch(format!("reference mesh does not cover {x:?}")))?;
                    }
                }
                for c in 0..m {
                    let d = uh[c] - exact[c];
                    sums[c] += w * d * d;
                }
            }
        }
    }
    Ok(sums.into_iter().map(f64::sqrt).collect())
}

/// `order_i = log(e_{i-1} / e_i) / log(s_{i-1} / s_i)` for `i >= 1`.
pub fn observed_order(errors: &[f64], scales: &[f64]) -> Result<Vec<f64>> {
    if errors.len() != scales.len() || errors.len() < 2 {
        return Err(Error::InvalidInput("observed_order needs two or more (error, scale) pairs".into()));
    }
    if errors.iter().chain(scales).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput("errors and scales must be positive".into()));
    }
    Ok(errors.windows(2).zip(scales.windows(2)).map(|(e, s)| (e[0] / e[1]).ln() / (s[0] / s[1]).ln()).collect())
}

/// `(Cr_a, Cr_d) = (c dt / dx, kappa dt / dx^2)` with `dx` the minimum LGL node spacing.
pub fn courant_numbers(speed: f64, dt: f64, mesh: &Mesh, basis: &NodalBasis, kappa: f64) -> (f64, f64) {
    let dx = min_node_spacing(mesh, basis);
    (speed * dt / dx, kappa * dt / (dx * dx))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    BlowUp,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::BlowUp => "blowup",
        })
    }
}

impl FromStr for RunStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ok" => Ok(RunStatus::Ok),
            "blowup" => Ok(RunStatus::BlowUp),
            _ => Err(Error::InvalidInput(format!("unknown status '{s}'"))),
        }
    }
}

/// One sweep point. Errors of a blown-up run are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    /// `h` for spatial and joint sweeps, `dt` for temporal sweeps.
    pub scale: f64,
    pub errors: Vec<f64>,
    /// `None` on the first row and next to blown-up rows.
    pub orders: Vec<Option<f64>>,
    pub cr_a: f64,
    pub cr_d: f64,
    pub krylov_iters: usize,
    pub wallclock_s: f64,
    pub status: RunStatus,
}

/// Fills `orders` of every row from its predecessor.
pub fn fill_orders(rows: &mut [ConvergenceRow]) {
    for i in 0..rows.len() {
        let m = rows[i].errors.len();
        rows[i].orders = (0..m)
            .map(|c| {
                if i == 0 || rows[i].status != RunStatus::Ok || rows[i - 1].status != RunStatus::Ok {
                    return None;
                }
                observed_order(&[rows[i - 1].errors[c], rows[i].errors[c]], &[rows[i - 1].scale, rows[i].scale]).ok().map(|o| o[0])
            })
            .collect();
    }
}

pub fn csv_header(components: &[&str]) -> Vec<String> {
    let mut h = vec!["scale".to_string()];
    h.extend(components.iter().map(|c| format!("error_{c}")));
    h.extend(components.iter().map(|c| format!("order_{c}")));
    h.extend(["cr_a", "cr_d", "krylov_iters", "wallclock_s", "status"].map(String::from));
    h
}

/// `{:e}` prints the shortest representation that parses back to the same value.
fn fmt_f(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_csv<W: std::io::Write>(writer: W, components: &[&str], rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(csv_header(components))?;
    for r in rows {
        let mut rec = vec![fmt_f(r.scale)];
        rec.extend(r.errors.iter().map(|&e| fmt_f(e)));
        rec.extend(r.orders.iter().map(|o| o.map(fmt_f).unwrap_or_default()));
        rec.extend([fmt_f(r.cr_a), fmt_f(r.cr_d), r.krylov_iters.to_string(), fmt_f(r.wallclock_s), r.status.to_string()]);
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, components: &[&str], rows: &[ConvergenceRow]) -> Result<()> {
    write_csv(std::fs::File::create(path)?, components, rows)
}

/// Parses a CSV written by [`write_csv`]; returns the component names and rows.
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<(Vec<String>, Vec<ConvergenceRow>)> {
    let mut rd = csv::Reader::from_reader(reader);
    let header: Vec<String> = rd.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let comps: Vec<String> = header.iter().filter_map(|h| h.strip_prefix("error_").map(String::from)).collect();
    let m = comps.len();
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    if header != csv_header(&refs) {
        return Err(Error::InvalidInput(format!("unexpected CSV header {header:?}")));
    }
    let num = |s: &str| -> Result<f64> { s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number '{s}'"))) };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f: Vec<&str> = rec.iter().collect();
        rows.push(ConvergenceRow {
            scale: num(f[0])?,
            errors: f[1..1 + m].iter().map(|s| num(s)).collect::<Result<_>>()?,
            orders: f[1 + m..1 + 2 * m].iter().map(|s| if s.trim().is_empty() { Ok(None) } else { num(s).map(Some) }).collect::<Result<_>>()?,
            cr_a: num(f[1 + 2 * m])?,
            cr_d: num(f[2 + 2 * m])?,
            krylov_iters: f[3 + 2 * m].trim().parse().map_err(|_| Error::InvalidInput("bad krylov_iters".into()))?,
            wallclock_s: num(f[4 + 2 * m])?,
            status: f[5 + 2 * m].parse()?,
        });
    }
    Ok((comps, rows))
}
