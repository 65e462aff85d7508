//! Temporal orders of every integrator on a user-defined stiff system.
//!
//! The system is a periodic Allen-Cahn semi-discretization
//! `u' = nu D2 u + u - u^3`, split at `u_ref` into
//! `L = nu D2 + diag(1 - 3 u_ref^2)` and `N(u) = R(u) - L u`.
//!
//! ```text
//! cargo run --release -p expdg --example integrator_orders
//! ```

use expdg::integrators::{integrate, IntegratorKind, TimeLoopConfig};
use expdg::operator::{SemiDiscreteSystem, SplitOperator};
use expdg::phi::LinearOperator;

struct AllenCahn {
    n: usize,
    coef: f64,
}

struct AllenCahnSplit<'a> {
    sys: &'a AllenCahn,
    diag: Vec<f64>,
}

impl AllenCahn {
    fn diffuse(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            y[i] = self.coef * (x[(i + n - 1) % n] - 2.0 * x[i] + x[(i + 1) % n]);
        }
    }
}

impl LinearOperator for AllenCahnSplit<'_> {
    fn dim(&self) -> usize {
        self.sys.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sys.diffuse(x, y);
        y.iter_mut().zip(x.iter().zip(&self.diag)).for_each(|(y, (x, d))| *y += d * x);
    }
}

impl SplitOperator for AllenCahnSplit<'_> {
    fn apply_nonlinear(&self, u: &[f64], out: &mut [f64]) {
        for ((o, &u), d) in out.iter_mut().zip(u).zip(&self.diag) {
            *o = u - u * u * u - d * u;
        }
    }
}

impl SemiDiscreteSystem for AllenCahn {
    type Split<'a> = AllenCahnSplit<'a>;

    fn dim(&self) -> usize {
        self.n
    }

    fn split_at<'a>(&'a self, reference: &[f64]) -> expdg::Result<AllenCahnSplit<'a>> {
        Ok(AllenCahnSplit { sys: self, diag: reference.iter().map(|r| 1.0 - 3.0 * r * r).collect() })
    }

    fn rhs(&self, u: &[f64], out: &mut [f64]) {
        self.diffuse(u, out);
        out.iter_mut().zip(u).for_each(|(o, &u)| *o += u - u * u * u);
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> expdg::Result<()> {
    let n = 64;
    let sys = AllenCahn { n, coef: 0.02 * (n * n) as f64 };
    let u0: Vec<f64> = (0..n).map(|i| 0.8 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos() + 0.1).collect();
    let t = 1.0;
    let reference = integrate(&sys, IntegratorKind::Rk4, &u0, &TimeLoopConfig::new(1e-4, t), None)?.state;

    let dts = [0.1, 0.05, 0.025, 0.0125];
    println!("stiffness |dt L| at the largest step: {:.0}", 4.0 * sys.coef * dts[0]);
    println!("{:>10} {:>6}  errors (dt = {dts:?}) / observed orders", "method", "order");
    for kind in IntegratorKind::ALL {
        let errs: Vec<f64> = dts
            .iter()
            .map(|&dt| match integrate(&sys, kind, &u0, &TimeLoopConfig::new(dt, t), None) {
                Ok(tr) => max_diff(&tr.state, &reference),
                Err(_) => f64::NAN,
            })
            .collect();
        let orders: Vec<String> = errs.windows(2).map(|w| format!("{:.2}", (w[0] / w[1]).log2())).collect();
        let shown: Vec<String> = errs.iter().map(|e| if e.is_nan() { "blowup".into() } else { format!("{e:.2e}") }).collect();
        println!("{:>10} {:>6}  {}  [{}]", kind.name(), kind.order(), shown.join(" "), orders.join(", "));
    }
    Ok(())
}
