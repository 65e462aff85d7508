//! LGL nodes, weights and differentiation, and the cost of under-integration.
//!
//! ```text
//! cargo run --release -p expdg --example lgl_basis
//! ```

use expdg::basis::{gauss_quadrature, lgl_basis, over_integration_rule};
use nalgebra::DVector;

fn main() -> expdg::Result<()> {
    for k in [1, 2, 4] {
        let b = lgl_basis(k)?;
        println!("k = {k}: nodes {:.6?}", b.nodes());
        println!("       weights {:.6?}", b.weights());
    }

    let b = lgl_basis(6)?;
    let u = DVector::from_iterator(b.len(), b.nodes().iter().map(|x| x.sin()));
    let du = b.diff_matrix() * &u;
    let err = b.nodes().iter().zip(du.iter()).map(|(x, d)| (x.cos() - d).abs()).fold(0.0, f64::max);
    println!("\nk = 6 nodal derivative of sin: max error {err:.2e}");

    println!("\nintegral of x^(2k) over [-1, 1] for k = 4 (exact {:.12})", 2.0 / 9.0);
    let f = |x: f64| x.powi(8);
    let lgl = lgl_basis(4)?.lgl_rule();
    let over = over_integration_rule(4)?;
    let gauss5 = gauss_quadrature(5)?;
    for (name, rule) in [("LGL (5 pts)", &lgl), ("Gauss (5 pts)", &gauss5), ("over-integration", &over)] {
        println!("  {name:<18} {:>2} pts, exact to degree {:>2}: {:.12}", rule.len(), rule.exact_degree, rule.integrate(f));
    }
    Ok(())
}
