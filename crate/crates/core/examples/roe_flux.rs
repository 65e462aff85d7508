//! The Roe numerical flux and its characteristic decomposition for a few
//! left/right states.
//!
//! ```text
//! cargo run --release -p expdg --example roe_flux
//! ```

use expdg::euler::{eigensystem, euler_flux, roe_average, roe_flux, EulerState};

fn main() -> expdg::Result<()> {
    let gamma = 1.4;
    let cases = [
        ("Sod", EulerState::from_primitive(1.0, [0.0, 0.0], 1.0, gamma), EulerState::from_primitive(0.125, [0.0, 0.0], 0.1, gamma)),
        ("shear", EulerState::from_primitive(1.0, [0.3, 1.0], 1.0, gamma), EulerState::from_primitive(1.0, [0.3, -1.0], 1.0, gamma)),
        ("supersonic", EulerState::from_primitive(1.0, [3.0, 0.0], 1.0, gamma), EulerState::from_primitive(0.8, [2.5, 0.0], 0.7, gamma)),
    ];
    let n = [1.0, 0.0];
    for (name, qm, qp) in cases {
        let avg = roe_average(&qm, &qp, gamma)?;
        let (_, _, lambda) = eigensystem(&avg, n, gamma);
        let f = roe_flux(&qm, &qp, n, gamma)?;
        let fl = euler_flux(&qm, gamma)?[0];
        println!("{name}:");
        println!("  Roe velocity {:?}, H {:.4}, a {:.4}", avg.velocity, avg.enthalpy, avg.sound_speed);
        println!("  wave speeds {:?}", lambda.as_slice());
        println!("  F_roe  {:?}", f.as_slice());
        println!("  F(q-)  {:?}", fl.as_slice());
    }
    Ok(())
}
