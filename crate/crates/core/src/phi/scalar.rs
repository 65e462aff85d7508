/// `phi_i(tau)`, with `phi_0 = exp`.
///
/// Power series for moderate arguments, the downward-stable recurrence
/// `phi_{i+1} = (phi_i - 1/i!) / tau` elsewhere.
pub fn phi_scalar(i: usize, tau: f64) -> f64 {
    if i == 0 {
        return tau.exp();
    }
    if i == 1 && tau.abs() >= 1e-2 {
        return tau.exp_m1() / tau;
    }
    if (-2.0..=30.0).contains(&tau) {
        return series(i, tau);
    }
    let mut phi = tau.exp_m1() / tau;
    let mut fact = 1.0;
    for j in 1..i {
        fact *= j as f64;
        phi = (phi - 1.0 / fact) / tau;
    }
    phi
}

fn series(i: usize, tau: f64) -> f64 {
    // sum_{j >= 0} tau^j / (j + i)!
    let mut term = 1.0 / factorial(i);
    let mut sum = term;
    for j in 1..400 {
        term *= tau / (j + i) as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|j| j as f64).product()
}
