//! Dense matrix exponential (scaling and squaring with diagonal Padé) and
//! matrix phi-functions by block augmentation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const THETA: [f64; 5] = [1.495585217958292e-2, 2.539_398_330_063_23e-1, 9.504178996162932e-1, 2.097847961257068, 5.371920351148152];

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn pade_low(a: &DMatrix<f64>, coef: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut even = DMatrix::identity(n, n) * coef[0];
    let mut odd = DMatrix::identity(n, n) * coef[1];
    let mut pow = DMatrix::identity(n, n);
    let mut j = 2;
    while j < coef.len() {
        pow = &pow * &a2;
        even += &pow * coef[j];
        if j + 1 < coef.len() {
            odd += &pow * coef[j + 1];
        }
        j += 2;
    }
    (a * odd, even)
}

fn pade13(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = a * (inner_u + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1]);
    let inner_v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = inner_v + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    (u, v)
}

/// `exp(a)` by scaling and squaring; the Padé degree is chosen from the 1-norm.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let nrm = norm1(a);
    if !nrm.is_finite() {
        return Err(Error::Overflow(nrm));
    }
    let (u, v, squarings) = if nrm <= THETA[0] {
        let (u, v) = pade_low(a, &PADE3);
        (u, v, 0)
    } else if nrm <= THETA[1] {
        let (u, v) = pade_low(a, &PADE5);
        (u, v, 0)
    } else if nrm <= THETA[2] {
        let (u, v) = pade_low(a, &PADE7);
        (u, v, 0)
    } else if nrm <= THETA[3] {
        let (u, v) = pade_low(a, &PADE9);
        (u, v, 0)
    } else {
        let s = ((nrm / THETA[4]).log2().ceil()).max(0.0) as i32;
        let scaled = a * 2f64.powi(-s);
        let (u, v) = pade13(&scaled);
        (u, v, s)
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(Error::Overflow(nrm))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow(nrm));
    }
    Ok(r)
}

/// `phi_i(m)` from the top-right block of `exp` of the block matrix
/// `[[m, I, 0, ..], [0, 0, I, ..], .., [0, .., 0]]` of size `n (i + 1)`.
pub fn phi_dense(i: usize, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch("phi_dense needs a square matrix".into()));
    }
    if i == 0 {
        return expm(m);
    }
    let big = n * (i + 1);
    let mut w = DMatrix::<f64>::zeros(big, big);
    w.view_mut((0, 0), (n, n)).copy_from(m);
    for b in 0..i {
        for d in 0..n {
            w[(b * n + d, (b + 1) * n + d)] = 1.0;
        }
    }
    let e = expm(&w)?;
    Ok(e.view((0, i * n), (n, n)).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::scalar::{factorial, phi_scalar};
    use nalgebra::DVector;

    fn max_abs(a: &DMatrix<f64>) -> f64 {
        a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn expm_of_symmetric_matches_eigen() {
        // Symmetric test matrix: compare with the spectral formula.
        let n = 7;
        let a = DMatrix::from_fn(n, n, |i, j| ((i * 3 + j * 5) % 7) as f64 - 3.0);
        let a = (&a + a.transpose()) * 0.4;
        let eig = a.clone().symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::exp));
        let expected = &eig.eigenvectors * d * eig.eigenvectors.transpose();
        let got = expm(&a).unwrap();
        assert!(max_abs(&(got - &expected)) < 1e-12 * max_abs(&expected));
    }

    #[test]
    fn expm_low_norm_branches_match_taylor() {
        for scale in [1e-3, 0.1, 0.5, 1.5, 3.0] {
            let a = DMatrix::from_row_slice(3, 3, &[0.1, 0.4, -0.2, 0.3, -0.5, 0.1, 0.0, 0.2, 0.3]) * scale;
            let mut taylor = DMatrix::identity(3, 3);
            let mut term = DMatrix::identity(3, 3);
            for j in 1..60 {
                term = &term * &a / j as f64;
                taylor += &term;
            }
            let got = expm(&a).unwrap();
            assert!(max_abs(&(got - taylor)) < 1e-14, "scale {scale}");
        }
    }

    #[test]
    fn phi_of_zero_is_scaled_identity() {
        let z = DMatrix::zeros(4, 4);
        for i in 0..=4 {
            let p = phi_dense(i, &z).unwrap();
            let expected = DMatrix::<f64>::identity(4, 4) / factorial(i);
            assert!(max_abs(&(p - expected)) < 1e-15);
        }
    }

    #[test]
    fn phi_of_diagonal_is_scalar_phi() {
        let lam = [-20.0, -3.5, -0.4, 0.0, 0.7, 1.9];
        let m = DMatrix::from_diagonal(&DVector::from_column_slice(&lam));
        for i in 0..=6 {
            let p = phi_dense(i, &m).unwrap();
            for (j, &l) in lam.iter().enumerate() {
                let s = phi_scalar(i, l);
                assert!((p[(j, j)] - s).abs() < 1e-13 * s.abs().max(1e-3), "i={i} lambda={l}");
            }
        }
    }

    #[test]
    fn matrix_recurrence() {
        let m = DMatrix::from_fn(6, 6, |i, j| (((i + 2 * j) * 7) % 11) as f64 / 5.0 - 1.0 - if i == j { 2.0 } else { 0.0 });
        let id = DMatrix::<f64>::identity(6, 6);
        for i in 0..=4 {
            let lhs = &m * phi_dense(i + 1, &m).unwrap();
            let rhs = phi_dense(i, &m).unwrap() - &id / factorial(i);
            assert!(max_abs(&(lhs - rhs)) < 1e-11, "i={i}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let a = DMatrix::from_diagonal_element(2, 2, 1e6);
        assert!(matches!(expm(&a), Err(Error::Overflow(_))));
    }
}
