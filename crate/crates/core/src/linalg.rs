//! Dense complex matrix helpers: exponential, Hermiticity and unitarity checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Padé(13,13) numerator coefficients (the denominator uses alternating signs).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which Padé(13) alone reaches double precision.
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scale(a: &CMatrix, s: f64) -> CMatrix {
    a.map(|z| z * s)
}

/// exp(A) by scaling and squaring around a Padé(13) rational core.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::domain("matrix exponential of a non-finite matrix"));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = scale(a, 0.5f64.powi(squarings));

    let eye = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = |k: usize| PADE13[k];

    let u_inner = scale(&a6, b(13)) + scale(&a4, b(11)) + scale(&a2, b(9));
    let u = &a * (&a6 * u_inner + scale(&a6, b(7)) + scale(&a4, b(5)) + scale(&a2, b(3)) + scale(&eye, b(1)));
    let v_inner = scale(&a6, b(12)) + scale(&a4, b(10)) + scale(&a2, b(8));
    let v = &a6 * v_inner + scale(&a6, b(6)) + scale(&a4, b(4)) + scale(&a2, b(2)) + scale(&eye, b(0));

    let numerator = &v + &u;
    let denominator = &v - &u;
    let mut result = denominator
        .lu()
        .solve(&numerator)
        .ok_or_else(|| Error::tolerance("singular Padé denominator in matrix exponential"))?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// max |A − A†| entrywise.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// (A + A†)/2.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).map(|z| z * 0.5)
}

/// Spectral norm of U†U − I.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u - CMatrix::identity(n, n);
    let gram = hermitian_part(&gram);
    gram.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Tr(A·B) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
