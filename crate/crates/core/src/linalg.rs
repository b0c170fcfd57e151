//! Small dense complex-matrix helpers: conjugate transpose and a matrix
//! exponential via scaling-and-squaring with a Padé(13) approximant
//! (Higham 2005). The matrices here are at most a few thousand square, so
//! no sparse or blocked variants are needed.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::real::Real;

/// Conjugate transpose.
pub fn dagger<T: Real>(m: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    m.t().mapv(|z| z.conj())
}

/// Identity matrix of size `n`.
pub fn eye<T: Real>(n: usize) -> Array2<Complex<T>> {
    Array2::from_diag_elem(n, Complex::new(T::one(), T::zero()))
}

/// Matrix 1-norm (max column sum of moduli).
fn one_norm<T: Real>(a: &Array2<Complex<T>>) -> T {
    let mut max = T::zero();
    for col in a.columns() {
        let s: T = col.iter().map(|z| z.norm()).sum();
        if s > max {
            max = s;
        }
    }
    max
}

fn scaled<T: Real>(a: &Array2<Complex<T>>, c: f64) -> Array2<Complex<T>> {
    let s = T::from_f64(c);
    a.mapv(|z| z * s)
}

/// Padé(13,13) numerator coefficients, Higham (2005) Table 10.4.
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

/// Compute `exp(A)` for a square complex matrix.
pub fn expm<T: Real>(a: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    if n == 1 {
        let mut r = Array2::zeros((1, 1));
        r[[0, 0]] = a[[0, 0]].exp();
        return r;
    }

    // theta_13 from Higham Table 10.2
    let theta = 5.371920351148152_f64;
    let norm = one_norm(a).to_f64();
    let squarings = if norm > theta {
        (norm / theta).log2().ceil() as u32
    } else {
        0
    };
    let a1 = scaled(a, 0.5f64.powi(squarings as i32));

    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = eye::<T>(n);

    let w1 = scaled(&a6, PADE13[13]) + scaled(&a4, PADE13[11]) + scaled(&a2, PADE13[9]);
    let w2 = a6.dot(&w1)
        + scaled(&a6, PADE13[7])
        + scaled(&a4, PADE13[5])
        + scaled(&a2, PADE13[3])
        + scaled(&id, PADE13[1]);
    let u = a1.dot(&w2);
    let z1 = scaled(&a6, PADE13[12]) + scaled(&a4, PADE13[10]) + scaled(&a2, PADE13[8]);
    let v = a6.dot(&z1)
        + scaled(&a6, PADE13[6])
        + scaled(&a4, PADE13[4])
        + scaled(&a2, PADE13[2])
        + scaled(&id, PADE13[0]);

    // r = (v - u)^{-1} (v + u)
    let mut r = solve(&(&v - &u), &(&v + &u));
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r
}

/// Apply `exp(A)` to a vector (dense exponential, then a matvec).
pub fn expm_apply<T: Real>(
    a: &Array2<Complex<T>>,
    v: &Array1<Complex<T>>,
) -> Array1<Complex<T>> {
    expm(a).dot(v)
}

/// Solve `A X = B` by Gaussian elimination with partial pivoting.
fn solve<T: Real>(a: &Array2<Complex<T>>, b: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    let n = a.nrows();
    let m = b.ncols();
    let mut lhs = a.clone();
    let mut rhs = b.clone();

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = lhs[[col, col]].norm();
        for row in col + 1..n {
            let mag = lhs[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        assert!(pivot_mag > T::zero(), "singular matrix in expm solve");
        if pivot_row != col {
            for j in 0..n {
                lhs.swap([col, j], [pivot_row, j]);
            }
            for j in 0..m {
                rhs.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = lhs[[col, col]];
        for row in col + 1..n {
            let factor = lhs[[row, col]] / pivot;
            if factor.norm() == T::zero() {
                continue;
            }
            for j in col..n {
                let v = lhs[[col, j]];
                lhs[[row, j]] -= factor * v;
            }
            for j in 0..m {
                let v = rhs[[col, j]];
                rhs[[row, j]] -= factor * v;
            }
        }
    }

    let mut x: Array2<Complex<T>> = Array2::zeros((n, m));
    for col in (0..n).rev() {
        for j in 0..m {
            let mut acc = rhs[[col, j]];
            for k in col + 1..n {
                acc -= lhs[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = acc / lhs[[col, col]];
        }
    }
    x
}
