//! Complex (Study) embedding `χ : M_n(ℍ) → M_2n(ℂ)` and an independent
//! complex LU determinant. `D(A)² = |det χ(A)|` makes this the oracle for the
//! quaternionic elimination.

use num_complex::Complex64;

use crate::error::Result;
use crate::qlinalg::QMatrix;

/// Dense row-major complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Writes `q = z + w j` as the block `[[z, w], [-w̄, z̄]]`.
pub fn complex_embedding(a: &QMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let mut out = ComplexMatrix::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            let q = a[(r, c)];
            let z = Complex64::new(q.w, q.x);
            let w = Complex64::new(q.y, q.z);
            out.set(2 * r, 2 * c, z);
            out.set(2 * r, 2 * c + 1, w);
            out.set(2 * r + 1, 2 * c, -w.conj());
            out.set(2 * r + 1, 2 * c + 1, z.conj());
        }
    }
    Ok(out)
}

/// Determinant by LU with partial pivoting.
pub fn complex_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for r in k + 1..n {
            let v = a[r * n + k].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for r in k + 1..n {
            let f = a[r * n + k] / pivot;
            for j in k + 1..n {
                let t = f * a[k * n + j];
                a[r * n + j] -= t;
            }
        }
    }
    det
}

/// `sqrt |det χ(A)|`.
pub fn study_det(a: &QMatrix) -> Result<f64> {
    Ok(complex_det(&complex_embedding(a)?).norm().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use crate::rng::stream;

    #[test]
    fn embeds_one_and_i() {
        let one = complex_embedding(&QMatrix::identity(1)).unwrap();
        assert_eq!(one.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(one.get(1, 1), Complex64::new(1.0, 0.0));
        assert_eq!(one.get(0, 1), Complex64::new(0.0, 0.0));
        let i = complex_embedding(&QMatrix::diag(&[Quaternion::I])).unwrap();
        assert_eq!(i.get(0, 0), Complex64::new(0.0, 1.0));
        assert_eq!(i.get(1, 1), Complex64::new(0.0, -1.0));
        assert_eq!(i.get(0, 1).norm() + i.get(1, 0).norm(), 0.0);
    }

    #[test]
    fn embedding_is_multiplicative() {
        let mut rng = stream(31, 0);
        for _ in 0..20 {
            let a = QMatrix::random_gaussian(2, 2, &mut rng);
            let b = QMatrix::random_gaussian(2, 2, &mut rng);
            let lhs = complex_embedding(&a.matmul(&b).unwrap()).unwrap();
            let rhs = complex_embedding(&a)
                .unwrap()
                .matmul(&complex_embedding(&b).unwrap());
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(complex_embedding(&QMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn complex_det_of_small_matrices() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 1.0));
        m.set(0, 1, Complex64::new(2.0, 0.0));
        m.set(1, 0, Complex64::new(0.0, 3.0));
        m.set(1, 1, Complex64::new(4.0, 0.0));
        // (1+i)·4 − 2·3i = 4 − 2i
        let d = complex_det(&m);
        assert!((d - Complex64::new(4.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn study_determinant_is_real_nonnegative() {
        let a = QMatrix::random_gaussian(3, 3, &mut stream(32, 0));
        let d = complex_det(&complex_embedding(&a).unwrap());
        assert!(d.re > 0.0);
        assert!(d.im.abs() <= 1e-10 * d.re);
    }
}
