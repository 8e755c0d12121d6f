//! Dense complex linear algebra for one- and two-qubit objects.
//!
//! Only dimensions 2 and 4 are admitted. Storage is row-major and the
//! two-qubit basis index is `2 * alice_bit + bob_bit`.

use std::fmt;
use std::ops::{Index, IndexMut};

pub use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

const MAX_SERIES_TERMS: usize = 64;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

fn check_finite(entries: &[Complex], what: &'static str) -> Result<()> {
    if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A state vector of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        check_dim(entries.len())?;
        check_finite(&entries, "vector")?;
        Ok(Self { entries })
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfBounds { index, len: dim });
        }
        let mut entries = vec![Complex::new(0.0, 0.0); dim];
        entries[index] = Complex::new(1.0, 0.0);
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product of two single-qubit vectors.
    pub fn tensor(&self, other: &ComplexVector) -> Result<ComplexVector> {
        if self.dim() != 2 || other.dim() != 2 {
            return Err(Error::UnsupportedDimension(self.dim().max(other.dim()) * 2));
        }
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a * b))
            .collect();
        Ok(ComplexVector { entries })
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

/// A square operator of dimension 2 or 4, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        check_finite(&entries, "matrix")?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex; N]; N]) -> Result<Self> {
        Self::new(N, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from real entries.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(
            N,
            rows.into_iter()
                .flatten()
                .map(|x| Complex::new(x, 0.0))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    fn check_same_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim == other_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other_dim,
            })
        }
    }

    pub fn mat_mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(other.dim)?;
        let n = self.dim;
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(ComplexMatrix { dim: n, entries })
    }

    pub fn mat_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        self.check_same_dim(v.dim())?;
        let n = self.dim;
        let entries = (0..n)
            .map(|i| (0..n).map(|k| self.entries[i * n + k] * v.entries[k]).sum())
            .collect();
        Ok(ComplexVector { entries })
    }

    /// Kronecker product `self ⊗ other`; block `(i, j)` is `self[i, j] * other`.
    pub fn tensor(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim * other.dim));
        }
        let mut out = ComplexMatrix::zeros(4)?;
        for i in 0..2 {
            for j in 0..2 {
                let a = self[(i, j)];
                for k in 0..2 {
                    for l in 0..2 {
                        out[(2 * i + k, 2 * j + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].conj());
            }
        }
        ComplexMatrix { dim: n, entries }
    }

    pub fn scale(&self, factor: Complex) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(other.dim)?;
        Ok(ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.check_same_dim(other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff every entry of `A†A − I` has modulus at most `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = self
            .adjoint()
            .mat_mul(self)
            .expect("adjoint preserves dimension");
        let identity = ComplexMatrix::identity(self.dim).expect("dimension already validated");
        gram.max_abs_diff(&identity)
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    fn inf_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaled Taylor series followed by repeated squaring.
    ///
    /// The argument is scaled by `2^-s` until its infinity norm is at most 1/2,
    /// then series terms are accumulated until the next term falls below
    /// `tol * 2^-s` in infinity norm. The remaining tail is bounded by that term.
    pub fn exp_series(&self, tol: f64) -> Result<ComplexMatrix> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "tol",
                value: tol,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        let norm = self.inf_norm();
        let mut squarings = 0u32;
        while norm / 2f64.powi(squarings as i32) > 0.5 {
            squarings += 1;
        }
        let scaled = self.scale(Complex::new(2f64.powi(-(squarings as i32)), 0.0));
        let term_tol = tol * 2f64.powi(-(squarings as i32));

        let mut sum = ComplexMatrix::identity(self.dim)?;
        let mut term = ComplexMatrix::identity(self.dim)?;
        let mut converged = false;
        for k in 1..=MAX_SERIES_TERMS {
            term = term
                .mat_mul(&scaled)?
                .scale(Complex::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term)?;
            if term.inf_norm() < term_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(MAX_SERIES_TERMS));
        }
        for _ in 0..squarings {
            sum = sum.mat_mul(&sum)?;
        }
        Ok(sum)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn defect() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[0.0, 1.0], [-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn rejects_unsupported_dimensions() {
        assert_eq!(
            ComplexMatrix::identity(3),
            Err(Error::UnsupportedDimension(3))
        );
        assert!(ComplexVector::new(vec![c(1.0, 0.0)]).is_err());
        assert_eq!(
            ComplexMatrix::new(2, vec![c(f64::NAN, 0.0); 4]),
            Err(Error::NonFinite("matrix"))
        );
    }

    #[test]
    fn mat_mul_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(i2.mat_mul(&i2).unwrap(), i2);
        let d = defect();
        let minus_i2 = ComplexMatrix::from_real_rows([[-1.0, 0.0], [0.0, -1.0]]).unwrap();
        assert_eq!(d.mat_mul(&d).unwrap(), minus_i2);
        let a = ComplexMatrix::from_rows([[c(1.0, 2.0), c(0.5, -1.0)], [c(3.0, 0.0), c(0.0, 1.0)]])
            .unwrap();
        assert_eq!(a.mat_mul(&i2).unwrap(), a);
        assert!(matches!(
            a.mat_mul(&ComplexMatrix::identity(4).unwrap()),
            Err(Error::DimensionMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn mat_vec_examples() {
        let v = ComplexVector::new(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.0, 1.0), c(2.0, -2.0)])
            .unwrap();
        assert_eq!(ComplexMatrix::identity(4).unwrap().mat_vec(&v).unwrap(), v);
        let d = defect();
        let zero = ComplexVector::basis(2, 0).unwrap();
        let one = ComplexVector::basis(2, 1).unwrap();
        assert_eq!(
            d.mat_vec(&zero).unwrap().entries(),
            &[c(0.0, 0.0), c(-1.0, 0.0)]
        );
        assert_eq!(d.mat_vec(&one).unwrap(), zero);
        assert!(d.mat_vec(&v).is_err());
    }

    #[test]
    fn tensor_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(i2.tensor(&i2).unwrap(), ComplexMatrix::identity(4).unwrap());
        let expected = ComplexMatrix::from_real_rows([
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(defect().tensor(&defect()).unwrap(), expected);

        let ket = ComplexVector::basis(2, 0)
            .unwrap()
            .tensor(&ComplexVector::basis(2, 1).unwrap())
            .unwrap();
        assert_eq!(ket, ComplexVector::basis(4, 1).unwrap());
        assert!(ComplexMatrix::identity(4)
            .unwrap()
            .tensor(&i2)
            .is_err());
    }

    #[test]
    fn adjoint_examples() {
        let i4 = ComplexMatrix::identity(4).unwrap();
        assert_eq!(i4.adjoint(), i4);
        let q = ComplexMatrix::from_rows([[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]])
            .unwrap();
        let q_dag =
            ComplexMatrix::from_rows([[c(0.0, -1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
                .unwrap();
        assert_eq!(q.adjoint(), q_dag);
        let a = ComplexMatrix::from_rows([[c(1.0, 2.0), c(0.5, -1.0)], [c(3.0, 0.0), c(0.0, 1.0)]])
            .unwrap();
        assert_eq!(a.adjoint()[(0, 1)], c(3.0, 0.0));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn unitarity_examples() {
        assert!(ComplexMatrix::identity(2).unwrap().is_unitary(1e-12));
        let shear = ComplexMatrix::from_real_rows([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(!shear.is_unitary(1e-12));
    }

    #[test]
    fn exp_series_examples() {
        let zero = ComplexMatrix::zeros(4).unwrap();
        assert_eq!(
            zero.exp_series(1e-14).unwrap(),
            ComplexMatrix::identity(4).unwrap()
        );

        let diag = ComplexMatrix::from_rows([[c(1.3, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-2.1, 0.5)]])
            .unwrap();
        let expected = ComplexMatrix::from_rows([
            [c(1.3, 0.0).exp(), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-2.1, 0.5).exp()],
        ])
        .unwrap();
        let got = diag.exp_series(1e-14).unwrap();
        assert!(got.max_abs_diff(&expected).unwrap() < 1e-12);

        // exp(iθ·X) with X² = I equals cos θ·I + i sin θ·X.
        let dd = defect().tensor(&defect()).unwrap();
        for &half_angle in &[0.0, 0.15, 0.5, std::f64::consts::FRAC_PI_4] {
            let closed = ComplexMatrix::identity(4)
                .unwrap()
                .scale(c(f64::cos(half_angle), 0.0))
                .add(&dd.scale(c(0.0, f64::sin(half_angle))))
                .unwrap();
            let series = dd.scale(c(0.0, half_angle)).exp_series(1e-14).unwrap();
            assert!(series.max_abs_diff(&closed).unwrap() < 1e-10);
        }
    }

    #[test]
    fn exp_series_rejects_bad_tolerance() {
        let zero = ComplexMatrix::zeros(2).unwrap();
        assert!(zero.exp_series(0.0).is_err());
        assert!(zero.exp_series(f64::NAN).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(ComplexVector::basis(4, 0).unwrap().norm(), 1.0);
        let half = ComplexVector::new(vec![c(0.5, 0.0); 4]).unwrap();
        assert_eq!(half.norm(), 1.0);
        let zero = ComplexVector::new(vec![c(0.0, 0.0); 4]).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }
}
