//! Exact dense vectors and matrices over arbitrary-precision rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors and matrices must have positive dimensions")]
    Empty,
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Integer numerators over one positive common denominator, kept reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RationalVector {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> Result<Self, LinAlgError> {
        if num.is_empty() {
            return Err(LinAlgError::Empty);
        }
        if den.is_zero() {
            return Err(LinAlgError::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in &mut num {
                *x = -core::mem::take(x);
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            for x in &mut num {
                *x /= &g;
            }
            den /= &g;
        }
        Self { num, den }
    }

    pub fn from_integers(xs: &[i64]) -> Result<Self, LinAlgError> {
        Self::new(xs.iter().map(|&x| BigInt::from(x)).collect(), BigInt::one())
    }

    pub fn from_rationals(xs: &[BigRational]) -> Result<Self, LinAlgError> {
        if xs.is_empty() {
            return Err(LinAlgError::Empty);
        }
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Ok(Self::reduced(num, den))
    }

    /// The all-zero vector of length `n >= 1`.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "vector length must be positive");
        Self { num: vec![BigInt::zero(); n], den: BigInt::one() }
    }

    /// All entries `1`.
    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "vector length must be positive");
        Self { num: vec![BigInt::one(); n], den: BigInt::one() }
    }

    /// The uniform distribution, all entries `1/n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "vector length must be positive");
        Self { num: vec![BigInt::one(); n], den: BigInt::from(n) }
    }

    /// `e_u`.
    pub fn basis(n: usize, u: usize) -> Self {
        let mut v = Self::zeros(n);
        v.num[u] = BigInt::one();
        v
    }

    /// The characteristic vector of `set`.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut v = Self::zeros(n);
        for &u in set {
            v.num[u] = BigInt::one();
        }
        v
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    /// Always false; vectors have positive length.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn get(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.to_rationals().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn check_len(&self, other: &Self) -> Result<(), LinAlgError> {
        if self.len() != other.len() {
            return Err(LinAlgError::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i8) -> Result<Self, LinAlgError> {
        self.check_len(other)?;
        let den = self.den.lcm(&other.den);
        let (fa, fb) = (&den / &self.den, &den / &other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| if sign > 0 { a * &fa + b * &fb } else { a * &fa - b * &fb })
            .collect();
        Ok(Self::reduced(num, den))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::reduced(num, &self.den * c.denom())
    }

    pub fn sum(&self) -> BigRational {
        let s: BigInt = self.num.iter().sum();
        BigRational::new(s, self.den.clone())
    }

    pub fn inner(&self, other: &Self) -> Result<BigRational, LinAlgError> {
        self.check_len(other)?;
        let s: BigInt = self.num.iter().zip(&other.num).map(|(a, b)| a * b).sum();
        Ok(BigRational::new(s, &self.den * &other.den))
    }

    pub fn norm_sq(&self) -> BigRational {
        let s: BigInt = self.num.iter().map(|a| a * a).sum();
        BigRational::new(s, &self.den * &self.den)
    }

    /// `v - (sum(v)/n) * (1,...,1)`, exactly orthogonal to the uniform vector.
    pub fn project_perp_uniform(&self) -> Self {
        let n = BigInt::from(self.len());
        let s: BigInt = self.num.iter().sum();
        let num = self.num.iter().map(|x| x * &n - &s).collect();
        Self::reduced(num, &self.den * n)
    }

    /// The `m*n` vector `v ⊗ (1/n, ..., 1/n)`, index `i*n + j`.
    pub fn lift(&self, n: usize) -> Result<Self, LinAlgError> {
        if n == 0 {
            return Err(LinAlgError::Empty);
        }
        let num = self.num.iter().flat_map(|x| core::iter::repeat_n(x.clone(), n)).collect();
        Ok(Self::reduced(num, &self.den * BigInt::from(n)))
    }

    /// Sums out the second tensor factor of an `m*n` vector.
    pub fn project(&self, m: usize, n: usize) -> Result<Self, LinAlgError> {
        if m == 0 || n == 0 {
            return Err(LinAlgError::Empty);
        }
        if self.len() != m * n {
            return Err(LinAlgError::DimensionMismatch { expected: m * n, found: self.len() });
        }
        let num = self.num.chunks(n).map(|c| c.iter().sum()).collect();
        Ok(Self::reduced(num, self.den.clone()))
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    a: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_entries(rows: usize, cols: usize, a: Vec<BigRational>) -> Result<Self, LinAlgError> {
        if rows == 0 || cols == 0 {
            return Err(LinAlgError::Empty);
        }
        if a.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch { expected: rows * cols, found: a.len() });
        }
        Ok(Self { rows, cols, a })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        let mut a = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                a.push(f(r, c));
            }
        }
        Self { rows, cols, a }
    }

    pub fn from_integers(rows: usize, cols: usize, xs: &[i64]) -> Result<Self, LinAlgError> {
        Self::from_entries(rows, cols, xs.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigRational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { BigRational::one() } else { BigRational::zero() })
    }

    /// `J_n`, every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        let x = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::from_fn(n, n, |_, _| x.clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.a[r * self.cols + c]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.a
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = vec![BigRational::zero(); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(k, c);
                    if !y.is_zero() {
                        out[r * other.cols + c] += x * y;
                    }
                }
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, a: out })
    }

    pub fn matvec(&self, v: &RationalVector) -> Result<RationalVector, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        // Clear the matrix denominators row by row, then divide once.
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = &self.a[r * self.cols..(r + 1) * self.cols];
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let s: BigInt = row
                .iter()
                .zip(v.numerators())
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, n)| x.numer() * (&l / x.denom()) * n)
                .sum();
            out.push(BigRational::new(s, l * v.denominator()));
        }
        RationalVector::from_rationals(&out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { rows: self.rows, cols: self.cols, a: self.a.iter().map(|x| x * c).collect() }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Self, LinAlgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let a = self.a.iter().zip(&other.a).map(|(x, y)| f(x, y)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, a })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, |x, y| x - y)
    }

    /// `I_n ⊗ self`, block diagonal.
    pub fn kron_identity(&self, n: usize) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(
            n * r,
            n * c,
            |i, j| {
                if i / r == j / c {
                    self.get(i % r, j % c).clone()
                } else {
                    BigRational::zero()
                }
            },
        )
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.a.chunks(self.cols).map(|row| row.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigRational> {
        (0..self.cols).map(|c| (0..self.rows).map(|r| self.get(r, c)).sum()).collect()
    }

    /// Square, nonnegative, all row and column sums exactly 1.
    pub fn is_stochastic(&self) -> bool {
        self.rows == self.cols
            && self.a.iter().all(|x| !x.is_negative())
            && self.row_sums().iter().chain(self.col_sums().iter()).all(One::is_one)
    }

    /// Square 0/1 matrix with exactly one 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        self.rows == self.cols
            && self.a.iter().all(|x| x.is_zero() || x.is_one())
            && self.row_sums().iter().chain(self.col_sums().iter()).all(One::is_one)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}
