//! Dense complex-matrix primitives.
//!
//! Hermitian eigendecomposition, positive-semidefiniteness testing, Gram-matrix
//! factorization into kets and entrywise (Hadamard) products and quotients.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default relative tolerance for positivity tests.
pub const DEFAULT_TOL: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-12;
const UNIT_DIAG_TOL: f64 = 1e-10;
const KET_NORM_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c64(x, 0.0)))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest deviation `|M - M^H|` over all entries.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Returns `(M + M^H) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Kronecker product with row-major index convention `i1 * n2 + i2`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let scale = max_abs(m).max(1.0);
    let deviation = hermitian_defect(m);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(())
}

/// Spectrum of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Rebuilds `V diag(λ) V^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let l = self.values[j];
            scaled.column_mut(j).scale_mut(l);
        }
        &scaled * self.vectors.adjoint()
    }

    /// Applies a real function to the spectrum: `V diag(f(λ)) V^H`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let v = f(self.values[j]);
            scaled.column_mut(j).scale_mut(v);
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    check_hermitian(m)?;
    Ok(hermitian_eig_unchecked(&hermitize(m)))
}

pub(crate) fn hermitian_eig_unchecked(m: &CMatrix) -> HermitianEig {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEig { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.values.iter().copied().collect())
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.min())
}

/// True iff the smallest eigenvalue is at least `-tol * max(1, ||M||)`.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    let eig = hermitian_eig(m)?;
    Ok(eig.min() >= -tol * eig.spectral_norm().max(1.0))
}

/// Hermitian matrix with unit diagonal, holding inner products `<k_j|k_m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(CMatrix);

impl GramMatrix {
    /// Validates shape, finiteness, Hermiticity and the unit diagonal.
    ///
    /// The stored matrix is exactly Hermitian with an exactly unit diagonal.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian(&m)?;
        for j in 0..m.nrows() {
            let z = m[(j, j)];
            if (z.re - 1.0).abs() > UNIT_DIAG_TOL || z.im.abs() > UNIT_DIAG_TOL {
                return Err(Error::NotUnitDiagonal { index: j, value: z.re });
            }
        }
        Ok(Self::normalized(hermitize(&m)))
    }

    /// Builds from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(real_matrix(dim, dim, data))
    }

    fn normalized(mut m: CMatrix) -> Self {
        for j in 0..m.nrows() {
            m[(j, j)] = c64(1.0, 0.0);
        }
        GramMatrix(m)
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Self::normalized(hermitize(&m))
    }

    pub fn identity(dim: usize) -> Self {
        GramMatrix(CMatrix::identity(dim, dim))
    }

    pub fn ones(dim: usize) -> Self {
        GramMatrix(CMatrix::from_element(dim, dim, c64(1.0, 0.0)))
    }

    /// Matrix with every off-diagonal entry equal to `x`.
    pub fn uniform(dim: usize, x: Complex64) -> Result<Self> {
        let mut m = CMatrix::from_element(dim, dim, x);
        for j in 0..dim {
            for k in 0..j {
                m[(j, k)] = x.conj();
            }
            m[(j, j)] = c64(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.0[(j, k)]
    }

    pub fn eig(&self) -> HermitianEig {
        hermitian_eig_unchecked(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().min()
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        let eig = self.eig();
        eig.min() >= -tol * eig.spectral_norm().max(1.0)
    }

    /// Gram matrix of a tensor-product family, `G1 ⊗ G2`.
    pub fn kron(&self, other: &GramMatrix) -> GramMatrix {
        GramMatrix(kron(&self.0, &other.0))
    }

    /// Entrywise complex conjugate (the Gram matrix of conjugated kets).
    pub fn conj(&self) -> GramMatrix {
        GramMatrix(self.0.map(|z| z.conj()))
    }
}

/// An ordered family of unit vectors stored as matrix columns.
#[derive(Debug, Clone, PartialEq)]
pub struct KetFamily {
    kets: CMatrix,
}

impl KetFamily {
    /// Takes kets as the columns of `kets`; each must have unit norm.
    pub fn new(kets: CMatrix) -> Result<Self> {
        if kets.ncols() == 0 || kets.nrows() == 0 {
            return Err(Error::EmptyFamily);
        }
        if !is_finite(&kets) {
            return Err(Error::NonFinite);
        }
        let mut kets = kets;
        for j in 0..kets.ncols() {
            let norm = kets.column(j).norm();
            if (norm - 1.0).abs() > KET_NORM_TOL {
                return Err(Error::NotNormalized { index: j, norm });
            }
            kets.column_mut(j).unscale_mut(norm);
        }
        Ok(KetFamily { kets })
    }

    /// Normalizes each nonzero column.
    pub fn normalize(mut kets: CMatrix) -> Result<Self> {
        for j in 0..kets.ncols() {
            let norm = kets.column(j).norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::NotNormalized { index: j, norm });
            }
            kets.column_mut(j).unscale_mut(norm);
        }
        Self::new(kets)
    }

    pub fn from_vectors(kets: &[CVector]) -> Result<Self> {
        if kets.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let dim = kets[0].len();
        if let Some(bad) = kets.iter().find(|k| k.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Self::new(CMatrix::from_columns(kets))
    }

    /// Kets given as real row-major columns: `data[r * count + j]` is entry `r` of ket `j`.
    pub fn from_real_columns(dim: usize, count: usize, data: &[f64]) -> Result<Self> {
        Self::new(real_matrix(dim, count, data))
    }

    /// Standard basis `|0>, ..., |d-1>`.
    pub fn standard_basis(dim: usize) -> Self {
        KetFamily { kets: CMatrix::identity(dim, dim) }
    }

    pub fn count(&self) -> usize {
        self.kets.ncols()
    }

    pub fn dim(&self) -> usize {
        self.kets.nrows()
    }

    pub fn ket(&self, j: usize) -> CVector {
        self.kets.column(j).into_owned()
    }

    /// Kets as columns.
    pub fn matrix(&self) -> &CMatrix {
        &self.kets
    }

    pub fn gram(&self) -> GramMatrix {
        GramMatrix::from_raw(self.kets.adjoint() * &self.kets)
    }

    /// Number of singular values above `tol` times the largest.
    pub fn span_rank(&self, tol: f64) -> usize {
        let sv = self.kets.clone().singular_values();
        let top = sv.iter().copied().fold(0.0, f64::max);
        sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
    }

    pub fn is_independent(&self, tol: f64) -> bool {
        self.span_rank(tol) == self.count()
    }

    pub fn spans(&self, tol: f64) -> bool {
        self.span_rank(tol) == self.dim()
    }

    /// Multiplies ket `j` by `exp(i phases[j])`.
    pub fn with_phases(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.count() {
            return Err(Error::DimensionMismatch { expected: self.count(), found: phases.len() });
        }
        let mut kets = self.kets.clone();
        for (j, &p) in phases.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, p);
            for r in 0..kets.nrows() {
                kets[(r, j)] *= ph;
            }
        }
        Ok(KetFamily { kets })
    }

    /// Applies a unitary (or isometry) `U` to every ket.
    pub fn transform(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.ncols() });
        }
        KetFamily::new(u * &self.kets)
    }

    /// Pairwise tensor products `|a_j> ⊗ |b_k>` indexed `j * n_b + k`.
    pub fn tensor(&self, other: &KetFamily) -> KetFamily {
        let mut cols = Vec::with_capacity(self.count() * other.count());
        for j in 0..self.count() {
            for k in 0..other.count() {
                cols.push(kron_vec(&self.ket(j), &other.ket(k)));
            }
        }
        KetFamily { kets: CMatrix::from_columns(&cols) }
    }

    /// Entrywise complex conjugate in the standard basis.
    pub fn conj(&self) -> KetFamily {
        KetFamily { kets: self.kets.map(|z| z.conj()) }
    }
}

/// Factors a PSD Gram matrix into kets of minimal dimension.
///
/// Eigenvalues at or below `tol * max(1, ||G||)` are dropped. Each kept
/// eigenvector is phase-fixed so that its first nonzero component is real
/// positive, which makes the output deterministic.
pub fn gram_to_kets(g: &GramMatrix, tol: f64) -> Result<KetFamily> {
    let eig = g.eig();
    let scale = eig.spectral_norm().max(1.0);
    if eig.min() < -tol * scale {
        return Err(Error::NotPsd { min_eig: eig.min() });
    }
    let n = g.dim();
    let kept: Vec<usize> = (0..n).rev().filter(|&r| eig.values[r] > tol * scale).collect();
    let rank = kept.len().max(1);
    let mut kets = CMatrix::zeros(rank, n);
    for (row, &r) in kept.iter().enumerate() {
        let col = eig.vectors.column(r);
        let pivot = col.iter().find(|z| z.norm() > 1e-12).copied().unwrap_or(c64(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        let root = eig.values[r].sqrt();
        for j in 0..n {
            kets[(row, j)] = (col[j] * phase).conj() * root;
        }
    }
    if kept.is_empty() {
        for j in 0..n {
            kets[(0, j)] = c64(1.0, 0.0);
        }
    }
    KetFamily::normalize(kets)
}

/// Entrywise product `X * Y`.
pub fn hadamard_product(x: &GramMatrix, y: &GramMatrix) -> Result<GramMatrix> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(GramMatrix::from_raw(x.matrix().component_mul(y.matrix())))
}

/// Outcome of an entrywise division.
#[derive(Debug, Clone, PartialEq)]
pub enum Quotient {
    Determinate(GramMatrix),
    /// Some entries are 0/0. `entries` lists them with `j < k`; `partial`
    /// holds the determinate entries and zero at the listed ones.
    Indeterminate { entries: Vec<(usize, usize)>, partial: GramMatrix },
}

impl Quotient {
    pub fn is_determinate(&self) -> bool {
        matches!(self, Quotient::Determinate(_))
    }

    /// The determinate matrix, or the zero-filled partial one.
    pub fn zero_filled(&self) -> &GramMatrix {
        match self {
            Quotient::Determinate(g) => g,
            Quotient::Indeterminate { partial, .. } => partial,
        }
    }
}

/// Entrywise quotient `X /* Y`.
///
/// An entry with `|Y_jk| <= tol` is indeterminate when `|X_jk| <= tol` too and
/// an [`Error::InconsistentQuotient`] otherwise.
pub fn hadamard_quotient(x: &GramMatrix, y: &GramMatrix, tol: f64) -> Result<Quotient> {
    let n = x.dim();
    if n != y.dim() {
        return Err(Error::DimensionMismatch { expected: n, found: y.dim() });
    }
    let mut out = CMatrix::identity(n, n);
    let mut entries = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let (xv, yv) = (x.get(j, k), y.get(j, k));
            if yv.norm() > tol {
                let q = xv / yv;
                out[(j, k)] = q;
                out[(k, j)] = q.conj();
            } else if xv.norm() <= tol {
                entries.push((j, k));
            } else {
                return Err(Error::InconsistentQuotient { row: j, col: k });
            }
        }
    }
    let g = GramMatrix(out);
    Ok(if entries.is_empty() {
        Quotient::Determinate(g)
    } else {
        Quotient::Indeterminate { entries, partial: g }
    })
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    use rand_distr::StandardNormal;
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        c64(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..dim {
            u[(i, j)] *= ph;
        }
    }
    u
}

/// Random unit-diagonal positive definite Gram matrix from random kets.
pub fn random_gram<R: rand::Rng + ?Sized>(dim: usize, ket_dim: usize, rng: &mut R) -> GramMatrix {
    use rand_distr::StandardNormal;
    let kets = CMatrix::from_fn(ket_dim, dim, |_, _| {
        c64(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    KetFamily::normalize(kets).expect("Gaussian columns are nonzero").gram()
}

/// Real symmetric random unit-diagonal Gram matrix.
pub fn random_real_gram<R: rand::Rng + ?Sized>(dim: usize, ket_dim: usize, rng: &mut R) -> GramMatrix {
    use rand_distr::StandardNormal;
    let kets = CMatrix::from_fn(ket_dim, dim, |_, _| c64(rng.sample::<f64, _>(StandardNormal), 0.0));
    KetFamily::normalize(kets).expect("Gaussian columns are nonzero").gram()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qutrit_gram(m1: f64, m2: f64, m3: f64) -> CMatrix {
        real_matrix(3, 3, &[1.0, m1, m2, m1, 1.0, m3, m2, m3, 1.0])
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&CMatrix::identity(3, 3)).unwrap();
        for v in eig.values.iter() {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rho_r_spectrum() {
        let (s, t) = (0.3, 0.1);
        let mut m = real_matrix(3, 3, &[1.0 - 2.0 * s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0, s]);
        m[(1, 2)] = c64(0.0, t);
        m[(2, 1)] = c64(0.0, -t);
        let v = eigenvalues(&m).unwrap();
        let want = [0.2, 0.4, 0.4];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn reconstruction_of_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary(4, &mut rng);
        let d = CMatrix::from_diagonal(&DVector::from_vec(vec![
            c64(-1.3, 0.0),
            c64(0.2, 0.0),
            c64(0.5, 0.0),
            c64(2.0, 0.0),
        ]));
        let m = hermitize(&(&u * d * u.adjoint()));
        let eig = hermitian_eig(&m).unwrap();
        assert!(frobenius(&(eig.reconstruct() - &m)) / frobenius(&m) < 1e-10);
        let vtv = eig.vectors.adjoint() * &eig.vectors;
        assert!(frobenius(&(vtv - CMatrix::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = real_matrix(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NonHermitian { .. })));
        let mut bad = CMatrix::identity(2, 2);
        bad[(0, 0)] = c64(f64::NAN, 0.0);
        assert_eq!(hermitian_eig(&bad).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&qutrit_gram(1.0, 1.0, 1.0), DEFAULT_TOL).unwrap());
        assert!(is_psd(&qutrit_gram(-0.5, -0.5, -0.5), DEFAULT_TOL).unwrap());
        assert!(!is_psd(&qutrit_gram(-0.6, -0.6, -0.6), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn kets_from_identity_and_ones() {
        let k = gram_to_kets(&GramMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(frobenius(&(k.gram().into_matrix() - CMatrix::identity(3, 3))) < 1e-12);

        let k = gram_to_kets(&GramMatrix::ones(3), DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 1);
        for j in 0..3 {
            assert!((k.ket(j)[0] - c64(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn kets_reproduce_complex_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_gram(4, 3, &mut rng);
        let k = gram_to_kets(&g, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(frobenius(&(k.gram().into_matrix() - g.matrix())) < 1e-10);
    }

    #[test]
    fn kets_reject_indefinite() {
        let g = GramMatrix::new(qutrit_gram(-0.6, -0.6, -0.6)).unwrap();
        assert!(matches!(gram_to_kets(&g, DEFAULT_TOL), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn hadamard_product_examples() {
        let b = GramMatrix::from_real(2, &[1.0, 0.6, 0.6, 1.0]).unwrap();
        let c = GramMatrix::from_real(2, &[1.0, 0.5, 0.5, 1.0]).unwrap();
        let a = hadamard_product(&b, &c).unwrap();
        assert!((a.get(0, 1).re - 0.3).abs() < 1e-15);
        let id = hadamard_product(&GramMatrix::identity(2), &b).unwrap();
        assert_eq!(id, GramMatrix::identity(2));
        assert!(matches!(
            hadamard_product(&b, &GramMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_gram(3, 3, &mut rng);
        match hadamard_quotient(&x, &x, DEFAULT_TOL).unwrap() {
            Quotient::Determinate(q) => assert!(frobenius(&(q.into_matrix() - GramMatrix::ones(3).into_matrix())) < 1e-12),
            other => panic!("{other:?}"),
        }
        let id = GramMatrix::identity(2);
        match hadamard_quotient(&id, &id, DEFAULT_TOL).unwrap() {
            Quotient::Indeterminate { entries, .. } => assert_eq!(entries, vec![(0, 1)]),
            other => panic!("{other:?}"),
        }
        let half = GramMatrix::from_real(2, &[1.0, 0.5, 0.5, 1.0]).unwrap();
        assert_eq!(
            hadamard_quotient(&half, &id, DEFAULT_TOL).unwrap_err(),
            Error::InconsistentQuotient { row: 0, col: 1 }
        );
    }

    #[test]
    fn phases_preserve_moduli() {
        let k = KetFamily::standard_basis(2).with_phases(&[0.3, -1.0]).unwrap();
        assert!((k.ket(0)[0] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert_eq!(k.gram(), GramMatrix::identity(2));
    }
}
