//! Pcubed isometries `J|α_j> = |β_j> ⊗ |γ_j>` and the channel pairs they generate.
//!
//! Output space ordering is `H_b ⊗ H_c` with row index `ib * d_c + ic`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    frobenius, gram_to_kets, hadamard_product, hermitian_eig_unchecked, hermitize, kron_vec,
    max_abs, CMatrix, GramMatrix, KetFamily, DEFAULT_TOL,
};

const ISOMETRY_TOL: f64 = 1e-8;
const GRAM_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-10;

/// Which output of the isometry a channel keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `a -> b`, tracing out `H_c`.
    Direct,
    /// `a -> c`, tracing out `H_b`.
    Complementary,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Direct => Side::Complementary,
            Side::Complementary => Side::Direct,
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(CMatrix);

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if !crate::matcore::is_finite(&m) {
            return Err(Error::NonFinite);
        }
        let defect = crate::matcore::hermitian_defect(&m);
        if defect > 1e-10 {
            return Err(Error::InvalidState { reason: format!("not Hermitian (defect {defect:e})") });
        }
        let m = hermitize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState { reason: format!("trace {tr}") });
        }
        let min = hermitian_eig_unchecked(&m).min();
        if min < -1e-10 {
            return Err(Error::InvalidState { reason: format!("eigenvalue {min:e}") });
        }
        Ok(DensityOperator(m))
    }

    /// Wraps a matrix already known to be a state up to rounding.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        DensityOperator(hermitize(&m))
    }

    /// `R^H R / Tr(R^H R)`.
    pub fn from_factor(r: &CMatrix) -> Result<Self> {
        let m = r.adjoint() * r;
        let tr = m.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::InvalidState { reason: "zero factor".into() });
        }
        Ok(DensityOperator(hermitize(&m.unscale(tr))))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// `|ψ><ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &crate::matcore::CVector) -> Result<Self> {
        let n = psi.norm();
        if n.is_nan() || n <= 0.0 {
            return Err(Error::InvalidState { reason: "zero vector".into() });
        }
        let v = psi.unscale(n);
        Ok(DensityOperator(&v * v.adjoint()))
    }

    /// Convex combination `(1-w) ρ + w ρ'`.
    pub fn mix(&self, other: &DensityOperator, w: f64) -> Self {
        DensityOperator(self.0.scale(1.0 - w) + other.0.scale(w))
    }

    /// `U ρ U^H`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        DensityOperator::from_raw(u * &self.0 * u.adjoint())
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

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig_unchecked(&self.0).values.iter().copied().collect()
    }
}

/// Channel in Kraus form, `O -> Σ_l L_l O L_l^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    source_dim: usize,
    target_dim: usize,
    kraus: Vec<CMatrix>,
}

impl Superoperator {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyFamily)?;
        let (target_dim, source_dim) = (first.nrows(), first.ncols());
        for k in &kraus {
            if k.nrows() != target_dim || k.ncols() != source_dim {
                return Err(Error::DimensionMismatch { expected: target_dim, found: k.nrows() });
            }
        }
        let s = Superoperator { source_dim, target_dim, kraus };
        let defect = s.trace_defect();
        if defect > ISOMETRY_TOL {
            return Err(Error::NotIsometricEmbedding { defect });
        }
        Ok(s)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Largest entry of `Σ L^H L - I`.
    pub fn trace_defect(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.source_dim, self.source_dim);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        max_abs(&(sum - CMatrix::identity(self.source_dim, self.source_dim)))
    }

    /// Applies the channel to an arbitrary operator.
    pub fn apply(&self, o: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.target_dim, self.target_dim);
        for k in &self.kraus {
            out += k * o * k.adjoint();
        }
        out
    }

    /// Heisenberg-picture adjoint `X -> Σ L^H X L`.
    pub fn apply_adjoint(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.source_dim, self.source_dim);
        for k in &self.kraus {
            out += k.adjoint() * x * k;
        }
        out
    }

    pub fn apply_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, found: rho.dim() });
        }
        Ok(DensityOperator::from_raw(self.apply(rho.matrix())))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Superoperator) -> Result<Superoperator> {
        if first.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, found: first.target_dim });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for k2 in &self.kraus {
            for k1 in &first.kraus {
                kraus.push(k2 * k1);
            }
        }
        Ok(Superoperator { source_dim: first.source_dim, target_dim: self.target_dim, kraus })
    }

    /// Largest Frobenius distance between the two channels over all matrix units `|i><j|`.
    pub fn distance_on_dyads(&self, other: &Superoperator) -> Result<f64> {
        if self.source_dim != other.source_dim || self.target_dim != other.target_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, found: other.source_dim });
        }
        let n = self.source_dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut e = CMatrix::zeros(n, n);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                worst = worst.max(frobenius(&(self.apply(&e) - other.apply(&e))));
            }
        }
        Ok(worst)
    }
}

/// The two channels generated by one isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub direct: Superoperator,
    pub complementary: Superoperator,
}

impl ChannelPair {
    pub fn side(&self, side: Side) -> &Superoperator {
        match side {
            Side::Direct => &self.direct,
            Side::Complementary => &self.complementary,
        }
    }
}

/// Kraus operators of an isometry `H_a -> H_b ⊗ H_c`.
pub(crate) fn split_kraus(j: &CMatrix, db: usize, dc: usize, side: Side) -> Vec<CMatrix> {
    let da = j.ncols();
    match side {
        Side::Direct => (0..dc)
            .map(|l| CMatrix::from_fn(db, da, |i, a| j[(i * dc + l, a)]))
            .collect(),
        Side::Complementary => (0..db)
            .map(|m| CMatrix::from_fn(dc, da, |c, a| j[(m * dc + c, a)]))
            .collect(),
    }
}

/// Partial trace of an operator on `H_b ⊗ H_c`.
pub fn partial_trace(m: &CMatrix, db: usize, dc: usize, keep: Side) -> CMatrix {
    match keep {
        Side::Direct => CMatrix::from_fn(db, db, |i, k| {
            (0..dc).map(|c| m[(i * dc + c, k * dc + c)]).sum()
        }),
        Side::Complementary => CMatrix::from_fn(dc, dc, |i, k| {
            (0..db).map(|b| m[(b * dc + i, b * dc + k)]).sum()
        }),
    }
}

fn isometry_defect(j: &CMatrix) -> f64 {
    let n = j.ncols();
    max_abs(&(j.adjoint() * j - CMatrix::identity(n, n)))
}

/// Isometry `J: H_a -> H_b ⊗ H_c` with `J|α_j> = |β_j> ⊗ |γ_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PcubedIsometry {
    alpha: KetFamily,
    beta: KetFamily,
    gamma: KetFamily,
    j: CMatrix,
}

impl PcubedIsometry {
    /// Solves for `J` from the three families.
    ///
    /// `alpha` must span its space and the Gram matrices must satisfy
    /// `A = B * C` entrywise.
    pub fn build(alpha: KetFamily, beta: KetFamily, gamma: KetFamily) -> Result<Self> {
        let d = alpha.count();
        for fam in [&beta, &gamma] {
            if fam.count() != d {
                return Err(Error::DimensionMismatch { expected: d, found: fam.count() });
            }
        }
        let rank = alpha.span_rank(RANK_TOL);
        if rank != alpha.dim() {
            return Err(Error::AlphaDeficient { rank, dim: alpha.dim() });
        }
        let a = alpha.gram();
        let bc = hadamard_product(&beta.gram(), &gamma.gram())?;
        let deviation = max_abs(&(a.matrix() - bc.matrix()));
        if deviation > GRAM_TOL {
            return Err(Error::GramMismatch { deviation });
        }
        let targets = CMatrix::from_columns(
            &(0..d).map(|k| kron_vec(&beta.ket(k), &gamma.ket(k))).collect::<Vec<_>>(),
        );
        let j = if d == alpha.dim() {
            let inv = alpha
                .matrix()
                .clone()
                .try_inverse()
                .ok_or(Error::AlphaDeficient { rank, dim: alpha.dim() })?;
            &targets * inv
        } else {
            let pinv = alpha
                .matrix()
                .clone()
                .pseudo_inverse(RANK_TOL)
                .map_err(|e| Error::NotPcubed { reason: e.to_string() })?;
            let j = &targets * pinv;
            let residual = max_abs(&(&j * alpha.matrix() - &targets));
            if residual > ISOMETRY_TOL {
                return Err(Error::NotPcubed { reason: format!("least-squares residual {residual:e}") });
            }
            j
        };
        let defect = isometry_defect(&j);
        if defect > ISOMETRY_TOL {
            return Err(Error::NotPcubed { reason: format!("J^H J - I = {defect:e}") });
        }
        Ok(PcubedIsometry { alpha, beta, gamma, j })
    }

    /// Realizes `A = B * C` and all three families from the Gram pair.
    pub fn from_gram_pair(b: &GramMatrix, c: &GramMatrix) -> Result<Self> {
        Self::from_gram_pair_tol(b, c, DEFAULT_TOL)
    }

    pub fn from_gram_pair_tol(b: &GramMatrix, c: &GramMatrix, tol: f64) -> Result<Self> {
        for g in [b, c] {
            if !g.is_psd(tol) {
                return Err(Error::NotPsd { min_eig: g.min_eigenvalue() });
            }
        }
        let a = hadamard_product(b, c)?;
        let min_eig = a.min_eigenvalue();
        if min_eig <= tol {
            return Err(Error::ADegenerate { min_eig });
        }
        let alpha = gram_to_kets(&a, tol)?;
        let beta = gram_to_kets(b, tol)?;
        let gamma = gram_to_kets(c, tol)?;
        Self::build(alpha, beta, gamma)
    }

    pub fn alpha(&self) -> &KetFamily {
        &self.alpha
    }

    pub fn beta(&self) -> &KetFamily {
        &self.beta
    }

    pub fn gamma(&self) -> &KetFamily {
        &self.gamma
    }

    /// Explicit matrix, shape `(d_b d_c) x d_a`.
    pub fn matrix(&self) -> &CMatrix {
        &self.j
    }

    pub fn count(&self) -> usize {
        self.alpha.count()
    }

    pub fn dim_a(&self) -> usize {
        self.alpha.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.beta.dim()
    }

    pub fn dim_c(&self) -> usize {
        self.gamma.dim()
    }

    pub fn gram_a(&self) -> GramMatrix {
        self.alpha.gram()
    }

    pub fn gram_b(&self) -> GramMatrix {
        self.beta.gram()
    }

    pub fn gram_c(&self) -> GramMatrix {
        self.gamma.gram()
    }

    pub fn output_dim(&self, side: Side) -> usize {
        match side {
            Side::Direct => self.dim_b(),
            Side::Complementary => self.dim_c(),
        }
    }

    /// Largest entry of `J^H J - I`.
    pub fn isometry_defect(&self) -> f64 {
        isometry_defect(&self.j)
    }

    /// Largest `||J|α_j> - |β_j>⊗|γ_j>||`.
    pub fn product_defect(&self) -> f64 {
        (0..self.count())
            .map(|k| {
                let lhs = &self.j * self.alpha.ket(k);
                (lhs - kron_vec(&self.beta.ket(k), &self.gamma.ket(k))).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `Tr_c(J O J^H)` or `Tr_b(J O J^H)` for an arbitrary operator on `H_a`.
    pub fn apply_operator(&self, o: &CMatrix, side: Side) -> Result<CMatrix> {
        if o.nrows() != self.dim_a() || o.ncols() != self.dim_a() {
            return Err(Error::DimensionMismatch { expected: self.dim_a(), found: o.nrows() });
        }
        let full = &self.j * o * self.j.adjoint();
        Ok(partial_trace(&full, self.dim_b(), self.dim_c(), side))
    }

    pub fn apply_channel(&self, rho: &DensityOperator, side: Side) -> Result<DensityOperator> {
        Ok(DensityOperator::from_raw(self.apply_operator(rho.matrix(), side)?))
    }

    /// Kraus form: `d_c` operators for `Direct`, `d_b` for `Complementary`.
    pub fn kraus_operators(&self, side: Side) -> Superoperator {
        Superoperator {
            source_dim: self.dim_a(),
            target_dim: self.output_dim(side),
            kraus: split_kraus(&self.j, self.dim_b(), self.dim_c(), side),
        }
    }

    pub fn channels(&self) -> ChannelPair {
        ChannelPair {
            direct: self.kraus_operators(Side::Direct),
            complementary: self.kraus_operators(Side::Complementary),
        }
    }

    /// Tensor product with output legs regrouped to `(b1 b2) ⊗ (c1 c2)`.
    pub fn parallel(&self, other: &PcubedIsometry) -> PcubedIsometry {
        let (db1, dc1, da1) = (self.dim_b(), self.dim_c(), self.dim_a());
        let (db2, dc2, da2) = (other.dim_b(), other.dim_c(), other.dim_a());
        let rows = db1 * db2 * dc1 * dc2;
        let mut j = CMatrix::zeros(rows, da1 * da2);
        for a1 in 0..da1 {
            for a2 in 0..da2 {
                let col = a1 * da2 + a2;
                for b1 in 0..db1 {
                    for c1 in 0..dc1 {
                        let x = self.j[(b1 * dc1 + c1, a1)];
                        if x == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for b2 in 0..db2 {
                            for c2 in 0..dc2 {
                                let row = (b1 * db2 + b2) * (dc1 * dc2) + c1 * dc2 + c2;
                                j[(row, col)] = x * other.j[(b2 * dc2 + c2, a2)];
                            }
                        }
                    }
                }
            }
        }
        PcubedIsometry {
            alpha: self.alpha.tensor(&other.alpha),
            beta: self.beta.tensor(&other.beta),
            gamma: self.gamma.tensor(&other.gamma),
            j,
        }
    }

    /// Restricts the input to the range of an isometric embedding `E`.
    pub fn subchannel(&self, embed: &CMatrix) -> Result<Subchannel> {
        if embed.nrows() != self.dim_a() {
            return Err(Error::DimensionMismatch { expected: self.dim_a(), found: embed.nrows() });
        }
        let defect = isometry_defect(embed);
        if defect > 1e-10 {
            return Err(Error::NotIsometricEmbedding { defect });
        }
        Ok(Subchannel { j: &self.j * embed, db: self.dim_b(), dc: self.dim_c() })
    }
}

/// The isometry `J E` obtained by restricting the input of a pcubed isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Subchannel {
    j: CMatrix,
    db: usize,
    dc: usize,
}

impl Subchannel {
    pub fn matrix(&self) -> &CMatrix {
        &self.j
    }

    pub fn input_dim(&self) -> usize {
        self.j.ncols()
    }

    pub fn dim_b(&self) -> usize {
        self.db
    }

    pub fn dim_c(&self) -> usize {
        self.dc
    }

    pub fn isometry_defect(&self) -> f64 {
        isometry_defect(&self.j)
    }

    pub fn kraus_operators(&self, side: Side) -> Superoperator {
        let target_dim = match side {
            Side::Direct => self.db,
            Side::Complementary => self.dc,
        };
        Superoperator {
            source_dim: self.input_dim(),
            target_dim,
            kraus: split_kraus(&self.j, self.db, self.dc, side),
        }
    }

    pub fn apply_operator(&self, o: &CMatrix, side: Side) -> Result<CMatrix> {
        if o.nrows() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: o.nrows() });
        }
        Ok(partial_trace(&(&self.j * o * self.j.adjoint()), self.db, self.dc, side))
    }
}
