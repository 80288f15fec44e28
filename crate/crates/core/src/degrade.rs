//! Degradability of pcubed channel pairs.
//!
//! The direct channel is degradable when `D = B /* C` is positive
//! semidefinite, antidegradable when `D' = C /* B` is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{ChannelPair, PcubedIsometry, Side, Superoperator};
use crate::matcore::{
    frobenius, gram_to_kets, hadamard_quotient, CMatrix, GramMatrix, KetFamily, Quotient,
};

const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Degradable,
    Antidegradable,
    Both,
    Undegradable,
    Indeterminate,
}

impl Tag {
    /// The tag seen from the complementary channel.
    pub fn mirrored(self) -> Tag {
        match self {
            Tag::Degradable => Tag::Antidegradable,
            Tag::Antidegradable => Tag::Degradable,
            other => other,
        }
    }

    pub fn is_degradable(self) -> bool {
        matches!(self, Tag::Degradable | Tag::Both)
    }

    pub fn is_antidegradable(self) -> bool {
        matches!(self, Tag::Antidegradable | Tag::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Degradable => "Degradable",
            Tag::Antidegradable => "Antidegradable",
            Tag::Both => "Both",
            Tag::Undegradable => "Undegradable",
            Tag::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Degradable" => Ok(Tag::Degradable),
            "Antidegradable" => Ok(Tag::Antidegradable),
            "Both" => Ok(Tag::Both),
            "Undegradable" => Ok(Tag::Undegradable),
            "Indeterminate" => Ok(Tag::Indeterminate),
            other => Err(format!("unknown verdict {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Positivity {
    Psd,
    NotPsd,
    /// 0/0 entries and the zero-filled quotient is not PSD.
    Blocked,
}

#[derive(Debug, Clone)]
struct QuotientCheck {
    positivity: Positivity,
    min_eig: Option<f64>,
    boundary: bool,
    entries: Vec<(usize, usize)>,
}

fn check_quotient(x: &GramMatrix, y: &GramMatrix, tol: f64) -> QuotientCheck {
    let q = match hadamard_quotient(x, y, tol) {
        Ok(q) => q,
        Err(_) => {
            return QuotientCheck { positivity: Positivity::NotPsd, min_eig: None, boundary: false, entries: vec![] }
        }
    };
    let eig = q.zero_filled().eig();
    let scale = eig.spectral_norm().max(1.0);
    let min = eig.min();
    let psd = min >= -tol * scale;
    let boundary = min.abs() <= tol * scale;
    match q {
        Quotient::Determinate(_) => QuotientCheck {
            positivity: if psd { Positivity::Psd } else { Positivity::NotPsd },
            min_eig: Some(min),
            boundary,
            entries: vec![],
        },
        Quotient::Indeterminate { entries, .. } => QuotientCheck {
            positivity: if psd { Positivity::Psd } else { Positivity::Blocked },
            min_eig: Some(min),
            boundary: psd && boundary,
            entries,
        },
    }
}

/// Degradability verdict with its positivity witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub tag: Tag,
    /// Smallest eigenvalue of `B /* C` (zero-filled at 0/0 entries), if defined.
    pub min_eig_d: Option<f64>,
    /// Smallest eigenvalue of `C /* B`, if defined.
    pub min_eig_dprime: Option<f64>,
    /// A PSD witness sits within tolerance of zero.
    pub boundary: bool,
    /// 0/0 entries of either quotient, `j < k`, deduplicated.
    pub indeterminate_entries: Vec<(usize, usize)>,
}

/// Classifies the pair generated by Gram matrices `B`, `C`.
///
/// A quotient with 0/0 entries still certifies positivity when filling those
/// entries with zero gives a PSD matrix, since that fill is itself a valid
/// completion.
pub fn classify(b: &GramMatrix, c: &GramMatrix, tol: f64) -> Verdict {
    let d = check_quotient(b, c, tol);
    let dp = check_quotient(c, b, tol);
    use Positivity::*;
    let tag = match (d.positivity, dp.positivity) {
        (Psd, Psd) => Tag::Both,
        (Psd, _) => Tag::Degradable,
        (_, Psd) => Tag::Antidegradable,
        (NotPsd, NotPsd) => Tag::Undegradable,
        _ => Tag::Indeterminate,
    };
    let boundary = (d.positivity == Psd && d.boundary) || (dp.positivity == Psd && dp.boundary);
    let mut entries = d.entries;
    for e in dp.entries {
        if !entries.contains(&e) {
            entries.push(e);
        }
    }
    entries.sort_unstable();
    Verdict { tag, min_eig_d: d.min_eig, min_eig_dprime: dp.min_eig, boundary, indeterminate_entries: entries }
}

/// Convenience wrapper over the isometry's Gram matrices.
pub fn classify_isometry(iso: &PcubedIsometry, tol: f64) -> Verdict {
    classify(&iso.gram_b(), &iso.gram_c(), tol)
}

/// Degradability matrix `D` with `B = C * D`, if it is PSD.
pub fn degradability_matrix(b: &GramMatrix, c: &GramMatrix, tol: f64) -> Result<GramMatrix> {
    let q = hadamard_quotient(b, c, tol).map_err(|e| Error::NotDegradable { reason: e.to_string() })?;
    let d = q.zero_filled().clone();
    if !d.is_psd(tol) {
        return Err(Error::NotDegradable {
            reason: format!("B /* C has eigenvalue {:e}", d.min_eigenvalue()),
        });
    }
    Ok(d)
}

/// Degrading isometry `K|β_j> = |γ_j> ⊗ |δ_j>` with `<δ_j|δ_k> = D_jk`.
pub fn degrading_isometry(iso: &PcubedIsometry, tol: f64) -> Result<PcubedIsometry> {
    let beta = iso.beta();
    let rank = beta.span_rank(RANK_TOL);
    if rank != beta.count() || rank != beta.dim() {
        return Err(Error::BetaDependent { rank, count: beta.count() });
    }
    let d = degradability_matrix(&iso.gram_b(), &iso.gram_c(), tol)?;
    let delta = gram_to_kets(&d, tol)?;
    PcubedIsometry::build(beta.clone(), iso.gamma().clone(), delta)
}

/// Largest `||D(B(O)) - C(O)||_F` over matrix units `O = |i><j|`.
pub fn degrading_residual(pair: &ChannelPair, degrader: &Superoperator) -> Result<f64> {
    let composed = degrader.after(&pair.direct)?;
    composed.distance_on_dyads(&pair.complementary)
}

/// Residual of `K` as a degrading map for `iso`; `K` acts on `H_b`.
pub fn verify_degrading(iso: &PcubedIsometry, k: &PcubedIsometry) -> Result<f64> {
    if k.dim_a() != iso.dim_b() {
        return Err(Error::DimensionMismatch { expected: iso.dim_b(), found: k.dim_a() });
    }
    if k.dim_b() != iso.dim_c() {
        return Err(Error::DimensionMismatch { expected: iso.dim_c(), found: k.dim_b() });
    }
    degrading_residual(&iso.channels(), &k.kraus_operators(Side::Direct))
}

/// Simultaneous diagonalization of the direct Kraus operators,
/// `Y L_l X = diag(λ_{·l})`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedDiagonalForm {
    /// Rows are the dual bras `<ᾱ_j|` with `<ᾱ_j|α_k> = δ_jk`.
    pub dual_alpha: CMatrix,
    /// `X̄ = X^{-1}`, rows `<ᾱ_j| / μ_j`.
    pub x_bar: CMatrix,
    /// `Ȳ = Y^{-1}`, columns `|β_j> / ν_j`.
    pub y_bar: CMatrix,
    /// `λ_{jl}`, shape `d x d_c`.
    pub lambda: CMatrix,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

impl TwistedDiagonalForm {
    pub fn x(&self) -> CMatrix {
        self.x_bar.clone().try_inverse().expect("X̄ is invertible by construction")
    }

    pub fn y(&self) -> CMatrix {
        self.y_bar.clone().try_inverse().expect("Ȳ is invertible by construction")
    }

    /// `L_l = Ȳ diag(λ_{·l}) X̄`.
    pub fn kraus(&self) -> Vec<CMatrix> {
        let d = self.lambda.nrows();
        (0..self.lambda.ncols())
            .map(|l| {
                let diag = CMatrix::from_diagonal(&self.lambda.column(l).into_owned());
                debug_assert_eq!(diag.nrows(), d);
                &self.y_bar * diag * &self.x_bar
            })
            .collect()
    }

    /// `J = Σ_l L_l ⊗ |c_l>` in `H_b ⊗ H_c` ordering.
    pub fn reconstruct(&self) -> CMatrix {
        let kraus = self.kraus();
        let dc = kraus.len();
        let (db, da) = (self.y_bar.nrows(), self.x_bar.ncols());
        CMatrix::from_fn(db * dc, da, |r, a| kraus[r % dc][(r / dc, a)])
    }

    /// `|γ_j> = Σ_l λ_{jl} / (μ_j ν_j) |c_l>`, one per column.
    pub fn recovered_gamma(&self) -> CMatrix {
        let mut g = self.lambda.transpose();
        for j in 0..g.ncols() {
            let s = self.mu[j] * self.nu[j];
            g.column_mut(j).unscale_mut(s);
        }
        g
    }

    /// Largest off-diagonal entry of `Y L_l X` over all `l`.
    pub fn diagonal_defect(&self, kraus: &[CMatrix]) -> f64 {
        let (x, y) = (self.x(), self.y());
        let mut worst: f64 = 0.0;
        for (l, k) in kraus.iter().enumerate() {
            let m = &y * k * &x;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let want = if i == j { self.lambda[(i, l)] } else { Complex64::new(0.0, 0.0) };
                    worst = worst.max((m[(i, j)] - want).norm());
                }
            }
        }
        worst
    }
}

/// Twisted-diagonal form of the direct channel.
///
/// Requires `α` and `β` to be bases of `H_a` and `H_b`.
pub fn twisted_diagonal(iso: &PcubedIsometry) -> Result<TwistedDiagonalForm> {
    let (alpha, beta, gamma) = (iso.alpha(), iso.beta(), iso.gamma());
    let d = alpha.count();
    if alpha.dim() != d || !alpha.is_independent(RANK_TOL) {
        return Err(Error::NotTwistedDiagonal { reason: "input kets are not a basis".into() });
    }
    if beta.dim() != d || !beta.is_independent(RANK_TOL) {
        return Err(Error::NotTwistedDiagonal {
            reason: format!("output kets span {} of {} dimensions", beta.span_rank(RANK_TOL), d),
        });
    }
    let dual = alpha
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotTwistedDiagonal { reason: "input kets are singular".into() })?;
    let mu: Vec<f64> = (0..d).map(|j| dual.row(j).norm()).collect();
    let mut x_bar = dual.clone();
    for (j, &m) in mu.iter().enumerate() {
        x_bar.row_mut(j).unscale_mut(m);
    }
    let y_bar = beta.matrix().clone();
    let nu = vec![1.0; d];
    let dc = gamma.dim();
    let lambda = CMatrix::from_fn(d, dc, |j, l| gamma.matrix()[(l, j)] * mu[j] * nu[j]);
    Ok(TwistedDiagonalForm { dual_alpha: dual, x_bar, y_bar, lambda, mu, nu })
}

/// Outcome of the conjugate-degradability case analysis.
#[derive(Debug, Clone)]
pub struct ConjugateReport {
    /// Indices grouped by `|<γ_j|γ_k>| = 1`.
    pub collections: Vec<Vec<usize>>,
    pub verdict: bool,
    pub implied_degradable: bool,
    /// Largest `|B_jk|` between different collections.
    pub max_cross_overlap: f64,
    /// Block-diagonal `D` solving the within-collection conditions.
    pub d_matrix: Option<GramMatrix>,
    /// The degrading isometry `K|β_j> = |γ^m> ⊗ |δ_j>` when the verdict holds.
    pub degrader: Option<PcubedIsometry>,
}

fn partition_by_overlap(c: &GramMatrix, tol: f64) -> Vec<usize> {
    let n = c.dim();
    let mut label: Vec<usize> = (0..n).collect();
    for j in 0..n {
        for k in (j + 1)..n {
            if c.get(j, k).norm() >= 1.0 - tol {
                let (from, to) = (label[k].max(label[j]), label[k].min(label[j]));
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    label
}

/// Splits indices into collections of parallel `γ` kets and checks the
/// conditions for the direct channel to be conjugate degradable.
pub fn conjugate_analysis(iso: &PcubedIsometry, tol: f64) -> ConjugateReport {
    let (b, c) = (iso.gram_b(), iso.gram_c());
    let n = iso.count();
    let label = partition_by_overlap(&c, tol);
    let mut reps: Vec<usize> = label.clone();
    reps.sort_unstable();
    reps.dedup();
    let collections: Vec<Vec<usize>> =
        reps.iter().map(|&r| (0..n).filter(|&j| label[j] == r).collect()).collect();

    let mut max_cross: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            if label[j] != label[k] {
                max_cross = max_cross.max(b.get(j, k).norm());
            }
        }
    }

    let independent = iso.alpha().is_independent(RANK_TOL) && iso.beta().is_independent(RANK_TOL);
    let phase: Vec<Complex64> = (0..n)
        .map(|j| {
            let z = c.get(label[j], j);
            z / z.norm()
        })
        .collect();
    let mut d = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            if label[j] == label[k] {
                d[(j, k)] = phase[j].conj() * phase[k] * b.get(j, k);
            }
        }
    }
    let d = GramMatrix::from_raw(d);
    let verdict = independent && max_cross <= tol && d.is_psd(tol);
    let degrader = if verdict { conjugate_degrader(iso, &label, &phase, &d, tol) } else { None };
    ConjugateReport {
        collections,
        verdict,
        implied_degradable: verdict,
        max_cross_overlap: max_cross,
        d_matrix: Some(d),
        degrader,
    }
}

fn conjugate_degrader(
    iso: &PcubedIsometry,
    label: &[usize],
    phase: &[Complex64],
    d: &GramMatrix,
    tol: f64,
) -> Option<PcubedIsometry> {
    let n = iso.count();
    let mut beta = iso.beta().matrix().clone();
    for (j, &p) in phase.iter().enumerate() {
        beta.column_mut(j).iter_mut().for_each(|z| *z *= p);
    }
    let gamma_cols: Vec<_> = (0..n).map(|j| iso.gamma().ket(label[j])).collect();
    let beta = KetFamily::new(beta).ok()?;
    let gamma = KetFamily::from_vectors(&gamma_cols).ok()?;
    let delta = gram_to_kets(d, tol).ok()?;
    PcubedIsometry::build(beta, gamma, delta).ok()
}

/// Largest deviation of `J` from its twisted-diagonal reconstruction.
pub fn twisted_residual(iso: &PcubedIsometry, form: &TwistedDiagonalForm) -> f64 {
    frobenius(&(form.reconstruct() - iso.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c64, random_gram, real_matrix, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uniform(x: f64) -> GramMatrix {
        GramMatrix::uniform(3, c64(x, 0.0)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(classify(&uniform(0.2), &uniform(0.5), DEFAULT_TOL).tag, Tag::Degradable);
        assert_eq!(classify(&uniform(0.5), &uniform(0.2), DEFAULT_TOL).tag, Tag::Antidegradable);
        assert_eq!(classify(&uniform(0.3), &uniform(0.3), DEFAULT_TOL).tag, Tag::Both);
        assert_eq!(classify(&uniform(0.5), &uniform(-0.35), DEFAULT_TOL).tag, Tag::Undegradable);
    }

    #[test]
    fn identity_pair_is_both() {
        let v = classify(&GramMatrix::identity(3), &GramMatrix::identity(3), DEFAULT_TOL);
        assert_eq!(v.tag, Tag::Both);
        assert_eq!(v.indeterminate_entries, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn blocked_quotient_is_indeterminate() {
        // Both quotients have a 0/0 entry and a zero fill that is not PSD.
        let g = |x: f64| GramMatrix::from_real(3, &[1.0, 0.0, x, 0.0, 1.0, x, x, x, 1.0]).unwrap();
        let v = classify(&g(0.6), &g(0.3), DEFAULT_TOL);
        assert_eq!(v.tag, Tag::Antidegradable);
        let b = GramMatrix::from_real(3, &[1.0, 0.0, 0.7, 0.0, 1.0, -0.7, 0.7, -0.7, 1.0]).unwrap();
        let c = GramMatrix::from_real(3, &[1.0, 0.0, 0.7, 0.0, 1.0, 0.7, 0.7, 0.7, 1.0]).unwrap();
        let v = classify(&b, &c, DEFAULT_TOL);
        assert_eq!(v.tag, Tag::Indeterminate, "{v:?}");
        assert_eq!(v.indeterminate_entries, vec![(0, 1)]);
    }

    #[test]
    fn degrading_isometry_for_equal_pair() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.3), &uniform(0.3)).unwrap();
        let k = degrading_isometry(&iso, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim_c(), 1);
        assert!(verify_degrading(&iso, &k).unwrap() < 1e-10);
    }

    #[test]
    fn degrading_isometry_rejects_undegradable() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.5), &uniform(-0.35)).unwrap();
        assert!(matches!(degrading_isometry(&iso, DEFAULT_TOL), Err(Error::NotDegradable { .. })));
    }

    #[test]
    fn wrong_degrader_has_large_residual() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.2), &uniform(0.5)).unwrap();
        let identity = Superoperator::new(vec![CMatrix::identity(3, 3)]).unwrap();
        assert!(degrading_residual(&iso.channels(), &identity).unwrap() > 1e-2);
    }

    #[test]
    fn twisted_form_of_orthonormal_case() {
        let e = KetFamily::standard_basis(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gamma = crate::matcore::gram_to_kets(&random_gram(3, 3, &mut rng), DEFAULT_TOL).unwrap();
        let iso = PcubedIsometry::build(e.clone(), e, gamma.clone()).unwrap();
        let form = twisted_diagonal(&iso).unwrap();
        assert!(frobenius(&(&form.dual_alpha - CMatrix::identity(3, 3))) < 1e-12);
        assert!(frobenius(&(form.lambda.transpose() - gamma.matrix())) < 1e-12);
    }

    #[test]
    fn eq23_is_not_twisted_diagonal() {
        let alpha = KetFamily::standard_basis(3);
        let beta = KetFamily::from_real_columns(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let gamma = KetFamily::from_real_columns(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let iso = PcubedIsometry::build(alpha, beta, gamma).unwrap();
        assert!(matches!(twisted_diagonal(&iso), Err(Error::NotTwistedDiagonal { .. })));
    }

    #[test]
    fn twisted_form_reconstructs() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.4), &uniform(0.7)).unwrap();
        let form = twisted_diagonal(&iso).unwrap();
        assert!(twisted_residual(&iso, &form) < 1e-10);
        let dual_check = &form.dual_alpha * iso.alpha().matrix();
        assert!(frobenius(&(dual_check - CMatrix::identity(3, 3))) < 1e-10);
        let kraus = iso.kraus_operators(Side::Direct);
        assert!(form.diagonal_defect(kraus.kraus()) < 1e-10);
        let g = form.recovered_gamma();
        for j in 0..3 {
            assert!((g.column(j).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugate_distinct_gammas_with_overlap() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.4), &uniform(0.7)).unwrap();
        let r = conjugate_analysis(&iso, DEFAULT_TOL);
        assert_eq!(r.collections.len(), 3);
        assert!(!r.verdict);
    }

    #[test]
    fn conjugate_constant_gamma() {
        let iso = PcubedIsometry::from_gram_pair(&uniform(0.4), &GramMatrix::ones(3)).unwrap();
        let r = conjugate_analysis(&iso, DEFAULT_TOL);
        assert_eq!(r.collections, vec![vec![0, 1, 2]]);
        assert!(r.verdict && r.implied_degradable);
        let k = r.degrader.unwrap();
        assert!(verify_degrading(&iso, &k).unwrap() < 1e-10);
        assert!(classify_isometry(&iso, DEFAULT_TOL).tag.is_degradable());
    }

    #[test]
    fn conjugate_block_structure() {
        // Two collections {0,1} and {2}; beta blocks orthogonal.
        let s = 0.6f64;
        let b = GramMatrix::from_real(3, &[1.0, s, 0.0, s, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let c = GramMatrix::new({
            let mut m = real_matrix(3, 3, &[1.0, 1.0, 0.3, 1.0, 1.0, 0.3, 0.3, 0.3, 1.0]);
            m[(0, 1)] = c64(0.0, 1.0);
            m[(1, 0)] = c64(0.0, -1.0);
            m[(0, 2)] = c64(0.0, 0.3);
            m[(2, 0)] = c64(0.0, -0.3);
            m
        })
        .unwrap();
        let iso = PcubedIsometry::from_gram_pair(&b, &c).unwrap();
        let r = conjugate_analysis(&iso, DEFAULT_TOL);
        assert_eq!(r.collections, vec![vec![0, 1], vec![2]]);
        assert!(r.verdict);
        let k = r.degrader.unwrap();
        assert!(verify_degrading(&iso, &k).unwrap() < 1e-10);
    }
}
