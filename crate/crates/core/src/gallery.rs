//! Worked example families: qubit pairs, the amplitude-damping limit, erasure
//! channels and Hadamard channels from a Naimark extension.

use crate::error::{Error, Result};
use crate::isometry::{split_kraus, ChannelPair, PcubedIsometry, Side, Subchannel, Superoperator};
use crate::matcore::{c64, frobenius, real_matrix, CMatrix, KetFamily};

const PARAM_TOL: f64 = 1e-12;

fn unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfRange { name, value: x });
    }
    Ok(())
}

fn check_pair(name: &'static str, x0: f64, x1: f64) -> Result<()> {
    unit_interval(name, x0)?;
    unit_interval(name, x1)?;
    let norm = x0 * x0 + x1 * x1;
    if (norm - 1.0).abs() > PARAM_TOL {
        return Err(Error::OutOfRange { name, value: norm });
    }
    Ok(())
}

/// Qubit family `|x_0⟩ = x0|0⟩ + x1|1⟩`, `|x_1⟩ = x0|0⟩ - x1|1⟩` for each of
/// the three spaces, or the equivalent standard-basis coefficients of `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitParams {
    Kets { a0: f64, a1: f64, b0: f64, b1: f64, c0: f64, c1: f64 },
    Coefficients { f0: f64, f1: f64, g0: f64, g1: f64 },
}

impl QubitParams {
    /// Ket form with the input amplitudes fixed by `A01 = B01 C01`.
    pub fn from_output_amplitudes(b1: f64, c1: f64) -> Result<Self> {
        unit_interval("b1", b1)?;
        unit_interval("c1", c1)?;
        let b0 = (1.0 - b1 * b1).sqrt();
        let c0 = (1.0 - c1 * c1).sqrt();
        let a01 = (b0 * b0 - b1 * b1) * (c0 * c0 - c1 * c1);
        Ok(QubitParams::Kets {
            a0: ((1.0 + a01) / 2.0).sqrt(),
            a1: ((1.0 - a01) / 2.0).sqrt(),
            b0,
            b1,
            c0,
            c1,
        })
    }

    /// `(a0, a1, b0, b1, c0, c1)`, converting from coefficients if needed.
    pub fn amplitudes(&self) -> Result<[f64; 6]> {
        match *self {
            QubitParams::Kets { a0, a1, b0, b1, c0, c1 } => {
                check_pair("a", a0, a1)?;
                check_pair("b", b0, b1)?;
                check_pair("c", c0, c1)?;
                Ok([a0, a1, b0, b1, c0, c1])
            }
            QubitParams::Coefficients { f0, f1, g0, g1 } => {
                check_pair("f", f0, f1)?;
                check_pair("g", g0, g1)?;
                if [f0, f1, g0, g1].contains(&0.0) {
                    return Err(Error::NotPcubed {
                        reason: "a vanishing coefficient has no ket form; see damping_limit_family".into(),
                    });
                }
                let (rf, rg) = (f1 / f0, g1 / g0);
                let tb = (rf * rg).sqrt();
                let tc = (rf / rg).sqrt();
                let b0 = 1.0 / (1.0 + tb * tb).sqrt();
                let c0 = 1.0 / (1.0 + tc * tc).sqrt();
                let (b1, c1) = (tb * b0, tc * c0);
                let a0 = b0 * c0 / f0;
                let a1 = b0 * c1 / g0;
                Ok([a0, a1, b0, b1, c0, c1])
            }
        }
    }

    /// `(f0, f1, g0, g1)`.
    pub fn coefficients(&self) -> Result<[f64; 4]> {
        match *self {
            QubitParams::Coefficients { f0, f1, g0, g1 } => {
                check_pair("f", f0, f1)?;
                check_pair("g", g0, g1)?;
                Ok([f0, f1, g0, g1])
            }
            QubitParams::Kets { .. } => {
                let [a0, a1, b0, b1, c0, c1] = self.amplitudes()?;
                if a0 == 0.0 || a1 == 0.0 {
                    return Err(Error::AlphaDeficient { rank: 1, dim: 2 });
                }
                Ok([b0 * c0 / a0, b1 * c1 / a0, b0 * c1 / a1, b1 * c0 / a1])
            }
        }
    }
}

fn plus_minus(x0: f64, x1: f64) -> Result<KetFamily> {
    KetFamily::from_real_columns(2, 2, &[x0, x0, x1, -x1])
}

/// Qubit-to-qubits pcubed isometry.
pub fn qubit_channel(params: &QubitParams) -> Result<PcubedIsometry> {
    let [a0, a1, b0, b1, c0, c1] = params.amplitudes()?;
    PcubedIsometry::build(plus_minus(a0, a1)?, plus_minus(b0, b1)?, plus_minus(c0, c1)?)
}

/// Pcubed isometry with `b1 = a1 √(1-p)` and `c1 = a1 √p`.
///
/// The input amplitudes follow from the Gram constraint, so the realized
/// `a1` differs from the nominal scale at order `a1³`. As `a1 -> 0` the
/// isometry tends to [`amplitude_damping`].
pub fn damping_limit_family(p: f64, a1: f64) -> Result<PcubedIsometry> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange { name: "p", value: p });
    }
    if !(a1 > 0.0 && a1 <= 1.0) {
        return Err(Error::OutOfRange { name: "a1", value: a1 });
    }
    let params = QubitParams::from_output_amplitudes(a1 * (1.0 - p).sqrt(), a1 * p.sqrt())?;
    qubit_channel(&params)
}

/// Standard-basis Stinespring matrix with columns `f0|00⟩ + f1|11⟩` and
/// `g0|01⟩ + g1|10⟩`.
pub fn qubit_isometry_matrix(f: [f64; 4]) -> CMatrix {
    let [f0, f1, g0, g1] = f;
    real_matrix(4, 2, &[f0, 0.0, 0.0, g0, 0.0, g1, f1, 0.0])
}

/// The amplitude-damping pair, which has no pcubed form.
pub fn amplitude_damping(p: f64) -> Result<ChannelPair> {
    unit_interval("p", p)?;
    let j = qubit_isometry_matrix([1.0, 0.0, p.sqrt(), (1.0 - p).sqrt()]);
    Ok(ChannelPair {
        direct: Superoperator::new(split_kraus(&j, 2, 2, Side::Direct))?,
        complementary: Superoperator::new(split_kraus(&j, 2, 2, Side::Complementary))?,
    })
}

/// Erasure probabilities with one regulator per level.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureParams {
    pub probs: Vec<f64>,
    pub regulators: Vec<f64>,
}

/// Default regulator for limit demonstrations.
pub const DEFAULT_REGULATOR: f64 = 1e-3;

impl ErasureParams {
    /// Two-level case with probabilities `p, q` and regulators `zeta, eta`.
    pub fn qubit(p: f64, q: f64, zeta: f64, eta: f64) -> Self {
        ErasureParams { probs: vec![p, q], regulators: vec![zeta, eta] }
    }

    pub fn uniform_regulator(probs: Vec<f64>, regulator: f64) -> Self {
        let regulators = vec![regulator; probs.len()];
        ErasureParams { probs, regulators }
    }

    pub fn levels(&self) -> usize {
        self.probs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.probs.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if self.probs.len() != self.regulators.len() {
            return Err(Error::DimensionMismatch { expected: self.probs.len(), found: self.regulators.len() });
        }
        for &p in &self.probs {
            unit_interval("p", p)?;
        }
        for &z in &self.regulators {
            if !(z > 0.0 && z.is_finite()) {
                return Err(Error::OutOfRange { name: "regulator", value: z });
            }
        }
        Ok(())
    }

    /// Normalizations `(b_j, c_j)` of the regulated output kets.
    pub fn normalizations(&self) -> Vec<(f64, f64)> {
        self.probs
            .iter()
            .zip(&self.regulators)
            .map(|(&p, &z)| ((1.0 + (1.0 - p) * z * z).sqrt(), (1.0 + p * z * z).sqrt()))
            .collect()
    }
}

/// Regulated erasure isometry on `d + 1` levels; the flag `|e⟩` is the last
/// basis vector of every space.
pub fn erasure_family(params: &ErasureParams) -> Result<PcubedIsometry> {
    params.validate()?;
    let d = params.levels();
    let n = d + 1;
    let norms = params.normalizations();
    let mut alpha = CMatrix::zeros(n, n);
    let mut beta = CMatrix::zeros(n, n);
    let mut gamma = CMatrix::zeros(n, n);
    for (j, ((&p, &z), &(bj, cj))) in params.probs.iter().zip(&params.regulators).zip(&norms).enumerate() {
        let x = 1.0 / (bj * cj);
        alpha[(d, j)] = c64(x, 0.0);
        // 1 - x² without cancellation.
        alpha[(j, j)] = c64(z * (1.0 + p * (1.0 - p) * z * z).sqrt() * x, 0.0);
        beta[(d, j)] = c64(1.0 / bj, 0.0);
        beta[(j, j)] = c64(z * (1.0 - p).sqrt() / bj, 0.0);
        gamma[(d, j)] = c64(1.0 / cj, 0.0);
        gamma[(j, j)] = c64(z * p.sqrt() / cj, 0.0);
    }
    for m in [&mut alpha, &mut beta, &mut gamma] {
        m[(d, d)] = c64(1.0, 0.0);
    }
    PcubedIsometry::build(KetFamily::normalize(alpha)?, KetFamily::normalize(beta)?, KetFamily::normalize(gamma)?)
}

/// Embedding of the unflagged levels into the erasure input space.
pub fn erasure_embedding(levels: usize) -> CMatrix {
    CMatrix::identity(levels + 1, levels)
}

/// The erasure channel proper, restricted to inputs without the flag.
pub fn erasure_subchannel(params: &ErasureParams) -> Result<Subchannel> {
    erasure_family(params)?.subchannel(&erasure_embedding(params.levels()))
}

/// Limiting Stinespring matrix: `|j⟩ -> √(1-p_j)|j e⟩ + √p_j|e j⟩`, `|e⟩ -> |ee⟩`.
pub fn erasure_limit_matrix(probs: &[f64]) -> CMatrix {
    let d = probs.len();
    let n = d + 1;
    let mut j = CMatrix::zeros(n * n, n);
    for (k, &p) in probs.iter().enumerate() {
        j[(k * n + d, k)] = c64((1.0 - p).sqrt(), 0.0);
        j[(d * n + k, k)] = c64(p.sqrt(), 0.0);
    }
    j[(d * n + d, d)] = c64(1.0, 0.0);
    j
}

/// Pcubed isometry realizing a Hadamard channel as a subchannel.
#[derive(Debug, Clone)]
pub struct NaimarkExtension {
    iso: PcubedIsometry,
    embedding: CMatrix,
    unitary: CMatrix,
}

impl NaimarkExtension {
    /// `J|a_j⟩ = |b_j⟩ ⊗ |γ_j⟩` with orthonormal `a_j` and `b_j`.
    pub fn iso(&self) -> &PcubedIsometry {
        &self.iso
    }

    /// Isometric embedding `V` of the original input space, `V†V = I`.
    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    /// Projector `P = V V†` onto the embedded input space.
    pub fn projector(&self) -> CMatrix {
        &self.embedding * self.embedding.adjoint()
    }

    /// Unitary whose leading rows are the POVM vectors.
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// `J V`, the original rank-one-Kraus isometry.
    pub fn composed(&self) -> CMatrix {
        self.iso.matrix() * &self.embedding
    }

    /// Hadamard channel (direct side) with its entanglement-breaking complement.
    pub fn hadamard(&self) -> Result<Subchannel> {
        self.iso.subchannel(&self.embedding)
    }
}

/// Completes orthonormal rows to a square unitary.
fn complete_rows(m: &CMatrix) -> CMatrix {
    let (rows, n) = m.shape();
    let mut basis: Vec<crate::matcore::CVector> = (0..rows).map(|i| m.row(i).transpose()).collect();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = crate::matcore::CVector::zeros(n);
        v[k] = c64(1.0, 0.0);
        for u in &basis {
            let overlap = u.conjugate().dot(&v);
            v -= u * overlap;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v.unscale(norm));
        }
    }
    CMatrix::from_fn(n, n, |i, j| basis[i][j])
}

/// Naimark extension of the rank-one POVM `{|α̂_j⟩⟨α̂_j|}` paired with
/// normalized environment kets `γ_j`.
///
/// `alpha_hat` holds the subnormalized kets as columns.
pub fn naimark_hadamard(gamma: &KetFamily, alpha_hat: &CMatrix) -> Result<NaimarkExtension> {
    let (da, n) = alpha_hat.shape();
    if n < da {
        return Err(Error::DimensionTooSmall { needed: da, found: n });
    }
    if gamma.count() != n {
        return Err(Error::DimensionMismatch { expected: n, found: gamma.count() });
    }
    let defect = frobenius(&(alpha_hat * alpha_hat.adjoint() - CMatrix::identity(da, da)));
    if defect > 1e-10 {
        return Err(Error::IncompletePovm { defect });
    }
    let basis = KetFamily::standard_basis(n);
    let iso = PcubedIsometry::build(basis.clone(), basis, gamma.clone())?;
    Ok(NaimarkExtension { iso, embedding: alpha_hat.adjoint(), unitary: complete_rows(alpha_hat) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrade::{classify_isometry, Tag};
    use crate::matcore::DEFAULT_TOL;

    #[test]
    fn equal_amplitudes_are_both() {
        let q = QubitParams::from_output_amplitudes(0.4, 0.4).unwrap();
        assert_eq!(classify_isometry(&qubit_channel(&q).unwrap(), DEFAULT_TOL).tag, Tag::Both);
    }

    #[test]
    fn larger_direct_amplitude_is_degradable() {
        let q = QubitParams::from_output_amplitudes(0.8, 0.3).unwrap();
        assert_eq!(classify_isometry(&qubit_channel(&q).unwrap(), DEFAULT_TOL).tag, Tag::Degradable);
        let q = QubitParams::from_output_amplitudes(0.3, 0.8).unwrap();
        assert_eq!(classify_isometry(&qubit_channel(&q).unwrap(), DEFAULT_TOL).tag, Tag::Antidegradable);
    }

    #[test]
    fn coefficient_round_trip() {
        let q = QubitParams::from_output_amplitudes(0.6, 0.35).unwrap();
        let f = q.coefficients().unwrap();
        let back = QubitParams::Coefficients { f0: f[0], f1: f[1], g0: f[2], g1: f[3] };
        let (x, y) = (q.amplitudes().unwrap(), back.amplitudes().unwrap());
        for k in 0..6 {
            assert!((x[k] - y[k]).abs() < 1e-12);
        }
        let j = qubit_channel(&back).unwrap();
        assert!(frobenius(&(j.matrix() - qubit_isometry_matrix(f))) < 1e-12);
    }

    #[test]
    fn vanishing_coefficient_is_not_pcubed() {
        let q = QubitParams::Coefficients { f0: 1.0, f1: 0.0, g0: 0.3f64.sqrt(), g1: 0.7f64.sqrt() };
        assert!(matches!(qubit_channel(&q), Err(Error::NotPcubed { .. })));
    }

    #[test]
    fn damping_limit_coefficients() {
        let j = damping_limit_family(0.3, 1e-3).unwrap();
        let target = qubit_isometry_matrix([1.0, 0.0, 0.3f64.sqrt(), 0.7f64.sqrt()]);
        assert!(frobenius(&(j.matrix() - target)) < 1e-5);
        assert_eq!(classify_isometry(&j, DEFAULT_TOL).tag, Tag::Degradable);
        let j = damping_limit_family(0.7, 1e-3).unwrap();
        assert_eq!(classify_isometry(&j, DEFAULT_TOL).tag, Tag::Antidegradable);
        assert!(damping_limit_family(1.0, 1e-3).is_err());
    }

    #[test]
    fn erasure_gram_entries() {
        let params = ErasureParams::qubit(0.2, 0.4, 0.05, 0.03);
        let iso = erasure_family(&params).unwrap();
        let norms = params.normalizations();
        let ((b0, c0), (b1, c1)) = (norms[0], norms[1]);
        let (gb, gc) = (iso.gram_b(), iso.gram_c());
        assert!((gb.get(0, 2).re - 1.0 / b0).abs() < 1e-12);
        assert!((gb.get(1, 2).re - 1.0 / b1).abs() < 1e-12);
        assert!((gb.get(0, 1).re - 1.0 / (b0 * b1)).abs() < 1e-12);
        assert!((gc.get(0, 2).re - 1.0 / c0).abs() < 1e-12);
        assert!((gc.get(0, 1).re - 1.0 / (c0 * c1)).abs() < 1e-12);
    }

    #[test]
    fn erasure_verdicts() {
        let tag = |p: f64| classify_isometry(&erasure_family(&ErasureParams::qubit(p, p, 0.01, 0.01)).unwrap(), DEFAULT_TOL).tag;
        assert_eq!(tag(0.3), Tag::Degradable);
        assert_eq!(tag(0.5), Tag::Both);
        assert!(!tag(0.7).is_degradable());
    }

    #[test]
    fn erasure_converges_to_limit() {
        let err = |z: f64| {
            let iso = erasure_family(&ErasureParams::qubit(0.3, 0.2, z, z)).unwrap();
            frobenius(&(iso.matrix() - erasure_limit_matrix(&[0.3, 0.2])))
        };
        assert!(err(1e-4) < 1e-3);
        assert!(err(1e-4) < 0.2 * err(1e-3));
        let sub = erasure_subchannel(&ErasureParams::qubit(0.3, 0.3, 1e-3, 1e-3)).unwrap();
        assert_eq!(sub.input_dim(), 2);
        assert!(sub.isometry_defect() < 1e-10);
    }

    #[test]
    fn multi_level_erasure() {
        let iso = erasure_family(&ErasureParams::uniform_regulator(vec![0.1, 0.4, 0.2], 1e-3)).unwrap();
        assert_eq!(iso.dim_a(), 4);
        assert_eq!(classify_isometry(&iso, DEFAULT_TOL).tag, Tag::Degradable);
        let iso = erasure_family(&ErasureParams::uniform_regulator(vec![0.1, 0.6, 0.2], 1e-3)).unwrap();
        assert!(!classify_isometry(&iso, DEFAULT_TOL).tag.is_degradable());
    }

    fn trine() -> CMatrix {
        let s = (2.0f64 / 3.0).sqrt();
        let h = 3f64.sqrt() / 2.0;
        real_matrix(2, 3, &[s, -0.5 * s, -0.5 * s, 0.0, h * s, -h * s])
    }

    #[test]
    fn trine_extension() {
        let gamma = KetFamily::from_real_columns(2, 3, &[1.0, 0.6, 0.0, 0.0, 0.8, 1.0]).unwrap();
        let ext = naimark_hadamard(&gamma, &trine()).unwrap();
        let v = ext.embedding();
        assert!(frobenius(&(v.adjoint() * v - CMatrix::identity(2, 2))) < 1e-12);
        for j in 0..3 {
            assert!((v.row(j).norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        }
        let u = ext.unitary();
        assert!(frobenius(&(u * u.adjoint() - CMatrix::identity(3, 3))) < 1e-12);
        assert_eq!(classify_isometry(ext.iso(), DEFAULT_TOL).tag, Tag::Degradable);
        assert!(ext.hadamard().unwrap().isometry_defect() < 1e-10);
    }

    #[test]
    fn naimark_rejections() {
        let gamma = KetFamily::standard_basis(2);
        let bad = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.9]);
        assert!(matches!(naimark_hadamard(&gamma, &bad), Err(Error::IncompletePovm { .. })));
        let wide = CMatrix::identity(3, 2);
        assert!(matches!(naimark_hadamard(&gamma, &wide), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn square_povm_is_trivial_extension() {
        let gamma = KetFamily::standard_basis(2);
        let ext = naimark_hadamard(&gamma, &CMatrix::identity(2, 2)).unwrap();
        assert!(frobenius(&(ext.projector() - CMatrix::identity(2, 2))) < 1e-15);
    }
}
