//! Coherent information and one-shot quantum capacity.
//!
//! All entropies are in bits. States are parametrized as `ρ = R^H R / Tr(R^H R)`
//! with `R` upper triangular: the first `d` chart coordinates are the real
//! diagonal of `R`, followed by `(Re, Im)` pairs of `R_ik` for `i < k` in
//! row-major order.

use std::f64::consts::LN_2;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{ChannelPair, DensityOperator, PcubedIsometry, Side};
use crate::matcore::{c64, hermitian_eig_unchecked, hermitize, CMatrix};

/// Eigenvalues below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
const LOG_FLOOR: f64 = 1e-15;

fn entropy_of_spectrum(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&l| l > ENTROPY_CUTOFF)
        .map(|l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy in bits of a Hermitian unit-trace matrix.
pub fn matrix_entropy(m: &CMatrix) -> f64 {
    entropy_of_spectrum(hermitian_eig_unchecked(&hermitize(m)).values.iter().copied())
}

/// Von Neumann entropy `-Tr ρ log2 ρ`.
pub fn entropy(rho: &DensityOperator) -> Result<f64> {
    let tr = rho.matrix().trace().re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState { reason: format!("trace {tr}") });
    }
    let eig = hermitian_eig_unchecked(rho.matrix());
    if eig.min() < -1e-10 {
        return Err(Error::InvalidState { reason: format!("eigenvalue {:e}", eig.min()) });
    }
    Ok(entropy_of_spectrum(eig.values.iter().copied()))
}

/// `ΔS(ρ) = S(B(ρ)) - S(C(ρ))` in bits.
pub fn coherent_information(iso: &PcubedIsometry, rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != iso.dim_a() {
        return Err(Error::DimensionMismatch { expected: iso.dim_a(), found: rho.dim() });
    }
    Ok(CoherentInfo::new(iso).value(rho.matrix()))
}

/// `ΔS` with precomputed Kraus operators, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CoherentInfo {
    pair: ChannelPair,
    dim: usize,
    anchors: Vec<CMatrix>,
}

impl CoherentInfo {
    /// Keeps the pure input kets as anchors: `ΔS` vanishes on each of them
    /// and nontrivial optima can branch off nearby.
    pub fn new(iso: &PcubedIsometry) -> Self {
        let alpha = iso.alpha();
        let anchors = (0..alpha.count())
            .map(|j| {
                let k = alpha.ket(j);
                &k * k.adjoint()
            })
            .collect();
        CoherentInfo { pair: iso.channels(), dim: iso.dim_a(), anchors }
    }

    pub fn from_channels(pair: ChannelPair) -> Self {
        let dim = pair.direct.source_dim();
        CoherentInfo { pair, dim, anchors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn channels(&self) -> &ChannelPair {
        &self.pair
    }

    pub fn value(&self, rho: &CMatrix) -> f64 {
        matrix_entropy(&self.pair.direct.apply(rho)) - matrix_entropy(&self.pair.complementary.apply(rho))
    }

    /// Hermitian `G` with `dΔS = Tr(G dρ)` for trace-zero `dρ`.
    pub fn gradient_operator(&self, rho: &CMatrix) -> CMatrix {
        let log_out = |side: Side| {
            let ch = self.pair.side(side);
            let eig = hermitian_eig_unchecked(&hermitize(&ch.apply(rho)));
            ch.apply_adjoint(&eig.map(|l| l.max(LOG_FLOOR).log2()))
        };
        hermitize(&(log_out(Side::Complementary) - log_out(Side::Direct)))
    }

    /// Second derivative of `ΔS(ρ + εK)` at `ε = 0`, in bits.
    pub fn second_derivative(&self, rho: &CMatrix, k: &CMatrix) -> f64 {
        let b = entropy_second_derivative(&self.pair.direct.apply(rho), &self.pair.direct.apply(k));
        let c = entropy_second_derivative(
            &self.pair.complementary.apply(rho),
            &self.pair.complementary.apply(k),
        );
        b - c
    }

    /// Hessian of `ΔS` on the affine space of density operators, in an
    /// orthonormal basis of traceless Hermitian matrices.
    pub fn hessian(&self, rho: &CMatrix) -> nalgebra::DMatrix<f64> {
        let basis = traceless_basis(self.dim);
        let n = basis.len();
        let mut h = nalgebra::DMatrix::<f64>::zeros(n, n);
        for side in [Side::Direct, Side::Complementary] {
            let ch = self.pair.side(side);
            let eig = hermitian_eig_unchecked(&hermitize(&ch.apply(rho)));
            let weights = divided_log_weights(eig.values.as_slice());
            let rotated: Vec<CMatrix> =
                basis.iter().map(|e| eig.vectors.adjoint() * ch.apply(e) * &eig.vectors).collect();
            let sign = if side == Side::Direct { 1.0 } else { -1.0 };
            for p in 0..n {
                for q in p..n {
                    let mut acc = 0.0;
                    for i in 0..weights.nrows() {
                        for j in 0..weights.ncols() {
                            acc += weights[(i, j)] * (rotated[p][(i, j)].conj() * rotated[q][(i, j)]).re;
                        }
                    }
                    h[(p, q)] += sign * acc;
                    if p != q {
                        h[(q, p)] += sign * acc;
                    }
                }
            }
        }
        h
    }
}

/// `g(a, b) = -(ln a - ln b) / (a - b) / ln 2`, with `g(a, a) = -1 / (a ln 2)`.
fn divided_log_weights(values: &[f64]) -> nalgebra::DMatrix<f64> {
    let n = values.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (values[i].max(LOG_FLOOR), values[j].max(LOG_FLOOR));
        let g = if (a - b).abs() <= 1e-12 * a.max(b) {
            1.0 / (0.5 * (a + b))
        } else {
            (a.ln() - b.ln()) / (a - b)
        };
        -g / LN_2
    })
}

/// `d²/dε² S(σ + εK)` at `ε = 0`, in bits.
pub fn entropy_second_derivative(sigma: &CMatrix, k: &CMatrix) -> f64 {
    let eig = hermitian_eig_unchecked(&hermitize(sigma));
    let weights = divided_log_weights(eig.values.as_slice());
    let kt = eig.vectors.adjoint() * hermitize(k) * &eig.vectors;
    let mut acc = 0.0;
    for i in 0..kt.nrows() {
        for j in 0..kt.ncols() {
            acc += weights[(i, j)] * kt[(i, j)].norm_sqr();
        }
    }
    acc
}

/// Orthonormal basis of traceless Hermitian `d x d` matrices (generalized Gell-Mann).
pub fn traceless_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = c64(r, 0.0);
            s[(k, j)] = c64(r, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = c64(0.0, -r);
            a[(k, j)] = c64(0.0, r);
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = c64(1.0 / norm, 0.0);
        }
        m[(l, l)] = c64(-(l as f64) / norm, 0.0);
        out.push(m);
    }
    out
}

/// Second derivative of `ΔS(ρ + εK)`; `K` should be Hermitian and traceless.
pub fn directional_second_derivative(iso: &PcubedIsometry, rho: &DensityOperator, k: &CMatrix) -> Result<f64> {
    if rho.dim() != iso.dim_a() || k.nrows() != iso.dim_a() {
        return Err(Error::DimensionMismatch { expected: iso.dim_a(), found: k.nrows() });
    }
    Ok(CoherentInfo::new(iso).second_derivative(rho.matrix(), k))
}

/// Number of real chart coordinates for dimension `d`.
pub fn chart_len(d: usize) -> usize {
    d * d
}

/// Upper-triangular factor encoded by chart coordinates.
pub fn chart_to_factor(x: &[f64], d: usize) -> CMatrix {
    let mut r = CMatrix::zeros(d, d);
    for i in 0..d {
        r[(i, i)] = c64(x[i], 0.0);
    }
    let mut p = d;
    for i in 0..d {
        for k in (i + 1)..d {
            r[(i, k)] = c64(x[p], x[p + 1]);
            p += 2;
        }
    }
    r
}

/// Inverse of [`chart_to_factor`]; the diagonal is made real.
pub fn factor_to_chart(r: &CMatrix) -> Vec<f64> {
    let d = r.nrows();
    let mut x = vec![0.0; chart_len(d)];
    for i in 0..d {
        x[i] = r[(i, i)].norm();
    }
    let mut p = d;
    for i in 0..d {
        let ph = if r[(i, i)].norm() > 0.0 { r[(i, i)].conj() / r[(i, i)].norm() } else { c64(1.0, 0.0) };
        for k in (i + 1)..d {
            let z = r[(i, k)] * ph;
            x[p] = z.re;
            x[p + 1] = z.im;
            p += 2;
        }
    }
    x
}

pub fn chart_to_state(x: &[f64], d: usize) -> CMatrix {
    let r = chart_to_factor(x, d);
    let m = r.adjoint() * &r;
    let t = m.trace().re;
    hermitize(&m.unscale(t))
}

/// Chart coordinates of a state, via Cholesky of a slightly mixed copy.
pub fn state_to_chart(rho: &CMatrix, mix: f64) -> Vec<f64> {
    let d = rho.nrows();
    let mixed = hermitize(&(rho.scale(1.0 - mix) + CMatrix::identity(d, d).scale(mix / d as f64)));
    let chol = mixed.cholesky().expect("mixed state is positive definite");
    let r = chol.l().adjoint();
    factor_to_chart(&r)
}

/// Value and chart gradient of `sign * ΔS`.
fn value_and_gradient(obj: &CoherentInfo, x: &[f64], sign: f64) -> (f64, Vec<f64>) {
    let d = obj.dim;
    let r = chart_to_factor(x, d);
    let t: f64 = x.iter().map(|v| v * v).sum();
    let rho = hermitize(&(r.adjoint() * &r).unscale(t));
    let f = obj.value(&rho);
    let g = obj.gradient_operator(&rho);
    let shift = (&g * &rho).trace().re;
    let gp = g - CMatrix::identity(d, d).scale(shift);
    let w = gp * r.adjoint();
    let mut grad = vec![0.0; x.len()];
    for i in 0..d {
        grad[i] = 2.0 * w[(i, i)].re / t;
    }
    let mut p = d;
    for i in 0..d {
        for k in (i + 1)..d {
            grad[p] = 2.0 * w[(k, i)].re / t;
            grad[p + 1] = -2.0 * w[(k, i)].im / t;
            p += 2;
        }
    }
    (sign * f, grad.into_iter().map(|v| sign * v).collect())
}

/// Gradient of `ΔS` with respect to chart coordinates.
pub fn chart_gradient(obj: &CoherentInfo, x: &[f64]) -> Vec<f64> {
    value_and_gradient(obj, x, 1.0).1
}

/// Multistart configuration for [`one_shot_capacity`].
#[derive(Debug, Clone)]
pub struct MultistartOptions {
    pub starts: usize,
    pub seed: u64,
    /// Adds the symmetric-qutrit seeds when the input is three-dimensional.
    pub structured: bool,
    pub extra_seeds: Vec<DensityOperator>,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub parallel: bool,
}

impl Default for MultistartOptions {
    fn default() -> Self {
        MultistartOptions {
            starts: 32,
            seed: 0x5eed,
            structured: true,
            extra_seeds: Vec::new(),
            max_iter: 400,
            grad_tol: 1e-7,
            parallel: true,
        }
    }
}

impl MultistartOptions {
    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

/// Best local optimum found by the multistart search.
#[derive(Debug, Clone)]
pub struct OptimizationReport {
    pub side: Side,
    /// Maximum of `ΔS` (direct) or of `-ΔS` (complementary), in bits.
    pub value: f64,
    pub argopt: DensityOperator,
    pub starts: usize,
    /// Some start reached the gradient tolerance.
    pub converged: bool,
    pub gradient_norm: f64,
}

impl OptimizationReport {
    /// One-shot capacity, `max(value, 0)`.
    pub fn capacity(&self) -> f64 {
        self.value.max(0.0)
    }
}

#[derive(Debug, Clone)]
struct LocalResult {
    value: f64,
    x: Vec<f64>,
    grad_norm: f64,
    converged: bool,
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS ascent of `sign * ΔS` on the unit sphere of the chart.
fn local_ascent(obj: &CoherentInfo, x0: Vec<f64>, sign: f64, opts: &MultistartOptions) -> LocalResult {
    let n = x0.len();
    let mut x = x0;
    normalize(&mut x);
    let (mut f, mut g) = value_and_gradient(obj, &x, sign);
    let mut h = nalgebra::DMatrix::<f64>::identity(n, n);
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm < opts.grad_tol {
            converged = true;
            break;
        }
        let gv = DVector::from_column_slice(&g);
        let mut p: Vec<f64> = (&h * &gv).iter().copied().collect();
        if dot(&p, &g) <= 0.0 {
            h = nalgebra::DMatrix::identity(n, n);
            p = g.clone();
        }
        let slope = dot(&p, &g);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + step * b).collect();
            normalize(&mut xn);
            let (fn_, gn) = value_and_gradient(obj, &xn, sign);
            if fn_.is_finite() && fn_ >= f + 1e-4 * step * slope {
                accepted = Some((xn, fn_, gn));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            if h != nalgebra::DMatrix::identity(n, n) {
                h = nalgebra::DMatrix::identity(n, n);
                continue;
            }
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        // Ascent: curvature pairs use the negated gradient change.
        let y: Vec<f64> = g.iter().zip(&gn).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            let sv = DVector::from_column_slice(&s);
            let yv = DVector::from_column_slice(&y);
            let rho = 1.0 / sy;
            let hy = &h * &yv;
            let yhy = yv.dot(&hy);
            h += (&sv * sv.transpose()) * (rho * rho * yhy + rho)
                - (&hy * sv.transpose() + &sv * hy.transpose()) * rho;
        }
        let done = (fn_ - f).abs() < 1e-15 * f.abs().max(1.0) && dot(&gn, &gn).sqrt() < 1e3 * opts.grad_tol;
        x = xn;
        f = fn_;
        g = gn;
        if done {
            break;
        }
    }
    let grad_norm = dot(&g, &g).sqrt();
    LocalResult { value: f, x, grad_norm, converged: converged || grad_norm < opts.grad_tol }
}

/// splitmix64 finalizer, used to derive independent stream seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random chart point with Gaussian entries.
pub fn random_chart<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..chart_len(d)).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Random full-rank density operator from a Gaussian factor.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::from_raw(chart_to_state(&random_chart(d, rng), d))
}

const ANCHOR_MIX: [f64; 2] = [0.02, 0.1];

fn structured_seeds() -> Vec<CMatrix> {
    use crate::qutritlab::{rho_special, RhoKind};
    let mut seeds = Vec::new();
    for s in [0.05, 0.2, 1.0 / 3.0, 0.45] {
        seeds.push(rho_special(RhoKind::Rho0(s)).expect("valid s").into_matrix());
    }
    seeds.push(rho_special(RhoKind::Rho1).expect("valid").into_matrix());
    for s in [0.1, 0.25, 0.4] {
        let m = rho_special(RhoKind::Rho2(s)).expect("valid s").into_matrix();
        seeds.push(m.map(|z| z.conj()));
        seeds.push(m);
    }
    seeds
}

/// Maximizes `ΔS` (direct side) or `-ΔS` (complementary side) over input states.
pub fn one_shot_capacity(iso: &PcubedIsometry, side: Side, opts: &MultistartOptions) -> OptimizationReport {
    optimize(&CoherentInfo::new(iso), side, opts)
}

pub fn optimize(obj: &CoherentInfo, side: Side, opts: &MultistartOptions) -> OptimizationReport {
    let d = obj.dim;
    let sign = if side == Side::Direct { 1.0 } else { -1.0 };
    let mut starts: Vec<Option<Vec<f64>>> = Vec::new();
    let mut seeds: Vec<CMatrix> = opts.extra_seeds.iter().map(|s| s.matrix().clone()).collect();
    if opts.structured {
        if d == 3 {
            seeds.extend(structured_seeds());
        }
        let mixed = CMatrix::identity(d, d).unscale(d as f64);
        for a in &obj.anchors {
            for w in ANCHOR_MIX {
                seeds.push(a.scale(1.0 - w) + mixed.scale(w));
            }
        }
    }
    seeds.push(CMatrix::identity(d, d).unscale(d as f64));
    for s in &seeds {
        starts.push(Some(state_to_chart(s, 1e-6)));
    }
    starts.extend((0..opts.starts).map(|_| None));
    let run = |(idx, start): (usize, &Option<Vec<f64>>)| {
        let x0 = match start {
            Some(x) => x.clone(),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, idx as u64));
                random_chart(d, &mut rng)
            }
        };
        local_ascent(obj, x0, sign, opts)
    };
    let results: Vec<LocalResult> = if opts.parallel {
        starts.par_iter().enumerate().map(run).collect()
    } else {
        starts.iter().enumerate().map(run).collect()
    };
    let mut best = &results[0];
    for r in &results[1..] {
        if r.value > best.value {
            best = r;
        }
    }
    let argopt = DensityOperator::from_raw(chart_to_state(&best.x, d));
    OptimizationReport {
        side,
        value: sign * obj.value(argopt.matrix()),
        argopt,
        starts: results.len(),
        converged: results.iter().any(|r| r.converged),
        gradient_norm: best.grad_norm,
    }
}

/// Curvature class of `ΔS` over sampled states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curvature {
    Concave,
    Convex,
    /// Both concave and convex within tolerance.
    Flat,
    Neither,
}

impl Curvature {
    pub fn as_str(self) -> &'static str {
        match self {
            Curvature::Concave => "Concave",
            Curvature::Convex => "Convex",
            Curvature::Flat => "Flat",
            Curvature::Neither => "Neither",
        }
    }

    pub fn is_concave(self) -> bool {
        matches!(self, Curvature::Concave | Curvature::Flat)
    }

    pub fn is_convex(self) -> bool {
        matches!(self, Curvature::Convex | Curvature::Flat)
    }
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub samples: usize,
    pub tol: f64,
    /// Weight toward the maximally mixed state, keeping samples interior.
    pub mix_weight: f64,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { samples: 2000, tol: 1e-7, mix_weight: 1e-3, seed: 0xc0ca }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityProbe {
    pub samples: usize,
    pub min_hessian_eig: f64,
    pub max_hessian_eig: f64,
    pub verdict: Curvature,
}

/// Extreme Hessian eigenvalues of `ΔS` over random interior states.
pub fn hessian_probe(iso: &PcubedIsometry, n_samples: usize, tol: f64) -> ConcavityProbe {
    hessian_probe_with(iso, &ProbeOptions { samples: n_samples, tol, ..ProbeOptions::default() })
}

pub fn hessian_probe_with(iso: &PcubedIsometry, opts: &ProbeOptions) -> ConcavityProbe {
    let obj = CoherentInfo::new(iso);
    let d = obj.dim;
    let mixed = DensityOperator::maximally_mixed(d);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if d < 2 {
        // A one-dimensional state space has no directions to curve along.
        return ConcavityProbe { samples: 0, min_hessian_eig: 0.0, max_hessian_eig: 0.0, verdict: Curvature::Flat };
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..opts.samples {
        // Alternate between full-rank Wishart states and near-pure states.
        let rho = if i % 2 == 0 {
            random_state(d, &mut rng)
        } else {
            let psi = crate::matcore::CVector::from_fn(d, |_, _| {
                c64(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            });
            DensityOperator::pure(&psi).expect("Gaussian vector is nonzero")
        };
        let rho = rho.mix(&mixed, opts.mix_weight);
        let eig = nalgebra::SymmetricEigen::new(obj.hessian(rho.matrix()));
        for &v in eig.eigenvalues.iter() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let concave = hi <= opts.tol;
    let convex = lo >= -opts.tol;
    let verdict = match (concave, convex) {
        (true, true) => Curvature::Flat,
        (true, false) => Curvature::Concave,
        (false, true) => Curvature::Convex,
        (false, false) => Curvature::Neither,
    };
    ConcavityProbe { samples: opts.samples, min_hessian_eig: lo, max_hessian_eig: hi, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_gram, real_matrix, GramMatrix};

    fn qutrit(b: f64, c: f64) -> PcubedIsometry {
        PcubedIsometry::from_gram_pair(
            &GramMatrix::uniform(3, c64(b, 0.0)).unwrap(),
            &GramMatrix::uniform(3, c64(c, 0.0)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityOperator::pure(&crate::matcore::CVector::from_vec(vec![c64(0.6, 0.0), c64(0.0, 0.8)])).unwrap();
        assert!(entropy(&pure).unwrap().abs() < 1e-12);
        assert!((entropy(&DensityOperator::maximally_mixed(3)).unwrap() - 3f64.log2()).abs() < 1e-12);
        let half = DensityOperator::new(real_matrix(3, 3, &[0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((entropy(&half).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_information_vanishes_on_alpha_kets() {
        let iso = qutrit(0.2, 0.5);
        let rho = DensityOperator::pure(&iso.alpha().ket(2)).unwrap();
        assert!(coherent_information(&iso, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn chart_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_chart(3, &mut rng);
        let rho = chart_to_state(&x, 3);
        let y = state_to_chart(&rho, 0.0);
        let back = chart_to_state(&y, 3);
        assert!(crate::matcore::frobenius(&(back - rho)) < 1e-10);
    }

    #[test]
    fn chart_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let iso = PcubedIsometry::from_gram_pair(&random_gram(3, 3, &mut rng), &random_gram(3, 3, &mut rng)).unwrap();
        let obj = CoherentInfo::new(&iso);
        for _ in 0..5 {
            let x = random_chart(3, &mut rng);
            let g = chart_gradient(&obj, &x);
            let h = 1e-6;
            for i in 0..x.len() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (obj.value(&chart_to_state(&xp, 3)) - obj.value(&chart_to_state(&xm, 3))) / (2.0 * h);
                assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0), "{i}: {fd} vs {}", g[i]);
            }
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let iso = qutrit(0.45, -0.35);
        let obj = CoherentInfo::new(&iso);
        let rho = random_state(3, &mut rng).mix(&DensityOperator::maximally_mixed(3), 0.1);
        let basis = traceless_basis(3);
        let h = obj.hessian(rho.matrix());
        let eps = 1e-4;
        for p in 0..basis.len() {
            for q in 0..basis.len() {
                let f = |a: f64, b: f64| obj.value(&(rho.matrix() + basis[p].scale(a) + basis[q].scale(b)));
                let fd = (f(eps, eps) - f(eps, -eps) - f(-eps, eps) + f(-eps, -eps)) / (4.0 * eps * eps);
                assert!((fd - h[(p, q)]).abs() < 1e-5, "({p},{q}): {fd} vs {}", h[(p, q)]);
            }
        }
    }

    #[test]
    fn traceless_basis_is_orthonormal() {
        let b = traceless_basis(3);
        assert_eq!(b.len(), 8);
        for (i, x) in b.iter().enumerate() {
            assert!(x.trace().norm() < 1e-15);
            for (j, y) in b.iter().enumerate() {
                let ip = (x.adjoint() * y).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c64(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn capacity_dominates_random_probes() {
        let iso = qutrit(0.2, 0.5);
        let rep = one_shot_capacity(&iso, Side::Direct, &MultistartOptions::default().with_starts(8));
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let rho = random_state(3, &mut rng);
            assert!(rep.value >= coherent_information(&iso, &rho).unwrap() - 1e-7);
        }
        assert!(rep.converged);
    }

    #[test]
    fn probe_verdicts() {
        assert_eq!(hessian_probe(&qutrit(0.2, 0.5), 200, 1e-7).verdict, Curvature::Concave);
        assert_eq!(hessian_probe(&qutrit(0.5, 0.2), 200, 1e-7).verdict, Curvature::Convex);
        assert_eq!(hessian_probe(&qutrit(0.45, -0.35), 400, 1e-7).verdict, Curvature::Neither);
    }
}
