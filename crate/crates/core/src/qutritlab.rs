//! The symmetric qutrit family with equal real off-diagonal Gram entries.
//!
//! `B` and `C` have every off-diagonal entry equal to `b` and `c`, so
//! `A = B * C` has off-diagonal `a = bc`. All three ket families use the
//! triangle-shaped standard kets, which makes the isometry equivariant under
//! the six-element group generated by a reflection `F` and a rotation `R`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{hessian_probe_with, mix_seed, optimize, CoherentInfo, Curvature, MultistartOptions, ProbeOptions};
use crate::degrade::{classify, Tag, Verdict};
use crate::error::{Error, Result};
use crate::isometry::{DensityOperator, PcubedIsometry, Side};
use crate::matcore::{c64, frobenius, max_abs, real_matrix, CMatrix, KetFamily, DEFAULT_TOL};

fn check_param(name: &'static str, x: f64) -> Result<()> {
    if !(-0.5..=1.0).contains(&x) {
        return Err(Error::OutOfRange { name, value: x });
    }
    Ok(())
}

/// Three unit kets with every pairwise inner product equal to `x`.
pub fn standard_kets(x: f64) -> Result<KetFamily> {
    check_param("x", x)?;
    let p = ((1.0 + 2.0 * x) / 3.0).max(0.0).sqrt();
    let q = ((1.0 - x) / 2.0).max(0.0).sqrt();
    let r = ((1.0 - x) / 6.0).max(0.0).sqrt();
    let z = (2.0 * (1.0 - x) / 3.0).max(0.0).sqrt();
    KetFamily::from_real_columns(3, 3, &[p, p, p, -q, q, 0.0, -r, -r, z])
}

/// Reflection exchanging the first two standard kets.
pub fn reflection() -> CMatrix {
    real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0])
}

/// Rotation cycling the standard kets `1 -> 2 -> 3 -> 1`.
pub fn rotation() -> CMatrix {
    let h = 3f64.sqrt() / 2.0;
    real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, -0.5, -h, 0.0, h, -0.5])
}

/// The six group elements `I, R, R², F, FR, FR²`.
pub fn group() -> Vec<CMatrix> {
    let (f, r) = (reflection(), rotation());
    let r2 = &r * &r;
    vec![CMatrix::identity(3, 3), r.clone(), r2.clone(), f.clone(), &f * &r, &f * &r2]
}

/// Isometry of the symmetric family at `(b, c)`.
///
/// When `a = bc` is `1` or `-1/2` the input kets span only one or two
/// dimensions; the isometry is then built on that span and `embedding` maps it
/// into the three-dimensional standard basis.
#[derive(Debug, Clone)]
pub struct SymmetricQutrit {
    b: f64,
    c: f64,
    iso: PcubedIsometry,
    embedding: Option<CMatrix>,
}

impl SymmetricQutrit {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        check_param("b", b)?;
        check_param("c", c)?;
        let a = b * c;
        let alpha = standard_kets(a)?;
        let beta = standard_kets(b)?;
        let gamma = standard_kets(c)?;
        let support: Option<Vec<usize>> = if (a - 1.0).abs() < 1e-12 {
            Some(vec![0])
        } else if (a + 0.5).abs() < 1e-12 {
            Some(vec![1, 2])
        } else {
            None
        };
        let (alpha, embedding) = match support {
            None => (alpha, None),
            Some(rows) => {
                let reduced = CMatrix::from_fn(rows.len(), 3, |i, j| alpha.matrix()[(rows[i], j)]);
                let embed = CMatrix::from_fn(3, rows.len(), |i, j| c64(if rows[j] == i { 1.0 } else { 0.0 }, 0.0));
                (KetFamily::normalize(reduced)?, Some(embed))
            }
        };
        let iso = PcubedIsometry::build(alpha, beta, gamma)?;
        Ok(SymmetricQutrit { b, c, iso, embedding })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn a(&self) -> f64 {
        self.b * self.c
    }

    pub fn iso(&self) -> &PcubedIsometry {
        &self.iso
    }

    /// Input embedding for the degenerate cases, `None` when `α` spans `H_a`.
    pub fn embedding(&self) -> Option<&CMatrix> {
        self.embedding.as_ref()
    }

    pub fn verdict(&self, tol: f64) -> Verdict {
        classify(&self.iso.gram_b(), &self.iso.gram_c(), tol)
    }

    /// Channel output for a three-dimensional input state.
    ///
    /// In the degenerate cases the state is first compressed onto the span
    /// of the input kets.
    pub fn apply(&self, rho: &CMatrix, side: Side) -> Result<CMatrix> {
        match &self.embedding {
            None => self.iso.apply_operator(rho, side),
            Some(e) => self.iso.apply_operator(&(e.adjoint() * rho * e), side),
        }
    }

    /// Largest `||J G - (G ⊗ G) J||` over the group; non-degenerate case only.
    pub fn equivariance_defect(&self) -> f64 {
        if self.embedding.is_some() {
            return f64::NAN;
        }
        let j = self.iso.matrix();
        group()
            .iter()
            .map(|g| max_abs(&(j * g - g.kronecker(g) * j)))
            .fold(0.0, f64::max)
    }
}

/// Special input states invariant under the rotation subgroup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoKind {
    Rho0(f64),
    Rho1,
    Rho2(f64),
    RhoR(f64, f64),
}

/// `[[1-2s, 0, 0], [0, s, it], [0, -it, s]]`.
pub fn rho_r_matrix(s: f64, t: f64) -> CMatrix {
    let mut m = real_matrix(3, 3, &[1.0 - 2.0 * s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0, s]);
    m[(1, 2)] = c64(0.0, t);
    m[(2, 1)] = c64(0.0, -t);
    m
}

pub fn rho_special(kind: RhoKind) -> Result<DensityOperator> {
    let (s, t) = match kind {
        RhoKind::Rho0(s) => (s, 0.0),
        RhoKind::Rho1 => (0.5, 0.0),
        RhoKind::Rho2(s) => (s, s),
        RhoKind::RhoR(s, t) => (s, t),
    };
    if !(0.0..=0.5).contains(&s) {
        return Err(Error::OutOfRange { name: "s", value: s });
    }
    if !(0.0..=s).contains(&t) {
        return Err(Error::OutOfRange { name: "t", value: t });
    }
    Ok(DensityOperator::from_raw(rho_r_matrix(s, t)))
}

/// `(s, t)` of a matrix of rotation-invariant form, and the distance to that form.
pub fn rho_r_fit(m: &CMatrix) -> (f64, f64, f64) {
    let s = 0.5 * (m[(1, 1)].re + m[(2, 2)].re);
    let t = 0.5 * (m[(1, 2)].im - m[(2, 1)].im);
    (s, t, frobenius(&(m - rho_r_matrix(s, t))))
}

/// Parameters of the two channel images of `ρ_R(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageParams {
    pub s_b: f64,
    pub t_b: f64,
    pub s_c: f64,
    pub t_c: f64,
}

fn image_s(b: f64, c: f64, s: f64) -> f64 {
    (1.0 - b) / (1.0 + 2.0 * b * c) * ((1.0 - c) / 3.0 + (1.0 + 2.0 * b) * c / (1.0 - b * c) * s)
}

fn image_t_factor(b: f64, c: f64) -> f64 {
    (1.0 - b) * c / (1.0 - b * c)
}

/// Closed-form image parameters of `ρ_R(s, t)` under both channels.
pub fn image_params(b: f64, c: f64, s: f64, t: f64) -> Result<ImageParams> {
    check_param("b", b)?;
    check_param("c", c)?;
    let a = b * c;
    if (a - 1.0).abs() < 1e-12 || (a + 0.5).abs() < 1e-12 {
        return Err(Error::OutOfRange { name: "bc", value: a });
    }
    if !(0.0..=0.5).contains(&s) {
        return Err(Error::OutOfRange { name: "s", value: s });
    }
    if t.abs() > s {
        return Err(Error::OutOfRange { name: "t", value: t });
    }
    Ok(ImageParams {
        s_b: image_s(b, c, s),
        t_b: image_t_factor(b, c) * t,
        s_c: image_s(c, b, s),
        t_c: image_t_factor(c, b) * t,
    })
}

/// Named curves of the `b >= 0, c <= 0` rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    /// `c = -2b`, edge of the degradable wedge.
    Line1,
    /// `c = -b/2`, edge of the antidegradable wedge.
    Line4,
    /// Concavity of `ΔS` first fails at the pure state `ρ_0(0)`.
    Dotted,
    /// The optimizer of `Q1(B)` jumps from `ρ_0` to `ρ_2`.
    DotDash,
    /// `Q1(B)` reaches zero, `c = -b/(1+b)`.
    Line3,
    /// Convexity of `ΔS` first fails at `ρ_0(0)`.
    NarrowDash,
    /// The minimizing `ρ_0` reaches `s = 1/2`.
    LongDash,
    /// `Q1(C)` reaches zero, `S(B(ρ_1)) = S(C(ρ_1))`.
    Curve2,
}

impl CurveKind {
    pub const ALL: [CurveKind; 8] = [
        CurveKind::Line1,
        CurveKind::Line4,
        CurveKind::Dotted,
        CurveKind::DotDash,
        CurveKind::Line3,
        CurveKind::NarrowDash,
        CurveKind::LongDash,
        CurveKind::Curve2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Line1 => "line1",
            CurveKind::Line4 => "line4",
            CurveKind::Dotted => "dotted",
            CurveKind::DotDash => "dotdash",
            CurveKind::Line3 => "line3",
            CurveKind::NarrowDash => "narrowdash",
            CurveKind::LongDash => "longdash",
            CurveKind::Curve2 => "curve2",
        }
    }

    /// Interval of `b` on which the curve is sought.
    pub fn domain(self) -> (f64, f64) {
        match self {
            CurveKind::Line1 | CurveKind::Dotted => (0.0, 0.25),
            CurveKind::Line4 | CurveKind::Line3 => (0.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn is_implicit(self) -> bool {
        matches!(self, CurveKind::DotDash | CurveKind::LongDash | CurveKind::Curve2)
    }
}

impl std::str::FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        CurveKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown curve kind {s}"))
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `s` at which `∂²ΔS(ρ_R)/∂t²` vanishes at `t = 0`.
pub fn t_curvature_root(b: f64, c: f64) -> f64 {
    (1.0 - b * c) * (b + c - 2.0 * b * c) / ((-3.0 * b * c) * (1.0 + 2.0 * b + 2.0 * c - 2.0 * b * c))
}

/// Residual of the stationarity condition of `ΔS(ρ_0(s))` in `s`, or `None`
/// where a logarithm argument is not positive.
pub fn stationarity_residual(b: f64, c: f64, s: f64) -> Option<f64> {
    let sb = image_s(b, c, s);
    let sc = image_s(c, b, s);
    let (lb, lc) = (-2.0 + 1.0 / sb, -2.0 + 1.0 / sc);
    if !(lb > 0.0 && lc > 0.0 && lb.is_finite() && lc.is_finite()) {
        return None;
    }
    Some((1.0 - b) * (1.0 + 2.0 * b) * c * lb.ln() - (1.0 - c) * (1.0 + 2.0 * c) * b * lc.ln())
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn rho1_entropy_term(b: f64, c: f64) -> f64 {
    let u = (1.0 + 2.0 * b) * (1.0 - c);
    let v = (1.0 - b) * (2.0 + c);
    u * (2.0 * u).ln() * if u > 0.0 { 1.0 } else { 0.0 } + xlogx(v)
}

/// Residual of `S(B(ρ_1)) = S(C(ρ_1))` up to a positive factor.
pub fn rho1_balance(b: f64, c: f64) -> f64 {
    rho1_entropy_term(b, c) - rho1_entropy_term(c, b)
}

fn implicit_residual(kind: CurveKind, b: f64, c: f64) -> Option<f64> {
    match kind {
        CurveKind::DotDash => {
            let s = t_curvature_root(b, c);
            if !(s > 0.0 && s < 0.5) {
                return None;
            }
            stationarity_residual(b, c, s)
        }
        CurveKind::LongDash => stationarity_residual(b, c, 0.5),
        CurveKind::Curve2 => Some(rho1_balance(b, c)),
        _ => None,
    }
}

/// Safeguarded secant on a sign-changing bracket.
fn solve_bracket(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let (mut flo, mut fhi) = (f(lo), f(hi));
    for _ in 0..200 {
        let mut x = hi - fhi * (hi - lo) / (fhi - flo);
        if !(x > lo.min(hi) && x < lo.max(hi)) || !x.is_finite() {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.abs() < 1e-13 || (hi - lo).abs() < 1e-15 {
            return x;
        }
        if (fx < 0.0) == (flo < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // Bisect when the secant stalls on one side.
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    0.5 * (lo + hi)
}

const SCAN_STEPS: usize = 400;

/// Every root of an implicit curve at fixed `b`, ascending in `c`.
pub fn implicit_roots(kind: CurveKind, b: f64) -> Result<Vec<f64>> {
    if !kind.is_implicit() {
        return Ok(vec![boundary_curve(kind, b)?]);
    }
    let (d0, d1) = kind.domain();
    if !(b > d0 && b <= d1) {
        return Err(Error::OutOfDomain { curve: kind.name(), b });
    }
    let lo = (-2.0 * b).max(-0.5);
    let hi = -0.5 * b;
    let f = |c: f64| implicit_residual(kind, b, c);
    let mut roots = Vec::new();
    let grid: Vec<(f64, Option<f64>)> = (0..=SCAN_STEPS)
        .map(|i| {
            let c = lo + (hi - lo) * i as f64 / SCAN_STEPS as f64;
            (c, f(c))
        })
        .collect();
    for w in grid.windows(2) {
        let ((c0, f0), (c1, f1)) = (w[0], w[1]);
        let (Some(f0), Some(f1)) = (f0, f1) else { continue };
        if f0 == 0.0 {
            roots.push(c0);
            continue;
        }
        if (f0 < 0.0) == (f1 < 0.0) {
            continue;
        }
        let g = |c: f64| f(c).unwrap_or(f64::NAN);
        let root = solve_bracket(g, c0, c1);
        let r = g(root);
        if r.is_finite() && r.abs() < 1e-10 {
            roots.push(root);
        }
    }
    if let Some((c_end, Some(f_end))) = grid.last().copied() {
        if f_end == 0.0 {
            roots.push(c_end);
        }
    }
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    if roots.is_empty() {
        return Err(Error::NoRoot { curve: kind.name(), b });
    }
    Ok(roots)
}

/// `c` on the given curve at `b`.
///
/// Implicit curves return the root with the largest `c`.
pub fn boundary_curve(kind: CurveKind, b: f64) -> Result<f64> {
    let (d0, d1) = kind.domain();
    let in_domain = match kind {
        CurveKind::NarrowDash => b > d0 && b <= d1,
        _ => b >= d0 && b <= d1,
    };
    if !in_domain || !b.is_finite() {
        return Err(Error::OutOfDomain { curve: kind.name(), b });
    }
    Ok(match kind {
        CurveKind::Line1 => -2.0 * b,
        CurveKind::Line4 => -0.5 * b,
        CurveKind::Dotted => -b / (1.0 - 2.0 * b),
        CurveKind::Line3 => -b / (1.0 + b),
        CurveKind::NarrowDash => {
            let disc = 1.0 + 4.0 * (b + 2.0 * b * b - 2.0 * b.powi(3) + b.powi(4));
            (1.0 + 2.0 * b - 2.0 * b * b - disc.sqrt()) / (4.0 * b)
        }
        _ => *implicit_roots(kind, b)?.last().expect("nonempty"),
    })
}

/// Character of an optimizing input state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OptClass {
    Rho0,
    Rho1,
    Rho2,
    Other,
}

impl OptClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OptClass::Rho0 => "Rho0",
            OptClass::Rho1 => "Rho1",
            OptClass::Rho2 => "Rho2",
            OptClass::Other => "Other",
        }
    }
}

impl std::fmt::Display for OptClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OptClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [OptClass::Rho0, OptClass::Rho1, OptClass::Rho2, OptClass::Other]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown optimizer class {s}"))
    }
}

fn distance_to_rho0(m: &CMatrix) -> f64 {
    let s = (0.5 * (m[(1, 1)].re + m[(2, 2)].re)).clamp(0.0, 0.5);
    frobenius(&(m - rho_r_matrix(s, 0.0)))
}

fn distance_to_rho2(m: &CMatrix) -> f64 {
    // Least squares for s along ρ_2(s) = E0 + s E1.
    let e1 = rho_r_matrix(1.0, 1.0) - rho_r_matrix(0.0, 0.0);
    let resid = m - rho_r_matrix(0.0, 0.0);
    let proj: f64 = e1.iter().zip(resid.iter()).map(|(a, b)| (a.conj() * b).re).sum();
    let s = (proj / 8.0).clamp(0.0, 0.5);
    frobenius(&(m - rho_r_matrix(s, s)))
}

/// Matches a state to `ρ_1`, `ρ_0` or `ρ_2` up to the symmetry group and
/// complex conjugation, in that priority order.
pub fn classify_optimizer(rho: &CMatrix, tol: f64) -> OptClass {
    if rho.nrows() != 3 {
        return OptClass::Other;
    }
    let mut orbit = Vec::with_capacity(12);
    for g in group() {
        let img = &g * rho * g.adjoint();
        orbit.push(img.map(|z| z.conj()));
        orbit.push(img);
    }
    let best = |dist: fn(&CMatrix) -> f64| orbit.iter().map(dist).fold(f64::INFINITY, f64::min);
    if best(|m| frobenius(&(m - rho_r_matrix(0.5, 0.0)))) <= tol {
        return OptClass::Rho1;
    }
    if best(distance_to_rho0) <= tol {
        return OptClass::Rho0;
    }
    if best(distance_to_rho2) <= tol {
        return OptClass::Rho2;
    }
    OptClass::Other
}

/// Rectangular `(b, c)` lattice, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub b_range: (f64, f64),
    pub c_range: (f64, f64),
    pub nb: usize,
    pub nc: usize,
}

impl PhaseGrid {
    /// The full `[-1/2, 1]²` square.
    pub fn square(nb: usize, nc: usize) -> Self {
        PhaseGrid { b_range: (-0.5, 1.0), c_range: (-0.5, 1.0), nb, nc }
    }

    /// The `b >= 0, c <= 0` rectangle holding the undegradable wedge.
    pub fn wedge(nb: usize, nc: usize) -> Self {
        PhaseGrid { b_range: (0.0, 1.0), c_range: (-0.5, 0.0), nb, nc }
    }

    fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
        if n <= 1 {
            return range.0;
        }
        let (k, m) = (i as f64, (n - 1) as f64);
        (range.0 * (m - k) + range.1 * k) / m
    }

    pub fn b(&self, i: usize) -> f64 {
        Self::axis(self.b_range, self.nb, i)
    }

    pub fn c(&self, j: usize) -> f64 {
        Self::axis(self.c_range, self.nc, j)
    }

    pub fn len(&self) -> usize {
        self.nb * self.nc
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nb {
            for j in 0..self.nc {
                out.push((self.b(i), self.c(j)));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("b", self.b_range), ("c", self.c_range)] {
            check_param(name, lo)?;
            check_param(name, hi)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub tol: f64,
    pub capacities: bool,
    pub concavity: bool,
    pub multistart: MultistartOptions,
    pub probe_samples: usize,
    pub class_tol: f64,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: DEFAULT_TOL,
            capacities: false,
            concavity: false,
            multistart: MultistartOptions { parallel: false, ..MultistartOptions::default() },
            probe_samples: 200,
            class_tol: 1e-4,
            seed: 0,
        }
    }
}

/// One scanned `(b, c)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub b: f64,
    pub c: f64,
    pub verdict: Tag,
    pub q1_direct: Option<f64>,
    pub q1_complement: Option<f64>,
    pub opt_class_direct: Option<OptClass>,
    pub opt_class_complement: Option<OptClass>,
    pub concavity: Option<Curvature>,
    pub converged: bool,
}

/// Per-point stream seed derived from the coordinates, not the grid index.
pub fn point_seed(seed: u64, b: f64, c: f64) -> u64 {
    mix_seed(mix_seed(seed, b.to_bits()), c.to_bits())
}

/// Evaluates one phase-diagram point.
pub fn phase_point(b: f64, c: f64, opts: &ScanOptions) -> Result<PhasePoint> {
    let q = SymmetricQutrit::new(b, c)?;
    let verdict = q.verdict(opts.tol).tag;
    let mut point = PhasePoint {
        b,
        c,
        verdict,
        q1_direct: None,
        q1_complement: None,
        opt_class_direct: None,
        opt_class_complement: None,
        concavity: None,
        converged: true,
    };
    let seed = point_seed(opts.seed, b, c);
    if opts.capacities {
        let obj = CoherentInfo::new(q.iso());
        let ms = MultistartOptions { seed, ..opts.multistart.clone() };
        let lift = |m: &CMatrix| match q.embedding() {
            Some(e) => e * m * e.adjoint(),
            None => m.clone(),
        };
        let rd = optimize(&obj, Side::Direct, &ms);
        let rc = optimize(&obj, Side::Complementary, &ms);
        point.q1_direct = Some(rd.capacity());
        point.q1_complement = Some(rc.capacity());
        point.opt_class_direct = Some(classify_optimizer(&lift(rd.argopt.matrix()), opts.class_tol));
        point.opt_class_complement = Some(classify_optimizer(&lift(rc.argopt.matrix()), opts.class_tol));
        point.converged = rd.converged && rc.converged;
    }
    if opts.concavity {
        let probe = ProbeOptions { samples: opts.probe_samples, seed, ..ProbeOptions::default() };
        point.concavity = Some(hessian_probe_with(q.iso(), &probe).verdict);
    }
    Ok(point)
}

/// Evaluates every grid point in parallel; output sorted by `(b, c)`.
pub fn phase_scan(grid: &PhaseGrid, opts: &ScanOptions) -> Result<Vec<PhasePoint>> {
    grid.validate()?;
    let mut out: Vec<PhasePoint> = grid
        .points()
        .par_iter()
        .map(|&(b, c)| phase_point(b, c, opts))
        .collect::<Result<_>>()?;
    out.sort_by(|x, y| x.b.total_cmp(&y.b).then(x.c.total_cmp(&y.c)));
    Ok(out)
}

/// Wedge rule: `B` degradable iff `b/c ∈ [-1/2, 1]`, antidegradable iff `c/b ∈ [-1/2, 1]`.
pub fn wedge_tag(b: f64, c: f64) -> Tag {
    let ratio_ok = |num: f64, den: f64| {
        if den == 0.0 {
            num == 0.0
        } else {
            let r = num / den;
            (-0.5..=1.0).contains(&r)
        }
    };
    match (ratio_ok(b, c), ratio_ok(c, b)) {
        (true, true) => Tag::Both,
        (true, false) => Tag::Degradable,
        (false, true) => Tag::Antidegradable,
        (false, false) => Tag::Undegradable,
    }
}
