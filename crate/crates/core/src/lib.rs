//! Pure-to-product-of-pure (pcubed) quantum channels.
//!
//! A pcubed isometry sends each ket of a spanning family `{|α_j>}` to a product
//! `|β_j> ⊗ |γ_j>`, so its Gram matrices obey `A = B * C` entrywise. The crate
//! builds such isometries from Gram data, classifies degradability through the
//! entrywise quotient `B /* C`, computes one-shot quantum capacities by
//! maximizing the coherent information, and maps out the phase diagram of the
//! symmetric qutrit family.
//!
//! ```
//! use pcubed::prelude::*;
//!
//! let q = SymmetricQutrit::new(0.2, 0.5)?;
//! let verdict = classify(&q.iso().gram_b(), &q.iso().gram_c(), DEFAULT_TOL);
//! assert_eq!(verdict.tag, Tag::Degradable);
//! # Ok::<(), pcubed::Error>(())
//! ```

pub mod capacity;
pub mod cli;
pub mod degrade;
pub mod error;
pub mod gallery;
pub mod isometry;
pub mod matcore;
pub mod qutritlab;
pub mod schema;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::capacity::{
        coherent_information, entropy, hessian_probe, one_shot_capacity, Curvature,
        MultistartOptions, OptimizationReport,
    };
    pub use crate::degrade::{
        classify, conjugate_analysis, degrading_isometry, twisted_diagonal, verify_degrading,
        Tag, Verdict,
    };
    pub use crate::error::{Error, Result};
    pub use crate::gallery::{
        damping_limit_family, erasure_family, naimark_hadamard, qubit_channel, ErasureParams, QubitParams,
    };
    pub use crate::isometry::{DensityOperator, PcubedIsometry, Side, Superoperator};
    pub use crate::matcore::{gram_to_kets, CMatrix, GramMatrix, KetFamily, DEFAULT_TOL};
    pub use crate::qutritlab::{boundary_curve, CurveKind, RhoKind, SymmetricQutrit};
}
