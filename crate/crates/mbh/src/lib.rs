//! Stable separation-of-variables machinery for the modified biharmonic
//! equation `(lap^2 - lambda^2 lap) u = 0` on the interior or exterior of a
//! disk, together with the multipole/local expansions and translation
//! operators needed for fast summation with the same radial functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`bessel`] — modified Bessel functions `I_n`, `K_n`, derivatives,
//!   digamma values.
//! * [`basis`] — the radial basis pairs per Fourier mode, including the
//!   stabilized functions `P_n` (regular) and `Q_n` (decaying), and the 2x2
//!   mode matrices.
//! * [`smallmat`] — 2x2 solves with complete pivoting, singular values, and
//!   the column-normalized condition number.
//! * [`greens`] — the free-space Green's function, its derivatives, and the
//!   synthetic point-source fields used by the accuracy experiments.
//! * [`disk`] — the Dirichlet solver on a disk: boundary Fourier analysis,
//!   per-mode solves, field evaluation, error measures.
//! * [`expansions`] — multipole and local expansions (Laplace, modified
//!   Helmholtz, and the combined modified-biharmonic family) with their
//!   translation operators.

pub mod basis;
pub mod bessel;
pub mod greens;
pub mod smallmat;
pub mod scaled;

mod dd;

pub use basis::RadialTable;

pub use basis::{mode_cond_normalized, mode_matrix, p_eval, q_eval, ModeMatrix, RadialBasis, Side};
pub use greens::{greens_radial, split_field, synth_field, FieldSample, PointSource};
pub use smallmat::{cond2_normalized, solve2, svd2, TwoByTwo};
pub use bessel::{
    digamma_nonneg_int, mod_bessel_derivs, mod_bessel_i_seq, mod_bessel_k_seq, BesselSeq,
    EULER_GAMMA,
};
