//! Monic Krawtchouk polynomials, their Christoffel transform by `u²`, the
//! norms of the transformed family and the QR step on the Jacobi matrix.

mod christoffel;
mod hypergeometric;
mod krawtchouk;
mod norms;
mod orthonormal;
mod polynomial;
mod qr;
pub mod table1;

pub use christoffel::{
    appendix_ratio, appendix_ratios, christoffel_coefficients, christoffel_coefficients_f64, christoffel_transform, symplectic_table,
    ChristoffelCoefficients,
};
pub use hypergeometric::{hypergeometric_eval, krawtchouk_hypergeometric};
pub use krawtchouk::{
    alpha_tilde, alpha_tilde_f64, beta_tilde, beta_tilde_f64, krawtchouk_norm, krawtchouk_orthogonality_check,
    krawtchouk_table, lattice, lattice_point, lattice_weight, ln_krawtchouk_norm, ln_weight, monic_krawtchouk,
    second_moment,
};
pub use norms::{beta_from_rec4, direct_norm, norm_sequence, norm_sequence_f64, FloatNorms, NormSequence};
pub use orthonormal::{orthonormalize, OrthonormalPolynomial};
pub use polynomial::MonicPolynomial;
pub use qr::{
    closed_form_a_hat2, continued_fraction_r, continued_fraction_r_exact, krawtchouk_jacobi, monic_ttr, qr_factor,
    qr_step, qr_step_squared_exact, r_dir2, ttr_from_polynomials, JacobiCoefficients, JacobiFlavor, QRState,
    SquaredQR,
};
