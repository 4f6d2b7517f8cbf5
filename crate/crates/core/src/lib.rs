//! Exact and arbitrary-precision evaluation of the Andrews series for Ramanujan's
//! third-order mock theta function
//!
//! ```text
//! f(q) = 1 + Σ α(n) qⁿ = 1 + Σ q^{n²} / ((1+q)²(1+q²)²⋯(1+qⁿ)²)
//! ```
//!
//! together with the arithmetic that feeds it: Dedekind sums, the eta and theta
//! multiplier systems and the weight ½ multiplier ψ on Γ₀(2), generalized
//! Kloosterman sums, quadratic Gauss sums, the character sums F_c(n), the
//! Heegner-point form of the truncated series, and the prime construction
//! showing that the series does not converge absolutely.
//!
//! Every sum of roots of unity is accumulated exactly (see
//! [`numerics::RootOfUnityAccumulator`]) and only rounded once, at the final
//! evaluation. Analytic quantities use MPFR-backed [`rug::Float`] and
//! [`rug::Complex`] values with explicit precision.
//!
//! Module map:
//!
//! - [`numerics`]: precision policy, `e(x)`, root-of-unity accumulators, half-integer Bessel functions
//! - [`arith`]: gcd/inverse, primality, factorization, square roots modulo composites
//! - [`qseries`]: exact α(n) and p(n), plus a rank-statistic oracle
//! - [`modular`]: Kronecker symbols, Dedekind sums, multiplier systems, Γ₀(N) enumeration
//! - [`kloosterman`]: S(m,n,c,ν), A_c(n) two ways, F_c(n), Gauss sums, Weil-type bounds
//! - [`series`]: truncated Andrews and Rademacher series, residual reports, decay fits
//! - [`heegner`]: forms `[12a, b, c]` of discriminant `1 − 24n` and the Heegner sum
//! - [`divergence`]: the prime set S and absolute partial sums
//! - [`spectral`]: the Kuznetsov test function and its Bessel transforms
//! - [`suites`]: grid checks of every identity and bound against an independent evaluation

pub mod arith;
pub mod divergence;
pub mod error;
pub mod heegner;
pub mod kloosterman;
pub mod modular;
pub mod numerics;
pub mod qseries;
pub mod series;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
