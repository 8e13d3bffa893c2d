//! Exact-arithmetic invariants of hyperpolygon spaces and their core components.
//!
//! The crate computes ring presentations, Hilbert functions, Betti numbers,
//! Euler characteristics, intersection forms and core-incidence geometry for
//! hyperpolygon spaces X(α), and numerically checks the moment-map /
//! stability / polygon-pair correspondence on the ADHM side.
//!
//! Symbolic computations are exact over the rationals; the polynomial and
//! linear-algebra layers are generic over the coefficient scalar (see
//! [`scalar::Scalar`]), with the concrete rational instantiations aliased at
//! the crate root. Floating-point work lives in [`momentmap`] and is generic
//! over the real scalar, defaulting to `f64`.

pub mod claims;
pub mod combinat;
pub mod coregeom;
pub mod error;
pub mod ideal;
pub mod intersection;
pub mod linalg;
pub mod momentmap;
pub mod poly;
pub mod presentations;
pub mod scalar;
pub mod selftest;

/// Exact rational scalar used by all symbolic computations.
pub type Rat = num_rational::BigRational;
/// Sparse multivariate polynomial with rational coefficients.
pub type QPoly = poly::Polynomial<Rat>;
/// Default floating-point scalar for the ADHM-side numerics.
pub type Real = f64;

pub use combinat::{Alpha, Subset};
pub use error::Error;
pub use ideal::{GradedIdeal, HilbertTable};
pub use poly::{Monomial, PolyRing, Polynomial};
pub use presentations::{Presentation, Provenance};

pub fn parse_rational(s: &str) -> Result<Rat, Error> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Error::ParseError(s.to_string()))
}
