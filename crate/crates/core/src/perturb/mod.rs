//! Expansion data about `λ = 0` and intermediate points `λ = α`.

mod exact;
mod numeric;

pub use exact::{exact_harmonic_series, RationalSeries};
pub use numeric::{
    eigenvalue, fd_derivative_oracle, numeric_series, rayleigh_first_order, SeriesData, SeriesMeta, SeriesPoint,
};
