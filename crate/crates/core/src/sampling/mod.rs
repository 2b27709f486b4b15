//! Second-point densities, radial step lengths and direction sampling.

pub mod band;
pub mod normal;
pub mod optimal;
pub mod radial;
pub mod sphere;

pub use band::{Band, BandFamily, SideDensity};
pub use normal::{normal_cdf, normal_pdf};
pub use optimal::{TabulatedDensity, OPTIMAL_GRID_POINTS};
pub use radial::RadialDensity;
pub use sphere::sphere_sample;
