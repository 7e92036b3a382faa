//! Finite Blaschke products on the unit disk and the integral functionals
//! that measure how fast their derivatives grow near the circle.
//!
//! ```
//! use blaschke::{BlaschkeProduct, QuadratureConfig, ZeroList};
//! use num_complex::Complex64;
//!
//! let zeros = ZeroList::from_points([Complex64::new(0.0, 0.0)]).unwrap();
//! let b = BlaschkeProduct::new(zeros).unwrap();
//! assert_eq!(b.evaluate(Complex64::new(0.25, 0.0)), Complex64::new(-0.25, 0.0));
//! let h = blaschke::hp_norm(&b, 0.75, &QuadratureConfig::default()).unwrap();
//! assert!((h - 1.0).abs() < 1e-12);
//! ```

pub mod cone;
pub mod disk;
pub mod dyadic;
pub mod error;
pub mod lab;
pub mod norms;
mod poly;
pub mod product;
pub mod quad;
pub mod zeros;

pub use cone::{
    box_kernel, cone_count_check, cone_function, cone_norm, in_stolz, level_arcs, Arc, BoundaryArcSet, ConeProfile,
    StolzAngle,
};
pub use disk::{canonical_angle, mobius_shift, pseudo_distance, BoundaryPoint, DiskPoint};
pub use dyadic::{
    build_tree, corollary_f_sum, epsilon_family, maximal_families, protas_dyadic_sum, sector_density,
    separation_constant, verbitskii_profile, DyadicSector, DyadicTree, MaximalFamily,
};
pub use error::{Error, Result};
pub use lab::{
    functional_report, generate, run_sweep, sweep_exponent, theorem1_ratios, FamilySpec, Functional, FunctionalReport,
    ReportParams, SweepReport,
};
pub use norms::{
    besov_norm, carleson_integral, hp_norm, hp_norm_detail, integral_mean, mixed_besov_norm, sublevel_enclosure,
    sublevel_integral, weak_hp_quasinorm, HpNorm, NormReport, SublevelEnclosure,
};
pub use product::{frostman_shift, make_product, BlaschkeProduct};
pub use quad::QuadratureConfig;
pub use zeros::{Zero, ZeroFile, ZeroList, ZeroRecord};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/products.md")]
    mod products {}
    #[doc = include_str!("../../../book/src/functionals.md")]
    mod functionals {}
    #[doc = include_str!("../../../book/src/sublevel.md")]
    mod sublevel {}
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/dyadic.md")]
    mod dyadic {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
