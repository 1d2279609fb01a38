//! Combinatorial invariants of Legendrian knots given as plat-position fronts.
//!
//! The crate computes the Chekanov DGA over Z/2, its graded augmentations,
//! graded normal rulings and the ruling polynomial, and runs the
//! augmentation-to-ruling extension algorithm to check that each ruling `R`
//! receives exactly `2^((theta(R) + chi*)/2)` augmentations.
//!
//! ```
//! use legendrian::prelude::*;
//!
//! let d: PlatDiagram = "plat 2 : 2 2 2".parse().unwrap();
//! let m = maslov(&d, Orientation::Forward);
//! let g = build_dga(&d, &m).unwrap();
//! assert_eq!(enumerate_augmentations(&g, 0).unwrap().len(), 5);
//! assert_eq!(ruling_polynomial(&d, &m, 0).unwrap().to_string(), "z^-1 + 2z");
//! ```

pub mod augment;
pub mod correspond;
pub mod dga;
pub mod diagram;
pub mod error;
pub mod halfpow;
pub mod harness;
pub mod report;
pub mod ruling;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::augment::{
        aug_number, enumerate_augmentations, enumerate_augmentations_bounded, is_augmentation,
        Augmentation,
    };
    pub use crate::correspond::{
        fibers, ruling_from_augmentation, special_disk_parity, verify_correspondence,
        ConfigLabel, FiberTable, Segment,
    };
    pub use crate::dga::{
        build_dga, build_dga_with_budget, chi_star, degree_distribution, verify_d_squared, Dga,
        GenId,
    };
    pub use crate::diagram::{
        crossing_grading, maslov, parse_plat, slice_pairing_sweep, Grading, MaslovData,
        Orientation, PairingState, PlatDiagram,
    };
    pub use crate::error::{Error, Result};
    pub use crate::halfpow::HalfPow;
    pub use crate::ruling::{
        enumerate_rulings, interlacing_trace, ruling_polynomial, theta_multiset, Ruling,
        ThetaMultiset,
    };
}
