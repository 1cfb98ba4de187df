//! Exact computations for orbifold string topology of global quotients by
//! finite groups.
//!
//! - [`group`]: finite groups, G-sets, conjugacy classes.
//! - [`cocycle`]: phases, 2-cocycles, discrete torsion.
//! - [`cyclo`]: cyclotomic field arithmetic.
//! - [`sector`]: sector products, orbifold string rings, twisted centers, Morita checks.
//! - [`chord`] and [`cactus`]: marked chord diagrams, their operad structure and cacti.
//! - [`gchord`]: G-decorated chord diagrams and holonomy.
//! - [`bv`]: graded-commutative presentations and a BV axiom checker.

#![allow(clippy::needless_range_loop)]

pub mod bv;
pub mod cactus;
pub mod catalog;
pub mod chord;
pub mod cocycle;
pub mod cyclo;
pub mod error;
pub mod gchord;
pub mod group;
pub mod linalg;
pub mod sector;

pub use bv::{lens_ring, sphere_quotient_ring, BvData, BvReport, Delta, GradedPresentation, Polynomial, WindowAlgebra};
pub use cactus::Cactus;
pub use chord::{compose, ChordDiagram, MdClass};
pub use cocycle::{coboundary, discrete_torsion, is_two_cocycle, restrict_to_centralizer, Phase, TorsionCocycle, TwoCocycle};
pub use cyclo::CycloNumber;
pub use error::{BvError, ChordError, CocycleError, GChordError, GroupError, SectorError};
pub use gchord::{enumerate_gmd, fiber_report, g_compose, GChordDiagram, GmdClass};
pub use group::{bun_holonomy_action, conjugacy_classes, ConjugacyData, Element, FiniteGroup, GSet, IDENTITY};
pub use sector::{dw_frobenius, morita_compare, orbifold_string_ring, sector_product, twisted_center, MoritaReport, SectorRing};
