//! Exact computations with wide and thick subcategories over the integers
//! and over finite spectra.
//!
//! * [`spectra`]: spectrum models, thick supports, Krull-Schmidt decomposition.
//! * [`zmodules`]: finitely generated abelian groups, Hom, Ext, splitting.
//! * [`complexes`]: perfect complexes, homology, cones, truncations.
//! * [`ktheory`]: Grothendieck-group classes relative to a support.
//! * [`hovey`]: membership in the subcategories attached to a support.
//! * [`verify`]: seeded property suites behind the `verify` subcommand.

pub mod cli;
pub mod complexes;
pub mod error;
pub mod formats;
pub mod hovey;
pub mod ktheory;
pub mod matrix;
pub mod random;
pub mod snf;
pub mod spectra;
pub mod verify;
pub mod zmodules;

pub use complexes::{ChainMap, PerfectComplex};
pub use error::{Error, Result};
pub use hovey::{ThickSubcat, WideSubcat};
pub use ktheory::K0Class;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};
pub use spectra::{FinPoset, Point, PointSet, Prime, SpectrumModel, SupportDecomposition, ThickSupport};
pub use zmodules::FgAbGroup;
