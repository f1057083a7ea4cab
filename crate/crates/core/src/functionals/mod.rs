//! Densities, submeasure sequences and the level sets they induce.

pub mod crossing;
pub mod density;
pub mod levelset;
pub mod profile;

pub use density::{uniform_eval, upper_density, DensityCertificate, DensityResult};
pub use profile::{profile, Bounds, SetProfile};
pub mod submeasure;

pub use levelset::{level_set, limsup_bounds, small_delta, LevelSet, SmallDelta};
pub use submeasure::{alpha_flat_check, exh_tail, smoothness_check, Kernel, Submeasure};
