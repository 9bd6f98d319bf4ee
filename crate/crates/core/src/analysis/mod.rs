//! Exhaustive and numeric analysis of optimal question sets.

pub mod dyadic;
pub mod hitter;
pub mod lower_bound;
pub mod numeric;

pub use dyadic::{enumerate_dyadic, hard_distribution, mrd, splitters, tail, DyadicEnumeration, MrdReport, SplitterSet};
pub use hitter::{
    hitter_lower_bound, is_dyadic_hitter, min_dyadic_hitter, rho, sample_hitter, HitterReport, RhoReport,
    SampledHitter,
};
pub use lower_bound::{prolixity_lb_check, FirstQuestion, LbCheckReport};
pub use numeric::{exponent_calculus, gt_bound, ExponentCalculus, GtBound};
