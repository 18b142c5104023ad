//! Set systems on `Q_n`: representation, closure, boolean algebra, exact
//! biased measure, occupancy profiles and correlation defects.

mod family;
mod format;
mod measure;

pub use family::{Family, Point, N_MAX};
pub use format::{parse_upset, read_upset_file, write_upset, write_upset_file};
pub use measure::{
    combine, hk_defect, measure, occupancy, two_set_exactly_one, OccupancyProfile, SetOp,
    TripleHistograms,
};
