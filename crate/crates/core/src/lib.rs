pub mod geometry;
pub mod groupoid;
pub mod podles;
pub mod polarization;
pub mod special;
