//! Executable case studies, each exposing the [`Model`](crate::model::Model)
//! contract plus study-specific simulators and baselines.

pub mod commute;
pub mod conjugate;
pub mod nypopu;
pub mod sailing;
