pub mod jets;
pub mod traces;
pub mod interior;
pub mod milestones;
pub mod suite;
