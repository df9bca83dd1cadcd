pub mod chi2;
pub mod order;
