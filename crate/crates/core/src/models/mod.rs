pub mod suppes;
pub mod zhl;
