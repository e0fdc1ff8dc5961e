pub mod preprocess;
pub mod report;
pub mod sample;
pub mod validate;
