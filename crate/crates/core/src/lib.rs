pub mod error;
pub mod form;
pub mod matrix;
pub mod isometry;
pub mod json;
pub mod orbit;
pub mod poly;
pub mod exterior;
pub mod topology;
pub mod verify;
