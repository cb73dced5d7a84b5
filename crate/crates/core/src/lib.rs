pub mod cartan;
pub mod cli;
pub mod exec;
pub mod groups;
pub mod linalg;
pub mod nichols;
pub mod scalars;
pub mod skeleton;
pub mod ydmod;
