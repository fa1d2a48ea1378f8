pub mod acceptance;
pub mod cache;
pub mod commands;
pub mod curvefile;
pub mod report;
