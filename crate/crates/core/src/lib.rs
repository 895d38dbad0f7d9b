pub mod algebra;
pub mod qseries;
pub mod theta;
pub mod modforms;
pub mod genus;
pub mod kvirt;
pub mod anomaly;
pub mod cli;
