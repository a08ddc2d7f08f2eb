pub mod cli;
pub mod duality;
pub mod exactnum;
pub mod flows;
pub mod multipliers;
pub mod products;
pub mod supernatural;
pub mod trajectories;
