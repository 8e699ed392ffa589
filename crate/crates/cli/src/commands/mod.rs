pub mod advect;
pub mod lb_table;
pub mod project_ic;
pub mod stability;
pub mod vp;
