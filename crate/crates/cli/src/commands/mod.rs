pub mod anova;
pub mod fit;
pub mod gen;
pub mod power;
pub mod route;
pub mod sweep;
