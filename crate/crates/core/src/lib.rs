pub mod arith;
pub mod hc;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod singular;
pub mod text;
pub mod uea;
pub mod vacuum;
pub mod wnum;
pub mod zhu;
