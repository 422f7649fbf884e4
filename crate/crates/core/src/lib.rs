//! Arithmetic dynamics of families of Drinfeld F_q[t]-modules over
//! K = F_{q^s}(t), computed exactly.

pub mod capacity;
pub mod cli;
pub mod family;
pub mod field;
pub mod heights;
pub mod ore;
pub mod paramsearch;
pub mod parse;
