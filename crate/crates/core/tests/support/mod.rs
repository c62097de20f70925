//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

pub mod dense_lp;
pub mod enumerate;
pub mod nets;
