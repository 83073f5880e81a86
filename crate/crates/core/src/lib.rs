#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod text;
pub mod corpus;
pub mod features;
pub mod learn;
pub mod eval;
pub mod synth;
pub mod semsim;
pub mod cluster;

mod math;
mod par;
pub mod rng;
