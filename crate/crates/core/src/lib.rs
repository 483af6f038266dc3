//! Exact and certified arithmetic for studying the nearest-integer iterates
//! of powers of Pisot numbers.
//!
//! [`bigpoly`] handles integer polynomials and the named families,
//! [`numfield`] does arithmetic in `Z[θ]` with certified rounding,
//! [`transform`] builds the iterate tables, [`seqlab`] looks for patterns in
//! them and [`limits`] solves the logarithmic equations for limit points.
//! [`cli`] and [`report`] wrap all of it in a command line tool that writes
//! JSON Lines.

pub mod bigpoly;
pub mod catalog;
pub mod cli;
pub mod interval;
pub mod numfield;
pub mod report;
pub mod transform;
pub mod seqlab;
pub mod limits;
