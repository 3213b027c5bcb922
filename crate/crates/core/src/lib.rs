//! Chevalley–Eilenberg cohomology of nilpotent Lie algebras over the
//! rationals, with the Nijenhuis–Richardson superbracket on cochains.

pub mod cecomplex;
pub mod cli;
pub mod exactla;
pub mod homologic;
pub mod homvf;
pub mod liealg;
pub mod rootsys;
pub mod superbracket;
