//! Executable finite-state selection over binary sequences: DFA selectors,
//! exact Bernoulli measures of word sets, the Markov chain a selector induces,
//! exhaustive verification of the selection lemmas behind Agafonov's theorem,
//! and empirical estimators for the classical normality notions.

pub mod automata;
pub mod error;
pub mod generators;
pub mod markov;
pub mod normality;
pub mod measure;
pub mod ratio;
pub mod rng;
pub mod strategies;
pub mod verify;
pub mod words;

pub use automata::{Dfa, SelectionResult, StateId};
pub use error::{Error, Result};
pub use measure::{BernoulliParam, Measure, WordSet};
pub use ratio::Rational;
pub use words::Word;
