//! Multi-label classification of human-centric issues in mobile-app feedback.
//!
//! This crate ingests labeled app reviews and GitHub issue comments, runs a
//! fixed text-preprocessing pipeline, extracts TF-IDF / embedding features,
//! trains binary base learners (logistic regression, linear SVM, random
//! forest, gradient-boosted trees) under One-vs-Rest or Classifier-Chain
//! strategies, and evaluates them with multi-label metrics (micro P/R/F1,
//! exact-match accuracy, Hamming loss).
//!
//! Everything is deterministic: all randomness flows from explicit 64-bit
//! seeds through the [`rng`] module, so identical inputs and seeds reproduce
//! identical models, predictions, and reports bit for bit. Data-parallel
//! sections use rayon when the `parallel` feature (on by default) is enabled;
//! with the feature off the same code runs sequentially and produces the same
//! results.

pub mod corpus;
pub mod error;
pub mod features;
pub mod fsutil;
pub mod github;
pub mod grid;
pub mod linear;
pub mod metrics;
pub mod multilabel;
pub mod par;
pub mod pipeline;
pub mod rng;
pub mod synth;
pub mod textprep;
pub mod trees;

pub use error::{Error, Result};
