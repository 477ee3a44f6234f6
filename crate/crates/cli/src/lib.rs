//! Experiment harness and command-line front end for the `omaslab` core:
//! configuration ingestion, Monte Carlo orchestration over parallel trials,
//! bound-vs-empirical comparison, and persistence of results with
//! reproducibility manifests.

pub mod cli;
pub mod compare;
pub mod experiment;
pub mod graphon_spec;
pub mod output;
