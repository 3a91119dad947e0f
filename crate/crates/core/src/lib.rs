// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact laboratory for randomized social decision schemes.

pub mod analysis;
pub mod axioms;
pub mod descriptor;
pub mod enumerate;
pub mod error;
pub mod kernel;
pub mod lottery;
pub mod metrics;
pub mod model;
pub mod rational;
pub mod report;
pub mod rules;
pub mod transforms;

pub use error::{Error, Result};
pub use lottery::{lottery_from_scores, Lottery};
pub use model::{AlternativeId, Preference, Profile};
pub use rational::Rational;
pub use rules::SdsSpec;
