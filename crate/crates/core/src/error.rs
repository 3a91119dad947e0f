// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid preference: {0}")]
    InvalidPreference(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: {required} rule evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("tabulated rule has no entry for profile {0}")]
    MissingProfile(String),
    #[error("common denominator of rule values overflows 64 bits")]
    DenominatorOverflow,
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
