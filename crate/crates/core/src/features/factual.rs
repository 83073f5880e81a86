use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Vocabulary;
use crate::corpus::MicroTask;

const NUMERIC: [&str; 5] = ["payment", "time_to_rate", "time_to_finish", "positions", "payment_per_minute"];

#[derive(Debug, Clone, PartialEq)]
pub struct FactualVector {
    pub values: Vec<f64>,
    /// `time_to_finish` was 0, so `payment_per_minute` was set to 0.
    pub zero_duration: bool,
}

pub fn factual_columns(employers: &Vocabulary, countries: &Vocabulary) -> Vec<String> {
    let mut cols: Vec<String> = NUMERIC.iter().map(|s| s.to_string()).collect();
    cols.extend(employers.terms().iter().map(|e| format!("employer={e}")));
    cols.push("employer_other".into());
    cols.extend(countries.terms().iter().map(|c| format!("country={c}")));
    cols.push("country_other".into());
    cols
}

/// Numeric task facts, employer one-hot and country multi-hot, each with an
/// "other" column for values not seen in training. An empty country list
/// (available everywhere) leaves every country column at 0.
pub fn factual_features(task: &MicroTask, employers: &Vocabulary, countries: &Vocabulary) -> FactualVector {
    let zero_duration = task.time_to_finish == 0.0;
    let per_minute = if zero_duration { 0.0 } else { task.payment / task.time_to_finish };
    let mut values = Vec::with_capacity(NUMERIC.len() + employers.len() + countries.len() + 2);
    values.extend([task.payment, task.time_to_rate, task.time_to_finish, task.positions as f64, per_minute]);

    let mut employer = alloc::vec![0.0; employers.len() + 1];
    match employers.get(&task.employer) {
        Some(i) => employer[i] = 1.0,
        None => employer[employers.len()] = 1.0,
    }
    values.extend(employer);

    let mut country = alloc::vec![0.0; countries.len() + 1];
    for c in &task.countries {
        match countries.get(c) {
            Some(i) => country[i] = 1.0,
            None => country[countries.len()] = 1.0,
        }
    }
    values.extend(country);
    FactualVector { values, zero_duration }
}
