use std::process::ExitCode;

use contact_valuations::report::ExperimentConfig;
use contact_valuations::suite::{check_all, CRITERIA};

fn compact(v: &serde_json::Value) -> String {
    let text = v.to_string();
    if text.len() > 120 {
        format!("{}...", &text[..117])
    } else {
        text
    }
}

fn main() -> ExitCode {
    let doc = match check_all(&ExperimentConfig::default()) {
        Ok(doc) => doc,
        Err(e) => {
            println!("acceptance suite could not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failures = 0;
    for (i, name) in CRITERIA.iter().enumerate() {
        let Some(record) = doc.records.iter().find(|r| r.name == *name) else {
            println!("criterion {:>2} {name:<26} FAIL missing", i + 1);
            failures += 1;
            continue;
        };
        let verdict = if record.passed { "PASS" } else { "FAIL" };
        if !record.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {name:<26} {verdict} expected {} observed {}",
            i + 1,
            compact(&record.expected),
            compact(&record.observed)
        );
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
