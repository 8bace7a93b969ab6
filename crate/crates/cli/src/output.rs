use std::path::Path;

use clap::ValueEnum;
use contact_valuations::report::ReportDocument;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One row per record; structured fields are embedded as JSON text.
pub fn to_csv(doc: &ReportDocument) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    w.write_record(["name", "kind", "passed", "expected", "observed", "tolerance", "provenance"]).map_err(err)?;
    for r in &doc.records {
        let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        w.write_record([
            r.name.as_str(),
            kind.as_str(),
            if r.passed { "true" } else { "false" },
            &r.expected.to_string(),
            &r.observed.to_string(),
            &r.tolerance.map(|t| t.to_string()).unwrap_or_default(),
            r.provenance.as_str(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// Writes the report to `out` (or stdout) and a pass/fail summary to stderr.
/// With `append` and JSON output, `out` receives one JSON line per run.
pub fn emit(doc: &ReportDocument, format: Format, out: Option<&Path>, append: bool) -> Result<(), String> {
    for r in &doc.records {
        eprintln!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
    }
    let rendered = match format {
        Format::Json => doc.to_json() + "\n",
        Format::Csv => to_csv(doc)?,
    };
    match out {
        Some(path) if append && format == Format::Json => doc.append_jsonl(path).map_err(|e| e.to_string()),
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
