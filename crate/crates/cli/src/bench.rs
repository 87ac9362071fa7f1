//! `bench`: one CSV row per `.loop` file of a directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use linrank_core::ms::ms_analyze;
use linrank_core::pr::pr_analyze;
use linrank_core::text::parse_loop;

use crate::commands::InputError;

pub const HEADER: [&str; 8] = ["file", "n", "m", "verdict_ms", "verdict_pr", "agree", "us_ms", "us_pr"];

/// `.loop` files directly inside `dir`, sorted by name.
pub fn loop_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let entries = fs::read_dir(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "loop"))
        .collect();
    files.sort();
    Ok(files)
}

fn bench_row(path: &Path) -> [String; 8] {
    let name = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let parsed = fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| parse_loop(&t).map_err(|e| e.to_string()));
    let l = match parsed {
        Ok(l) => l,
        Err(_) => {
            let e = String::from("parse-error");
            return [name, String::new(), String::new(), e.clone(), e, String::from("false"), String::new(), String::new()];
        }
    };
    let t = Instant::now();
    let ms = ms_analyze(&l);
    let us_ms = t.elapsed().as_micros();
    let t = Instant::now();
    let pr = pr_analyze(&l);
    let us_pr = t.elapsed().as_micros();
    [
        name,
        l.n().to_string(),
        l.merged().len().to_string(),
        ms.name().to_string(),
        pr.name().to_string(),
        (ms.name() == pr.name()).to_string(),
        us_ms.to_string(),
        us_pr.to_string(),
    ]
}

/// Analyzes every loop file with both engines; unreadable or malformed
/// files get a `parse-error` row and the run continues.
pub fn bench(dir: &Path) -> Result<String, InputError> {
    let files = loop_files(dir)?;
    let rows: Vec<[String; 8]> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || bench_row(f))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis does not panic")).collect()
    });
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in &rows {
        w.write_record(r).expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields"))
}
