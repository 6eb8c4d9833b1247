use std::io::Write;
use std::path::Path;

use crate::run::ResultRow;
use crate::RunError;

/// Scientific notation with twelve significant digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn status(row: &ResultRow) -> String {
    match &row.error {
        None => "ok".to_string(),
        Some(e) => format!("failed: {e}"),
    }
}

/// Wide CSV: one line per row, ranged variables as columns.
pub fn write_csv<W: Write>(out: W, ranged: &[String], rows: &[ResultRow], timing: bool) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = vec!["study".into()];
    header.extend(ranged.iter().cloned());
    header.extend(
        ["backend", "mean", "ci_low", "ci_high", "replications", "converged", "states", "status"].map(String::from),
    );
    if timing {
        header.push("wall_time_s".into());
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.study.clone()];
        rec.extend(ranged.iter().map(|k| sci(r.value(k).unwrap_or(f64::NAN))));
        rec.extend([
            r.engine.name().to_string(),
            sci(r.mean),
            sci(r.ci_low),
            sci(r.ci_high),
            r.replications.to_string(),
            r.converged.to_string(),
            r.states.map_or(String::new(), |s| s.to_string()),
            status(r),
        ]);
        if timing {
            rec.push(format!("{:.3}", r.wall_time));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Long CSV for plotting: one line per (row, statistic).
pub fn write_long_csv<W: Write>(out: W, ranged: &[String], rows: &[ResultRow]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = vec!["study".into()];
    header.extend(ranged.iter().cloned());
    header.extend(["backend", "statistic", "value"].map(String::from));
    w.write_record(&header)?;
    for r in rows.iter().filter(|r| !r.failed()) {
        for (stat, v) in [("mean", r.mean), ("ci_low", r.ci_low), ("ci_high", r.ci_high)] {
            let mut rec = vec![r.study.clone()];
            rec.extend(ranged.iter().map(|k| sci(r.value(k).unwrap_or(f64::NAN))));
            rec.extend([r.engine.name().to_string(), stat.to_string(), sci(v)]);
            w.write_record(&rec)?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<(), RunError>) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io { path: path.display().to_string(), source: e };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    fill(tmp.as_file_mut())?;
    tmp.as_file_mut().flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
