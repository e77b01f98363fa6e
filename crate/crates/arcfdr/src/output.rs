//! The result CSV: `procedure,pi_a,mu_a,q,alpha,metric,value,stderr,n,m,seed`.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use arcfdr_core::simulate::ResultRow;

pub const HEADER: [&str; 11] =
    ["procedure", "pi_a", "mu_a", "q", "alpha", "metric", "value", "stderr", "n", "m", "seed"];

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.procedure.clone(),
            r.pi_a.to_string(),
            r.mu_a.to_string(),
            r.q.to_string(),
            r.alpha.to_string(),
            r.metric.name().to_string(),
            r.value.to_string(),
            r.stderr.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes to a temporary file next to `path` and renames it into place, so a
/// failed run never leaves a partial file behind.
pub fn write_rows_atomically(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
    write_rows(&mut tmp, rows)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use arcfdr_core::simulate::Metric;

    #[test]
    fn header_and_row_format() {
        let row = ResultRow {
            procedure: "oe-bh".into(),
            pi_a: 0.3,
            mu_a: 3.5,
            q: 0.99,
            alpha: 0.05,
            metric: Metric::SupFdr,
            value: 0.01,
            stderr: 0.002,
            n: 1000,
            m: 100,
            seed: 42,
        };
        let mut buf = Vec::new();
        write_rows(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "procedure,pi_a,mu_a,q,alpha,metric,value,stderr,n,m,seed\noe-bh,0.3,3.5,0.99,0.05,sup_fdr,0.01,0.002,1000,100,42\n"
        );
    }

    #[test]
    fn unwritable_target_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("missing").join("out.csv");
        assert!(write_rows_atomically(&target, &[]).is_err());
        assert!(!target.exists());
    }
}
