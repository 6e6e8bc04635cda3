//! CSV tables with a `#`-prefixed provenance header.

use std::io::Write;

/// Rows of one output table plus free-form notes (warnings) for the header.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Shortest representation that round-trips, so output is bit-reproducible.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Writes the header (command, version, git hash, config echo, notes) and the CSV body.
pub fn write_table<W: Write>(
    mut out: W,
    command: &str,
    config: &[String],
    table: &Table,
) -> std::io::Result<()> {
    writeln!(out, "# fluctem {command}")?;
    writeln!(out, "# version = {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# git = {}", env!("FLUCTEM_GIT_HASH"))?;
    for line in config {
        writeln!(out, "# config: {line}")?;
    }
    for note in &table.notes {
        writeln!(out, "# warning: {note}")?;
    }
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(&table.columns)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_then_rows() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![num(0.5), num(-2.0)]);
        t.notes.push("coarse".into());
        let mut buf = Vec::new();
        write_table(&mut buf, "demo", &["a = 1".into()], &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# fluctem demo");
        assert!(lines.contains(&"# config: a = 1"));
        assert!(lines.contains(&"# warning: coarse"));
        assert_eq!(&lines[lines.len() - 2..], ["x,y", "5e-1,-2e0"]);
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
