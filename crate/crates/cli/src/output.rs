use std::io::Write;

use crate::error::CliError;

/// CSV on a writer, preceded by a `# lapprox <table> v<N>` schema line.
pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl<W: Write> Table<W> {
    pub fn new(mut out: W, name: &str, header: &[&str]) -> Result<Self, CliError> {
        writeln!(out, "# lapprox {name} v{SCHEMA_VERSION}")?;
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        let fields: Vec<String> = fields.into_iter().map(|f| f.to_string()).collect();
        self.inner.write_record(&fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Shortest representation that reads back as the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, 0.125, 0.1251855759802404, 1e-30, 2.5e20] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0");
    }

    #[test]
    fn table_layout() {
        let mut buf = Vec::new();
        let mut t = Table::new(&mut buf, "demo", &["a", "b"]).unwrap();
        t.row(["x,y", "2"]).unwrap();
        t.finish().unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# lapprox demo v1\na,b\n\"x,y\",2\n");
    }
}
