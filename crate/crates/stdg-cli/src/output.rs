//! CSV sinks: header row, comma separator, LF line endings and floats at 17
//! significant digits.

use anyhow::Result;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(out: Option<&Path>, header: &[&str]) -> Result<Self> {
        let sink: Box<dyn Write> = match out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        };
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn int(v: usize) -> String {
    v.to_string()
}
