use std::collections::HashSet;
use std::path::Path;

use super::MappingError;

/// A CSV file read as header plus string rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogicalTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl LogicalTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self, MappingError> {
        let mut seen = HashSet::new();
        for h in &header {
            if !seen.insert(h) {
                return Err(MappingError::Table(format!("duplicate column '{h}'")));
            }
        }
        if let Some(i) = rows.iter().position(|r| r.len() != header.len()) {
            return Err(MappingError::Table(format!(
                "row {i} has {} cells, header has {}",
                rows[i].len(),
                header.len()
            )));
        }
        Ok(LogicalTable { header, rows })
    }

    pub fn from_csv_str(text: &str) -> Result<Self, MappingError> {
        Self::from_reader(text.as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self, MappingError> {
        let file = std::fs::File::open(path)
            .map_err(|e| MappingError::MissingTable { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_reader(file)
    }

    fn from_reader(reader: impl std::io::Read) -> Result<Self, MappingError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header =
            rdr.headers().map_err(|e| MappingError::Table(e.to_string()))?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| MappingError::Table(e.to_string()))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Self::new(header, rows)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv_string(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            wtr.write_record(r).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}
