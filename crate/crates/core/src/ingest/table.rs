use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::dataset::ragged_or;
use crate::error::{Error, Result};

/// A CSV file held as text columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    column_names: Vec<String>,
    columns: Vec<Vec<String>>,
    row_count: usize,
}

impl RawTable {
    pub fn new(column_names: Vec<String>, columns: Vec<Vec<String>>) -> Result<Self> {
        if column_names.len() != columns.len() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} columns",
                column_names.len(),
                columns.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &column_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let row_count = columns.first().map_or(0, Vec::len);
        if let Some((i, col)) = columns
            .iter()
            .enumerate()
            .find(|(_, c)| c.len() != row_count)
        {
            return Err(Error::InvalidArgument(format!(
                "column `{}` has {} entries, expected {row_count}",
                column_names[i],
                col.len()
            )));
        }
        Ok(Self {
            column_names,
            columns,
            row_count,
        })
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn columns(&self) -> &[Vec<String>] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<&[String]> {
        self.column_index(name).map(|i| self.columns[i].as_slice())
    }
}

/// Reads a comma-delimited UTF-8 CSV file. Without a header, columns are
/// named `col0..colN-1`.
pub fn parse_csv(path: impl AsRef<Path>, has_header: bool) -> Result<RawTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv_from(file, has_header, path)
}

pub fn parse_csv_from<R: Read>(input: R, has_header: bool, path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .from_reader(input);
    let mut names: Option<Vec<String>> = if has_header {
        let header = reader.headers().map_err(|e| ragged_or(e, path))?;
        if header.is_empty() {
            return Err(Error::NoRows);
        }
        Some(header.iter().map(|s| s.trim().to_owned()).collect())
    } else {
        None
    };

    let mut columns: Vec<Vec<String>> = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut rows = 0usize;
    while reader
        .read_record(&mut record)
        .map_err(|e| ragged_or(e, path))?
    {
        if columns.is_empty() {
            columns = vec![Vec::new(); record.len()];
            if names.is_none() {
                names = Some((0..record.len()).map(|i| format!("col{i}")).collect());
            }
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(field.to_owned());
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::NoRows);
    }
    RawTable::new(names.unwrap_or_default(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, header: bool) -> Result<RawTable> {
        parse_csv_from(text.as_bytes(), header, Path::new("mem.csv"))
    }

    #[test]
    fn header_is_consumed() {
        let t = parse("a,b\n1,x\n2,y", true).unwrap();
        assert_eq!(t.column_names(), ["a", "b"]);
        assert_eq!(t.row_count(), 2);
        assert_eq!(t.column("b").unwrap(), ["x", "y"]);
    }

    #[test]
    fn headerless_names_are_positional() {
        let t = parse("1,x\n2,y\n", false).unwrap();
        assert_eq!(t.column_names(), ["col0", "col1"]);
        assert_eq!(t.row_count(), 2);
    }

    #[test]
    fn empty_file_has_no_rows() {
        assert!(matches!(parse("", true), Err(Error::NoRows)));
        assert!(matches!(parse("", false), Err(Error::NoRows)));
        assert!(matches!(parse("a,b\n", true), Err(Error::NoRows)));
    }

    #[test]
    fn ragged_row_reports_position() {
        match parse("a,b\n1,2\n3\n", true) {
            Err(Error::RaggedRow {
                row,
                expected,
                found,
            }) => {
                assert_eq!((row, expected, found), (3, 2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_header_rejected() {
        assert!(matches!(
            parse("a,a\n1,2\n", true),
            Err(Error::DuplicateColumn(_))
        ));
    }
}
