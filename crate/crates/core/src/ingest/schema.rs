use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::RawTable;
use crate::dataset::parse_finite;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    TrafficType,
    BinaryLabel,
    Drop,
}

impl FromStr for ColumnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "numeric" => ColumnKind::Numeric,
            "categorical" => ColumnKind::Categorical,
            "traffic_type" => ColumnKind::TrafficType,
            "binary_label" => ColumnKind::BinaryLabel,
            "drop" => ColumnKind::Drop,
            other => {
                return Err(Error::InvalidSchema(format!(
                    "unknown column kind `{other}`"
                )))
            }
        })
    }
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnKind::Numeric => "numeric",
            ColumnKind::Categorical => "categorical",
            ColumnKind::TrafficType => "traffic_type",
            ColumnKind::BinaryLabel => "binary_label",
            ColumnKind::Drop => "drop",
        })
    }
}

/// Column kinds for a table plus the traffic-type to binary-label mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaSpec {
    columns: Vec<(String, ColumnKind)>,
    label_mapping: BTreeMap<String, u8>,
    normal_class_name: String,
}

impl SchemaSpec {
    pub fn new(
        columns: Vec<(String, ColumnKind)>,
        classes: impl IntoIterator<Item = String>,
        normal_class_name: impl Into<String>,
    ) -> Result<Self> {
        let normal_class_name = normal_class_name.into();
        let mut label_mapping: BTreeMap<String, u8> = classes
            .into_iter()
            .map(|c| {
                let label = u8::from(c != normal_class_name);
                (c, label)
            })
            .collect();
        label_mapping.insert(normal_class_name.clone(), 0);
        let spec = Self {
            columns,
            label_mapping,
            normal_class_name,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let count = |kind| self.columns.iter().filter(|(_, k)| *k == kind).count();
        match count(ColumnKind::TrafficType) {
            1 => {}
            n => {
                return Err(Error::InvalidSchema(format!(
                    "exactly one traffic_type column required, found {n}"
                )))
            }
        }
        if count(ColumnKind::BinaryLabel) > 1 {
            return Err(Error::InvalidSchema(
                "at most one binary_label column allowed".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for (name, _) in &self.columns {
            if !seen.insert(name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        Ok(())
    }

    pub fn columns(&self) -> &[(String, ColumnKind)] {
        &self.columns
    }

    pub fn kind_of(&self, column: &str) -> Option<ColumnKind> {
        self.columns
            .iter()
            .find(|(n, _)| n == column)
            .map(|&(_, k)| k)
    }

    pub fn traffic_type_column(&self) -> &str {
        self.columns
            .iter()
            .find(|(_, k)| *k == ColumnKind::TrafficType)
            .map(|(n, _)| n.as_str())
            .expect("validated schema has a traffic_type column")
    }

    pub fn label_mapping(&self) -> &BTreeMap<String, u8> {
        &self.label_mapping
    }

    pub fn normal_class_name(&self) -> &str {
        &self.normal_class_name
    }

    /// Binary label of a traffic class: 0 for the normal class, 1 otherwise.
    pub fn label_for(&self, class: &str) -> u8 {
        self.label_mapping
            .get(class)
            .copied()
            .unwrap_or_else(|| u8::from(class != self.normal_class_name))
    }
}

/// A column is numeric iff it has a non-empty entry and every non-empty entry
/// parses as a finite real.
fn looks_numeric(values: &[String]) -> bool {
    let mut any = false;
    for v in values {
        if v.trim().is_empty() {
            continue;
        }
        if parse_finite(v).is_none() {
            return false;
        }
        any = true;
    }
    any
}

pub fn infer_schema(
    table: &RawTable,
    traffic_type_column: &str,
    normal_class_name: &str,
) -> Result<SchemaSpec> {
    let type_idx = table
        .column_index(traffic_type_column)
        .ok_or_else(|| Error::MissingColumn(traffic_type_column.to_owned()))?;
    let columns = table
        .column_names()
        .iter()
        .zip(table.columns())
        .enumerate()
        .map(|(i, (name, values))| {
            let kind = if i == type_idx {
                ColumnKind::TrafficType
            } else if looks_numeric(values) {
                ColumnKind::Numeric
            } else {
                ColumnKind::Categorical
            };
            (name.clone(), kind)
        })
        .collect();
    let classes: BTreeSet<String> = table.columns()[type_idx].iter().cloned().collect();
    SchemaSpec::new(columns, classes, normal_class_name)
}

/// Contents of a `key=value` schema override file.
///
/// ```text
/// # comment
/// traffic_type=class
/// normal=normal.
/// protocol_type=categorical
/// difficulty=drop
/// ```
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchemaOverride {
    pub traffic_type: Option<String>,
    pub normal: Option<String>,
    pub kinds: BTreeMap<String, ColumnKind>,
}

impl SchemaOverride {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = SchemaOverride::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidSchema(format!("line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "traffic_type" => out.traffic_type = Some(value.to_owned()),
                "normal" => out.normal = Some(value.to_owned()),
                column => {
                    out.kinds.insert(column.to_owned(), value.parse()?);
                }
            }
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Infers a schema for `table` and applies the overrides on top.
    /// Explicit `traffic_type`/`normal` keys win over the fallbacks.
    pub fn resolve(
        &self,
        table: &RawTable,
        traffic_type_fallback: Option<&str>,
        normal_fallback: Option<&str>,
    ) -> Result<SchemaSpec> {
        let traffic = self
            .traffic_type
            .as_deref()
            .or(traffic_type_fallback)
            .ok_or_else(|| Error::InvalidSchema("no traffic_type column given".into()))?;
        let normal = self
            .normal
            .as_deref()
            .or(normal_fallback)
            .ok_or_else(|| Error::InvalidSchema("no normal class name given".into()))?;
        let inferred = infer_schema(table, traffic, normal)?;
        for name in self.kinds.keys() {
            if table.column_index(name).is_none() {
                return Err(Error::MissingColumn(name.clone()));
            }
        }
        let columns = inferred
            .columns
            .into_iter()
            .map(|(name, kind)| {
                let kind = self.kinds.get(&name).copied().unwrap_or(kind);
                (name, kind)
            })
            .collect();
        let classes = inferred.label_mapping.into_keys();
        SchemaSpec::new(columns, classes, normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(cols: &[(&str, &[&str])]) -> RawTable {
        RawTable::new(
            cols.iter().map(|(n, _)| n.to_string()).collect(),
            cols.iter()
                .map(|(_, v)| v.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kinds_are_inferred() {
        let t = table(&[
            ("x", &["1", "2.5", "3"]),
            ("proto", &["tcp", "udp", "tcp"]),
            ("class", &["normal.", "neptune.", "normal."]),
        ]);
        let s = infer_schema(&t, "class", "normal.").unwrap();
        assert_eq!(s.kind_of("x"), Some(ColumnKind::Numeric));
        assert_eq!(s.kind_of("proto"), Some(ColumnKind::Categorical));
        assert_eq!(s.kind_of("class"), Some(ColumnKind::TrafficType));
        assert_eq!(s.label_for("normal."), 0);
        assert_eq!(s.label_for("neptune."), 1);
    }

    #[test]
    fn missing_traffic_column() {
        let t = table(&[("x", &["1"])]);
        assert!(matches!(
            infer_schema(&t, "class", "normal"),
            Err(Error::MissingColumn(_))
        ));
    }

    #[test]
    fn nsl_class_column_maps_all_attacks_to_one() {
        let attacks = [
            "neptune.",
            "back.",
            "teardrop.",
            "satan.",
            "warezclient.",
            "ipsweep.",
            "smurf.",
            "portsweep.",
            "pod.",
            "nmap.",
            "guess_passwd.",
            "buffer_overflow.",
            "warezmaster.",
            "land.",
            "imap.",
            "rootkit.",
            "loadmodule.",
            "ftp_write.",
            "multihop.",
            "phf.",
            "perl.",
            "spy.",
        ];
        let mut classes: Vec<&str> = attacks.to_vec();
        classes.push("normal.");
        let t = table(&[("class", &classes)]);
        let s = infer_schema(&t, "class", "normal.").unwrap();
        assert_eq!(s.label_mapping().len(), 23);
        assert_eq!(s.label_mapping()["normal."], 0);
        assert!(attacks.iter().all(|a| s.label_mapping()[*a] == 1));
    }

    #[test]
    fn override_file_applies() {
        let t = table(&[
            ("x", &["1", "2"]),
            ("lvl", &["3", "4"]),
            ("attack_cat", &["Normal", "Worms"]),
            ("label", &["0", "1"]),
        ]);
        let o = SchemaOverride::parse(
            "# unsw\ntraffic_type = attack_cat\nnormal=Normal\nlvl=drop\nlabel=binary_label\n",
        )
        .unwrap();
        let s = o.resolve(&t, None, None).unwrap();
        assert_eq!(s.kind_of("lvl"), Some(ColumnKind::Drop));
        assert_eq!(s.kind_of("label"), Some(ColumnKind::BinaryLabel));
        assert_eq!(s.traffic_type_column(), "attack_cat");
        assert_eq!(s.normal_class_name(), "Normal");
    }

    #[test]
    fn override_rejects_bad_lines() {
        assert!(SchemaOverride::parse("nonsense").is_err());
        assert!(SchemaOverride::parse("x=fancy").is_err());
    }

    #[test]
    fn two_traffic_columns_rejected() {
        let t = table(&[("a", &["n"]), ("b", &["n"])]);
        let o = SchemaOverride::parse("traffic_type=a\nnormal=n\nb=traffic_type").unwrap();
        assert!(matches!(
            o.resolve(&t, None, None),
            Err(Error::InvalidSchema(_))
        ));
    }
}
