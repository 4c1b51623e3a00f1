//! Minimal CSV writer for numeric tables. Every file starts with a schema
//! comment line naming the table and its version, then a header row.

use std::fmt::Display;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Table {
    out: String,
    columns: usize,
}

impl Table {
    pub fn new(kind: &str, header: &[&str]) -> Table {
        let mut out = format!("# treembed {kind} v{SCHEMA_VERSION}\n");
        out.push_str(&header.join(","));
        out.push('\n');
        Table { out, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[&dyn Display]) {
        assert_eq!(cells.len(), self.columns, "row width");
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(&c.to_string());
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Fixed six-decimal rendering so outputs compare byte for byte.
pub fn f6(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:.6}")
    }
}
