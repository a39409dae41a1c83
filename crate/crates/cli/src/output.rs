//! Shared output and input helpers for the subcommands.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use wattroute::{Error, Result};

/// Formats a float with six decimal places, the fixed precision of every
/// numeric column we emit. Infinities print as `inf`/`-inf`.
pub fn f6(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        }
    } else {
        format!("{x:.6}")
    }
}

/// Opens `path` for reading, keeping the error kind (so a missing file stays
/// distinguishable) while adding the path to the message.
pub fn open_input(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| annotate(e, path))
}

/// Reads `path` to a string with the same error annotation as [`open_input`].
pub fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    open_input(path)?
        .read_to_string(&mut text)
        .map_err(|e| annotate(e, path))?;
    Ok(text)
}

fn annotate(err: io::Error, path: &Path) -> Error {
    Error::Io(io::Error::new(
        err.kind(),
        format!("{}: {err}", path.display()),
    ))
}

/// Writes `content` to `out` when given, otherwise to standard output.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = File::create(path).map_err(|e| annotate(e, path))?;
            file.write_all(content.as_bytes())
                .map_err(|e| annotate(e, path))?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// A small table that renders either as CSV (the machine-readable default)
/// or as an aligned markdown table for human eyes.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut text = String::new();
        text.push_str(&self.header.join(","));
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        text
    }

    pub fn to_markdown(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let render = |cells: &[String]| {
            let mut line = String::from("|");
            for (cell, w) in cells.iter().zip(&widths) {
                line.push_str(&format!(" {cell:<w$} |"));
            }
            line.push('\n');
            line
        };
        let mut text = render(&self.header);
        text.push('|');
        for w in &widths {
            text.push_str(&format!(" {} |", "-".repeat(*w)));
        }
        text.push('\n');
        for row in &self.rows {
            text.push_str(&render(row));
        }
        text
    }

    pub fn render(&self, markdown: bool) -> String {
        if markdown {
            self.to_markdown()
        } else {
            self.to_csv()
        }
    }
}
