//! Complete two-input rule tables.
//!
//! Text format: the first non-blank line lists the column labels separated
//! by commas; every following line is a row label followed by one output
//! label per column. Whitespace around tokens is ignored.

use std::fmt;

use crate::error::{Error, Result, RuleParseError};

/// Row, column and output vocabularies a rule table is written against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleLabels {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub outs: Vec<String>,
}

impl RuleLabels {
    pub fn new<S: AsRef<str>>(rows: &[S], cols: &[S], outs: &[S]) -> Self {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect();
        RuleLabels {
            rows: own(rows),
            cols: own(cols),
            outs: own(outs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    labels: RuleLabels,
    // Row-major, rows.len() * cols.len() output indices.
    grid: Vec<usize>,
}

/// Style issues that do not make a table unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleWarning {
    RowNotMonotone { row: String },
    ColNotMonotone { col: String },
    NotAntisymmetric { row: String, col: String },
}

impl fmt::Display for RuleWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleWarning::RowNotMonotone { row } => write!(f, "row {row} is not monotone"),
            RuleWarning::ColNotMonotone { col } => write!(f, "column {col} is not monotone"),
            RuleWarning::NotAntisymmetric { row, col } => {
                write!(f, "cell ({row}, {col}) breaks point-reflection antisymmetry")
            }
        }
    }
}

fn check_unique(axis: &'static str, labels: &[String]) -> std::result::Result<(), RuleParseError> {
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(RuleParseError::Duplicate {
                axis,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

impl RuleBase {
    /// `grid` is indexed `[row][col]` and holds output-term indices.
    pub fn new(labels: RuleLabels, grid: Vec<Vec<usize>>) -> Result<Self> {
        if labels.rows.is_empty() || labels.cols.is_empty() || labels.outs.is_empty() {
            return Err(Error::invalid("rule base needs non-empty label sets"));
        }
        check_unique("row", &labels.rows)?;
        check_unique("column", &labels.cols)?;
        check_unique("output", &labels.outs)?;
        if grid.len() != labels.rows.len() {
            return Err(RuleParseError::RowCount {
                expected: labels.rows.len(),
                found: grid.len(),
            }
            .into());
        }
        let mut flat = Vec::with_capacity(labels.rows.len() * labels.cols.len());
        for (row, cells) in labels.rows.iter().zip(&grid) {
            if cells.len() != labels.cols.len() {
                return Err(RuleParseError::Ragged {
                    row: row.clone(),
                    found: cells.len(),
                    expected: labels.cols.len(),
                }
                .into());
            }
            for &c in cells {
                if c >= labels.outs.len() {
                    return Err(Error::invalid(format!(
                        "row {row}: output index {c} out of range"
                    )));
                }
                flat.push(c);
            }
        }
        Ok(RuleBase { labels, grid: flat })
    }

    fn from_names(rows: &[&str], cols: &[&str], outs: &[&str], cells: &[&[&str]]) -> Self {
        let labels = RuleLabels::new(rows, cols, outs);
        let grid = cells
            .iter()
            .map(|r| {
                r.iter()
                    .map(|name| outs.iter().position(|o| o == name).expect("built-in label"))
                    .collect()
            })
            .collect();
        RuleBase::new(labels, grid).expect("built-in table is valid")
    }

    /// The 5x5 deflection / deflection-rate table with seven output terms.
    pub fn table_i() -> Self {
        const IN: [&str; 5] = ["NB", "NM", "Z", "PM", "PB"];
        const OUT: [&str; 7] = ["NB", "NM", "NS", "Z", "PS", "PM", "PB"];
        Self::from_names(
            &IN,
            &IN,
            &OUT,
            &[
                &["NB", "NB", "NM", "NS", "Z"],
                &["NB", "NM", "NS", "Z", "PS"],
                &["NM", "NS", "Z", "PS", "PM"],
                &["NS", "Z", "PS", "PM", "PB"],
                &["Z", "PS", "PM", "PB", "PB"],
            ],
        )
    }

    /// 3x3 table: same sign acts with that sign, opposite signs or
    /// equilibrium give zero action.
    pub fn principles_3x3() -> Self {
        const NZP: [&str; 3] = ["N", "Z", "P"];
        Self::from_names(
            &NZP,
            &NZP,
            &NZP,
            &[&["N", "N", "Z"], &["N", "Z", "P"], &["Z", "P", "P"]],
        )
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "table_I" => Some(Self::table_i()),
            "principles_3x3" => Some(Self::principles_3x3()),
            _ => None,
        }
    }

    pub fn labels(&self) -> &RuleLabels {
        &self.labels
    }

    pub fn rows(&self) -> usize {
        self.labels.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.labels.cols.len()
    }

    pub fn outputs(&self) -> usize {
        self.labels.outs.len()
    }

    /// Output-term index of rule `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.grid[row * self.cols() + col]
    }

    pub fn get_label(&self, row: &str, col: &str) -> Option<&str> {
        let i = self.labels.rows.iter().position(|r| r == row)?;
        let j = self.labels.cols.iter().position(|c| c == col)?;
        Some(&self.labels.outs[self.get(i, j)])
    }

    pub fn lint(&self) -> Vec<RuleWarning> {
        let (n, m, last) = (self.rows(), self.cols(), self.outputs() - 1);
        let mut out = Vec::new();
        for i in 0..n {
            if (1..m).any(|j| self.get(i, j) < self.get(i, j - 1)) {
                out.push(RuleWarning::RowNotMonotone {
                    row: self.labels.rows[i].clone(),
                });
            }
        }
        for j in 0..m {
            if (1..n).any(|i| self.get(i, j) < self.get(i - 1, j)) {
                out.push(RuleWarning::ColNotMonotone {
                    col: self.labels.cols[j].clone(),
                });
            }
        }
        for i in 0..n {
            for j in 0..m {
                if self.get(i, j) + self.get(n - 1 - i, m - 1 - j) != last {
                    out.push(RuleWarning::NotAntisymmetric {
                        row: self.labels.rows[i].clone(),
                        col: self.labels.cols[j].clone(),
                    });
                }
            }
        }
        out
    }

    /// Parses a table written against `labels`. Rows must appear in the
    /// declared order and the header must list the declared columns.
    pub fn parse(text: &str, labels: &RuleLabels) -> Result<(RuleBase, Vec<RuleWarning>), RuleParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let split = |l: &str| l.split(',').map(|t| t.trim().to_string()).collect::<Vec<_>>();

        let (hline, header) = lines.next().ok_or(RuleParseError::Empty)?;
        let header = split(header);
        check_unique("column", &header)?;
        if header != labels.cols {
            return Err(RuleParseError::Header {
                line: hline,
                message: format!(
                    "columns {:?} do not match declared {:?}",
                    header, labels.cols
                ),
            });
        }

        let mut seen: Vec<String> = Vec::new();
        let mut grid = Vec::with_capacity(labels.rows.len());
        for (line, text) in lines {
            let mut tokens = split(text);
            let row = tokens.remove(0);
            if !labels.rows.contains(&row) {
                return Err(RuleParseError::UnknownRow { label: row, line });
            }
            if seen.contains(&row) {
                return Err(RuleParseError::Duplicate {
                    axis: "row",
                    label: row,
                });
            }
            let expected = &labels.rows[seen.len()];
            if *expected != row {
                return Err(RuleParseError::RowOrder {
                    found: row,
                    expected: expected.clone(),
                });
            }
            if tokens.len() != labels.cols.len() {
                return Err(RuleParseError::Ragged {
                    row,
                    found: tokens.len(),
                    expected: labels.cols.len(),
                });
            }
            let cells = tokens
                .iter()
                .zip(&labels.cols)
                .map(|(tok, col)| {
                    labels.outs.iter().position(|o| o == tok).ok_or_else(|| {
                        RuleParseError::UnknownLabel {
                            label: tok.clone(),
                            row: row.clone(),
                            col: col.clone(),
                        }
                    })
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            grid.push(cells);
            seen.push(row);
        }
        if grid.len() != labels.rows.len() {
            return Err(RuleParseError::RowCount {
                expected: labels.rows.len(),
                found: grid.len(),
            });
        }
        check_unique("output", &labels.outs)?;
        check_unique("row", &labels.rows)?;
        let rb = RuleBase::new(labels.clone(), grid).map_err(|e| match e {
            Error::RuleParse(p) => p,
            other => RuleParseError::Header {
                line: hline,
                message: other.to_string(),
            },
        })?;
        let warnings = rb.lint();
        for w in &warnings {
            log::warn!("rule table: {w}");
        }
        Ok((rb, warnings))
    }

    /// Text form accepted by [`RuleBase::parse`].
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.labels.cols.join(","))?;
        for (i, row) in self.labels.rows.iter().enumerate() {
            write!(f, "{row}")?;
            for j in 0..self.cols() {
                write!(f, ",{}", self.labels.outs[self.get(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn table_i() -> RuleBase {
    RuleBase::table_i()
}

pub fn principles_3x3() -> RuleBase {
    RuleBase::principles_3x3()
}

pub fn parse_rulebase(text: &str, labels: &RuleLabels) -> Result<(RuleBase, Vec<RuleWarning>), RuleParseError> {
    RuleBase::parse(text, labels)
}
