//! CSV schemas and the cross-file merge behind the `report` subcommand.
//!
//! Bound rows are "long" format (one row per named bound); statistics and
//! search rows are "wide" with an `op` discriminator. The merge pivots both
//! into a single table keyed by `(n, k, m, lambda)`:
//!
//! - a `name` column pivots to `<name>_log2` holding that row's
//!   `value_log2` cell (the plot-ready column),
//! - an `op` column pivots every other non-key cell to `<op>.<column>`,
//! - any other input contributes its non-key columns directly.
//!
//! Missing cells stay empty (outer join); the same cell fed twice must
//! agree or the merge fails.

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Significant digits for bound values in CSV output.
pub const VALUE_DIGITS: usize = 50;
/// Significant digits for base-2 logarithm columns.
pub const LOG2_DIGITS: usize = 15;

pub const BOUNDS_HEADER: [&str; 9] = [
    "name",
    "n",
    "k",
    "m",
    "lambda",
    "side",
    "asymptotic",
    "value",
    "value_log2",
];

pub const STATS_HEADER: [&str; 12] = [
    "op", "n", "k", "m", "lambda", "mu", "sigma2", "bound", "ratio", "samples", "stderr", "seed",
];

pub const SEARCH_HEADER: [&str; 8] = ["op", "n", "k", "m", "lambda", "status", "m_min", "nodes"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        debug_assert!(row.iter().all(|c| !c.contains(',') && !c.contains('\n')));
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Csv> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = match lines.next() {
            Some(h) => h.split(',').map(|s| s.to_string()).collect(),
            None => return Err(Error::SchemaMismatch("empty csv".into())),
        };
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
            if row.len() != header.len() {
                return Err(Error::SchemaMismatch(format!(
                    "row has {} cells, header has {}",
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Csv { header, rows })
    }
}

/// One CSV row per bound value: the main row plus one row per companion
/// quantity, named `<bound>.<companion>` so the fixed schema still holds.
pub fn bound_rows(r: &BoundReport) -> Vec<Vec<String>> {
    let base = |name: String, value_dec: String, value_log2: String| {
        vec![
            name,
            r.n.to_string(),
            r.k.to_string(),
            r.m.to_string(),
            crate::params::format_ratio(&r.lambda),
            r.side.as_str().to_string(),
            r.asymptotic.to_string(),
            value_dec,
            value_log2,
        ]
    };
    let mut rows = vec![base(
        r.name.to_string(),
        r.value.decimal(VALUE_DIGITS),
        r.value.log2_decimal(LOG2_DIGITS),
    )];
    for (key, val) in &r.aux {
        rows.push(base(
            format!("{}.{}", r.name, key),
            val.decimal(VALUE_DIGITS),
            val.log2_decimal(LOG2_DIGITS),
        ));
    }
    rows
}

type Key = (u64, u64, u64, String);

fn key_cell(row: &[String], idx: usize, col: &str) -> Result<u64> {
    row[idx]
        .parse::<u64>()
        .map_err(|_| Error::SchemaMismatch(format!("non-integer {col} cell {:?}", row[idx])))
}

/// Outer-joins any number of reports into one table keyed by
/// `(n, k, m, lambda)`. Conflicting duplicate cells fail the merge.
pub fn merge_reports(inputs: &[Csv]) -> Result<Csv> {
    let mut table: BTreeMap<Key, BTreeMap<String, String>> = BTreeMap::new();
    let mut columns: BTreeSet<String> = BTreeSet::new();
    for csv in inputs {
        let idx = |name: &str| csv.header.iter().position(|h| h == name);
        let (ni, ki, mi, li) = match (idx("n"), idx("k"), idx("m"), idx("lambda")) {
            (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
            _ => {
                return Err(Error::SchemaMismatch(
                    "input lacks key columns n,k,m,lambda".into(),
                ))
            }
        };
        let name_col = idx("name");
        let op_col = idx("op");
        let log2_col = idx("value_log2");
        for row in &csv.rows {
            let key: Key = (
                key_cell(row, ni, "n")?,
                key_cell(row, ki, "k")?,
                key_cell(row, mi, "m")?,
                row[li].clone(),
            );
            let entry = table.entry(key).or_default();
            let mut put = |col: String, val: &str| -> Result<()> {
                if val.is_empty() {
                    return Ok(());
                }
                match entry.get(&col) {
                    Some(old) if old != val => Err(Error::SchemaMismatch(format!(
                        "conflicting values for {col}: {old} vs {val}"
                    ))),
                    Some(_) => Ok(()),
                    None => {
                        columns.insert(col.clone());
                        entry.insert(col, val.to_string());
                        Ok(())
                    }
                }
            };
            if let Some(nc) = name_col {
                let vl = log2_col.ok_or_else(|| {
                    Error::SchemaMismatch("name column without value_log2".into())
                })?;
                put(format!("{}_log2", row[nc]), &row[vl])?;
            } else if let Some(oc) = op_col {
                for (ci, cell) in row.iter().enumerate() {
                    if ci == ni || ci == ki || ci == mi || ci == li || ci == oc {
                        continue;
                    }
                    put(format!("{}.{}", row[oc], csv.header[ci]), cell)?;
                }
            } else {
                for (ci, cell) in row.iter().enumerate() {
                    if ci == ni || ci == ki || ci == mi || ci == li {
                        continue;
                    }
                    put(csv.header[ci].clone(), cell)?;
                }
            }
        }
    }
    let mut header: Vec<String> = ["n", "k", "m", "lambda"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(columns.iter().cloned());
    let mut out = Csv {
        header,
        rows: Vec::new(),
    };
    for ((n, k, m, lambda), cells) in &table {
        let mut row = vec![n.to_string(), k.to_string(), m.to_string(), lambda.clone()];
        for col in &columns {
            row.push(cells.get(col).cloned().unwrap_or_default());
        }
        out.rows.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::pigeonhole_lower;
    use crate::params::ProblemParams;
    use crate::Rat;
    use num_traits::One;

    #[test]
    fn csv_round_trip() {
        let mut c = Csv::new(&["a", "b"]);
        c.push(vec!["1".into(), "x".into()]);
        c.push(vec!["2".into(), "".into()]);
        let text = c.render();
        assert_eq!(Csv::parse(&text).unwrap(), c);
        assert!(Csv::parse("").is_err());
        assert!(Csv::parse("a,b\n1\n").is_err());
    }

    #[test]
    fn bound_rows_follow_schema() {
        let p = ProblemParams::new(10, 1, 1, Rat::one()).unwrap();
        let rows = bound_rows(&pigeonhole_lower(&p).unwrap());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), BOUNDS_HEADER.len());
        assert_eq!(rows[0][0], "pigeonhole_lower");
        assert_eq!(rows[0][1], "10");
        assert_eq!(rows[0][6], "true");
    }

    fn bounds_fixture() -> Csv {
        let mut c = Csv::new(&BOUNDS_HEADER);
        for n in 1..=5u32 {
            c.push(vec![
                "pigeonhole_lower".into(),
                n.to_string(),
                "1".into(),
                "1".into(),
                "1/1".into(),
                "lower".into(),
                "true".into(),
                "1.5".into(),
                "0.585".into(),
            ]);
        }
        c
    }

    fn search_fixture(rows: u32) -> Csv {
        let mut c = Csv::new(&SEARCH_HEADER);
        for n in 1..=rows {
            c.push(vec![
                "min_m_search".into(),
                n.to_string(),
                "1".into(),
                "1".into(),
                "1/1".into(),
                "found".into(),
                n.to_string(),
                "9".into(),
            ]);
        }
        c
    }

    #[test]
    fn merge_joins_on_shared_keys() {
        let merged = merge_reports(&[bounds_fixture(), search_fixture(5)]).unwrap();
        assert_eq!(merged.rows.len(), 5);
        let h: Vec<&str> = merged.header.iter().map(|s| s.as_str()).collect();
        assert_eq!(&h[..4], ["n", "k", "m", "lambda"]);
        assert!(h.contains(&"pigeonhole_lower_log2"));
        assert!(h.contains(&"min_m_search.m_min"));
        assert!(h.contains(&"min_m_search.status"));
        // rows sorted by numeric key
        assert_eq!(merged.rows[0][0], "1");
        assert_eq!(merged.rows[4][0], "5");
    }

    #[test]
    fn merge_keeps_rows_with_missing_columns() {
        let merged = merge_reports(&[bounds_fixture(), search_fixture(3)]).unwrap();
        assert_eq!(merged.rows.len(), 5);
        let mcol = merged
            .header
            .iter()
            .position(|h| h == "min_m_search.m_min")
            .unwrap();
        assert_eq!(merged.rows[2][mcol], "3");
        assert_eq!(merged.rows[4][mcol], "");
    }

    #[test]
    fn merge_rejects_conflicts_and_bad_schemas() {
        let mut a = search_fixture(1);
        let mut b = search_fixture(1);
        b.rows[0][6] = "2".into();
        assert!(matches!(
            merge_reports(&[a.clone(), b]),
            Err(Error::SchemaMismatch(_))
        ));
        // idempotent duplicate is fine
        assert!(merge_reports(&[a.clone(), a.clone()]).is_ok());
        a.header[1] = "N".into();
        assert!(matches!(merge_reports(&[a]), Err(Error::SchemaMismatch(_))));
    }
}
