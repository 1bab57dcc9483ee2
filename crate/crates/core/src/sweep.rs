//! Tabular sweep output and SNR grid construction.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Rows of numeric values under fixed column headers.
///
/// Headers carry units (`rate_nats_per_dim`, `eb_n0_db`, ...). Points that
/// could not be placed on the curve, such as zero-rate points on an energy
/// axis, are dropped and counted in `omitted`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub omitted: usize,
}

impl SweepTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            omitted: 0,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let err = |e: csv::Error| Error::InvalidInput(e.to_string());
        let columns = r.headers().map_err(err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(err)?;
            let row = rec
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::InvalidInput(format!("bad number {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self {
            columns,
            rows,
            omitted: 0,
        })
    }
}

fn format_value(v: f64) -> String {
    // Display for f64 is the shortest string that parses back to the same bits
    v.to_string()
}

/// Grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

/// `points` values from `start` to `stop` inclusive.
pub fn grid(start: f64, stop: f64, points: usize, scale: GridScale) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidInput("grid needs at least one point".into()));
    }
    if !(start.is_finite() && stop.is_finite()) || (points > 1 && !(stop > start)) {
        return Err(Error::InvalidInput(format!(
            "grid bounds must be finite with stop > start (got {start}..{stop})"
        )));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    let values = match scale {
        GridScale::Linear => (0..points)
            .map(|i| start + (stop - start) * step(i))
            .collect(),
        GridScale::Log => {
            if !(start > 0.0) {
                return Err(Error::InvalidInput("log grid needs start > 0".into()));
            }
            let (a, b) = (start.ln(), stop.ln());
            (0..points).map(|i| (a + (b - a) * step(i)).exp()).collect()
        }
    };
    Ok(values)
}

/// Rejects grids that are empty, non-positive or not strictly increasing.
pub fn check_snr_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty SNR grid".into()));
    }
    if grid.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::Domain(
            "SNR grid values must be positive and finite".into(),
        ));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("SNR grid must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_and_log_grids() {
        let g = grid(0.5, 1.5, 101, GridScale::Linear).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[100], 1.5);
        assert!((g[44] - 0.94).abs() < 1e-12);

        let g = grid(1e-3, 10.0, 5, GridScale::Log).unwrap();
        assert!((g[1] - 1e-2).abs() < 1e-15);
        assert!(grid(0.0, 1.0, 3, GridScale::Log).is_err());
        assert!(grid(1.0, 0.5, 3, GridScale::Linear).is_err());
        assert!(grid(1.0, 2.0, 0, GridScale::Linear).is_err());
    }

    #[test]
    fn snr_grid_checks() {
        assert!(check_snr_grid(&[0.1, 0.2]).is_ok());
        assert!(check_snr_grid(&[]).is_err());
        assert!(check_snr_grid(&[0.0, 0.2]).is_err());
        assert!(check_snr_grid(&[0.2, 0.2]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut t = SweepTable::new(&["snr", "rate_nats_per_dim"]);
        t.push(vec![0.5, 0.25]);
        t.push(vec![1.0, f64::INFINITY]);
        assert_eq!(
            t.to_csv_string(),
            "snr,rate_nats_per_dim\n0.5,0.25\n1,inf\n"
        );
        assert_eq!(t.column("snr").unwrap(), vec![0.5, 1.0]);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(values in prop::collection::vec(any::<f64>(), 1..40)) {
            let mut t = SweepTable::new(&["a", "b"]);
            for pair in values.chunks(2) {
                t.push(vec![pair[0], *pair.get(1).unwrap_or(&0.0)]);
            }
            let back = SweepTable::read_csv(t.to_csv_string().as_bytes()).unwrap();
            prop_assert_eq!(back.columns, t.columns);
            for (x, y) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
                prop_assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
            }
        }
    }
}
