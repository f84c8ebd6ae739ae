use std::io::Write;

use ndarray::Array2;

use crate::corpus::SequenceDatabase;
use crate::error::Result;

use super::occurrence::count_nonoverlapping_within;
use super::pattern::{FrequentPatternSet, Pattern};

/// Per-student occurrence counts of each frequent pattern.
///
/// Columns follow the pattern set's reporting order (support descending, then
/// shorter, then lexicographic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<Pattern>,
    cells: Vec<Vec<u32>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i]
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row][col]
    }

    pub fn to_array(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.n_rows(), self.n_cols()), |(i, j)| f64::from(self.cells[i][j]))
    }

    /// CSV with a `student_id` column followed by one column per pattern.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["student_id".to_string()];
        header.extend(self.columns.iter().map(Pattern::joined));
        wtr.write_record(&header)?;
        for (id, row) in self.rows.iter().zip(&self.cells) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(u32::to_string));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Counts every pattern of `fps` in every sequence of `db` with greedy
/// non-overlapping matching.
pub fn feature_matrix(db: &SequenceDatabase, fps: &FrequentPatternSet, max_gap: Option<usize>) -> FeatureMatrix {
    let columns: Vec<Pattern> = fps.iter().map(|fp| fp.pattern.clone()).collect();
    let cells = db
        .sequences()
        .iter()
        .map(|s| {
            columns
                .iter()
                .map(|p| {
                    let codes: Vec<&str> = s.codes.iter().map(String::as_str).collect();
                    let pat: Vec<&str> = p.iter().map(String::as_str).collect();
                    count_nonoverlapping_within(&codes, &pat, max_gap) as u32
                })
                .collect()
        })
        .collect();
    FeatureMatrix {
        rows: db.sequences().iter().map(|s| s.student_id.clone()).collect(),
        columns,
        cells,
    }
}
