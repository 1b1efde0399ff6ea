//! Grouping of base rows into layers whose column supports are disjoint.
//!
//! Rows inside one layer touch disjoint sets of expanded variables, so every
//! check of a layer can be updated at the same time. Merging rows shortens the
//! serial chain of layers an iteration has to walk through.

use crate::qc_code::{BaseMatrix, CodeError};

/// Lane budget the utilization figure is normalized against (2^26).
pub const REFERENCE_LANE_BUDGET: u64 = 67_108_864;

/// Symmetric row-conflict relation of a base matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    n_rows: usize,
    adjacent: Vec<bool>,
}

impl ConflictGraph {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        self.adjacent[a * self.n_rows + b]
    }

    /// Unordered conflicting pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n_rows {
            for b in a + 1..self.n_rows {
                if self.conflicts(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.edges().len() == self.n_rows * (self.n_rows - 1) / 2
    }
}

/// Rows `a` and `b` conflict when some base column is non-empty in both.
pub fn conflict_graph(base: &BaseMatrix) -> ConflictGraph {
    let n = base.n_rows();
    let mut adjacent = vec![false; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let clash = (0..base.n_cols())
                .any(|c| base.shift(a, c).is_some() && base.shift(b, c).is_some());
            adjacent[a * n + b] = clash;
            adjacent[b * n + a] = clash;
        }
    }
    ConflictGraph { n_rows: n, adjacent }
}

/// Ordered partition of base rows into layers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LayerSchedule {
    layers: Vec<Vec<usize>>,
}

impl LayerSchedule {
    /// Wraps an explicit layer list. Use [`LayerSchedule::validate_for`] to
    /// check it against a matrix.
    pub fn from_layers(layers: Vec<Vec<usize>>) -> Self {
        Self { layers }
    }

    /// The unmerged schedule: row `i` alone in layer `i`.
    pub fn one_row_per_layer(n_rows: usize) -> Self {
        Self::from_layers((0..n_rows).map(|r| vec![r]).collect())
    }

    /// Greedy first-fit merging in row order: each row joins the earliest
    /// layer it has no conflict with, or opens a new one.
    pub fn greedy(base: &BaseMatrix) -> Self {
        let graph = conflict_graph(base);
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for row in 0..base.n_rows() {
            match layers
                .iter_mut()
                .find(|layer| layer.iter().all(|&other| !graph.conflicts(row, other)))
            {
                Some(layer) => layer.push(row),
                None => layers.push(vec![row]),
            }
        }
        Self { layers }
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Smallest layer size; the conservative `k1` of the utilization figure.
    pub fn k1(&self) -> usize {
        self.layers.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Checks the schedule is a partition of the matrix rows with disjoint
    /// column support inside every layer.
    pub fn validate_for(&self, base: &BaseMatrix) -> Result<(), CodeError> {
        if self.layers.is_empty() || self.layers.iter().any(Vec::is_empty) {
            return Err(CodeError::EmptySchedule);
        }
        let n_rows = base.n_rows();
        let mut seen = vec![false; n_rows];
        for layer in &self.layers {
            for &row in layer {
                if row >= n_rows {
                    return Err(CodeError::ScheduleRowOutOfRange { row, n_rows });
                }
                if std::mem::replace(&mut seen[row], true) {
                    return Err(CodeError::ScheduleDuplicateRow(row));
                }
            }
        }
        let covered = seen.iter().filter(|&&s| s).count();
        if covered != n_rows {
            return Err(CodeError::ScheduleRowCount {
                expected: n_rows,
                found: covered,
            });
        }
        for (layer_idx, layer) in self.layers.iter().enumerate() {
            let mut owner: Vec<Option<usize>> = vec![None; base.n_cols()];
            for &row in layer {
                for (col, _) in base.row_entries(row) {
                    if let Some(a) = owner[col].replace(row) {
                        return Err(CodeError::LayerConflict {
                            layer: layer_idx,
                            a,
                            b: row,
                            col,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per layer, row indices separated by single spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            let rows: Vec<String> = layer.iter().map(usize::to_string).collect();
            out.push_str(&rows.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Fraction of the lane budget kept busy when `k2` codewords are decoded at
/// once.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilizationReport {
    pub k1: usize,
    pub k2: usize,
    pub z: usize,
    pub lane_budget: u64,
    /// `k1 * k2 * z / lane_budget`, saturated at 1.
    pub utilization: f64,
    /// The same figure computed with each layer's own size.
    pub per_layer: Vec<f64>,
}

/// Lane utilization for `k1` rows per layer, `k2` codewords and expansion `z`.
pub fn utilization_fraction(k1: usize, k2: usize, z: usize, lane_budget: u64) -> f64 {
    let lanes = k1 as f64 * k2 as f64 * z as f64;
    (lanes / lane_budget as f64).min(1.0)
}

pub fn utilization(schedule: &LayerSchedule, k2: usize, z: usize) -> UtilizationReport {
    utilization_with_budget(schedule, k2, z, REFERENCE_LANE_BUDGET)
}

pub fn utilization_with_budget(
    schedule: &LayerSchedule,
    k2: usize,
    z: usize,
    lane_budget: u64,
) -> UtilizationReport {
    assert!(k2 >= 1, "at least one codeword per batch");
    assert!(lane_budget >= 1, "lane budget must be positive");
    let k1 = schedule.k1();
    UtilizationReport {
        k1,
        k2,
        z,
        lane_budget,
        utilization: utilization_fraction(k1, k2, z, lane_budget),
        per_layer: schedule
            .layers()
            .iter()
            .map(|l| utilization_fraction(l.len(), k2, z, lane_budget))
            .collect(),
    }
}
