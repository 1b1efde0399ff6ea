//! Quasi-cyclic base matrices, their binary expansion and the compact edge
//! index consumed by the layered decoder.
//!
//! A base matrix entry `a >= 0` stands for the `z x z` identity matrix
//! cyclically shifted to the right by `a` positions; `-1` stands for the
//! all-zero block. Expanded check `i * z + k` (base row `i`, offset `k`) is
//! connected to variable `c * z + (k + a) mod z` for every non-empty entry
//! `a` in column `c` of row `i`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::layer_schedule::LayerSchedule;

/// Marker for an all-zero circulant block.
pub const ZERO_BLOCK: i32 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing header \"n_rows n_cols z\"")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    WrongColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} matrix rows, found {found}")]
    WrongRowCount { expected: usize, found: usize },
    #[error("line {line}: invalid integer {token:?}")]
    InvalidInteger { line: usize, token: String },
    #[error("line {line}: shift {value} out of range for z = {z}")]
    ShiftOutOfRange { line: usize, value: i64, z: usize },
    #[error("line {line}: empty check row (every entry is -1)")]
    EmptyCheckRow { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("base matrix needs at least one row and one column")]
    EmptyMatrix,
    #[error("expansion factor must be positive")]
    ZeroExpansion,
    #[error("expected {expected} shift values, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("shift {value} at ({row}, {col}) out of range for z = {z}")]
    ShiftOutOfRange {
        row: usize,
        col: usize,
        value: i32,
        z: usize,
    },
    #[error("base row {0} is an empty check row (every entry is -1)")]
    EmptyCheckRow(usize),
    #[error("code rate is not positive: {n_rows} rows, {n_cols} columns")]
    NonPositiveRate { n_rows: usize, n_cols: usize },
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule covers {found} rows but base matrix has {expected}")]
    ScheduleRowCount { expected: usize, found: usize },
    #[error("schedule references base row {row}, matrix has {n_rows} rows")]
    ScheduleRowOutOfRange { row: usize, n_rows: usize },
    #[error("base row {0} appears more than once in the schedule")]
    ScheduleDuplicateRow(usize),
    #[error("layer {layer}: rows {a} and {b} share base column {col}")]
    LayerConflict {
        layer: usize,
        a: usize,
        b: usize,
        col: usize,
    },
}

/// Grid of circulant shifts together with the expansion factor `z`.
///
/// Square or wide matrices are accepted so the small textbook examples can be
/// represented; [`descriptor`] rejects any shape without a positive rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMatrix {
    n_rows: usize,
    n_cols: usize,
    z: usize,
    shifts: Vec<i32>,
}

impl BaseMatrix {
    /// Builds a matrix from row-major shifts, validating every invariant.
    pub fn new(n_rows: usize, n_cols: usize, z: usize, shifts: Vec<i32>) -> Result<Self, CodeError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(CodeError::EmptyMatrix);
        }
        if z == 0 {
            return Err(CodeError::ZeroExpansion);
        }
        if shifts.len() != n_rows * n_cols {
            return Err(CodeError::ShapeMismatch {
                expected: n_rows * n_cols,
                found: shifts.len(),
            });
        }
        for (idx, &value) in shifts.iter().enumerate() {
            if value != ZERO_BLOCK && (value < 0 || value as usize >= z) {
                return Err(CodeError::ShiftOutOfRange {
                    row: idx / n_cols,
                    col: idx % n_cols,
                    value,
                    z,
                });
            }
        }
        for row in 0..n_rows {
            if shifts[row * n_cols..(row + 1) * n_cols]
                .iter()
                .all(|&v| v == ZERO_BLOCK)
            {
                return Err(CodeError::EmptyCheckRow(row));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            z,
            shifts,
        })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(rows: &[&[i32]], z: usize) -> Result<Self, CodeError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(CodeError::ShapeMismatch {
                expected: n_rows * n_cols,
                found: n_rows * bad.len(),
            });
        }
        let shifts = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(n_rows, n_cols, z, shifts)
    }

    /// Parses the plain-text matrix format.
    ///
    /// Line 1 holds `n_rows n_cols z`, followed by `n_rows` lines of `n_cols`
    /// whitespace-separated integers. Blank lines and lines starting with `#`
    /// are ignored, so matrix files can carry a description.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader {
            line: text.lines().count().max(1),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::MalformedHeader {
                line: header_line,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut dims = [0usize; 3];
        for (slot, token) in dims.iter_mut().zip(&fields) {
            *slot = token.parse().map_err(|_| ParseError::MalformedHeader {
                line: header_line,
                reason: format!("{token:?} is not a non-negative integer"),
            })?;
        }
        let [n_rows, n_cols, z] = dims;
        if n_rows == 0 || n_cols == 0 || z == 0 {
            return Err(ParseError::MalformedHeader {
                line: header_line,
                reason: "dimensions and z must be positive".into(),
            });
        }

        let mut shifts = Vec::with_capacity(n_rows * n_cols);
        let mut rows_seen = 0;
        for (line_no, line) in lines {
            if rows_seen == n_rows {
                rows_seen += 1;
                break;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n_cols {
                return Err(ParseError::WrongColumnCount {
                    line: line_no,
                    expected: n_cols,
                    found: tokens.len(),
                });
            }
            let start = shifts.len();
            for token in tokens {
                let value: i64 = token.parse().map_err(|_| ParseError::InvalidInteger {
                    line: line_no,
                    token: token.to_string(),
                })?;
                if value != ZERO_BLOCK as i64 && (value < 0 || value >= z as i64) {
                    return Err(ParseError::ShiftOutOfRange {
                        line: line_no,
                        value,
                        z,
                    });
                }
                shifts.push(value as i32);
            }
            if shifts[start..].iter().all(|&v| v == ZERO_BLOCK) {
                return Err(ParseError::EmptyCheckRow { line: line_no });
            }
            rows_seen += 1;
        }
        if rows_seen != n_rows {
            return Err(ParseError::WrongRowCount {
                expected: n_rows,
                found: rows_seen,
            });
        }
        Ok(Self {
            n_rows,
            n_cols,
            z,
            shifts,
        })
    }

    /// Serializes to the canonical text form: LF line endings, single spaces,
    /// no trailing whitespace.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n_rows, self.n_cols, self.z);
        for row in 0..self.n_rows {
            let line: Vec<String> = self.row(row).iter().map(i32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Expansion factor.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Raw entry at `(row, col)`; `-1` for a zero block.
    pub fn entry(&self, row: usize, col: usize) -> i32 {
        self.shifts[row * self.n_cols + col]
    }

    /// Shift at `(row, col)`, or `None` for a zero block.
    pub fn shift(&self, row: usize, col: usize) -> Option<usize> {
        let v = self.entry(row, col);
        (v != ZERO_BLOCK).then_some(v as usize)
    }

    pub fn row(&self, row: usize) -> &[i32] {
        &self.shifts[row * self.n_cols..(row + 1) * self.n_cols]
    }

    /// Non-empty `(column, shift)` pairs of a base row, by ascending column.
    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row(row)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != ZERO_BLOCK)
            .map(|(c, &v)| (c, v as usize))
    }

    /// Number of non-empty blocks in a base row (the expanded check degree).
    pub fn row_degree(&self, row: usize) -> usize {
        self.row_entries(row).count()
    }

    /// Number of non-empty blocks in each base column.
    pub fn col_degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.n_cols];
        for row in 0..self.n_rows {
            for (c, _) in self.row_entries(row) {
                degrees[c] += 1;
            }
        }
        degrees
    }

    /// Number of non-empty blocks in the whole matrix.
    pub fn total_edges(&self) -> usize {
        self.shifts.iter().filter(|&&v| v != ZERO_BLOCK).count()
    }
}

impl FromStr for BaseMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for BaseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sparse binary parity-check matrix in compressed row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    n_vars: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl ParityCheck {
    pub fn n_checks(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_edges(&self) -> usize {
        self.col_idx.len()
    }

    /// Variables adjacent to check `m`, ascending.
    pub fn row(&self, m: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[m]..self.row_ptr[m + 1]]
    }

    /// Offset of check `m`'s first edge in the flat edge order.
    pub fn row_start(&self, m: usize) -> usize {
        self.row_ptr[m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.n_checks()).map(move |m| self.row(m))
    }

    /// Degree of every variable node.
    pub fn var_degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.n_vars];
        for &n in &self.col_idx {
            degrees[n] += 1;
        }
        degrees
    }
}

/// Expands a base matrix into its binary parity-check structure.
pub fn expand(base: &BaseMatrix) -> ParityCheck {
    let z = base.z();
    let n_checks = base.n_rows() * z;
    let mut row_ptr = Vec::with_capacity(n_checks + 1);
    let mut col_idx = Vec::with_capacity(base.total_edges() * z);
    row_ptr.push(0);
    for row in 0..base.n_rows() {
        for k in 0..z {
            // Columns ascend, and each block contributes one variable inside
            // its own column range, so the row is already sorted.
            col_idx.extend(base.row_entries(row).map(|(c, a)| c * z + (k + a) % z));
            row_ptr.push(col_idx.len());
        }
    }
    ParityCheck {
        n_vars: base.n_cols() * z,
        row_ptr,
        col_idx,
    }
}

/// One non-empty base entry as seen by the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRecord {
    pub shift: usize,
    /// Position of the owning base row after rearrangement into layers.
    pub layer_slot: usize,
    pub base_col: usize,
}

/// Compact index over the non-empty base entries, grouped by layer and then by
/// row, from which every expanded edge can be addressed.
///
/// Check-to-variable messages for the expanded code are laid out in the same
/// order: base row slot, then check offset `k` within the circulant, then the
/// row's edges. [`CompactIndex::message_offset`] gives the first message of a
/// slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactIndex {
    z: usize,
    n_rows: usize,
    n_cols: usize,
    edges: Vec<EdgeRecord>,
    /// Edge range of each slot.
    slot_ptr: Vec<usize>,
    /// Slot range of each layer.
    layer_ptr: Vec<usize>,
    /// Base row held by each slot.
    slot_rows: Vec<usize>,
    col_degrees: Vec<usize>,
    total_edges: usize,
    max_row_degree: usize,
}

impl CompactIndex {
    pub fn z(&self) -> usize {
        self.z
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn block_length(&self) -> usize {
        self.n_cols * self.z
    }

    pub fn n_checks(&self) -> usize {
        self.n_rows * self.z
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn col_degrees(&self) -> &[usize] {
        &self.col_degrees
    }

    /// Non-empty base entries.
    pub fn total_edges(&self) -> usize {
        self.total_edges
    }

    /// Edges of the expanded Tanner graph.
    pub fn expanded_edges(&self) -> usize {
        self.total_edges * self.z
    }

    pub fn n_layers(&self) -> usize {
        self.layer_ptr.len() - 1
    }

    pub fn max_row_degree(&self) -> usize {
        self.max_row_degree
    }

    /// Slot range belonging to `layer`.
    pub fn layer_slots(&self, layer: usize) -> std::ops::Range<usize> {
        self.layer_ptr[layer]..self.layer_ptr[layer + 1]
    }

    /// Base row stored in `slot`.
    pub fn slot_row(&self, slot: usize) -> usize {
        self.slot_rows[slot]
    }

    /// Edge records of the row stored in `slot`.
    pub fn slot_edges(&self, slot: usize) -> &[EdgeRecord] {
        &self.edges[self.slot_ptr[slot]..self.slot_ptr[slot + 1]]
    }

    /// Index of the first check-to-variable message owned by `slot`.
    pub fn message_offset(&self, slot: usize) -> usize {
        self.slot_ptr[slot] * self.z
    }

    /// Expanded variable reached from check offset `k` through `edge`.
    #[inline]
    pub fn variable(&self, edge: &EdgeRecord, k: usize) -> usize {
        let mut v = k + edge.shift;
        if v >= self.z {
            v -= self.z;
        }
        edge.base_col * self.z + v
    }

    /// Whether `word` satisfies `syndrome` on every expanded check.
    pub fn satisfies(&self, word: &[u8], syndrome: &[u8]) -> bool {
        debug_assert_eq!(word.len(), self.block_length());
        debug_assert_eq!(syndrome.len(), self.n_checks());
        (0..self.slot_rows.len()).all(|slot| {
            let row = self.slot_rows[slot];
            let edges = self.slot_edges(slot);
            (0..self.z).all(|k| {
                let parity = edges
                    .iter()
                    .fold(0u8, |acc, e| acc ^ word[self.variable(e, k)]);
                parity == syndrome[row * self.z + k]
            })
        })
    }
}

/// Builds the compact index with rows grouped in schedule order.
pub fn build_compact_index(
    base: &BaseMatrix,
    schedule: &LayerSchedule,
) -> Result<CompactIndex, CodeError> {
    schedule.validate_for(base)?;

    let mut edges = Vec::with_capacity(base.total_edges());
    let mut slot_ptr = vec![0];
    let mut layer_ptr = vec![0];
    let mut slot_rows = Vec::with_capacity(base.n_rows());
    let mut max_row_degree = 0;
    for layer in schedule.layers() {
        for &row in layer {
            let layer_slot = slot_rows.len();
            slot_rows.push(row);
            edges.extend(base.row_entries(row).map(|(base_col, shift)| EdgeRecord {
                shift,
                layer_slot,
                base_col,
            }));
            max_row_degree = max_row_degree.max(edges.len() - slot_ptr[layer_slot]);
            slot_ptr.push(edges.len());
        }
        layer_ptr.push(slot_rows.len());
    }

    let col_degrees = base.col_degrees();
    let total_edges = edges.len();
    debug_assert_eq!(total_edges, col_degrees.iter().sum::<usize>());
    let index = CompactIndex {
        z: base.z(),
        n_rows: base.n_rows(),
        n_cols: base.n_cols(),
        edges,
        slot_ptr,
        layer_ptr,
        slot_rows,
        col_degrees,
        total_edges,
        max_row_degree,
    };
    debug_assert!(index.layers_write_disjoint_variables());
    Ok(index)
}

impl CompactIndex {
    /// Whether, inside every layer, distinct expanded checks touch disjoint
    /// variable sets. Holds for any schedule accepted by
    /// [`build_compact_index`].
    pub fn layers_write_disjoint_variables(&self) -> bool {
        let mut owner = vec![usize::MAX; self.block_length()];
        for layer in 0..self.n_layers() {
            for slot in self.layer_slots(layer) {
                for k in 0..self.z {
                    let check = self.slot_rows[slot] * self.z + k;
                    for e in self.slot_edges(slot) {
                        let n = self.variable(e, k);
                        // Tag with (layer, check) so stale owners from earlier
                        // layers never collide.
                        let tag = layer * self.n_checks() + check;
                        if owner[n] != usize::MAX && owner[n] / self.n_checks() == layer {
                            return false;
                        }
                        owner[n] = tag;
                    }
                }
            }
        }
        true
    }
}

/// Size parameters of the expanded code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeDescriptor {
    pub block_length: usize,
    pub n_checks: usize,
    pub rate: f64,
    pub total_expanded_edges: usize,
}

/// Derives the code parameters; fails unless the design rate is positive.
pub fn descriptor(base: &BaseMatrix) -> Result<CodeDescriptor, CodeError> {
    if base.n_cols() <= base.n_rows() {
        return Err(CodeError::NonPositiveRate {
            n_rows: base.n_rows(),
            n_cols: base.n_cols(),
        });
    }
    Ok(CodeDescriptor {
        block_length: base.n_cols() * base.z(),
        n_checks: base.n_rows() * base.z(),
        rate: (base.n_cols() - base.n_rows()) as f64 / base.n_cols() as f64,
        total_expanded_edges: base.total_edges() * base.z(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EQ1: &str = "3 3 4\n1 0 -1\n2 1 1\n0 2 0\n";

    #[test]
    fn parses_three_by_three_example() {
        let base = BaseMatrix::parse(EQ1).unwrap();
        assert_eq!(base.n_rows(), 3);
        assert_eq!(base.z(), 4);
        assert_eq!(base.row(0), &[1, 0, -1]);
        assert_eq!(base.row(1), &[2, 1, 1]);
        assert_eq!(base.row(2), &[0, 2, 0]);
        assert_eq!(base.to_text(), EQ1);
    }

    #[test]
    fn smallest_matrix() {
        let base = BaseMatrix::parse("1 2 1\n0 0\n").unwrap();
        let d = descriptor(&base).unwrap();
        assert_eq!(d.block_length, 2);
        assert_eq!(d.rate, 0.5);
        assert_eq!(expand(&base).row(0), &[0, 1]);
    }

    #[test]
    fn parse_errors_name_lines() {
        assert_eq!(
            BaseMatrix::parse("2 3 4\n0 1 2\n-1 -1 -1\n"),
            Err(ParseError::EmptyCheckRow { line: 3 })
        );
        assert_eq!(
            BaseMatrix::parse("1 3 4\n0 4 2\n"),
            Err(ParseError::ShiftOutOfRange {
                line: 2,
                value: 4,
                z: 4
            })
        );
        assert_eq!(
            BaseMatrix::parse("1 3 4\n0 -2 2\n"),
            Err(ParseError::ShiftOutOfRange {
                line: 2,
                value: -2,
                z: 4
            })
        );
        assert_eq!(
            BaseMatrix::parse("1 3 4\n0 1\n"),
            Err(ParseError::WrongColumnCount {
                line: 2,
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            BaseMatrix::parse("2 2 4\n0 1\n"),
            Err(ParseError::WrongRowCount {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            BaseMatrix::parse("1 2 4\n0 1\n1 1\n"),
            Err(ParseError::WrongRowCount {
                expected: 1,
                found: 2
            })
        );
        assert!(matches!(
            BaseMatrix::parse("1 2\n0 1\n"),
            Err(ParseError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            BaseMatrix::parse("1 2 x\n0 1\n"),
            Err(ParseError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            BaseMatrix::parse("1 2 0\n0 1\n"),
            Err(ParseError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            BaseMatrix::parse("1 2 3\n0 q\n"),
            Err(ParseError::InvalidInteger { line: 2, .. })
        ));
        assert!(matches!(
            BaseMatrix::parse("\n\n"),
            Err(ParseError::MissingHeader { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# demo\n\n1 2 3\n# row 0\n0 2\n";
        let base = BaseMatrix::parse(text).unwrap();
        assert_eq!(base.row(0), &[0, 2]);
        assert_eq!(base.to_text(), "1 2 3\n0 2\n");
    }

    #[test]
    fn identity_and_unit_shift_expansion() {
        let h = expand(&BaseMatrix::from_rows(&[&[0]], 3).unwrap());
        assert_eq!(h.rows().collect::<Vec<_>>(), vec![&[0][..], &[1], &[2]]);
        let h = expand(&BaseMatrix::from_rows(&[&[1]], 3).unwrap());
        assert_eq!(h.rows().collect::<Vec<_>>(), vec![&[1][..], &[2], &[0]]);
    }

    #[test]
    fn compact_index_counts() {
        let base = BaseMatrix::parse(EQ1).unwrap();
        let idx = build_compact_index(&base, &LayerSchedule::one_row_per_layer(3)).unwrap();
        assert_eq!(idx.total_edges(), 8);
        assert_eq!(idx.col_degrees(), &[3, 3, 2]);
        assert_eq!(idx.expanded_edges(), 32);
        assert_eq!(idx.n_layers(), 3);
        assert_eq!(idx.max_row_degree(), 3);

        let eq2 = BaseMatrix::from_rows(&[&[1, -1, -1], &[-1, 2, 1], &[2, 0, 0]], 4).unwrap();
        let idx = build_compact_index(&eq2, &LayerSchedule::greedy(&eq2)).unwrap();
        assert_eq!(idx.total_edges(), 6);
        assert_eq!(idx.n_layers(), 2);
        let slots: Vec<usize> = idx.edges().iter().map(|e| e.layer_slot).collect();
        assert_eq!(slots, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(idx.slot_row(2), 2);
    }

    #[test]
    fn compact_index_rejects_bad_schedules() {
        let base = BaseMatrix::parse(EQ1).unwrap();
        assert_eq!(
            build_compact_index(&base, &LayerSchedule::from_layers(vec![])),
            Err(CodeError::EmptySchedule)
        );
        assert_eq!(
            build_compact_index(
                &base,
                &LayerSchedule::from_layers(vec![vec![0], vec![1], vec![7]])
            ),
            Err(CodeError::ScheduleRowOutOfRange { row: 7, n_rows: 3 })
        );
        assert!(matches!(
            build_compact_index(&base, &LayerSchedule::from_layers(vec![vec![0, 1], vec![2]])),
            Err(CodeError::LayerConflict { .. })
        ));
    }

    #[test]
    fn descriptors() {
        let square = BaseMatrix::parse(EQ1).unwrap();
        assert!(matches!(
            descriptor(&square),
            Err(CodeError::NonPositiveRate { .. })
        ));

        let shifts = (0..32).map(|i| i * 7 % 100).collect();
        let fig = BaseMatrix::new(4, 8, 100, shifts).unwrap();
        let d = descriptor(&fig).unwrap();
        assert_eq!(d.block_length, 800);
        assert_eq!(d.n_checks, 400);
        assert_eq!(d.rate, 0.5);
        assert_eq!(d.total_expanded_edges, 3200);
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(BaseMatrix::new(0, 2, 1, vec![]), Err(CodeError::EmptyMatrix));
        assert_eq!(BaseMatrix::new(1, 2, 0, vec![0, 0]), Err(CodeError::ZeroExpansion));
        assert_eq!(
            BaseMatrix::new(1, 2, 2, vec![0, 2]),
            Err(CodeError::ShiftOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                z: 2
            })
        );
        assert_eq!(
            BaseMatrix::new(2, 2, 2, vec![0, 1, -1, -1]),
            Err(CodeError::EmptyCheckRow(1))
        );
    }
}
