//! Illustrative base matrices. None of them is a published production code.

use crate::qc_code::BaseMatrix;

/// 4x8 fully populated base, z = 32: n = 256, rate 1/2, no 4-cycles.
pub const DESK_4X8_Z32: &str = include_str!("../matrices/desk_4x8_z32.txt");

/// (3,6)-regular 6x12 base, z = 32: n = 384, rate 1/2. Rows pair up into
/// three layers of two.
pub const DESK_6X12_Z32: &str = include_str!("../matrices/desk_6x12_z32.txt");

/// 4x8 base with zero blocks, z = 100: n = 800, rate 1/2.
pub const DEMO_4X8_Z100: &str = include_str!("../matrices/demo_4x8_z100.txt");

pub fn desk_4x8_z32() -> BaseMatrix {
    BaseMatrix::parse(DESK_4X8_Z32).expect("bundled matrix is valid")
}

pub fn desk_6x12_z32() -> BaseMatrix {
    BaseMatrix::parse(DESK_6X12_Z32).expect("bundled matrix is valid")
}

pub fn demo_4x8_z100() -> BaseMatrix {
    BaseMatrix::parse(DEMO_4X8_Z100).expect("bundled matrix is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer_schedule::LayerSchedule;

    #[test]
    fn bundled_matrices_parse() {
        assert_eq!(desk_4x8_z32().z(), 32);
        assert_eq!(LayerSchedule::greedy(&desk_4x8_z32()).n_layers(), 4);
        assert_eq!(LayerSchedule::greedy(&desk_6x12_z32()).n_layers(), 3);
        assert_eq!(LayerSchedule::greedy(&demo_4x8_z100()).n_layers(), 2);
    }
}
