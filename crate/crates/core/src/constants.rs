//! High-precision reference values (30-digit quadrature), used as oracles.

/// `∫_{-1}^{1} exp(−1/(1−t²)) dt`.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_437_823;

/// `C = 1 / BUMP_MASS`, the bump normalisation.
pub const BUMP_NORMALIZATION: f64 = 2.252_283_621_043_581_010_5;

/// `C·e^{-1}`, the bump at the origin.
pub const BUMP_AT_ZERO: f64 = 0.828_568_839_869_105_151_66;

/// `‖M_k ∗ 1_{[0,1]} − 1_{[0,1]}‖₂` for `k = 2, 4, 8, 16, 32`, from the
/// bump's cumulative distribution integrated on both boundary layers.
pub const INDICATOR_DENSITY_L2: [(f64, f64); 5] = [
    (2.0, 0.325_143_072_825_547_02),
    (4.0, 0.229_910_871_650_775_77),
    (8.0, 0.162_571_536_412_773_51),
    (16.0, 0.114_955_435_825_387_88),
    (32.0, 0.081_285_768_206_386_756),
];

/// The same for `sin(πx)·1_{[0,1]}`.
pub const SINE_DENSITY_L2: [(f64, f64); 5] = [
    (2.0, 0.163_787_999_232_695),
    (4.0, 0.056_766_707_806_712),
    (8.0, 0.019_004_596_642_959),
    (16.0, 0.006_440_909_518_893),
    (32.0, 0.002_219_288_659_638),
];
