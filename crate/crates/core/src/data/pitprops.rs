//! The Pit Props benchmark: correlations between 13 physical properties of
//! 180 pit props (Jeffers, 1967).

use crate::linalg::SymmetricMatrix;

pub const PITPROPS_NAMES: [&str; 13] = [
    "topdiam", "length", "moist", "testsg", "ovensg", "ringtop", "ringbut", "bowmax", "bowdist",
    "whorls", "clear", "knots", "diaknot",
];

#[rustfmt::skip]
const PITPROPS: [[f64; 13]; 13] = [
    [ 1.000,  0.954,  0.364,  0.342, -0.129,  0.313,  0.496,  0.424,  0.592,  0.545,  0.084, -0.019,  0.134],
    [ 0.954,  1.000,  0.297,  0.284, -0.118,  0.291,  0.503,  0.419,  0.648,  0.569,  0.076, -0.036,  0.144],
    [ 0.364,  0.297,  1.000,  0.882, -0.148,  0.153, -0.029, -0.054,  0.125, -0.081,  0.162,  0.220,  0.126],
    [ 0.342,  0.284,  0.882,  1.000,  0.220,  0.381,  0.174, -0.059,  0.137, -0.014,  0.097,  0.169,  0.015],
    [-0.129, -0.118, -0.148,  0.220,  1.000,  0.364,  0.296,  0.004, -0.039,  0.037, -0.091, -0.145, -0.208],
    [ 0.313,  0.291,  0.153,  0.381,  0.364,  1.000,  0.813,  0.090,  0.211,  0.274, -0.036,  0.024, -0.329],
    [ 0.496,  0.503, -0.029,  0.174,  0.296,  0.813,  1.000,  0.372,  0.465,  0.679, -0.113, -0.232, -0.424],
    [ 0.424,  0.419, -0.054, -0.059,  0.004,  0.090,  0.372,  1.000,  0.482,  0.557,  0.061, -0.357, -0.202],
    [ 0.592,  0.648,  0.125,  0.137, -0.039,  0.211,  0.465,  0.482,  1.000,  0.526,  0.085, -0.127, -0.076],
    [ 0.545,  0.569, -0.081, -0.014,  0.037,  0.274,  0.679,  0.557,  0.526,  1.000, -0.319, -0.368, -0.291],
    [ 0.084,  0.076,  0.162,  0.097, -0.091, -0.036, -0.113,  0.061,  0.085, -0.319,  1.000,  0.029,  0.007],
    [-0.019, -0.036,  0.220,  0.169, -0.145,  0.024, -0.232, -0.357, -0.127, -0.368,  0.029,  1.000,  0.184],
    [ 0.134,  0.144,  0.126,  0.015, -0.208, -0.329, -0.424, -0.202, -0.076, -0.291,  0.007,  0.184,  1.000],
];

/// The 13x13 Pit Props correlation matrix, variables ordered as [`PITPROPS_NAMES`].
pub fn pit_props() -> SymmetricMatrix {
    SymmetricMatrix::from_rows(&PITPROPS, 0.0).expect("constant is symmetric")
}
