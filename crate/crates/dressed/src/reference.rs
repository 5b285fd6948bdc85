//! Published reference values for d = 3 with the built-in fiducial,
//! rounded to three decimals, plus the small worked examples.

use dressed_core::{Complex64, LabelSubset, Operator, StateSet};

/// One reference number with its position: table, row name, column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub table: u8,
    pub row: &'static str,
    pub column: &'static str,
    pub value: f64,
}

pub const OPERATOR_NAMES: [&str; 4] = ["θ1", "θ2", "θ3", "θ4"];

pub const TABLE1_S: [[f64; 9]; 4] = [
    [0.054, 0.209, 0.070, 0.054, 0.209, 0.070, 0.054, 0.209, 0.070],
    [0.083, 0.054, 0.155, 0.089, 0.084, 0.241, 0.057, 0.081, 0.156],
    [0.287, 0.153, 0.224, 0.260, 0.135, 0.284, 0.224, 0.213, 0.219],
    [1.106, 1.481, 1.604, 1.390, 0.996, 1.210, 1.551, 1.058, 1.601],
];

pub const TABLE1_INDEX: [&str; 4] = [
    "({2,5,8},{3,6,9},{1,4,7})",
    "(6,9,3,4,5,1,8,7,2)",
    "(1,6,4,{3,7},9,8,2,5)",
    "(3,9,7,2,4,6,1,8,5)",
];

pub const TABLE2_Q: [[f64; 9]; 4] = [
    [0.019, 0.276, 0.038, 0.019, 0.276, 0.038, 0.019, 0.276, 0.038],
    [0.063, 0.016, 0.184, 0.068, 0.068, 0.333, 0.016, 0.063, 0.184],
    [0.333, 0.105, 0.226, 0.282, 0.072, 0.333, 0.222, 0.208, 0.215],
    [0.933, 1.609, 1.781, 1.429, 0.776, 1.120, 1.693, 0.842, 1.813],
];

pub const TABLE2_INDEX: [&str; 4] = [
    "({2,5,8},{3,6,9},{1,4,7})",
    "(6,{9,3},{4,5},{1,8},{7,2})",
    "({1,6},4,3,7,9,8,2,5)",
    "(9,3,7,2,4,6,1,8,5)",
];

#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub lambda: f64,
    pub s_index: &'static str,
    pub q_index: &'static str,
    pub overlap: f64,
    pub eigenvalues: [f64; 3],
}

pub const REFERENCE_LAMBDA: f64 = -0.75;
pub const LAMBDA_GRID: [f64; 7] = [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75];

/// Some rows list only eight labels; they are compared on those labels.
pub const TABLE3: [SweepRow; 7] = [
    SweepRow {
        lambda: -0.75,
        s_index: "(4,2,7,1,5,8,9,3,6)",
        q_index: "(4,2,7,1,5,8,9,3,6)",
        overlap: 1.0,
        eigenvalues: [3.21, 10.02, 14.25],
    },
    SweepRow {
        lambda: -0.5,
        s_index: "(4,7,2,1,5,8,9,3,6)",
        q_index: "(4,7,2,1,5,8,9,3,6)",
        overlap: 0.998,
        eigenvalues: [4.67, 10.60, 13.71],
    },
    SweepRow {
        lambda: -0.25,
        s_index: "(7,4,1,2,8,5,9,3)",
        q_index: "(7,4,1,2,8,5,9,3)",
        overlap: 0.993,
        eigenvalues: [6.09, 11.16, 13.24],
    },
    SweepRow {
        lambda: 0.0,
        s_index: "(7,1,4,2,8,5,9,3)",
        q_index: "(7,1,4,2,8,5,9,3)",
        overlap: 0.978,
        eigenvalues: [7.43, 11.56, 13.00],
    },
    SweepRow {
        lambda: 0.25,
        s_index: "(7,1,4,8,2,5,9,3)",
        q_index: "(1,7,4,8,2,5,9,3)",
        overlap: 0.943,
        eigenvalues: [8.66, 11.51, 13.32],
    },
    SweepRow {
        lambda: 0.5,
        s_index: "(1,7,8,5,4,2,9,3)",
        q_index: "(1,7,8,5,4,2,9,3)",
        overlap: 0.838,
        eigenvalues: [9.62, 11.29, 14.08],
    },
    SweepRow {
        lambda: 0.75,
        s_index: "(8,1,7,5,6,4,9,2,3)",
        q_index: "(8,1,7,5,6,4,9,2,3)",
        overlap: 0.535,
        eigenvalues: [9.90, 11.51, 15.08],
    },
];

/// Eigenvalues of `σ(1)`, descending.
pub const SIGMA1_EIGENVALUES: [f64; 3] = [0.726, 0.149, 0.125];

/// `σ(1)` in the position basis, rounded.
pub fn sigma1() -> Operator {
    let c = Complex64::new;
    Operator::from_rows(&[
        &[c(0.162, 0.0), c(-0.040, -0.038), c(0.049, 0.117)],
        &[c(-0.040, 0.038), c(0.210, 0.0), c(-0.164, -0.065)],
        &[c(0.049, -0.117), c(-0.164, 0.065), c(0.628, 0.0)],
    ])
    .expect("finite entries")
}

const COLUMNS: [&str; 9] = ["1", "2", "3", "4", "5", "6", "7", "8", "9"];

/// Every value of tables 1 and 2 as tagged cells.
pub fn value_cells() -> Vec<Cell> {
    let mut out = Vec::with_capacity(72);
    for (table, data) in [(1u8, &TABLE1_S), (2, &TABLE2_Q)] {
        for (row, values) in data.iter().enumerate() {
            for (col, v) in values.iter().enumerate() {
                out.push(Cell {
                    table,
                    row: OPERATOR_NAMES[row],
                    column: COLUMNS[col],
                    value: *v,
                });
            }
        }
    }
    out
}

/// `θ1 = |X;0⟩⟨X;0|`, `θ2 = Π(6)`, `θ3 = Π(1,6)`, and a fixed `θ4`.
pub fn operators<S: StateSet>(family: &S) -> dressed_core::Result<[Operator; 4]> {
    let c = Complex64::new;
    let d = family.dim();
    let mut e0 = vec![c(0.0, 0.0); d];
    e0[0] = c(1.0, 0.0);
    let theta1 = Operator::rank_one_projector(&e0);
    let theta2 = Operator::rank_one_projector(family.state(6));
    let theta3 = dressed_core::aggregation::projector(family, LabelSubset::from_labels(&[1, 6])?)?.matrix;
    let theta4 = Operator::from_rows(&[
        &[c(3.0, 0.0), c(1.0, -1.0), c(-2.0, 0.0)],
        &[c(1.0, 1.0), c(5.0, 0.0), c(2.0, -1.0)],
        &[c(-2.0, 0.0), c(2.0, 1.0), c(4.0, 0.0)],
    ])?;
    Ok([theta1, theta2, theta3, theta4])
}

/// Coefficient matrices `M0`, `M1` of `θ(λ) = M0 + λ M1`.
pub fn hamiltonian_terms() -> [Operator; 2] {
    let c = Complex64::new;
    let m0 = Operator::from_rows(&[
        &[c(11.0, 0.0), c(1.0, -1.0), c(0.0, 0.0)],
        &[c(1.0, 1.0), c(8.0, 0.0), c(0.0, 0.0)],
        &[c(0.0, 0.0), c(0.0, 0.0), c(13.0, 0.0)],
    ])
    .expect("finite entries");
    let m1 = Operator::from_rows(&[
        &[c(2.0, 0.0), c(-1.0, 2.0), c(3.0, 0.0)],
        &[c(-1.0, -2.0), c(4.0, 0.0), c(-1.0, 0.0)],
        &[c(3.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
    ])
    .expect("finite entries");
    [m0, m1]
}

pub fn hamiltonian(lambda: f64) -> Operator {
    let [m0, m1] = hamiltonian_terms();
    &m0 + &m1.scale(lambda)
}

/// The three-worker game, listed over `{1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}`.
pub const WORKERS: [(&[usize], f64); 7] = [
    (&[1], 1.0),
    (&[2], 0.0),
    (&[3], 2.0),
    (&[1, 2], 4.0),
    (&[1, 3], 3.0),
    (&[2, 3], 6.0),
    (&[1, 2, 3], 8.0),
];
pub const WORKERS_MOBIUS: [f64; 7] = [1.0, 0.0, 2.0, 3.0, 0.0, 4.0, -2.0];
pub const WORKERS_SHAPLEY: [f64; 3] = [11.0 / 6.0, 17.0 / 6.0, 10.0 / 3.0];

pub fn workers_game_text() -> String {
    let mut s = String::from("# three workers\n");
    for (labels, v) in WORKERS {
        let l: Vec<String> = labels.iter().map(ToString::to_string).collect();
        s.push_str(&format!("{}: {}\n", l.join(","), v));
    }
    s
}

/// Total sets in two dimensions with their dressed states.
pub struct TotalSetExample {
    pub vectors: Vec<Vec<Complex64>>,
    pub sigmas: Vec<Operator>,
}

fn real2(scale: f64, m: [[f64; 2]; 2]) -> Operator {
    let c = |x: f64| Complex64::new(x * scale, 0.0);
    Operator::from_rows(&[&[c(m[0][0]), c(m[0][1])], &[c(m[1][0]), c(m[1][1])]]).expect("finite entries")
}

pub fn total_set_examples() -> [TotalSetExample; 2] {
    let c = |x: f64| Complex64::new(x, 0.0);
    let s5 = 5f64.sqrt();
    let tilted = vec![c(1.0 / s5), c(2.0 / s5)];
    [
        TotalSetExample {
            vectors: vec![vec![c(1.0), c(0.0)], tilted.clone()],
            sigmas: vec![
                real2(0.1, [[9.0, -2.0], [-2.0, 1.0]]),
                real2(0.1, [[1.0, 2.0], [2.0, 9.0]]),
            ],
        },
        TotalSetExample {
            vectors: vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)], tilted],
            sigmas: vec![
                real2(0.05, [[19.0, -2.0], [-2.0, 1.0]]),
                real2(0.05, [[4.0, -2.0], [-2.0, 16.0]]),
                real2(0.05, [[7.0, 4.0], [4.0, 13.0]]),
            ],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use dressed_core::LocationIndex;

    #[test]
    fn indices_parse() {
        for s in TABLE1_INDEX.iter().chain(&TABLE2_INDEX) {
            assert_eq!(s.parse::<LocationIndex>().unwrap().len(), 9, "{s}");
        }
        for r in TABLE3 {
            assert!(r.s_index.parse::<LocationIndex>().is_ok());
            assert!(r.q_index.parse::<LocationIndex>().is_ok());
        }
    }

    #[test]
    fn rows_sum_to_traces() {
        // both tables resolve the trace: 1, 1, 2, 12; the θ2 Q row sums to 0.995
        for (k, t) in [1.0, 1.0, 2.0, 12.0].iter().enumerate() {
            assert!((TABLE1_S[k].iter().sum::<f64>() - t).abs() < 1e-2);
            assert!((TABLE2_Q[k].iter().sum::<f64>() - t).abs() < 1e-2);
        }
        assert_eq!(value_cells().len(), 72);
    }

    #[test]
    fn hamiltonian_matches_entries() {
        let h = hamiltonian(0.5);
        assert_eq!(h[(0, 1)], Complex64::new(0.5, 0.0));
        assert_eq!(h[(1, 0)], Complex64::new(0.5, 0.0));
        assert_eq!(h[(0, 0)].re, 12.0);
        assert_eq!(h[(2, 2)].re, 13.0);
        assert!(h.is_hermitian(0.0));
    }
}
