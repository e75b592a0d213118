//! 2x2 linear algebra: complete-pivoting solve, closed-form singular values,
//! and the column-normalized condition number used to report mode-matrix
//! conditioning.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmallMatError {
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("column {0} is zero; normalized condition number undefined")]
    ZeroColumn(usize),
    #[error("matrix entries must be finite")]
    NonFinite,
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwo {
    pub entries: [[f64; 2]; 2],
}

impl TwoByTwo {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        TwoByTwo { entries: [[a11, a12], [a21, a22]] }
    }

    pub fn det(&self) -> f64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn column(&self, j: usize) -> [f64; 2] {
        [self.entries[0][j], self.entries[1][j]]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|v| v.is_finite())
    }
}

/// Solves `A x = b` by Gaussian elimination with complete pivoting.
pub fn solve2(a: &TwoByTwo, b: [f64; 2]) -> Result<[f64; 2], SmallMatError> {
    if !a.is_finite() {
        return Err(SmallMatError::NonFinite);
    }
    let e = &a.entries;
    // Locate the largest-magnitude entry.
    let (mut pi, mut pj, mut pmax) = (0usize, 0usize, 0.0f64);
    for i in 0..2 {
        for j in 0..2 {
            if e[i][j].abs() > pmax {
                pmax = e[i][j].abs();
                pi = i;
                pj = j;
            }
        }
    }
    if pmax == 0.0 {
        return Err(SmallMatError::Singular);
    }
    let (qi, qj) = (1 - pi, 1 - pj);
    // After the row/column permutation the system is
    //   [ e[pi][pj] e[pi][qj] ] [ y0 ]   [ b[pi] ]
    //   [ e[qi][pj] e[qi][qj] ] [ y1 ] = [ b[qi] ]
    // with x[pj] = y0, x[qj] = y1.
    let m = e[qi][pj] / e[pi][pj];
    let s = e[qi][qj] - m * e[pi][qj];
    if s == 0.0 {
        return Err(SmallMatError::Singular);
    }
    let y1 = (b[qi] - m * b[pi]) / s;
    let y0 = (b[pi] - e[pi][qj] * y1) / e[pi][pj];
    let mut x = [0.0; 2];
    x[pj] = y0;
    x[qj] = y1;
    Ok(x)
}

/// Singular values `(sigma_max, sigma_min)` by the rotation closed form,
/// which stays accurate even when the matrix is nearly rank-one.
pub fn svd2(a: &TwoByTwo) -> (f64, f64) {
    let [[p, q], [r, s]] = a.entries;
    let e = 0.5 * (p + s);
    let f = 0.5 * (p - s);
    let g = 0.5 * (q + r);
    let h = 0.5 * (q - r);
    let r1 = e.hypot(h);
    let r2 = f.hypot(g);
    (r1 + r2, (r1 - r2).abs())
}

/// `kappa(A) = sigma_max / sigma_min`.
pub fn cond2(a: &TwoByTwo) -> f64 {
    let (smax, smin) = svd2(a);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Condition number of the column-normalized matrix `A D`,
/// `D_ii = 1 / ||a_i||`. For unit columns with cosine `c` this equals
/// `sqrt((1+c)/(1-c))`, evaluated here as `(1+c)/|a1 x a2|` to avoid the
/// `1 - c` cancellation. Returns infinity when the columns are numerically
/// parallel.
pub fn cond2_normalized(a: &TwoByTwo) -> Result<f64, SmallMatError> {
    if !a.is_finite() {
        return Err(SmallMatError::NonFinite);
    }
    let c1 = a.column(0);
    let c2 = a.column(1);
    let n1 = c1[0].hypot(c1[1]);
    let n2 = c2[0].hypot(c2[1]);
    if n1 == 0.0 {
        return Err(SmallMatError::ZeroColumn(0));
    }
    if n2 == 0.0 {
        return Err(SmallMatError::ZeroColumn(1));
    }
    Ok(cond2_unit_columns(
        [c1[0] / n1, c1[1] / n1],
        [c2[0] / n2, c2[1] / n2],
    ))
}

/// Normalized condition number from already unit-length columns.
pub fn cond2_unit_columns(u1: [f64; 2], u2: [f64; 2]) -> f64 {
    let dot = (u1[0] * u2[0] + u1[1] * u2[1]).abs();
    let cross = (u1[0] * u2[1] - u1[1] * u2[0]).abs();
    if cross == 0.0 {
        f64::INFINITY
    } else {
        (1.0 + dot) / cross
    }
}
