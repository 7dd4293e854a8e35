//! Exact integer linear algebra for the small matrices arising from
//! abelianizations: rational rank via fraction-free elimination and integer
//! kernel bases via Hermite-style row reduction.

/// Rank over the rationals, computed by Bareiss fraction-free elimination.
/// No floating point anywhere.
pub(crate) fn rank(matrix: &[Vec<i64>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    let mut prev = 1i128;
    let mut row = 0;
    let mut col = 0;
    while row < rows && col < cols {
        // Pivot search over the remaining submatrix columns.
        let pivot = (row..rows).find(|&i| m[i][col] != 0);
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                m[i][j] = (m[i][j] * m[row][col] - m[i][col] * m[row][j]) / prev;
            }
            m[i][col] = 0;
        }
        prev = m[row][col];
        rank += 1;
        row += 1;
        col += 1;
    }
    rank
}

/// Basis of the integer kernel `{v : matrix * v = 0}` of an `n x m` matrix,
/// acting on column vectors of length `m`.
///
/// Row-reduces `[matrixᵀ | I]` with unimodular operations; rows whose left
/// part vanishes carry a lattice basis of the kernel. Rows of a unimodular
/// matrix are primitive vectors, so no content division is needed.
pub(crate) fn kernel_basis(matrix: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    let n = matrix.len();
    // aug[i] = [B row | identity row], B = matrixᵀ (m x n).
    let mut aug: Vec<Vec<i128>> = (0..m)
        .map(|i| {
            let mut row: Vec<i128> = (0..n).map(|j| matrix[j][i] as i128).collect();
            row.extend((0..m).map(|j| if j == i { 1 } else { 0 }));
            row
        })
        .collect();

    let mut r = 0;
    for c in 0..n {
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..m {
                if aug[i][c] != 0
                    && pivot.is_none_or(|p| aug[i][c].abs() < aug[p][c].abs())
                {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { break };
            aug.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if aug[i][c] != 0 {
                    let q = div_round(aug[i][c], aug[r][c]);
                    for j in 0..n + m {
                        aug[i][j] -= q * aug[r][j];
                    }
                    if aug[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }

    aug[r..]
        .iter()
        .map(|row| {
            debug_assert!(row[..n].iter().all(|&x| x == 0));
            row[n..]
                .iter()
                .map(|&x| i64::try_from(x).expect("kernel entry overflow"))
                .collect()
        })
        .collect()
}

/// Rounded division, keeps remainders small during the reduction.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let rem = a - q * b;
    if 2 * rem.abs() > b.abs() {
        q + if (rem > 0) == (b > 0) { 1 } else { -1 }
    } else {
        q
    }
}
