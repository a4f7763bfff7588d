/// Maximum-weight one-to-one assignment between rows and columns.
///
/// Rectangular inputs are padded with zero-weight dummies. Returns the total
/// weight and, for each row, the matched column if it is a real one.
pub fn max_weight_matching(weights: &[Vec<i64>]) -> (i64, Vec<Option<usize>>) {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let size = rows.max(cols);
    if size == 0 {
        return (0, Vec::new());
    }
    let top = weights.iter().flatten().copied().max().unwrap_or(0).max(0);
    // Minimize top - w; padding cells cost `top`.
    let cost = |i: usize, j: usize| -> i64 {
        if i < rows && j < cols {
            top - weights[i][j]
        } else {
            top
        }
    };

    // Shortest augmenting path with potentials; 1-based with a virtual column 0.
    let mut u = vec![0i64; size + 1];
    let mut v = vec![0i64; size + 1];
    let mut col_owner = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        col_owner[0] = i;
        let mut j0 = 0;
        let mut min_v = vec![i64::MAX; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=size {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < min_v[j] {
                    min_v[j] = reduced;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_match = vec![None; rows];
    let mut total = 0;
    for j in 1..=size {
        let i = col_owner[j];
        if i >= 1 && i <= rows && j <= cols {
            row_match[i - 1] = Some(j - 1);
            total += weights[i - 1][j - 1];
        }
    }
    (total, row_match)
}
