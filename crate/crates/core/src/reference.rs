//! Reference integer tables of Gaussian TGD operators, used as regression
//! targets. Values are ratios; overall scale is not meaningful.

/// First-order `N = 5`, weights at offsets `-5..=-1`.
pub const FIRST_N5: [f64; 5] = [1.0, 4.0, 12.0, 25.0, 40.0];

/// First-order `N = 7`, weights at offsets `-7..=-1`.
pub const FIRST_N7: [f64; 7] = [1.0, 3.0, 8.0, 18.0, 32.0, 50.0, 64.0];

/// Orthogonal first-order `x` operator, `N = 6`: columns `-6..=-1` of rows
/// `y = -6..=0`. Rows mirror in `y`, columns are antisymmetric in `x`.
pub const ORTHOGONAL_X_N6_LEFT: [[f64; 6]; 7] = [
    [1.0, 3.0, 7.0, 16.0, 27.0, 37.0],
    [3.0, 11.0, 28.0, 58.0, 98.0, 133.0],
    [10.0, 33.0, 84.0, 174.0, 292.0, 398.0],
    [26.0, 83.0, 211.0, 435.0, 729.0, 994.0],
    [56.0, 174.0, 442.0, 912.0, 1529.0, 2085.0],
    [99.0, 311.0, 788.0, 1625.0, 2725.0, 3715.0],
    [153.0, 478.0, 1211.0, 2496.0, 4184.0, 5705.0],
];

/// First-order operator along the 45 degree diagonal, `N = 6`, displayed
/// with `y` pointing up (row 0 is `y = +6`). Antisymmetric under transpose.
pub const DIAGONAL_N6: [[f64; 13]; 13] = [
    [0.0, -1.0, -2.0, -6.0, -11.0, -17.0, -21.0, -20.0, -18.0, -12.0, -7.0, -3.0, -1.0],
    [1.0, 0.0, -9.0, -21.0, -39.0, -60.0, -75.0, -78.0, -67.0, -48.0, -28.0, -14.0, -3.0],
    [2.0, 9.0, 0.0, -59.0, -111.0, -172.0, -220.0, -233.0, -204.0, -150.0, -92.0, -28.0, -7.0],
    [6.0, 21.0, 59.0, 0.0, -261.0, -410.0, -532.0, -575.0, -518.0, -392.0, -150.0, -48.0, -12.0],
    [11.0, 39.0, 111.0, 261.0, 0.0, -805.0, -1069.0, -1184.0, -1101.0, -518.0, -204.0, -67.0, -18.0],
    [17.0, 60.0, 172.0, 410.0, 805.0, 0.0, -1791.0, -2047.0, -1184.0, -575.0, -233.0, -78.0, -20.0],
    [21.0, 75.0, 220.0, 532.0, 1069.0, 1791.0, 0.0, -1791.0, -1069.0, -532.0, -220.0, -75.0, -21.0],
    [20.0, 78.0, 233.0, 575.0, 1184.0, 2047.0, 1791.0, 0.0, -805.0, -410.0, -172.0, -60.0, -17.0],
    [18.0, 67.0, 204.0, 518.0, 1101.0, 1184.0, 1069.0, 805.0, 0.0, -261.0, -111.0, -39.0, -11.0],
    [12.0, 48.0, 150.0, 392.0, 518.0, 575.0, 532.0, 410.0, 261.0, 0.0, -59.0, -21.0, -6.0],
    [7.0, 28.0, 92.0, 150.0, 204.0, 233.0, 220.0, 172.0, 111.0, 59.0, 0.0, -9.0, -2.0],
    [3.0, 14.0, 28.0, 48.0, 67.0, 78.0, 75.0, 60.0, 39.0, 21.0, 9.0, 0.0, -1.0],
    [1.0, 3.0, 7.0, 12.0, 18.0, 20.0, 21.0, 17.0, 11.0, 6.0, 2.0, 1.0, 0.0],
];

/// LoT, `N = 6`: the quadrant `y, x = -6..=0`, center last. Symmetric.
pub const LOT_N6_QUADRANT: [[f64; 7]; 7] = [
    [1.0, 3.0, 7.0, 16.0, 27.0, 37.0, 41.0],
    [3.0, 9.0, 24.0, 50.0, 84.0, 115.0, 128.0],
    [7.0, 24.0, 62.0, 128.0, 215.0, 293.0, 325.0],
    [16.0, 50.0, 128.0, 264.0, 443.0, 604.0, 670.0],
    [27.0, 84.0, 215.0, 443.0, 743.0, 1013.0, 1124.0],
    [37.0, 115.0, 293.0, 604.0, 1013.0, 1382.0, 1532.0],
    [41.0, 128.0, 325.0, 670.0, 1124.0, 1532.0, -49596.0],
];

/// Full `13 x 13` orthogonal `x` table in row-major order, rows `y = -6..=6`.
pub fn orthogonal_x_n6() -> Vec<f64> {
    let mut out = Vec::with_capacity(169);
    for r in 0..13usize {
        let row = &ORTHOGONAL_X_N6_LEFT[r.min(12 - r)];
        for c in 0..13usize {
            out.push(match c {
                0..=5 => row[c],
                6 => 0.0,
                _ => -row[12 - c],
            });
        }
    }
    out
}

/// Full `13 x 13` LoT table in row-major order.
pub fn lot_n6() -> Vec<f64> {
    let mut out = Vec::with_capacity(169);
    for r in 0..13usize {
        for c in 0..13usize {
            out.push(LOT_N6_QUADRANT[r.min(12 - r)][c.min(12 - c)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_table_is_antisymmetric() {
        for (i, row) in DIAGONAL_N6.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, -DIAGONAL_N6[j][i]);
            }
        }
    }

    #[test]
    fn expanded_tables() {
        let o = orthogonal_x_n6();
        assert_eq!(o[6 * 13 + 5], 5705.0);
        assert_eq!(o[6 * 13 + 7], -5705.0);
        assert_eq!(o[12 * 13 + 12], -1.0);
        let l = lot_n6();
        assert_eq!(l[6 * 13 + 6], -49596.0);
        assert_eq!(l[12 * 13], 1.0);
        assert_eq!(l[3 * 13 + 9], 264.0);
    }
}
