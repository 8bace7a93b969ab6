use nalgebra::DMatrix;

use super::SkewMatrix;

/// Largest size evaluated by direct expansion.
const EXPANSION_LIMIT: usize = 8;

/// Pfaffian of a skew matrix.
///
/// Sizes up to 8 use the row expansion `Pf(A) = sum_j (-1)^(j+1) a_{1j} Pf(A_{1j,1j})`,
/// larger ones fall back to [`pfaffian_by_elimination`]. The empty matrix has
/// Pfaffian 1.
pub fn pfaffian(a: &SkewMatrix) -> f64 {
    if a.size() <= EXPANSION_LIMIT {
        let idx: Vec<usize> = (0..a.size()).collect();
        expand(a.as_matrix(), &idx)
    } else {
        pfaffian_by_elimination(a)
    }
}

fn expand(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    let Some((&first, rest)) = idx.split_first() else {
        return 1.0;
    };
    let mut sum = 0.0;
    let mut minor = Vec::with_capacity(rest.len().saturating_sub(1));
    for (pos, &j) in rest.iter().enumerate() {
        let entry = a[(first, j)];
        if entry == 0.0 {
            continue;
        }
        minor.clear();
        minor.extend(rest.iter().copied().filter(|&i| i != j));
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * entry * expand(a, &minor);
    }
    sum
}

/// Pfaffian by skew Gaussian elimination with partial pivoting (Parlett-Reid).
pub fn pfaffian_by_elimination(a: &SkewMatrix) -> f64 {
    let n = a.size();
    let mut m = a.as_matrix().clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let (offset, _) = m
            .view((k + 1, k), (n - k - 1, 1))
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, v)| if v.abs() > best.1 { (i, v.abs()) } else { best });
        let pivot = k + 1 + offset;
        if pivot != k + 1 {
            m.swap_rows(k + 1, pivot);
            m.swap_columns(k + 1, pivot);
            pf = -pf;
        }
        let head = m[(k, k + 1)];
        if head == 0.0 {
            return 0.0;
        }
        pf *= head;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / head).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matnum::block_skew_diagonal;

    #[test]
    fn two_by_two_is_the_entry() {
        assert_eq!(pfaffian(&block_skew_diagonal(&[3.0])), 3.0);
    }

    #[test]
    fn block_diagonal_is_product() {
        assert_eq!(pfaffian(&block_skew_diagonal(&[1.0, 2.0, 3.0])), 6.0);
        assert_eq!(pfaffian_by_elimination(&block_skew_diagonal(&[1.0, 2.0, 3.0])), 6.0);
    }

    #[test]
    fn empty_matrix() {
        let a = SkewMatrix::new(DMatrix::zeros(0, 0)).unwrap();
        assert_eq!(pfaffian(&a), 1.0);
    }

    #[test]
    fn four_by_four_closed_form() {
        // Pf = a01 a23 - a02 a13 + a03 a12
        let v = [1.5, -0.3, 2.0, 0.7, -1.1, 0.4];
        let mut m = DMatrix::zeros(4, 4);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (&(i, j), &x) in pairs.iter().zip(&v) {
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
        let a = SkewMatrix::new(m).unwrap();
        let expected = v[0] * v[5] - v[1] * v[4] + v[2] * v[3];
        assert!((pfaffian(&a) - expected).abs() < 1e-14);
        assert!((pfaffian_by_elimination(&a) - expected).abs() < 1e-14);
    }
}
