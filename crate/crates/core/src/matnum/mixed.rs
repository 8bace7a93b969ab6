use nalgebra::DMatrix;

use crate::{Error, Result};

/// Mixed discriminant `D(M_1[m_1], ..., M_r[m_r])`, normalized so that
/// `D(A[size]) = det A`.
///
/// Expands over assignments of columns to blocks: every assignment with
/// block `i` used `m_i` times contributes the determinant of the matrix
/// whose columns are drawn from the assigned blocks, and the sum is divided
/// by the multinomial coefficient. Two blocks go through a bitmask loop over
/// column subsets.
pub fn mixed_discriminant(blocks: &[(&DMatrix<f64>, usize)]) -> Result<f64> {
    let size = check_blocks(blocks)?;
    let active: Vec<(&DMatrix<f64>, usize)> = blocks.iter().copied().filter(|b| b.1 > 0).collect();
    match active.as_slice() {
        [] => Ok(1.0),
        [(a, _)] => Ok(a.determinant()),
        [(a, ka), (b, kb)] => Ok(two_block(a, *ka, b, *kb, size)),
        _ => Ok(general(&active, size)),
    }
}

fn check_blocks(blocks: &[(&DMatrix<f64>, usize)]) -> Result<usize> {
    let size: usize = blocks.iter().map(|b| b.1).sum();
    for (m, _) in blocks {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::Dimension(format!(
                "block is {}x{} but multiplicities sum to {size}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    if size > 16 {
        return Err(Error::Dimension(format!("size {size} exceeds 16")));
    }
    Ok(size)
}

fn two_block(a: &DMatrix<f64>, ka: usize, b: &DMatrix<f64>, kb: usize, size: usize) -> f64 {
    let mut work = DMatrix::zeros(size, size);
    let mut sum = 0.0;
    let mut count = 0u64;
    for mask in 0u32..(1 << size) {
        if mask.count_ones() as usize != kb {
            continue;
        }
        for c in 0..size {
            let src = if mask & (1 << c) != 0 { b } else { a };
            work.set_column(c, &src.column(c));
        }
        sum += work.determinant();
        count += 1;
    }
    debug_assert_eq!(count, binomial_u64(ka + kb, kb));
    sum / count as f64
}

fn general(blocks: &[(&DMatrix<f64>, usize)], size: usize) -> f64 {
    let mut remaining: Vec<usize> = blocks.iter().map(|b| b.1).collect();
    let mut work = DMatrix::zeros(size, size);
    let mut sum = 0.0;
    let mut count = 0u64;
    assign(blocks, &mut remaining, 0, &mut work, &mut sum, &mut count);
    sum / count as f64
}

fn assign(
    blocks: &[(&DMatrix<f64>, usize)],
    remaining: &mut [usize],
    column: usize,
    work: &mut DMatrix<f64>,
    sum: &mut f64,
    count: &mut u64,
) {
    if column == work.ncols() {
        *sum += work.determinant();
        *count += 1;
        return;
    }
    for b in 0..blocks.len() {
        if remaining[b] == 0 {
            continue;
        }
        remaining[b] -= 1;
        work.set_column(column, &blocks[b].0.column(column));
        assign(blocks, remaining, column + 1, work, sum, count);
        remaining[b] += 1;
    }
}

/// Same quantity through the polarization identity
/// `D(A_1, ..., A_m) = (1/m!) sum_{S} (-1)^{m-|S|} det(sum_{i in S} A_i)`
/// over all subsets of the expanded slot list.
pub fn mixed_discriminant_polarized(blocks: &[(&DMatrix<f64>, usize)]) -> Result<f64> {
    let size = check_blocks(blocks)?;
    let slots: Vec<&DMatrix<f64>> = blocks.iter().flat_map(|&(m, k)| std::iter::repeat_n(m, k)).collect();
    let mut sum = 0.0;
    for mask in 0u32..(1 << size) {
        let mut acc = DMatrix::zeros(size, size);
        for (i, m) in slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc += *m;
            }
        }
        let sign = if (size - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * acc.determinant();
    }
    Ok(sum / (1..=size).map(|i| i as f64).product::<f64>())
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matnum::standard_j;

    fn sample(size: usize, seed: u64) -> DMatrix<f64> {
        DMatrix::from_fn(size, size, |i, j| (seed as f64 + 1.3 * i as f64 + 0.7 * (j * j) as f64).sin())
    }

    #[test]
    fn all_slots_equal_is_determinant() {
        let a = sample(4, 3);
        let d = mixed_discriminant(&[(&a, 4)]).unwrap();
        assert!((d - a.determinant()).abs() < 1e-12);
    }

    #[test]
    fn identity_gives_one() {
        let i = DMatrix::<f64>::identity(6, 6);
        for k in 0..=6 {
            let d = mixed_discriminant(&[(&i, 6 - k), (&i, k)]).unwrap();
            assert!((d - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplicity_mismatch() {
        let a = sample(4, 1);
        assert!(matches!(mixed_discriminant(&[(&a, 3)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn three_blocks_match_polarization() {
        let a = sample(4, 1);
        let b = sample(4, 2);
        let j = standard_j(2);
        let direct = mixed_discriminant(&[(&a, 2), (&b, 1), (&j, 1)]).unwrap();
        let polar = mixed_discriminant_polarized(&[(&a, 2), (&b, 1), (&j, 1)]).unwrap();
        assert!((direct - polar).abs() < 1e-12 * direct.abs().max(1.0));
    }
}
