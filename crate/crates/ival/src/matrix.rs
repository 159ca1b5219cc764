//! Interval matrices and midpoint-preconditioned linear solves.

use crate::real::Interval;
use crate::IvError;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

pub type IntervalVector = Vec<Interval>;

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntervalMatrix {
        IntervalMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Interval>]) -> IntervalMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntervalMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mid(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].mid()).collect())
            .collect()
    }

    pub fn mul_vec(&self, v: &[Interval]) -> IntervalVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Interval::ZERO;
                for j in 0..self.cols {
                    acc += self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn mul_point_left(&self, p: &[Vec<f64>]) -> IntervalMatrix {
        // p * self, p a point matrix
        let n = p.len();
        assert_eq!(p[0].len(), self.rows);
        let mut out = IntervalMatrix::zeros(n, self.cols);
        for i in 0..n {
            for j in 0..self.cols {
                let mut acc = Interval::ZERO;
                for k in 0..self.rows {
                    acc += Interval::point(p[i][k]) * self[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Floating-point inverse of a small point matrix by Gauss-Jordan with
/// partial pivoting. Returns None when numerically singular.
fn point_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                for j in 0..n {
                    m[r][j] -= f * m[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// Enclose the solution set of `A x = b` over all point matrices in `A` and
/// points in `b`, by midpoint preconditioning followed by interval Gaussian
/// elimination. A pivot containing zero signals an inconclusive enclosure.
pub fn linear_solve(a: &IntervalMatrix, b: &[Interval]) -> Result<IntervalVector, IvError> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square systems only");
    assert_eq!(n, b.len());
    let pre = point_inverse(&a.mid()).ok_or(IvError::SingularEnclosure)?;
    let mut m = a.mul_point_left(&pre);
    let mut rhs: Vec<Interval> = (0..n)
        .map(|i| {
            let mut acc = Interval::ZERO;
            for k in 0..n {
                acc += Interval::point(pre[i][k]) * b[k];
            }
            acc
        })
        .collect();

    // forward elimination
    for col in 0..n {
        let piv = m[(col, col)];
        if piv.contains(0.0) {
            return Err(IvError::SingularEnclosure);
        }
        for r in (col + 1)..n {
            let f = m[(r, col)] / piv;
            m[(r, col)] = Interval::ZERO;
            for j in (col + 1)..n {
                let v = m[(r, j)] - f * m[(col, j)];
                m[(r, j)] = v;
            }
            let v = rhs[r] - f * rhs[col];
            rhs[r] = v;
        }
    }
    // back substitution
    let mut x = vec![Interval::ZERO; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for j in (col + 1)..n {
            acc -= m[(col, j)] * x[j];
        }
        x[col] = acc / m[(col, col)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solve() {
        let a = IntervalMatrix::identity(2);
        let b = vec![Interval::point(1.0), Interval::point(2.0)];
        let x = linear_solve(&a, &b).unwrap();
        assert!(x[0].contains(1.0) && x[1].contains(2.0));
        assert!(x[0].width() < 1e-15 && x[1].width() < 1e-15);
    }

    #[test]
    fn diagonal_solve() {
        let mut a = IntervalMatrix::zeros(2, 2);
        a[(0, 0)] = Interval::point(2.0);
        a[(1, 1)] = Interval::point(4.0);
        let b = vec![Interval::point(2.0), Interval::point(4.0)];
        let x = linear_solve(&a, &b).unwrap();
        assert!(x[0].contains(1.0) && x[1].contains(1.0));
    }

    #[test]
    fn zero_row_is_singular() {
        let mut a = IntervalMatrix::identity(2);
        a[(1, 0)] = Interval::new(-1.0, 1.0);
        a[(1, 1)] = Interval::new(-1.0, 1.0);
        let b = vec![Interval::point(1.0), Interval::point(1.0)];
        assert!(matches!(
            linear_solve(&a, &b),
            Err(IvError::SingularEnclosure)
        ));
    }

    #[test]
    fn enclosure_of_point_solutions() {
        // wide-ish matrix; check a sampled point solution is inside
        let mut a = IntervalMatrix::zeros(2, 2);
        a[(0, 0)] = Interval::new(1.9, 2.1);
        a[(0, 1)] = Interval::new(0.4, 0.6);
        a[(1, 0)] = Interval::new(-0.1, 0.1);
        a[(1, 1)] = Interval::new(2.9, 3.1);
        let b = vec![Interval::new(0.9, 1.1), Interval::new(1.9, 2.1)];
        let x = linear_solve(&a, &b).unwrap();
        // point selection A = [[2, .5], [0, 3]], b = [1, 2]
        // x1 = 2/3, x0 = (1 - .5 * 2/3)/2 = 1/3
        assert!(x[0].contains(1.0 / 3.0));
        assert!(x[1].contains(2.0 / 3.0));
    }
}
