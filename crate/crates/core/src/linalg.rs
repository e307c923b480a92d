//! Dense linear algebra over the coefficient field.

use crate::coeff::Coeff;

pub type Matrix = Vec<Vec<Coeff>>;

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Coeff::zero(); c]; r]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Coeff::one();
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (r, k, c) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = zeros(r, c);
    for i in 0..r {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[l][j].is_zero() {
                    out[i][j] += &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn mul_vec(a: &Matrix, x: &[Coeff]) -> Vec<Coeff> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Coeff::zero(), |acc, (p, q)| &acc + &(p * q))
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let c = a.first().map_or(0, Vec::len);
    (0..c).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of {x : m x = 0}.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Coeff>> {
    let mut r = m.clone();
    let piv = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Coeff::zero(); cols];
            v[f] = Coeff::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -&r[i][f];
            }
            v
        })
        .collect()
}

/// Some solution of m x = b, if consistent.
pub fn solve(m: &Matrix, b: &[Coeff]) -> Option<Vec<Coeff>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Coeff::zero(); cols];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = aug[i][cols].clone();
    }
    Some(x)
}

/// Maximal linearly independent subset of the columns, as column vectors.
pub fn column_basis(m: &Matrix) -> Vec<Vec<Coeff>> {
    let mut r = m.clone();
    let piv = rref(&mut r);
    piv.iter()
        .map(|&c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coeff {
        Coeff::int(n)
    }

    #[test]
    fn inverse_and_solve() {
        let k = Coeff::param("k");
        let m = vec![vec![q(0), k.clone()], vec![q(1), q(2)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(2));
        let x = solve(&m, &[q(1), q(0)]).unwrap();
        assert_eq!(mul_vec(&m, &x), vec![q(1), q(0)]);
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn kernel_and_image() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mul_vec(&m, v).iter().all(Coeff::is_zero));
        }
        assert_eq!(column_basis(&m).len(), 1);
        assert_eq!(rank(&m), 1);
    }
}
