//! Dense extended-precision linear algebra for the monomial matrix: Householder
//! QR followed by one-sided Jacobi on the triangular factor.

use rug::Float;

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Float>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Float::with_val(prec, 0); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Float {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Float {
        &mut self.data[r * self.cols + c]
    }

    fn column_norm(&self, c: usize, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 0);
        for r in 0..self.rows {
            acc += Float::with_val(prec, self.get(r, c).square_ref());
        }
        acc.sqrt()
    }
}

/// Singular values (descending) and right singular vectors (columns of `v`,
/// in the same order).
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<Float>,
    pub v: Matrix,
}

/// Reduces `a` (rows ≥ cols) to its `cols × cols` upper-triangular QR factor.
pub fn householder_r(a: &Matrix, prec: u32) -> Matrix {
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    for k in 0..n.min(m) {
        let mut norm = Float::with_val(prec, 0);
        for r in k..m {
            norm += Float::with_val(prec, w.get(r, k).square_ref());
        }
        let norm = norm.sqrt();
        if norm.is_zero() {
            continue;
        }
        // v = x + sign(x_k)·‖x‖·e_k
        let alpha = if w.get(k, k).is_sign_negative() {
            norm
        } else {
            -norm
        };
        let mut v: Vec<Float> = (k..m).map(|r| w.get(r, k).clone()).collect();
        v[0] -= &alpha;
        let mut vnorm2 = Float::with_val(prec, 0);
        for x in &v {
            vnorm2 += Float::with_val(prec, x.square_ref());
        }
        if vnorm2.is_zero() {
            continue;
        }
        for c in k..n {
            let mut dot = Float::with_val(prec, 0);
            for (i, r) in (k..m).enumerate() {
                dot += Float::with_val(prec, &v[i] * w.get(r, c));
            }
            let scale = Float::with_val(prec, &dot * 2u32) / &vnorm2;
            for (i, r) in (k..m).enumerate() {
                let delta = Float::with_val(prec, &v[i] * &scale);
                *w.get_mut(r, c) -= delta;
            }
        }
    }
    let mut r = Matrix::zeros(n, n, prec);
    for i in 0..n {
        for j in i..n {
            *r.get_mut(i, j) = w.get(i, j).clone();
        }
    }
    r
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
pub fn jacobi_svd(a: &Matrix, prec: u32) -> Svd {
    let n = a.cols;
    let mut u = a.clone();
    let mut v = Matrix::zeros(n, n, prec);
    for i in 0..n {
        *v.get_mut(i, i) = Float::with_val(prec, 1);
    }
    let threshold = Float::with_val(prec, 1) >> (prec - 8);
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let mut aii = Float::with_val(prec, 0);
                let mut ajj = Float::with_val(prec, 0);
                let mut aij = Float::with_val(prec, 0);
                for r in 0..u.rows {
                    aii += Float::with_val(prec, u.get(r, i).square_ref());
                    ajj += Float::with_val(prec, u.get(r, j).square_ref());
                    aij += Float::with_val(prec, u.get(r, i) * u.get(r, j));
                }
                let scale = Float::with_val(prec, &aii * &ajj).sqrt() * &threshold;
                if aij.is_zero() || Float::with_val(prec, aij.abs_ref()) <= scale {
                    continue;
                }
                rotated = true;
                let zeta = Float::with_val(prec, &ajj - &aii) / Float::with_val(prec, &aij * 2u32);
                let root = (Float::with_val(prec, zeta.square_ref()) + 1u32).sqrt();
                let t = if zeta.is_sign_negative() {
                    -(Float::with_val(prec, zeta.abs_ref()) + root).recip()
                } else {
                    (Float::with_val(prec, &zeta) + root).recip()
                };
                let c = (Float::with_val(prec, t.square_ref()) + 1u32)
                    .sqrt()
                    .recip();
                let s = Float::with_val(prec, &c * &t);
                rotate(&mut u, i, j, &c, &s, prec);
                rotate(&mut v, i, j, &c, &s, prec);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(Float, usize)> = (0..n).map(|c| (u.column_norm(c, prec), c)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite norms"));
    let mut v_sorted = Matrix::zeros(n, n, prec);
    for (new_c, (_, old_c)) in order.iter().enumerate() {
        for r in 0..n {
            *v_sorted.get_mut(r, new_c) = v.get(r, *old_c).clone();
        }
    }
    Svd {
        singular_values: order.into_iter().map(|x| x.0).collect(),
        v: v_sorted,
    }
}

fn rotate(m: &mut Matrix, i: usize, j: usize, c: &Float, s: &Float, prec: u32) {
    for r in 0..m.rows {
        let xi = m.get(r, i).clone();
        let xj = m.get(r, j).clone();
        *m.get_mut(r, i) = Float::with_val(prec, c * &xi) - Float::with_val(prec, s * &xj);
        *m.get_mut(r, j) = Float::with_val(prec, s * &xi) + Float::with_val(prec, c * &xj);
    }
}

/// Singular values and right singular vectors of a tall matrix.
pub fn svd_tall(a: &Matrix, prec: u32) -> Svd {
    jacobi_svd(&householder_r(a, prec), prec)
}
