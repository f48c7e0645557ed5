//! Small dense linear-algebra helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative tolerance used for every rank decision.
pub const RANK_TOL: f64 = 1e-8;

/// Inverse of a metric matrix via SVD. `None` when the smallest singular value
/// is below `RANK_TOL` times the largest diagonal magnitude.
pub fn invert_metric(g: &Matrix) -> Option<Matrix> {
    let scale = g.diagonal().iter().fold(0.0f64, |a, d| a.max(d.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let svd = g.clone().svd(true, true);
    let smallest = svd.singular_values.min();
    if smallest <= RANK_TOL * scale {
        return None;
    }
    svd.pseudo_inverse(0.0).ok()
}

/// Numerical rank and a basis of the right null space of `a` (rows <= columns).
pub fn null_space(a: &Matrix) -> (usize, Vec<Vector>) {
    let (rows, cols) = a.shape();
    let mut square = Matrix::zeros(cols, cols);
    square.view_mut((0, 0), (rows.min(cols), cols)).copy_from(&a.rows(0, rows.min(cols)));
    let svd = square.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sigma = &svd.singular_values;
    let largest = sigma.max();
    let rank = if largest == 0.0 {
        0
    } else {
        sigma.iter().filter(|s| **s > RANK_TOL * largest).count()
    };
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|i, j| sigma[*j].total_cmp(&sigma[*i]));
    let basis = order[rank..]
        .iter()
        .map(|&k| vt.row(k).transpose())
        .collect();
    (rank, basis)
}

pub fn inner(g: &Matrix, u: &Vector, v: &Vector) -> f64 {
    u.dot(&(g * v))
}

pub fn norm(g: &Matrix, v: &Vector) -> f64 {
    inner(g, v, v).max(0.0).sqrt()
}

/// Modified Gram-Schmidt (two passes) in the inner product `g`. Vectors whose
/// residual falls below `RANK_TOL` of their original length are dropped.
pub fn orthonormalize(g: &Matrix, vectors: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = norm(g, v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = inner(g, e, &w);
                w.axpy(-c, e, 1.0);
            }
        }
        let n = norm(g, &w);
        if n > RANK_TOL * original {
            out.push(w / n);
        }
    }
    out
}

/// Flip `v` so that its first component of largest magnitude is positive.
pub fn fix_sign(v: &mut Vector) {
    let largest = v.amax();
    if largest == 0.0 {
        return;
    }
    if let Some(x) = v.iter().find(|x| x.abs() >= largest * (1.0 - 1e-9)) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
}

/// Matrix whose columns are `vectors` (m x k); `m` is needed for the empty case.
pub fn columns(m: usize, vectors: &[Vector]) -> Matrix {
    let mut out = Matrix::zeros(m, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_example_jacobian() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let j = Matrix::from_row_slice(3, 4, &[s, s, 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.]);
        let (rank, basis) = null_space(&j);
        assert_eq!(rank, 3);
        assert_eq!(basis.len(), 1);
        let mut v = basis[0].clone();
        fix_sign(&mut v);
        assert!((v - Vector::from_vec(vec![s, -s, 0., 0.])).amax() < 1e-12);
    }

    #[test]
    fn degenerate_metric_has_no_inverse() {
        assert!(invert_metric(&Matrix::zeros(3, 3)).is_none());
        let g = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(invert_metric(&g).is_none());
        let g = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let inv = invert_metric(&g).unwrap();
        assert!((g * inv - Matrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let g = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 4.0, 9.0]));
        let vs = vec![
            Vector::from_vec(vec![1.0, 1.0, 0.0]),
            Vector::from_vec(vec![2.0, 2.0, 0.0]),
            Vector::from_vec(vec![0.0, 1.0, 1.0]),
        ];
        let e = orthonormalize(&g, &vs);
        assert_eq!(e.len(), 2);
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((inner(&g, &e[a], &e[b]) - want).abs() < 1e-14);
            }
        }
    }
}
