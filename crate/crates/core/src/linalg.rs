use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

#[inline]
pub fn dist_sq(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn is_finite(v: &Vector) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// `((phi - 1) x + anchor) / phi`; an infinite `phi` returns `x`.
pub fn golden_anchor(x: &Vector, anchor: &Vector, phi: f64) -> Vector {
    if phi.is_infinite() {
        return x.clone();
    }
    let w = (phi - 1.0) / phi;
    x * w + anchor * (1.0 / phi)
}

/// Largest eigenvalue of a symmetric positive semidefinite map given only
/// through its action, by power iteration from the all-ones vector.
///
/// Stops when the Rayleigh estimate changes by less than `rel_tol` relative.
pub fn power_iteration_psd<F>(dim: usize, apply: F, rel_tol: f64, max_iter: usize) -> f64
where
    F: Fn(&Vector) -> Vector,
{
    if dim == 0 {
        return 0.0;
    }
    let mut v = Vector::from_element(dim, 1.0 / (dim as f64).sqrt());
    let mut est = 0.0;
    for _ in 0..max_iter {
        let w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let converged = (norm - est).abs() <= rel_tol * norm;
        est = norm;
        v = w / norm;
        if converged {
            break;
        }
    }
    est
}

/// Spectral norm `‖M‖₂` via power iteration on `MᵀM`.
pub fn spectral_norm(m: &Matrix) -> f64 {
    power_iteration_psd(m.ncols(), |v| m.tr_mul(&(m * v)), 1e-10, 100_000).sqrt()
}

/// Smallest eigenvalue of the symmetric part `(M + Mᵀ)/2`.
pub fn min_symmetric_eigenvalue(m: &Matrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().min()
}
