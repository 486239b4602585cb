//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use switchvi::linalg::{Matrix, Vector};
use switchvi::problems::GarnetMdp;

/// All subsets of `0..n` as bit masks, excluding the empty set.
fn supports(n: usize) -> impl Iterator<Item = u32> {
    1..(1u32 << n)
}

/// Projection onto `{v ≥ 0, Σv = s}` by enumerating every support set and
/// keeping the closest feasible stationary point.
pub fn brute_simplex(z: &[f64], s: f64) -> Vec<f64> {
    let n = z.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in supports(n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let tau = (idx.iter().map(|&i| z[i]).sum::<f64>() - s) / idx.len() as f64;
        let mut x = vec![0.0; n];
        let mut ok = true;
        for &i in &idx {
            x[i] = z[i] - tau;
            if x[i] < -1e-14 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let d: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    best.expect("some support is always feasible").1
}

/// Enumerates `3ⁿ` choices per coordinate and returns the feasible candidate
/// minimizing `objective`.
fn enumerate_three<F, G>(n: usize, candidate: F, objective: G) -> Vec<f64>
where
    F: Fn(usize, usize) -> Option<f64>,
    G: Fn(&[f64]) -> f64,
{
    let total = 3usize.pow(n as u32);
    let mut best: Option<(f64, Vec<f64>)> = None;
    'outer: for code in 0..total {
        let mut c = code;
        let mut x = vec![0.0; n];
        for (i, xi) in x.iter_mut().enumerate() {
            match candidate(i, c % 3) {
                Some(v) => *xi = v,
                None => continue 'outer,
            }
            c /= 3;
        }
        let val = objective(&x);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, x));
        }
    }
    best.expect("some pattern is always admissible").1
}

fn sq_dist(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Projection onto `[lo, hi]` by enumerating lower/upper/free per coordinate.
pub fn brute_box(z: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    enumerate_three(
        z.len(),
        |i, choice| {
            let v = [lo[i], hi[i], z[i]][choice];
            (v >= lo[i] && v <= hi[i]).then_some(v)
        },
        |x| sq_dist(x, z),
    )
}

/// Projection onto `ℝⁿ₊` by enumerating active/free per coordinate.
pub fn brute_orthant(z: &[f64]) -> Vec<f64> {
    enumerate_three(
        z.len(),
        |i, choice| match choice {
            0 => Some(0.0),
            1 if z[i] >= 0.0 => Some(z[i]),
            _ => None,
        },
        |x| sq_dist(x, z),
    )
}

/// `argmin τ‖u‖₁ + ½‖u − z‖²` over all sign patterns of `u`.
pub fn brute_l1(z: &[f64], tau: f64) -> Vec<f64> {
    enumerate_three(
        z.len(),
        |i, choice| match choice {
            0 => Some(0.0),
            1 => Some(z[i] - tau).filter(|v| *v > 0.0),
            _ => Some(z[i] + tau).filter(|v| *v < 0.0),
        },
        |x| tau * x.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * sq_dist(x, z),
    )
}

/// Blockwise [`brute_simplex`].
pub fn brute_product(z: &[f64], blocks: &[(usize, f64)]) -> Vec<f64> {
    let mut out = Vec::with_capacity(z.len());
    let mut start = 0;
    for &(size, radius) in blocks {
        out.extend(brute_simplex(&z[start..start + size], radius));
        start += size;
    }
    out
}

/// Solves `min_{x ∈ radius·Δ} ` VI of `Mx + q` by fixing the support found in
/// `guess` and solving the equality-constrained linear system; returns the
/// solution and its multiplier when the support is consistent.
pub fn affine_simplex_kkt_solve(m: &Matrix, q: &Vector, radius: f64, guess: &Vector) -> Option<(Vector, f64)> {
    let n = q.len();
    let support: Vec<usize> = (0..n).filter(|&i| guess[i] > 1e-7 * radius).collect();
    let k = support.len();
    let mut a = Matrix::zeros(k + 1, k + 1);
    let mut b = Vector::zeros(k + 1);
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            a[(r, c)] = m[(i, j)];
        }
        a[(r, k)] = -1.0;
        a[(k, r)] = 1.0;
        b[r] = -q[i];
    }
    b[k] = radius;
    let sol = a.lu().solve(&b)?;
    let mut x = Vector::zeros(n);
    for (r, &i) in support.iter().enumerate() {
        x[i] = sol[r];
    }
    Some((x, sol[k]))
}

/// KKT violation of `x` for the VI of `Mx + q` over `radius·Δ`:
/// the largest of `|Σx − radius|`, `max(−xᵢ)` and `|min(xᵢ, Fᵢ − ν)|` with
/// `ν = min F`.
pub fn affine_simplex_kkt_error(m: &Matrix, q: &Vector, radius: f64, x: &Vector) -> f64 {
    let f = m * x + q;
    let nu = f.min();
    let mut err = (x.sum() - radius).abs();
    for i in 0..x.len() {
        err = err.max(-x[i]).max(x[i].min(f[i] - nu).abs());
    }
    err
}

/// Value iteration `v ← min_a c(s,a) + γ Σ P v` until successive iterates
/// differ by at most `tol` in sup-norm.
pub fn value_iteration(mdp: &GarnetMdp, tol: f64) -> Vec<f64> {
    let (n, na) = (mdp.n_states, mdp.n_actions);
    let mut v = vec![0.0; n];
    loop {
        let mut next = vec![f64::INFINITY; n];
        for (s, slot) in next.iter_mut().enumerate() {
            for a in 0..na {
                let mut q = mdp.cost[(s, a)];
                for &(t, p) in &mdp.transitions[s * na + a] {
                    q += mdp.gamma * p * v[t];
                }
                *slot = slot.min(q);
            }
        }
        let diff = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        // contraction: the remaining error is at most γ/(1−γ)·diff
        if diff * mdp.gamma / (1.0 - mdp.gamma) <= tol {
            return v;
        }
    }
}

/// Value of a 2×2 matrix game `min_x max_y xᵀAy` and an equilibrium, by
/// enumerating pure and fully mixed supports.
pub fn solve_2x2_game(a: [[f64; 2]; 2]) -> (f64, [f64; 2], [f64; 2]) {
    let payoff =
        |x: [f64; 2], y: [f64; 2]| -> f64 { (0..2).map(|i| (0..2).map(|j| x[i] * a[i][j] * y[j]).sum::<f64>()).sum() };
    let best_response_gap = |x: [f64; 2], y: [f64; 2]| -> f64 {
        let col_max = (0..2).map(|j| x[0] * a[0][j] + x[1] * a[1][j]).fold(f64::NEG_INFINITY, f64::max);
        let row_min = (0..2).map(|i| a[i][0] * y[0] + a[i][1] * y[1]).fold(f64::INFINITY, f64::min);
        col_max - row_min
    };
    let mut candidates = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut x = [0.0; 2];
            let mut y = [0.0; 2];
            x[i] = 1.0;
            y[j] = 1.0;
            candidates.push((x, y));
        }
    }
    let det = a[0][0] - a[0][1] - a[1][0] + a[1][1];
    if det.abs() > 1e-14 {
        let p = (a[1][1] - a[1][0]) / det;
        let r = (a[1][1] - a[0][1]) / det;
        if (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&r) {
            candidates.push(([p, 1.0 - p], [r, 1.0 - r]));
        }
    }
    let (x, y) = candidates
        .into_iter()
        .min_by(|a, b| best_response_gap(a.0, a.1).total_cmp(&best_response_gap(b.0, b.1)))
        .unwrap();
    (payoff(x, y), x, y)
}

/// Five-term sum increment written out coordinate by coordinate.
#[allow(clippy::too_many_arguments)]
pub fn sum_term_12_oracle(
    x_prev: &[f64],
    x: &[f64],
    x_next: &[f64],
    x_bar: &[f64],
    phi: f64,
    phi_next: f64,
    lambda: f64,
    lambda_prev: f64,
    theta: f64,
    theta_prev: f64,
) -> f64 {
    let mut total = 0.0;
    let c = (lambda / lambda_prev) * phi;
    for i in 0..x.len() {
        let back = x[i] - x_prev[i];
        let anchor = x[i] - x_bar[i];
        let ahead = x_next[i] - x_bar[i];
        let step = x_next[i] - x[i];
        total += theta_prev / 2.0 * back * back;
        total -= c * anchor * anchor;
        total += (c - 1.0 - 1.0 / phi_next) * ahead * ahead;
        total -= (c - theta) * step * step;
        total -= theta / 2.0 * step * step;
    }
    total
}

pub fn sum_term_13_oracle(
    x: &[f64],
    x_next: &[f64],
    x_bar: &[f64],
    phi: f64,
    phi_next: f64,
    lambda: f64,
    lambda_prev: f64,
    theta: f64,
) -> f64 {
    let c = lambda * phi / lambda_prev;
    let mut total = 0.0;
    for i in 0..x.len() {
        let anchor = x[i] - x_bar[i];
        let ahead = x_next[i] - x_bar[i];
        let step = x_next[i] - x[i];
        total += -c * anchor * anchor + (c - 1.0 - 1.0 / phi_next) * ahead * ahead - (c - theta) * step * step;
    }
    total
}

/// One row of a scalar hand simulation: `(J, λ, φ, flg, x after the pass)`.
pub type ScalarRow = (f64, f64, f64, u8, f64);

fn scalar_step_size(phi: f64, lam: f64, theta: f64, dx: f64, df: f64, lam_bar: f64) -> f64 {
    let rho = 1.0 / phi + 1.0 / (phi * phi);
    let middle = if df == 0.0 { f64::INFINITY } else { phi * theta / (4.0 * lam) * dx * dx / (df * df) };
    (rho * lam).min(middle).min(lam_bar)
}

/// Residual-switching method on `F(x) = a·x`, `g = 0`, with the literal
/// predicate, `λ₀ = λ̄ = 1`.
pub fn scalar_alg1(a: f64, x0: f64, phi: f64, steps: usize) -> Vec<ScalarRow> {
    let f = |x: f64| a * x;
    let (mut lam, mut theta) = (1.0, 1.0);
    let mut rows = Vec::new();
    let j0 = f(x0).abs();
    let mut x_prev = x0;
    let mut x = x0 - lam * f(x0);
    let mut bar_prev = x0;
    rows.push((j0, lam, f64::INFINITY, 0, x));
    let (mut flg, mut kbar) = (0u8, 1.0);
    let (mut j_prev, mut j_min) = (j0, j0);
    for _ in 1..steps {
        let j = f(x).abs();
        let new = scalar_step_size(phi, lam, theta, x - x_prev, f(x) - f(x_prev), 1.0);
        theta = phi * new / lam;
        lam = new;
        let momentum = (j - j_prev > 0.0 && flg == 1) || j_min < j + 1.0 / kbar;
        let (bar, phi_k) = if momentum {
            flg = 0;
            (((phi - 1.0) * x + bar_prev) / phi, phi)
        } else {
            flg = 1;
            kbar += 1.0;
            (x, f64::INFINITY)
        };
        let next = bar - lam * f(x);
        x_prev = x;
        x = next;
        bar_prev = bar;
        j_min = j_min.min(j);
        j_prev = j;
        rows.push((j, lam, phi_k, flg, x));
    }
    rows
}

/// Sum-switching method on `F(x) = a·x`, `g = 0`, `λ₀ = λ̄ = 1`. Rolled-back
/// passes produce no row.
pub fn scalar_alg2(a: f64, x0: f64, alpha: f64, phi_bar: f64, rows_wanted: usize) -> Vec<ScalarRow> {
    let f = |x: f64| a * x;
    let (mut lam, mut theta) = (1.0, 1.0);
    let mut rows = Vec::new();
    let mut x_prev = x0;
    let mut x = x0 - lam * f(x0);
    let mut bar_prev = x0;
    rows.push((f(x0).abs(), lam, f64::INFINITY, 1, x));
    let (mut flg, mut phi) = (1u8, phi_bar);
    let (mut sum1, mut sum2) = (0.0, 0.0);
    while rows.len() < rows_wanted {
        let j = f(x).abs();
        let (lam_prev, theta_prev) = (lam, theta);
        let new_lam = scalar_step_size(alpha, lam, theta, x - x_prev, f(x) - f(x_prev), 1.0);
        let new_theta = alpha * new_lam / lam;
        let bar = ((phi - 1.0) * x + bar_prev) / phi;
        let next = bar - new_lam * f(x);
        let t13 = |pn: f64| sum_term_13_oracle(&[x], &[next], &[bar], phi, pn, new_lam, lam_prev, new_theta);
        let t12 = sum_term_12_oracle(
            &[x_prev],
            &[x],
            &[next],
            &[bar],
            phi,
            phi_bar,
            new_lam,
            lam_prev,
            new_theta,
            theta_prev,
        );
        let (s1, s2) = (sum1 + t12, sum2 + t13(phi_bar));
        let phi_next = if (s1 <= 0.0 && flg == 1) || (s2 <= 0.0 && flg == 0) {
            flg = 1;
            sum1 = s1;
            sum2 = s2;
            phi_bar
        } else if flg == 1 {
            phi = alpha;
            sum1 = 0.0;
            sum2 = 0.0;
            flg = 0;
            continue;
        } else {
            sum2 += t13(alpha);
            sum1 = 0.0;
            alpha
        };
        lam = new_lam;
        theta = new_theta;
        rows.push((j, lam, phi, flg, next));
        x_prev = x;
        x = next;
        bar_prev = bar;
        phi = phi_next;
    }
    rows
}

/// Central differences of `s` at `x` with step `h`.
pub fn central_gradient(s: impl Fn(&Vector) -> f64, x: &Vector, h: f64) -> Vector {
    Vector::from_fn(x.len(), |i, _| {
        let mut up = x.clone();
        let mut down = x.clone();
        up[i] += h;
        down[i] -= h;
        (s(&up) - s(&down)) / (2.0 * h)
    })
}
