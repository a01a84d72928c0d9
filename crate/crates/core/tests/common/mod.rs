//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `(1/π) ∫₀^π du / √(1 − k² sin²u)` by quadrature.
pub fn k_norm_quad(k: f64) -> f64 {
    let f = |u: f64| 1.0 / (1.0 - k * k * u.sin().powi(2)).sqrt();
    adaptive_simpson(&f, 0.0, PI, 1e-12) / PI
}

/// Pole-to-pole time `∫₀^π dθ / √(h² − a² sin²θ)` by quadrature.
pub fn flip_time_quad(h: f64, a: f64) -> f64 {
    let f = |t: f64| 1.0 / (h * h - a * a * t.sin().powi(2)).sqrt();
    adaptive_simpson(&f, 0.0, PI, 1e-12)
}

pub fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

pub fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Exact solution of `ds/dt = s × h` for a constant field: rotation about `ĥ` by `−|h| t`.
pub fn precess(s: [f64; 3], h: [f64; 3], t: f64) -> [f64; 3] {
    let w = dot(h, h).sqrt();
    if w == 0.0 {
        return s;
    }
    let k = [h[0] / w, h[1] / w, h[2] / w];
    let th = -w * t;
    let (c, sn) = (th.cos(), th.sin());
    let kxs = cross(k, s);
    let kd = dot(k, s);
    [0, 1, 2].map(|i| s[i] * c + kxs[i] * sn + k[i] * kd * (1.0 - c))
}

/// Collinear right-hand side written out from scratch, drive on.
pub fn collinear_rhs(s: [f64; 3], a: f64, h_tilde: f64, h_perp: f64, eta: f64) -> [f64; 3] {
    let h = [h_perp, 0.0, h_tilde + 2.0 * a * s[2]];
    let sxh = cross(s, h);
    let sxsxh = cross(s, sxh);
    let d = 1.0 + eta * eta;
    [0, 1, 2].map(|i| (sxh[i] - eta * sxsxh[i]) / d)
}

/// Eigenvalues of the tangent-plane Jacobian at a pole `z = ±1` with the
/// drive off, by central differences. Returns `(re, im)` pairs.
pub fn pole_eigenvalues_fd(a: f64, h_tilde: f64, eta: f64, z: f64) -> [(f64, f64); 2] {
    let eps = 1e-6;
    let at = |x: f64, y: f64| {
        let zz = z * (1.0 - x * x - y * y).sqrt();
        let r = collinear_rhs([x, y, zz], a, h_tilde, 0.0, eta);
        [r[0], r[1]]
    };
    let dx = {
        let (p, m) = (at(eps, 0.0), at(-eps, 0.0));
        [(p[0] - m[0]) / (2.0 * eps), (p[1] - m[1]) / (2.0 * eps)]
    };
    let dy = {
        let (p, m) = (at(0.0, eps), at(0.0, -eps));
        [(p[0] - m[0]) / (2.0 * eps), (p[1] - m[1]) / (2.0 * eps)]
    };
    let (j11, j12, j21, j22) = (dx[0], dy[0], dx[1], dy[1]);
    let tr = j11 + j22;
    let det = j11 * j22 - j12 * j21;
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        [(tr / 2.0 + disc.sqrt(), 0.0), (tr / 2.0 - disc.sqrt(), 0.0)]
    } else {
        [(tr / 2.0, (-disc).sqrt()), (tr / 2.0, -(-disc).sqrt())]
    }
}

/// Plain RK4 on the collinear equations without renormalization, drive on.
pub fn collinear_rk4(s0: [f64; 3], a: f64, h_tilde: f64, h_perp: f64, eta: f64, t_end: f64, n: usize) -> [f64; 3] {
    let dt = t_end / n as f64;
    let f = |s: [f64; 3]| collinear_rhs(s, a, h_tilde, h_perp, eta);
    let add = |s: [f64; 3], k: [f64; 3], c: f64| [s[0] + c * k[0], s[1] + c * k[1], s[2] + c * k[2]];
    let mut s = s0;
    for _ in 0..n {
        let k1 = f(s);
        let k2 = f(add(s, k1, dt / 2.0));
        let k3 = f(add(s, k2, dt / 2.0));
        let k4 = f(add(s, k3, dt));
        s = [0, 1, 2].map(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    s
}

/// Non-collinear `ω₁₁ / ω₀₁` for `a = 0`: drive magnitudes `4 cos φ` and `2`.
pub fn noncollinear_freq_ratio(phi: f64) -> f64 {
    4.0 * phi.cos() / 2.0
}

pub fn path_to_bin() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_BIN_EXE_magtoffoli"))
}
