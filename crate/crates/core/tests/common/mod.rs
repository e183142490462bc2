//! Independent reference computations used by the integration tests. None of
//! these call into the algorithms they are used to check.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub type M = [i64; 4];

pub fn mul(x: M, y: M) -> M {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn inv(x: M) -> M {
    [x[3], -x[1], -x[2], x[0]]
}

pub fn neg(x: M) -> M {
    [-x[0], -x[1], -x[2], -x[3]]
}

pub fn is_pm_identity(x: M) -> bool {
    x == [1, 0, 0, 1] || x == [-1, 0, 0, -1]
}

pub fn mobius(x: M, z: Complex64) -> Complex64 {
    (z * x[0] as f64 + x[1] as f64) / (z * x[2] as f64 + x[3] as f64)
}

fn sigma(n: u64, power: u32) -> f64 {
    (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(power as i32)).sum()
}

/// Classical `j(τ) = 1728·E₄³ / (E₄³ - E₆²)` from the Eisenstein series,
/// summed directly at `τ` (accurate for `Im τ ≳ 0.7`).
pub fn eisenstein_j(tau: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=80u64 {
        qn *= q;
        e4 += qn * (240.0 * sigma(n, 3));
        e6 -= qn * (504.0 * sigma(n, 5));
    }
    let e4c = e4 * e4 * e4;
    e4c * 1728.0 / (e4c - e6 * e6)
}

/// Lifts of the Γ(2) monodromy, worked out by hand on the three loops around
/// `∞`, `0`, `1`: `A = T²`, `B = (1 0; -2 1)` with `A·B·C = 1`. Each entry is
/// the sorted list of `(is_star, m)`.
pub fn gamma2_lift_oracle() -> Vec<Vec<(bool, u32)>> {
    let a: M = [1, 2, 0, 1];
    let b: M = [1, 0, -2, 1];
    let mut out = Vec::new();
    for ea in [1, -1] {
        for eb in [1, -1] {
            let la = if ea > 0 { a } else { neg(a) };
            let lb = if eb > 0 { b } else { neg(b) };
            let lc = inv(mul(la, lb));
            assert_eq!(mul(mul(la, lb), lc), [1, 0, 0, 1]);
            let mut fibers: Vec<(bool, u32)> = [la, lb, lc]
                .iter()
                .map(|x| (x[0] + x[3] < 0, 2))
                .collect();
            fibers.sort();
            out.push(fibers);
        }
    }
    out
}

/// Membership in `±Γ_k` by reducing a base point into the Ford domain of
/// `Γ_k`: the strip `|Re z| ≤ k-1` outside the half-disks of radius 1/2 over
/// `[n, n+1]`. Inside the disk over `[-j, -(j-1)]` apply `g_j`, inside the
/// disk over `[j-1, j]` apply `g_j⁻¹`; each step raises `Im z`.
pub fn gamma_k_contains(k: i64, x: M) -> bool {
    if x[0] * x[3] - x[1] * x[2] != 1 {
        return false;
    }
    let g = |j: i64| -> M { [2 * j - 1, 2 * j * (j - 1), 2, 2 * j - 1] };
    let half = (k - 1) as f64;
    let z0 = Complex64::new(0.1234, 1.4321);
    // z is recomputed from the exact product each step, so rounding in the
    // first steps (tiny Im z) does not accumulate.
    let mut acc = x;
    let mut z = mobius(acc, z0);
    for _ in 0..10_000 {
        let period = 2.0 * half;
        let n = ((z.re + half) / period).floor() as i64;
        if n != 0 {
            acc = mul([1, -n * 2 * (k - 1), 0, 1], acc);
            z = mobius(acc, z0);
        }
        let cell = z.re.floor();
        let centre = cell + 0.5;
        if (z - Complex64::new(centre, 0.0)).norm() < 0.5 - 1e-12 {
            let j = cell as i64;
            let step = if j < 0 { g(-j) } else { inv(g(j + 1)) };
            acc = mul(step, acc);
            z = mobius(acc, z0);
        } else {
            break;
        }
    }
    (z - z0).norm() < 1e-6 && is_pm_identity(acc)
}

/// Writes `x ∈ ±Γ(2)` as a word in `a = T²`, `b = (1 0; 2 1)`; letters are
/// `(generator, exponent)` with generator 0 for `a`, 1 for `b`.
pub fn gamma2_word(x: M) -> Option<Vec<(usize, i64)>> {
    if x[0] % 2 == 0 || x[3] % 2 == 0 || x[1] % 2 != 0 || x[2] % 2 != 0 {
        return None;
    }
    let a = |n: i64| -> M { [1, 2 * n, 0, 1] };
    let b = |n: i64| -> M { [1, 0, 2 * n, 1] };
    let mut m = x;
    let mut word = Vec::new();
    while m[2] != 0 {
        if m[0].abs() > m[2].abs() {
            let n = (m[0] as f64 / (2.0 * m[2] as f64)).round() as i64;
            m = mul(a(-n), m);
            word.push((0, n));
        } else {
            let n = (m[2] as f64 / (2.0 * m[0] as f64)).round() as i64;
            m = mul(b(-n), m);
            word.push((1, n));
        }
    }
    let n = m[1] / (2 * m[0]);
    word.push((0, n));
    // m was reduced to ±a(n); x = (prefix)·m
    Some(word)
}

pub fn eval_gamma2_word(word: &[(usize, i64)]) -> M {
    word.iter().fold([1, 0, 0, 1], |acc, &(g, n)| {
        let step = if g == 0 { [1, 2 * n, 0, 1] } else { [1, 0, 2 * n, 1] };
        mul(acc, step)
    })
}
