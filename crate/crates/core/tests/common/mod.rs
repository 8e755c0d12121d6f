//! Independent statevector oracle: fixed-size arrays, entangler built from its
//! exponential series, no code shared with the library's pipeline.
#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Mat4 = [[C; 4]; 4];

fn u(theta: f64, phi: f64) -> [[C; 2]; 2] {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    [
        [C::new(phi.cos() * c, phi.sin() * c), C::new(s, 0.0)],
        [C::new(-s, 0.0), C::new(phi.cos() * c, -phi.sin() * c)],
    ]
}

fn kron(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> Mat4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r / 2][c / 2] * b[r % 2][c % 2];
        }
    }
    m
}

fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

/// `exp(i·(γ/2)·(D⊗D))` by plain Taylor summation (|argument| ≤ π/4).
pub fn entangler_series(gamma: f64) -> Mat4 {
    let d = [
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        [C::new(-1.0, 0.0), C::new(0.0, 0.0)],
    ];
    let dd = kron(d, d);
    let mut arg = dd;
    for row in arg.iter_mut() {
        for v in row.iter_mut() {
            *v *= C::new(0.0, gamma / 2.0);
        }
    }
    let mut sum = [[C::new(0.0, 0.0); 4]; 4];
    let mut term = sum;
    for i in 0..4 {
        sum[i][i] = C::new(1.0, 0.0);
        term[i][i] = C::new(1.0, 0.0);
    }
    for k in 1..40 {
        term = mul(&term, &arg);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                sum[i][j] += term[i][j];
            }
        }
    }
    sum
}

pub fn final_state(a: (f64, f64), b: (f64, f64), gamma: f64) -> [C; 4] {
    let j = entangler_series(gamma);
    let mut j_dag = j;
    for r in 0..4 {
        for c in 0..4 {
            j_dag[r][c] = j[c][r].conj();
        }
    }
    let full = mul(&j_dag, &mul(&kron(u(a.0, a.1), u(b.0, b.1)), &j));
    [full[0][0], full[1][0], full[2][0], full[3][0]]
}

pub fn probabilities(a: (f64, f64), b: (f64, f64), gamma: f64) -> [f64; 4] {
    final_state(a, b, gamma).map(|z| z.norm_sqr())
}

/// Expected payoffs for a 2x2 game given row-major payoff pairs.
pub fn payoffs(game: &[(f64, f64); 4], a: (f64, f64), b: (f64, f64), gamma: f64) -> (f64, f64) {
    let p = probabilities(a, b, gamma);
    (0..4).fold((0.0, 0.0), |(x, y), k| {
        (x + p[k] * game[k].0, y + p[k] * game[k].1)
    })
}

pub const PD: [(f64, f64); 4] = [(3.0, 3.0), (0.0, 5.0), (5.0, 0.0), (1.0, 1.0)];

pub const C_MOVE: (f64, f64) = (0.0, 0.0);
pub const D_MOVE: (f64, f64) = (std::f64::consts::PI, 0.0);
pub const Q_MOVE: (f64, f64) = (0.0, std::f64::consts::FRAC_PI_2);
