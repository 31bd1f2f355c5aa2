//! Floating-point helpers used only to propose candidates that are then
//! checked exactly.

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C, b: C) -> C {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

fn horner(c: &[f64], z: C) -> (C, C) {
    // value and derivative
    let mut p = (0.0, 0.0);
    let mut dp = (0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = cmul(dp, z);
        dp = (dp.0 + p.0, dp.1 + p.1);
        p = cmul(p, z);
        p.0 += ci;
    }
    (p, dp)
}

/// Complex roots of the monic polynomial with coefficients `c` (lowest
/// degree first, `c.last() == 1`) by Aberth–Ehrlich iteration.
pub fn aberth(c: &[f64]) -> Vec<C> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            (radius * 0.5 * t.cos(), radius * 0.5 * t.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.0 == 0.0 && p.1 == 0.0 {
                continue;
            }
            let ratio = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    let inv = cdiv((1.0, 0.0), d);
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let denom = (1.0 - (ratio.0 * s.0 - ratio.1 * s.1), -(ratio.0 * s.1 + ratio.1 * s.0));
            let w = cdiv(ratio, denom);
            if w.0.is_finite() && w.1.is_finite() {
                z[i] = (z[i].0 - w.0, z[i].1 - w.1);
                moved = moved.max((w.0 * w.0 + w.1 * w.1).sqrt() / (1.0 + z[i].0.hypot(z[i].1)));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Least-squares-free solve of a small dense real system by Gaussian
/// elimination with partial pivoting; `None` when (numerically) singular.
pub fn solve_real(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &x)| {
        let mut r = r.clone();
        r.push(x);
        r
    }).collect();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[p][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}
