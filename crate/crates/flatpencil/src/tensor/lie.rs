use super::{christoffel, ConnectionField, Matrix, MetricField, TensorError, VectorField};
use crate::expr::RationalExpr;
use crate::report::{all_zero, Report};

/// `(L_Z g)_ij = Z^k d_k g_ij + g_kj d_i Z^k + g_ik d_j Z^k`.
///
/// The result is returned as a symmetric matrix rather than a metric: a Lie
/// derivative may well be degenerate.
pub fn lie_derivative_metric(z: &VectorField, g: &MetricField) -> Result<Matrix, TensorError> {
    g.chart().same(z.chart())?;
    let chart = g.chart();
    let n = chart.dim();
    let m = g.lower();
    let dz: Vec<Vec<RationalExpr>> = (0..n).map(|k| chart.coords().iter().map(|c| z.component(k).diff(c)).collect()).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut v = z.apply(m.get(i, j));
            for k in 0..n {
                v = v.add(&m.get(k, j).mul(&dz[k][i])).add(&m.get(i, k).mul(&dz[k][j]));
            }
            out.set(j, i, v.clone());
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `(L_Z g*)^ij = Z^k d_k g^ij - g^kj d_k Z^i - g^ik d_k Z^j`.
pub fn lie_derivative_inverse_metric(z: &VectorField, g: &MetricField) -> Result<Matrix, TensorError> {
    g.chart().same(z.chart())?;
    lie_derivative_upper(z, g.upper())
}

/// Lie derivative of an arbitrary symmetric contravariant 2-tensor.
pub fn lie_derivative_upper(z: &VectorField, m: &Matrix) -> Result<Matrix, TensorError> {
    let chart = z.chart();
    let n = chart.dim();
    let dz: Vec<Vec<RationalExpr>> = (0..n).map(|k| chart.coords().iter().map(|c| z.component(k).diff(c)).collect()).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut v = z.apply(m.get(i, j));
            for k in 0..n {
                v = v.sub(&m.get(k, j).mul(&dz[i][k])).sub(&m.get(i, k).mul(&dz[j][k]));
            }
            out.set(j, i, v.clone());
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// The function `p` with `a = p * b`, when it exists.
pub fn proportionality(a: &Matrix, b: &Matrix) -> Option<RationalExpr> {
    let mut p: Option<RationalExpr> = None;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if y.is_zero() {
            if !x.is_zero() {
                return None;
            }
            continue;
        }
        match &p {
            None => p = Some(x.div(y)),
            Some(p) => {
                if *x != y.mul(p) {
                    return None;
                }
            }
        }
    }
    Some(p.unwrap_or_else(RationalExpr::zero))
}

/// `p` with `L_Z g = p g`, if `Z` is conformal for `g`.
pub fn conformal_factor(z: &VectorField, g: &MetricField) -> Result<Option<RationalExpr>, TensorError> {
    Ok(proportionality(&lie_derivative_metric(z, g)?, g.lower()))
}

/// `(L_Z G)^k_ij = Z^m d_m G^k_ij - G^m_ij d_m Z^k + G^k_mj d_i Z^m
/// + G^k_im d_j Z^m + d_i d_j Z^k`.
pub fn lie_derivative_christoffel(z: &VectorField, gamma: &ConnectionField) -> Result<Vec<RationalExpr>, TensorError> {
    gamma.chart().same(z.chart())?;
    let chart = gamma.chart();
    let n = chart.dim();
    let dz: Vec<Vec<RationalExpr>> = (0..n).map(|k| chart.coords().iter().map(|c| z.component(k).diff(c)).collect()).collect();
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = z.apply(gamma.get(k, i, j)).add(&dz[k][i].diff(chart.coord(j)));
                for m in 0..n {
                    v = v
                        .sub(&gamma.get(m, i, j).mul(&dz[k][m]))
                        .add(&gamma.get(k, m, j).mul(&dz[m][i]))
                        .add(&gamma.get(k, i, m).mul(&dz[m][j]));
                }
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Checks `L_Z(nabla)_X a = 1/2 [-dp(X) a - a(X) dp + g*(a, dp) g(X)]` for a
/// conformal field with `L_Z g = p g`, on all coordinate `X` and `a`.
pub fn lie_derivative_connection(z: &VectorField, g: &MetricField) -> Result<Report, TensorError> {
    let p = conformal_factor(z, g)?.ok_or(TensorError::NotConformal)?;
    let chart = g.chart();
    let n = chart.dim();
    let lz = lie_derivative_christoffel(z, &christoffel(g))?;
    let dp: Vec<RationalExpr> = chart.coords().iter().map(|c| p.diff(c)).collect();
    let grad: Vec<RationalExpr> = g.upper().mul_vec(&dp);
    let half = RationalExpr::frac(1, 2);
    let delta = |a: usize, b: usize| if a == b { RationalExpr::one() } else { RationalExpr::zero() };
    // X = d_i, a = dx^k, component j
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                lhs.push(lz[(k * n + i) * n + j].neg());
                let v = dp[i].mul(&delta(k, j)).neg().sub(&delta(k, i).mul(&dp[j])).add(&grad[k].mul(g.lower().get(i, j)));
                rhs.push(v.mul(&half));
            }
        }
    }
    let label = |x: usize| format!("X=d{}, a=dx{}, slot {}", x / (n * n) + 1, (x / n) % n + 1, x % n + 1);
    let mut report = Report::new("Lie derivative of the Levi-Civita connection along a conformal field");
    report.fact("conformal factor p", &p);
    let ok = report.check("lie-derivative-connection", "Lie derivative of a connection along a conformal vector field", || {
        all_zero(lhs.iter().zip(&rhs).enumerate().map(|(x, (l, r))| (label(x), l.sub(r))))
    });
    if !ok {
        let flipped = all_zero(lhs.iter().zip(&rhs).enumerate().map(|(x, (l, r))| (label(x), l.add(r)))).is_ok();
        report.fact("holds with the opposite sign", flipped);
    }
    Ok(report)
}
