use super::{christoffel, ConnectionField, MetricField, TensorError};
use crate::expr::RationalExpr;
use crate::report::{all_zero, Report};

/// `h = W^2 g`.
pub fn conformal_rescale(g: &MetricField, omega: &RationalExpr) -> Result<MetricField, TensorError> {
    if omega.is_zero() {
        return Err(TensorError::ZeroConformalFactor);
    }
    g.scaled(&omega.square())
}

/// `(nabla^h - nabla^g)` predicted from `W`: the 1-form identity
/// `nabla^h_X a = nabla^g_X a - f(X) a - a(X) f + g*(a, f) g(X)`, `f = dW/W`,
/// written on Christoffel symbols as
/// `G_h^k_ij = G_g^k_ij + f_i d^k_j + d^k_i f_j - g^km f_m g_ij`.
fn predicted(gamma: &ConnectionField, g: &MetricField, f: &[RationalExpr]) -> Vec<RationalExpr> {
    let n = g.dim();
    let raised = g.upper().mul_vec(f);
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = gamma.get(k, i, j).sub(&raised[k].mul(g.lower().get(i, j)));
                if k == j {
                    v = v.add(&f[i]);
                }
                if k == i {
                    v = v.add(&f[j]);
                }
                out.push(v);
            }
        }
    }
    out
}

fn label(n: usize, x: usize) -> String {
    format!("G^{}_{}{}", x / (n * n) + 1, (x / n) % n + 1, x % n + 1)
}

/// Verifies the connection formulas for `h = W^2 g`, `h~ = W^2 g~` and the
/// resulting difference identity
/// `nabla^h~ - nabla^h = nabla^g~ - nabla^g + g~*(a, f) g~(X) - g*(a, f) g(X)`.
pub fn scaled_connection_difference(g: &MetricField, gt: &MetricField, omega: &RationalExpr) -> Result<Report, TensorError> {
    g.chart().same(gt.chart())?;
    let chart = g.chart();
    let n = chart.dim();
    let h = conformal_rescale(g, omega)?;
    let ht = conformal_rescale(gt, omega)?;
    let f: Vec<RationalExpr> = chart.coords().iter().map(|c| omega.diff(c).div(omega)).collect();
    let (gg, ggt, gh, ght) = (christoffel(g), christoffel(gt), christoffel(&h), christoffel(&ht));
    let pred_h = predicted(&gg, g, &f);
    let pred_ht = predicted(&ggt, gt, &f);
    let mut report = Report::new("Connections of a conformally scaled pair");
    report.fact("W", omega);
    report.check("scaled-connection-h", "Levi-Civita connection of W^2 g", || {
        all_zero(gh.components().iter().zip(&pred_h).enumerate().map(|(x, (a, b))| (label(n, x), a.sub(b))))
    });
    report.check("scaled-connection-h~", "Levi-Civita connection of W^2 g~", || {
        all_zero(ght.components().iter().zip(&pred_ht).enumerate().map(|(x, (a, b))| (label(n, x), a.sub(b))))
    });
    // On X = d_i, a = dx^k the identity reads, in slot j,
    // -(Gh~ - Gh)^k_ij = -(Gg~ - Gg)^k_ij + (g~^km f_m) g~_ij - (g^km f_m) g_ij.
    let rg = g.upper().mul_vec(&f);
    let rgt = gt.upper().mul_vec(&f);
    report.check("connection-difference", "difference of the scaled connections", || {
        let mut items = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let lhs = ght.get(k, i, j).sub(gh.get(k, i, j)).neg();
                    let rhs = ggt
                        .get(k, i, j)
                        .sub(gg.get(k, i, j))
                        .neg()
                        .add(&rgt[k].mul(gt.lower().get(i, j)))
                        .sub(&rg[k].mul(g.lower().get(i, j)));
                    items.push((format!("X=d{}, a=dx{}, slot {}", i + 1, k + 1, j + 1), lhs.sub(&rhs)));
                }
            }
        }
        all_zero(items)
    });
    Ok(report)
}
