//! Gauss-Legendre quadrature and barycentric interpolation on the Gauss grid.

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess for the i-th root (descending order)
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes = x.iter().map(|&xi| mid + half * xi).collect();
    let weights = w.iter().map(|&wi| half * wi).collect();
    (nodes, weights)
}

/// Barycentric interpolant through the Gauss-Legendre nodes.
///
/// Uses the closed-form barycentric weights for Gauss points,
/// `lambda_j ∝ (-1)^j sqrt((1 - x_j^2) w_j)`, which stay bounded for any n
/// (explicit products of node differences would under/overflow).
pub struct GaussInterpolant {
    nodes: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<f64>,
}

impl GaussInterpolant {
    /// `reference_nodes` and `reference_weights` are the rule on [-1,1];
    /// `nodes` the mapped abscissae carrying `values`.
    pub fn new(
        reference_nodes: &[f64],
        reference_weights: &[f64],
        nodes: Vec<f64>,
        values: Vec<f64>,
    ) -> Self {
        let bary: Vec<f64> = reference_nodes
            .iter()
            .zip(reference_weights)
            .enumerate()
            .map(|(j, (&x, &w))| {
                let s = ((1.0 - x * x) * w).sqrt();
                if j % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        Self { nodes, bary, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &bj), &fj) in self.nodes.iter().zip(&self.bary).zip(&self.values) {
            let d = x - xj;
            if d.abs() < 1e-300 {
                return fj;
            }
            let c = bj / d;
            num += c * fj;
            den += c;
        }
        num / den
    }
}

/// Composite Simpson rule on a uniform grid including both endpoints.
/// Falls back to a trapezoid step on the last interval when the interval
/// count is odd.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    let even_intervals = if intervals % 2 == 0 {
        intervals
    } else {
        intervals - 1
    };
    let mut sum = 0.0;
    let mut i = 0;
    while i < even_intervals {
        sum += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        sum += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 is exact for an 8-point rule
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert_relative_eq!(val, 2.0 / 15.0, max_relative = 1e-13);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn mapped_rule_integrates_exp() {
        let (x, w) = gauss_legendre_on(20, 0.0, 2.0);
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.exp()).sum();
        assert_relative_eq!(val, 2.0_f64.exp() - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn barycentric_reproduces_smooth_function() {
        let n = 40;
        let (xr, wr) = gauss_legendre(n);
        let (nodes, _) = gauss_legendre_on(n, 0.0, 1.0);
        let values: Vec<f64> = nodes.iter().map(|&r| (3.0 * r).sin()).collect();
        let interp = GaussInterpolant::new(&xr, &wr, nodes, values);
        for &x in &[0.05, 0.3141, 0.5, 0.777, 0.99] {
            assert_relative_eq!(interp.eval(x), (3.0 * x).sin(), max_relative = 1e-12);
        }
    }

    #[test]
    fn simpson_handles_odd_interval_count() {
        let h = 0.001;
        let values: Vec<f64> = (0..1000).map(|i| (i as f64 * h).powi(2)).collect();
        let exact = 0.999_f64.powi(3) / 3.0;
        assert_relative_eq!(simpson_uniform(&values, h), exact, max_relative = 1e-8);
    }
}
