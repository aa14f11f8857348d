//! Truncated spatial domain: uniform grid, finite differences, quadrature,
//! weighted integrals, and the smooth cutoff family used by the extension
//! analysis.

use crate::error::{Error, Result};

/// Uniform symmetric grid on `[-r_trunc, r_trunc]` with an odd number of
/// nodes so that `y = 0` is always a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub r_trunc: f64,
    pub n: usize,
    pub h: f64,
    pub nodes: Vec<f64>,
}

impl Grid {
    /// Trapezoid quadrature weight of node `i` (`h` interior, `h/2` at the ends).
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n - 1 {
            0.5 * self.h
        } else {
            self.h
        }
    }

    fn check_len(&self, field: &[f64]) -> Result<()> {
        if field.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: field.len(),
            });
        }
        Ok(())
    }
}

/// Builds the uniform grid. `n` must be odd and at least 3.
pub fn build_grid(r_trunc: f64, n: usize) -> Result<Grid> {
    if !(r_trunc > 0.0) {
        return Err(Error::InvalidGrid {
            reason: format!("half-width must be positive, got {r_trunc}"),
        });
    }
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidGrid {
            reason: format!("node count must be odd and >= 3, got {n}"),
        });
    }
    let h = 2.0 * r_trunc / (n - 1) as f64;
    // Build symmetrically from the center so nodes come out exactly mirrored.
    let half = (n - 1) / 2;
    let mut nodes = vec![0.0; n];
    for k in 0..=half {
        let y = k as f64 * h;
        nodes[half + k] = y;
        nodes[half - k] = -y;
    }
    nodes[0] = -r_trunc;
    nodes[n - 1] = r_trunc;
    Ok(Grid { r_trunc, n, h, nodes })
}

/// Second-order first derivative: central differences at interior nodes,
/// one-sided three-point stencils at the two boundary nodes.
pub fn ddy(field: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_len(field)?;
    let n = grid.n;
    let h = grid.h;
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (field[i + 1] - field[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * h);
    Ok(d)
}

/// Trapezoid rule over `[-r_trunc, r_trunc]`.
pub fn integrate(field: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_len(field)?;
    let mut sum = 0.0;
    for (i, f) in field.iter().enumerate() {
        sum += grid.weight(i) * f;
    }
    Ok(sum)
}

/// Trapezoid rule for the weighted integral `∫ rho0^alpha * extra_weight * f dy`.
pub fn weighted_integral(
    f: &[f64],
    rho0: &[f64],
    alpha: f64,
    extra_weight: &[f64],
    grid: &Grid,
) -> Result<f64> {
    grid.check_len(f)?;
    grid.check_len(rho0)?;
    grid.check_len(extra_weight)?;
    let min_rho = rho0.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_rho > 0.0) {
        return Err(Error::NonPositiveDensity { min: min_rho });
    }
    let mut sum = 0.0;
    for i in 0..grid.n {
        sum += grid.weight(i) * rho0[i].powf(alpha) * extra_weight[i] * f[i];
    }
    Ok(sum)
}

/// Smooth cutoff sampled on the grid: identically 1 on `|y| <= level_r`,
/// identically 0 on `|y| >= 2*level_r`, with the classical
/// `exp(-1/(1-z^2))` mollifier shaping the transition.
pub fn cutoff_xi(level_r: f64, grid: &Grid) -> Result<Vec<f64>> {
    if level_r < 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!("cutoff level must be >= 1, got {level_r}"),
        });
    }
    // psi(u) = exp(-1/u) for u > 0, 0 otherwise; the blend
    // psi(2-z) / (psi(2-z) + psi(z-1)) is smooth, 1 at z=1 and 0 at z=2.
    fn psi(u: f64) -> f64 {
        if u > 0.0 {
            (-1.0 / u).exp()
        } else {
            0.0
        }
    }
    let xi = grid
        .nodes
        .iter()
        .map(|&y| {
            let z = y.abs() / level_r;
            if z <= 1.0 {
                1.0
            } else if z >= 2.0 {
                0.0
            } else {
                let a = psi(2.0 - z);
                let b = psi(z - 1.0);
                a / (a + b)
            }
        })
        .collect();
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_grid_rejects_even_n() {
        assert!(build_grid(10.0, 6).is_err());
        assert!(build_grid(10.0, 1).is_err());
        assert!(build_grid(-1.0, 5).is_err());
    }

    #[test]
    fn build_grid_five_nodes() {
        let g = build_grid(10.0, 5).unwrap();
        assert_eq!(g.nodes, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert_eq!(g.h, 5.0);
    }

    #[test]
    fn build_grid_three_nodes() {
        let g = build_grid(1.0, 3).unwrap();
        assert_eq!(g.nodes, vec![-1.0, 0.0, 1.0]);
        assert_eq!(g.h, 1.0);
    }

    #[test]
    fn ddy_exact_for_affine() {
        let g = build_grid(4.0, 9).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|y| 2.0 * y).collect();
        let d = ddy(&f, &g).unwrap();
        for di in d {
            assert!((di - 2.0).abs() < 1e-13, "got {di}");
        }
        let c = vec![7.0; 9];
        for di in ddy(&c, &g).unwrap() {
            assert_eq!(di, 0.0);
        }
    }

    #[test]
    fn ddy_second_order_on_sine() {
        // Max error against cos(y) should shrink by about 4x when N doubles.
        let err = |n: usize| {
            let g = build_grid(std::f64::consts::PI, n).unwrap();
            let f: Vec<f64> = g.nodes.iter().map(|y| y.sin()).collect();
            let d = ddy(&f, &g).unwrap();
            g.nodes
                .iter()
                .zip(&d)
                .map(|(y, di)| (di - y.cos()).abs())
                .fold(0.0_f64, f64::max)
        };
        let e1 = err(401);
        let e2 = err(801);
        let ratio = e1 / e2;
        assert!(
            (3.5..4.5).contains(&ratio),
            "refinement ratio {ratio} not near 4 (e1={e1}, e2={e2})"
        );
    }

    #[test]
    fn integrate_constant_and_odd() {
        let g = build_grid(5.0, 101).unwrap();
        let ones = vec![1.0; g.n];
        assert!((integrate(&ones, &g).unwrap() - 10.0).abs() < 1e-13);
        let odd: Vec<f64> = g.nodes.iter().map(|y| y.powi(3)).collect();
        assert!(integrate(&odd, &g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn integrate_quadratic() {
        let g = build_grid(1.0, 201).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|y| y * y).collect();
        let v = integrate(&f, &g).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn integrate_exact_for_affine() {
        let g = build_grid(3.0, 7).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|y| 2.5 * y + 1.0).collect();
        assert!((integrate(&f, &g).unwrap() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn weighted_integral_reductions() {
        let g = build_grid(2.0, 41).unwrap();
        let rho0 = vec![1.0; g.n];
        let f: Vec<f64> = g.nodes.iter().map(|y| y * y + 1.0).collect();
        let w: Vec<f64> = g.nodes.iter().map(|y| y.cos()).collect();
        let prod: Vec<f64> = f.iter().zip(&w).map(|(a, b)| a * b).collect();
        let lhs = weighted_integral(&f, &rho0, -3.0, &w, &g).unwrap();
        let rhs = integrate(&prod, &g).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
        // alpha = 0 with unit extra weight is plain integration.
        let rho2: Vec<f64> = g.nodes.iter().map(|y| 1.0 + y.abs()).collect();
        let ones = vec![1.0; g.n];
        let a = weighted_integral(&f, &rho2, 0.0, &ones, &g).unwrap();
        let b = integrate(&f, &g).unwrap();
        assert!((a - b).abs() < 1e-13);
        // zero integrand
        let zeros = vec![0.0; g.n];
        assert_eq!(weighted_integral(&zeros, &rho2, -2.0, &ones, &g).unwrap(), 0.0);
    }

    #[test]
    fn weighted_integral_power_law_closed_form() {
        // rho0 = (1+|y|)^{-l}, f = extra = 1 on [-1,1]:
        // integrand is (1+|y|)^m with m = -l*alpha, whose integral is
        // 2*(2^{m+1}-1)/(m+1).
        let g = build_grid(1.0, 2001).unwrap();
        let l = 0.1;
        let alpha = -6.0;
        let m = -l * alpha;
        let rho0: Vec<f64> = g.nodes.iter().map(|y| (1.0 + y.abs()).powf(-l)).collect();
        let ones = vec![1.0; g.n];
        let exact = 2.0 * (2.0_f64.powf(m + 1.0) - 1.0) / (m + 1.0);
        let got = weighted_integral(&ones, &rho0, alpha, &ones, &g).unwrap();
        assert!((got - exact).abs() < 1e-6, "got {got}, exact {exact}");
    }

    #[test]
    fn weighted_integral_rejects_nonpositive_density() {
        let g = build_grid(1.0, 5).unwrap();
        let mut rho0 = vec![1.0; 5];
        rho0[2] = 0.0;
        let ones = vec![1.0; 5];
        assert!(weighted_integral(&ones, &rho0, -1.0, &ones, &g).is_err());
    }

    #[test]
    fn cutoff_plateau_support_and_range() {
        let g = build_grid(20.0, 801).unwrap();
        let r = 4.0;
        let xi = cutoff_xi(r, &g).unwrap();
        for (y, x) in g.nodes.iter().zip(&xi) {
            assert!((0.0..=1.0).contains(x));
            if y.abs() <= r {
                assert_eq!(*x, 1.0);
            }
            if y.abs() >= 2.0 * r {
                assert_eq!(*x, 0.0);
            }
        }
        // center value and monotone decay in |y|
        let mid = (g.n - 1) / 2;
        assert_eq!(xi[mid], 1.0);
        for i in mid..g.n - 1 {
            assert!(xi[i + 1] <= xi[i] + 1e-15);
        }
        assert!(cutoff_xi(0.5, &g).is_err());
    }

    #[test]
    fn summation_by_parts_second_order() {
        // |∫(ddy φ)ψ + ∫φ(ddy ψ) − [φψ]| shrinks at second order.
        let res = |n: usize| {
            let g = build_grid(2.0, n).unwrap();
            let phi: Vec<f64> = g.nodes.iter().map(|y| (y * 1.3).sin()).collect();
            let psi: Vec<f64> = g.nodes.iter().map(|y| (-y * y).exp()).collect();
            let dphi = ddy(&phi, &g).unwrap();
            let dpsi = ddy(&psi, &g).unwrap();
            let a: Vec<f64> = dphi.iter().zip(&psi).map(|(u, w)| u * w).collect();
            let b: Vec<f64> = phi.iter().zip(&dpsi).map(|(u, w)| u * w).collect();
            let boundary = phi[n - 1] * psi[n - 1] - phi[0] * psi[0];
            (integrate(&a, &g).unwrap() + integrate(&b, &g).unwrap() - boundary).abs()
        };
        let r1 = res(201);
        let r2 = res(401);
        assert!(r1 / r2 > 3.0, "SBP residual ratio {} too small", r1 / r2);
    }
}
