//! All complex roots of a polynomial by Ehrlich–Aberth iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// `|p(x)|` relative to the size of the terms that produce it.
pub fn relative_residual(coeffs: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    let scale: f64 = coeffs.iter().enumerate().map(|(i, a)| a.norm() * r.powi(i as i32)).sum();
    let (p, _) = horner(coeffs, x);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Starting points spread over circles whose radii come from the upper
/// convex hull of `(i, ln|a_i|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, a)| (i, a.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (i0, y0) = hull[hull.len() - 2];
            let (i1, y1) = hull[hull.len() - 1];
            // Drop the middle point unless it lies strictly above the chord.
            let cross = (i1 as f64 - i0 as f64) * (p.1 - y0) - (y1 - y0) * (p.0 as f64 - i0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(deg);
    for (e, pair) in hull.windows(2).enumerate() {
        let ((i0, y0), (i1, y1)) = (pair[0], pair[1]);
        let m = i1 - i0;
        let radius = (-(y1 - y0) / m as f64).exp();
        for k in 0..m {
            let angle = std::f64::consts::TAU * (k as f64 / m as f64 + e as f64 / deg as f64) + 0.4;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

/// Roots of `sum_i coeffs[i] x^i`, with `coeffs` in ascending order.
pub fn polynomial_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|a| a.norm() == 0.0) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Ok(Vec::new());
    }
    // Roots at the origin are split off exactly.
    let zeros = coeffs.iter().take_while(|a| a.norm() == 0.0).count();
    let coeffs = coeffs[zeros..].to_vec();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    if deg == 1 {
        roots.push(-coeffs[0] / coeffs[1]);
        return Ok(roots);
    }
    let mut z = initial_guesses(&coeffs);
    let mut converged = false;
    for _ in 0..1000 {
        let mut largest_step: f64 = 0.0;
        for k in 0..deg {
            let (p, dp) = horner(&coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|j| *j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest_step = largest_step.max(step.norm() / z[k].norm().max(f64::MIN_POSITIVE));
            }
        }
        if largest_step < 1e-15 {
            converged = true;
            break;
        }
    }
    // A few Newton steps sharpen each simple root.
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&coeffs, *root);
            let next = *root - p / dp;
            if next.is_finite() && relative_residual(&coeffs, next) < relative_residual(&coeffs, *root) {
                *root = next;
            } else {
                break;
            }
        }
    }
    let worst = z.iter().map(|r| relative_residual(&coeffs, *r)).fold(0.0, f64::max);
    if !converged && worst > tol {
        return Err(Error::RootFindFailure(format!("Aberth iteration stalled with relative residual {worst:e}")));
    }
    if worst > tol {
        return Err(Error::RootFindFailure(format!("relative residual {worst:e} above {tol:e}")));
    }
    roots.extend(z);
    Ok(roots)
}

/// `coeffs / (x - r)`, dropping the remainder.
pub fn deflate(coeffs: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); deg];
    let mut carry = Complex64::new(0.0, 0.0);
    for i in (0..deg).rev() {
        carry = coeffs[i + 1] + carry * r;
        out[i] = carry;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0)];
        for r in roots {
            let mut next = vec![c(0.0); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            p = next;
        }
        p
    }

    fn assert_same_roots(found: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(found.len(), expected.len());
        for e in expected {
            let best = found.iter().map(|f| (f - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < tol * e.norm().max(1.0), "missing root {e}: {found:?}");
        }
    }

    #[test]
    fn quadratic_kernel_of_dyck() {
        // z u^2 - u + z at z = 0.4 has roots 1/2 and 2.
        let roots = polynomial_roots(&[c(0.4), c(-1.0), c(0.4)], 1e-12).unwrap();
        assert_same_roots(&roots, &[c(0.5), c(2.0)], 1e-13);
    }

    #[test]
    fn widely_spread_moduli() {
        let expected = [c(1e-4), c(-3e-2), Complex64::new(0.5, 2.0), Complex64::new(0.5, -2.0), c(7e3)];
        let roots = polynomial_roots(&from_roots(&expected), 1e-12).unwrap();
        assert_same_roots(&roots, &expected, 1e-10);
    }

    #[test]
    fn roots_of_unity() {
        let mut coeffs = vec![c(0.0); 9];
        coeffs[0] = c(-1.0);
        coeffs[8] = c(1.0);
        let roots = polynomial_roots(&coeffs, 1e-12).unwrap();
        let expected: Vec<_> =
            (0..8).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0)).collect();
        assert_same_roots(&roots, &expected, 1e-12);
    }

    #[test]
    fn zero_roots_are_exact() {
        let roots = polynomial_roots(&[c(0.0), c(0.0), c(-2.0), c(1.0)], 1e-12).unwrap();
        assert_same_roots(&roots, &[c(0.0), c(0.0), c(2.0)], 1e-14);
    }

    #[test]
    fn deflation_removes_a_factor() {
        let p = from_roots(&[c(1.5), c(-2.0), c(3.0)]);
        let q = deflate(&p, c(1.5));
        assert_eq!(q.len(), 3);
        let roots = polynomial_roots(&q, 1e-12).unwrap();
        assert_same_roots(&roots, &[c(-2.0), c(3.0)], 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn recovers_random_roots(
                parts in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..7)
            ) {
                let expected: Vec<Complex64> = parts.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
                let coeffs = from_roots(&expected);
                let roots = polynomial_roots(&coeffs, 1e-9).unwrap();
                prop_assert_eq!(roots.len(), expected.len());
                for r in &roots {
                    prop_assert!(relative_residual(&coeffs, *r) < 1e-9);
                }
            }
        }
    }
}
