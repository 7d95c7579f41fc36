//! Derivative-free minimization over the complex plane.

use num_complex::Complex64;

/// Nelder–Mead on `f: ℂ → ℝ` seen as a function of two real variables.
///
/// Starts from the triangle `start, start + step, start + i·step` and stops
/// when the simplex diameter drops below `min_diameter` or after
/// `max_iter` iterations. Returns the best vertex and its value.
pub(crate) fn nelder_mead(
    f: impl Fn(Complex64) -> f64,
    start: Complex64,
    step: f64,
    min_diameter: f64,
    max_iter: usize,
) -> (Complex64, f64) {
    let mut s: [(Complex64, f64); 3] = [
        (start, 0.0),
        (start + Complex64::new(step, 0.0), 0.0),
        (start + Complex64::new(0.0, step), 0.0),
    ];
    for v in s.iter_mut() {
        v.1 = f(v.0);
    }
    for _ in 0..max_iter {
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = (s[0].0 - s[1].0)
            .norm()
            .max((s[0].0 - s[2].0).norm())
            .max((s[1].0 - s[2].0).norm());
        if diameter < min_diameter {
            break;
        }
        let centroid = (s[0].0 + s[1].0) * 0.5;
        let worst = s[2];
        let reflected = centroid + (centroid - worst.0);
        let fr = f(reflected);
        if fr < s[0].1 {
            let expanded = centroid + (centroid - worst.0) * 2.0;
            let fe = f(expanded);
            s[2] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < s[1].1 {
            s[2] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst.1 {
                let c = centroid + (reflected - centroid) * 0.5;
                (c, f(c))
            } else {
                let c = centroid + (worst.0 - centroid) * 0.5;
                (c, f(c))
            };
            if fc < worst.1.min(fr) {
                s[2] = (contracted, fc);
            } else {
                let best = s[0].0;
                for v in s.iter_mut().skip(1) {
                    v.0 = best + (v.0 - best) * 0.5;
                    v.1 = f(v.0);
                }
            }
        }
    }
    s.sort_by(|a, b| a.1.total_cmp(&b.1));
    s[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_smooth_minimum() {
        let target = Complex64::new(0.3, -1.2);
        let (z, v) = nelder_mead(
            |z| (z - target).norm_sqr(),
            Complex64::new(2.0, 2.0),
            0.5,
            1e-10,
            5000,
        );
        assert!((z - target).norm() < 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn finds_kink_minimum() {
        // 2|ξ| + |1 + ξ| has its minimum 1 at the cone point ξ = 0
        let (z, v) = nelder_mead(
            |z| 2.0 * z.norm() + (Complex64::new(1.0, 0.0) + z).norm(),
            Complex64::new(0.4, -0.3),
            0.1,
            1e-10,
            5000,
        );
        assert!(z.norm() < 1e-8);
        assert!((v - 1.0).abs() < 1e-8);
    }
}
