//! Nelder–Mead simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    /// Offset of the initial vertices from the start point, per coordinate.
    pub initial_step: f64,
    /// Stop once every vertex is within this distance (max-norm) of the best.
    pub xtol: f64,
    /// Also stop when the spread of values falls below this (0 disables).
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            initial_step: 0.1,
            xtol: 1e-7,
            ftol: 0.0,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl NelderMead {
    /// Minimizes `f` from `x0`. NaN values count as `+∞`. The returned point
    /// is never worse than `x0`.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let dim = x0.len();
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if dim == 0 {
            let value = eval(x0);
            return Minimum {
                x: Vec::new(),
                value,
                iterations: 0,
                converged: true,
            };
        }

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        simplex.push(x0.to_vec());
        for i in 0..dim {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

        let mut centroid = vec![0.0; dim];
        let mut trial = vec![0.0; dim];
        let mut trial2 = vec![0.0; dim];
        let mut iterations = 0;
        let mut converged = false;

        loop {
            // order: best first
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let diameter = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| abs(a - b)))
                .fold(0.0, f64::max);
            let spread = values[dim] - values[0];
            if diameter < self.xtol
                || (self.ftol > 0.0 && spread.is_finite() && spread <= self.ftol)
            {
                converged = true;
                break;
            }
            if iterations >= self.max_iter {
                break;
            }
            iterations += 1;

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for v in &simplex[..dim] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim as f64;
                }
            }
            let worst = &simplex[dim];
            let along = |t: f64, out: &mut Vec<f64>| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                    *o = c + t * (c - w);
                }
            };

            along(1.0, &mut trial);
            let fr = eval(&trial);
            if fr < values[0] {
                along(2.0, &mut trial2);
                let fe = eval(&trial2);
                if fe < fr {
                    simplex[dim].copy_from_slice(&trial2);
                    values[dim] = fe;
                } else {
                    simplex[dim].copy_from_slice(&trial);
                    values[dim] = fr;
                }
                continue;
            }
            if fr < values[dim - 1] {
                simplex[dim].copy_from_slice(&trial);
                values[dim] = fr;
                continue;
            }
            // contraction, outside or inside
            let (t, reference) = if fr < values[dim] {
                (0.5, fr)
            } else {
                (-0.5, values[dim])
            };
            along(t, &mut trial2);
            let fc = eval(&trial2);
            if fc < reference {
                simplex[dim].copy_from_slice(&trial2);
                values[dim] = fc;
                continue;
            }
            // shrink towards the best vertex
            let best = simplex[0].clone();
            for i in 1..=dim {
                for (x, b) in simplex[i].iter_mut().zip(&best) {
                    *x = b + 0.5 * (*x - b);
                }
                values[i] = eval(&simplex[i]);
            }
        }

        Minimum {
            x: simplex.swap_remove(0),
            value: values[0],
            iterations,
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            xtol: 1e-10,
            max_iter: 20_000,
            ..NelderMead::default()
        };
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.converged);
        assert!(
            abs(m.x[0] - 1.0) < 1e-6 && abs(m.x[1] - 1.0) < 1e-6,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn one_dimensional_and_empty() {
        let m = NelderMead::default().minimize(|x| (x[0] - 3.0).powi(2), &[0.0]);
        assert!(m.converged && abs(m.x[0] - 3.0) < 1e-6);
        let m = NelderMead::default().minimize(|_| 2.0, &[]);
        assert!(m.converged && m.value == 2.0 && m.x.is_empty());
    }

    #[test]
    fn never_worse_than_start_and_survives_nan() {
        let f = |x: &[f64]| {
            if x[0] > 0.5 {
                f64::NAN
            } else {
                (x[0] - 0.2).powi(2)
            }
        };
        let m = NelderMead::default().minimize(f, &[0.45]);
        assert!(m.value <= f(&[0.45]));
        assert!(abs(m.x[0] - 0.2) < 1e-6);
    }

    #[test]
    fn reports_iteration_cap() {
        let nm = NelderMead {
            max_iter: 3,
            ..NelderMead::default()
        };
        let m = nm.minimize(|x| x[0] * x[0] + x[1] * x[1], &[5.0, 5.0]);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }
}
