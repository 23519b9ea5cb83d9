//! Unconstrained Nelder-Mead simplex minimisation with standard coefficients
//! (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Initial simplex edge length along every axis.
    pub initial_step: f64,
    /// Converged when the spread of function values and the simplex extent
    /// both fall below these.
    pub f_tolerance: f64,
    pub x_tolerance: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iterations: 500,
            initial_step: 0.25,
            f_tolerance: 1e-10,
            x_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        f(x)
    };
    if dim == 0 {
        let value = eval(x0);
        return NelderMeadResult {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut trial2 = vec![0.0; dim];
    while iterations < opts.max_iterations {
        // Order vertices by value; ties keep their previous order.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let f_spread = values[dim] - values[0];
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= opts.f_tolerance && x_spread <= opts.x_tolerance {
            converged = true;
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
        for j in 0..dim {
            trial[j] = centroid[j] + (centroid[j] - worst[j]);
        }
        let f_reflect = eval(&trial);

        if f_reflect < values[0] {
            for j in 0..dim {
                trial2[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
            }
            let f_expand = eval(&trial2);
            if f_expand < f_reflect {
                simplex[dim].copy_from_slice(&trial2);
                values[dim] = f_expand;
            } else {
                simplex[dim].copy_from_slice(&trial);
                values[dim] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[dim - 1] {
            simplex[dim].copy_from_slice(&trial);
            values[dim] = f_reflect;
            continue;
        }
        // Contraction, outside if the reflection improved on the worst point.
        let outside = f_reflect < values[dim];
        for j in 0..dim {
            trial2[j] = if outside {
                centroid[j] + 0.5 * (trial[j] - centroid[j])
            } else {
                centroid[j] + 0.5 * (simplex[dim][j] - centroid[j])
            };
        }
        let f_contract = eval(&trial2);
        if f_contract < f_reflect.min(values[dim]) {
            simplex[dim].copy_from_slice(&trial2);
            values[dim] = f_contract;
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].clone();
        for i in 1..=dim {
            for j in 0..dim {
                simplex[i][j] = best[j] + 0.5 * (simplex[i][j] - best[j]);
            }
            values[i] = eval(&simplex[i]);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    NelderMeadResult {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 2.0).abs() < 1e-4);
        assert!(r.value < 1e-9);
    }

    #[test]
    fn rosenbrock() {
        let opts = NelderMeadOptions {
            max_iterations: 5000,
            ..Default::default()
        };
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &opts,
        );
        assert!(r.value < 1e-8, "{r:?}");
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (3.0 * x[0]).sin() * (2.0 * x[1]).cos() + 0.1 * x[2];
        let x0 = [0.3, -0.7, 0.2];
        let r = minimize(f, &x0, &NelderMeadOptions::default());
        assert!(r.value <= f(&x0));
    }

    #[test]
    fn zero_dimensions() {
        let r = minimize(|_| 4.5, &[], &NelderMeadOptions::default());
        assert_eq!(r.value, 4.5);
        assert!(r.converged);
    }
}
