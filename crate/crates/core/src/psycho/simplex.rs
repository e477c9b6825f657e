//! Nelder–Mead downhill simplex for small, smooth, unconstrained problems.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop when every vertex lies within this distance (max-norm) of the best one.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-7,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` starting from `x0`; the initial simplex steps `step[i]` along axis `i`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: &[f64], opts: SimplexOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(dim, step.len(), "step must match the dimension of x0");

    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut verts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    verts.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let fx = eval(&x);
        verts.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        verts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = verts[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&verts[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let worst = dim;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| verts[..worst].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&verts[worst].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = toward(REFLECT);
        let fr = eval(&xr);
        if fr < verts[0].1 {
            let xe = toward(REFLECT * EXPAND);
            let fe = eval(&xe);
            verts[worst] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < verts[worst - 1].1 {
            verts[worst] = (xr, fr);
            continue;
        }
        // contraction: outside if the reflection improved on the worst point, else inside
        let (xc, fc) = if fr < verts[worst].1 {
            let xc = toward(REFLECT * CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(-CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(verts[worst].1) {
            verts[worst] = (xc, fc);
            continue;
        }
        let best = verts[0].0.clone();
        for v in verts.iter_mut().skip(1) {
            for (xi, bi) in v.0.iter_mut().zip(&best) {
                *xi = bi + SHRINK * (*xi - bi);
            }
            v.1 = eval(&v.0);
        }
    }
    verts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = verts.swap_remove(0);
    Minimum {
        x,
        fx,
        iterations,
        converged,
    }
}
