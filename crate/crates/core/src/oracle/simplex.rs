//! Nelder-Mead downhill simplex with dimension-adaptive coefficients.
//!
//! Coefficients follow Gao and Han: reflection 1, expansion `1 + 2/n`,
//! contraction `3/4 - 1/(2n)`, shrink `1 - 1/n`. With the classic
//! `(1, 2, 1/2, 1/2)` choice the method stalls beyond ten or so variables.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Iteration cap (each iteration is one reflect/expand/contract/shrink step).
    pub max_iters: usize,
    /// Stop once `f(worst) - f(best) <= ftol` and the simplex diameter is
    /// below `xtol`.
    pub ftol: f64,
    pub xtol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iters: 2000,
            ftol: 1e-12,
            xtol: 1e-10,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: usize,
    pub converged: bool,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn adaptive(n: usize) -> Self {
        let n = n.max(2) as f64;
        Coefficients {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 0.5 / n,
            shrink: 1.0 - 1.0 / n,
        }
    }
}

/// Minimizes `f` starting from `x0`. Non-finite objective values are treated
/// as `+inf`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        let value = eval(x0);
        return SimplexResult {
            x: Vec::new(),
            value,
            iters: 0,
            converged: true,
        };
    }
    let coef = Coefficients::adaptive(n);

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p)).collect();
    let mut order: Vec<usize> = (0..=n).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut second = vec![0.0; n];
    let mut iters = 0;
    let mut converged = false;

    while iters < opts.max_iters {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, next_worst) = (order[0], order[n], order[n - 1]);

        if values[worst] - values[best] <= opts.ftol && diameter(&points, best) <= opts.xtol {
            converged = true;
            break;
        }
        iters += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&points[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        along(&centroid, &points[worst], -coef.reflect, &mut trial);
        let reflected = eval(&trial);

        if reflected < values[best] {
            along(
                &centroid,
                &points[worst],
                -coef.reflect * coef.expand,
                &mut second,
            );
            let expanded = eval(&second);
            if expanded < reflected {
                points[worst].copy_from_slice(&second);
                values[worst] = expanded;
            } else {
                points[worst].copy_from_slice(&trial);
                values[worst] = reflected;
            }
            continue;
        }
        if reflected < values[next_worst] {
            points[worst].copy_from_slice(&trial);
            values[worst] = reflected;
            continue;
        }
        // contraction: outside if the reflection improved on the worst point
        let (t, reference) = if reflected < values[worst] {
            (-coef.reflect * coef.contract, reflected)
        } else {
            (coef.contract, values[worst])
        };
        along(&centroid, &points[worst], t, &mut second);
        let contracted = eval(&second);
        if contracted <= reference {
            points[worst].copy_from_slice(&second);
            values[worst] = contracted;
            continue;
        }
        let anchor = points[best].clone();
        for &idx in &order[1..] {
            for (x, a) in points[idx].iter_mut().zip(&anchor) {
                *x = a + coef.shrink * (*x - a);
            }
            values[idx] = eval(&points[idx]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex is nonempty");
    SimplexResult {
        x: points.swap_remove(best),
        value: values[best],
        iters,
        converged,
    }
}

/// Repeated simplex runs from the incumbent, halving the initial step each
/// time, until `max_iters` total iterations are spent or a run gains no more
/// than `tol`. Returns `(value, x)`; never worse than `x0`.
pub fn polish<F>(f: F, x0: Vec<f64>, max_iters: usize, tol: f64, step: f64) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = x0;
    let mut value = f(&x);
    let mut budget = max_iters;
    let mut step = step;
    while budget > 0 {
        let opts = SimplexOptions {
            max_iters: budget,
            ftol: tol,
            xtol: 1e-9,
            step,
        };
        let run = minimize(&f, &x, &opts);
        budget = budget.saturating_sub(run.iters.max(1));
        let gain = value - run.value;
        if run.value < value {
            x = run.x;
            value = run.value;
        }
        if gain <= tol {
            break;
        }
        step = (step * 0.5).max(1e-4);
    }
    (value, x)
}

/// `out = c + t (w - c)`.
fn along(c: &[f64], w: &[f64], t: f64, out: &mut [f64]) {
    for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
        *o = ci + t * (wi - ci);
    }
}

fn diameter(points: &[Vec<f64>], best: usize) -> f64 {
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(&points[best])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
