//! Nelder-Mead over the two real coordinates of a disc point.

type Point = [f64; 2];

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp(from: Point, to: Point, t: f64) -> Point {
    [from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])]
}

fn diameter(v: &[(Point, f64); 3]) -> f64 {
    let d = |a: Point, b: Point| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    d(v[0].0, v[1].0).max(d(v[0].0, v[2].0)).max(d(v[1].0, v[2].0))
}

/// Minimizes `f` from `start`; returns the best vertex and its value. The
/// returned value never exceeds `f(start)`.
pub(crate) fn minimize(
    mut f: impl FnMut(Point) -> f64,
    start: Point,
    step: f64,
    max_iter: usize,
    xtol: f64,
) -> (Point, f64) {
    let mut v = [
        (start, f(start)),
        ([start[0] + step, start[1]], 0.0),
        ([start[0], start[1] + step], 0.0),
    ];
    v[1].1 = f(v[1].0);
    v[2].1 = f(v[2].0);

    for _ in 0..max_iter {
        // stable sort keeps the earlier vertex on ties
        v.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&v) <= xtol {
            break;
        }
        let (best, worst) = (v[0], v[2]);
        let centroid = lerp(v[0].0, v[1].0, 0.5);

        let xr = lerp(centroid, worst.0, -REFLECT);
        let fr = f(xr);
        if fr < best.1 {
            let xe = lerp(centroid, worst.0, -EXPAND);
            let fe = f(xe);
            v[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < v[1].1 {
            v[2] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let x = lerp(centroid, xr, CONTRACT);
            (x, f(x))
        } else {
            let x = lerp(centroid, worst.0, CONTRACT);
            (x, f(x))
        };
        if fc < worst.1.min(fr) {
            v[2] = (xc, fc);
            continue;
        }
        for vertex in &mut v[1..] {
            let x = lerp(best.0, vertex.0, SHRINK);
            *vertex = (x, f(x));
        }
    }
    v.sort_by(|a, b| a.1.total_cmp(&b.1));
    v[0]
}
