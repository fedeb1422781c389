//! One- and two-dimensional search helpers used by the link optimizers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Bisection on a boolean predicate that changes value once on `[lo, hi]`.
///
/// `pred(feasible_end)` must be true and `pred(other_end)` false. Returns a
/// point on the feasible side within `tol` of the switch point.
pub fn bisect_boundary(mut feasible: f64, mut infeasible: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    debug_assert!(pred(feasible));
    while (infeasible - feasible).abs() > tol {
        let mid = 0.5 * (feasible + infeasible);
        if mid == feasible || mid == infeasible {
            break;
        }
        if pred(mid) {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    feasible
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)`; the endpoints are compared against the interior
/// estimate so a monotone `f` yields its boundary value.
pub fn golden_max(lo: f64, hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Index of the largest value; the first index wins ties.
pub fn argmax(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Compass search maximizing `f(u, v)` over the simplex `u, v >= 0, u + v <= budget`.
///
/// Starts at `start` with step `step` and halves the step whenever no
/// neighbor improves by more than `min_gain`, until the step drops below `tol`.
pub fn compass_max_simplex(
    start: (f64, f64),
    budget: f64,
    step: f64,
    tol: f64,
    min_gain: f64,
    f: impl Fn(f64, f64) -> f64,
) -> ((f64, f64), f64) {
    let project = |u: f64, v: f64| -> (f64, f64) {
        let (u, v) = (u.max(0.0), v.max(0.0));
        let s = u + v;
        if s > budget && s > 0.0 {
            (u * budget / s, v * budget / s)
        } else {
            (u, v)
        }
    };
    let mut cur = start;
    let mut best = f(cur.0, cur.1);
    let mut h = step;
    // directions: axes plus the simplex edge (trade one power for the other)
    const DIRS: [(f64, f64); 6] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
    ];
    while h > tol {
        let mut moved = false;
        for (du, dv) in DIRS {
            let cand = project(cur.0 + du * h, cur.1 + dv * h);
            let val = f(cand.0, cand.1);
            if val > best + min_gain {
                best = val;
                cur = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (cur, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_threshold() {
        let x = bisect_boundary(0.0, 10.0, 1e-12, |x| x <= std::f64::consts::PI);
        assert!(x <= std::f64::consts::PI && std::f64::consts::PI - x < 1e-11);
        let y = bisect_boundary(10.0, 0.0, 1e-12, |x| x >= 2.5);
        assert!(y >= 2.5 && y - 2.5 < 1e-11);
    }

    #[test]
    fn golden_on_parabola_and_monotone() {
        let (x, v) = golden_max(-3.0, 5.0, 1e-10, |x| -(x - 1.25) * (x - 1.25) + 2.0);
        assert!((x - 1.25).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
        let (x, _) = golden_max(0.0, 1.0, 1e-10, |x| x);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn argmax_first_tie() {
        assert_eq!(argmax([1.0, 3.0, 3.0, 2.0]), Some((1, 3.0)));
        assert_eq!(argmax(std::iter::empty()), None);
    }

    #[test]
    fn compass_finds_simplex_optimum() {
        // max of -(u-0.3)^2 - (v-0.5)^2 inside the unit simplex
        let ((u, v), _) = compass_max_simplex((0.0, 0.0), 1.0, 0.25, 1e-10, 0.0, |u, v| {
            -(u - 0.3).powi(2) - (v - 0.5).powi(2)
        });
        assert!((u - 0.3).abs() < 1e-8 && (v - 0.5).abs() < 1e-8);
        // optimum outside: projected onto u + v = 1
        let ((u, v), _) = compass_max_simplex((0.0, 0.0), 1.0, 0.25, 1e-10, 0.0, |u, v| u + 2.0 * v);
        assert!((u + v - 1.0).abs() < 1e-8 && v > 0.999);
    }
}
