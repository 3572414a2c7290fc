//! `sinc` and spherical Bessel functions of the first kind.

/// `sin(x)/x` with the removable singularity handled; `sinc(±∞) = 0`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else {
        x.sin() / x
    }
}

/// Threshold below which `j_l` is evaluated by its ascending series.
const SERIES_CUTOFF: f64 = 0.5;

/// Spherical Bessel function `j_l(x)` for `l ≥ -1`, `x ≥ 0`.
///
/// `j_{-1}(x) = cos(x)/x` is included because the eigenvalue closed form needs
/// it. Evaluation: ascending series for small `x`, trigonometric closed forms
/// for `l ≤ 2`, and Miller's downward recurrence otherwise (upward recurrence
/// is unstable once `l > x`).
pub fn spherical_bessel_j(l: i32, x: f64) -> f64 {
    assert!(l >= -1, "spherical_bessel_j: order {l} out of domain (l >= -1)");
    assert!(x >= 0.0, "spherical_bessel_j: argument {x} out of domain (x >= 0)");
    if l == -1 {
        return x.cos() / x;
    }
    let l = l as u32;
    if x < SERIES_CUTOFF {
        return j_series(l, x);
    }
    match l {
        0 => x.sin() / x,
        1 => x.sin() / (x * x) - x.cos() / x,
        2 => (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x),
        _ => {
            if x > l as f64 + 10.0 {
                // Far above the turning point upward recurrence is stable.
                let mut jm = x.sin() / x;
                let mut j = jm / x - x.cos() / x;
                for n in 1..l {
                    let next = (2 * n + 1) as f64 / x * j - jm;
                    jm = j;
                    j = next;
                }
                j
            } else {
                j_miller(l, x)
            }
        }
    }
}

/// All of `j_0(x) ... j_{l_max}(x)` at once.
pub fn spherical_bessel_j_array(l_max: u32, x: f64) -> Vec<f64> {
    (0..=l_max as i32).map(|l| spherical_bessel_j(l, x)).collect()
}

fn j_series(l: u32, x: f64) -> f64 {
    // j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    let mut lead = 1.0;
    for n in 0..l {
        lead *= x / (2 * n + 3) as f64;
    }
    let x2 = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        term *= x2 / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn j_miller(l: u32, x: f64) -> f64 {
    // Downward recurrence from well above l, normalized against j_0.
    let start = l + 16 + (x as u32);
    let mut jp = 0.0f64;
    let mut j = 1e-300;
    let mut out = 0.0;
    for n in (0..=start).rev() {
        let jm = (2 * n + 3) as f64 / x * j - jp;
        if n == l {
            out = jm;
        }
        jp = j;
        j = jm;
        // Rescale to dodge overflow on long recurrences.
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp *= s;
            out *= s;
        }
    }
    out * (x.sin() / x) / j
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert_abs_diff_eq!(sinc(std::f64::consts::PI), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(1.0), 0.8414709848078965, epsilon = 1e-15);
        assert_eq!(sinc(f64::INFINITY), 0.0);
    }

    #[test]
    fn low_order_values() {
        assert_eq!(spherical_bessel_j(0, 0.0), 1.0);
        assert_eq!(spherical_bessel_j(1, 0.0), 0.0);
        assert_eq!(spherical_bessel_j(7, 0.0), 0.0);
        assert_abs_diff_eq!(spherical_bessel_j(0, 4.0), (4.0f64).sin() / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spherical_bessel_j(0, 4.0), -0.18920062382698205, epsilon = 1e-12);
        assert_abs_diff_eq!(spherical_bessel_j(-1, 4.0), (4.0f64).cos() / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn series_matches_closed_forms_at_cutoff() {
        // The trig forms lose digits to cancellation as x shrinks (which is
        // why the series branch exists), so the tolerance is loose below the
        // cutoff and tight just above it.
        for l in 0..3 {
            for (x, tol) in [(0.4999f64, 1e-12), (0.5001, 1e-12), (0.25, 1e-10)] {
                let closed = match l {
                    0 => x.sin() / x,
                    1 => x.sin() / (x * x) - x.cos() / x,
                    _ => (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x),
                };
                assert_relative_eq!(spherical_bessel_j(l, x), closed, max_relative = tol);
            }
        }
    }

    #[test]
    fn recurrence_identity() {
        // j_{l-1}(x) + j_{l+1}(x) = (2l+1)/x j_l(x), DLMF 10.51.1.
        for &x in &[0.7, 2.0, 5.0, 13.0, 40.0] {
            for l in 1..=14i32 {
                let lhs = spherical_bessel_j(l - 1, x) + spherical_bessel_j(l + 1, x);
                let rhs = (2 * l + 1) as f64 / x * spherical_bessel_j(l, x);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn completeness_sum() {
        // sum_l (2l+1) j_l(x)^2 = 1.
        for &x in &[0.5, 1.0, 2.0] {
            let s: f64 = (0..=40)
                .map(|l| (2 * l + 1) as f64 * spherical_bessel_j(l, x).powi(2))
                .sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn addition_theorem_alternating_sum() {
        // sum_l (-1)^l (2l+1) j_l(x)^2 = sinc(2x); this identity underwrites
        // the partial-wave channel construction.
        for &x in &[0.5, 1.0, 2.0] {
            let s: f64 = (0..=40)
                .map(|l| {
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (2 * l + 1) as f64 * spherical_bessel_j(l, x).powi(2)
                })
                .sum();
            assert_abs_diff_eq!(s, sinc(2.0 * x), epsilon = 1e-6);
        }
    }
}
