/// Reduces a phase modulo one into `[0, 1)`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Distance between two phases on the unit circle, in `[0, 0.5]`.
///
/// Inputs are reduced modulo one first, so any finite reals are accepted.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_phase(a) - wrap_phase(b)).abs();
    d.min(1.0 - d)
}
