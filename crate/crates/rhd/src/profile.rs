//! Wave locations in 1D density profiles.

/// Contact and shock bounding a dense shell moving to the right.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellFronts {
    pub contact: f64,
    pub shock: f64,
    pub peak: f64,
}

/// Position where the piecewise-linear profile through `(x, y)` crosses
/// `level` between samples `i` and `i + 1`.
fn crossing(x: &[f64], y: &[f64], i: usize, level: f64) -> f64 {
    let t = (level - y[i]) / (y[i + 1] - y[i]);
    x[i] + t * (x[i + 1] - x[i])
}

/// Locates the shell at the density maximum: the contact is the
/// half-height crossing on its left, between the peak and the density
/// `lookback` samples further left, and the shock the half-height crossing
/// to the right, between the peak and the undisturbed density at the right
/// end of the profile.
pub fn shell_fronts(x: &[f64], rho: &[f64], lookback: usize) -> Option<ShellFronts> {
    let n = rho.len();
    if n < 3 || x.len() != n {
        return None;
    }
    let (ip, &peak) = rho.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    if ip == 0 || ip + 1 == n {
        return None;
    }
    let right = rho[n - 1];
    let right_level = 0.5 * (peak + right);
    let is = (ip..n - 1).find(|&i| rho[i] >= right_level && rho[i + 1] < right_level)?;
    let left = rho[ip.saturating_sub(lookback)];
    let left_level = 0.5 * (peak + left);
    let ic = (0..ip).rev().find(|&i| rho[i] < left_level && rho[i + 1] >= left_level)?;
    Some(ShellFronts {
        contact: crossing(x, rho, ic, left_level),
        shock: crossing(x, rho, is, right_level),
        peak: x[ip],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_edges_of_a_step_shell() {
        let x: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let rho: Vec<f64> = x
            .iter()
            .map(|&x| if x < 0.6 { 0.1 } else if x < 0.7 { 10.0 } else { 1.0 })
            .collect();
        let f = shell_fronts(&x, &rho, 10).unwrap();
        assert!((f.contact - 0.6).abs() < 0.01);
        assert!((f.shock - 0.7).abs() < 0.01);
    }

    #[test]
    fn rejects_monotone_profiles() {
        let x = [0.0, 1.0, 2.0, 3.0];
        assert!(shell_fronts(&x, &[1.0, 2.0, 3.0, 4.0], 2).is_none());
    }
}
