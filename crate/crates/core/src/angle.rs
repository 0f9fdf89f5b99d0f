use std::f64::consts::PI;

/// Reduces `phi` into `[0, π)`.
pub fn reduce(phi: f64) -> f64 {
    let r = phi.rem_euclid(PI);
    // rem_euclid can round up to exactly π for tiny negative inputs
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Reduces `phi` into `[start, start + π)`.
pub fn reduce_from(phi: f64, start: f64) -> f64 {
    start + reduce(phi - start)
}

/// Sorted set of angles covering one period `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    angles: Vec<f64>,
}

impl AngleGrid {
    /// `n` equispaced angles `kπ/n`.
    pub fn uniform(n: usize) -> Self {
        let angles = (0..n).map(|k| k as f64 * PI / n as f64).collect();
        AngleGrid { angles }
    }

    /// Builds a grid from arbitrary angles, reduced mod π, sorted, deduplicated.
    pub fn from_angles<I: IntoIterator<Item = f64>>(angles: I) -> Self {
        let mut angles: Vec<f64> = angles.into_iter().map(reduce).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        if angles.len() > 1 && PI - angles[angles.len() - 1] + angles[0] < 1e-15 {
            angles.pop();
        }
        AngleGrid { angles }
    }

    /// Adds extra angles (e.g. the kinks of a gauge).
    pub fn with_points(&self, extra: &[f64]) -> Self {
        Self::from_angles(self.angles.iter().copied().chain(extra.iter().copied()))
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}
