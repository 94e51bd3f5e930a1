//! B-splines on a clamped knot sequence, evaluated with de Boor's recursion.

/// Clamped knot vector over breakpoints `0 = p₀ < … < p_M = R`.
#[derive(Debug, Clone)]
pub struct KnotVector {
    order: usize,
    breakpoints: Vec<f64>,
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(breakpoints: Vec<f64>, order: usize) -> Self {
        assert!(order >= 2 && breakpoints.len() >= 2);
        let first = breakpoints[0];
        let last = *breakpoints.last().unwrap();
        let mut knots = vec![first; order - 1];
        knots.extend_from_slice(&breakpoints);
        knots.extend(std::iter::repeat_n(last, order - 1));
        Self {
            order,
            breakpoints,
            knots,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Total number of B-splines, `M + k − 1`.
    pub fn len(&self) -> usize {
        self.knots.len() - self.order
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values and first derivatives of the `k` splines that are nonzero on
    /// breakpoint interval `span`, at `x` inside it. Returns the index of the
    /// first of them.
    pub fn eval(&self, span: usize, x: f64, values: &mut [f64], derivs: &mut [f64]) -> usize {
        let k = self.order;
        let t = &self.knots;
        let mu = span + k - 1;
        let mut b = vec![0.0; k];
        let mut lower = vec![0.0; k];
        let mut left = vec![0.0; k];
        let mut right = vec![0.0; k];
        b[0] = 1.0;
        for j in 1..k {
            if j == k - 1 {
                lower[..j].copy_from_slice(&b[..j]);
            }
            left[j] = x - t[mu + 1 - j];
            right[j] = t[mu + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = b[r] / (right[r + 1] + left[j - r]);
                b[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            b[j] = saved;
        }
        if k == 1 {
            lower[0] = 0.0;
        }
        let first = mu + 1 - k;
        let kf = (k - 1) as f64;
        for r in 0..k {
            let i = first + r;
            let mut d = 0.0;
            if r >= 1 {
                let h = t[i + k - 1] - t[i];
                if h > 0.0 {
                    d += lower[r - 1] / h;
                }
            }
            if r + 1 < k {
                let h = t[i + k] - t[i + 1];
                if h > 0.0 {
                    d -= lower[r] / h;
                }
            }
            values[r] = b[r];
            derivs[r] = kf * d;
        }
        first
    }
}
