//! Fixed-step classical Runge-Kutta on flat state vectors.

/// Scratch buffers for [`Rk4::step`].
pub(crate) struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `y` by `h`. `f(stage, y, dy)` evaluates the right-hand side;
    /// `stage` is 0 at the start of the step, 1 at the midpoint and 2 at the
    /// end, for right-hand sides sampled on a grid.
    pub(crate) fn step<F>(&mut self, y: &mut [f64], h: f64, mut f: F)
    where
        F: FnMut(usize, &[f64], &mut [f64]),
    {
        f(0, y, &mut self.k1);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *t = y + 0.5 * h * k;
        }
        f(1, &self.tmp, &mut self.k2);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *t = y + 0.5 * h * k;
        }
        f(1, &self.tmp, &mut self.k3);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *t = y + h * k;
        }
        f(2, &self.tmp, &mut self.k4);
        for (i, y) in y.iter_mut().enumerate() {
            *y += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let solve = |n: usize| {
            let mut y = [1.0];
            let h = 1.0 / n as f64;
            let mut rk = Rk4::new(1);
            for _ in 0..n {
                rk.step(&mut y, h, |_, y, dy| dy[0] = -2.0 * y[0]);
            }
            (y[0] - (-2.0f64).exp()).abs()
        };
        let ratio = solve(20) / solve(40);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }
}
