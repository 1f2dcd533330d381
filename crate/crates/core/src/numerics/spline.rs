//! Natural cubic spline on a uniform grid with linear extrapolation.

#[derive(Clone, Debug, PartialEq)]
pub struct UniformSpline {
    start: f64,
    step: f64,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl UniformSpline {
    /// Interpolate `values[i]` at `start + i·step`. Needs at least 3 points.
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n >= 3 && step > 0.0, "spline needs >= 3 points and positive step");
        // tridiagonal solve for the interior second derivatives (Thomas)
        let mut second = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let rhs = 6.0 * (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (step * step);
            let denom = 4.0 - c_prime[i - 1];
            c_prime[i] = 1.0 / denom;
            d_prime[i] = (rhs - d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            second[i] = d_prime[i] - c_prime[i] * second[i + 1];
        }
        UniformSpline {
            start,
            step,
            values,
            second,
        }
    }

    fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn slope_at_node(&self, i: usize) -> f64 {
        let n = self.values.len();
        let h = self.step;
        if i + 1 < n {
            (self.values[i + 1] - self.values[i]) / h - h * (2.0 * self.second[i] + self.second[i + 1]) / 6.0
        } else {
            (self.values[i] - self.values[i - 1]) / h + h * (self.second[i - 1] + 2.0 * self.second[i]) / 6.0
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.values.len();
        if t <= self.start {
            return self.values[0] + self.slope_at_node(0) * (t - self.start);
        }
        if t >= self.end() {
            return self.values[n - 1] + self.slope_at_node(n - 1) * (t - self.end());
        }
        let pos = (t - self.start) / self.step;
        let i = (pos.floor() as usize).min(n - 2);
        let b = pos - i as f64;
        let a = 1.0 - b;
        let h2 = self.step * self.step;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h2 / 6.0
    }
}
