//! Log-domain helpers shared by the distribution code.

/// `ln(k!)` through the log-gamma function.
#[inline]
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        0.0
    } else {
        libm::lgamma(k as f64 + 1.0)
    }
}

/// `ln P(K = k)` for `K ~ Poisson(rate)`, with `0^0 = 1` so that a zero rate
/// is a point mass at zero.
#[inline]
pub fn ln_poisson_pmf(k: u64, rate: f64) -> f64 {
    if rate == 0.0 {
        if k == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else if k == 0 {
        -rate
    } else {
        k as f64 * rate.ln() - rate - ln_factorial(k)
    }
}

/// Streaming `ln(sum(exp(x_i)))` that never overflows.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}
