//! Per-iteration aggregation across trials.

/// Streaming mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub n: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    /// Sample standard deviation; zero for fewer than two samples.
    pub fn sd(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).sqrt()
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sd() / (self.n as f64).sqrt()
        }
    }
}

/// Mean gap and its standard error at each iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStats {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub trials: usize,
}

impl SeriesStats {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    /// Mean gap at 1-based iteration `t`.
    pub fn at(&self, t: usize) -> f64 {
        self.mean[t - 1]
    }

    /// Two-pass reference computation over complete per-trial series.
    pub fn two_pass(series: &[Vec<f64>]) -> Self {
        let n = series.len();
        let len = series.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; len];
        let mut stderr = vec![0.0; len];
        for t in 0..len {
            let m = series.iter().map(|s| s[t]).sum::<f64>() / n as f64;
            mean[t] = m;
            if n > 1 {
                let ss: f64 = series.iter().map(|s| (s[t] - m).powi(2)).sum();
                stderr[t] = (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt();
            }
        }
        Self { mean, stderr, trials: n }
    }

    /// Least-squares slope of `log10 mean` against `log10 t` for
    /// `t ∈ [from, to]`.
    pub fn loglog_slope(&self, from: usize, to: usize) -> f64 {
        let pts: Vec<(f64, f64)> =
            (from..=to.min(self.len())).map(|t| ((t as f64).log10(), self.at(t).max(f64::MIN_POSITIVE).log10())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }
}

/// Accumulates per-trial series in the order they are pushed.
#[derive(Debug, Clone)]
pub struct SeriesAccumulator {
    cells: Vec<Welford>,
}

impl SeriesAccumulator {
    pub fn new(len: usize) -> Self {
        Self { cells: vec![Welford::default(); len] }
    }

    pub fn push(&mut self, series: &[f64]) {
        debug_assert_eq!(series.len(), self.cells.len());
        for (c, v) in self.cells.iter_mut().zip(series) {
            c.push(*v);
        }
    }

    pub fn finish(&self) -> SeriesStats {
        SeriesStats {
            mean: self.cells.iter().map(|c| c.mean).collect(),
            stderr: self.cells.iter().map(Welford::stderr).collect(),
            trials: self.cells.first().map_or(0, |c| c.n),
        }
    }
}
