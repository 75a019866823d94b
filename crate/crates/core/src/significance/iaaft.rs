use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Iterative amplitude-adjusted Fourier transform surrogates of one series.
///
/// Each iteration imposes the original Fourier amplitudes (keeping the
/// current phases) and then restores the original value distribution by
/// rank ordering. Iteration stops once the rank ordering no longer changes
/// or after `max_iter` iterations; the returned series is always the
/// rank-ordered one, so it is an exact permutation of the input values.
pub struct IaaftGenerator {
    sorted: Vec<f64>,
    amplitudes: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    original: Vec<f64>,
}

impl IaaftGenerator {
    pub fn new(series: &[f64]) -> Self {
        let n = series.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let mut spectrum: Vec<Complex64> = series.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward.process(&mut spectrum);
        let amplitudes = spectrum.iter().map(|z| z.norm()).collect();
        let mut sorted = series.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Self {
            sorted,
            amplitudes,
            forward,
            inverse,
            original: series.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R, max_iter: usize) -> Vec<f64> {
        let n = self.len();
        let mut current = self.original.clone();
        current.shuffle(rng);
        if n < 2 {
            return current;
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut order: Vec<(f64, u32)> = Vec::with_capacity(n);
        let mut previous: Vec<u32> = Vec::new();
        let mut ranks: Vec<u32> = Vec::with_capacity(n);
        let scale = 1.0 / n as f64;
        for _ in 0..max_iter {
            for (b, &v) in buf.iter_mut().zip(&current) {
                *b = Complex64::new(v, 0.0);
            }
            self.forward.process(&mut buf);
            for (b, &amp) in buf.iter_mut().zip(&self.amplitudes) {
                let norm = b.norm();
                *b = if norm > 0.0 {
                    *b * (amp / norm)
                } else {
                    Complex64::new(amp, 0.0)
                };
            }
            self.inverse.process(&mut buf);

            order.clear();
            order.extend(
                buf.iter()
                    .enumerate()
                    .map(|(k, z)| (z.re * scale, k as u32)),
            );
            order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            ranks.clear();
            ranks.extend(order.iter().map(|&(_, k)| k));
            for (rank, &k) in ranks.iter().enumerate() {
                current[k as usize] = self.sorted[rank];
            }
            if ranks == previous {
                break;
            }
            std::mem::swap(&mut previous, &mut ranks);
        }
        current
    }
}

/// One iAAFT surrogate of `channel`.
pub fn iaaft_surrogate<R: Rng + ?Sized>(channel: &[f64], rng: &mut R, max_iter: usize) -> Vec<f64> {
    IaaftGenerator::new(channel).generate(rng, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn lag1_autocorrelation(x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
        let cov: f64 = x.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
        cov / var
    }

    #[test]
    fn surrogate_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<f64> = (0..257)
            .map(|_| rng.sample::<f64, _>(StandardNormal).exp())
            .collect();
        let s = iaaft_surrogate(&x, &mut rng, 100);
        let mut a = x.clone();
        let mut b = s.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
        assert_ne!(x, s);
    }

    #[test]
    fn white_noise_keeps_low_autocorrelation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<f64> = (0..1000).map(|_| rng.sample(StandardNormal)).collect();
        let s = iaaft_surrogate(&x, &mut rng, 100);
        assert!((lag1_autocorrelation(&s) - lag1_autocorrelation(&x)).abs() < 0.1);
    }

    #[test]
    fn preserves_autocorrelation_of_ar1() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut x = vec![0.0; 1000];
        for t in 1..x.len() {
            x[t] = 0.8 * x[t - 1] + rng.sample::<f64, _>(StandardNormal);
        }
        let s = iaaft_surrogate(&x, &mut rng, 100);
        assert!((lag1_autocorrelation(&s) - lag1_autocorrelation(&x)).abs() < 0.05);
    }

    #[test]
    fn tiny_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_eq!(iaaft_surrogate(&[3.0], &mut rng, 10), vec![3.0]);
        let s = iaaft_surrogate(&[1.0, 2.0, 3.0, 4.0], &mut rng, 10);
        let mut t = s.clone();
        t.sort_by(f64::total_cmp);
        assert_eq!(t, vec![1.0, 2.0, 3.0, 4.0]);
    }
}
