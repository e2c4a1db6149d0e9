use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::grasp::{GraspConfig, GraspInstance};
use crate::metrics::{quality_vector, Metric, Thresholds};
use crate::scalar::Scalar;

/// Mean and population standard deviation of one metric over perturbation
/// trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricStats<T> {
    pub mean: T,
    pub std: T,
}

/// Re-evaluates the metrics `trials` times with isotropic Gaussian noise of
/// standard deviation `sigma_pos` (meters) on every contact position.
///
/// Metrics absent from the grasp (e.g. `q_d2` without a Jacobian) are
/// `None`. Output is a deterministic function of `seed`.
pub fn perturbation_stability<T: Scalar>(
    g: &GraspInstance<T>,
    cfg: &GraspConfig<T>,
    thresholds: &Thresholds<T>,
    sigma_pos: f64,
    trials: usize,
    seed: u64,
) -> Result<[Option<MetricStats<T>>; 7]> {
    if trials < 2 {
        return Err(Error::InvalidInput("perturbation needs at least 2 trials".into()));
    }
    if !(sigma_pos >= 0.0) || !sigma_pos.is_finite() {
        return Err(Error::InvalidInput(format!("noise level must be >= 0, got {sigma_pos}")));
    }
    let noise = Normal::new(0.0, sigma_pos).expect("validated sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Vec<T>> = (0..7).map(|_| Vec::with_capacity(trials)).collect();
    for _ in 0..trials {
        let mut perturbed = g.clone();
        for c in perturbed.contacts.iter_mut() {
            for x in c.position.iter_mut() {
                *x = *x + T::of(noise.sample(&mut rng));
            }
        }
        let q = quality_vector(&perturbed, cfg, thresholds)?;
        for m in Metric::ALL {
            if let Some(v) = q.get(m) {
                samples[m.index()].push(v);
            }
        }
    }
    let mut out = [None; 7];
    for m in Metric::ALL {
        let s = &samples[m.index()];
        if s.is_empty() {
            continue;
        }
        // Welford's update keeps identical samples at exactly zero spread.
        let (mut mean, mut m2) = (T::zero(), T::zero());
        for (k, &v) in s.iter().enumerate() {
            let delta = v - mean;
            mean = mean + delta / T::of_usize(k + 1);
            m2 = m2 + delta * (v - mean);
        }
        let var = m2 / T::of_usize(s.len());
        out[m.index()] = Some(MetricStats { mean, std: var.max(T::zero()).sqrt() });
    }
    Ok(out)
}
