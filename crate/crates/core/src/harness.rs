//! Seeded randomized check of positive correlation between upsets.

use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, to_decimal, Bias};
use crate::search::random_upset;
use crate::setcube::{hk_defect, measure, Family, Point};

/// Largest dimension accepted by [`hk_random`].
pub const HK_MAX_N: u32 = 12;

#[derive(Clone, Debug)]
pub struct HkRandomConfig {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub p: Bias,
    /// Use the same random upset for both sides of every pair.
    pub force_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkWitness {
    pub trial: u64,
    pub u: Vec<Point>,
    pub v: Vec<Point>,
    pub mu_u: BigRational,
    pub mu_v: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkRandomReport {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub p: Bias,
    pub min_defect: BigRational,
    pub witness: HkWitness,
    pub negative: u64,
}

impl HkRandomReport {
    pub fn all_nonnegative(&self) -> bool {
        self.negative == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            n: u32,
            trials: u64,
            seed: u64,
            p: String,
            min_defect: String,
            min_defect_decimal: String,
            negative: u64,
            all_nonnegative: bool,
            witness_trial: u64,
            witness_u: Vec<String>,
            witness_v: Vec<String>,
            witness_mu_u: String,
            witness_mu_v: String,
        }
        let pts = |v: &[Point]| v.iter().map(Point::to_string).collect();
        serde_json::to_value(Repr {
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            p: self.p.to_string(),
            min_defect: fmt_ratio(&self.min_defect),
            min_defect_decimal: to_decimal(&self.min_defect, 10),
            negative: self.negative,
            all_nonnegative: self.all_nonnegative(),
            witness_trial: self.witness.trial,
            witness_u: pts(&self.witness.u),
            witness_v: pts(&self.witness.v),
            witness_mu_u: fmt_ratio(&self.witness.mu_u),
            witness_mu_v: fmt_ratio(&self.witness.mu_v),
        })
        .expect("report serializes")
    }
}

/// Draws `trials` seeded pairs of random upsets of `Q_n` and records the
/// smallest `μ_p(U∩V) − μ_p(U)μ_p(V)` with its witness pair.
pub fn hk_random(cfg: &HkRandomConfig) -> Result<HkRandomReport> {
    if cfg.n > HK_MAX_N {
        return Err(Error::TooLarge(format!("n={} > {HK_MAX_N}", cfg.n)));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(BigRational, u64, Family, Family)> = None;
    let mut negative = 0;
    for trial in 0..cfg.trials {
        let u = random_upset(cfg.n, &mut rng)?;
        let v = if cfg.force_equal {
            u.clone()
        } else {
            random_upset(cfg.n, &mut rng)?
        };
        let d = hk_defect(&u, &v, &cfg.p)?;
        negative += u64::from(d.is_negative());
        if best.as_ref().is_none_or(|(m, ..)| d < *m) {
            best = Some((d, trial, u, v));
        }
    }
    let (min_defect, trial, u, v) = best.expect("at least one trial");
    Ok(HkRandomReport {
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        p: cfg.p.clone(),
        min_defect,
        witness: HkWitness {
            trial,
            mu_u: measure(&u, &cfg.p),
            mu_v: measure(&v, &cfg.p),
            u: u.minimal_elements()?,
            v: v.minimal_elements()?,
        },
        negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    fn cfg(n: u32, trials: u64, seed: u64) -> HkRandomConfig {
        HkRandomConfig {
            n,
            trials,
            seed,
            p: Bias::uniform(),
            force_equal: false,
        }
    }

    #[test]
    fn nonnegative_and_deterministic() {
        let a = hk_random(&cfg(6, 200, 1)).unwrap();
        assert!(a.all_nonnegative());
        assert!(!a.min_defect.is_negative());
        assert_eq!(a, hk_random(&cfg(6, 200, 1)).unwrap());
    }

    #[test]
    fn forced_equal_pair_gives_variance() {
        let mut c = cfg(5, 1, 9);
        c.force_equal = true;
        let r = hk_random(&c).unwrap();
        let mu = &r.witness.mu_u;
        assert_eq!(r.min_defect, mu * (BigRational::one() - mu));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(hk_random(&cfg(13, 1, 0)).is_err());
        assert!(hk_random(&cfg(4, 0, 0)).is_err());
    }
}
