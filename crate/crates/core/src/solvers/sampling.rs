use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perturb::{method_tag, perturb_lines, HyperfineMode, Order, ShiftModel};
use super::{LineList, Transition};
use crate::spincore::SpinSystem;
use crate::{Error, Result, Vec3};

/// Default configuration count above which enumeration gives way to sampling.
pub const DEFAULT_ENUMERATION_THRESHOLD: u128 = 1_000_000;

/// Monte-Carlo estimate of [`perturb_lines`]: `sample_count` configurations
/// drawn with equal nuclear populations from a ChaCha8 stream seeded by
/// `seed`. Systems with at most `threshold` configurations are enumerated.
pub fn sample_configurations(
    system: &SpinSystem,
    field: &Vec3,
    order: Order,
    mode: HyperfineMode,
    sample_count: usize,
    seed: u64,
    threshold: u128,
) -> Result<LineList> {
    if sample_count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let all: Vec<usize> = (0..system.sites.len()).collect();
    let model = ShiftModel::new(system, &all, field, order, mode)?;
    if model.configurations() <= threshold {
        return perturb_lines(system, field, order, mode);
    }
    let dims = model.multiplicities();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = 1.0 / sample_count as f64;
    let nu_e = model.larmor();
    let mut config = vec![0usize; dims.len()];
    let mut lines = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        for (c, &d) in config.iter_mut().zip(&dims) {
            *c = rng.random_range(0..d);
        }
        lines.push(Transition::new(nu_e + model.shift(&config), 1.0, weight));
    }
    let tag = format!("{}-mc", method_tag(order, mode));
    Ok(LineList::new(tag, *field, lines).sorted())
}
