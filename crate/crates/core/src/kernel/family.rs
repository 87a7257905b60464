use std::sync::Arc;

use super::functional::LipschitzFunctional;
use crate::metric::{BirthDeath, BirthDeathSpace, MetricPair};
use crate::rng::CounterRng;
use crate::vpd::SignedDiagram;

/// Deterministic norming family of `dim` functionals for a dataset.
///
/// Slot 1 is `d₁(·, [A])`. Slot `n ≥ 2` draws 1–3 distinct support points
/// from substream `n` and prescribes alternating-sign values
/// `c · sign · d₁(u, [A])`, with `c ≤ 1` the largest scale keeping the values
/// 1-Lipschitz on the anchors. With an empty dataset every slot is the
/// basepoint distance.
pub fn default_norming_family(
    space: &BirthDeathSpace,
    dataset: &[SignedDiagram],
    dim: usize,
    seed: u64,
) -> Vec<LipschitzFunctional> {
    let mut pool: Vec<BirthDeath> = dataset.iter().flat_map(|g| g.support().cloned()).collect();
    pool.sort();
    pool.dedup();
    let rng = CounterRng::new(seed, 0x4E0F);
    let mut family = Vec::with_capacity(dim);
    if dim > 0 {
        family.push(LipschitzFunctional::basepoint_distance());
    }
    for slot in 2..=dim {
        if pool.is_empty() {
            family.push(LipschitzFunctional::basepoint_distance());
            continue;
        }
        let mut cur = rng.substream(slot as u64).cursor();
        let count = (1 + cur.below(3) as usize).min(pool.len());
        let mut picked: Vec<usize> = Vec::with_capacity(count);
        while picked.len() < count {
            let i = cur.below(pool.len() as u64) as usize;
            if !picked.contains(&i) {
                picked.push(i);
            }
        }
        let first_sign = if cur.bernoulli(0.5) { 1.0 } else { -1.0 };
        let anchors: Vec<BirthDeath> = picked.iter().map(|&i| pool[i].clone()).collect();
        let signs: Vec<f64> = (0..count).map(|k| if k % 2 == 0 { first_sign } else { -first_sign }).collect();
        let radii: Vec<f64> = anchors.iter().map(|a| space.distance_to_diagonal(a)).collect();
        let mut scale: f64 = 1.0;
        for i in 0..count {
            for j in (i + 1)..count {
                if signs[i] != signs[j] {
                    let reach = radii[i] + radii[j];
                    scale = scale.min(space.strengthened_distance(&anchors[i], &anchors[j]) / reach);
                }
            }
        }
        let values = (0..count).map(|k| scale * signs[k] * radii[k]).collect();
        let f = LipschitzFunctional::new_unchecked(Arc::from(anchors), values)
            .expect("anchor and value counts agree");
        family.push(f);
    }
    family
}
