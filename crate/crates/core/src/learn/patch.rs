use serde::{Deserialize, Serialize};

use crate::lattice::{GroupElement, OrbitClass, SiteSet};
use crate::models::ModelSpec;

/// Ordered parameter slots around an orbit representative. The patch of a
/// member `gI` is read at the `g`-images of these slots, which equals the
/// representative's patch of `g·x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchLayout {
    pub representative: SiteSet,
    pub delta: usize,
    pub slots: Vec<usize>,
    /// Optional per-slot `(mean, std)` applied to extracted values.
    #[serde(default)]
    pub scaling: Option<Vec<(f64, f64)>>,
}

impl PatchLayout {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Patch of the member reached by `g`, read from `x`.
    pub fn extract(&self, spec: &ModelSpec, x: &[f64], g: &GroupElement) -> Vec<f64> {
        let mut out: Vec<f64> = self.slots.iter().map(|&s| x[spec.map_slot(g, s)]).collect();
        if let Some(scaling) = &self.scaling {
            for (v, (mean, std)) in out.iter_mut().zip(scaling) {
                *v = (*v - mean) / std;
            }
        }
        out
    }

    /// Z-score every slot using the mean and standard deviation of its
    /// uniform sampling range.
    pub fn standardized(mut self, spec: &ModelSpec) -> Self {
        self.scaling = Some(
            self.slots
                .iter()
                .map(|&s| {
                    let (lo, hi) = spec.slots[s].range;
                    let std = ((hi - lo) / 12f64.sqrt()).max(f64::MIN_POSITIVE);
                    ((lo + hi) / 2.0, std)
                })
                .collect(),
        );
        self
    }
}

fn signed_offset(site: usize, origin: usize, n: usize) -> i64 {
    let raw = ((site + n - origin) % n) as i64;
    let half = (n / 2) as i64;
    if raw > half {
        raw - n as i64
    } else {
        raw
    }
}

/// Slots whose sites all lie within ring distance `delta` of the class
/// representative, ordered by signed position then slot kind.
pub fn build_patch_layout(spec: &ModelSpec, class: &OrbitClass, delta: usize) -> PatchLayout {
    let n = spec.n;
    let support = &class.representative;
    let origin = support.sites().first().copied().unwrap_or(0);
    let mut chosen: Vec<(i64, _, usize)> = spec
        .slots
        .iter()
        .enumerate()
        .filter(|(_, slot)| {
            slot.sites
                .sites()
                .iter()
                .all(|&s| support.distance_to(s, n) <= delta)
        })
        .map(|(k, slot)| {
            let pos: i64 = slot
                .sites
                .sites()
                .iter()
                .map(|&s| signed_offset(s, origin, n))
                .sum();
            (pos, slot.kind, k)
        })
        .collect();
    chosen.sort();
    PatchLayout {
        representative: support.clone(),
        delta,
        slots: chosen.into_iter().map(|(_, _, k)| k).collect(),
        scaling: None,
    }
}
