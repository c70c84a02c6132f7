use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{orbits, Group, OrbitClass, SiteSet};
use crate::learn::patch::PatchLayout;
use crate::models::ModelSpec;
use crate::quantum::pauli::LocalOperator;
use crate::quantum::state::expectation_local;
use crate::shadows::{estimate_pauli, ShadowRecord};

/// An orbit of observable supports together with the fixed operator placed
/// on each of them. One model is trained per `TermClass`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermClass {
    pub operator: LocalOperator,
    pub orbit: OrbitClass,
}

impl TermClass {
    pub fn key(&self) -> String {
        format!("{}@{}", self.operator.label, self.orbit.representative)
    }
}

/// Group `(support, operator)` terms into orbit classes. Classes keep the
/// order of first appearance.
pub fn term_classes<'a>(
    terms: impl IntoIterator<Item = (&'a SiteSet, &'a LocalOperator)>,
    group: &Group,
) -> Result<Vec<TermClass>> {
    let mut by_op: Vec<(LocalOperator, Vec<SiteSet>)> = Vec::new();
    for (sites, op) in terms {
        if sites.is_empty() {
            continue;
        }
        if op.arity() != sites.len() {
            return Err(Error::InvalidObservable(format!(
                "operator {} acts on {} sites but support is {sites}",
                op.label,
                op.arity()
            )));
        }
        if !op.is_permutation_symmetric() {
            return Err(Error::InvalidObservable(format!(
                "operator {} is not symmetric under site permutations",
                op.label
            )));
        }
        match by_op.iter_mut().find(|(o, _)| o == op) {
            Some((_, v)) => v.push(sites.clone()),
            None => by_op.push((op.clone(), vec![sites.clone()])),
        }
    }
    let mut out = Vec::new();
    for (op, sets) in by_op {
        for orbit in orbits(&sets, group)? {
            out.push(TermClass {
                operator: op.clone(),
                orbit,
            });
        }
    }
    Ok(out)
}

/// Where training targets come from.
#[derive(Debug, Clone, Copy)]
pub enum TargetSource<'a> {
    /// Exact expectation values in the given state.
    Exact(&'a [Complex64]),
    /// Classical-shadow estimates.
    Shadow(&'a ShadowRecord),
}

impl TargetSource<'_> {
    pub fn tag(&self) -> &'static str {
        match self {
            TargetSource::Exact(_) => "exact",
            TargetSource::Shadow(_) => "shadow",
        }
    }

    /// `⟨op⟩` on `sites`.
    pub fn target(&self, sites: &SiteSet, op: &LocalOperator) -> Result<f64> {
        match self {
            TargetSource::Exact(state) => expectation_local(state, sites.sites(), op),
            TargetSource::Shadow(record) => {
                let mut total = 0.0;
                for (c, letters) in &op.strings {
                    total += c * estimate_pauli(record, sites.sites(), letters)?;
                }
                Ok(total)
            }
        }
    }
}

/// Training rows harvested from one ground state through the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitDataset {
    pub class_key: String,
    pub patches: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub source: String,
    /// Rows before deduplication (one per group element).
    pub group_rows: usize,
    /// The source state was flagged degenerate.
    pub degenerate: bool,
}

impl OrbitDataset {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Targets closer than this count as equal when collapsing rows.
pub const DUPLICATE_TOL: f64 = 1e-10;

/// One row per group element `g`: the patch of `gI` in `x0` (equal to the
/// representative patch of `g·x0`) and `⟨O_{gI}⟩`. Identical rows collapse.
pub fn build_dataset(
    spec: &ModelSpec,
    x0: &[f64],
    group: &Group,
    class: &TermClass,
    layout: &PatchLayout,
    source: TargetSource<'_>,
    degenerate: bool,
) -> Result<OrbitDataset> {
    spec.check_params(x0)?;
    if layout.representative != class.orbit.representative {
        return Err(Error::Config(format!(
            "layout for {} does not match class {}",
            layout.representative,
            class.key()
        )));
    }
    let n = spec.n;
    let mut patches: Vec<Vec<f64>> = Vec::with_capacity(group.order());
    let mut targets: Vec<f64> = Vec::with_capacity(group.order());
    let mut cache: Vec<(SiteSet, f64)> = Vec::new();
    let bound = class.operator.norm_bound();
    for g in group.elements() {
        let image = SiteSet::new(class.orbit.representative.sites().iter().map(|&s| g.apply(s, n)));
        let target = match cache.iter().find(|(s, _)| *s == image) {
            Some((_, t)) => *t,
            None => {
                let t = source.target(&image, &class.operator)?;
                cache.push((image, t));
                t
            }
        };
        if !target.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite target for {}", class.key())));
        }
        if matches!(source, TargetSource::Exact(_)) && target.abs() > bound + 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "target {target} exceeds operator bound {bound} for {}",
                class.key()
            )));
        }
        let patch = layout.extract(spec, x0, g);
        let duplicate = patches
            .iter()
            .zip(&targets)
            .any(|(p, &t)| (t - target).abs() <= DUPLICATE_TOL && *p == patch);
        if !duplicate {
            patches.push(patch);
            targets.push(target);
        }
    }
    Ok(OrbitDataset {
        class_key: class.key(),
        patches,
        targets,
        source: source.tag().to_string(),
        group_rows: group.order(),
        degenerate,
    })
}
