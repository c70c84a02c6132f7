//! Benchmark Hamiltonian families on the periodic chain and the
//! observables predicted from them.
//!
//! A [`ModelSpec`] is the interaction hypergraph: a list of terms, each a
//! site set with a fixed local operator and a coupling that reads only the
//! parameters attached to those sites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::lattice::{ring_distance, GroupElement, SiteSet};
use crate::quantum::pauli::{LocalOperator, Pauli};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Heisenberg,
    LongRangeIsing,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::LongRangeIsing => "long_range_ising",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    /// Exchange constant `J_{i,i+1}` of a bond.
    Bond,
    /// Site coupling `J_i` of the Ising chain.
    Coupling,
    /// Transverse field `h_i`.
    Field,
}

/// One parameter slot, attached to the sites it lives on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSlot {
    pub kind: SlotKind,
    pub sites: SiteSet,
    pub range: (f64, f64),
}

impl ParamSlot {
    pub fn name(&self) -> String {
        let s: Vec<String> = self.sites.sites().iter().map(|i| i.to_string()).collect();
        match self.kind {
            SlotKind::Bond => format!("J{}", s.join("_")),
            SlotKind::Coupling => format!("J{}", s.join("_")),
            SlotKind::Field => format!("h{}", s.join("_")),
        }
    }
}

/// How a term's coefficient depends on the parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coupling {
    /// `x[slot]`
    Linear { slot: usize },
    /// `(1 + x[left]·x[right]) / distance^alpha`
    PowerLawPair {
        left: usize,
        right: usize,
        distance: usize,
        alpha: f64,
    },
}

impl Coupling {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match *self {
            Coupling::Linear { slot } => x[slot],
            Coupling::PowerLawPair {
                left,
                right,
                distance,
                alpha,
            } => (1.0 + x[left] * x[right]) / (distance as f64).powf(alpha),
        }
    }

    pub fn slots(&self) -> Vec<usize> {
        match *self {
            Coupling::Linear { slot } => vec![slot],
            Coupling::PowerLawPair { left, right, .. } => vec![left, right],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerm {
    pub sites: SiteSet,
    pub operator: LocalOperator,
    pub coupling: Coupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub alpha: Option<f64>,
    pub terms: Vec<HamiltonianTerm>,
    pub slots: Vec<ParamSlot>,
}

impl ModelSpec {
    pub fn num_params(&self) -> usize {
        self.slots.len()
    }

    pub fn slot_index(&self, kind: SlotKind, sites: &SiteSet) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| s.kind == kind && &s.sites == sites)
    }

    /// Index of the slot that `g` maps slot `slot` onto.
    pub fn map_slot(&self, g: &GroupElement, slot: usize) -> usize {
        let s = &self.slots[slot];
        let image = SiteSet::new(s.sites.sites().iter().map(|&i| g.apply(i, self.n)));
        self.slot_index(s.kind, &image)
            .expect("slot layout is closed under lattice isometries")
    }

    pub fn check_params(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.num_params() {
            return Err(Error::Dimension {
                expected: self.num_params(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Replace every slot's sampling range with the one given for its kind.
    pub fn with_range(mut self, kind: SlotKind, range: (f64, f64)) -> Self {
        for s in self.slots.iter_mut().filter(|s| s.kind == kind) {
            s.range = range;
        }
        self
    }

    pub fn term_sites(&self) -> Vec<SiteSet> {
        self.terms.iter().map(|t| t.sites.clone()).collect()
    }

    pub fn term_index(&self, sites: &SiteSet, operator: &LocalOperator) -> Option<usize> {
        self.terms
            .iter()
            .position(|t| &t.sites == sites && &t.operator == operator)
    }
}

/// `g·x` with `(g·x)_I = x_{gI}`.
pub fn act_on_params(g: &GroupElement, x: &[f64], spec: &ModelSpec) -> Result<Vec<f64>> {
    spec.check_params(x)?;
    Ok((0..spec.num_params())
        .map(|s| x[spec.map_slot(g, s)])
        .collect())
}

/// Disordered Heisenberg ring `Σ_i J_{i,i+1}(XX + YY + ZZ)`, `J ∈ [0, 2]`.
pub fn heisenberg_ring(n: usize) -> Result<ModelSpec> {
    if n < 3 {
        return Err(Error::InvalidLattice(format!("ring needs n >= 3, got {n}")));
    }
    let slots: Vec<ParamSlot> = (0..n)
        .map(|i| ParamSlot {
            kind: SlotKind::Bond,
            sites: SiteSet::from([i, (i + 1) % n]),
            range: (0.0, 2.0),
        })
        .collect();
    let terms = (0..n)
        .map(|i| HamiltonianTerm {
            sites: slots[i].sites.clone(),
            operator: LocalOperator::exchange(),
            coupling: Coupling::Linear { slot: i },
        })
        .collect();
    Ok(ModelSpec {
        family: Family::Heisenberg,
        n,
        alpha: None,
        terms,
        slots,
    })
}

/// Long-range transverse-field Ising ring
/// `Σ_{i<j} (1 + J_i J_j)/d(i,j)^α Z_i Z_j + Σ_i h_i X_i`,
/// with `J_i ∈ [0, 2]` and `h_i ∈ [0, e]`.
///
/// Slots `0..n` hold `J_i`, slots `n..2n` hold `h_i`.
pub fn long_range_ising_ring(n: usize, alpha: f64) -> Result<ModelSpec> {
    if n < 3 {
        return Err(Error::InvalidLattice(format!("ring needs n >= 3, got {n}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidExponent(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let mut slots: Vec<ParamSlot> = (0..n)
        .map(|i| ParamSlot {
            kind: SlotKind::Coupling,
            sites: SiteSet::from([i]),
            range: (0.0, 2.0),
        })
        .collect();
    slots.extend((0..n).map(|i| ParamSlot {
        kind: SlotKind::Field,
        sites: SiteSet::from([i]),
        range: (0.0, E),
    }));
    let mut terms = Vec::with_capacity(n * (n - 1) / 2 + n);
    for i in 0..n {
        for j in i + 1..n {
            terms.push(HamiltonianTerm {
                sites: SiteSet::from([i, j]),
                operator: LocalOperator::pair(Pauli::Z),
                coupling: Coupling::PowerLawPair {
                    left: i,
                    right: j,
                    distance: ring_distance(i, j, n),
                    alpha,
                },
            });
        }
    }
    terms.extend((0..n).map(|i| HamiltonianTerm {
        sites: SiteSet::from([i]),
        operator: LocalOperator::single(Pauli::X),
        coupling: Coupling::Linear { slot: n + i },
    }));
    Ok(ModelSpec {
        family: Family::LongRangeIsing,
        n,
        alpha: Some(alpha),
        terms,
        slots,
    })
}

pub const DEFAULT_ISING_ALPHA: f64 = 3.0;

/// Independent uniform draws per slot.
pub fn sample_params(spec: &ModelSpec, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_params_with(spec, &mut rng)
}

pub fn sample_params_with<R: Rng + ?Sized>(spec: &ModelSpec, rng: &mut R) -> Vec<f64> {
    spec.slots
        .iter()
        .map(|s| {
            let (lo, hi) = s.range;
            lo + (hi - lo) * rng.random::<f64>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermCoefficient {
    Constant { value: f64 },
    /// Coefficient of Hamiltonian term `term`, evaluated at the query point.
    Hamiltonian { term: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableTerm {
    pub sites: SiteSet,
    pub operator: LocalOperator,
    pub coefficient: TermCoefficient,
}

impl ObservableTerm {
    pub fn coefficient_at(&self, x: &[f64], spec: Option<&ModelSpec>) -> Result<f64> {
        match self.coefficient {
            TermCoefficient::Constant { value } => Ok(value),
            TermCoefficient::Hamiltonian { term } => {
                let spec = spec.ok_or_else(|| {
                    Error::Config("x-dependent coefficient needs a model spec".into())
                })?;
                let t = spec.terms.get(term).ok_or_else(|| {
                    Error::Config(format!("no Hamiltonian term {term} in spec"))
                })?;
                Ok(t.coupling.evaluate(x))
            }
        }
    }
}

/// `normalization · Σ_I α_I O_I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSpec {
    pub terms: Vec<ObservableTerm>,
    pub normalization: f64,
}

impl ObservableSpec {
    /// `Σ|α_I|` at parameter point `x`.
    pub fn coefficient_l1(&self, x: &[f64], spec: Option<&ModelSpec>) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            total += t.coefficient_at(x, spec)?.abs();
        }
        Ok(total)
    }
}

/// `H/√n`: the Hamiltonian's own terms with coefficients read from `x`.
pub fn energy_observable(spec: &ModelSpec) -> ObservableSpec {
    ObservableSpec {
        terms: spec
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| ObservableTerm {
                sites: t.sites.clone(),
                operator: t.operator.clone(),
                coefficient: TermCoefficient::Hamiltonian { term: k },
            })
            .collect(),
        normalization: 1.0 / (spec.n as f64).sqrt(),
    }
}

/// `C_ij = (X_iX_j + Y_iY_j + Z_iZ_j)/3` as three Pauli terms.
pub fn correlation_observable(i: usize, j: usize) -> Result<ObservableSpec> {
    if i == j {
        return Err(Error::InvalidObservable(format!(
            "correlation needs two distinct sites, got {i} twice"
        )));
    }
    let sites = SiteSet::from([i, j]);
    Ok(ObservableSpec {
        terms: [Pauli::X, Pauli::Y, Pauli::Z]
            .into_iter()
            .map(|p| ObservableTerm {
                sites: sites.clone(),
                operator: LocalOperator::pair(p),
                coefficient: TermCoefficient::Constant { value: 1.0 / 3.0 },
            })
            .collect(),
        normalization: 1.0,
    })
}

/// Every `C_ij`, `i < j`, stacked into one observable for training.
pub fn all_correlations_observable(n: usize) -> Result<ObservableSpec> {
    let mut terms = Vec::with_capacity(3 * n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            terms.extend(correlation_observable(i, j)?.terms);
        }
    }
    Ok(ObservableSpec { terms, normalization: 1.0 })
}

/// JSON-facing description of a model instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Per-kind range overrides.
    #[serde(default)]
    pub ranges: Vec<(SlotKind, (f64, f64))>,
    #[serde(default)]
    pub seed: u64,
}

impl ModelConfig {
    pub fn build(&self) -> Result<ModelSpec> {
        build_family(self.family, self.n, self.alpha, &self.ranges)
    }
}

pub fn build_family(
    family: Family,
    n: usize,
    alpha: Option<f64>,
    ranges: &[(SlotKind, (f64, f64))],
) -> Result<ModelSpec> {
    let mut spec = match family {
        Family::Heisenberg => heisenberg_ring(n)?,
        Family::LongRangeIsing => {
            long_range_ising_ring(n, alpha.unwrap_or(DEFAULT_ISING_ALPHA))?
        }
    };
    for &(kind, range) in ranges {
        if !(range.0 <= range.1) {
            return Err(Error::Config(format!("empty range {range:?} for {kind:?}")));
        }
        spec = spec.with_range(kind, range);
    }
    Ok(spec)
}
