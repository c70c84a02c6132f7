//! Periodic 1-D lattice, its dihedral automorphism group, and orbit
//! decomposition of site sets.
//!
//! Sites are labelled `0..n`. A group element acts on a site as
//! `i ↦ (shift + i) mod n`, or `i ↦ (shift − i) mod n` when it reflects.
//! Composition follows `(g∘h)(i) = g(h(i))`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Ring metric `min(|i−j|, n−|i−j|)`.
pub fn ring_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j) % n;
    d.min(n - d)
}

/// A set of lattice sites, stored sorted and without repeats.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteSet(Vec<usize>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SiteSet(v)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s >= n) {
            Some(&site) => Err(Error::SiteOutOfRange { site, n }),
            None => Ok(()),
        }
    }

    /// Smallest ring distance from `site` to any member of the set.
    pub fn distance_to(&self, site: usize, n: usize) -> usize {
        self.0
            .iter()
            .map(|&s| ring_distance(s, site, n))
            .min()
            .unwrap_or(usize::MAX)
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl<const N: usize> From<[usize; N]> for SiteSet {
    fn from(sites: [usize; N]) -> Self {
        SiteSet::new(sites)
    }
}

/// Isometry of the periodic chain: a translation, optionally preceded by
/// the reflection `i ↦ −i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub shift: usize,
    pub reflect: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        shift: 0,
        reflect: false,
    };

    pub fn translation(shift: usize) -> Self {
        GroupElement {
            shift,
            reflect: false,
        }
    }

    pub fn reflection(shift: usize) -> Self {
        GroupElement {
            shift,
            reflect: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && !self.reflect
    }

    /// Image of a single site.
    #[inline]
    pub fn apply(&self, site: usize, n: usize) -> usize {
        let i = site % n;
        if self.reflect {
            (self.shift + n - i) % n
        } else {
            (self.shift + i) % n
        }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &GroupElement, n: usize) -> GroupElement {
        let shift = if self.reflect {
            (self.shift + n - other.shift % n) % n
        } else {
            (self.shift + other.shift) % n
        };
        GroupElement {
            shift,
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self, n: usize) -> GroupElement {
        if self.reflect {
            *self
        } else {
            GroupElement::translation((n - self.shift % n) % n)
        }
    }
}

/// Map every site of `set` through `g`.
pub fn act_on_sites(g: &GroupElement, set: &SiteSet, n: usize) -> Result<SiteSet> {
    set.check(n)?;
    Ok(SiteSet::new(set.sites().iter().map(|&s| g.apply(s, n))))
}

/// The automorphism group of a periodic chain, stored by explicit
/// enumeration: translations by shift, then reflections by shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    n: usize,
    include_reflections: bool,
    elements: Vec<GroupElement>,
}

impl Group {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn include_reflections(&self) -> bool {
        self.include_reflections
    }

    /// The group containing only the identity. Useful as an ablation.
    pub fn trivial(n: usize) -> Self {
        Group {
            n,
            include_reflections: false,
            elements: vec![GroupElement::IDENTITY],
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    /// All elements mapping `from` onto `to`, in group order.
    pub fn transporters(&self, from: &SiteSet, to: &SiteSet) -> Vec<GroupElement> {
        self.elements
            .iter()
            .filter(|g| {
                from.len() == to.len()
                    && from.sites().iter().all(|&s| to.contains(g.apply(s, self.n)))
            })
            .copied()
            .collect()
    }
}

/// Dihedral (or cyclic, without reflections) group of the `n`-site ring.
pub fn build_group(n: usize, include_reflections: bool) -> Result<Group> {
    if n < 3 {
        return Err(Error::InvalidLattice(format!("ring needs n >= 3, got {n}")));
    }
    let mut elements: Vec<GroupElement> = (0..n).map(GroupElement::translation).collect();
    if include_reflections {
        elements.extend((0..n).map(GroupElement::reflection));
    }
    Ok(Group {
        n,
        include_reflections,
        elements,
    })
}

/// One equivalence class of site sets under the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    /// Lexicographically smallest set in the orbit.
    pub representative: SiteSet,
    /// Every distinct image `gI`, paired with the first `g` (in group
    /// order) that produces it.
    pub members: Vec<(GroupElement, SiteSet)>,
    pub stabilizer_size: usize,
}

impl OrbitClass {
    pub fn member_of(&self, set: &SiteSet) -> Option<&(GroupElement, SiteSet)> {
        self.members.iter().find(|(_, s)| s == set)
    }

    fn from_set(set: &SiteSet, group: &Group) -> OrbitClass {
        let n = group.n();
        let images: Vec<(GroupElement, SiteSet)> = group
            .elements()
            .iter()
            .map(|g| (*g, SiteSet::new(set.sites().iter().map(|&s| g.apply(s, n)))))
            .collect();
        let representative = images.iter().map(|(_, s)| s).min().cloned().unwrap_or_default();
        // Re-anchor at the representative so that member g maps the
        // representative onto the member set.
        let mut members: Vec<(GroupElement, SiteSet)> = Vec::new();
        let mut stabilizer_size = 0;
        for g in group.elements() {
            let image = SiteSet::new(representative.sites().iter().map(|&s| g.apply(s, n)));
            if image == representative {
                stabilizer_size += 1;
            }
            if !members.iter().any(|(_, s)| *s == image) {
                members.push((*g, image));
            }
        }
        OrbitClass {
            representative,
            members,
            stabilizer_size,
        }
    }
}

/// Partition `sets` into orbits under `group`. Classes are ordered by
/// first appearance in `sets`.
pub fn orbits(sets: &[SiteSet], group: &Group) -> Result<Vec<OrbitClass>> {
    let n = group.n();
    let mut classes: Vec<OrbitClass> = Vec::new();
    for set in sets {
        set.check(n)?;
        if classes.iter().any(|c| c.member_of(set).is_some()) {
            continue;
        }
        classes.push(OrbitClass::from_set(set, group));
    }
    Ok(classes)
}
