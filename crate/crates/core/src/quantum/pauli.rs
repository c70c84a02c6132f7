//! Pauli letters, full-register Pauli strings and small few-site
//! operators built from them.
//!
//! Basis states are big-endian: site 0 is the most significant bit of the
//! basis index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// 2×2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of single-qubit Paulis over `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            letters: vec![Pauli::I; n],
        }
    }

    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    /// Place `letters[k]` on `sites[k]`, identity elsewhere.
    pub fn embed(n: usize, sites: &[usize], letters: &[Pauli]) -> Result<Self> {
        if sites.len() != letters.len() {
            return Err(Error::Dimension {
                expected: sites.len(),
                got: letters.len(),
            });
        }
        let mut out = vec![Pauli::I; n];
        for (&s, &p) in sites.iter().zip(letters) {
            if s >= n {
                return Err(Error::SiteOutOfRange { site: s, n });
            }
            out[s] = p;
        }
        Ok(PauliString { letters: out })
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                Pauli::from_symbol(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad Pauli symbol {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString::new)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Bit masks `(flip, phase)`: `flip` marks X/Y sites, `phase` marks Y/Z
    /// sites, `ny` counts Y letters.
    pub fn masks(&self) -> (usize, usize, u32) {
        let n = self.n();
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut ny = 0;
        for (site, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - site);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase |= bit;
                    ny += 1;
                }
                Pauli::Z => phase |= bit,
            }
        }
        (flip, phase, ny)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// Action of a Pauli string on a basis state: `P|b⟩ = phase · |b ⊕ flip⟩`.
#[derive(Debug, Clone, Copy)]
pub struct PauliAction {
    pub flip: usize,
    pub phase_mask: usize,
    /// `i^{#Y}`
    pub global: Complex64,
}

impl PauliAction {
    pub fn new(p: &PauliString) -> Self {
        let (flip, phase_mask, ny) = p.masks();
        let global = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliAction {
            flip,
            phase_mask,
            global,
        }
    }

    #[inline]
    pub fn phase(&self, basis: usize) -> Complex64 {
        if (basis & self.phase_mask).count_ones() % 2 == 1 {
            -self.global
        } else {
            self.global
        }
    }
}

/// Few-site operator `Σ_k c_k P_k` where each `P_k` is a product of
/// letters over the (sorted) sites of the term it is attached to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalOperator {
    pub label: String,
    pub strings: Vec<(f64, Vec<Pauli>)>,
}

impl LocalOperator {
    pub fn new(label: impl Into<String>, strings: Vec<(f64, Vec<Pauli>)>) -> Self {
        LocalOperator {
            label: label.into(),
            strings,
        }
    }

    /// `XX + YY + ZZ`
    pub fn exchange() -> Self {
        Self::new(
            "XX+YY+ZZ",
            vec![
                (1.0, vec![Pauli::X, Pauli::X]),
                (1.0, vec![Pauli::Y, Pauli::Y]),
                (1.0, vec![Pauli::Z, Pauli::Z]),
            ],
        )
    }

    /// Single two-site Pauli product such as `ZZ`.
    pub fn pair(p: Pauli) -> Self {
        let s = p.symbol();
        Self::new(format!("{s}{s}"), vec![(1.0, vec![p, p])])
    }

    pub fn single(p: Pauli) -> Self {
        Self::new(p.symbol().to_string(), vec![(1.0, vec![p])])
    }

    /// Empty-support identity.
    pub fn identity() -> Self {
        Self::new("I", vec![(1.0, Vec::new())])
    }

    /// Number of sites the operator acts on.
    pub fn arity(&self) -> usize {
        self.strings.first().map_or(0, |(_, l)| l.len())
    }

    /// Upper bound on the operator norm, `Σ|c_k|`.
    pub fn norm_bound(&self) -> f64 {
        self.strings.iter().map(|(c, _)| c.abs()).sum()
    }

    /// True when every string reads the same in any site order, so the
    /// operator is invariant under permutations of its support.
    pub fn is_permutation_symmetric(&self) -> bool {
        self.strings
            .iter()
            .all(|(_, l)| l.windows(2).all(|w| w[0] == w[1]))
    }

    /// Full-register Pauli strings for this operator on `sites`.
    pub fn embed(&self, n: usize, sites: &[usize]) -> Result<Vec<(f64, PauliString)>> {
        self.strings
            .iter()
            .map(|(c, l)| PauliString::embed(n, sites, l).map(|p| (*c, p)))
            .collect()
    }
}
