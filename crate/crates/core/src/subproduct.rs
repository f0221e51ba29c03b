//! Discrete subproduct systems over ℚ in standard form.
//!
//! A system in standard form has fibers `Hₙ ⊆ H₁^{⊗n}`, encoded by the
//! orthogonal projectors `Pₙ` onto them. Products and their adjoints are the
//! inclusions and compressions between these ranges, so the whole structure
//! is determined by the projectors subject to the nesting condition
//! `(P_m ⊗ P_n)·P_{m+n} = P_{m+n}`.
//!
//! The basis of `H₁^{⊗n}` is indexed by words of length `n` in lexicographic
//! order (`e_{a₁} ⊗ … ⊗ e_{aₙ}` sits at [`Word::rank_in`]).

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, QMatrix, Rational};
use crate::words::{Level, Word, WordSystem};

/// Largest tensor-power dimension any operation will materialize.
pub const MAX_COORDINATES: usize = 1 << 20;

fn coordinates(base: usize, exponent: usize) -> Result<usize> {
    base.checked_pow(exponent as u32)
        .filter(|&n| n <= MAX_COORDINATES)
        .ok_or(Error::SizeLimit { base, exponent })
}

/// Projectors `P₁, …, P_N` on the tensor powers of a `d`-dimensional space.
/// `P₀` is the `1×1` identity and is not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorFamily {
    dim: usize,
    projectors: Vec<QMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectorViolation {
    NotSymmetric {
        n: usize,
    },
    NotIdempotent {
        n: usize,
    },
    /// `(P_m ⊗ P_n)·P_{m+n} ≠ P_{m+n}`.
    NotNested {
        m: usize,
        n: usize,
    },
}

impl fmt::Display for ProjectorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectorViolation::NotSymmetric { n } => write!(f, "P_{n} is not symmetric"),
            ProjectorViolation::NotIdempotent { n } => write!(f, "P_{n} is not idempotent"),
            ProjectorViolation::NotNested { m, n } => {
                write!(f, "P_{} is not below P_{m} ⊗ P_{n}", m + n)
            }
        }
    }
}

impl ProjectorFamily {
    /// `projectors[i]` is `P_{i+1}` and must be `dⁱ⁺¹ × dⁱ⁺¹`.
    pub fn new(dim: usize, projectors: Vec<QMatrix>) -> Result<Self> {
        for (i, p) in projectors.iter().enumerate() {
            let n = i + 1;
            let size = coordinates(dim, n)?;
            if p.rows() != size || p.cols() != size {
                return Err(Error::ShapeError(format!(
                    "P_{n} is {}x{}, expected {size}x{size}",
                    p.rows(),
                    p.cols()
                )));
            }
        }
        Ok(ProjectorFamily { dim, projectors })
    }

    /// The full product system: every `Pₙ` is the identity.
    pub fn identity(dim: usize, horizon: usize) -> Result<Self> {
        let projectors = (1..=horizon)
            .map(|n| coordinates(dim, n).map(QMatrix::identity))
            .collect::<Result<_>>()?;
        Ok(ProjectorFamily { dim, projectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> usize {
        self.projectors.len()
    }

    /// `Pₙ`; panics for `n = 0` or beyond the horizon.
    pub fn projector(&self, n: usize) -> &QMatrix {
        &self.projectors[n - 1]
    }

    pub fn projectors(&self) -> &[QMatrix] {
        &self.projectors
    }

    fn projector_or_unit(&self, n: usize) -> QMatrix {
        if n == 0 {
            QMatrix::identity(1)
        } else {
            self.projector(n).clone()
        }
    }
}

/// Checks symmetry and idempotence of each `Pₙ`, then nesting for every
/// `m, n ≥ 1` with `m + n ≤ N`.
pub fn validate_projector_family(family: &ProjectorFamily) -> Option<ProjectorViolation> {
    for n in 1..=family.horizon() {
        let p = family.projector(n);
        if !p.is_symmetric() {
            return Some(ProjectorViolation::NotSymmetric { n });
        }
        if &(p * p) != p {
            return Some(ProjectorViolation::NotIdempotent { n });
        }
    }
    for total in 2..=family.horizon() {
        for m in 1..total {
            let n = total - m;
            let outer = family.projector(m).kron(family.projector(n));
            let p = family.projector(total);
            if &(&outer * p) != p {
                return Some(ProjectorViolation::NotNested { m, n });
            }
        }
    }
    None
}

fn ensure_valid(family: &ProjectorFamily) -> Result<()> {
    match validate_projector_family(family) {
        None => Ok(()),
        Some(v) => Err(Error::NotValid(v.to_string())),
    }
}

/// Dimension sequence `rank P₀, …, rank P_N`.
pub fn dims(family: &ProjectorFamily) -> Vec<u64> {
    std::iter::once(1)
        .chain(family.projectors.iter().map(|p| p.rank() as u64))
        .collect()
}

/// Diagonal projectors onto the spans of the words of each level.
pub fn from_word_system(system: &WordSystem) -> Result<ProjectorFamily> {
    let dim = system.alphabet();
    let projectors = (1..=system.horizon())
        .map(|n| {
            let size = coordinates(dim, n)?;
            Ok(indicator(size, system.level(n), dim))
        })
        .collect::<Result<_>>()?;
    Ok(ProjectorFamily { dim, projectors })
}

fn indicator(size: usize, level: &Level, dim: usize) -> QMatrix {
    let mut diagonal = vec![Rational::zero(); size];
    for word in level {
        diagonal[word.rank_in(dim)] = Rational::one();
    }
    QMatrix::diagonal(diagonal)
}

/// Projectors onto the symmetric tensor powers:
/// `Pₙ = (1/n!)·Σ_σ U_σ` over the permutations `σ` of the `n` tensor factors.
pub fn symmetric_family(dim: usize, horizon: usize) -> Result<ProjectorFamily> {
    let mut projectors = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let size = coordinates(dim, n)?;
        let factorial: BigInt = (1..=n).map(BigInt::from).product();
        let weight = Rational::new(BigInt::one(), factorial);
        let permutations: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut triples = Vec::with_capacity(size * permutations.len());
        for column in 0..size {
            let word = Word::unrank(column, dim, n);
            for sigma in &permutations {
                let permuted: Word = sigma.iter().map(|&i| word.letters()[i]).collect();
                triples.push((permuted.rank_in(dim), column, weight.clone()));
            }
        }
        projectors.push(QMatrix::from_triples(size, size, triples));
    }
    Ok(ProjectorFamily { dim, projectors })
}

/// A subproduct system given abstractly: fiber dimensions `k₁, …, k_N` and
/// product matrices `W_{m,n}` of shape `k_{m+n} × k_m·k_n` (the matrix of
/// `x_m ⊗ y_n ↦ x_m y_n` in chosen orthonormal bases).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSubproduct {
    fiber_dims: Vec<usize>,
    products: BTreeMap<(usize, usize), QMatrix>,
}

impl AbstractSubproduct {
    /// `fiber_dims[i]` is `k_{i+1}`; a product is required for every
    /// `m, n ≥ 1` with `m + n ≤ N`.
    pub fn new(
        fiber_dims: Vec<usize>,
        products: BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        let horizon = fiber_dims.len();
        let k = |n: usize| if n == 0 { 1 } else { fiber_dims[n - 1] };
        for total in 2..=horizon {
            for m in 1..total {
                let n = total - m;
                let w = products
                    .get(&(m, n))
                    .ok_or_else(|| Error::ShapeError(format!("missing product W_{{{m},{n}}}")))?;
                if w.rows() != k(total) || w.cols() != k(m) * k(n) {
                    return Err(Error::ShapeError(format!(
                        "W_{{{m},{n}}} is {}x{}, expected {}x{}",
                        w.rows(),
                        w.cols(),
                        k(total),
                        k(m) * k(n)
                    )));
                }
            }
        }
        if let Some(&(m, n)) = products
            .keys()
            .find(|&&(m, n)| m == 0 || n == 0 || m + n > horizon)
        {
            return Err(Error::ShapeError(format!(
                "unexpected product W_{{{m},{n}}} for horizon {horizon}"
            )));
        }
        Ok(AbstractSubproduct {
            fiber_dims,
            products,
        })
    }

    /// The compressions of a word system: fiber `n` has the words of `Xₙ` as
    /// orthonormal basis and `W_{m,n}(e_u ⊗ e_v) = e_{uv}` when `uv ∈ X_{m+n}`,
    /// zero otherwise.
    pub fn from_word_system(system: &WordSystem) -> Self {
        let positions: Vec<BTreeMap<&Word, usize>> = system
            .levels()
            .iter()
            .map(|level| level.iter().zip(0..).collect())
            .collect();
        let fiber_dims = (1..=system.horizon())
            .map(|n| system.level(n).len())
            .collect::<Vec<_>>();
        let mut products = BTreeMap::new();
        for total in 2..=system.horizon() {
            for m in 1..total {
                let n = total - m;
                let cols = system.level(m).len() * system.level(n).len();
                let triples = system.level(total).iter().enumerate().map(|(row, word)| {
                    let u = positions[m][&word.prefix(m)];
                    let v = positions[n][&word.suffix(n)];
                    (row, u * system.level(n).len() + v, Rational::one())
                });
                products.insert(
                    (m, n),
                    QMatrix::from_triples(system.level(total).len(), cols, triples),
                );
            }
        }
        AbstractSubproduct {
            fiber_dims,
            products,
        }
    }

    pub fn horizon(&self) -> usize {
        self.fiber_dims.len()
    }

    pub fn fiber_dim(&self, n: usize) -> usize {
        if n == 0 {
            1
        } else {
            self.fiber_dims[n - 1]
        }
    }

    pub fn fiber_dims(&self) -> &[usize] {
        &self.fiber_dims
    }

    pub fn product(&self, m: usize, n: usize) -> &QMatrix {
        &self.products[&(m, n)]
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), QMatrix> {
        &self.products
    }

    /// Checks `W·Wᵀ = 1` for every product, then associativity
    /// `W_{m+n,l}(W_{m,n} ⊗ 1) = W_{m,n+l}(1 ⊗ W_{n,l})`.
    pub fn validate(&self) -> Result<()> {
        for (&(m, n), w) in &self.products {
            if !(w * &w.transpose()).is_identity() {
                return Err(Error::NotCoisometric { m, n });
            }
        }
        let horizon = self.horizon();
        for total in 3..=horizon {
            for m in 1..total - 1 {
                for n in 1..total - m {
                    let l = total - m - n;
                    let left = self.product(m + n, l)
                        * &self
                            .product(m, n)
                            .kron(&QMatrix::identity(self.fiber_dim(l)));
                    let right = self.product(m, n + l)
                        * &QMatrix::identity(self.fiber_dim(m)).kron(self.product(n, l));
                    if left != right {
                        return Err(Error::NotAssociative { m, n, l });
                    }
                }
            }
        }
        Ok(())
    }
}

/// How the isometries `Jₙ: Hₙ → H₁^{⊗n}` are assembled from products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nesting {
    /// `Jₙ = (1 ⊗ J_{n−1})·W_{1,n−1}ᵀ`.
    Right,
    /// `Jₙ = (J_{n−1} ⊗ 1)·W_{n−1,1}ᵀ`.
    Left,
}

/// The isometries `J₁, …, J_N` embedding each fiber into the tensor power of
/// the first fiber.
pub fn isometries(system: &AbstractSubproduct, nesting: Nesting) -> Result<Vec<QMatrix>> {
    if system.horizon() == 0 {
        return Ok(Vec::new());
    }
    let d = system.fiber_dim(1);
    let mut js = vec![QMatrix::identity(d)];
    for n in 2..=system.horizon() {
        coordinates(d, n)?;
        let previous = &js[n - 2];
        let j = match nesting {
            Nesting::Right => {
                &QMatrix::identity(d).kron(previous) * &system.product(1, n - 1).transpose()
            }
            Nesting::Left => {
                &previous.kron(&QMatrix::identity(d)) * &system.product(n - 1, 1).transpose()
            }
        };
        js.push(j);
    }
    Ok(js)
}

/// Standard form of an abstract system: `Pₙ = Jₙ·Jₙᵀ` with right-nested `Jₙ`.
pub fn standard_form(system: &AbstractSubproduct) -> Result<ProjectorFamily> {
    system.validate()?;
    let js = isometries(system, Nesting::Right)?;
    let projectors = js.iter().map(|j| j * &j.transpose()).collect();
    ProjectorFamily::new(system.fiber_dim(1), projectors)
}

/// The word system whose words index a lexicographically greedy basis of
/// each fiber.
///
/// For each `n` the vectors `e_w = Pₙ·(e_{a₁} ⊗ … ⊗ e_{aₙ})` are visited in
/// lexicographic order of `w`, and `w` is kept iff `e_w` is independent of
/// the vectors kept before it. Under nesting, `Pₙ` applied to an elementary
/// tensor equals the iterated product of the `e_{aᵢ}`, so this is the
/// lexicographic basis selection with `#Xₙ = rank Pₙ`.
pub fn extract_word_system(family: &ProjectorFamily) -> Result<WordSystem> {
    ensure_valid(family)?;
    let dim = family.dim();
    let mut levels: Vec<Level> = vec![Level::from([Word::empty()])];
    for n in 1..=family.horizon() {
        let p = family.projector(n);
        let target = p.rank();
        let mut basis = EchelonBasis::new();
        let mut kept = Level::new();
        for index in 0..p.rows() {
            if basis.rank() == target {
                break;
            }
            // Pₙ is symmetric, so its column `index` is its row `index`.
            if basis.insert(p.row(index)) {
                kept.insert(Word::unrank(index, dim, n));
            }
        }
        levels.push(kept);
    }
    WordSystem::new(dim, levels)
}

/// `P_m ⊗ P_n` including the `P₀ = 1` cases; exposed for tests that check
/// the marginal conditions.
pub fn outer_projector(family: &ProjectorFamily, m: usize, n: usize) -> QMatrix {
    family
        .projector_or_unit(m)
        .kron(&family.projector_or_unit(n))
}
