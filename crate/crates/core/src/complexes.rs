//! Bounded complexes of finitely generated free abelian groups.
//!
//! Complexes are homologically graded: `d_n : C_n -> C_(n-1)`. A complex is
//! stored from its lowest nonzero degree to its highest one, so two equal
//! complexes have equal representations; all ranks zero is the zero complex.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith;
use crate::spectra::{support_union, ThickSupport};
use crate::zmodules::{self, from_presentation, FgAbGroup};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerfectComplex {
    bottom_degree: i64,
    ranks: Vec<usize>,
    /// `differentials[i]` is `d_(bottom + i + 1)`.
    differentials: Vec<IntMatrix>,
}

impl PerfectComplex {
    pub fn zero() -> Self {
        PerfectComplex {
            bottom_degree: 0,
            ranks: Vec::new(),
            differentials: Vec::new(),
        }
    }

    /// Validates shapes and `d o d = 0`, then trims zero terms at both ends.
    pub fn new(bottom_degree: i64, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        let expected = ranks.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(Error::input(format!(
                "{} degrees need {expected} differentials, got {}",
                ranks.len(),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[i] || d.cols() != ranks[i + 1] {
                return Err(Error::input(format!(
                    "differential d_{} has shape {}x{}, expected {}x{}",
                    bottom_degree + i as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        for (i, pair) in differentials.windows(2).enumerate() {
            if !(&pair[0] * &pair[1]).is_zero() {
                return Err(Error::input(format!(
                    "d_{} o d_{} is not zero",
                    bottom_degree + i as i64 + 1,
                    bottom_degree + i as i64 + 2
                )));
            }
        }
        let mut c = PerfectComplex {
            bottom_degree,
            ranks,
            differentials,
        };
        c.trim();
        Ok(c)
    }

    fn trim(&mut self) {
        while self.ranks.last() == Some(&0) {
            self.ranks.pop();
            self.differentials.pop();
        }
        while self.ranks.first() == Some(&0) {
            self.ranks.remove(0);
            if !self.differentials.is_empty() {
                self.differentials.remove(0);
            }
            self.bottom_degree += 1;
        }
        if self.ranks.is_empty() {
            self.bottom_degree = 0;
        }
    }

    /// Builds the complex on degrees `lo..=hi` from per-degree callbacks.
    fn from_fn(
        lo: i64,
        hi: i64,
        rank: impl Fn(i64) -> usize,
        diff: impl Fn(i64) -> Result<IntMatrix>,
    ) -> Result<Self> {
        if lo > hi {
            return Ok(Self::zero());
        }
        let ranks = (lo..=hi).map(&rank).collect();
        let diffs = (lo + 1..=hi).map(diff).collect::<Result<Vec<_>>>()?;
        Self::new(lo, ranks, diffs)
    }

    /// A single group `Z^rank` concentrated in one degree.
    pub fn free_in_degree(degree: i64, rank: usize) -> Self {
        Self::new(degree, vec![rank], Vec::new()).expect("one-term complexes are valid")
    }

    pub fn bottom_degree(&self) -> i64 {
        self.bottom_degree
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Degrees carrying a nonzero group, or `None` for the zero complex.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.bottom_degree, self.top_degree()))
    }

    pub fn top_degree(&self) -> i64 {
        self.bottom_degree + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, n: i64) -> usize {
        let i = n - self.bottom_degree;
        if i < 0 {
            return 0;
        }
        self.ranks.get(i as usize).copied().unwrap_or(0)
    }

    /// `d_n : C_n -> C_(n-1)`, the zero map outside the stored range.
    pub fn differential(&self, n: i64) -> IntMatrix {
        let i = n - self.bottom_degree - 1;
        if i >= 0 {
            if let Some(d) = self.differentials.get(i as usize) {
                return d.clone();
            }
        }
        IntMatrix::zeros(self.rank_at(n - 1), self.rank_at(n))
    }

    /// Alternating sum of the ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| sign(self.bottom_degree + i as i64) * r as i64)
            .sum()
    }
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Union of two optional degree ranges.
fn hull(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
        (x, None) | (None, x) => x,
    }
}

/// Kernel of `d_n` as a free group: a basis (columns, inside `C_n`) and the
/// coordinates of `d_(n+1)` in that basis.
struct Cycles {
    basis: IntMatrix,
    incoming: IntMatrix,
}

fn cycles(x: &PerfectComplex, n: i64) -> Cycles {
    let s = smith(&x.differential(n));
    let r = x.rank_at(n);
    let basis = s.v.columns(s.rank..r);
    let incoming = (&s.v_inv * &x.differential(n + 1)).row_range(s.rank..r);
    Cycles { basis, incoming }
}

/// `H_n(X) = ker d_n / im d_(n+1)` in canonical form.
pub fn homology(x: &PerfectComplex, n: i64) -> FgAbGroup {
    if x.rank_at(n) == 0 {
        return FgAbGroup::zero();
    }
    let z = cycles(x, n);
    from_presentation(&z.incoming.transpose(), z.basis.cols())
        .expect("presentation shape is consistent by construction")
}

/// All nonzero homology groups, keyed by degree.
pub fn homology_all(x: &PerfectComplex) -> BTreeMap<i64, FgAbGroup> {
    let Some((lo, hi)) = x.degree_range() else {
        return BTreeMap::new();
    };
    (lo..=hi)
        .map(|n| (n, homology(x, n)))
        .filter(|(_, h)| !h.is_zero())
        .collect()
}

pub fn is_acyclic(x: &PerfectComplex) -> bool {
    homology_all(x).is_empty()
}

/// `M[0]`: the canonical two-term free resolution in degrees 1 and 0.
pub fn from_module(m: &FgAbGroup) -> PerfectComplex {
    let (rel, n) = m.canonical_presentation();
    PerfectComplex::new(0, vec![n, rel.rows()], vec![rel.transpose()])
        .expect("an injective presentation is a complex")
}

/// `X[k]`: degree `n` of the result is degree `n - k` of `X`, differentials
/// multiplied by `(-1)^k`.
pub fn shift(x: &PerfectComplex, k: i64) -> PerfectComplex {
    let s = BigInt::from(sign(k));
    PerfectComplex {
        bottom_degree: if x.is_zero() { 0 } else { x.bottom_degree + k },
        ranks: x.ranks.clone(),
        differentials: x.differentials.iter().map(|d| d.scale(&s)).collect(),
    }
}

pub fn direct_sum(x: &PerfectComplex, y: &PerfectComplex) -> PerfectComplex {
    let Some((lo, hi)) = hull(x.degree_range(), y.degree_range()) else {
        return PerfectComplex::zero();
    };
    PerfectComplex::from_fn(
        lo,
        hi,
        |n| x.rank_at(n) + y.rank_at(n),
        |n| Ok(IntMatrix::block_diagonal(&x.differential(n), &y.differential(n))),
    )
    .expect("direct sums of complexes are complexes")
}

/// A map of complexes `f : X -> Y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: PerfectComplex,
    target: PerfectComplex,
    components: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    /// Components absent from the map are zero. Validates shapes and the
    /// commuting squares `f_(n-1) d_n = d_n f_n`.
    pub fn new(
        source: PerfectComplex,
        target: PerfectComplex,
        components: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (n, f) in components {
            let shape = (target.rank_at(n), source.rank_at(n));
            if (f.rows(), f.cols()) != shape {
                return Err(Error::input(format!(
                    "component f_{n} has shape {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    shape.0,
                    shape.1
                )));
            }
            if shape.0 > 0 && shape.1 > 0 {
                kept.insert(n, f);
            }
        }
        let map = ChainMap {
            source,
            target,
            components: kept,
        };
        if let Some((lo, hi)) = hull(map.source.degree_range(), map.target.degree_range()) {
            for n in lo..=hi + 1 {
                let left = &map.component(n - 1) * &map.source.differential(n);
                let right = &map.target.differential(n) * &map.component(n);
                if left != right {
                    return Err(Error::input(format!(
                        "chain map square at degree {n} does not commute"
                    )));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(x: &PerfectComplex) -> Self {
        Self::scalar(x, 1)
    }

    /// Multiplication by `k` on every term.
    pub fn scalar(x: &PerfectComplex, k: i64) -> Self {
        let k = BigInt::from(k);
        let components = x
            .degree_range()
            .map(|(lo, hi)| {
                (lo..=hi)
                    .map(|n| (n, IntMatrix::identity(x.rank_at(n)).scale(&k)))
                    .collect()
            })
            .unwrap_or_default();
        ChainMap::new(x.clone(), x.clone(), components).expect("scalars commute with d")
    }

    pub fn zero(source: &PerfectComplex, target: &PerfectComplex) -> Self {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
            .expect("the zero map is a chain map")
    }

    pub fn source(&self) -> &PerfectComplex {
        &self.source
    }

    pub fn target(&self) -> &PerfectComplex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, IntMatrix> {
        &self.components
    }

    /// `f_n`, zero when not stored.
    pub fn component(&self, n: i64) -> IntMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank_at(n), self.source.rank_at(n)))
    }

    /// `g o self`.
    pub fn then(&self, g: &ChainMap) -> Result<ChainMap> {
        if self.target != g.source {
            return Err(Error::input("chain maps are not composable"));
        }
        let degrees: Vec<i64> = self.components.keys().copied().collect();
        let comps = degrees
            .into_iter()
            .map(|n| (n, &g.component(n) * &self.component(n)))
            .collect();
        ChainMap::new(self.source.clone(), g.target.clone(), comps)
    }
}

/// Mapping cone: `cone_n = X_(n-1) + Y_n` with differential
/// `[[-d_X, 0], [f, d_Y]]`.
pub fn cone(f: &ChainMap) -> PerfectComplex {
    let (x, y) = (&f.source, &f.target);
    let shifted = x.degree_range().map(|(a, b)| (a + 1, b + 1));
    let Some((lo, hi)) = hull(shifted, y.degree_range()) else {
        return PerfectComplex::zero();
    };
    PerfectComplex::from_fn(
        lo,
        hi,
        |n| x.rank_at(n - 1) + y.rank_at(n),
        |n| {
            IntMatrix::block(
                &x.differential(n - 1).neg(),
                &IntMatrix::zeros(x.rank_at(n - 2), y.rank_at(n)),
                &f.component(n - 1),
                &y.differential(n),
            )
        },
    )
    .expect("the cone of a chain map is a complex")
}

/// Subcomplex `... -> C_(k+1) -> ker d_k -> 0`, with homology equal to that
/// of `X` in degrees `>= k` and zero below.
pub fn truncate_above(x: &PerfectComplex, k: i64) -> PerfectComplex {
    truncation_inclusion(x, k).source
}

/// The inclusion of `truncate_above(X, k)` into `X`.
pub fn truncation_inclusion(x: &PerfectComplex, k: i64) -> ChainMap {
    let Some((lo, hi)) = x.degree_range() else {
        return ChainMap::identity(x);
    };
    if k <= lo {
        return ChainMap::identity(x);
    }
    if k > hi {
        return ChainMap::zero(&PerfectComplex::zero(), x);
    }
    let z = cycles(x, k);
    let mut ranks = vec![z.basis.cols()];
    let mut diffs = Vec::new();
    if k < hi {
        diffs.push(z.incoming);
    }
    for n in k + 1..=hi {
        ranks.push(x.rank_at(n));
        if n > k + 1 {
            diffs.push(x.differential(n));
        }
    }
    let sub = PerfectComplex::new(k, ranks, diffs).expect("kernel subcomplex is a complex");
    let mut comps = BTreeMap::new();
    comps.insert(k, z.basis);
    for n in k + 1..=hi {
        comps.insert(n, IntMatrix::identity(x.rank_at(n)));
    }
    // trimming may drop a zero kernel at degree k
    comps.retain(|&n, m| sub.rank_at(n) == m.cols());
    ChainMap::new(sub, x.clone(), comps).expect("inclusion commutes with d")
}

/// Quotient `X / truncate_above(X, k + 1)`: `C_n` for `n <= k` and
/// `im d_(k+1)` in degree `k + 1`; homology agrees with `X` in degrees `<= k`.
pub fn truncate_below(x: &PerfectComplex, k: i64) -> PerfectComplex {
    truncation_projection(x, k).target
}

/// The projection of `X` onto `truncate_below(X, k)`.
pub fn truncation_projection(x: &PerfectComplex, k: i64) -> ChainMap {
    let Some((lo, hi)) = x.degree_range() else {
        return ChainMap::identity(x);
    };
    if k >= hi {
        return ChainMap::identity(x);
    }
    if k < lo {
        return ChainMap::zero(x, &PerfectComplex::zero());
    }
    let s = smith(&x.differential(k + 1));
    let image_basis = (&x.differential(k + 1) * &s.v).columns(0..s.rank);
    let quotient = s.v_inv.row_range(0..s.rank);

    let mut ranks: Vec<usize> = (lo..=k).map(|n| x.rank_at(n)).collect();
    let mut diffs: Vec<IntMatrix> = (lo + 1..=k).map(|n| x.differential(n)).collect();
    ranks.push(s.rank);
    diffs.push(image_basis);
    let quot = PerfectComplex::new(lo, ranks, diffs).expect("quotient complex is a complex");

    let mut comps: BTreeMap<i64, IntMatrix> = (lo..=k)
        .map(|n| (n, IntMatrix::identity(x.rank_at(n))))
        .collect();
    comps.insert(k + 1, quotient);
    comps.retain(|&n, m| quot.rank_at(n) == m.rows());
    ChainMap::new(x.clone(), quot, comps).expect("projection commutes with d")
}

/// Union of the supports of the homology groups.
pub fn support(x: &PerfectComplex) -> ThickSupport {
    homology_all(x)
        .values()
        .map(zmodules::support)
        .fold(ThickSupport::empty_z(), |acc, s| {
            support_union(&acc, &s).expect("integer supports share a model")
        })
}

/// Multiplication by `k` on a copy of `Z` placed in `degree`.
pub fn multiplication_map(degree: i64, k: i64) -> ChainMap {
    let x = PerfectComplex::free_in_degree(degree, 1);
    let mut comps = BTreeMap::new();
    comps.insert(degree, IntMatrix::diagonal(&[BigInt::from(k)]));
    ChainMap::new(x.clone(), x, comps).expect("scalar maps commute")
}

impl PerfectComplex {
    /// `d o d = 0` across the stored range.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|p| (&p[0] * &p[1]).is_zero())
    }
}
