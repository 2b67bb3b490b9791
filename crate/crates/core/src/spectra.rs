//! Spectra as posets of prime points, thick supports as up-closed subsets,
//! and the Krull-Schmidt decomposition of a thick support.
//!
//! Two models are provided. [`SpectrumModel::ZSpec`] is the spectrum of the
//! integers: a generic point `(0)` lying under every closed point `(p)`.
//! [`SpectrumModel::FinPoset`] is an arbitrary finite poset whose order is
//! specialization, `p <= q` meaning `q` lies in the closure `V(p)`.
//!
//! Decomposition follows the minimal-point graph: vertices are the minimal
//! points of the support, two of them adjacent when their closures meet, and
//! each connected component contributes the union of its closures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_prime::nt_funcs::is_prime;

use crate::error::{Error, Result};

/// Largest poset accepted; up-sets are stored as 64-bit masks.
pub const MAX_POSET_POINTS: usize = 64;
/// Largest poset whose thick supports may be enumerated.
pub const MAX_ENUMERATION_POINTS: usize = 16;

/// A rational prime.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        Self::from_biguint(BigUint::from(p))
    }

    pub fn from_biguint(p: BigUint) -> Result<Self> {
        if is_prime(&p, None).probably() {
            Ok(Prime(p))
        } else {
            Err(Error::input(format!("{p} is not a prime")))
        }
    }

    /// Wraps a value already known to be prime.
    pub(crate) fn trusted(p: BigUint) -> Self {
        Prime(p)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

impl std::str::FromStr for Prime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: BigUint = s
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("'{s}' is not a nonnegative integer")))?;
        Prime::from_biguint(v)
    }
}

/// A subset of the points of a finite poset.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet(iter.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Image under a point relabeling `i -> perm[i]`.
    pub fn map(self, perm: &[usize]) -> PointSet {
        PointSet::from_indices(self.iter().map(|i| perm[i]))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite poset of named points ordered by specialization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinPoset {
    names: Vec<String>,
    /// `up[i]` is the closure `V(i)`: every `j` with `i <= j`, including `i`.
    up: Vec<PointSet>,
}

impl FinPoset {
    /// Builds the poset generated by `covers` (pairs `(lower, upper)`),
    /// taking the reflexive-transitive closure and rejecting cycles.
    pub fn from_covers<S: AsRef<str>>(points: &[S], covers: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = points.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > MAX_POSET_POINTS {
            return Err(Error::resource(format!(
                "poset has {} points, at most {MAX_POSET_POINTS} supported",
                names.len()
            )));
        }
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(Error::input(format!("duplicate point name '{n}'")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::input(format!("cover mentions unknown point '{s}'")))
        };
        let n = names.len();
        let mut up: Vec<PointSet> = (0..n).map(|i| PointSet::from_indices([i])).collect();
        for (lo, hi) in covers {
            let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            up[lo] = up[lo].union(PointSet::from_indices([hi]));
        }
        // Warshall closure on bitmasks.
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::input(format!(
                        "covers contain a cycle through '{}' and '{}'",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(FinPoset { names, up })
    }

    /// Builds a poset from an order predicate `leq(i, j)`, validating the
    /// partial-order axioms.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if n > MAX_POSET_POINTS {
            return Err(Error::resource(format!(
                "poset has {n} points, at most {MAX_POSET_POINTS} supported"
            )));
        }
        let up: Vec<PointSet> = (0..n)
            .map(|i| PointSet::from_indices((0..n).filter(|&j| leq(i, j))))
            .collect();
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(Error::input(format!("relation is not reflexive at {i}")));
            }
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::input(format!("relation is not antisymmetric at ({i}, {j})")));
                }
                if !up[j].is_subset(up[i]) {
                    return Err(Error::input(format!("relation is not transitive through {j}")));
                }
            }
        }
        let names = (0..n).map(|i| format!("p{i}")).collect();
        Ok(FinPoset { names, up })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> PointSet {
        PointSet::from_indices(0..self.len())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// The closure `V(i)`.
    pub fn up_set(&self, i: usize) -> PointSet {
        self.up[i]
    }

    pub fn is_up_closed(&self, s: PointSet) -> bool {
        s.is_subset(self.all()) && s.iter().all(|i| self.up[i].is_subset(s))
    }

    /// Validated thick support on this poset.
    pub fn support(&self, s: PointSet) -> Result<ThickSupport> {
        if !s.is_subset(self.all()) {
            return Err(Error::input("subset mentions points outside the poset"));
        }
        if !self.is_up_closed(s) {
            return Err(Error::input(format!(
                "{:?} is not closed under specialization",
                self.describe(s)
            )));
        }
        Ok(ThickSupport::UpSet(s))
    }

    /// Names of the points in `s`.
    pub fn describe(&self, s: PointSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn set_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| Error::input(format!("unknown point '{}'", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()
            .map(PointSet::from_indices)
    }

    /// Points that are maximal for the specialization order.
    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].len() == 1).collect()
    }

    /// Cover pairs `(lower, upper)` of the order, in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].iter() {
                if j == i {
                    continue;
                }
                let between = self.up[i]
                    .iter()
                    .any(|k| k != i && k != j && self.up[k].contains(j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relabels points so that old point `i` becomes new point `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FinPoset> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::input("relabeling is not a permutation of the points"));
        }
        let mut names = vec![String::new(); n];
        let mut up = vec![PointSet::EMPTY; n];
        for i in 0..n {
            names[perm[i]] = self.names[i].clone();
            up[perm[i]] = self.up[i].map(perm);
        }
        Ok(FinPoset { names, up })
    }
}

/// The spectrum a support lives in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpectrumModel {
    ZSpec,
    FinPoset(FinPoset),
}

/// A point of a spectrum model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Point {
    /// The generic point `(0)` of the integers.
    Generic,
    /// A closed point `(p)` of the integers.
    Closed(Prime),
    /// A point of a finite poset, by index.
    Index(usize),
}

/// A specialization-closed subset of a spectrum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ThickSupport {
    /// All of the spectrum of the integers.
    Full,
    /// A finite set of closed points of the integers; empty is the empty support.
    Primes(BTreeSet<Prime>),
    /// An up-closed subset of a finite poset.
    UpSet(PointSet),
}

impl fmt::Display for ThickSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: Vec<String>| write!(f, "{{{}}}", items.join(", "));
        match self {
            ThickSupport::Full => f.write_str("Spec Z"),
            ThickSupport::Primes(ps) => list(f, ps.iter().map(|p| format!("({p})")).collect()),
            ThickSupport::UpSet(s) => list(f, s.iter().map(|i| i.to_string()).collect()),
        }
    }
}

impl ThickSupport {
    pub fn empty_z() -> Self {
        ThickSupport::Primes(BTreeSet::new())
    }

    pub fn primes<I: IntoIterator<Item = u64>>(ps: I) -> Result<Self> {
        Ok(ThickSupport::Primes(
            ps.into_iter().map(Prime::new).collect::<Result<_>>()?,
        ))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ThickSupport::Full => false,
            ThickSupport::Primes(ps) => ps.is_empty(),
            ThickSupport::UpSet(s) => s.is_empty(),
        }
    }

    fn is_z(&self) -> bool {
        !matches!(self, ThickSupport::UpSet(_))
    }

    /// Containment of the closed point `(p)` of the integers.
    pub fn contains_prime(&self, p: &Prime) -> bool {
        match self {
            ThickSupport::Full => true,
            ThickSupport::Primes(ps) => ps.contains(p),
            ThickSupport::UpSet(_) => false,
        }
    }

    /// Subset test; supports from different models are never comparable.
    pub fn is_subset(&self, other: &ThickSupport) -> Result<bool> {
        use ThickSupport::*;
        match (self, other) {
            (_, Full) if self.is_z() => Ok(true),
            (Full, Primes(_)) => Ok(false),
            (Primes(a), Primes(b)) => Ok(a.is_subset(b)),
            (UpSet(a), UpSet(b)) => Ok(a.is_subset(*b)),
            _ => Err(mismatch()),
        }
    }

    /// Subset test that treats mismatched models as "not contained".
    pub fn within(&self, other: &ThickSupport) -> bool {
        self.is_subset(other).unwrap_or(false)
    }

    pub fn is_disjoint(&self, other: &ThickSupport) -> Result<bool> {
        Ok(support_intersect(self, other)?.is_empty())
    }
}

fn mismatch() -> Error {
    Error::input("supports belong to different spectrum models")
}

fn check_model(model: &SpectrumModel, a: &ThickSupport) -> Result<()> {
    match (model, a) {
        (SpectrumModel::ZSpec, ThickSupport::UpSet(_)) => Err(mismatch()),
        (SpectrumModel::FinPoset(_), ThickSupport::Full | ThickSupport::Primes(_)) => {
            Err(mismatch())
        }
        (SpectrumModel::FinPoset(p), ThickSupport::UpSet(s)) if !p.is_up_closed(*s) => Err(
            Error::input(format!("{:?} is not a thick support of the poset", p.describe(*s))),
        ),
        _ => Ok(()),
    }
}

/// The closure `V(p)` of a point.
pub fn v_of(model: &SpectrumModel, p: &Point) -> Result<ThickSupport> {
    match (model, p) {
        (SpectrumModel::ZSpec, Point::Generic) => Ok(ThickSupport::Full),
        (SpectrumModel::ZSpec, Point::Closed(q)) => {
            Ok(ThickSupport::Primes(BTreeSet::from([q.clone()])))
        }
        (SpectrumModel::FinPoset(poset), Point::Index(i)) if *i < poset.len() => {
            Ok(ThickSupport::UpSet(poset.up_set(*i)))
        }
        _ => Err(Error::input(format!("{p:?} is not a point of the model"))),
    }
}

/// Whether `subset` is closed under specialization in `poset`.
pub fn is_thick_support(poset: &FinPoset, subset: PointSet) -> bool {
    poset.is_up_closed(subset)
}

/// Points of `a` lying over no other point of `a`.
pub fn minimal_points(model: &SpectrumModel, a: &ThickSupport) -> Result<Vec<Point>> {
    check_model(model, a)?;
    Ok(match (model, a) {
        (_, ThickSupport::Full) => vec![Point::Generic],
        (_, ThickSupport::Primes(ps)) => ps.iter().cloned().map(Point::Closed).collect(),
        (SpectrumModel::FinPoset(poset), ThickSupport::UpSet(s)) => minimal_indices(poset, *s)
            .into_iter()
            .map(Point::Index)
            .collect(),
        (SpectrumModel::ZSpec, ThickSupport::UpSet(_)) => unreachable!("checked above"),
    })
}

pub(crate) fn minimal_indices(poset: &FinPoset, s: PointSet) -> Vec<usize> {
    s.iter()
        .filter(|&i| !s.iter().any(|j| j != i && poset.leq(j, i)))
        .collect()
}

/// Krull-Schmidt decomposition of a thick support into pairwise-disjoint
/// indecomposable thick supports.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportDecomposition {
    pub parts: Vec<ThickSupport>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as the root so components come out ordered
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn ks_decompose(model: &SpectrumModel, a: &ThickSupport) -> Result<SupportDecomposition> {
    let minimal = minimal_points(model, a)?;
    let closures = minimal
        .iter()
        .map(|p| v_of(model, p))
        .collect::<Result<Vec<_>>>()?;
    let n = closures.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if !closures[i].is_disjoint(&closures[j])? {
                uf.union(i, j);
            }
        }
    }
    let mut components: BTreeMap<usize, ThickSupport> = BTreeMap::new();
    for (i, closure) in closures.into_iter().enumerate() {
        let root = uf.find(i);
        let merged = match components.remove(&root) {
            Some(acc) => support_union(&acc, &closure)?,
            None => closure,
        };
        components.insert(root, merged);
    }
    Ok(SupportDecomposition {
        parts: components.into_values().collect(),
    })
}

pub fn is_indecomposable(model: &SpectrumModel, a: &ThickSupport) -> Result<bool> {
    Ok(!a.is_empty() && ks_decompose(model, a)?.parts.len() == 1)
}

/// A model is local when it has a unique maximal (closed) point.
pub fn is_local(model: &SpectrumModel) -> Result<bool> {
    match model {
        SpectrumModel::ZSpec => Ok(false),
        SpectrumModel::FinPoset(p) if p.is_empty() => {
            Err(Error::input("locality is undefined for the empty spectrum"))
        }
        SpectrumModel::FinPoset(p) => Ok(p.maximal_points().len() == 1),
    }
}

pub fn support_union(a: &ThickSupport, b: &ThickSupport) -> Result<ThickSupport> {
    use ThickSupport::*;
    match (a, b) {
        (Full, Full | Primes(_)) | (Primes(_), Full) => Ok(Full),
        (Primes(x), Primes(y)) => Ok(Primes(x.union(y).cloned().collect())),
        (UpSet(x), UpSet(y)) => Ok(UpSet(x.union(*y))),
        _ => Err(mismatch()),
    }
}

pub fn support_intersect(a: &ThickSupport, b: &ThickSupport) -> Result<ThickSupport> {
    use ThickSupport::*;
    match (a, b) {
        (Full, Full) => Ok(Full),
        (Full, Primes(x)) | (Primes(x), Full) => Ok(Primes(x.clone())),
        (Primes(x), Primes(y)) => Ok(Primes(x.intersection(y).cloned().collect())),
        (UpSet(x), UpSet(y)) => Ok(UpSet(x.intersection(*y))),
        _ => Err(mismatch()),
    }
}

/// Every up-closed subset of `poset`, in increasing bitmask order.
pub fn enumerate_thick_supports(poset: &FinPoset) -> Result<Vec<ThickSupport>> {
    Ok(enumerate_up_sets(poset)?
        .into_iter()
        .map(ThickSupport::UpSet)
        .collect())
}

pub fn enumerate_up_sets(poset: &FinPoset) -> Result<Vec<PointSet>> {
    let n = poset.len();
    if n > MAX_ENUMERATION_POINTS {
        return Err(Error::resource(format!(
            "enumeration limited to {MAX_ENUMERATION_POINTS} points, poset has {n}"
        )));
    }
    Ok((0u64..1 << n)
        .map(PointSet::from_bits)
        .filter(|&s| poset.is_up_closed(s))
        .collect())
}
