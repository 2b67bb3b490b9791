//! Finitely generated abelian groups in canonical form.
//!
//! A group is stored as `Z^r + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`
//! and every `d_i >= 2`, which makes structural equality the same thing as
//! isomorphism.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs::factorize;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith_diagonal;
use crate::spectra::{ks_decompose, Prime, SpectrumModel, ThickSupport};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn zero() -> Self {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the zero group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, [n.into()])
    }

    /// `Z^rank` plus cyclic groups of the given orders, in any order.
    /// Orders of 1 vanish and orders of 0 count as free summands.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(rank: usize, orders: I) -> Self {
        let mut free_rank = rank;
        let mut torsion = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free_rank += 1;
            } else if !o.is_one() {
                torsion.push(o);
            }
        }
        FgAbGroup {
            free_rank,
            invariant_factors: normalize_torsion(torsion),
        }
    }

    /// Accepts only data already in canonical form.
    pub fn from_invariants(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        for (i, d) in invariant_factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::input(format!("invariant factor {d} must be at least 2")));
            }
            if i > 0 && !d.is_multiple_of(&invariant_factors[i - 1]) {
                return Err(Error::input(format!(
                    "invariant factors {} and {d} do not form a divisibility chain",
                    invariant_factors[i - 1]
                )));
            }
        }
        Ok(FgAbGroup {
            free_rank,
            invariant_factors,
        })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Cyclic summands: `None` for `Z`, `Some(d)` for `Z/d`.
    fn summands(&self) -> impl Iterator<Item = Option<&BigInt>> {
        self.invariant_factors
            .iter()
            .map(Some)
            .chain(std::iter::repeat_n(None, self.free_rank))
    }

    /// Relations matrix (one row per invariant factor) on
    /// `num_generators()` generators, torsion generators first.
    pub fn canonical_presentation(&self) -> (IntMatrix, usize) {
        let t = self.invariant_factors.len();
        let n = self.num_generators();
        let mut rel = IntMatrix::zeros(t, n);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            rel[(i, i)] = d.clone();
        }
        (rel, n)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

/// Rewrites positive orders into a divisibility chain with the same direct
/// sum, dropping units.
fn normalize_torsion(mut orders: Vec<BigInt>) -> Vec<BigInt> {
    orders.sort();
    let n = orders.len();
    for i in 0..n {
        for j in i + 1..n {
            let (g, l) = (orders[i].gcd(&orders[j]), orders[i].lcm(&orders[j]));
            orders[i] = g;
            orders[j] = l;
        }
    }
    orders.retain(|d| !d.is_one());
    orders
}

/// Cokernel of the relations map `Z^rows -> Z^generators`, each row one relation.
pub fn from_presentation(relations: &IntMatrix, generators: usize) -> Result<FgAbGroup> {
    if relations.cols() != generators {
        return Err(Error::input(format!(
            "relations have {} columns but there are {generators} generators",
            relations.cols()
        )));
    }
    let diag = smith_diagonal(relations);
    let nonzero: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    let free_rank = generators - nonzero.len();
    Ok(FgAbGroup {
        free_rank,
        invariant_factors: nonzero.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

pub fn direct_sum(m: &FgAbGroup, n: &FgAbGroup) -> FgAbGroup {
    FgAbGroup::from_cyclic_orders(
        m.free_rank + n.free_rank,
        m.invariant_factors
            .iter()
            .chain(&n.invariant_factors)
            .cloned(),
    )
}

pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a FgAbGroup>>(groups: I) -> FgAbGroup {
    groups
        .into_iter()
        .fold(FgAbGroup::zero(), |acc, g| direct_sum(&acc, g))
}

/// Distinct prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: &BigInt) -> Vec<Prime> {
    let mag: BigUint = n.magnitude().clone();
    if mag <= BigUint::one() {
        return Vec::new();
    }
    factorize(mag).into_keys().map(Prime::trusted).collect()
}

/// Exponent of `p` in `n` (`n != 0`).
pub fn valuation(n: &BigInt, p: &Prime) -> u32 {
    let p = BigInt::from_biguint(Sign::Plus, p.value().clone());
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

/// The primes at which the localization of `m` is nonzero.
pub fn support(m: &FgAbGroup) -> ThickSupport {
    if m.free_rank > 0 {
        return ThickSupport::Full;
    }
    // every invariant factor divides the last one
    let primes = m
        .invariant_factors
        .last()
        .map(prime_divisors)
        .unwrap_or_default();
    ThickSupport::Primes(primes.into_iter().collect())
}

/// Length of the localization at `p`; infinite (an error) for groups of
/// positive rank.
pub fn p_length(m: &FgAbGroup, p: &Prime) -> Result<u64> {
    if m.free_rank > 0 {
        return Err(Error::domain(format!(
            "{m} has free rank {}, its length at {p} is infinite",
            m.free_rank
        )));
    }
    Ok(m.invariant_factors
        .iter()
        .map(|d| u64::from(valuation(d, p)))
        .sum())
}

/// `Hom(M, N)`, expanded over cyclic summands.
pub fn hom(m: &FgAbGroup, n: &FgAbGroup) -> FgAbGroup {
    let mut rank = 0;
    let mut orders = Vec::new();
    for a in m.summands() {
        for b in n.summands() {
            match (a, b) {
                (None, None) => rank += 1,
                (None, Some(b)) => orders.push(b.clone()),
                (Some(_), None) => {}
                (Some(a), Some(b)) => orders.push(a.gcd(b)),
            }
        }
    }
    FgAbGroup::from_cyclic_orders(rank, orders)
}

/// `Ext^1(M, N)`. Higher Ext vanishes over the integers.
pub fn ext1(m: &FgAbGroup, n: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::new();
    for a in m.summands() {
        let Some(a) = a else { continue };
        for b in n.summands() {
            match b {
                None => orders.push(a.clone()),
                Some(b) => orders.push(a.gcd(b)),
            }
        }
    }
    FgAbGroup::from_cyclic_orders(0, orders)
}

/// Part of the torsion of `m` supported on the primes of `s`.
fn primary_part(m: &FgAbGroup, s: &BTreeSet<Prime>) -> FgAbGroup {
    let orders = m.invariant_factors.iter().map(|d| {
        s.iter()
            .map(|p| {
                let pb = BigInt::from_biguint(Sign::Plus, p.value().clone());
                num_traits::pow(pb, valuation(d, p) as usize)
            })
            .product::<BigInt>()
    });
    FgAbGroup::from_cyclic_orders(0, orders)
}

/// Splits `m` along the Krull-Schmidt decomposition of its support; pieces
/// come in ascending prime order and sum back to `m`.
pub fn split_by_support(m: &FgAbGroup) -> Vec<(ThickSupport, FgAbGroup)> {
    let supp = support(m);
    let parts = ks_decompose(&SpectrumModel::ZSpec, &supp)
        .expect("a group support always lives in the integer spectrum")
        .parts;
    parts
        .into_iter()
        .map(|part| {
            let piece = match &part {
                ThickSupport::Full => m.clone(),
                ThickSupport::Primes(ps) => primary_part(m, ps),
                ThickSupport::UpSet(_) => unreachable!("integer supports only"),
            };
            (part, piece)
        })
        .collect()
}

/// A short exact sequence `0 -> sub -> middle -> quotient -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequence {
    pub sub: FgAbGroup,
    pub middle: FgAbGroup,
    pub quotient: FgAbGroup,
}

impl ShortExactSequence {
    /// `0 -> Z/p^a -> Z/p^(a+b) -> Z/p^b -> 0`, multiplication by `p^b`
    /// followed by reduction.
    pub fn cyclic(p: &Prime, a: u32, b: u32) -> Self {
        let pb = BigInt::from_biguint(Sign::Plus, p.value().clone());
        let pow = |e: u32| num_traits::pow(pb.clone(), e as usize);
        ShortExactSequence {
            sub: FgAbGroup::cyclic(pow(a)),
            middle: FgAbGroup::cyclic(pow(a + b)),
            quotient: FgAbGroup::cyclic(pow(b)),
        }
    }

    /// `0 -> A -> A + C -> C -> 0`.
    pub fn split(sub: &FgAbGroup, quotient: &FgAbGroup) -> Self {
        ShortExactSequence {
            sub: sub.clone(),
            middle: direct_sum(sub, quotient),
            quotient: quotient.clone(),
        }
    }

    /// Direct sum of two sequences, again exact.
    pub fn sum(&self, other: &ShortExactSequence) -> Self {
        ShortExactSequence {
            sub: direct_sum(&self.sub, &other.sub),
            middle: direct_sum(&self.middle, &other.middle),
            quotient: direct_sum(&self.quotient, &other.quotient),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    fn inv(rank: usize, f: &[i64]) -> FgAbGroup {
        FgAbGroup::from_invariants(rank, f.iter().map(|&d| BigInt::from(d)).collect()).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn presentations() {
        assert_eq!(from_presentation(&IntMatrix::from_i64(&[&[2]]), 1).unwrap(), z(2));
        assert_eq!(from_presentation(&IntMatrix::diagonal(&[1, 2]), 2).unwrap(), z(2));
        assert_eq!(from_presentation(&IntMatrix::zeros(0, 2), 2).unwrap(), FgAbGroup::free(2));
        assert!(matches!(
            from_presentation(&IntMatrix::zeros(1, 3), 2),
            Err(Error::Input(_))
        ));
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(from_presentation(&m, 2).unwrap(), inv(0, &[2, 4]));
    }

    #[test]
    fn canonical_presentation_round_trip() {
        let g = inv(2, &[2, 6, 12]);
        let (rel, n) = g.canonical_presentation();
        assert_eq!(from_presentation(&rel, n).unwrap(), g);
    }

    #[test]
    fn sums() {
        assert_eq!(direct_sum(&z(2), &z(3)), z(6));
        assert_eq!(direct_sum(&z(2), &z(4)), inv(0, &[2, 4]));
        let m = inv(1, &[3]);
        assert_eq!(direct_sum(&m, &FgAbGroup::zero()), m);
        assert_eq!(direct_sum(&z(4), &z(6)), inv(0, &[2, 12]));
    }

    #[test]
    fn invariant_validation() {
        assert!(FgAbGroup::from_invariants(0, vec![BigInt::from(1)]).is_err());
        assert!(FgAbGroup::from_invariants(0, vec![BigInt::from(4), BigInt::from(6)]).is_err());
    }

    #[test]
    fn supports() {
        assert_eq!(support(&z(6)), ThickSupport::primes([2, 3]).unwrap());
        assert_eq!(support(&FgAbGroup::free(1)), ThickSupport::Full);
        assert_eq!(support(&FgAbGroup::zero()), ThickSupport::empty_z());
    }

    #[test]
    fn lengths() {
        let m = direct_sum(&z(4), &z(3));
        assert_eq!(p_length(&m, &p(2)).unwrap(), 2);
        assert_eq!(p_length(&z(8), &p(2)).unwrap(), 3);
        assert_eq!(p_length(&z(8), &p(5)).unwrap(), 0);
        assert!(matches!(p_length(&FgAbGroup::free(1), &p(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn hom_and_ext() {
        assert_eq!(hom(&z(4), &z(6)), z(2));
        assert!(ext1(&z(4), &z(3)).is_zero());
        assert!(ext1(&FgAbGroup::free(2), &inv(1, &[6])).is_zero());
        assert_eq!(hom(&FgAbGroup::free(1), &inv(1, &[6])), inv(1, &[6]));
        assert!(hom(&z(5), &FgAbGroup::free(3)).is_zero());
        assert_eq!(ext1(&z(5), &FgAbGroup::free(2)), inv(0, &[5, 5]));
        assert_eq!(ext1(&z(4), &z(6)), z(2));
    }

    #[test]
    fn splitting() {
        let s = split_by_support(&z(12));
        assert_eq!(
            s,
            vec![
                (ThickSupport::primes([2]).unwrap(), z(4)),
                (ThickSupport::primes([3]).unwrap(), z(3)),
            ]
        );
        assert_eq!(split_by_support(&z(8)), vec![(ThickSupport::primes([2]).unwrap(), z(8))]);
        let m = inv(1, &[12]);
        assert_eq!(split_by_support(&m), vec![(ThickSupport::Full, m.clone())]);
        assert!(split_by_support(&FgAbGroup::zero()).is_empty());
    }

    #[test]
    fn extensions() {
        let s = ShortExactSequence::cyclic(&p(2), 1, 1);
        assert_eq!((s.sub, s.middle, s.quotient), (z(2), z(4), z(2)));
    }

    #[test]
    fn large_factor_support() {
        let big = BigInt::from(2).pow(100u32) * BigInt::from(1_000_000_007u64);
        let g = FgAbGroup::cyclic(big);
        assert_eq!(support(&g), ThickSupport::primes([2, 1_000_000_007]).unwrap());
        assert_eq!(p_length(&g, &p(2)).unwrap(), 100);
    }

    #[test]
    fn display() {
        assert_eq!(inv(2, &[2, 4]).to_string(), "Z^2 + Z/2 + Z/4");
        assert_eq!(FgAbGroup::zero().to_string(), "0");
    }
}
