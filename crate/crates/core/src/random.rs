//! Seeded random instances for the verification suites.
//!
//! Every trial draws from ChaCha8 (`rand_chacha`), seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` and switched to stream `trial` with
//! `set_stream`, so each trial is reproducible on its own and independent
//! of how trials are scheduled. Ranges are drawn with `Rng::gen_range`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{direct_sum, ChainMap, PerfectComplex};
use crate::matrix::IntMatrix;
use crate::snf::smith;
use crate::spectra::{FinPoset, Prime, ThickSupport};
use crate::zmodules::{FgAbGroup, ShortExactSequence};

/// Primes used for random torsion.
pub const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];
/// Entry bound for random matrices and differentials.
pub const ENTRY_BOUND: i64 = 9;
/// Longest random complex, in degrees.
pub const MAX_COMPLEX_LENGTH: usize = 5;
/// Largest rank of a term of a random complex.
pub const MAX_TERM_RANK: usize = 4;
/// Most cyclic torsion summands in a random group.
pub const MAX_TORSION_SUMMANDS: usize = 4;
/// Largest random poset.
pub const MAX_POSET_POINTS: usize = 10;
/// Probability of a cover edge between two points of a random poset.
pub const EDGE_PROBABILITY: f64 = 0.3;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::from_entries(rows, cols, entries).expect("length matches shape")
}

/// A matrix of random shape up to `max_rows x max_cols`.
pub fn matrix_up_to(rng: &mut impl Rng, max_rows: usize, max_cols: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    matrix(rng, rows, cols, bound)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).expect("table entries are prime")
}

/// Free rank `0..=max_rank` plus up to four prime-power cyclic summands
/// over 2, 3, 5, 7 with exponents `1..=4`.
pub fn group(rng: &mut impl Rng, max_rank: usize) -> FgAbGroup {
    let rank = rng.gen_range(0..=max_rank);
    let count = rng.gen_range(0..=MAX_TORSION_SUMMANDS);
    let orders = (0..count).map(|_| {
        let p = *SMALL_PRIMES.choose(rng).expect("nonempty");
        BigInt::from(p).pow(rng.gen_range(1..=4u32))
    });
    FgAbGroup::from_cyclic_orders(rank, orders.collect::<Vec<_>>())
}

pub fn torsion_group(rng: &mut impl Rng) -> FgAbGroup {
    group(rng, 0)
}

/// A `p`-primary group with at most `max_summands` summands of exponent at
/// most `max_exp`.
pub fn primary_group(rng: &mut impl Rng, p: u64, max_summands: usize, max_exp: u32) -> FgAbGroup {
    let count = rng.gen_range(0..=max_summands);
    let orders: Vec<BigInt> = (0..count)
        .map(|_| BigInt::from(p).pow(rng.gen_range(1..=max_exp)))
        .collect();
    FgAbGroup::from_cyclic_orders(0, orders)
}

/// A random integer support: `Full` with probability 1/5, otherwise a
/// random subset of the small primes.
pub fn z_support(rng: &mut impl Rng) -> ThickSupport {
    if rng.gen_bool(0.2) {
        return ThickSupport::Full;
    }
    ThickSupport::Primes(
        SMALL_PRIMES
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|&p| prime(p))
            .collect(),
    )
}

/// A random support containing `base`.
pub fn support_containing(rng: &mut impl Rng, base: &ThickSupport) -> ThickSupport {
    match base {
        ThickSupport::Primes(ps) if !rng.gen_bool(0.15) => {
            let mut out: BTreeSet<Prime> = ps.clone();
            for &p in SMALL_PRIMES.iter().chain(&[11]) {
                if rng.gen_bool(0.3) {
                    out.insert(prime(p));
                }
            }
            ThickSupport::Primes(out)
        }
        _ => ThickSupport::Full,
    }
}

/// A random complex: each differential is a random combination of a basis
/// of the kernel of the one below, so `d o d = 0` by construction.
pub fn complex(rng: &mut impl Rng) -> PerfectComplex {
    let len = rng.gen_range(1..=MAX_COMPLEX_LENGTH);
    let bottom = rng.gen_range(-2..=2);
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=MAX_TERM_RANK)).collect();
    let mut diffs: Vec<IntMatrix> = Vec::with_capacity(len.saturating_sub(1));
    for i in 1..len {
        let d = match diffs.last() {
            None => matrix(rng, ranks[0], ranks[1], ENTRY_BOUND),
            Some(prev) => {
                let s = smith(prev);
                let kernel = s.v.columns(s.rank..prev.cols());
                // sparse coefficients keep entries small
                let coeff = matrix(rng, kernel.cols(), ranks[i], 2);
                &kernel * &coeff
            }
        };
        diffs.push(d);
    }
    PerfectComplex::new(bottom, ranks, diffs).expect("random complex satisfies d o d = 0")
}

/// A random invertible integer matrix made of a few elementary operations.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut m = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m.negate_row(0);
            inv.negate_col(0);
        }
        return (m, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-2..=2i64));
        m.add_row_multiple(i, j, &k);
        inv.add_col_multiple(j, i, &-k);
    }
    (m, inv)
}

/// A complex with homology known by construction: a sum of elementary
/// pieces `Z` and `Z --k--> Z` with each term's basis scrambled by a random
/// unimodular change of coordinates. Returns the complex and its homology.
pub fn complex_with_known_homology(rng: &mut impl Rng) -> (PerfectComplex, BTreeMap<i64, FgAbGroup>) {
    let bottom: i64 = rng.gen_range(-2..=2);
    let len = rng.gen_range(1..=MAX_COMPLEX_LENGTH) as i64;
    let mut x = PerfectComplex::zero();
    let mut free: BTreeMap<i64, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=4) {
        let n = bottom + rng.gen_range(0..len);
        if n + 1 < bottom + len && rng.gen_bool(0.6) {
            let k = rng.gen_range(1..=ENTRY_BOUND) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let piece = PerfectComplex::new(n, vec![1, 1], vec![IntMatrix::from_i64(&[&[k]])])
                .expect("two-term piece");
            x = direct_sum(&x, &piece);
            torsion.entry(n).or_default().push(BigInt::from(k));
        } else {
            x = direct_sum(&x, &PerfectComplex::free_in_degree(n, 1));
            *free.entry(n).or_default() += 1;
        }
    }
    let Some((lo, hi)) = x.degree_range() else {
        return (x, BTreeMap::new());
    };
    let bases: BTreeMap<i64, (IntMatrix, IntMatrix)> =
        (lo..=hi).map(|n| (n, unimodular(rng, x.rank_at(n)))).collect();
    let ranks = (lo..=hi).map(|n| x.rank_at(n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| &(&bases[&(n - 1)].0 * &x.differential(n)) * &bases[&n].1)
        .collect();
    let scrambled = PerfectComplex::new(lo, ranks, diffs).expect("conjugated complex");
    let mut expected = BTreeMap::new();
    for n in lo..=hi {
        let g = FgAbGroup::from_cyclic_orders(
            free.get(&n).copied().unwrap_or(0),
            torsion.get(&n).cloned().unwrap_or_default(),
        );
        if !g.is_zero() {
            expected.insert(n, g);
        }
    }
    (scrambled, expected)
}

/// `d h + h d` for a random degree-raising `h : X_n -> Y_(n+1)`, a
/// null-homotopic chain map `X -> Y`.
pub fn null_homotopic(rng: &mut impl Rng, x: &PerfectComplex, y: &PerfectComplex) -> ChainMap {
    let lo = x.bottom_degree().min(y.bottom_degree()) - 1;
    let hi = x.top_degree().max(y.top_degree()) + 1;
    let h: BTreeMap<i64, IntMatrix> = (lo..=hi)
        .map(|n| (n, matrix(rng, y.rank_at(n + 1), x.rank_at(n), 2)))
        .collect();
    let hom = |n: i64| {
        h.get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(y.rank_at(n + 1), x.rank_at(n)))
    };
    let comps = (lo..=hi)
        .map(|n| {
            let a = &y.differential(n + 1) * &hom(n);
            let b = &hom(n - 1) * &x.differential(n);
            let mut sum = a;
            for i in 0..sum.rows() {
                for j in 0..sum.cols() {
                    sum[(i, j)] += &b[(i, j)];
                }
            }
            (n, sum)
        })
        .collect();
    ChainMap::new(x.clone(), y.clone(), comps).expect("d h + h d is a chain map")
}

fn add_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let degrees: BTreeSet<i64> = f.components().keys().chain(g.components().keys()).copied().collect();
    let comps = degrees
        .into_iter()
        .map(|n| {
            let mut a = f.component(n);
            let b = g.component(n);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    a[(i, j)] += &b[(i, j)];
                }
            }
            (n, a)
        })
        .collect();
    ChainMap::new(f.source().clone(), f.target().clone(), comps).expect("sum of chain maps")
}

/// Stacks `f : X -> Y` and `g : X -> Z` into `X -> Y + Z`.
fn pair_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let target = direct_sum(f.target(), g.target());
    let comps = f
        .source()
        .degree_range()
        .map(|(lo, hi)| {
            (lo..=hi)
                .filter(|&n| target.rank_at(n) > 0)
                .map(|n| {
                    let (a, b) = (f.component(n), g.component(n));
                    let stacked = IntMatrix::block(
                        &a,
                        &IntMatrix::zeros(a.rows(), 0),
                        &b,
                        &IntMatrix::zeros(b.rows(), 0),
                    )
                    .expect("same column count");
                    (n, stacked)
                })
                .collect()
        })
        .unwrap_or_default();
    ChainMap::new(f.source().clone(), target, comps).expect("stacked chain map")
}

/// A random chain map drawn from several families: scalars perturbed by a
/// null-homotopy, truncation inclusions and projections, and maps into a
/// direct sum whose second component is null-homotopic.
pub fn chain_map(rng: &mut impl Rng) -> ChainMap {
    let x = complex(rng);
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(-3..=3);
            add_maps(&ChainMap::scalar(&x, k), &null_homotopic(rng, &x, &x))
        }
        1 => {
            let k = x.bottom_degree() + rng.gen_range(-1..=MAX_COMPLEX_LENGTH as i64);
            crate::complexes::truncation_inclusion(&x, k)
        }
        2 => {
            let k = x.bottom_degree() + rng.gen_range(-1..=MAX_COMPLEX_LENGTH as i64);
            crate::complexes::truncation_projection(&x, k)
        }
        _ => {
            let y = complex(rng);
            let k = rng.gen_range(-3..=3);
            let first = add_maps(&ChainMap::scalar(&x, k), &null_homotopic(rng, &x, &x));
            pair_maps(&first, &null_homotopic(rng, &x, &y))
        }
    }
}

/// A random short exact sequence: cyclic extensions of p-groups, split
/// extensions, and sums of these.
pub fn short_exact_sequence(rng: &mut impl Rng) -> ShortExactSequence {
    let first = basic_sequence(rng);
    if rng.gen_bool(0.3) {
        first.sum(&basic_sequence(rng))
    } else {
        first
    }
}

fn basic_sequence(rng: &mut impl Rng) -> ShortExactSequence {
    if rng.gen_bool(0.6) {
        let p = prime(*SMALL_PRIMES.choose(rng).expect("nonempty"));
        ShortExactSequence::cyclic(&p, rng.gen_range(1..=3), rng.gen_range(1..=3))
    } else {
        ShortExactSequence::split(&group(rng, 2), &group(rng, 2))
    }
}

/// A random poset on up to `max_points` points: cover edges `i -> j` for
/// `i < j` with probability `EDGE_PROBABILITY`, closed transitively, then
/// relabeled by a random permutation.
pub fn poset(rng: &mut impl Rng, max_points: usize) -> FinPoset {
    let n = rng.gen_range(1..=max_points);
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(EDGE_PROBABILITY) {
                covers.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let p = FinPoset::from_covers(&names, &covers).expect("edges go upward so there are no cycles");
    p.relabel(&permutation(rng, n)).expect("valid permutation")
}

pub fn permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
