//! Seeded property suites. Each suite runs independent trials, trial `i`
//! drawing from stream `i` of the seeded generator (see [`crate::random`]),
//! so a report depends only on `(suite, trials, seed)`.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{
    self, cone, direct_sum as complex_sum, from_module, homology, homology_all, truncate_above,
    truncate_below, PerfectComplex,
};
use crate::error::{Error, Result};
use crate::hovey::{
    check_diagram_commutes, decompose_wide, f_contains, split_object, xi_contains, zeta_contains,
    ThickSubcat, WideSubcat,
};
use crate::ktheory::{
    check_ses_additivity, check_triangle_additivity, check_truncation_identity, class_of_complex,
    class_of_module, decompose_class, K0Class,
};
use crate::matrix::IntMatrix;
use crate::random::{self, trial_rng};
use crate::snf::smith_normal_form;
use crate::spectra::{
    enumerate_up_sets, is_indecomposable, is_local, ks_decompose, support_union, FinPoset,
    PointSet, SpectrumModel, ThickSupport,
};
use crate::zmodules::{self, direct_sum, ext1, hom, FgAbGroup};

/// Witnesses kept per report.
pub const MAX_WITNESSES: usize = 10;

/// Suite names accepted by [`run_suite`]; `all` runs every other suite.
pub const SUITES: [&str; 11] = [
    "snf", "homology", "euler", "k0-iso", "ses", "ext-vanish", "hovey", "ks", "local", "split",
    "all",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub trials: u64,
    pub failures: u64,
    pub seed: u64,
    pub failure_witnesses: Vec<String>,
    pub wall_time_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Trial = fn(&mut ChaCha8Rng) -> std::result::Result<(), String>;

fn trial_fn(suite: &str) -> Option<Trial> {
    Some(match suite {
        "snf" => snf_trial,
        "homology" => homology_trial,
        "euler" => euler_trial,
        "k0-iso" => k0_trial,
        "ses" => ses_trial,
        "ext-vanish" => ext_vanish_trial,
        "hovey" => hovey_trial,
        "ks" => ks_trial,
        "local" => local_trial,
        "split" => split_trial,
        _ => return None,
    })
}

pub fn run_suite(suite: &str, trials: u64, seed: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let names: Vec<&str> = if suite == "all" {
        SUITES.iter().copied().filter(|s| *s != "all").collect()
    } else if trial_fn(suite).is_some() {
        vec![suite]
    } else {
        return Err(Error::input(format!(
            "unknown suite '{suite}', expected one of {}",
            SUITES.join(", ")
        )));
    };

    let mut failures = 0;
    let mut witnesses = Vec::new();
    let mut total = 0;
    for name in names {
        let run = trial_fn(name).expect("listed suite");
        let failed: Vec<(u64, String)> = (0..trials)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = trial_rng(seed, i);
                run(&mut rng).err().map(|w| (i, w))
            })
            .collect();
        total += trials;
        failures += failed.len() as u64;
        for (i, w) in failed {
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(format!("{name} trial {i}: {w}"));
            }
        }
    }
    Ok(VerifyReport {
        suite: suite.to_string(),
        trials: total,
        failures,
        seed,
        failure_witnesses: witnesses,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Independent reference computations used by the suites.
pub mod oracle {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Zero;

    use crate::matrix::IntMatrix;
    use crate::spectra::{FinPoset, PointSet};

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    /// `gcd` of all `k x k` minors, for `k = 1..=min(rows, cols)`.
    pub fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
        let kmax = a.rows().min(a.cols());
        (1..=kmax)
            .map(|k| {
                let mut g = BigInt::zero();
                for rows in combinations(a.rows(), k) {
                    for cols in combinations(a.cols(), k) {
                        let mut minor = IntMatrix::zeros(k, k);
                        for (i, &r) in rows.iter().enumerate() {
                            for (j, &c) in cols.iter().enumerate() {
                                minor[(i, j)] = a[(r, c)].clone();
                            }
                        }
                        g = g.gcd(&minor.determinant());
                    }
                }
                g
            })
            .collect()
    }

    /// Indecomposable by exhaustive search: no split of `a` into two
    /// nonempty disjoint up-closed parts.
    pub fn indecomposable_by_search(poset: &FinPoset, a: PointSet) -> bool {
        if a.is_empty() {
            return false;
        }
        !proper_subsets(a).any(|b| poset.is_up_closed(b) && poset.is_up_closed(a.difference(b)))
    }

    fn proper_subsets(a: PointSet) -> impl Iterator<Item = PointSet> {
        let bits = a.bits();
        // standard submask enumeration
        let mut sub = bits;
        std::iter::from_fn(move || {
            if sub == 0 {
                return None;
            }
            sub = (sub - 1) & bits;
            (sub != 0).then(|| PointSet::from_bits(sub))
        })
    }

    /// All partitions of `a` into nonempty, pairwise-disjoint, up-closed,
    /// indecomposable parts, each sorted.
    pub fn all_decompositions(poset: &FinPoset, a: PointSet) -> Vec<Vec<PointSet>> {
        let mut candidates: Vec<PointSet> = Vec::new();
        let bits = a.bits();
        let mut sub = bits;
        while sub != 0 {
            let s = PointSet::from_bits(sub);
            if poset.is_up_closed(s) && indecomposable_by_search(poset, s) {
                candidates.push(s);
            }
            sub = (sub - 1) & bits;
        }
        let mut out = Vec::new();
        search(&candidates, a, &mut Vec::new(), &mut out);
        out
    }

    fn search(cands: &[PointSet], rest: PointSet, cur: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        let Some(first) = rest.iter().next() else {
            let mut parts = cur.clone();
            parts.sort();
            out.push(parts);
            return;
        };
        for &c in cands {
            if c.contains(first) && c.is_subset(rest) {
                cur.push(c);
                search(cands, rest.difference(c), cur, out);
                cur.pop();
            }
        }
    }

    /// Homology from ranks: free rank `r_n - rank d_n - rank d_(n+1)`,
    /// torsion the nonunit elementary divisors of `d_(n+1)`.
    pub fn homology_by_ranks(
        x: &crate::complexes::PerfectComplex,
        n: i64,
    ) -> crate::zmodules::FgAbGroup {
        let diag_out = crate::snf::smith_diagonal(&x.differential(n));
        let diag_in = crate::snf::smith_diagonal(&x.differential(n + 1));
        let rank = |d: &[BigInt]| d.iter().filter(|e| !e.is_zero()).count();
        let free = x.rank_at(n) - rank(&diag_out) - rank(&diag_in);
        crate::zmodules::FgAbGroup::from_cyclic_orders(
            free,
            diag_in.into_iter().filter(|e| !e.is_zero()).collect::<Vec<_>>(),
        )
    }
}

fn check_snf(a: &IntMatrix) -> std::result::Result<(), String> {
    let r = smith_normal_form(a);
    ensure!(&(&r.u * a) * &r.v == r.d, "D != U A V for {a:?}");
    let unit = |m: &IntMatrix| {
        let d = m.determinant();
        d == 1.into() || d == (-1).into()
    };
    ensure!(unit(&r.u) && unit(&r.v), "transform not unimodular for {a:?}");
    for i in 0..r.d.rows() {
        for j in 0..r.d.cols() {
            ensure!(i == j || r.d[(i, j)] == 0.into(), "D not diagonal for {a:?}");
        }
    }
    let diag = r.diagonal();
    for w in diag.windows(2) {
        let ok = if w[0] == 0.into() {
            w[1] == 0.into()
        } else {
            w[0] > 0.into() && num_integer::Integer::is_multiple_of(&w[1], &w[0])
        };
        ensure!(ok, "diagonal {diag:?} is not a divisibility chain for {a:?}");
    }
    if let Some(first) = diag.first() {
        ensure!(*first >= 0.into(), "negative diagonal for {a:?}");
    }
    Ok(())
}

/// Products of the Smith diagonal against the determinantal divisors.
pub fn check_snf_oracle(a: &IntMatrix) -> std::result::Result<(), String> {
    let diag = smith_normal_form(a).diagonal();
    let divisors = oracle::determinantal_divisors(a);
    let mut prod = num_bigint::BigInt::from(1);
    for (k, d) in diag.iter().enumerate() {
        prod *= d;
        ensure!(
            prod == divisors[k],
            "d_1..d_{} = {prod} but gcd of minors is {} for {a:?}",
            k + 1,
            divisors[k]
        );
    }
    Ok(())
}

fn snf_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    check_snf(&random::matrix_up_to(rng, 8, 8, 30))?;
    check_snf_oracle(&random::matrix_up_to(rng, 4, 4, 6))
}

/// Homology of truncations matches the truncation contract.
pub fn check_truncations(x: &PerfectComplex, k: i64) -> std::result::Result<(), String> {
    let Some((lo, hi)) = x.degree_range() else {
        return Ok(());
    };
    let above = truncate_above(x, k);
    let below = truncate_below(x, k);
    for n in lo - 1..=hi + 1 {
        let h = homology(x, n);
        let ha = homology(&above, n);
        let hb = homology(&below, n);
        let want_above = if n >= k { h.clone() } else { FgAbGroup::zero() };
        let want_below = if n <= k { h } else { FgAbGroup::zero() };
        ensure!(ha == want_above, "H_{n} of truncate_above at {k} is {ha}, expected {want_above} for {x:?}");
        ensure!(hb == want_below, "H_{n} of truncate_below at {k} is {hb}, expected {want_below} for {x:?}");
    }
    Ok(())
}

fn homology_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let (x, expected) = random::complex_with_known_homology(rng);
    ensure!(homology_all(&x) == expected, "homology of {x:?} is {:?}, expected {expected:?}", homology_all(&x));
    let y = random::complex(rng);
    if let Some((lo, hi)) = y.degree_range() {
        for n in lo..=hi {
            let want = oracle::homology_by_ranks(&y, n);
            ensure!(homology(&y, n) == want, "H_{n} of {y:?} disagrees with rank formula {want}");
        }
        let k = rng.gen_range(lo - 1..=hi + 1);
        check_truncations(&y, k)?;
    }
    let z = random::complex(rng);
    let sum = complex_sum(&y, &z);
    if let Some((lo, hi)) = sum.degree_range() {
        for n in lo..=hi {
            let want = direct_sum(&homology(&y, n), &homology(&z, n));
            ensure!(homology(&sum, n) == want, "homology is not additive in degree {n}");
        }
    }
    Ok(())
}

pub fn check_euler(x: &PerfectComplex) -> std::result::Result<(), String> {
    let from_homology: i64 = homology_all(x)
        .iter()
        .map(|(n, h)| if n.rem_euclid(2) == 0 { 1 } else { -1 } * h.free_rank() as i64)
        .sum();
    ensure!(
        x.euler_characteristic() == from_homology,
        "rank Euler characteristic {} differs from homology {from_homology} for {x:?}",
        x.euler_characteristic()
    );
    Ok(())
}

fn euler_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    check_euler(&random::complex(rng))?;
    // cone Euler relation on p-lengths
    let f = random::chain_map(rng);
    let c = cone(&f);
    let supp = ok(support_union(
        &complexes::support(f.source()),
        &complexes::support(f.target()),
    ))?;
    if let ThickSupport::Primes(_) = supp {
        let lhs = ok(class_of_complex(&c, &supp))?;
        let rhs = ok(ok(class_of_complex(f.target(), &supp))?.sub(&ok(class_of_complex(f.source(), &supp))?))?;
        ensure!(lhs == rhs, "p-length Euler relation fails for cone of {f:?}");
    }
    Ok(())
}

fn k0_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let m = random::group(rng, 2);
    let s = random::support_containing(rng, &zmodules::support(&m));
    let direct = ok(class_of_module(&m, &s))?;
    let via = ok(class_of_complex(&from_module(&m), &s))?;
    ensure!(direct == via, "psi(phi({m})) = {via:?} but class is {direct:?} on {s:?}");

    let x = random::complex(rng);
    let s = random::support_containing(rng, &complexes::support(&x));
    ensure!(ok(check_truncation_identity(&x, &s))?, "truncation identity fails for {x:?} on {s:?}");

    let f = random::chain_map(rng);
    let supp = ok(support_union(
        &complexes::support(f.source()),
        &complexes::support(f.target()),
    ))?;
    let s = random::support_containing(rng, &supp);
    ensure!(ok(check_triangle_additivity(&f, &s))?, "triangle additivity fails for {f:?} on {s:?}");
    Ok(())
}

fn ses_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let e = random::short_exact_sequence(rng);
    let supp = zmodules::support(&e.middle);
    let s = random::support_containing(rng, &supp);
    ensure!(
        ok(check_ses_additivity(&e.sub, &e.middle, &e.quotient, &s))?,
        "additivity fails for {e:?} on {s:?}"
    );
    Ok(())
}

fn ext_vanish_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let p = random::SMALL_PRIMES[rng.gen_range(0..4)];
    let mut q = random::SMALL_PRIMES[rng.gen_range(0..3)];
    if q >= p {
        q = random::SMALL_PRIMES[random::SMALL_PRIMES.iter().position(|&x| x == q).unwrap() + 1];
    }
    let a = random::primary_group(rng, p, 3, 4);
    let b = random::primary_group(rng, q, 3, 4);
    ensure!(hom(&a, &b).is_zero(), "Hom({a}, {b}) = {}", hom(&a, &b));
    ensure!(ext1(&a, &b).is_zero(), "Ext({a}, {b}) = {}", ext1(&a, &b));
    Ok(())
}

fn random_member(rng: &mut ChaCha8Rng) -> PerfectComplex {
    match rng.gen_range(0..3) {
        0 => random::complex(rng),
        1 => from_module(&random::group(rng, 1)),
        _ => cone(&random::chain_map(rng)),
    }
}

fn hovey_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let s = random::z_support(rng);
    let x = random_member(rng);
    ensure!(ok(check_diagram_commutes(&s, &x))?, "zeta and f disagree on {x:?} for {s:?}");

    // monotonicity in the support
    let bigger = random::support_containing(rng, &s);
    let (w, w2) = (ok(WideSubcat::new(s.clone()))?, ok(WideSubcat::new(bigger.clone()))?);
    let (t, t2) = (ok(ThickSubcat::new(s.clone()))?, ok(ThickSubcat::new(bigger))?);
    let m = random::group(rng, 1);
    ensure!(!xi_contains(&w, &m) || xi_contains(&w2, &m), "xi is not monotone at {m}");
    ensure!(!zeta_contains(&t, &x) || zeta_contains(&t2, &x), "zeta is not monotone");
    ensure!(!f_contains(&w, &x) || f_contains(&w2, &x), "f is not monotone");

    // decomposition round trip
    let parts: Vec<ThickSupport> = decompose_wide(&w).into_iter().map(|c| c.support().clone()).collect();
    ensure!(parts == ok(ks_decompose(&SpectrumModel::ZSpec, &s))?.parts, "decompose_wide differs from ks_decompose");
    if xi_contains(&w, &m) {
        let pieces = ok(split_object(&w, &m))?;
        let union = pieces.iter().try_fold(ThickSupport::empty_z(), |acc, (_, g)| {
            support_union(&acc, &zmodules::support(g))
        });
        ensure!(ok(union)? == zmodules::support(&m), "piece supports do not cover Supp({m})");
    }

    // coproduct closure across disjoint supports
    let mut primes = random::SMALL_PRIMES.to_vec();
    let cut = rng.gen_range(0..=primes.len());
    let right = primes.split_off(cut);
    let s1 = ok(ThickSupport::primes(primes.iter().copied()))?;
    let s2 = ok(ThickSupport::primes(right.iter().copied()))?;
    let pick = |rng: &mut ChaCha8Rng, ps: &[u64]| {
        ps.iter().fold(FgAbGroup::zero(), |acc, &p| {
            direct_sum(&acc, &random::primary_group(rng, p, 2, 3))
        })
    };
    let m1 = pick(rng, &primes);
    let m2 = pick(rng, &right);
    ensure!(hom(&m1, &m2).is_zero() && ext1(&m1, &m2).is_zero(), "Hom/Ext between {m1} and {m2} do not vanish");
    ensure!(hom(&m2, &m1).is_zero() && ext1(&m2, &m1).is_zero(), "Hom/Ext between {m2} and {m1} do not vanish");
    let union = ok(support_union(&s1, &s2))?;
    ensure!(xi_contains(&ok(WideSubcat::new(union.clone()))?, &direct_sum(&m1, &m2)), "coproduct not closed");

    // indecomposable pieces reassemble uniquely
    let mut expected: Vec<ThickSupport> = ok(ks_decompose(&SpectrumModel::ZSpec, &s1))?.parts;
    expected.extend(ok(ks_decompose(&SpectrumModel::ZSpec, &s2))?.parts);
    expected.sort();
    let mut got: Vec<ThickSupport> =
        decompose_wide(&ok(WideSubcat::new(union))?).into_iter().map(|c| c.support().clone()).collect();
    got.sort();
    ensure!(got == expected, "union of indecomposables does not decompose back");
    Ok(())
}

/// Checks every property of `ks_decompose` on one thick support of a poset.
pub fn check_poset_support(poset: &FinPoset, a: PointSet, exhaustive: bool) -> std::result::Result<(), String> {
    let model = SpectrumModel::FinPoset(poset.clone());
    let parts = ok(ks_decompose(&model, &ThickSupport::UpSet(a)))?.parts;
    let sets: Vec<PointSet> = parts
        .iter()
        .map(|p| match p {
            ThickSupport::UpSet(s) => *s,
            other => panic!("poset decomposition produced {other:?}"),
        })
        .collect();
    let mut cover = PointSet::EMPTY;
    for (i, s) in sets.iter().enumerate() {
        ensure!(!s.is_empty(), "empty part in decomposition of {a:?}");
        ensure!(poset.is_up_closed(*s), "part {s:?} of {a:?} is not up-closed");
        ensure!(oracle::indecomposable_by_search(poset, *s), "part {s:?} of {a:?} decomposes further");
        for t in &sets[i + 1..] {
            ensure!(s.intersection(*t).is_empty(), "parts {s:?} and {t:?} overlap");
        }
        cover = cover.union(*s);
    }
    ensure!(cover == a, "parts cover {cover:?} instead of {a:?}");
    let indec = ok(is_indecomposable(&model, &ThickSupport::UpSet(a)))?;
    ensure!(
        indec == oracle::indecomposable_by_search(poset, a),
        "is_indecomposable({a:?}) = {indec} disagrees with search"
    );
    if exhaustive {
        let mut mine = sets.clone();
        mine.sort();
        let all = oracle::all_decompositions(poset, a);
        ensure!(all == vec![mine.clone()], "decompositions of {a:?} found by search: {all:?}, ks gives {mine:?}");
    }
    Ok(())
}

pub fn check_relabeling(poset: &FinPoset, perm: &[usize]) -> std::result::Result<(), String> {
    let moved = ok(poset.relabel(perm))?;
    let (m1, m2) = (SpectrumModel::FinPoset(poset.clone()), SpectrumModel::FinPoset(moved.clone()));
    for a in ok(enumerate_up_sets(poset))? {
        let mut image: Vec<ThickSupport> = ok(ks_decompose(&m1, &ThickSupport::UpSet(a)))?
            .parts
            .into_iter()
            .map(|p| match p {
                ThickSupport::UpSet(s) => ThickSupport::UpSet(s.map(perm)),
                other => other,
            })
            .collect();
        let mut direct = ok(ks_decompose(&m2, &ThickSupport::UpSet(a.map(perm))))?.parts;
        image.sort();
        direct.sort();
        ensure!(image == direct, "relabeling by {perm:?} does not commute with decomposition of {a:?}");
    }
    Ok(())
}

fn ks_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let poset = random::poset(rng, random::MAX_POSET_POINTS);
    let exhaustive = poset.len() <= 8;
    for a in ok(enumerate_up_sets(&poset))? {
        check_poset_support(&poset, a, exhaustive).map_err(|e| format!("{e} in {poset:?}"))?;
    }
    let perm = random::permutation(rng, poset.len());
    check_relabeling(&poset, &perm)
}

/// Locality against "every nonempty thick support is indecomposable".
pub fn check_locality(poset: &FinPoset) -> std::result::Result<(), String> {
    let local = ok(is_local(&SpectrumModel::FinPoset(poset.clone())))?;
    let all_indecomposable = ok(enumerate_up_sets(poset))?
        .into_iter()
        .filter(|s| !s.is_empty())
        .all(|s| oracle::indecomposable_by_search(poset, s));
    ensure!(local == all_indecomposable, "is_local = {local} but all-indecomposable = {all_indecomposable} for {poset:?}");
    Ok(())
}

fn local_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    check_locality(&random::poset(rng, 7))
}

/// Splitting a group along its support and the matching class decomposition.
pub fn check_split(m: &FgAbGroup, s: &ThickSupport) -> std::result::Result<(), String> {
    let w = ok(WideSubcat::new(s.clone()))?;
    let pieces = ok(split_object(&w, m))?;
    let supports: Vec<ThickSupport> = pieces.iter().map(|(_, g)| zmodules::support(g)).collect();
    for (i, a) in supports.iter().enumerate() {
        ensure!(ok(is_indecomposable(&SpectrumModel::ZSpec, a))?, "piece support {a:?} of {m} is decomposable");
        for b in &supports[i + 1..] {
            ensure!(ok(a.is_disjoint(b))?, "piece supports {a:?} and {b:?} of {m} overlap");
        }
    }
    for (c, g) in &pieces {
        ensure!(xi_contains(c, g), "piece {g} lies outside its component {:?}", c.support());
    }
    let total = zmodules::direct_sum_all(pieces.iter().map(|(_, g)| g));
    ensure!(&total == m, "pieces of {m} reassemble to {total}");

    let whole = ok(class_of_module(m, s))?;
    let parts: Vec<K0Class> = ok(decompose_class(m, s))?.into_iter().map(|(_, c)| c).collect();
    let joined = ok(K0Class::concat(&parts))?;
    ensure!(joined == whole, "class of {m} on {s:?} is {whole:?}, concatenated parts give {joined:?}");
    Ok(())
}

fn split_trial(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let m = random::group(rng, 1);
    let s = random::support_containing(rng, &zmodules::support(&m));
    check_split(&m, &s)
}
