//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the per-criterion lines are always shown.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;
use widecat::complexes::{self, cone, from_module, homology_all, shift};
use widecat::hovey::{f_contains, split_object, zeta_contains};
use widecat::ktheory::{class_of_complex, class_of_module, decompose_class};
use widecat::random::{self, trial_rng, SMALL_PRIMES};
use widecat::spectra::{is_local, ks_decompose};
use widecat::zmodules::{self, direct_sum, direct_sum_all, ext1, hom};
use widecat::{
    smith_normal_form, FgAbGroup, FinPoset, K0Class, PointSet, SpectrumModel, ThickSubcat,
    ThickSupport, WideSubcat,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_snf_soundness() -> Outcome {
    for t in 0..1000 {
        let mut rng = trial_rng(101, t);
        let a = random::matrix_up_to(&mut rng, 8, 8, 30);
        let r = smith_normal_form(&a);
        ensure(&(&r.u * &a) * &r.v == r.d, || format!("trial {t}: D != UAV for {a:?}"))?;
        ensure(common::is_unit(&common::det(&r.u)), || format!("trial {t}: det U not a unit"))?;
        ensure(common::is_unit(&common::det(&r.v)), || format!("trial {t}: det V not a unit"))?;
        let d = common::to_rows(&r.d);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                ensure(i == j || x.is_zero(), || format!("trial {t}: D has an off-diagonal entry"))?;
            }
        }
        let diag: Vec<BigInt> = (0..a.rows().min(a.cols())).map(|i| d[i][i].clone()).collect();
        for w in diag.windows(2) {
            let chain = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            ensure(chain, || format!("trial {t}: diagonal {diag:?} breaks the divisibility chain"))?;
        }
        ensure(diag.iter().all(|x| *x >= BigInt::zero()), || format!("trial {t}: negative diagonal"))?;
    }
    Ok("1000 matrices".into())
}

fn c2_snf_oracle() -> Outcome {
    for t in 0..200 {
        let mut rng = trial_rng(202, t);
        let a = random::matrix_up_to(&mut rng, 4, 4, 6);
        let diag = smith_normal_form(&a).diagonal();
        let gcds = common::minor_gcds(&a);
        let mut prod = BigInt::one();
        for k in 0..gcds.len() {
            prod *= &diag[k];
            ensure(prod == gcds[k], || {
                format!("trial {t}: d_1..d_{} = {prod}, gcd of minors {} for {a:?}", k + 1, gcds[k])
            })?;
        }
    }
    Ok("200 matrices".into())
}

fn c3_euler() -> Outcome {
    let mut nontrivial = 0;
    for t in 0..500 {
        let mut rng = trial_rng(303, t);
        let x = random::complex(&mut rng);
        let from_ranks: i64 = x
            .ranks()
            .iter()
            .enumerate()
            .map(|(i, r)| sign(x.bottom_degree() + i as i64) * *r as i64)
            .sum();
        let from_homology: i64 = homology_all(&x)
            .iter()
            .map(|(n, h)| sign(*n) * h.free_rank() as i64)
            .sum();
        ensure(from_ranks == from_homology, || {
            format!("trial {t}: ranks give {from_ranks}, homology gives {from_homology} for {x:?}")
        })?;
        if x.differentials().iter().any(|d| !d.is_zero()) {
            nontrivial += 1;
        }
    }
    Ok(format!("500 complexes, {nontrivial} with nonzero differentials"))
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn c4_round_trip() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    for t in 0..500 {
        let mut rng = trial_rng(404, t);
        let m = random::group(&mut rng, 2);
        let s = random::support_containing(&mut rng, &zmodules::support(&m));
        let direct = class_of_module(&m, &s).map_err(err)?;
        let via = class_of_complex(&from_module(&m), &s).map_err(err)?;
        ensure(direct == via, || format!("module trial {t}: {m} on {s}: {direct:?} vs {via:?}"))?;
    }
    for t in 0..500 {
        let mut rng = trial_rng(405, t);
        let x = random::complex(&mut rng);
        let s = random::support_containing(&mut rng, &complexes::support(&x));
        let lhs = class_of_complex(&x, &s).map_err(err)?;
        let mut rhs = K0Class::zero(&s).map_err(err)?;
        for (n, h) in homology_all(&x) {
            // the class of H_n placed in degree n
            let term = class_of_complex(&shift(&from_module(&h), n), &s).map_err(err)?;
            ensure(term == class_of_module(&h, &s).map_err(err)?.scale(sign(n)), || {
                format!("complex trial {t}: shifted class of H_{n} has the wrong sign")
            })?;
            rhs = rhs.add(&term).map_err(err)?;
        }
        ensure(lhs == rhs, || format!("complex trial {t}: [X] = {lhs:?} but homology sum {rhs:?} for {x:?}"))?;
    }
    for t in 0..300 {
        let mut rng = trial_rng(406, t);
        let f = random::chain_map(&mut rng);
        let supp = widecat::spectra::support_union(
            &complexes::support(f.source()),
            &complexes::support(f.target()),
        )
        .map_err(err)?;
        let s = random::support_containing(&mut rng, &supp);
        let c = class_of_complex(&cone(&f), &s).map_err(err)?;
        let y = class_of_complex(f.target(), &s).map_err(err)?;
        let x = class_of_complex(f.source(), &s).map_err(err)?;
        ensure(c == y.sub(&x).map_err(err)?, || format!("cone trial {t}: [C] != [Y] - [X] for {f:?}"))?;
    }
    Ok("500 modules, 500 complexes, 300 cones".into())
}

fn c5_example() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    let s = ThickSupport::primes([2, 3, 5]).map_err(err)?;
    let basis: Vec<Vec<i64>> = [2, 3, 5]
        .iter()
        .map(|&p| class_of_module(&FgAbGroup::cyclic(p), &s).map(|c| c.coords()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(basis == vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], || {
        format!("classes of Z/2, Z/3, Z/5 are {basis:?}")
    })?;
    // the image has rank 3: the basis matrix has determinant +-1
    let m = widecat::IntMatrix::from_i64(&basis.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
    ensure(common::is_unit(&common::det(&m)), || "classes do not span Z^3".into())?;

    let torsions = [
        FgAbGroup::zero(),
        FgAbGroup::cyclic(2),
        FgAbGroup::cyclic(12),
        FgAbGroup::from_cyclic_orders(0, [BigInt::from(4), BigInt::from(4), BigInt::from(9)]),
    ];
    for k in 0..=5usize {
        for tor in &torsions {
            let m = direct_sum(&FgAbGroup::free(k), tor);
            let c = class_of_module(&m, &ThickSupport::Full).map_err(err)?;
            ensure(c == K0Class::Full(k as i64), || format!("class of {m} is {c:?}, expected {k}"))?;
        }
    }
    Ok("basis {2,3,5} and ranks 0..=5".into())
}

/// Every `p`-primary group with at most three summands of exponent at most four.
fn primary_groups(p: u64) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    for count in 0..=3u32 {
        let mut exps = vec![1u32; count as usize];
        loop {
            let orders: Vec<BigInt> = exps.iter().map(|&e| BigInt::from(p).pow(e)).collect();
            out.push(FgAbGroup::from_cyclic_orders(0, orders));
            // next non-decreasing exponent sequence
            let Some(i) = (0..exps.len()).rev().find(|&i| exps[i] < 4) else { break };
            let v = exps[i] + 1;
            for e in &mut exps[i..] {
                *e = v;
            }
        }
    }
    out
}

fn c6_vanishing() -> Outcome {
    let mut pairs = 0;
    for &p in &SMALL_PRIMES {
        let gp = primary_groups(p);
        ensure(gp.len() == 35, || format!("expected 35 {p}-primary groups, got {}", gp.len()))?;
        // control: the same prime does not vanish
        let a = FgAbGroup::cyclic(BigInt::from(p).pow(2));
        ensure(!hom(&a, &a).is_zero() && !ext1(&a, &a).is_zero(), || format!("Hom/Ext vanish at {p}"))?;
        for &q in SMALL_PRIMES.iter().filter(|&&q| q != p) {
            for a in &gp {
                for b in &primary_groups(q) {
                    pairs += 1;
                    ensure(hom(a, b).is_zero(), || format!("Hom({a}, {b}) = {}", hom(a, b)))?;
                    ensure(ext1(a, b).is_zero(), || format!("Ext({a}, {b}) = {}", ext1(a, b)))?;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn c7_diagram() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    let mut members = 0;
    for t in 0..1000 {
        let mut rng = trial_rng(707, t);
        let s = random::z_support(&mut rng);
        let x = match rng.gen_range(0..3) {
            0 => random::complex(&mut rng),
            1 => from_module(&random::group(&mut rng, 1)),
            _ => cone(&random::chain_map(&mut rng)),
        };
        let z = zeta_contains(&ThickSubcat::new(s.clone()).map_err(err)?, &x);
        let f = f_contains(&WideSubcat::new(s.clone()).map_err(err)?, &x);
        ensure(z == f, || format!("trial {t}: zeta {z}, f {f} on {s} for {x:?}"))?;
        members += z as usize;
    }
    Ok(format!("1000 pairs, {members} members"))
}

fn c8_krull_schmidt() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    let mut supports = 0;
    let mut exhaustive = 0;
    for t in 0..200 {
        let mut rng = trial_rng(808, t);
        let poset = random::poset(&mut rng, 10);
        let model = SpectrumModel::FinPoset(poset.clone());
        let ups = common::up_sets(&poset);
        let blocks: Vec<PointSet> = ups.iter().copied().filter(|s| common::indecomposable(&poset, *s)).collect();
        let perm = random::permutation(&mut rng, poset.len());
        let moved = poset.relabel(&perm).map_err(err)?;
        let moved_model = SpectrumModel::FinPoset(moved);
        for &a in &ups {
            supports += 1;
            let parts = up_parts(&ks_decompose(&model, &ThickSupport::UpSet(a)).map_err(err)?.parts);
            let mut cover = PointSet::EMPTY;
            for (i, p) in parts.iter().enumerate() {
                ensure(!p.is_empty() && common::up_closed(&poset, *p), || format!("poset {t}: bad part {p:?}"))?;
                ensure(common::indecomposable(&poset, *p), || format!("poset {t}: part {p:?} decomposes"))?;
                ensure(parts[i + 1..].iter().all(|q| q.intersection(*p).is_empty()), || {
                    format!("poset {t}: parts of {a:?} overlap")
                })?;
                cover = cover.union(*p);
            }
            ensure(cover == a, || format!("poset {t}: parts of {a:?} cover {cover:?}"))?;
            let mut sorted = parts.clone();
            sorted.sort();
            if poset.len() <= 8 {
                let all = common::decompositions(&poset, a, &blocks);
                ensure(all == vec![sorted.clone()], || {
                    format!("poset {t}: decompositions of {a:?} are {all:?}, returned {sorted:?}")
                })?;
                exhaustive += 1;
            }
            let mut image: Vec<PointSet> = parts.iter().map(|p| p.map(&perm)).collect();
            image.sort();
            let mut direct =
                up_parts(&ks_decompose(&moved_model, &ThickSupport::UpSet(a.map(&perm))).map_err(err)?.parts);
            direct.sort();
            ensure(image == direct, || format!("poset {t}: relabeling changes the decomposition of {a:?}"))?;
        }
    }
    Ok(format!("200 posets, {supports} supports, {exhaustive} searched exhaustively"))
}

fn up_parts(parts: &[ThickSupport]) -> Vec<PointSet> {
    parts
        .iter()
        .map(|p| match p {
            ThickSupport::UpSet(s) => *s,
            other => panic!("poset part {other:?}"),
        })
        .collect()
}

fn c9_local() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    let mut count = 0;
    let mut local = 0;
    for n in 1..=5 {
        for leq in common::all_posets(n) {
            let poset = FinPoset::from_relation(n, |i, j| leq[i][j]).map_err(err)?;
            let expected = common::up_sets(&poset)
                .into_iter()
                .filter(|s| !s.is_empty())
                .all(|s| common::indecomposable(&poset, s));
            let got = is_local(&SpectrumModel::FinPoset(poset)).map_err(err)?;
            ensure(got == expected, || format!("is_local = {got} on {leq:?}, expected {expected}"))?;
            count += 1;
            local += got as usize;
        }
    }
    // labeled posets on 1..=5 points
    ensure(count == 1 + 3 + 19 + 219 + 4231, || format!("enumerated {count} posets"))?;
    Ok(format!("{count} posets, {local} local"))
}

fn c10_split() -> Outcome {
    let err = |e: widecat::Error| e.to_string();
    for t in 0..300 {
        let mut rng = trial_rng(1010, t);
        let m = random::group(&mut rng, 1);
        let s = random::support_containing(&mut rng, &zmodules::support(&m));
        let pieces = split_object(&WideSubcat::new(s.clone()).map_err(err)?, &m).map_err(err)?;
        // points of each piece's support: None stands for the generic point
        let mut seen: BTreeMap<Option<u64>, usize> = BTreeMap::new();
        for (i, (_, g)) in pieces.iter().enumerate() {
            ensure(!g.is_zero(), || format!("trial {t}: zero piece"))?;
            let points: Vec<Option<u64>> = if g.free_rank() > 0 {
                let mut all = vec![None];
                for d in g.invariant_factors() {
                    all.extend(common::prime_factors(d).into_iter().map(Some));
                }
                all
            } else {
                common::prime_factors(g.invariant_factors().last().unwrap()).into_iter().map(Some).collect()
            };
            let mut distinct = points.clone();
            distinct.sort();
            distinct.dedup();
            ensure(g.free_rank() > 0 || distinct.len() == 1, || {
                format!("trial {t}: torsion piece {g} has decomposable support")
            })?;
            for p in distinct {
                ensure(seen.insert(p, i).is_none(), || format!("trial {t}: pieces of {m} share a point"))?;
            }
        }
        if m.free_rank() > 0 {
            ensure(pieces.len() == 1, || format!("trial {t}: {m} has full support but splits"))?;
        }
        let total = direct_sum_all(pieces.iter().map(|(_, g)| g));
        ensure(total == m, || format!("trial {t}: pieces of {m} sum to {total}"))?;

        let whole = class_of_module(&m, &s).map_err(err)?;
        let parts = decompose_class(&m, &s).map_err(err)?;
        let concat: Vec<i64> = parts.iter().flat_map(|(_, c)| c.coords()).collect();
        ensure(concat == whole.coords(), || {
            format!("trial {t}: class {:?} of {m} vs concatenation {concat:?}", whole.coords())
        })?;
    }
    Ok("300 groups".into())
}

fn c11_cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_widecat"))
            .args(["verify", "--suite", "all", "--trials", "100", "--seed", "7", "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || {
            format!("run {i} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stdout))
        })?;
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        ensure(v["failures"] == 0 && v["trials"].as_u64().unwrap_or(0) >= 100, || format!("report {text}"))?;
        let without_timing: String =
            text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_ms\"")).collect::<Vec<_>>().join("\n");
        reports.push(without_timing);
    }
    ensure(reports[0] == reports[1], || "reports differ beyond the timing field".into())?;
    Ok("two runs identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("SNF soundness", c1_snf_soundness),
        ("SNF determinant-divisor oracle", c2_snf_oracle),
        ("Euler conservation", c3_euler),
        ("K0 round trip", c4_round_trip),
        ("K0 basis and rank classes", c5_example),
        ("Hom/Ext vanishing across primes", c6_vanishing),
        ("zeta = f o xi", c7_diagram),
        ("Krull-Schmidt decomposition of supports", c8_krull_schmidt),
        ("locality criterion", c9_local),
        ("object splitting", c10_split),
        ("CLI determinism", c11_cli_determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
