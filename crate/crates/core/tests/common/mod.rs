//! Reference computations written independently of the library, used as
//! oracles by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use widecat::{FinPoset, IntMatrix, PointSet};

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect())
        .collect()
}

/// Fraction-free Gaussian elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = to_rows(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        sign
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// Cofactor expansion along the first row.
pub fn det_laplace(a: &[Vec<BigInt>]) -> BigInt {
    match a.len() {
        0 => BigInt::one(),
        1 => a[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &a[0][j] * det_laplace(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `gcd` of all `k x k` minors, `k = 1..=min(rows, cols)`.
pub fn minor_gcds(m: &IntMatrix) -> Vec<BigInt> {
    let a = to_rows(m);
    (1..=m.rows().min(m.cols()))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<BigInt>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                    g = g.gcd(&det_laplace(&sub));
                }
            }
            g
        })
        .collect()
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(u64::try_from(&p).unwrap());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(u64::try_from(&n).unwrap());
    }
    out
}

pub fn up_closed(poset: &FinPoset, s: PointSet) -> bool {
    s.iter().all(|i| (0..poset.len()).all(|j| !poset.leq(i, j) || s.contains(j)))
}

pub fn submasks(s: PointSet) -> impl Iterator<Item = PointSet> {
    let bits = s.bits();
    let mut cur = Some(bits);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 { None } else { Some((c - 1) & bits) };
        Some(PointSet::from_bits(c))
    })
}

/// No split into two nonempty complementary up-closed parts.
pub fn indecomposable(poset: &FinPoset, a: PointSet) -> bool {
    !a.is_empty()
        && !submasks(a)
            .filter(|b| !b.is_empty() && *b != a)
            .any(|b| up_closed(poset, b) && up_closed(poset, a.difference(b)))
}

pub fn up_sets(poset: &FinPoset) -> Vec<PointSet> {
    submasks(poset.all()).filter(|s| up_closed(poset, *s)).collect()
}

/// Every partition of `a` into indecomposable up-closed blocks, each
/// partition sorted.
pub fn decompositions(poset: &FinPoset, a: PointSet, blocks: &[PointSet]) -> Vec<Vec<PointSet>> {
    fn go(blocks: &[PointSet], rest: PointSet, cur: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        let Some(first) = rest.iter().next() else {
            let mut p = cur.clone();
            p.sort();
            out.push(p);
            return;
        };
        for &b in blocks {
            if b.contains(first) && b.is_subset(rest) {
                cur.push(b);
                go(blocks, rest.difference(b), cur, out);
                cur.pop();
            }
        }
    }
    let _ = poset;
    let mut out = Vec::new();
    go(blocks, a, &mut Vec::new(), &mut out);
    out
}

/// All partial orders on `n` labeled points, as `leq` matrices.
pub fn all_posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut c = code;
        for &(i, j) in &pairs {
            match c % 3 {
                1 => leq[i][j] = true,
                2 => leq[j][i] = true,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c]))
        });
        if transitive {
            out.push(leq);
        }
    }
    out
}
