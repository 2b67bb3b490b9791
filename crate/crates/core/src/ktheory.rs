//! Grothendieck-group classes relative to a thick support of the integers.
//!
//! For a proper support `S` (finitely many primes) the classes are vectors of
//! p-lengths indexed by the primes of `S`; for the full spectrum a class is
//! a single free rank. Complexes map in through the alternating sum of their
//! homology classes.

use std::fmt;

use crate::complexes::{self, cone, from_module, homology_all, ChainMap, PerfectComplex};
use crate::error::{Error, Result};
use crate::spectra::{ks_decompose, Prime, SpectrumModel, ThickSupport};
use crate::zmodules::{self, p_length, split_by_support, FgAbGroup};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum K0Class {
    /// Class in the Grothendieck group of all finitely generated groups.
    Full(i64),
    /// Class relative to a finite set of primes, one p-length per prime.
    Primes { primes: Vec<Prime>, coords: Vec<i64> },
}

impl K0Class {
    pub fn zero(s: &ThickSupport) -> Result<Self> {
        match s {
            ThickSupport::Full => Ok(K0Class::Full(0)),
            ThickSupport::Primes(ps) => Ok(K0Class::Primes {
                primes: ps.iter().cloned().collect(),
                coords: vec![0; ps.len()],
            }),
            ThickSupport::UpSet(_) => Err(not_integral()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            K0Class::Full(r) => *r == 0,
            K0Class::Primes { coords, .. } => coords.iter().all(|&c| c == 0),
        }
    }

    pub fn coords(&self) -> Vec<i64> {
        match self {
            K0Class::Full(r) => vec![*r],
            K0Class::Primes { coords, .. } => coords.clone(),
        }
    }

    fn zip(&self, other: &K0Class, op: impl Fn(i64, i64) -> i64) -> Result<K0Class> {
        match (self, other) {
            (K0Class::Full(a), K0Class::Full(b)) => Ok(K0Class::Full(op(*a, *b))),
            (
                K0Class::Primes { primes: p, coords: a },
                K0Class::Primes { primes: q, coords: b },
            ) if p == q => Ok(K0Class::Primes {
                primes: p.clone(),
                coords: a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect(),
            }),
            _ => Err(Error::input("classes belong to different Grothendieck groups")),
        }
    }

    pub fn add(&self, other: &K0Class) -> Result<K0Class> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &K0Class) -> Result<K0Class> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> K0Class {
        match self {
            K0Class::Full(r) => K0Class::Full(-r),
            K0Class::Primes { primes, coords } => K0Class::Primes {
                primes: primes.clone(),
                coords: coords.iter().map(|c| -c).collect(),
            },
        }
    }

    pub fn scale(&self, k: i64) -> K0Class {
        match self {
            K0Class::Full(r) => K0Class::Full(k * r),
            K0Class::Primes { primes, coords } => K0Class::Primes {
                primes: primes.clone(),
                coords: coords.iter().map(|c| k * c).collect(),
            },
        }
    }

    /// Joins classes over disjoint prime sets into one class over the union,
    /// primes ascending.
    pub fn concat(parts: &[K0Class]) -> Result<K0Class> {
        let mut pairs = Vec::new();
        for part in parts {
            match part {
                K0Class::Primes { primes, coords } => {
                    pairs.extend(primes.iter().cloned().zip(coords.iter().copied()))
                }
                K0Class::Full(_) if parts.len() == 1 => return Ok(part.clone()),
                K0Class::Full(_) => {
                    return Err(Error::input("a full-support class cannot be concatenated"))
                }
            }
        }
        pairs.sort();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::input("concatenated classes overlap"));
        }
        let (primes, coords) = pairs.into_iter().unzip();
        Ok(K0Class::Primes { primes, coords })
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K0Class::Full(r) => write!(f, "[{r}]"),
            K0Class::Primes { primes, coords } => {
                let items: Vec<String> = primes
                    .iter()
                    .zip(coords)
                    .map(|(p, c)| format!("{p}:{c}"))
                    .collect();
                write!(f, "[{}]", items.join(", "))
            }
        }
    }
}

fn not_integral() -> Error {
    Error::input("Grothendieck classes are defined for supports in the integer spectrum")
}

/// Fails with a message naming the first point of `supp` missing from `s`.
fn require_within(what: &str, supp: &ThickSupport, s: &ThickSupport) -> Result<()> {
    match (supp, s) {
        (_, ThickSupport::UpSet(_)) | (ThickSupport::UpSet(_), _) => Err(not_integral()),
        (_, ThickSupport::Full) => Ok(()),
        (ThickSupport::Full, ThickSupport::Primes(_)) => Err(Error::domain(format!(
            "{what} has the generic point (0) in its support, outside the given support"
        ))),
        (ThickSupport::Primes(ps), ThickSupport::Primes(allowed)) => {
            match ps.iter().find(|p| !allowed.contains(p)) {
                Some(p) => Err(Error::domain(format!(
                    "{what} is supported at the prime {p}, outside the given support"
                ))),
                None => Ok(()),
            }
        }
    }
}

/// Class of a group whose support lies in `s`: its free rank for the full
/// spectrum, otherwise its p-lengths for `p` in `s`.
pub fn class_of_module(m: &FgAbGroup, s: &ThickSupport) -> Result<K0Class> {
    require_within(&m.to_string(), &zmodules::support(m), s)?;
    match s {
        ThickSupport::Full => Ok(K0Class::Full(m.free_rank() as i64)),
        ThickSupport::Primes(ps) => Ok(K0Class::Primes {
            primes: ps.iter().cloned().collect(),
            coords: ps
                .iter()
                .map(|p| p_length(m, p).map(|l| l as i64))
                .collect::<Result<_>>()?,
        }),
        ThickSupport::UpSet(_) => Err(not_integral()),
    }
}

/// Alternating sum of the classes of the homology groups.
pub fn class_of_complex(x: &PerfectComplex, s: &ThickSupport) -> Result<K0Class> {
    require_within("the complex", &complexes::support(x), s)?;
    let mut total = K0Class::zero(s)?;
    for (n, h) in homology_all(x) {
        let c = class_of_module(&h, s)?;
        total = if n.rem_euclid(2) == 0 {
            total.add(&c)?
        } else {
            total.sub(&c)?
        };
    }
    Ok(total)
}

/// `[cone f] = [Y] - [X]` for `f : X -> Y`.
pub fn check_triangle_additivity(f: &ChainMap, s: &ThickSupport) -> Result<bool> {
    let x = class_of_complex(f.source(), s)?;
    let y = class_of_complex(f.target(), s)?;
    let c = class_of_complex(&cone(f), s)?;
    Ok(c == y.sub(&x)?)
}

/// `[X] = sum_n (-1)^n [H_n(X)[0]]`.
pub fn check_truncation_identity(x: &PerfectComplex, s: &ThickSupport) -> Result<bool> {
    let lhs = class_of_complex(x, s)?;
    let mut rhs = K0Class::zero(s)?;
    for (n, h) in homology_all(x) {
        let c = class_of_complex(&from_module(&h), s)?;
        rhs = rhs.add(&c.scale(if n.rem_euclid(2) == 0 { 1 } else { -1 }))?;
    }
    Ok(lhs == rhs)
}

/// `[B] = [A] + [C]` for a short exact sequence `0 -> A -> B -> C -> 0`.
pub fn check_ses_additivity(
    a: &FgAbGroup,
    b: &FgAbGroup,
    c: &FgAbGroup,
    s: &ThickSupport,
) -> Result<bool> {
    let (ca, cb, cc) = (
        class_of_module(a, s)?,
        class_of_module(b, s)?,
        class_of_module(c, s)?,
    );
    Ok(cb == ca.add(&cc)?)
}

/// Class of `m` split along the Krull-Schmidt decomposition of `s`: one
/// class per part, computed from the piece of `m` living on that part.
pub fn decompose_class(m: &FgAbGroup, s: &ThickSupport) -> Result<Vec<(ThickSupport, K0Class)>> {
    require_within(&m.to_string(), &zmodules::support(m), s)?;
    let pieces = split_by_support(m);
    ks_decompose(&SpectrumModel::ZSpec, s)?
        .parts
        .into_iter()
        .map(|part| {
            let piece = pieces
                .iter()
                .find(|(supp, _)| supp.within(&part))
                .map(|(_, g)| g.clone())
                .unwrap_or_else(FgAbGroup::zero);
            let class = class_of_module(&piece, &part)?;
            Ok((part, class))
        })
        .collect()
}
