//! Wide and thick subcategories over the integers, each determined by its
//! thick support, with membership tests for the three lattice maps and the
//! transfer of Krull-Schmidt decompositions.
//!
//! `xi(S)` holds the groups supported in `S`, `zeta(S)` the perfect complexes
//! supported in `S`, and `f(W)` the perfect complexes whose homology lies in
//! `W`. The classification says `f o xi = zeta`.

use crate::complexes::{self, homology_all, PerfectComplex};
use crate::error::{Error, Result};
use crate::spectra::{ks_decompose, SpectrumModel, ThickSupport};
use crate::zmodules::{self, split_by_support, FgAbGroup};

fn integral(support: ThickSupport) -> Result<ThickSupport> {
    match support {
        ThickSupport::UpSet(_) => Err(Error::input(
            "subcategories of abelian groups need a support in the integer spectrum",
        )),
        s => Ok(s),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WideSubcat {
    support: ThickSupport,
}

impl WideSubcat {
    pub fn new(support: ThickSupport) -> Result<Self> {
        Ok(WideSubcat {
            support: integral(support)?,
        })
    }

    pub fn support(&self) -> &ThickSupport {
        &self.support
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThickSubcat {
    support: ThickSupport,
}

impl ThickSubcat {
    pub fn new(support: ThickSupport) -> Result<Self> {
        Ok(ThickSubcat {
            support: integral(support)?,
        })
    }

    pub fn support(&self) -> &ThickSupport {
        &self.support
    }
}

pub fn xi_contains(w: &WideSubcat, m: &FgAbGroup) -> bool {
    zmodules::support(m).within(&w.support)
}

pub fn zeta_contains(t: &ThickSubcat, x: &PerfectComplex) -> bool {
    complexes::support(x).within(&t.support)
}

pub fn f_contains(w: &WideSubcat, x: &PerfectComplex) -> bool {
    homology_all(x).values().all(|h| xi_contains(w, h))
}

/// One wide subcategory per Krull-Schmidt part of the support.
pub fn decompose_wide(w: &WideSubcat) -> Vec<WideSubcat> {
    ks_decompose(&SpectrumModel::ZSpec, &w.support)
        .expect("integer supports decompose in the integer spectrum")
        .parts
        .into_iter()
        .map(|support| WideSubcat { support })
        .collect()
}

/// Splits a member of `w` into pieces, each lying in one indecomposable
/// component of `w`. Components that receive nothing are left out.
pub fn split_object(w: &WideSubcat, m: &FgAbGroup) -> Result<Vec<(WideSubcat, FgAbGroup)>> {
    if !xi_contains(w, m) {
        return Err(Error::domain(format!(
            "{m} does not belong to the wide subcategory supported on {}",
            w.support
        )));
    }
    let components = decompose_wide(w);
    split_by_support(m)
        .into_iter()
        .map(|(supp, piece)| {
            let home = components
                .iter()
                .find(|c| supp.within(&c.support))
                .ok_or_else(|| Error::domain(format!("no component of {} contains {supp}", w.support)))?;
            Ok((home.clone(), piece))
        })
        .collect()
}

/// `zeta(S)` and `f(xi(S))` agree on `x`.
pub fn check_diagram_commutes(s: &ThickSupport, x: &PerfectComplex) -> Result<bool> {
    let w = WideSubcat::new(s.clone())?;
    let t = ThickSubcat::new(s.clone())?;
    Ok(zeta_contains(&t, x) == f_contains(&w, x))
}
