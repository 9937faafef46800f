//! The chain of lower bounds for Kneser hypergraphs
//!
//! `cd_p(F) ≤ |V(F)| − alt_p(F) ≤ ind(B_0(KG^r(F), Z_p)) + 1
//!  ≤ Xind(Hom(K^r_p, KG^r(F))) + p ≤ (r − 1)·χ(KG^r(F))`,
//!
//! each entry an interval of certified endpoints, with a check that no two
//! certified endpoints contradict the order.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::altdefect::{alt_min, colorability_defect, AltMode};
use crate::complex::{box_complex, hom_poset};
use crate::error::{Error, Result};
use crate::hypergraph::{kneser, ChromaticNumber, Hypergraph, SearchBudget};
use crate::index::{ind_bounds, xind_exact, IndOptions, IndexHint};
use crate::zp::Modulus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    /// Certified lower endpoint.
    pub lower: Option<i64>,
    /// Certified upper endpoint.
    pub upper: Option<i64>,
    /// What backs the endpoints.
    pub certificate: String,
    pub wall_ms: u128,
}

impl BoundEntry {
    pub fn exact(&self) -> Option<i64> {
        match (self.lower, self.upper) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconsistency {
    pub below: String,
    pub above: String,
    /// Certified lower endpoint of the smaller quantity.
    pub lower: i64,
    /// Certified upper endpoint of the larger quantity.
    pub upper: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsReport {
    pub instance: String,
    pub r: usize,
    pub p: usize,
    /// In the order of the chain, smallest first.
    pub bounds: Vec<BoundEntry>,
    pub inconsistencies: Vec<Inconsistency>,
    pub consistent: bool,
    pub experimental: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundsOptions {
    pub alt: AltMode,
    pub ind: IndOptions,
    pub budget: SearchBudget,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions { alt: AltMode::Exact, ind: IndOptions::default(), budget: SearchBudget::default() }
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_millis()))
}

/// Flags every pair `i < j` whose certified `lower_i` exceeds `upper_j`.
pub fn check_chain(bounds: &[BoundEntry]) -> Vec<Inconsistency> {
    let mut out = Vec::new();
    for (i, a) in bounds.iter().enumerate() {
        for b in &bounds[i + 1..] {
            if let (Some(lo), Some(hi)) = (a.lower, b.upper) {
                if lo > hi {
                    out.push(Inconsistency { below: a.name.clone(), above: b.name.clone(), lower: lo, upper: hi });
                }
            }
        }
    }
    out
}

pub fn bounds_report(instance: &str, f: &Hypergraph, r: usize, p: Modulus, opts: &BoundsOptions) -> Result<BoundsReport> {
    let pv = p.get();
    if pv < r {
        return Err(Error::ModulusBelowUniformity { p: pv, r });
    }
    let n = f.n() as i64;
    let mut bounds = Vec::new();

    let (cd, ms) = timed(|| colorability_defect(f, pv, opts.budget))?;
    bounds.push(BoundEntry {
        name: format!("cd_{pv}(F)"),
        lower: Some(cd.value as i64),
        upper: Some(cd.value as i64),
        certificate: format!("removal set {:?} (1-based) and exhaustive refutation of smaller sets", crate::io::one_based(cd.removed)),
        wall_ms: ms,
    });

    let (alt, ms) = timed(|| alt_min(f, pv, opts.alt))?;
    bounds.push(BoundEntry {
        name: format!("|V(F)| - alt_{pv}(F)"),
        lower: Some(n - alt.value as i64),
        upper: alt.exact.then_some(n - alt.value as i64),
        certificate: format!(
            "ordering {:?}{}",
            alt.ordering.as_slice().iter().map(|v| v + 1).collect::<Vec<_>>(),
            if alt.exact { ", minimal over all orderings" } else { ", sampled orderings only" }
        ),
        wall_ms: ms,
    });

    let kg = kneser(f, r)?;
    let (ind, ms) = timed(|| {
        let b0 = box_complex(&kg, p)?;
        let hint = IndexHint::KneserBox { f: f.clone(), r, ordering: alt.ordering.clone() };
        ind_bounds(&b0, &[hint], &opts.ind)
    })?;
    let kinds: Vec<String> = ind
        .certificates
        .iter()
        .map(|c| serde_json::to_value(c).ok().and_then(|v| v["kind"].as_str().map(str::to_owned)).unwrap_or_default())
        .collect();
    bounds.push(BoundEntry {
        name: format!("ind(B_0(KG^{r}(F), Z_{pv})) + 1"),
        lower: Some(ind.lower as i64 + 1),
        upper: Some(ind.upper as i64 + 1),
        certificate: format!("certificates: {}", kinds.join(", ")),
        wall_ms: ms,
    });

    let omega = kg.clique_number()?;
    if omega >= pv {
        let (x, ms) = timed(|| {
            let hom = hom_poset(&kg, r, p)?;
            xind_exact(&hom.poset, hom.poset.height(), opts.budget)
        })?;
        bounds.push(BoundEntry {
            name: format!("Xind(Hom(K^{r}_{pv}, KG^{r}(F))) + {pv}"),
            lower: Some(x.lower as i64 + pv as i64),
            upper: x.upper.map(|u| u as i64 + pv as i64),
            certificate: if x.is_exact() {
                "order-preserving map to Q_{n,p} and refutation one level lower".into()
            } else {
                "refutation below the lower endpoint".into()
            },
            wall_ms: ms,
        });
    }

    let (chi, ms) = timed(|| Ok(kg.chromatic_number(opts.budget)))?;
    let scale = (r - 1) as i64;
    let (lower, upper) = match chi.value {
        ChromaticNumber::Finite(k) => (chi.lower as i64 * scale, Some(k as i64 * scale)),
        ChromaticNumber::Infinite => (i64::MAX, None),
    };
    bounds.push(BoundEntry {
        name: format!("(r - 1) * chi(KG^{r}(F))"),
        lower: Some(lower),
        upper,
        certificate: if chi.exact { "proper coloring and refutation of one color fewer".into() } else { "proper coloring only".into() },
        wall_ms: ms,
    });

    let inconsistencies = check_chain(&bounds);
    Ok(BoundsReport {
        instance: instance.to_owned(),
        r,
        p: pv,
        consistent: inconsistencies.is_empty(),
        bounds,
        inconsistencies,
        experimental: !p.is_prime(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_chain_is_tight() {
        let f = Hypergraph::complete(5, 2).unwrap();
        let r = bounds_report("K5_2", &f, 2, Modulus::prime(2).unwrap(), &BoundsOptions::default()).unwrap();
        assert!(r.consistent, "{r:?}");
        let values: Vec<Option<i64>> = r.bounds.iter().map(|b| b.exact()).collect();
        assert_eq!(values, vec![Some(3), Some(3), Some(3), Some(3), Some(3)]);
    }

    #[test]
    fn contradictions_are_flagged() {
        let entry = |name: &str, lower, upper| BoundEntry { name: name.into(), lower, upper, certificate: String::new(), wall_ms: 0 };
        let chain = vec![entry("a", Some(4), Some(4)), entry("b", Some(1), None), entry("c", Some(2), Some(3))];
        let bad = check_chain(&chain);
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].below.as_str(), bad[0].above.as_str()), ("a", "c"));
        assert!(check_chain(&chain[1..]).is_empty());
    }
}
