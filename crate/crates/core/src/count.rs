//! Counting admissible triplets modulo the lattice, against the closed
//! formulas for `|T(G)|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::AutStructure;
use crate::error::{Error, Result};
use crate::gamma::{self, Lattice, Triplet};
use crate::group::{GroupParams, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Checker {
    Fast,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParamsKey {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub r: u32,
}

impl From<&GroupParams> for ParamsKey {
    fn from(prm: &GroupParams) -> Self {
        ParamsKey {
            p: prm.p,
            m: prm.m,
            n: prm.n,
            r: prm.r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub params: ParamsKey,
    pub regime: Regime,
    pub checker: Checker,
    pub n_preadmissible: u64,
    pub n_admissible: u64,
    pub n_admissible_iso: u64,
    pub formula_value: Option<u64>,
    pub admissible_formula: Option<u64>,
    /// `formula_value == n_admissible_iso`, absent when there is no formula.
    pub agreement: Option<bool>,
}

/// `|T(G)|` in closed form; `None` when `m - r < n < m`.
pub fn closed_formula(prm: &GroupParams) -> Option<u64> {
    let (p, m, n, r) = (prm.p, prm.m, prm.n, prm.r);
    let md = r.min(n - r);
    match prm.regime() {
        Regime::MLeN if m - r < r => Some(2 * prm.ppow(m - r + md)),
        Regime::MLeN => Some((p - 1) * prm.ppow(r - 1 + md)),
        Regime::NLeMMinusR => Some((p - 1) * prm.ppow(r - 1)),
        Regime::Open => None,
    }
}

/// Number of admissible triplets in closed form; `None` in the open regime.
pub fn admissible_count_formula(prm: &GroupParams) -> Option<u64> {
    let (m, n, r) = (prm.m, prm.n, prm.r);
    let md = r.min(n - r);
    match prm.regime() {
        Regime::MLeN if m - r < r => Some(2 * prm.ppow(m - r + md)),
        Regime::MLeN => Some(prm.ppow(r + md)),
        Regime::NLeMMinusR => Some(prm.pr()),
        Regime::Open => None,
    }
}

fn admissible_with(aut: &AutStructure, checker: Checker, t: Triplet) -> Result<bool> {
    match checker {
        Checker::Fast => gamma::is_admissible_fast(aut, t),
        Checker::General => Ok(gamma::is_admissible_general(aut, t)),
    }
}

/// Tallies over the whole lattice.
pub fn enumerate_counts(aut: &AutStructure, checker: Checker) -> Result<CountReport> {
    let prm = &aut.params;
    if checker == Checker::Fast && prm.regime() == Regime::Open {
        return Err(Error::RegimeUnsupported(Regime::Open));
    }
    let (mut pre, mut adm, mut iso) = (0u64, 0u64, 0u64);
    for t in Lattice::of(prm).iter() {
        if !gamma::is_preadmissible(aut, t) {
            continue;
        }
        pre += 1;
        if !admissible_with(aut, checker, t)? {
            continue;
        }
        adm += 1;
        if gamma::n_gamma_iso_to_g(aut, t) {
            iso += 1;
        }
    }
    let formula_value = closed_formula(prm);
    Ok(CountReport {
        params: prm.into(),
        regime: prm.regime(),
        checker,
        n_preadmissible: pre,
        n_admissible: adm,
        n_admissible_iso: iso,
        formula_value,
        admissible_formula: admissible_count_formula(prm),
        agreement: formula_value.map(|f| f == iso),
    })
}

/// Admissible triplets, in lattice order.
pub fn admissible_triplets(aut: &AutStructure) -> Vec<Triplet> {
    Lattice::of(&aut.params)
        .iter()
        .filter(|t| gamma::is_preadmissible(aut, *t) && gamma::is_admissible(aut, *t))
        .collect()
}

/// For each `a mod p^r`, the number of admissible triplets `(a, b, d)` with
/// `N_Gamma = G`.
pub fn iso_tally_by_a(aut: &AutStructure) -> Vec<u64> {
    let mut tally = vec![0u64; aut.params.pr() as usize];
    for t in admissible_triplets(aut) {
        if gamma::n_gamma_iso_to_g(aut, t) {
            tally[t.a as usize] += 1;
        }
    }
    tally
}

/// All `(m, n, r)` for prime `p` with `p^(m+n) <= max_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBound {
    pub p: u64,
    pub max_m_plus_n: u32,
}

pub fn sweep_params(bounds: &[SweepBound]) -> Vec<ParamsKey> {
    let mut out = Vec::new();
    for b in bounds {
        for m in 2..b.max_m_plus_n {
            for n in 1..=b.max_m_plus_n - m {
                for r in 1..=n.min(m - 1) {
                    out.push(ParamsKey { p: b.p, m, n, r });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepItem {
    pub params: ParamsKey,
    pub report: std::result::Result<CountReport, String>,
}

/// One report per parameter set, fast checker where it applies.
pub fn sweep(bounds: &[SweepBound]) -> Vec<SweepItem> {
    sweep_keys(&sweep_params(bounds))
}

pub fn sweep_keys(keys: &[ParamsKey]) -> Vec<SweepItem> {
    let mut items: Vec<SweepItem> = keys
        .par_iter()
        .map(|&k| SweepItem {
            params: k,
            report: count_one(k).map_err(|e| e.to_string()),
        })
        .collect();
    items.sort_by_key(|it| it.params);
    items
}

fn count_one(k: ParamsKey) -> Result<CountReport> {
    let aut = AutStructure::from_quadruple(k.p, k.m, k.n, k.r)?;
    let checker = match aut.params.regime() {
        Regime::Open => Checker::General,
        _ => Checker::Fast,
    };
    enumerate_counts(&aut, checker)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests_support::small_params;

    fn structure(p: u64, m: u32, n: u32, r: u32) -> AutStructure {
        AutStructure::from_quadruple(p, m, n, r).unwrap()
    }

    #[test]
    fn formula_examples() {
        let f = |p, m, n, r| closed_formula(&GroupParams::new(p, m, n, r).unwrap());
        assert_eq!(f(3, 3, 3, 2), Some(18));
        assert_eq!(f(3, 2, 1, 1), Some(2));
        assert_eq!(f(3, 2, 2, 1), Some(6));
        assert_eq!(f(3, 3, 2, 2), None);
        let g = |p, m, n, r| admissible_count_formula(&GroupParams::new(p, m, n, r).unwrap());
        assert_eq!(g(3, 3, 3, 2), Some(18));
        assert_eq!(g(3, 2, 1, 1), Some(3));
        assert_eq!(g(3, 2, 2, 1), Some(9));
        assert_eq!(g(3, 3, 2, 2), None);
    }

    #[test]
    fn enumeration_examples() {
        let rep = enumerate_counts(&structure(3, 3, 3, 2), Checker::General).unwrap();
        assert_eq!(rep.n_admissible_iso, 18);
        assert_eq!(rep.agreement, Some(true));
        let rep = enumerate_counts(&structure(3, 2, 1, 1), Checker::Fast).unwrap();
        assert_eq!((rep.n_admissible, rep.n_admissible_iso), (3, 2));
        let rep = enumerate_counts(&structure(3, 3, 2, 2), Checker::General).unwrap();
        assert_eq!(rep.formula_value, None);
        assert_eq!(rep.agreement, None);
        assert!(enumerate_counts(&structure(3, 3, 2, 2), Checker::Fast).is_err());
    }

    #[test]
    fn report_invariants_and_formulas() {
        for prm in small_params() {
            let aut = AutStructure::new(prm).unwrap();
            let lat = Lattice::of(&aut.params).size();
            let gen = enumerate_counts(&aut, Checker::General).unwrap();
            assert!(gen.n_admissible_iso <= gen.n_admissible);
            assert!(gen.n_admissible <= gen.n_preadmissible && gen.n_preadmissible <= lat);
            if gen.regime != Regime::Open {
                let fast = enumerate_counts(&aut, Checker::Fast).unwrap();
                assert_eq!(fast.n_admissible_iso, gen.n_admissible_iso);
                assert_eq!(gen.agreement, Some(true), "{}", aut.params);
                assert_eq!(Some(gen.n_admissible), gen.admissible_formula);
            }
        }
    }

    #[test]
    fn case_three_tally() {
        for q in [(3, 2, 2, 1), (3, 4, 4, 2), (5, 2, 2, 1), (3, 3, 3, 1)] {
            let aut = structure(q.0, q.1, q.2, q.3);
            let prm = &aut.params;
            let expected = (prm.p - 1) * prm.ppow(prm.r - 1);
            assert!(iso_tally_by_a(&aut).iter().all(|&c| c == expected), "{prm}");
        }
    }

    #[test]
    fn sweep_is_sorted_and_agrees() {
        assert!(sweep(&[]).is_empty());
        let items = sweep(&[SweepBound {
            p: 3,
            max_m_plus_n: 5,
        }]);
        assert!(items.windows(2).all(|w| w[0].params < w[1].params));
        assert_eq!(items.len(), small_params().len());
        for it in &items {
            let rep = it.report.as_ref().unwrap();
            if rep.formula_value.is_some() {
                assert_eq!(rep.agreement, Some(true));
            } else {
                assert_eq!(rep.regime, Regime::Open);
            }
        }
        let again = sweep(&[SweepBound {
            p: 3,
            max_m_plus_n: 5,
        }]);
        assert_eq!(
            serde_json::to_string(&items).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn collapsed_d_lattice() {
        let aut = structure(3, 3, 2, 2);
        assert_eq!(Lattice::of(&aut.params).d_mod, 1);
        assert!(enumerate_counts(&aut, Checker::General).is_ok());
    }
}
