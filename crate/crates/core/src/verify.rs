//! The invariant battery: every structural identity the library relies on,
//! checked case by case with a machine-readable list of violations.

use serde::{Deserialize, Serialize};

use crate::aut::{aut_enumerate, aut_order_formula, AutStructure};
use crate::count::{self, Checker, ParamsKey, SweepBound};
use crate::error::Result;
use crate::gamma::{self, GammaMap, Lattice, Triplet};
use crate::group::{GroupParams, Regime, DEFAULT_MAX_CENTER_ELEMENTS, DEFAULT_MAX_ELEMENTS};
use crate::holomorph::{self as hol, Perm};
use crate::oracle::{self, NormalityMode, OracleConfig, OracleVerdict};

pub type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn check_center(prm: &GroupParams) -> Check {
    let center = prm
        .center(DEFAULT_MAX_CENTER_ELEMENTS)
        .map_err(|e| e.to_string())?;
    let mut predicted = prm.predicted_center();
    predicted.sort();
    ensure(center == predicted, || {
        format!(
            "center has {} elements, expected {}",
            center.len(),
            predicted.len()
        )
    })?;
    let exp = prm
        .center_quotient_exponent(DEFAULT_MAX_CENTER_ELEMENTS)
        .map_err(|e| e.to_string())?;
    ensure(exp == prm.pr(), || {
        format!("exp(G/Z) = {exp}, expected {}", prm.pr())
    })
}

pub fn check_class(prm: &GroupParams) -> Check {
    let class = prm
        .nilpotency_class(DEFAULT_MAX_CENTER_ELEMENTS)
        .map_err(|e| e.to_string())?;
    if prm.r <= prm.m - prm.r {
        ensure(class == 2, || format!("class {class}, expected 2"))?;
    }
    Ok(())
}

pub fn check_aut_order(prm: &GroupParams) -> Check {
    let auts = aut_enumerate(prm, oracle::DEFAULT_AUT_PAIRS).map_err(|e| e.to_string())?;
    let formula = aut_order_formula(prm);
    ensure(auts.len() as u128 == formula, || {
        format!("|Aut| enumerated {} vs formula {formula}", auts.len())
    })
}

pub fn check_preadmissible_vs_antihom(aut: &AutStructure) -> Check {
    for t in Lattice::of(&aut.params).iter() {
        let gm = GammaMap::from_triplet(aut, t);
        ensure(
            gamma::is_preadmissible(aut, t) == gamma::is_antihom(&gm, &aut.params),
            || format!("pre-admissibility disagrees with antihom check at {t}"),
        )?;
    }
    Ok(())
}

pub fn check_general_vs_raw(aut: &AutStructure) -> Check {
    for t in Lattice::of(&aut.params).iter() {
        let gm = GammaMap::from_triplet(aut, t);
        let raw = gamma::is_antihom(&gm, &aut.params) && gamma::is_equivariant(&gm, aut);
        ensure(gamma::is_admissible_general(aut, t) == raw, || {
            format!("general admissibility disagrees with raw checks at {t}")
        })?;
    }
    Ok(())
}

fn faulty_admissible(aut: &AutStructure, t: Triplet) -> bool {
    let pr = aut.params.pr();
    gamma::is_admissible_general(
        aut,
        Triplet {
            b: (t.b + 1) % pr,
            ..t
        },
    )
}

pub fn check_fast_vs_general(aut: &AutStructure, inject_fault: bool) -> Check {
    if aut.params.regime() == Regime::Open {
        return Ok(());
    }
    for t in Lattice::of(&aut.params).iter() {
        let fast = gamma::is_admissible_fast(aut, t).map_err(|e| e.to_string())?;
        let general = if inject_fault {
            faulty_admissible(aut, t)
        } else {
            gamma::is_admissible_general(aut, t)
        };
        ensure(fast == general, || {
            format!("fast and general checkers disagree at {t}")
        })?;
    }
    Ok(())
}

pub fn check_b_lemma(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    let e = prm.ppow((2 * prm.r).saturating_sub(prm.m));
    for t in count::admissible_triplets(aut) {
        ensure(t.b % e == 0 || t.b % e == 1 % e, || {
            format!("b lemma fails at {t}")
        })?;
    }
    Ok(())
}

pub fn check_mu_criterion(aut: &AutStructure) -> Check {
    for t in count::admissible_triplets(aut) {
        ensure(
            gamma::n_gamma_iso_to_g(aut, t) == gamma::mu_criterion(aut, t),
            || format!("s criterion and mu criterion disagree at {t}"),
        )?;
    }
    Ok(())
}

/// Formula and enumeration agree, with both checkers where available.
pub fn check_counts(aut: &AutStructure) -> Check {
    let general = count::enumerate_counts(aut, Checker::General).map_err(|e| e.to_string())?;
    if aut.params.regime() == Regime::Open {
        return Ok(());
    }
    let fast = count::enumerate_counts(aut, Checker::Fast).map_err(|e| e.to_string())?;
    ensure(fast.n_admissible_iso == general.n_admissible_iso, || {
        format!(
            "fast iso count {} vs general {}",
            fast.n_admissible_iso, general.n_admissible_iso
        )
    })?;
    ensure(general.agreement == Some(true), || {
        format!(
            "formula {:?} vs enumerated {}",
            general.formula_value, general.n_admissible_iso
        )
    })?;
    ensure(
        general.admissible_formula == Some(general.n_admissible),
        || {
            format!(
                "admissible formula {:?} vs enumerated {}",
                general.admissible_formula, general.n_admissible
            )
        },
    )
}

pub fn check_n_order_lemma(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    for t in count::admissible_triplets(aut) {
        let (px, py) = gamma::phi_generators(aut, t);
        ensure(
            px.order(prm) == prm.pm() as u128 && py.order(prm) == prm.pn() as u128,
            || format!("orders of Phi_x, Phi_y wrong at {t}"),
        )?;
        let conj = py.mul(&px, prm).mul(&py.inverse(prm), prm);
        ensure(
            conj == px.pow(prm, gamma::twist_unit(aut, t) as u128),
            || format!("conjugation relation fails at {t}"),
        )?;
        let inv = gamma::iso_invariant(aut, t).map_err(|e| e.to_string())?;
        let pyj = py.pow(prm, inv.j as u128);
        let conj = pyj.mul(&px, prm).mul(&pyj.inverse(prm), prm);
        let e = 1 + prm.ppow(prm.m - prm.r + inv.s);
        ensure(conj == px.pow(prm, e as u128), || {
            format!("normalised presentation fails at {t}")
        })?;
    }
    Ok(())
}

fn n_gamma_perms(aut: &AutStructure, t: Triplet) -> Result<Vec<Perm>> {
    let prm = &aut.params;
    let mut v: Vec<Perm> = gamma::n_gamma_elements(aut, t, DEFAULT_MAX_ELEMENTS)?
        .iter()
        .map(|h| h.to_perm(prm))
        .collect();
    v.sort();
    Ok(v)
}

/// `Gamma_{0,0,0}` gives `rho(G)` and `Gamma_{a_lambda,1,0}` gives `lambda(G)`.
pub fn check_remark2(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    let mut rhos: Vec<Perm> = prm.elements().map(|s| hol::rho(prm, s)).collect();
    rhos.sort();
    let mut lambdas: Vec<Perm> = prm.elements().map(|s| hol::lambda(prm, s)).collect();
    lambdas.sort();
    let n0 = n_gamma_perms(aut, Triplet::ZERO).map_err(|e| e.to_string())?;
    ensure(n0 == rhos, || "N_Gamma for (0,0,0) is not rho(G)".into())?;
    let al = gamma::a_lambda(aut).map_err(|e| e.to_string())?;
    let t = Triplet::new(al, 1 % prm.pr(), 0);
    let nl = n_gamma_perms(aut, t).map_err(|e| e.to_string())?;
    ensure(nl == lambdas, || {
        format!("N_Gamma for {t} is not lambda(G)")
    })
}

fn iso_triplets(aut: &AutStructure) -> Vec<Triplet> {
    count::admissible_triplets(aut)
        .into_iter()
        .filter(|t| gamma::n_gamma_iso_to_g(aut, *t))
        .collect()
}

/// `pi N pi^-1`: the closed formula, the definition and the conjugation
/// identity for every triplet with `N_Gamma = G`.
pub fn check_pi_n(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    let lambdas: Vec<Perm> = prm.elements().map(|s| hol::lambda(prm, s)).collect();
    for t in iso_triplets(aut) {
        let j = gamma::iso_invariant(aut, t).map_err(|e| e.to_string())?.j as i128;
        let pi = hol::pi_map(aut, t).map_err(|e| e.to_string())?;
        ensure(pi == hol::pi_map_from_definition(aut, t, j), || {
            format!("pi formula differs from its definition at {t}")
        })?;
        let pi_inv = pi.inverse();
        let mut conj: Vec<Perm> = lambdas
            .iter()
            .map(|l| pi.compose(l).compose(&pi_inv))
            .collect();
        conj.sort();
        ensure(
            conj == n_gamma_perms(aut, t).map_err(|e| e.to_string())?,
            || format!("pi lambda(G) pi^-1 != N_Gamma at {t}"),
        )?;
    }
    Ok(())
}

/// The `pi` maps are pairwise inequivalent modulo `Hol(G)`, their number is
/// `|T(G)|`, and changing `j` by `p^r` changes `pi` only by an automorphism.
pub fn check_pi_classes(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    let ts = iso_triplets(aut);
    let pis: Vec<Perm> = ts
        .iter()
        .map(|t| hol::pi_map(aut, *t))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    let distinct = hol::distinct_classes(prm, &pis).len();
    ensure(distinct == pis.len(), || {
        format!("{} pi maps fall into {distinct} classes", pis.len())
    })?;
    for (t, pi) in ts.iter().zip(&pis) {
        let j = gamma::iso_invariant(aut, *t).map_err(|e| e.to_string())?.j as i128;
        let other = hol::pi_map_with_j(aut, *t, j + prm.pr() as i128);
        ensure(hol::aut_congruent_right(prm, pi, &other), || {
            format!("pi depends on the choice of j at {t}")
        })?;
    }
    Ok(())
}

/// Power maps: class count when `r <= m - r`, exhausting `T(G)` when
/// `n <= m - r`, and `pi_{a,b,0} = phi pi_{-j}`.
pub fn check_power_maps(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    if prm.r > prm.m - prm.r {
        return Ok(());
    }
    let pr = prm.pr() as i128;
    let powers: Vec<Perm> = (1..pr.max(2) * prm.p as i128)
        .filter(|l| l % prm.p as i128 != 0)
        .map(|l| hol::power_map(prm, l))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    let classes = hol::distinct_classes(prm, &powers);
    let expected = ((prm.p - 1) * prm.ppow(prm.r - 1)) as usize;
    ensure(classes.len() == expected, || {
        format!("{} power map classes, expected {expected}", classes.len())
    })?;
    let ts = iso_triplets(aut);
    if prm.regime() == Regime::NLeMMinusR {
        for t in &ts {
            let pi = hol::pi_map(aut, *t).map_err(|e| e.to_string())?;
            ensure(
                classes
                    .iter()
                    .any(|&c| hol::coset_equal(prm, &powers[c], &pi)),
                || format!("pi{t} is not a power map class"),
            )?;
        }
    }
    let zero_d: Vec<&Triplet> = ts.iter().filter(|t| t.d == 0).collect();
    ensure(zero_d.len() == expected, || {
        format!(
            "{} iso triplets with d = 0, expected {expected}",
            zero_d.len()
        )
    })?;
    for t in zero_d {
        let j = gamma::iso_invariant(aut, *t).map_err(|e| e.to_string())?.j as i128;
        let pi = hol::pi_map(aut, *t).map_err(|e| e.to_string())?;
        let pw = hol::power_map(prm, -j).map_err(|e| e.to_string())?;
        ensure(hol::aut_congruent_left(prm, &pi, &pw), || {
            format!("pi{t} is not congruent to the power map of {}", -j)
        })?;
    }
    Ok(())
}

/// `iota pi_{a,0,d} = pi'_{v~^d} phi` when `m <= n` and `v~^d = 1 mod p^m`.
pub fn check_last_prop(aut: &AutStructure) -> Check {
    let prm = &aut.params;
    if prm.m > prm.n {
        return Ok(());
    }
    let pm = prm.pm();
    let qualifying: Vec<Triplet> = count::admissible_triplets(aut)
        .into_iter()
        .filter(|t| t.b == 0)
        .filter(|t| crate::arith::pow_mod_u64(aut.tilde.v_t % pm, t.d as u128, pm) == 1 % pm)
        .collect();
    let expected = prm.ppow(prm.r.min(prm.n - prm.m));
    ensure(qualifying.len() as u64 == expected, || {
        format!(
            "{} qualifying (a,0,d), expected {expected}",
            qualifying.len()
        )
    })?;
    let iota = hol::inversion(prm);
    for t in qualifying {
        ensure(gamma::n_gamma_iso_to_g(aut, t), || {
            format!("{t} fails the iso criterion")
        })?;
        let lhs = iota.compose(&hol::pi_map(aut, t).map_err(|e| e.to_string())?);
        let vd = crate::arith::pow_mod_u64(aut.tilde.v_t, t.d as u128, prm.exponent_bound());
        let rhs = hol::pi_prime_map(prm, vd as i128).map_err(|e| e.to_string())?;
        ensure(hol::aut_congruent_right(prm, &lhs, &rhs), || {
            format!("iota pi{t} is not congruent to pi'")
        })?;
    }
    Ok(())
}

/// Oracle scan agrees with triplet enumeration, with no containment
/// violations and every `N_Gamma = G` certified.
pub fn check_oracle(
    aut: &AutStructure,
    cfg: &OracleConfig,
) -> std::result::Result<OracleVerdict, String> {
    let v = oracle::aut_pair_scan(aut, cfg).map_err(|e| e.to_string())?;
    let rep = count::enumerate_counts(aut, Checker::General).map_err(|e| e.to_string())?;
    ensure(v.containment_violations == 0, || {
        format!("{} containment violations", v.containment_violations)
    })?;
    ensure(v.n_equivariant_antihoms == rep.n_admissible, || {
        format!(
            "oracle finds {} equivariant antihoms, enumeration {}",
            v.n_equivariant_antihoms, rep.n_admissible
        )
    })?;
    ensure(v.n_iso == rep.n_admissible_iso, || {
        format!(
            "oracle iso count {} vs enumeration {}",
            v.n_iso, rep.n_admissible_iso
        )
    })?;
    ensure(v.iso_triplets() == iso_triplets(aut), || {
        "oracle and enumeration select different triplets".into()
    })?;
    Ok(v)
}

pub fn check_normality(aut: &AutStructure) -> Check {
    for t in count::admissible_triplets(aut) {
        let ok = oracle::normality_check(aut, t, NormalityMode::Generators, DEFAULT_MAX_ELEMENTS)
            .map_err(|e| e.to_string())?;
        ensure(ok, || format!("N_Gamma for {t} is not normal in Hol(G)"))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub params: Vec<ParamsKey>,
    pub oracle: bool,
    #[serde(skip)]
    pub oracle_cfg: OracleConfig,
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            params: default_suite(),
            oracle: true,
            oracle_cfg: OracleConfig::default(),
            inject_fault: false,
        }
    }
}

/// `p = 3` and `m + n <= 5`.
pub fn default_suite() -> Vec<ParamsKey> {
    count::sweep_params(&[SweepBound {
        p: 3,
        max_m_plus_n: 5,
    }])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub params: ParamsKey,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub params: ParamsKey,
    pub regime: Regime,
    pub n_admissible: u64,
    pub n_admissible_iso: u64,
    pub formula: Option<u64>,
    pub oracle_iso: Option<u64>,
    pub checks_run: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseSummary>,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

type NamedCheck<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

/// Runs every check on every parameter set.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut cases = Vec::new();
    let mut violations = Vec::new();
    for &key in &cfg.params {
        let aut = match AutStructure::from_quadruple(key.p, key.m, key.n, key.r) {
            Ok(a) => a,
            Err(e) => {
                violations.push(Violation {
                    params: key,
                    check: "params".into(),
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let aut = &aut;
        let prm = &aut.params;
        let fault = cfg.inject_fault;
        let checks: Vec<NamedCheck> = vec![
            ("center", Box::new(move || check_center(prm))),
            ("class", Box::new(move || check_class(prm))),
            ("aut_order", Box::new(move || check_aut_order(prm))),
            (
                "preadmissible",
                Box::new(move || check_preadmissible_vs_antihom(aut)),
            ),
            (
                "general_vs_raw",
                Box::new(move || check_general_vs_raw(aut)),
            ),
            (
                "fast_vs_general",
                Box::new(move || check_fast_vs_general(aut, fault)),
            ),
            ("b_lemma", Box::new(move || check_b_lemma(aut))),
            ("mu_criterion", Box::new(move || check_mu_criterion(aut))),
            ("counts", Box::new(move || check_counts(aut))),
            ("n_order_lemma", Box::new(move || check_n_order_lemma(aut))),
            ("remark2", Box::new(move || check_remark2(aut))),
            ("pi_n", Box::new(move || check_pi_n(aut))),
            ("pi_classes", Box::new(move || check_pi_classes(aut))),
            ("power_maps", Box::new(move || check_power_maps(aut))),
            ("last_prop", Box::new(move || check_last_prop(aut))),
            ("normality", Box::new(move || check_normality(aut))),
        ];
        let checks_run = checks.len() + usize::from(cfg.oracle);
        for (name, f) in &checks {
            if let Err(detail) = f() {
                violations.push(Violation {
                    params: key,
                    check: (*name).into(),
                    detail,
                });
            }
        }
        let mut oracle_iso = None;
        if cfg.oracle {
            match check_oracle(aut, &cfg.oracle_cfg) {
                Ok(v) => oracle_iso = Some(v.n_iso),
                Err(detail) => violations.push(Violation {
                    params: key,
                    check: "oracle".into(),
                    detail,
                }),
            }
        }
        let rep = count::enumerate_counts(aut, Checker::General);
        let (n_adm, n_iso) = rep
            .map(|r| (r.n_admissible, r.n_admissible_iso))
            .unwrap_or((0, 0));
        cases.push(CaseSummary {
            params: key,
            regime: prm.regime(),
            n_admissible: n_adm,
            n_admissible_iso: n_iso,
            formula: count::closed_formula(prm),
            oracle_iso,
            checks_run,
        });
    }
    VerifyReport { cases, violations }
}
