//! Brute-force checks that avoid the triplet parametrisation: scanning pairs
//! of automorphisms for equivariant antihomomorphisms, and testing normality
//! of `N_Gamma` by conjugating permutations.

use std::collections::HashMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::vp;
use crate::aut::{aut_enumerate, AutStructure, Automorphism};
use crate::count::ParamsKey;
use crate::error::{Error, Result};
use crate::gamma::{self, GammaMap, Triplet};
use crate::group::GroupParams;
use crate::holomorph::{aut_perm, rho, HolElement, Perm};

/// Default cap on `|G|^2` candidate image pairs when enumerating `Aut(G)`.
pub const DEFAULT_AUT_PAIRS: u128 = 100_000_000;
/// Default cap on filtered `(psi_x, psi_y)` pairs.
pub const DEFAULT_PAIR_OPS: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_aut_pairs: u128,
    pub max_pair_ops: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_aut_pairs: DEFAULT_AUT_PAIRS,
            max_pair_ops: DEFAULT_PAIR_OPS,
        }
    }
}

/// One equivariant antihomomorphism found by the scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleHit {
    pub psi_x: Automorphism,
    pub psi_y: Automorphism,
    /// Exponent `e` with `Phi_y Phi_x Phi_y^-1 = Phi_x^e`.
    pub twist: u64,
    pub iso_to_g: bool,
    /// The matching triplet, if the containments hold.
    pub triplet: Option<Triplet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub params: ParamsKey,
    pub n_automorphisms: u64,
    pub n_x_candidates: u64,
    pub n_y_candidates: u64,
    pub n_equivariant_antihoms: u64,
    #[serde(rename = "n_with_N_iso_G")]
    pub n_iso: u64,
    pub containment_violations: u64,
    pub hits: Vec<OracleHit>,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl OracleVerdict {
    /// Triplets of the hits with `N_Gamma = G`, sorted.
    pub fn iso_triplets(&self) -> Vec<Triplet> {
        let mut v: Vec<Triplet> = self
            .hits
            .iter()
            .filter(|h| h.iso_to_g)
            .filter_map(|h| h.triplet)
            .collect();
        v.sort();
        v
    }
}

struct XData {
    psi: Automorphism,
    pow_k: Automorphism,
    pow_e: Automorphism,
    gamma_conj: Automorphism,
}

struct YData {
    psi: Automorphism,
    pow_q: Automorphism,
    beta_conj: Automorphism,
}

/// Scan `Aut(G)^2` for equivariant antihomomorphisms and classify each
/// `N_Gamma`.
///
/// Candidates for `Gamma(x)` are filtered by the relations involving `x`
/// alone (order, and equivariance under `alpha, beta, delta`), candidates for
/// `Gamma(y)` likewise (`alpha, gamma, delta`); surviving pairs are checked
/// against the remaining relations and then confirmed by the generic checks.
pub fn aut_pair_scan(aut: &AutStructure, cfg: &OracleConfig) -> Result<OracleVerdict> {
    let start = Instant::now();
    let prm = &aut.params;
    let auts = aut_enumerate(prm, cfg.max_aut_pairs)?;
    let [alpha, beta, gamma, delta] = aut.gens.as_array();
    let [alpha_i, beta_i, gamma_i, delta_i] = aut.gen_inverses;
    let conj = |phi: &Automorphism, psi: &Automorphism, phi_inv: &Automorphism| {
        phi.compose(psi, prm).compose(phi_inv, prm)
    };
    let id = Automorphism::identity();
    let u = aut.gens.u as i128;
    let e_beta = prm.ppow(prm.m.saturating_sub(prm.n)) as i128;
    let v_delta = 1 + prm.pr() as i128;

    let xs: Vec<XData> = auts
        .par_iter()
        .filter(|psi| psi.pow(prm, prm.pm() as i128) == id)
        .filter(|psi| psi.pow(prm, u) == conj(&alpha, psi, &alpha_i))
        .filter(|psi| **psi == conj(&beta, psi, &beta_i))
        .filter(|psi| **psi == conj(&delta, psi, &delta_i))
        .map(|psi| XData {
            psi: *psi,
            pow_k: psi.pow(prm, prm.k() as i128),
            pow_e: psi.pow(prm, e_beta),
            gamma_conj: conj(&gamma, psi, &gamma_i),
        })
        .collect();
    let ys: Vec<YData> = auts
        .par_iter()
        .filter(|psi| psi.pow(prm, prm.pn() as i128) == id)
        .filter(|psi| **psi == conj(&alpha, psi, &alpha_i))
        .filter(|psi| **psi == conj(&gamma, psi, &gamma_i))
        .filter(|psi| psi.pow(prm, v_delta) == conj(&delta, psi, &delta_i))
        .map(|psi| YData {
            psi: *psi,
            pow_q: psi.pow(prm, prm.q() as i128),
            beta_conj: conj(&beta, psi, &beta_i),
        })
        .collect();

    let needed = xs.len() as u128 * ys.len() as u128;
    if needed > cfg.max_pair_ops {
        return Err(Error::BudgetExceeded {
            what: "filtered automorphism pairs",
            needed,
            budget: cfg.max_pair_ops,
        });
    }

    let pairs: Vec<(Automorphism, Automorphism)> = xs
        .par_iter()
        .flat_map_iter(|x| {
            ys.iter().filter_map(move |y| {
                // antihom relation, then equivariance under beta on y and gamma on x
                let ok = x.psi.compose(&y.psi, prm) == y.psi.compose(&x.pow_k, prm)
                    && y.psi.compose(&x.pow_e, prm) == y.beta_conj
                    && y.pow_q.compose(&x.psi, prm) == x.gamma_conj;
                ok.then_some((x.psi, y.psi))
            })
        })
        .collect();

    let lookup = ContainmentLookup::new(aut);
    let mut hits: Vec<OracleHit> = pairs
        .par_iter()
        .filter(|(px, py)| {
            let gm = GammaMap::new(*px, *py);
            gamma::is_antihom(&gm, prm) && gamma::is_equivariant(&gm, aut)
        })
        .map(|&(psi_x, psi_y)| {
            let (twist, iso_to_g) = classify(prm, psi_x, psi_y);
            OracleHit {
                psi_x,
                psi_y,
                twist,
                iso_to_g,
                triplet: lookup.find(psi_x, psi_y),
            }
        })
        .collect();
    hits.sort_by_key(|h| (h.triplet, h.psi_x, h.psi_y));

    let mut violations = hits.iter().filter(|h| h.triplet.is_none()).count() as u64;
    let mut seen: Vec<Triplet> = hits.iter().filter_map(|h| h.triplet).collect();
    let before = seen.len();
    seen.dedup();
    violations += (before - seen.len()) as u64;

    Ok(OracleVerdict {
        params: prm.into(),
        n_automorphisms: auts.len() as u64,
        n_x_candidates: xs.len() as u64,
        n_y_candidates: ys.len() as u64,
        n_equivariant_antihoms: hits.len() as u64,
        n_iso: hits.iter().filter(|h| h.iso_to_g).count() as u64,
        containment_violations: violations,
        hits,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Reverse lookup of `psi_x` in `<beta~>` and `psi_y` in `<alpha~><delta~>`.
struct ContainmentLookup {
    x_map: HashMap<Automorphism, u64>,
    y_map: HashMap<Automorphism, (u64, u64)>,
}

impl ContainmentLookup {
    fn new(aut: &AutStructure) -> Self {
        let prm = &aut.params;
        let lat = gamma::Lattice::of(prm);
        let tl = &aut.tilde;
        let mut x_map = HashMap::new();
        let mut cur = Automorphism::identity();
        for b in 0..lat.b_mod {
            x_map.insert(cur, b);
            cur = cur.compose(&tl.beta_t, prm);
        }
        let mut y_map = HashMap::new();
        let mut a_pow = Automorphism::identity();
        for a in 0..lat.a_mod {
            let mut cur = a_pow;
            for d in 0..lat.d_mod {
                y_map.insert(cur, (a, d));
                cur = cur.compose(&tl.delta_t, prm);
            }
            a_pow = a_pow.compose(&tl.alpha_t, prm);
        }
        ContainmentLookup { x_map, y_map }
    }

    fn find(&self, psi_x: Automorphism, psi_y: Automorphism) -> Option<Triplet> {
        let b = *self.x_map.get(&psi_x)?;
        let (a, d) = *self.y_map.get(&psi_y)?;
        Some(Triplet { a, b, d })
    }
}

/// Conjugation exponent of `N_Gamma` and whether `N_Gamma = G`, the latter
/// certified by an explicit isomorphism when it holds.
fn classify(prm: &GroupParams, psi_x: Automorphism, psi_y: Automorphism) -> (u64, bool) {
    let px = HolElement {
        sigma: prm.x(),
        phi: psi_x,
    };
    let py = HolElement {
        sigma: prm.y(),
        phi: psi_y,
    };
    let target = py.mul(&px, prm).mul(&py.inverse(prm), prm);
    let mut cur = HolElement::identity();
    let mut twist = None;
    for e in 0..prm.pm() {
        if cur == target {
            twist = Some(e);
            break;
        }
        cur = cur.mul(&px, prm);
    }
    let Some(twist) = twist else {
        return (0, false);
    };
    let iso = twist != 1 % prm.pm()
        && vp(twist as i128 - 1, prm.p).ok() == Some(prm.m - prm.r)
        && presentation_certificate(prm, &px, &py, twist);
    (twist, iso)
}

/// Finds `j` with `twist^j = 1 + p^(m-r)` and checks that `x -> Phi_x`,
/// `y -> Phi_y^j` respects the relations of `G` and is injective, evaluated
/// at the identity.
fn presentation_certificate(
    prm: &GroupParams,
    px: &HolElement,
    py: &HolElement,
    twist: u64,
) -> bool {
    let pm = prm.pm();
    let k = prm.k();
    let mut w = 1u64;
    let mut j = None;
    for cand in 0..pm {
        if w == k && cand % prm.p != 0 {
            j = Some(cand);
            break;
        }
        w = crate::arith::mul_mod(w, twist, pm);
    }
    let Some(j) = j else {
        return false;
    };
    let pyj = py.pow(prm, j as u128);
    if !px.pow(prm, pm as u128).is_identity() || !pyj.pow(prm, prm.pn() as u128).is_identity() {
        return false;
    }
    let lhs = pyj.mul(px, prm);
    let rhs = px.pow(prm, k as u128).mul(&pyj, prm);
    if lhs != rhs {
        return false;
    }
    let mut seen = vec![false; prm.order() as usize];
    let mut xi = HolElement::identity();
    for _ in 0..pm {
        let mut cur = xi;
        for _ in 0..prm.pn() {
            let idx = prm.index_of(cur.apply(prm, prm.identity()));
            if std::mem::replace(&mut seen[idx], true) {
                return false;
            }
            cur = cur.mul(&pyj, prm);
        }
        xi = xi.mul(px, prm);
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalityMode {
    Generators,
    Full,
}

/// Whether `N_Gamma` is a regular subgroup normalised by `Hol(G)`, checked on
/// permutations.
///
/// `N_Gamma` is first confirmed to be the subgroup generated by
/// `Phi_x, Phi_y`; normality is then tested on those two generators against
/// either a generating set of `Hol(G)` or every element of it.
pub fn normality_check(
    aut: &AutStructure,
    t: Triplet,
    mode: NormalityMode,
    budget: u64,
) -> Result<bool> {
    let prm = &aut.params;
    prm.check_enumerable(budget)?;
    let gm = GammaMap::from_triplet(aut, t);
    // the member of N_Gamma sending 1 to tau is rho(tau^-1) Gamma(tau^-1)
    let members: Vec<Perm> = prm
        .elements()
        .map(|tau| gm.hol_element(prm, prm.inverse(tau)).to_perm(prm))
        .collect();
    let contains = |f: &Perm| {
        let idx = f.0[prm.index_of(prm.identity())] as usize;
        members[idx] == *f
    };
    let (hx, hy) = gamma::phi_generators(aut, t);
    let gens = [hx.to_perm(prm), hy.to_perm(prm)];
    if !members
        .iter()
        .all(|f| gens.iter().all(|g| contains(&g.compose(f))))
    {
        return Ok(false);
    }
    if !orbit_is_everything(prm, &gens) {
        return Ok(false);
    }
    let conjugators: Vec<Perm> = match mode {
        NormalityMode::Generators => crate::holomorph::hol_generators(aut),
        NormalityMode::Full => {
            let needed = prm.order() as u128 * crate::aut::aut_order_formula(prm);
            if needed > budget as u128 * budget as u128 {
                return Err(Error::BudgetExceeded {
                    what: "holomorph elements",
                    needed,
                    budget: budget as u128 * budget as u128,
                });
            }
            let auts = aut_enumerate(prm, (budget as u128).pow(2))?;
            let mut all = Vec::with_capacity(auts.len() * prm.order() as usize);
            for s in prm.elements() {
                let r = rho(prm, s);
                for phi in &auts {
                    all.push(r.compose(&aut_perm(prm, phi)));
                }
            }
            all
        }
    };
    Ok(conjugators.iter().all(|h| {
        let h_inv = h.inverse();
        gens.iter().all(|g| contains(&h.compose(g).compose(&h_inv)))
    }))
}

fn orbit_is_everything(prm: &GroupParams, gens: &[Perm]) -> bool {
    let size = prm.order() as usize;
    let mut seen = vec![false; size];
    let start = prm.index_of(prm.identity());
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g.0[i] as usize;
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == size
}

/// Random test of `Gamma(phi(sigma)) = phi Gamma(sigma) phi^-1` with `phi`
/// drawn from all of `Aut(G)` and `sigma` from `G`.
pub fn equivariance_full_check(
    aut: &AutStructure,
    gm: &GammaMap,
    auts: &[Automorphism],
    samples: usize,
    seed: u64,
) -> bool {
    let prm = &aut.params;
    let mut rng = StdRng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let phi = auts[rng.gen_range(0..auts.len())];
        let sigma = prm.element(
            rng.gen_range(0..prm.pm()) as i128,
            rng.gen_range(0..prm.pn()) as i128,
        );
        let lhs = gm.eval(prm, phi.apply(prm, sigma));
        let rhs = phi
            .compose(&gm.eval(prm, sigma), prm)
            .compose(&phi.inverse(prm), prm);
        lhs == rhs
    })
}
