//! Antihomomorphisms `Gamma: G -> Aut(G)` parametrised by triplets `(a, b, d)`.
//!
//! A triplet determines `Gamma(x) = beta~^b` and `Gamma(y) = alpha~^a delta~^d`.
//! Admissible triplets are exactly those whose `Gamma` is a well-defined
//! `Aut(G)`-equivariant antihomomorphism.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, mul_mod, pow_mod_u64, s_sum_u64, vp_capped};
use crate::aut::{AutStructure, Automorphism};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupParams, Regime};
use crate::holomorph::HolElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triplet {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl Triplet {
    pub const ZERO: Triplet = Triplet { a: 0, b: 0, d: 0 };

    pub fn new(a: u64, b: u64, d: u64) -> Self {
        Triplet { a, b, d }
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.d)
    }
}

/// Moduli of the triplet lattice: `a, b mod p^r` and `d mod p^min(r, n-r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub a_mod: u64,
    pub b_mod: u64,
    pub d_mod: u64,
}

impl Lattice {
    pub fn of(params: &GroupParams) -> Self {
        let (r, n) = (params.r, params.n);
        Lattice {
            a_mod: params.pr(),
            b_mod: params.pr(),
            d_mod: params.ppow(r.min(n - r)),
        }
    }

    pub fn size(&self) -> u64 {
        self.a_mod * self.b_mod * self.d_mod
    }

    pub fn normalize(&self, a: i128, b: i128, d: i128) -> Triplet {
        Triplet {
            a: a.rem_euclid(self.a_mod as i128) as u64,
            b: b.rem_euclid(self.b_mod as i128) as u64,
            d: d.rem_euclid(self.d_mod as i128) as u64,
        }
    }

    pub fn contains(&self, t: Triplet) -> bool {
        t.a < self.a_mod && t.b < self.b_mod && t.d < self.d_mod
    }

    /// All triplets, `a` outermost and `d` innermost.
    pub fn iter(&self) -> impl Iterator<Item = Triplet> + '_ {
        (0..self.a_mod).flat_map(move |a| {
            (0..self.b_mod).flat_map(move |b| (0..self.d_mod).map(move |d| Triplet { a, b, d }))
        })
    }
}

/// `Gamma` given by its values on the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaMap {
    pub psi_x: Automorphism,
    pub psi_y: Automorphism,
}

impl GammaMap {
    pub fn new(psi_x: Automorphism, psi_y: Automorphism) -> Self {
        GammaMap { psi_x, psi_y }
    }

    pub fn from_triplet(aut: &AutStructure, t: Triplet) -> Self {
        let prm = &aut.params;
        let tl = &aut.tilde;
        let psi_x = tl.beta_t.pow(prm, t.b as i128);
        let psi_y = tl
            .alpha_t
            .pow(prm, t.a as i128)
            .compose(&tl.delta_t.pow(prm, t.d as i128), prm);
        GammaMap { psi_x, psi_y }
    }

    /// `Gamma(x^i y^j) = psi_y^j psi_x^i`, the antihomomorphic extension along
    /// the normal form.
    pub fn eval(&self, params: &GroupParams, g: GroupElement) -> Automorphism {
        self.psi_y
            .pow(params, g.j as i128)
            .compose(&self.psi_x.pow(params, g.i as i128), params)
    }

    /// The element `rho(g) Gamma(g)` of `N_Gamma`.
    pub fn hol_element(&self, params: &GroupParams, g: GroupElement) -> HolElement {
        HolElement {
            sigma: g,
            phi: self.eval(params, g),
        }
    }
}

/// Whether the generator values respect the defining relations, so that
/// `Gamma` is a well-defined antihomomorphism.
pub fn is_antihom(gm: &GammaMap, params: &GroupParams) -> bool {
    let id = Automorphism::identity();
    if gm.psi_x.pow(params, params.pm() as i128) != id {
        return false;
    }
    if gm.psi_y.pow(params, params.pn() as i128) != id {
        return false;
    }
    // Gamma(y)^-1 Gamma(x) Gamma(y) = Gamma(x)^k
    let lhs = gm.psi_x.compose(&gm.psi_y, params);
    let rhs = gm
        .psi_y
        .compose(&gm.psi_x.pow(params, params.k() as i128), params);
    lhs == rhs
}

/// Names of the eight equivariance relations, in the order checked.
pub const EQUIVARIANCE_RELATIONS: [&str; 8] = [
    "alpha(x)", "alpha(y)", "beta(x)", "beta(y)", "gamma(x)", "gamma(y)", "delta(x)", "delta(y)",
];

/// Relations `Gamma(phi(z)) = phi Gamma(z) phi^-1` for `phi` among the four
/// generators of `Aut(G)` and `z` in `{x, y}`; returns the failing names.
pub fn equivariance_failures(gm: &GammaMap, aut: &AutStructure) -> Vec<&'static str> {
    let prm = &aut.params;
    let gens = aut.gens.as_array();
    let mut failed = Vec::new();
    for (idx, (phi, phi_inv)) in gens.iter().zip(aut.gen_inverses.iter()).enumerate() {
        for (slot, z, psi) in [(0, prm.x(), gm.psi_x), (1, prm.y(), gm.psi_y)] {
            let lhs = gm.eval(prm, phi.apply(prm, z));
            let rhs = phi.compose(&psi, prm).compose(phi_inv, prm);
            if lhs != rhs {
                failed.push(EQUIVARIANCE_RELATIONS[2 * idx + slot]);
            }
        }
    }
    failed
}

pub fn is_equivariant(gm: &GammaMap, aut: &AutStructure) -> bool {
    equivariance_failures(gm, aut).is_empty()
}

fn u_pow(aut: &AutStructure, e: i128) -> u64 {
    let pm = aut.params.pm_modulus();
    if e >= 0 {
        pow_mod_u64(aut.tilde.u_t, e as u128, pm.value())
    } else {
        let inv = inv_mod(aut.tilde.u_t as i128, pm).expect("u~ is a unit");
        pow_mod_u64(inv, (-e) as u128, pm.value())
    }
}

fn v_pow(aut: &AutStructure, e: u64, modulus: u64) -> u64 {
    pow_mod_u64(aut.tilde.v_t % modulus, e as u128, modulus)
}

pub fn is_preadmissible(aut: &AutStructure, t: Triplet) -> bool {
    let prm = &aut.params;
    let pr = prm.pr();
    let lhs = mul_mod(t.b % pr, u_pow(aut, -(t.a as i128)) % pr, pr);
    let rhs = mul_mod(t.b % pr, prm.k() % pr, pr);
    lhs == rhs
}

/// Admissibility from pre-admissibility and the three condition sets, valid
/// in every regime.
pub fn is_admissible_general(aut: &AutStructure, t: Triplet) -> bool {
    if !is_preadmissible(aut, t) {
        return false;
    }
    let prm = &aut.params;
    let (m, n, r) = (prm.m, prm.n, prm.r);
    let pm = prm.pm();
    let pmr = prm.ppow(m - r);
    let u_neg = u_pow(aut, -(t.a as i128));

    // (a)
    let mod_a = prm.ppow(m.min(n));
    let lhs = mul_mod(u_neg % mod_a, v_pow(aut, t.d, mod_a), mod_a);
    let rhs = (1 + mul_mod(t.b, pmr, mod_a)) % mod_a;
    if lhs != rhs {
        return false;
    }

    // (b)
    let mod_b1 = prm.ppow(m - 1);
    let diff = (u_neg + mod_b1 - 1 % mod_b1) % mod_b1;
    if mul_mod(aut.a0 % mod_b1, diff, mod_b1) != 0 {
        return false;
    }
    let mod_b2 = prm.ppow((m - r).min(n));
    if mul_mod(u_neg % mod_b2, v_pow(aut, t.d, mod_b2), mod_b2) != 1 % mod_b2 {
        return false;
    }

    // (c)
    let q = prm.q();
    let k = prm.k();
    let u_aq = pow_mod_u64(aut.tilde.u_t, t.a as u128 * q as u128, pm);
    let bp = mul_mod(t.b, pmr, pm);
    let c1 = mul_mod(
        u_aq,
        (1 + mul_mod(bp, s_sum_u64(k, q as u128, pm), pm)) % pm,
        pm,
    );
    if c1 != 1 % pm {
        return false;
    }
    let kq = pow_mod_u64(k, q as u128, pm);
    let c2_lhs = mul_mod(u_aq, bp, pm);
    let c2_rhs = s_sum_u64(kq, t.b as u128 * pmr as u128, pm);
    if c2_lhs != c2_rhs {
        return false;
    }
    let pn = prm.pn();
    v_pow(aut, t.d * q, pn) == 1 % pn
}

/// Two-congruence criteria for the regimes `m <= n` and `n <= m - r`.
pub fn is_admissible_fast(aut: &AutStructure, t: Triplet) -> Result<bool> {
    let prm = &aut.params;
    let (m, r) = (prm.m, prm.r);
    let pm = prm.pm();
    let pmr = prm.ppow(m - r);
    match prm.regime() {
        Regime::MLeN => {
            let lhs = mul_mod(u_pow(aut, -(t.a as i128)), v_pow(aut, t.d, pm), pm);
            let rhs = (1 + mul_mod(t.b, pmr, pm)) % pm;
            let e = prm.ppow((2 * r).saturating_sub(m));
            let b_res = t.b % e;
            Ok(lhs == rhs && (b_res == 0 || b_res == 1 % e))
        }
        Regime::NLeMMinusR => {
            let lhs = mul_mod(
                u_pow(aut, t.a as i128),
                (1 + mul_mod(t.b, pmr, pm)) % pm,
                pm,
            );
            let pn = prm.pn();
            Ok(lhs == 1 % pm && v_pow(aut, t.d, pn) == 1 % pn)
        }
        Regime::Open => Err(Error::RegimeUnsupported(Regime::Open)),
    }
}

/// Fast criterion where available, otherwise the general one.
pub fn is_admissible(aut: &AutStructure, t: Triplet) -> bool {
    is_admissible_fast(aut, t).unwrap_or_else(|_| is_admissible_general(aut, t))
}

/// `mu_a` with `u~^a = 1 + mu_a p^(m-r) mod p^m`.
pub fn mu_coord(aut: &AutStructure, a: u64) -> u64 {
    let prm = &aut.params;
    let ua = u_pow(aut, a as i128);
    ((ua + prm.pm() - 1) % prm.pm()) / prm.ppow(prm.m - prm.r) % prm.pr()
}

/// The exponent `a_lambda` with `u~^a_lambda = (1 + p^(m-r))^-1 mod p^m`.
pub fn a_lambda(aut: &AutStructure) -> Result<u64> {
    let prm = &aut.params;
    let target = inv_mod(prm.k() as i128, prm.pm_modulus())?;
    let a = arith::discrete_log(target as i128, aut.tilde.u_t as i128, prm.pm_modulus())?
        .ok_or_else(|| Error::NoSolution(format!("a_lambda for {prm}")))?;
    Ok(a % prm.pr())
}

/// `u~^a (1 + (1-b) p^(m-r)) mod p^m`, the exponent by which `Phi_y`
/// conjugates `Phi_x`.
pub fn twist_unit(aut: &AutStructure, t: Triplet) -> u64 {
    let prm = &aut.params;
    let pm = prm.pm_modulus();
    let pmr = prm.ppow(prm.m - prm.r) as i128;
    let factor = pm.reduce(1 + (1 - t.b as i128) * pmr);
    mul_mod(u_pow(aut, t.a as i128), factor, pm.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoInvariant {
    pub s: u32,
    pub j: u64,
}

/// `s` and `j` of an admissible triplet. When the twist is trivial `s = r`
/// and `j = 1`.
pub fn iso_invariant(aut: &AutStructure, t: Triplet) -> Result<IsoInvariant> {
    if !is_admissible(aut, t) {
        return Err(Error::NotAdmissible {
            a: t.a,
            b: t.b,
            d: t.d,
        });
    }
    Ok(iso_invariant_unchecked(aut, t))
}

fn iso_invariant_unchecked(aut: &AutStructure, t: Triplet) -> IsoInvariant {
    let prm = &aut.params;
    let pm = prm.pm_modulus();
    let w = twist_unit(aut, t);
    let s = twist_valuation(prm, w);
    if s >= prm.r {
        return IsoInvariant { s: prm.r, j: 1 };
    }
    let target = 1 + prm.ppow(prm.m - prm.r + s);
    let j = arith::discrete_log(target as i128, w as i128, pm)
        .expect("w is a unit")
        .expect("w and 1 + p^(m-r+s) generate the same subgroup");
    IsoInvariant { s, j }
}

fn twist_valuation(prm: &GroupParams, w: u64) -> u32 {
    let pm = prm.pm_modulus();
    let v = vp_capped((w + pm.value() - 1) % pm.value(), pm);
    v - (prm.m - prm.r)
}

/// Whether `N_Gamma` is isomorphic to `G`, for an admissible triplet.
pub fn n_gamma_iso_to_g(aut: &AutStructure, t: Triplet) -> bool {
    twist_valuation(&aut.params, twist_unit(aut, t)) == 0
}

/// The same criterion through `1 + mu_a - b != 0 mod p`.
pub fn mu_criterion(aut: &AutStructure, t: Triplet) -> bool {
    let p = aut.params.p;
    !(1 + mu_coord(aut, t.a) % p + p - t.b % p).is_multiple_of(p)
}

/// Presentation parameters of `N_Gamma`: `(p, m, n, r - s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoParams {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSubgroupReport {
    pub triplet: Triplet,
    pub preadmissible: bool,
    pub admissible: bool,
    pub s: Option<u32>,
    pub j: Option<u64>,
    #[serde(rename = "iso_to_G")]
    pub iso_to_g: bool,
    pub iso_params: Option<IsoParams>,
}

pub fn report(aut: &AutStructure, t: Triplet) -> RegularSubgroupReport {
    let prm = &aut.params;
    let preadmissible = is_preadmissible(aut, t);
    let admissible = preadmissible && is_admissible(aut, t);
    let inv = admissible.then(|| iso_invariant_unchecked(aut, t));
    RegularSubgroupReport {
        triplet: t,
        preadmissible,
        admissible,
        s: inv.map(|v| v.s),
        j: inv.map(|v| v.j),
        iso_to_g: inv.is_some_and(|v| v.s == 0),
        iso_params: inv.map(|v| IsoParams {
            p: prm.p,
            m: prm.m,
            n: prm.n,
            r: prm.r - v.s,
            abelian: v.s >= prm.r,
        }),
    }
}

/// The `p^(m+n)` elements `rho(g) Gamma(g)` of `N_Gamma`, in the order of
/// `GroupParams::elements`.
pub fn n_gamma_elements(aut: &AutStructure, t: Triplet, budget: u64) -> Result<Vec<HolElement>> {
    let prm = &aut.params;
    prm.check_enumerable(budget)?;
    if !is_preadmissible(aut, t) {
        return Err(Error::InvalidArgument(format!(
            "triplet {t} is not pre-admissible for {prm}"
        )));
    }
    let gm = GammaMap::from_triplet(aut, t);
    Ok(prm.elements().map(|g| gm.hol_element(prm, g)).collect())
}

/// `Phi_x = rho(x) beta~^b` and `Phi_y = rho(y) alpha~^a delta~^d`.
pub fn phi_generators(aut: &AutStructure, t: Triplet) -> (HolElement, HolElement) {
    let prm = &aut.params;
    let gm = GammaMap::from_triplet(aut, t);
    (
        HolElement {
            sigma: prm.x(),
            phi: gm.psi_x,
        },
        HolElement {
            sigma: prm.y(),
            phi: gm.psi_y,
        },
    )
}
