//! `Hol(G)` acting on `G` by permutations, the coset representatives
//! `pi_{a,b,d}` and the multiplication table of `T(G)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{mul_mod, pow_mod_u64, s_sum_u64};
use crate::aut::{is_automorphism, AutStructure, Automorphism};
use crate::count::{self, Checker};
use crate::error::{Error, Result};
use crate::gamma::{self, Lattice, Triplet};
use crate::group::{GroupElement, GroupParams};
use crate::oracle::{self, OracleConfig};

/// `rho(sigma) phi`, acting by `tau -> phi(tau) sigma^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HolElement {
    pub sigma: GroupElement,
    pub phi: Automorphism,
}

impl HolElement {
    pub fn identity() -> Self {
        HolElement {
            sigma: GroupElement::IDENTITY,
            phi: Automorphism::identity(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma == GroupElement::IDENTITY && self.phi.is_identity()
    }

    pub fn apply(&self, params: &GroupParams, tau: GroupElement) -> GroupElement {
        params.mul(self.phi.apply(params, tau), params.inverse(self.sigma))
    }

    /// `(sigma, phi)(tau, psi) = (sigma phi(tau), phi psi)`
    pub fn mul(&self, other: &HolElement, params: &GroupParams) -> HolElement {
        HolElement {
            sigma: params.mul(self.sigma, self.phi.apply(params, other.sigma)),
            phi: self.phi.compose(&other.phi, params),
        }
    }

    pub fn inverse(&self, params: &GroupParams) -> HolElement {
        let phi_inv = self.phi.inverse(params);
        HolElement {
            sigma: phi_inv.apply(params, params.inverse(self.sigma)),
            phi: phi_inv,
        }
    }

    pub fn pow(&self, params: &GroupParams, mut e: u128) -> HolElement {
        let mut result = HolElement::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, params);
            }
            base = base.mul(&base, params);
            e >>= 1;
        }
        result
    }

    pub fn order(&self, params: &GroupParams) -> u128 {
        let o = self.phi.order(params);
        let rest = self.pow(params, o);
        debug_assert!(rest.phi.is_identity());
        o * params.element_order(rest.sigma) as u128
    }

    pub fn to_perm(&self, params: &GroupParams) -> Perm {
        Perm::from_fn(params, |g| self.apply(params, g))
    }
}

/// A permutation of `G` as a dense table over `GroupParams::index_of`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(size: usize) -> Self {
        Perm((0..size as u32).collect())
    }

    pub fn from_fn(params: &GroupParams, f: impl Fn(GroupElement) -> GroupElement) -> Self {
        Perm(
            params
                .elements()
                .map(|g| params.index_of(f(g)) as u32)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, params: &GroupParams, g: GroupElement) -> GroupElement {
        params.element_at(self.0[params.index_of(g)] as usize)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &v in &self.0 {
            match seen.get_mut(v as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

pub fn lambda(params: &GroupParams, sigma: GroupElement) -> Perm {
    Perm::from_fn(params, |tau| params.mul(sigma, tau))
}

pub fn rho(params: &GroupParams, sigma: GroupElement) -> Perm {
    let inv = params.inverse(sigma);
    Perm::from_fn(params, |tau| params.mul(tau, inv))
}

pub fn lambda_rho(params: &GroupParams, sigma: GroupElement) -> (Perm, Perm) {
    (lambda(params, sigma), rho(params, sigma))
}

pub fn aut_perm(params: &GroupParams, phi: &Automorphism) -> Perm {
    Perm::from_fn(params, |g| phi.apply(params, g))
}

pub fn inversion(params: &GroupParams) -> Perm {
    Perm::from_fn(params, |g| params.inverse(g))
}

/// The automorphism equal to `f`, if there is one.
pub fn perm_as_automorphism(params: &GroupParams, f: &Perm) -> Option<Automorphism> {
    let e = params.identity();
    if f.image(params, e) != e {
        return None;
    }
    let (ix, iy) = (f.image(params, params.x()), f.image(params, params.y()));
    if !is_automorphism(params, ix, iy) {
        return None;
    }
    let phi = Automorphism {
        img_x: ix,
        img_y: iy,
    };
    (aut_perm(params, &phi) == *f).then_some(phi)
}

/// Whether `f` lies in `Hol(G)`, i.e. `sigma -> f(sigma) f(1)^-1` is an
/// automorphism.
pub fn hol_member(params: &GroupParams, f: &Perm) -> bool {
    let c = params.inverse(f.image(params, params.identity()));
    let shifted = Perm::from_fn(params, |g| params.mul(f.image(params, g), c));
    perm_as_automorphism(params, &shifted).is_some()
}

/// `f Hol(G) = g Hol(G)`
pub fn coset_equal(params: &GroupParams, f: &Perm, g: &Perm) -> bool {
    hol_member(params, &f.inverse().compose(g))
}

/// `g = f ∘ phi` for some automorphism `phi`.
pub fn aut_congruent_right(params: &GroupParams, f: &Perm, g: &Perm) -> bool {
    perm_as_automorphism(params, &f.inverse().compose(g)).is_some()
}

/// `g = phi ∘ f` for some automorphism `phi`.
pub fn aut_congruent_left(params: &GroupParams, f: &Perm, g: &Perm) -> bool {
    perm_as_automorphism(params, &g.compose(&f.inverse())).is_some()
}

/// Generators of `Hol(G)` as permutations: `rho(x), rho(y)` and the four
/// generators of `Aut(G)`.
pub fn hol_generators(aut: &AutStructure) -> Vec<Perm> {
    let prm = &aut.params;
    let mut gens = vec![rho(prm, prm.x()), rho(prm, prm.y())];
    gens.extend(aut.gens.as_array().iter().map(|phi| aut_perm(prm, phi)));
    gens
}

/// Whether `f` normalises `Hol(G)`, checked on generators.
pub fn in_multiple_holomorph(aut: &AutStructure, f: &Perm) -> bool {
    let prm = &aut.params;
    let f_inv = f.inverse();
    hol_generators(aut)
        .iter()
        .all(|h| hol_member(prm, &f.compose(h).compose(&f_inv)))
}

/// `pi_{a,b,d}` with the least admissible choice of `j`.
pub fn pi_map(aut: &AutStructure, t: Triplet) -> Result<Perm> {
    let inv = gamma::iso_invariant(aut, t)?;
    if inv.s != 0 {
        return Err(Error::NotIsomorphic {
            a: t.a,
            b: t.b,
            d: t.d,
            s: inv.s,
        });
    }
    Ok(pi_map_with_j(aut, t, inv.j as i128))
}

/// The closed formula for `pi_{a,b,d}` with `j_0` given.
pub fn pi_map_with_j(aut: &AutStructure, t: Triplet, j0: i128) -> Perm {
    let prm = &aut.params;
    let (pm, pn) = (prm.pm(), prm.pn());
    let k = prm.k();
    let vd = pow_mod_u64(aut.tilde.v_t % pn, t.d as u128, pn);
    let bp = mul_mod(t.b, prm.ppow(prm.m - prm.r), pm);
    Perm::from_fn(prm, |g| {
        let count = (j0 * g.j as i128).rem_euclid(pn as i128) as u128;
        let big_s = s_sum_u64(vd, count, pn);
        let inner = (1 + mul_mod(bp, s_sum_u64(k, big_s as u128, pm), pm)) % pm;
        let exp = mul_mod(inner, prm.k_pow(-(big_s as i128)), pm);
        prm.element(-(g.i as i128) * exp as i128, -(big_s as i128))
    })
}

/// `pi_{a,b,d}(x^i y^j) = (Phi_x^i Phi_y^(j0 j))(1)` computed in `Hol(G)`.
pub fn pi_map_from_definition(aut: &AutStructure, t: Triplet, j0: i128) -> Perm {
    let prm = &aut.params;
    let (px, py) = gamma::phi_generators(aut, t);
    let pn = prm.pn() as i128;
    Perm::from_fn(prm, |g| {
        let e = (j0 * g.j as i128).rem_euclid(pn) as u128;
        px.pow(prm, g.i as u128)
            .mul(&py.pow(prm, e), prm)
            .apply(prm, prm.identity())
    })
}

/// `sigma -> sigma^ell`
pub fn power_map(params: &GroupParams, ell: i128) -> Result<Perm> {
    if ell.rem_euclid(params.p as i128) == 0 {
        return Err(Error::InvalidArgument(format!(
            "power map exponent {ell} is divisible by {}",
            params.p
        )));
    }
    Ok(Perm::from_fn(params, |g| params.pow(g, ell)))
}

/// `x^i y^j -> x^i y^S(v, j)`
pub fn pi_prime_map(params: &GroupParams, v: i128) -> Result<Perm> {
    if v.rem_euclid(params.p as i128) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{v} is not congruent to 1 mod {}",
            params.p
        )));
    }
    let pn = params.pn_modulus();
    let vr = pn.reduce(v);
    Ok(Perm::from_fn(params, |g| {
        GroupElement::new(g.i, s_sum_u64(vr, g.j as u128, pn.value()))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLabel {
    Triplet(Triplet),
    Power(i64),
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Triplet(t) => write!(f, "pi{t}"),
            ClassLabel::Power(l) => write!(f, "pow({l})"),
        }
    }
}

/// An element `f Hol(G)` of `T(G)`.
#[derive(Debug, Clone)]
pub struct TCosetClass {
    pub representative: Perm,
    pub label: Option<ClassLabel>,
}

/// Indices of pairwise coset-inequivalent members of `perms`.
pub fn distinct_classes(params: &GroupParams, perms: &[Perm]) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for (i, f) in perms.iter().enumerate() {
        if !reps.iter().any(|&r| coset_equal(params, &perms[r], f)) {
            reps.push(i);
        }
    }
    reps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Triplets,
    Oracle,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(Method::Formula),
            "triplets" => Ok(Method::Triplets),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::InvalidArgument(format!("unknown method {other}"))),
        }
    }
}

/// `|T(G)|` by the chosen method.
pub fn t_group_order(aut: &AutStructure, method: Method, oracle_cfg: &OracleConfig) -> Result<u64> {
    let prm = &aut.params;
    match method {
        Method::Formula => count::closed_formula(prm).ok_or(Error::RegimeUnsupported(prm.regime())),
        Method::Triplets => Ok(count::enumerate_counts(aut, Checker::General)?.n_admissible_iso),
        Method::Oracle => Ok(oracle::aut_pair_scan(aut, oracle_cfg)?.n_iso),
    }
}

/// Multiplication table of `T(G)` on the classes of the `pi_{a,b,d}`.
#[derive(Debug, Clone, Serialize)]
pub struct TGroupTable {
    pub labels: Vec<Triplet>,
    /// `table[i][j]` is the class of `pi_i ∘ pi_j`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl TGroupTable {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut k = 1;
        while cur != self.identity {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|i| self.element_order(i) == self.order())
    }
}

pub fn t_group_table(aut: &AutStructure, budget: u64) -> Result<TGroupTable> {
    let prm = &aut.params;
    prm.check_enumerable(budget)?;
    let mut labels = Vec::new();
    let mut reps = Vec::new();
    for t in Lattice::of(prm).iter() {
        if gamma::is_admissible(aut, t) && gamma::n_gamma_iso_to_g(aut, t) {
            reps.push(pi_map(aut, t)?);
            labels.push(t);
        }
    }
    let find = |f: &Perm| -> Result<usize> {
        reps.iter()
            .position(|r| coset_equal(prm, r, f))
            .ok_or_else(|| Error::NoSolution("product class has no pi representative".into()))
    };
    let table = reps
        .iter()
        .map(|f| {
            reps.iter()
                .map(|g| find(&f.compose(g)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let identity = find(&Perm::identity(prm.order() as usize))?;
    Ok(TGroupTable {
        labels,
        table,
        identity,
    })
}
