//! Automorphisms of `G`, stored by the images of `x` and `y`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, mul_mod, pow_mod_u64, s_sum_u64};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Automorphism {
    pub img_x: GroupElement,
    pub img_y: GroupElement,
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[x -> {}, y -> {}]", self.img_x, self.img_y)
    }
}

/// Whether `x -> img_x, y -> img_y` extends to an automorphism of `G`.
///
/// The relations must be preserved and the images must span the Frattini
/// quotient `G / G^p [G,G] = (Z/p)^2`, coordinates `(i mod p, j mod p)`.
pub fn is_automorphism(params: &GroupParams, img_x: GroupElement, img_y: GroupElement) -> bool {
    if !params.is_canonical(img_x) || !params.is_canonical(img_y) {
        return false;
    }
    let e = params.identity();
    if params.pow(img_x, params.pm() as i128) != e || params.pow(img_y, params.pn() as i128) != e {
        return false;
    }
    relation_holds(params, img_x, img_y) && frattini_invertible(params, img_x, img_y)
}

fn relation_holds(params: &GroupParams, img_x: GroupElement, img_y: GroupElement) -> bool {
    let lhs = params.mul(img_y, img_x);
    let rhs = params.mul(params.pow(img_x, params.k() as i128), img_y);
    lhs == rhs
}

fn frattini_invertible(params: &GroupParams, img_x: GroupElement, img_y: GroupElement) -> bool {
    let p = params.p as i128;
    let det = (img_x.i as i128) * (img_y.j as i128) - (img_y.i as i128) * (img_x.j as i128);
    det.rem_euclid(p) != 0
}

impl Automorphism {
    pub fn new(params: &GroupParams, img_x: GroupElement, img_y: GroupElement) -> Result<Self> {
        if !params.is_canonical(img_x) || !params.is_canonical(img_y) {
            return Err(Error::NotAutomorphism("images not in normal form"));
        }
        let e = params.identity();
        if params.pow(img_x, params.pm() as i128) != e {
            return Err(Error::NotAutomorphism("image of x has order exceeding p^m"));
        }
        if params.pow(img_y, params.pn() as i128) != e {
            return Err(Error::NotAutomorphism("image of y has order exceeding p^n"));
        }
        if !relation_holds(params, img_x, img_y) {
            return Err(Error::NotAutomorphism("defining relation not preserved"));
        }
        if !frattini_invertible(params, img_x, img_y) {
            return Err(Error::NotAutomorphism("images do not generate G"));
        }
        Ok(Automorphism { img_x, img_y })
    }

    pub fn identity() -> Self {
        Automorphism {
            img_x: GroupElement::new(1, 0),
            img_y: GroupElement::new(0, 1),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `phi(x^i y^j) = phi(x)^i phi(y)^j`
    pub fn apply(&self, params: &GroupParams, g: GroupElement) -> GroupElement {
        params.mul(
            params.pow(self.img_x, g.i as i128),
            params.pow(self.img_y, g.j as i128),
        )
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Automorphism, params: &GroupParams) -> Automorphism {
        Automorphism {
            img_x: self.apply(params, other.img_x),
            img_y: self.apply(params, other.img_y),
        }
    }

    pub fn pow(&self, params: &GroupParams, e: i128) -> Automorphism {
        if e < 0 {
            return self.inverse(params).pow(params, -e);
        }
        let mut result = Automorphism::identity();
        let mut base = *self;
        let mut e = e as u128;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base, params);
            }
            base = base.compose(&base, params);
            e >>= 1;
        }
        result
    }

    /// Order in `Aut(G)`, which divides `(p-1) p^E`.
    pub fn order(&self, params: &GroupParams) -> u128 {
        let p = params.p;
        let mut divisors: Vec<u64> = (1..p).filter(|t| (p - 1).is_multiple_of(*t)).collect();
        divisors.sort_unstable();
        for t in divisors {
            let mut psi = self.pow_positive(params, t as u128);
            let mut ord = t as u128;
            for _ in 0..=aut_order_p_exponent(params) {
                if psi.is_identity() {
                    return ord;
                }
                psi = psi.pow_positive(params, p as u128);
                ord *= p as u128;
            }
        }
        unreachable!("automorphism order must divide (p-1) p^E")
    }

    fn pow_positive(&self, params: &GroupParams, mut e: u128) -> Automorphism {
        let mut result = Automorphism::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base, params);
            }
            base = base.compose(&base, params);
            e >>= 1;
        }
        result
    }

    /// Two-sided inverse, computed as `phi^(ord - 1)`.
    pub fn inverse(&self, params: &GroupParams) -> Automorphism {
        let ord = self.order(params);
        self.pow_positive(params, ord - 1)
    }

    /// Dense image table indexed by `GroupParams::index_of`.
    pub fn table(&self, params: &GroupParams) -> Vec<u32> {
        params
            .elements()
            .map(|g| params.index_of(self.apply(params, g)) as u32)
            .collect()
    }
}

/// The four generators of `Aut(G)`.
#[derive(Debug, Clone)]
pub struct Generators {
    /// `x -> x^u, y -> y`
    pub alpha: Automorphism,
    /// `x -> x, y -> x^(p^max(m-n,0)) y`
    pub beta: Automorphism,
    /// `x -> x y^(p^max(n-m+r,0)), y -> y`
    pub gamma: Automorphism,
    /// `x -> x, y -> y^(1+p^r)`
    pub delta: Automorphism,
    /// The primitive root `u`, reduced mod `p^m`.
    pub u: u64,
}

impl Generators {
    pub fn as_array(&self) -> [Automorphism; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// Expected orders of `alpha, beta, gamma, delta`.
pub fn generator_orders(params: &GroupParams) -> [u128; 4] {
    let (p, m, n, r) = (params.p as u128, params.m, params.n, params.r);
    [
        (p - 1) * p.pow(m - 1),
        p.pow(m.min(n)),
        p.pow((m - r).min(n)),
        p.pow(n - r),
    ]
}

pub fn make_generators(params: &GroupParams) -> Result<Generators> {
    let (m, n, r) = (params.m, params.n, params.r);
    let u = arith::primitive_root(params.pm_modulus())?;
    let alpha = Automorphism::new(params, GroupElement::new(u, 0), params.y())?;
    let beta = Automorphism::new(
        params,
        params.x(),
        params.element(params.ppow(m.saturating_sub(n)) as i128, 1),
    )?;
    let gamma = Automorphism::new(
        params,
        params.element(1, params.ppow((n + r).saturating_sub(m)) as i128),
        params.y(),
    )?;
    let delta = Automorphism::new(
        params,
        params.x(),
        params.element(0, 1 + params.ppow(r) as i128),
    )?;
    Ok(Generators {
        alpha,
        beta,
        gamma,
        delta,
        u,
    })
}

fn aut_order_p_exponent(params: &GroupParams) -> u32 {
    let (m, n, r) = (params.m, params.n, params.r);
    (m - 1) + m.min(n) + (m - r).min(n) + (n - r)
}

/// `(p-1) p^(m-1) * p^min(m,n) * p^min(m-r,n) * p^(n-r)`
pub fn aut_order_formula(params: &GroupParams) -> u128 {
    generator_orders(params).iter().product()
}

/// Every automorphism, found by scanning all image pairs in `G x G`.
pub fn aut_enumerate(params: &GroupParams, max_pairs: u128) -> Result<Vec<Automorphism>> {
    let size = params.order() as u128;
    if size * size > max_pairs {
        return Err(Error::BudgetExceeded {
            what: "automorphism candidate pairs",
            needed: size * size,
            budget: max_pairs,
        });
    }
    let e = params.identity();
    let p = params.p;
    let xs: Vec<GroupElement> = params
        .elements()
        .filter(|g| (g.i % p != 0 || g.j % p != 0) && params.pow(*g, params.pm() as i128) == e)
        .collect();
    let ys: Vec<GroupElement> = params
        .elements()
        .filter(|g| params.pow(*g, params.pn() as i128) == e)
        .collect();
    let mut out: Vec<Automorphism> = xs
        .par_iter()
        .flat_map_iter(|&a| {
            let ak = params.pow(a, params.k() as i128);
            ys.iter()
                .filter(move |&&b| {
                    frattini_invertible(params, a, b) && params.mul(b, a) == params.mul(ak, b)
                })
                .map(move |&b| Automorphism { img_x: a, img_y: b })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Least `a0 >= 0` with `u^a0 = u S(k^q, u^-1) (mod p^m)`.
///
/// The term count `u^-1` is the inverse of `u` mod `p^m`: it is the exponent
/// of `x` in `alpha^-1(x)`, so reducing it mod `p^min(m,n)` breaks the
/// relation `alpha gamma alpha^-1 = alpha^a0 gamma^(u^-1)` once `n < m`.
pub fn solve_a0(params: &GroupParams, u: u64) -> Result<u64> {
    let pm = params.pm_modulus();
    let count = inv_mod(u as i128, pm)?;
    let z = pow_mod_u64(params.k(), params.q() as u128, pm.value());
    let rhs = mul_mod(u, s_sum_u64(z, count as u128, pm.value()), pm.value());
    arith::discrete_log(rhs as i128, u as i128, pm)?.ok_or_else(|| {
        Error::NoSolution(format!(
            "a0 congruence u^a0 = {rhs} mod {} has no solution for {params}",
            pm.value()
        ))
    })
}

/// The generators `alpha~, beta~, delta~` and units `u~, v~`.
#[derive(Debug, Clone)]
pub struct TildeGenerators {
    pub alpha_t: Automorphism,
    pub beta_t: Automorphism,
    pub delta_t: Automorphism,
    /// `u^((p-1) p^(m-r-1)) mod p^m`
    pub u_t: u64,
    /// `(1+p^r)^(p^max(n-2r,0)) mod p^max(m,n)`
    pub v_t: u64,
}

pub fn make_tilde(params: &GroupParams, gens: &Generators) -> TildeGenerators {
    let (p, m, n, r) = (params.p, params.m, params.n, params.r);
    let alpha_exp = (p - 1) * params.ppow(m - r - 1);
    let beta_exp = params.ppow(m.min(n) - r);
    let delta_exp = params.ppow(n.saturating_sub(2 * r));
    let big = params.exponent_bound();
    TildeGenerators {
        alpha_t: gens.alpha.pow(params, alpha_exp as i128),
        beta_t: gens.beta.pow(params, beta_exp as i128),
        delta_t: gens.delta.pow(params, delta_exp as i128),
        u_t: pow_mod_u64(gens.u, alpha_exp as u128, params.pm()),
        v_t: pow_mod_u64(1 + params.ppow(r), delta_exp as u128, big),
    }
}

/// Exponents with `phi = beta^b gamma^c alpha^a delta^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

/// `Aut(G)` data shared by everything downstream: generators, their tilde
/// powers and the constant `a0`.
#[derive(Debug, Clone)]
pub struct AutStructure {
    pub params: GroupParams,
    pub gens: Generators,
    /// Inverses of `alpha, beta, gamma, delta`, in that order.
    pub gen_inverses: [Automorphism; 4],
    pub tilde: TildeGenerators,
    pub a0: u64,
}

impl AutStructure {
    pub fn new(params: GroupParams) -> Result<Self> {
        let gens = make_generators(&params)?;
        let tilde = make_tilde(&params, &gens);
        let a0 = solve_a0(&params, gens.u)?;
        let gen_inverses = gens.as_array().map(|g| g.inverse(&params));
        Ok(AutStructure {
            params,
            gens,
            gen_inverses,
            tilde,
            a0,
        })
    }

    pub fn from_quadruple(p: u64, m: u32, n: u32, r: u32) -> Result<Self> {
        Self::new(GroupParams::new(p, m, n, r)?)
    }

    pub fn compose(&self, f: &Automorphism, g: &Automorphism) -> Automorphism {
        f.compose(g, &self.params)
    }

    /// `beta^b gamma^c alpha^a delta^d`
    pub fn from_normal_form(&self, nf: NormalForm) -> Automorphism {
        let prm = &self.params;
        let g = &self.gens;
        let left = g
            .beta
            .pow(prm, nf.b as i128)
            .compose(&g.gamma.pow(prm, nf.c as i128), prm);
        let right = g
            .alpha
            .pow(prm, nf.a as i128)
            .compose(&g.delta.pow(prm, nf.d as i128), prm);
        left.compose(&right, prm)
    }

    /// Staged extraction of the normal form: `d` from the `y`-part of
    /// `phi(y)`, then `b` from the `x`-part of the remaining `y`-image, then
    /// `c` by scanning `<gamma>`, and finally `a` by a discrete log in `<u>`.
    pub fn normal_form(&self, phi: &Automorphism) -> Result<NormalForm> {
        let prm = &self.params;
        let g = &self.gens;
        let [ord_a, ord_b, ord_c, ord_d] = generator_orders(prm);
        let failure = || Error::DecompositionFailure {
            x: (phi.img_x.i, phi.img_x.j),
            y: (phi.img_y.i, phi.img_y.j),
        };

        // delta^d only touches the y-exponent of phi(y); the other factors fix it
        let d = arith::discrete_log(
            phi.img_y.j as i128,
            1 + prm.ppow(prm.r) as i128,
            prm.pn_modulus(),
        )?
        .ok_or_else(failure)? as u128
            % ord_d;
        let psi1 = phi.compose(&g.delta.pow(prm, -(d as i128)), prm);

        // psi1 = beta^b gamma^c alpha^a maps y to x^(e b) y with e = p^max(m-n,0)
        if psi1.img_y.j != 1 {
            return Err(failure());
        }
        let e = prm.ppow(prm.m.saturating_sub(prm.n));
        if !psi1.img_y.i.is_multiple_of(e) {
            return Err(failure());
        }
        let b = (psi1.img_y.i / e) as u128 % ord_b;
        let psi2 = g.beta.pow(prm, -(b as i128)).compose(&psi1, prm);

        // psi2 = gamma^c alpha^a
        let gamma_inv = g.gamma.inverse(prm);
        let mut rest = psi2;
        for c in 0..ord_c {
            if rest.img_y == prm.y() && rest.img_x.j == 0 {
                if let Some(a) =
                    arith::discrete_log(rest.img_x.i as i128, g.u as i128, prm.pm_modulus())?
                {
                    let nf = NormalForm {
                        a: (a as u128 % ord_a) as u64,
                        b: b as u64,
                        c: c as u64,
                        d: d as u64,
                    };
                    if self.from_normal_form(nf) == *phi {
                        return Ok(nf);
                    }
                }
            }
            rest = gamma_inv.compose(&rest, prm);
        }
        Err(failure())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests_support::small_params;
    use std::collections::HashSet;

    fn aut(p: u64, m: u32, n: u32, r: u32) -> AutStructure {
        AutStructure::from_quadruple(p, m, n, r).unwrap()
    }

    #[test]
    fn generator_examples() {
        let s = aut(3, 2, 1, 1);
        let prm = &s.params;
        assert_eq!(s.gens.alpha.order(prm), 6);
        assert_eq!(s.gens.beta.img_y, GroupElement::new(3, 1));
        for prm in small_params() {
            let g = make_generators(&prm).unwrap();
            assert_eq!(g.delta.img_x, prm.x());
            let orders = generator_orders(&prm);
            for (phi, ord) in g.as_array().iter().zip(orders) {
                assert_eq!(phi.order(&prm), ord, "{prm} {phi}");
            }
        }
    }

    #[test]
    fn apply_examples() {
        let s = aut(3, 3, 3, 2);
        let prm = &s.params;
        let g = prm.element(5, 7);
        assert_eq!(Automorphism::identity().apply(prm, g), g);
        assert_eq!(
            s.gens.alpha.apply(prm, prm.x()),
            GroupElement::new(s.gens.u, 0)
        );
        for phi in s.gens.as_array() {
            for a in prm.elements().step_by(13) {
                for b in prm.elements().step_by(17) {
                    assert_eq!(
                        phi.apply(prm, prm.mul(a, b)),
                        prm.mul(phi.apply(prm, a), phi.apply(prm, b))
                    );
                }
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let s = aut(3, 3, 3, 2);
        let prm = &s.params;
        let id = Automorphism::identity();
        assert_eq!(id.inverse(prm), id);
        for phi in s.gens.as_array() {
            assert_eq!(phi.compose(&id, prm), phi);
            assert_eq!(phi.compose(&phi.inverse(prm), prm), id);
            assert_eq!(phi.inverse(prm).compose(&phi, prm), id);
        }
        let d_inv = s.gens.delta.inverse(prm);
        let expected = inv_mod(1 + prm.pr() as i128, prm.pn_modulus()).unwrap();
        assert_eq!(d_inv.img_y, GroupElement::new(0, expected));
    }

    #[test]
    fn rejects_non_automorphisms() {
        let prm = GroupParams::new(3, 2, 1, 1).unwrap();
        assert!(Automorphism::new(&prm, prm.x(), prm.x()).is_err());
        assert!(Automorphism::new(&prm, GroupElement::new(3, 0), prm.y()).is_err());
        assert!(Automorphism::new(&prm, prm.x(), GroupElement::new(0, 5)).is_err());
    }

    #[test]
    fn order_formula_examples() {
        assert_eq!(
            aut_order_formula(&GroupParams::new(3, 2, 1, 1).unwrap()),
            54
        );
        assert_eq!(
            aut_order_formula(&GroupParams::new(3, 3, 3, 2).unwrap()),
            4374
        );
        assert_eq!(
            aut_order_formula(&GroupParams::new(5, 2, 1, 1).unwrap()),
            500
        );
    }

    #[test]
    fn enumeration_matches_formula() {
        let mut cases = small_params();
        cases.push(GroupParams::new(5, 2, 1, 1).unwrap());
        for prm in cases {
            let all = aut_enumerate(&prm, 1 << 40).unwrap();
            assert_eq!(all.len() as u128, aut_order_formula(&prm), "{prm}");
            assert!(all.contains(&Automorphism::identity()));
            let set: HashSet<_> = all.iter().copied().collect();
            for (f, g) in all.iter().zip(all.iter().rev()).step_by(7) {
                assert!(set.contains(&f.compose(g, &prm)));
            }
        }
    }

    #[test]
    fn enumeration_budget() {
        let prm = GroupParams::new(3, 3, 3, 2).unwrap();
        assert!(matches!(
            aut_enumerate(&prm, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn conjugation_relations() {
        for prm in small_params().into_iter().chain([
            GroupParams::new(3, 3, 3, 2).unwrap(),
            GroupParams::new(3, 3, 2, 2).unwrap(),
            GroupParams::new(5, 3, 2, 1).unwrap(),
            GroupParams::new(3, 4, 3, 2).unwrap(),
        ]) {
            let s = AutStructure::new(prm.clone()).unwrap();
            let g = &s.gens;
            let c = |f: &Automorphism, h: &Automorphism| f.compose(h, &prm);
            let small = prm.modulus(prm.m.min(prm.n));
            let u_inv = inv_mod(g.u as i128, &small).unwrap() as i128;
            let one_pr_inv = inv_mod(1 + prm.pr() as i128, &small).unwrap() as i128;

            assert_eq!(c(&g.alpha, &g.delta), c(&g.delta, &g.alpha), "{prm}");
            let conj = |f: &Automorphism, h: &Automorphism| c(&c(f, h), &f.inverse(&prm));
            assert_eq!(
                conj(&g.alpha, &g.beta),
                g.beta.pow(&prm, g.u as i128),
                "{prm}"
            );
            assert_eq!(
                conj(&g.delta, &g.beta),
                g.beta.pow(&prm, one_pr_inv),
                "{prm}"
            );
            assert_eq!(
                conj(&g.delta, &g.gamma),
                g.gamma.pow(&prm, 1 + prm.pr() as i128),
                "{prm}"
            );
            let alpha_a0 = g.alpha.pow(&prm, s.a0 as i128);
            assert_eq!(
                conj(&g.alpha, &g.gamma),
                c(&alpha_a0, &g.gamma.pow(&prm, u_inv)),
                "{prm} a0={}",
                s.a0
            );
            assert_eq!(c(&alpha_a0, &g.gamma), c(&g.gamma, &alpha_a0), "{prm}");
        }
    }

    #[test]
    fn a0_divisibility() {
        for prm in small_params().into_iter().chain([
            GroupParams::new(3, 3, 3, 2).unwrap(),
            GroupParams::new(5, 3, 4, 2).unwrap(),
            GroupParams::new(3, 5, 2, 1).unwrap(),
            GroupParams::new(7, 4, 2, 2).unwrap(),
        ]) {
            let s = AutStructure::new(prm.clone()).unwrap();
            if prm.m <= prm.n {
                assert_eq!(s.a0 % prm.ppow(prm.m - 1), 0, "{prm}");
            }
            if prm.n + prm.r <= prm.m {
                assert_eq!(s.a0 % prm.ppow(prm.m - prm.r - 1), 0, "{prm}");
            }
        }
    }

    #[test]
    fn a0_open_regime_substitution() {
        let prm = GroupParams::new(3, 3, 2, 2).unwrap();
        let s = AutStructure::new(prm.clone()).unwrap();
        let count = inv_mod(s.gens.u as i128, prm.pm_modulus()).unwrap();
        let z = pow_mod_u64(prm.k(), prm.q() as u128, prm.pm());
        let rhs = mul_mod(s.gens.u, s_sum_u64(z, count as u128, prm.pm()), prm.pm());
        assert_eq!(pow_mod_u64(s.gens.u, s.a0 as u128, prm.pm()), rhs);
        for smaller in 0..s.a0 {
            assert_ne!(pow_mod_u64(s.gens.u, smaller as u128, prm.pm()), rhs);
        }
    }

    #[test]
    fn tilde_examples_and_invariants() {
        let s = aut(3, 2, 1, 1);
        assert_eq!(s.gens.u, 2);
        assert_eq!(s.tilde.u_t, 4);
        assert_eq!(arith::vp(4 - 1, 3).unwrap(), 1);
        for prm in small_params().into_iter().chain([
            GroupParams::new(3, 3, 3, 2).unwrap(),
            GroupParams::new(5, 3, 4, 1).unwrap(),
        ]) {
            let s = AutStructure::new(prm.clone()).unwrap();
            let t = &s.tilde;
            let (m, n, r) = (prm.m, prm.n, prm.r);
            assert_eq!(t.alpha_t.order(&prm), prm.pr() as u128, "{prm}");
            assert_eq!(t.beta_t.order(&prm), prm.pr() as u128, "{prm}");
            assert_eq!(
                t.delta_t.order(&prm),
                prm.ppow(r.min(n - r)) as u128,
                "{prm}"
            );
            assert!(t.alpha_t.pow(&prm, prm.pr() as i128).is_identity());
            assert_eq!(arith::vp(t.u_t as i128 - 1, prm.p).unwrap(), m - r);
            let v_mod_n = t.v_t % prm.pn();
            let v_val = if v_mod_n == 1 {
                n
            } else {
                arith::vp(v_mod_n as i128 - 1, prm.p).unwrap()
            };
            assert_eq!(v_val, r.max(n - r).min(n), "{prm}");
            let v_val_big = arith::vp(t.v_t as i128 - 1, prm.p).unwrap();
            if r.max(n - r) < m.max(n) {
                assert_eq!(v_val_big, r.max(n - r), "{prm}");
            }
            assert_eq!(t.alpha_t.img_x, GroupElement::new(t.u_t, 0));
            assert_eq!(t.beta_t.img_y, prm.element(prm.ppow(m - r) as i128, 1));
            assert_eq!(t.delta_t.img_y, prm.element(0, t.v_t as i128));
        }
    }

    #[test]
    fn normal_form_examples() {
        let s = aut(3, 3, 3, 2);
        let prm = &s.params;
        assert_eq!(
            s.normal_form(&Automorphism::identity()).unwrap(),
            NormalForm {
                a: 0,
                b: 0,
                c: 0,
                d: 0
            }
        );
        assert_eq!(
            s.normal_form(&s.gens.alpha).unwrap(),
            NormalForm {
                a: 1,
                b: 0,
                c: 0,
                d: 0
            }
        );
        let nf = NormalForm {
            a: 3,
            b: 2,
            c: 1,
            d: 0,
        };
        let phi = s.from_normal_form(nf);
        let back = s.normal_form(&phi).unwrap();
        let [oa, ob, oc, od] = generator_orders(prm);
        assert_eq!(back.a as u128, 3 % oa);
        assert_eq!(back.b as u128, 2 % ob);
        assert_eq!(back.c as u128, 1 % oc);
        assert_eq!(back.d as u128, 0 % od);
    }

    #[test]
    fn every_automorphism_decomposes() {
        for prm in small_params() {
            let s = AutStructure::new(prm.clone()).unwrap();
            let all = aut_enumerate(&prm, 1 << 40).unwrap();
            let mut seen = HashSet::new();
            for phi in &all {
                let nf = s.normal_form(phi).unwrap();
                assert_eq!(s.from_normal_form(nf), *phi);
                assert!(seen.insert(nf), "normal form not unique for {prm}");
            }
        }
    }
}
