//! The split metacyclic group
//! `G = <x, y | x^(p^m) = 1, y^(p^n) = 1, y x y^-1 = x^(1 + p^(m-r))>`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, checked_pow, mul_mod, pow_mod_u64, s_sum_u64, PrimePower};
use crate::error::{Error, Result};

/// Default cap on `|G|` for brute-force element enumeration.
pub const DEFAULT_MAX_ELEMENTS: u64 = 4096;
/// Default cap on `|G|` for the center probe.
pub const DEFAULT_MAX_CENTER_ELEMENTS: u64 = 59_049;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    /// `m <= n`
    #[serde(rename = "M_LE_N")]
    MLeN,
    /// `n <= m - r`
    #[serde(rename = "N_LE_M_MINUS_R")]
    NLeMMinusR,
    /// `m - r < n < m`
    #[serde(rename = "OPEN")]
    Open,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::MLeN => "M_LE_N",
            Regime::NLeMMinusR => "N_LE_M_MINUS_R",
            Regime::Open => "OPEN",
        })
    }
}

/// An element `x^i y^j` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub i: u64,
    pub j: u64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { i: 0, j: 0 };

    pub fn new(i: u64, j: u64) -> Self {
        GroupElement { i, j }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.i, self.j)
    }
}

/// The quadruple `(p, m, n, r)` together with the derived constants.
#[derive(Debug, Clone)]
pub struct GroupParams {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pm: PrimePower,
    pn: PrimePower,
    pr: u64,
    k: u64,
    q: u64,
    exponent: u64,
    k_powers: Option<Vec<u64>>,
}

impl PartialEq for GroupParams {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for GroupParams {}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p,m,n,r)=({},{},{},{})", self.p, self.m, self.n, self.r)
    }
}

impl GroupParams {
    pub fn new(p: u64, m: u32, n: u32, r: u32) -> Result<Self> {
        if !arith::is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if m < 2 {
            return Err(Error::InvalidParams(format!("m must be >= 2, got {m}")));
        }
        if n < 1 {
            return Err(Error::InvalidParams(format!("n must be >= 1, got {n}")));
        }
        if r < 1 || r > n.min(m - 1) {
            return Err(Error::InvalidParams(format!(
                "r must satisfy 1 <= r <= min(n, m-1) = {}, got {r}",
                n.min(m - 1)
            )));
        }
        let pm = PrimePower::new(p, m)?;
        let pn = PrimePower::new(p, n)?;
        let exponent = pm.value().max(pn.value());
        let size_ok = (pm.value() as u128) * (pn.value() as u128) < (1u128 << 63);
        if !size_ok {
            return Err(Error::ModulusTooLarge { p, e: m + n });
        }
        let pr = p.pow(r);
        let k = 1 + p.pow(m - r);
        let q = p.pow((n + r).saturating_sub(m));
        let k_powers = (pr <= 1 << 16).then(|| {
            let mut table = Vec::with_capacity(pr as usize);
            let mut acc = 1u64;
            for _ in 0..pr {
                table.push(acc);
                acc = mul_mod(acc, k, pm.value());
            }
            table
        });
        Ok(GroupParams {
            p,
            m,
            n,
            r,
            pm,
            pn,
            pr,
            k,
            q,
            exponent,
            k_powers,
        })
    }

    pub fn key(&self) -> (u64, u32, u32, u32) {
        (self.p, self.m, self.n, self.r)
    }

    /// `p^m`
    pub fn pm(&self) -> u64 {
        self.pm.value()
    }

    /// `p^n`
    pub fn pn(&self) -> u64 {
        self.pn.value()
    }

    /// `p^r`
    pub fn pr(&self) -> u64 {
        self.pr
    }

    pub fn pm_modulus(&self) -> &PrimePower {
        &self.pm
    }

    pub fn pn_modulus(&self) -> &PrimePower {
        &self.pn
    }

    /// `p^e` for any `e` with `p^e < 2^63`.
    pub fn ppow(&self, e: u32) -> u64 {
        checked_pow(self.p, e).expect("power of p within supported range")
    }

    pub fn modulus(&self, e: u32) -> PrimePower {
        PrimePower::new(self.p, e).expect("validated prime")
    }

    /// `k = 1 + p^(m-r)`, the twisting unit.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// `q = p^max(n-m+r, 0)`
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Exponent bound `p^max(m, n)` of `G`.
    pub fn exponent_bound(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.pm() * self.pn()
    }

    pub fn regime(&self) -> Regime {
        if self.m <= self.n {
            Regime::MLeN
        } else if self.n + self.r <= self.m {
            Regime::NLeMMinusR
        } else {
            Regime::Open
        }
    }

    /// `k^j mod p^m`, where `j` may be any integer.
    pub fn k_pow(&self, j: i128) -> u64 {
        let jr = j.rem_euclid(self.pr as i128) as u64;
        match &self.k_powers {
            Some(table) => table[jr as usize],
            None => pow_mod_u64(self.k, jr as u128, self.pm()),
        }
    }

    pub fn element(&self, i: i128, j: i128) -> GroupElement {
        GroupElement {
            i: self.pm.reduce(i),
            j: self.pn.reduce(j),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn x(&self) -> GroupElement {
        GroupElement { i: 1, j: 0 }
    }

    pub fn y(&self) -> GroupElement {
        GroupElement { i: 0, j: 1 }
    }

    pub fn is_canonical(&self, g: GroupElement) -> bool {
        g.i < self.pm() && g.j < self.pn()
    }

    /// Dense index `i * p^n + j`.
    pub fn index_of(&self, g: GroupElement) -> usize {
        (g.i * self.pn() + g.j) as usize
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        let idx = idx as u64;
        GroupElement {
            i: idx / self.pn(),
            j: idx % self.pn(),
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as usize).map(move |idx| self.element_at(idx))
    }

    pub fn check_enumerable(&self, budget: u64) -> Result<()> {
        if self.order() > budget {
            return Err(Error::BudgetExceeded {
                what: "group elements",
                needed: self.order() as u128,
                budget: budget as u128,
            });
        }
        Ok(())
    }

    /// `x^i1 y^j1 x^i2 y^j2 = x^(i1 + i2 k^j1) y^(j1 + j2)`.
    #[inline]
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let pm = self.pm();
        let twisted = mul_mod(h.i, self.k_pow(g.j as i128), pm);
        GroupElement {
            i: (g.i + twisted) % pm,
            j: (g.j + h.j) % self.pn(),
        }
    }

    /// `(x^i y^j)^-1 = x^(-i k^-j) y^-j`.
    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        let pm = self.pm();
        let i = mul_mod(g.i, self.k_pow(-(g.j as i128)), pm);
        GroupElement {
            i: (pm - i) % pm,
            j: (self.pn() - g.j) % self.pn(),
        }
    }

    /// `(x^i y^j)^ell = x^(i S(k^j, ell)) y^(j ell)`, negative `ell` via the inverse.
    pub fn pow(&self, g: GroupElement, ell: i128) -> GroupElement {
        let e = ell.rem_euclid(self.exponent as i128) as u128;
        let s = s_sum_u64(self.k_pow(g.j as i128), e, self.pm());
        GroupElement {
            i: mul_mod(g.i, s, self.pm()),
            j: ((g.j as u128 * e) % self.pn() as u128) as u64,
        }
    }

    /// Repeated multiplication; reference path for `pow`.
    pub fn pow_naive(&self, g: GroupElement, ell: u64) -> GroupElement {
        (0..ell).fold(self.identity(), |acc, _| self.mul(acc, g))
    }

    /// `[g, h] = g h g^-1 h^-1`
    pub fn commutator(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let gh = self.mul(g, h);
        let gh_g = self.mul(gh, self.inverse(g));
        self.mul(gh_g, self.inverse(h))
    }

    pub fn element_order(&self, g: GroupElement) -> u64 {
        let mut ord = 1u64;
        while self.pow(g, ord as i128) != self.identity() {
            ord *= self.p;
        }
        ord
    }

    /// Brute-force center: elements commuting with both generators.
    pub fn center(&self, budget: u64) -> Result<Vec<GroupElement>> {
        self.check_enumerable(budget)?;
        let (x, y) = (self.x(), self.y());
        Ok(self
            .elements()
            .filter(|&g| self.mul(g, x) == self.mul(x, g) && self.mul(g, y) == self.mul(y, g))
            .collect())
    }

    /// The set `<x^(p^r), y^(p^r)>` as predicted for the center.
    pub fn predicted_center(&self) -> Vec<GroupElement> {
        self.elements()
            .filter(|g| g.i % self.pr == 0 && g.j % self.pr == 0)
            .collect()
    }

    /// Exponent of `G / Z(G)` computed from element orders modulo the center.
    pub fn center_quotient_exponent(&self, budget: u64) -> Result<u64> {
        let center: HashSet<GroupElement> = self.center(budget)?.into_iter().collect();
        let mut exp = 1u64;
        for g in self.elements() {
            let mut e = 1u64;
            while !center.contains(&self.pow(g, e as i128)) {
                e *= self.p;
            }
            exp = exp.max(e);
        }
        Ok(exp)
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[GroupElement]) -> HashSet<GroupElement> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(g) = queue.pop_front() {
            for &h in gens {
                let gh = self.mul(g, h);
                if seen.insert(gh) {
                    queue.push_back(gh);
                }
            }
        }
        seen
    }

    /// Length of the lower central series, by iterated commutator closure.
    pub fn nilpotency_class(&self, budget: u64) -> Result<u32> {
        self.check_enumerable(budget)?;
        let all: Vec<GroupElement> = self.elements().collect();
        let mut term: Vec<GroupElement> = all.clone();
        let mut class = 0;
        while term.len() > 1 {
            let mut commutators = HashSet::new();
            for &g in &term {
                for &h in &all {
                    commutators.insert(self.commutator(g, h));
                }
            }
            let gens: Vec<GroupElement> = commutators.into_iter().collect();
            let mut next: Vec<GroupElement> = self.closure(&gens).into_iter().collect();
            next.sort();
            class += 1;
            if next.len() == term.len() {
                // a nontrivial perfect term cannot occur in a p-group
                return Err(Error::InvalidArgument(
                    "lower central series stalled".into(),
                ));
            }
            term = next;
        }
        Ok(class)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p: u64, m: u32, n: u32, r: u32) -> GroupParams {
        GroupParams::new(p, m, n, r).unwrap()
    }

    use super::tests_support::small_params;

    #[test]
    fn rejects_invalid_parameters() {
        assert_eq!(GroupParams::new(4, 2, 1, 1), Err(Error::NotOddPrime(4)));
        assert!(GroupParams::new(3, 1, 1, 1).is_err());
        assert!(GroupParams::new(3, 2, 0, 1).is_err());
        assert!(GroupParams::new(3, 2, 1, 0).is_err());
        assert!(GroupParams::new(3, 2, 2, 2).is_err());
        assert!(GroupParams::new(3, 3, 1, 2).is_err());
    }

    #[test]
    fn regimes_partition() {
        assert_eq!(params(3, 3, 3, 2).regime(), Regime::MLeN);
        assert_eq!(params(3, 2, 1, 1).regime(), Regime::NLeMMinusR);
        assert_eq!(params(3, 3, 2, 2).regime(), Regime::Open);
        for p in small_params() {
            let tags = [p.m <= p.n, p.n + p.r <= p.m, p.m < p.n + p.r && p.n < p.m];
            assert_eq!(tags.iter().filter(|&&t| t).count(), 1, "{p}");
        }
    }

    #[test]
    fn derived_constants() {
        let p = params(3, 3, 3, 2);
        assert_eq!(p.k(), 4);
        assert_eq!(p.q(), 9);
        let p = params(3, 2, 1, 1);
        assert_eq!(p.q(), 1);
    }

    #[test]
    fn mul_examples() {
        let p = params(3, 2, 1, 1);
        let g = p.element(5, 2);
        assert_eq!(p.mul(g, p.identity()), g);
        assert_eq!(p.mul(p.y(), p.x()), GroupElement::new(p.k() % p.pm(), 1));
        assert_eq!(
            p.mul(p.element(1, 1), p.element(1, 1)),
            GroupElement::new(5, 2)
        );
    }

    #[test]
    fn pow_examples() {
        let p = params(3, 2, 1, 1);
        let g = p.element(4, 2);
        assert_eq!(p.pow(g, 0), p.identity());
        assert_eq!(p.pow(p.x(), p.pm() as i128), p.identity());
        assert_eq!(p.pow(p.element(1, 1), 3), GroupElement::new(3, 0));
        let three = p.mul(p.mul(p.element(1, 1), p.element(1, 1)), p.element(1, 1));
        assert_eq!(three, GroupElement::new(3, 0));
    }

    #[test]
    fn inverse_examples() {
        let p = params(3, 3, 3, 2);
        assert_eq!(p.inverse(p.identity()), p.identity());
        assert_eq!(p.inverse(p.x()), GroupElement::new(p.pm() - 1, 0));
        for g in p.elements() {
            assert_eq!(p.mul(g, p.inverse(g)), p.identity());
            assert_eq!(p.mul(p.inverse(g), g), p.identity());
            assert_eq!(p.pow(g, -1), p.inverse(g));
        }
    }

    #[test]
    fn closed_pow_matches_repeated_mul() {
        for p in small_params() {
            for g in p.elements() {
                for ell in 0..=p.exponent_bound() + 2 {
                    assert_eq!(p.pow(g, ell as i128), p.pow_naive(g, ell), "{p} {g} {ell}");
                }
            }
        }
    }

    #[test]
    fn generator_orders_and_non_abelian() {
        for p in small_params() {
            assert_eq!(p.element_order(p.x()), p.pm());
            assert_eq!(p.element_order(p.y()), p.pn());
            assert_ne!(p.mul(p.x(), p.y()), p.mul(p.y(), p.x()));
        }
    }

    #[test]
    fn center_examples() {
        let p = params(3, 2, 1, 1);
        let c = p.center(DEFAULT_MAX_CENTER_ELEMENTS).unwrap();
        assert_eq!(
            c,
            vec![
                GroupElement::new(0, 0),
                GroupElement::new(3, 0),
                GroupElement::new(6, 0)
            ]
        );
        for p in small_params() {
            let c = p.center(DEFAULT_MAX_CENTER_ELEMENTS).unwrap();
            assert!(c.contains(&p.identity()));
            assert!(c.iter().all(|g| g.i % p.pr() == 0));
            assert_eq!(c, p.predicted_center(), "{p}");
            assert_eq!(p.center_quotient_exponent(4096).unwrap(), p.pr(), "{p}");
        }
    }

    #[test]
    fn center_budget() {
        let p = params(3, 6, 6, 3);
        assert!(matches!(p.center(1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn nilpotency_class_examples() {
        assert_eq!(params(3, 2, 1, 1).nilpotency_class(4096).unwrap(), 2);
        assert_eq!(params(3, 3, 3, 2).nilpotency_class(4096).unwrap(), 3);
        for p in small_params() {
            if p.r <= p.m - p.r {
                assert_eq!(p.nilpotency_class(4096).unwrap(), 2, "{p}");
            }
        }
    }

    #[test]
    fn commutators_lie_in_derived_cyclic_subgroup() {
        let p = params(3, 3, 3, 2);
        let step = p.ppow(p.m - p.r);
        for g in p.elements().step_by(7) {
            for h in p.elements().step_by(11) {
                let c = p.commutator(g, h);
                assert_eq!(c.j, 0);
                assert_eq!(c.i % step, 0);
            }
        }
    }

    fn arb_params() -> impl Strategy<Value = GroupParams> {
        prop_oneof![
            Just(params(3, 2, 1, 1)),
            Just(params(3, 3, 3, 2)),
            Just(params(5, 3, 2, 1)),
            Just(params(7, 4, 5, 3)),
            Just(params(3, 6, 4, 2)),
        ]
    }

    proptest! {
        #[test]
        fn group_axioms(p in arb_params(), a in any::<(i64, i64)>(), b in any::<(i64, i64)>(), c in any::<(i64, i64)>()) {
            let g = p.element(a.0 as i128, a.1 as i128);
            let h = p.element(b.0 as i128, b.1 as i128);
            let k = p.element(c.0 as i128, c.1 as i128);
            prop_assert_eq!(p.mul(p.mul(g, h), k), p.mul(g, p.mul(h, k)));
            prop_assert_eq!(p.mul(g, p.identity()), g);
            prop_assert_eq!(p.mul(p.identity(), g), g);
            prop_assert_eq!(p.mul(g, p.inverse(g)), p.identity());
            prop_assert!(p.is_canonical(p.mul(g, h)));
        }

        #[test]
        fn pow_is_homomorphic_in_exponent(p in arb_params(), a in any::<(i64, i64)>(), s in -400i64..400, t in -400i64..400) {
            let g = p.element(a.0 as i128, a.1 as i128);
            prop_assert_eq!(p.pow(g, (s + t) as i128), p.mul(p.pow(g, s as i128), p.pow(g, t as i128)));
        }
    }
}
