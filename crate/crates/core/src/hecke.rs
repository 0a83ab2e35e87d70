//! The extended affine Hecke algebra in the standard basis `H_x`.
//!
//! Normalization: `(H_s + v)(H_s − v^{-1}) = 0`, so `C_s = H_s + v` is
//! bar-invariant and the canonical basis lies in `H_x + Σ vZ[v] H_y`.
//! Products are computed by expanding the right factor into `π · s_1 ⋯ s_k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::laurent::{Coeff, LaurentPoly};
use crate::rootdata::Weight;
use crate::weyl::{AffineGen, AffineWeylGroup, ExtAffineElement};

/// Tag for coordinates in the standard basis of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Standard;
/// Tag for coordinates in the standard basis of the periodic module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Periodic;

/// A finite `Z[v^{±1}]`-combination of basis vectors indexed by `W_ex`.
/// Zero coefficients are never stored.
#[derive(PartialEq, Eq)]
pub struct Combination<B> {
    terms: BTreeMap<ExtAffineElement, LaurentPoly>,
    _basis: PhantomData<B>,
}

pub type HeckeElement = Combination<Standard>;

impl<B> Clone for Combination<B> {
    fn clone(&self) -> Self {
        Combination {
            terms: self.terms.clone(),
            _basis: PhantomData,
        }
    }
}

impl<B> Default for Combination<B> {
    fn default() -> Self {
        Combination {
            terms: BTreeMap::new(),
            _basis: PhantomData,
        }
    }
}

impl<B> fmt::Debug for Combination<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<B> Combination<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: ExtAffineElement) -> Self {
        Self::monomial(x, LaurentPoly::one())
    }

    pub fn monomial(x: ExtAffineElement, p: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(x, &p);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ExtAffineElement, LaurentPoly)>) -> Self {
        let mut out = Self::zero();
        for (x, p) in terms {
            out.add_term(x, &p);
        }
        out
    }

    pub fn add_term(&mut self, x: ExtAffineElement, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(x).or_default();
        *entry += p;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn sub_term(&mut self, x: ExtAffineElement, p: &LaurentPoly) {
        self.add_term(x, &-p);
    }

    pub fn coeff(&self, x: &ExtAffineElement) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn get(&self, x: &ExtAffineElement) -> Option<&LaurentPoly> {
        self.terms.get(x)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtAffineElement, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExtAffineElement> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (*x, c * p)))
    }

    pub fn scale_int(&self, c: &Coeff) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, q)| (*x, q.scale(c))))
    }

    pub fn add_scaled(&mut self, other: &Self, p: &LaurentPoly) {
        for (x, c) in &other.terms {
            self.add_term(*x, &(c * p));
        }
    }

    /// Reindex every term by `f`, which must be injective.
    pub fn map_index(&self, f: impl Fn(&ExtAffineElement) -> ExtAffineElement) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (f(x), c.clone())))
    }

    /// Apply `v ↦ v^{-1}` to every coefficient (the basis is left alone).
    pub fn bar_coefficients(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (*x, c.bar())))
    }

    /// `[{element, polynomial}]` with elements in text notation.
    pub fn to_json(&self, g: &AffineWeylGroup) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(x, p)| {
                    serde_json::json!({
                        "element": g.format_element(x),
                        "polynomial": p,
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(g: &AffineWeylGroup, value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Term {
            element: String,
            polynomial: LaurentPoly,
        }
        let terms: Vec<Term> = serde_json::from_value(value.clone())
            .map_err(|e| Error::parse(format!("bad element JSON: {e}")))?;
        let mut out = Self::zero();
        for t in terms {
            out.add_term(g.parse_element(&t.element)?, &t.polynomial);
        }
        Ok(out)
    }

    /// Human-readable form like `(1)*H[e] + (v)*H[w[1]]`.
    pub fn display(&self, g: &AffineWeylGroup) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(x, p)| format!("({p})*H[{}]", g.format_element(x)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<B> Add for &Combination<B> {
    type Output = Combination<B>;
    fn add(self, rhs: &Combination<B>) -> Combination<B> {
        let mut out = self.clone();
        for (x, p) in &rhs.terms {
            out.add_term(*x, p);
        }
        out
    }
}

impl<B> Sub for &Combination<B> {
    type Output = Combination<B>;
    fn sub(self, rhs: &Combination<B>) -> Combination<B> {
        let mut out = self.clone();
        for (x, p) in &rhs.terms {
            out.sub_term(*x, p);
        }
        out
    }
}

impl<B> Neg for &Combination<B> {
    type Output = Combination<B>;
    fn neg(self) -> Combination<B> {
        Combination::from_terms(self.terms.iter().map(|(x, p)| (*x, -p)))
    }
}

/// The bar-symmetric integer-combination that cancels the non-positive
/// powers of `c`: the `m` with `m = m̄` and `c − m ∈ vZ[v]`.
pub(crate) fn symmetric_correction(c: &LaurentPoly) -> LaurentPoly {
    let mut m = LaurentPoly::zero();
    for (k, a) in c.terms() {
        if k < 0 {
            m.add_term(k, a);
            m.add_term(-k, a);
        } else if k == 0 {
            m.add_term(0, a);
        }
    }
    m
}

pub const DEFAULT_MAX_KL_LENGTH: u32 = 40;

/// The Hecke algebra of `W_ex` with a memo of canonical basis elements.
pub struct HeckeAlgebra {
    g: Arc<AffineWeylGroup>,
    kl: RwLock<HashMap<ExtAffineElement, Arc<HeckeElement>>>,
    max_kl_length: u32,
}

impl fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeAlgebra({:?})", self.g)
    }
}

impl HeckeAlgebra {
    pub fn new(g: Arc<AffineWeylGroup>) -> Self {
        HeckeAlgebra {
            g,
            kl: RwLock::new(HashMap::new()),
            max_kl_length: DEFAULT_MAX_KL_LENGTH,
        }
    }

    pub fn with_max_kl_length(mut self, n: u32) -> Self {
        self.max_kl_length = n;
        self
    }

    pub fn group(&self) -> &Arc<AffineWeylGroup> {
        &self.g
    }

    pub fn standard(&self, x: ExtAffineElement) -> HeckeElement {
        HeckeElement::basis(x)
    }

    /// `h · H_s`.
    pub fn mul_gen(&self, h: &HeckeElement, s: AffineGen) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, p) in h.terms() {
            let xs = self.g.mul_gen(x, s);
            out.add_term(xs, p);
            if self.g.length(&xs) < self.g.length(x) {
                out.add_term(*x, &(p * &LaurentPoly::v_inv_minus_v()));
            }
        }
        out
    }

    /// `h · (H_s + v)`.
    pub fn mul_c(&self, h: &HeckeElement, s: AffineGen) -> HeckeElement {
        let mut out = self.mul_gen(h, s);
        out.add_scaled(h, &LaurentPoly::v());
        out
    }

    /// `h · H_s^{-1} = h · (H_s + v − v^{-1})`.
    pub fn mul_gen_inverse(&self, h: &HeckeElement, s: AffineGen) -> HeckeElement {
        let mut out = self.mul_gen(h, s);
        out.add_scaled(h, &-LaurentPoly::v_inv_minus_v());
        out
    }

    /// `h · H_π` for a length-zero `π`.
    pub fn mul_omega(&self, h: &HeckeElement, pi: &ExtAffineElement) -> HeckeElement {
        debug_assert_eq!(self.g.length(pi), 0);
        h.map_index(|x| self.g.mul(x, pi))
    }

    /// `h · H_y`.
    pub fn mul_basis(&self, h: &HeckeElement, y: &ExtAffineElement) -> HeckeElement {
        let d = self.g.decompose(y);
        d.word
            .iter()
            .fold(self.mul_omega(h, &d.omega), |acc, &s| self.mul_gen(&acc, s))
    }

    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (y, p) in b.terms() {
            out.add_scaled(&self.mul_basis(a, y), p);
        }
        out
    }

    /// `(H_x)^{-1} = H_{s_k}^{-1} ⋯ H_{s_1}^{-1} H_{π^{-1}}` for `x = π s_1 ⋯ s_k`.
    pub fn standard_inverse(&self, x: &ExtAffineElement) -> HeckeElement {
        let d = self.g.decompose(x);
        let acc = d
            .word
            .iter()
            .rev()
            .fold(HeckeElement::basis(self.g.identity()), |acc, &s| {
                self.mul_gen_inverse(&acc, s)
            });
        self.mul_omega(&acc, &self.g.inverse(&d.omega))
    }

    /// `H̄_x = (H_{x^{-1}})^{-1} = H_π H_{s_1}^{-1} ⋯ H_{s_k}^{-1}`.
    pub fn bar_basis(&self, x: &ExtAffineElement) -> HeckeElement {
        let d = self.g.decompose(x);
        d.word.iter().fold(HeckeElement::basis(d.omega), |acc, &s| {
            self.mul_gen_inverse(&acc, s)
        })
    }

    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, p) in h.terms() {
            out.add_scaled(&self.bar_basis(x), &p.bar());
        }
        out
    }

    /// The canonical basis element `C_x`: bar-invariant and in
    /// `H_x + Σ_{y<x} vZ[v] H_y`.
    pub fn kl_basis(&self, x: &ExtAffineElement) -> Result<Arc<HeckeElement>> {
        if let Some(c) = self.kl.read().unwrap().get(x) {
            return Ok(c.clone());
        }
        let len = self.g.length(x);
        if len > self.max_kl_length {
            return Err(Error::Resource(format!(
                "canonical basis element of length {len} exceeds the bound {}",
                self.max_kl_length
            )));
        }
        let c = if len == 0 {
            HeckeElement::basis(*x)
        } else {
            let s = self.g.right_descents(x)[0];
            let z = self.g.mul_gen(x, s);
            let mut c = self.mul_c(&*self.kl_basis(&z)?, s);
            // top-down by length, so each correction only disturbs lower terms
            loop {
                let offender = c
                    .terms()
                    .filter(|(y, p)| *y != x && !p.in_v_times_zv())
                    .map(|(y, _)| (self.g.length(y), *y))
                    .max();
                let Some((_, y)) = offender else { break };
                let m = symmetric_correction(&c.coeff(&y));
                let cy = self.kl_basis(&y)?;
                c.add_scaled(&cy, &-m);
            }
            c
        };
        let c = Arc::new(c);
        self.kl.write().unwrap().insert(*x, c.clone());
        Ok(c)
    }

    /// `θ_λ = H_{t(μ)} (H_{t(ν)})^{-1}` with `ν = max(0, −λ)` coordinatewise and
    /// `μ = λ + ν`.
    pub fn bernstein_theta(&self, lam: &Weight) -> HeckeElement {
        let nu = Weight::new(
            &lam.coords()
                .iter()
                .map(|&c| (-c).max(0))
                .collect::<Vec<_>>(),
        );
        self.theta_split(&(*lam + nu), &nu)
            .expect("both parts are dominant")
    }

    /// `H_{t(μ)} (H_{t(ν)})^{-1}` for dominant `μ`, `ν`.
    pub fn theta_split(&self, mu: &Weight, nu: &Weight) -> Result<HeckeElement> {
        let rd = self.g.root_datum();
        if !rd.is_dominant(mu) || !rd.is_dominant(nu) {
            return Err(Error::input(format!("{mu} and {nu} must both be dominant")));
        }
        let inv = self.standard_inverse(&self.g.translation(*nu));
        Ok(self.mul(&HeckeElement::basis(self.g.translation(*mu)), &inv))
    }
}
