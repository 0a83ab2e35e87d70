//! The periodic Hecke module, its self-dual basis, and the generic
//! polynomials obtained from it by positive-root geometric series.
//!
//! The right action is `H_x · H_s = H_{xs}` when `x < xs` and
//! `H_{xs} + (v^{-1} − v) H_x` otherwise, for the semi-infinite order.
//!
//! Self-dual elements are translation-equivariant, `H̲_{t(λ)x} = ⟨λ⟩ H̲_x`, so
//! only the `|W|` columns `H̲_w`, `w ∈ W`, are computed. `H̲_e = e(0)`. Every
//! other column is built upward: if `z = ws < w` and the column of `z`'s class
//! is known, `H̲_z · (H_s + v)` is self-dual with leading term `H_w` and
//! coefficients in `Z[v]`; subtracting bar-symmetric multiples of basis
//! elements at the offending positions, from the top down, leaves `H̲_w`.
//! Some of those basis elements are translates of columns still being built
//! (often the column itself), so all columns of one wave are swept together
//! in order of depth below their leading term.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{symmetric_correction, Combination, HeckeElement, Periodic};
use crate::laurent::LaurentPoly;
use crate::orders::{is_cover_below, semiinf_leq, Window};
use crate::rootdata::Weight;
use crate::weyl::{AffineGen, AffineWeylGroup, ExtAffineElement};

pub type PeriodicElement = Combination<Periodic>;

pub const DEFAULT_MAX_GAP: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyKind {
    /// Periodic polynomials `p_{y,x}`.
    P,
    /// Generic polynomials `q_{y,x}`, series weight `v^{2k}`.
    Q,
    /// Generic polynomials `q'_{y,x}`, series weight `1`.
    Qprime,
}

impl fmt::Display for PolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolyKind::P => "p",
            PolyKind::Q => "q",
            PolyKind::Qprime => "qprime",
        })
    }
}

impl std::str::FromStr for PolyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(PolyKind::P),
            "q" => Ok(PolyKind::Q),
            "qprime" | "q'" => Ok(PolyKind::Qprime),
            _ => Err(Error::parse(format!("unknown table kind `{s}`"))),
        }
    }
}

/// A deviation found by [`PeriodicModule::inversion_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionDeviation {
    pub y: ExtAffineElement,
    pub z: ExtAffineElement,
    pub value: LaurentPoly,
}

#[derive(Clone, Debug, Default)]
pub struct InversionReport {
    pub pairs_checked: usize,
    pub deviations: Vec<InversionDeviation>,
}

impl InversionReport {
    pub fn is_ok(&self) -> bool {
        self.deviations.is_empty()
    }
}

pub struct PeriodicModule {
    g: Arc<AffineWeylGroup>,
    /// `H̲_{t(0)w}` indexed by `w`.
    columns: Vec<Arc<PeriodicElement>>,
    partitions: Mutex<HashMap<(Vec<i64>, usize, bool), LaurentPoly>>,
}

impl fmt::Debug for PeriodicModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicModule({:?})", self.g)
    }
}

impl PeriodicModule {
    pub fn new(g: Arc<AffineWeylGroup>) -> Result<Self> {
        Self::with_max_gap(g, DEFAULT_MAX_GAP)
    }

    /// `max_gap` bounds the depth (root height of `x•0 − y•0`) the basis
    /// computation may reach before giving up with a resource error.
    pub fn with_max_gap(g: Arc<AffineWeylGroup>, max_gap: u64) -> Result<Self> {
        let report = g.root_datum().validate_l();
        if !report.is_ok() {
            let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::input(format!("inadmissible l: {}", msgs.join("; "))));
        }
        let columns = compute_columns(&g, max_gap)?
            .into_iter()
            .map(Arc::new)
            .collect();
        Ok(PeriodicModule {
            g,
            columns,
            partitions: Mutex::new(HashMap::new()),
        })
    }

    /// Rebuild from previously computed columns, certifying each one.
    pub fn from_columns(g: Arc<AffineWeylGroup>, columns: Vec<PeriodicElement>) -> Result<Self> {
        if columns.len() != g.finite_group().order() {
            return Err(Error::input("wrong number of columns"));
        }
        for (w, col) in g.finite_group().elements().zip(&columns) {
            certify(&g, &g.finite(w), col)?;
        }
        Ok(PeriodicModule {
            g,
            columns: columns.into_iter().map(Arc::new).collect(),
            partitions: Mutex::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &Arc<AffineWeylGroup> {
        &self.g
    }

    /// The stored columns `H̲_w`, `w ∈ W`, in table order.
    pub fn columns(&self) -> &[Arc<PeriodicElement>] {
        &self.columns
    }

    pub fn act_generator(&self, m: &PeriodicElement, s: AffineGen) -> PeriodicElement {
        act_generator(&self.g, m, s)
    }

    pub fn act_omega(&self, m: &PeriodicElement, pi: &ExtAffineElement) -> PeriodicElement {
        m.map_index(|x| self.g.mul(x, pi))
    }

    /// `m · h` for an element of the Hecke algebra.
    pub fn act(&self, m: &PeriodicElement, h: &HeckeElement) -> PeriodicElement {
        let mut out = PeriodicElement::zero();
        for (y, p) in h.terms() {
            let d = self.g.decompose(y);
            let acc = d.word.iter().fold(self.act_omega(m, &d.omega), |acc, &s| {
                self.act_generator(&acc, s)
            });
            out.add_scaled(&acc, p);
        }
        out
    }

    /// `e(λ) = Σ_w v^{l(w)} H_{t(λ)w}`.
    pub fn e_element(&self, lam: &Weight) -> PeriodicElement {
        e_element(&self.g, lam)
    }

    /// `⟨η⟩`: reindex `H_x ↦ H_{t(η)x}`.
    pub fn translate(&self, m: &PeriodicElement, eta: &Weight) -> PeriodicElement {
        translate(m, eta)
    }

    /// The self-dual basis element `H̲_x`.
    pub fn selfdual_basis(&self, x: &ExtAffineElement) -> PeriodicElement {
        translate(&self.columns[x.finite.index()], &x.translation)
    }

    /// `p_{y,x}`, the coefficient of `H_y` in `H̲_x`.
    pub fn p(&self, y: &ExtAffineElement, x: &ExtAffineElement) -> LaurentPoly {
        let rel = ExtAffineElement::new(y.translation - x.translation, y.finite);
        self.columns[x.finite.index()].coeff(&rel)
    }

    /// Sum over `k ∈ N^{Φ+}` with `Σ k_α α = β` of `v^{2Σk}` (or of `1`).
    pub fn partition_weight(&self, beta_root_coords: &[i64], kind: PolyKind) -> LaurentPoly {
        let weighted = kind == PolyKind::Q;
        self.partitions_from(beta_root_coords, 0, weighted)
    }

    fn partitions_from(&self, beta: &[i64], from: usize, weighted: bool) -> LaurentPoly {
        let roots = self.g.root_datum().positive_roots();
        if beta.iter().all(|&b| b == 0) {
            return LaurentPoly::one();
        }
        if from == roots.len() || beta.iter().any(|&b| b < 0) {
            return LaurentPoly::zero();
        }
        let key = (beta.to_vec(), from, weighted);
        if let Some(p) = self.partitions.lock().unwrap().get(&key) {
            return p.clone();
        }
        let alpha = &roots[from].root_coords;
        let mut out = LaurentPoly::zero();
        let mut rest = beta.to_vec();
        let mut k = 0i32;
        while rest.iter().all(|&b| b >= 0) {
            let sub = self.partitions_from(&rest, from + 1, weighted);
            out += &sub.shift(if weighted { 2 * k } else { 0 });
            for (r, a) in rest.iter_mut().zip(alpha) {
                *r -= a;
            }
            k += 1;
        }
        self.partitions.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `q_{y,x}` (or `q'_{y,x}`): coefficient of `H_y` in the positive-root
    /// series applied to `H̲_x`. Exact for every `y`.
    pub fn generic(
        &self,
        y: &ExtAffineElement,
        x: &ExtAffineElement,
        kind: PolyKind,
    ) -> LaurentPoly {
        if kind == PolyKind::P {
            return self.p(y, x);
        }
        let rd = self.g.root_datum();
        let col = &self.columns[x.finite.index()];
        let mut out = LaurentPoly::zero();
        for (z, pz) in col.terms() {
            if z.finite != y.finite {
                continue;
            }
            // H_{t(−β) z'} with z' = t(λ_x) z must land on y
            let beta = z.translation + x.translation - y.translation;
            let Some(coords) = rd.root_coords(&beta) else {
                continue;
            };
            if coords.iter().any(|&c| c < 0) {
                continue;
            }
            let k = self.partition_weight(&coords, kind);
            if !k.is_zero() {
                out += &(pz * &k);
            }
        }
        out
    }

    /// `Π_{α>0} (1 − v² ⟨−α⟩)` applied to a finite combination.
    pub fn koszul(&self, m: &PeriodicElement) -> PeriodicElement {
        let mut out = m.clone();
        for root in self.g.root_datum().positive_roots() {
            let shifted = translate(&out, &-root.weight).scale(&LaurentPoly::monomial(-1, 2));
            out = &out + &shifted;
        }
        out
    }

    /// The Koszul operator applied to the (infinite) `q`-series of `H̲_x`,
    /// evaluated at position `y`: `Σ_{S ⊆ Φ+} (−v²)^{|S|} q_{t(Σ_S α) y, x}`.
    pub fn koszul_of_q_at(&self, y: &ExtAffineElement, x: &ExtAffineElement) -> LaurentPoly {
        let roots = self.g.root_datum().positive_roots();
        let mut out = LaurentPoly::zero();
        for mask in 0u32..(1 << roots.len()) {
            let mut shift = Weight::zero(self.g.rank());
            let mut size = 0;
            for (i, r) in roots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    shift = shift + r.weight;
                    size += 1;
                }
            }
            let up = ExtAffineElement::new(y.translation + shift, y.finite);
            let q = self.generic(&up, x, PolyKind::Q);
            if !q.is_zero() {
                let sign = if size % 2 == 0 { 1 } else { -1 };
                out += &(&q * &LaurentPoly::monomial(sign, 2 * size));
            }
        }
        out
    }

    /// `Σ_x (−1)^{l(x)+l(y)} q_{x,y} p_{w0x,w0z}` for one pair. The sum is
    /// finite: `w0 x` must lie in the support of `H̲_{w0 z}`.
    pub fn inversion_entry(&self, y: &ExtAffineElement, z: &ExtAffineElement) -> LaurentPoly {
        let w0 = self.g.longest_element();
        let w0z = self.g.mul(&w0, z);
        let ly = self.g.length(y);
        let mut out = LaurentPoly::zero();
        for (w0x, p) in self.selfdual_basis(&w0z).terms() {
            let x = self.g.mul(&w0, w0x);
            let q = self.generic(&x, y, PolyKind::Q);
            if q.is_zero() {
                continue;
            }
            let term = &q * p;
            if (self.g.length(&x) + ly).is_multiple_of(2) {
                out += &term;
            } else {
                out -= &term;
            }
        }
        out
    }

    pub fn inversion_check(&self, window: &Window) -> InversionReport {
        let elems = window.elements(&self.g);
        let deviations: Vec<InversionDeviation> = elems
            .par_iter()
            .flat_map_iter(|y| {
                elems.iter().filter_map(move |z| {
                    let value = self.inversion_entry(y, z);
                    let expected = if y == z {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    };
                    (value != expected).then_some(InversionDeviation {
                        y: *y,
                        z: *z,
                        value,
                    })
                })
            })
            .collect();
        InversionReport {
            pairs_checked: elems.len() * elems.len(),
            deviations,
        }
    }

    /// Pairs `(y, x)` of the window where the Koszul operator applied to the
    /// `q`-series of `H̲_x` fails to give back `p_{y,x}`.
    pub fn koszul_check(&self, window: &Window) -> Vec<(ExtAffineElement, ExtAffineElement)> {
        let elems = window.elements(&self.g);
        elems
            .par_iter()
            .flat_map_iter(|x| {
                elems
                    .iter()
                    .filter(move |y| self.koszul_of_q_at(y, x) != self.p(y, x))
                    .map(move |y| (*y, *x))
            })
            .collect()
    }

    /// Re-run the certification of every stored column.
    pub fn certify_all(&self) -> Result<()> {
        for (w, col) in self.g.finite_group().elements().zip(&self.columns) {
            certify(&self.g, &self.g.finite(w), col)?;
        }
        Ok(())
    }

    /// Certify `H̲_x` for a translated element (equivalent to its column's
    /// certificate, but checked directly).
    pub fn certify_element(&self, x: &ExtAffineElement) -> Result<()> {
        certify(&self.g, x, &self.selfdual_basis(x))
    }
}

pub fn translate(m: &PeriodicElement, eta: &Weight) -> PeriodicElement {
    m.map_index(|x| ExtAffineElement::new(x.translation + *eta, x.finite))
}

pub fn e_element(g: &AffineWeylGroup, lam: &Weight) -> PeriodicElement {
    let w = g.finite_group();
    PeriodicElement::from_terms(w.elements().map(|u| {
        (
            ExtAffineElement::new(*lam, u),
            LaurentPoly::monomial(1, w.length(u) as i32),
        )
    }))
}

pub fn act_generator(g: &AffineWeylGroup, m: &PeriodicElement, s: AffineGen) -> PeriodicElement {
    let mut out = PeriodicElement::zero();
    for (x, p) in m.terms() {
        let xs = g.mul_gen(x, s);
        out.add_term(xs, p);
        if is_cover_below(g, x, s) {
            out.add_term(*x, &(p * &LaurentPoly::v_inv_minus_v()));
        }
    }
    out
}

/// Leading coefficient 1, the rest in `vZ[v]`, support in the order ideal.
fn certify(g: &AffineWeylGroup, x: &ExtAffineElement, col: &PeriodicElement) -> Result<()> {
    let fail = |what: String| {
        Err(Error::Internal(format!(
            "certification of the self-dual element at {} failed: {what}",
            g.format_element(x)
        )))
    };
    if !col.coeff(x).is_one() {
        return fail(format!("leading coefficient is {}", col.coeff(x)));
    }
    for (y, p) in col.terms() {
        if y == x {
            continue;
        }
        if !p.in_v_times_zv() {
            return fail(format!(
                "coefficient {p} at {} is not in vZ[v]",
                g.format_element(y)
            ));
        }
        if !semiinf_leq(g, y, x) {
            return fail(format!(
                "{} is not below the leading term",
                g.format_element(y)
            ));
        }
    }
    Ok(())
}

type Bucket = Vec<(ExtAffineElement, LaurentPoly)>;

/// One column under construction.
struct Sweep {
    x: ExtAffineElement,
    top: Weight,
    /// Pending contributions keyed by depth.
    acc: BTreeMap<u64, HashMap<ExtAffineElement, LaurentPoly>>,
    /// `(ν, wave index, m, depth)`: subtract `m ⟨ν⟩ H̲` of a column in the wave.
    corrections: Vec<(Weight, usize, LaurentPoly, u64)>,
    /// Finished coefficients by depth.
    buckets: Vec<Bucket>,
    last_active: u64,
}

fn depth(g: &AffineWeylGroup, top: &Weight, y: &ExtAffineElement) -> Option<u64> {
    let d = g.dot(y, &Weight::zero(g.rank()), g.root_datum().l() as i64);
    let a = g.root_datum().root_coords(&(*top - d))?;
    a.iter()
        .all(|&c| c >= 0)
        .then(|| a.iter().sum::<i64>() as u64)
}

fn compute_columns(g: &AffineWeylGroup, max_gap: u64) -> Result<Vec<PeriodicElement>> {
    let wg = g.finite_group();
    let n = wg.order();
    let mut done: Vec<Option<PeriodicElement>> = vec![None; n];

    let e = g.identity();
    for u in wg.elements().skip(1) {
        if !semiinf_leq(g, &g.finite(u), &e) {
            return Err(Error::Internal(format!(
                "{} is not below e; e(0) is not triangular",
                g.format_element(&g.finite(u))
            )));
        }
    }
    let base = e_element(g, &Weight::zero(g.rank()));
    certify(g, &e, &base)?;
    done[0] = Some(base);

    while done.iter().any(Option::is_none) {
        let mut wave = vec![];
        for w in wg.elements().filter(|w| done[w.index()].is_none()) {
            let x = g.finite(w);
            let step = g.generators().into_iter().find_map(|s| {
                let z = g.mul_gen(&x, s);
                (is_cover_below(g, &x, s) && done[z.finite.index()].is_some()).then_some((s, z))
            });
            if let Some((s, z)) = step {
                wave.push((x, s, z));
            }
        }
        if wave.is_empty() {
            return Err(Error::Internal(
                "no descent path reaches the remaining columns".into(),
            ));
        }
        let cols = sweep(g, &done, &wave, max_gap)?;
        for ((x, _, _), col) in wave.iter().zip(cols) {
            certify(g, x, &col)?;
            done[x.finite.index()] = Some(col);
        }
    }
    Ok(done.into_iter().map(Option::unwrap).collect())
}

fn sweep(
    g: &AffineWeylGroup,
    done: &[Option<PeriodicElement>],
    wave: &[(ExtAffineElement, AffineGen, ExtAffineElement)],
    max_gap: u64,
) -> Result<Vec<PeriodicElement>> {
    let l = g.root_datum().l() as i64;
    let zero = Weight::zero(g.rank());
    let in_wave: HashMap<usize, usize> = wave
        .iter()
        .enumerate()
        .map(|(i, (x, _, _))| (x.finite.index(), i))
        .collect();

    let mut sweeps: Vec<Sweep> = vec![];
    for (x, s, z) in wave {
        let below = translate(done[z.finite.index()].as_ref().unwrap(), &z.translation);
        let mut d = act_generator(g, &below, *s);
        d.add_scaled(&below, &LaurentPoly::v());
        let top = g.dot(x, &zero, l);
        let mut acc: BTreeMap<u64, HashMap<_, _>> = BTreeMap::new();
        for (y, p) in d.terms() {
            let k = depth(g, &top, y).ok_or_else(|| {
                Error::Internal(format!("{} escapes the order ideal", g.format_element(y)))
            })?;
            acc.entry(k).or_default().insert(*y, p.clone());
        }
        sweeps.push(Sweep {
            x: *x,
            top,
            acc,
            corrections: vec![],
            buckets: vec![],
            last_active: 0,
        });
    }

    let mut level = 0u64;
    loop {
        if level > max_gap {
            return Err(Error::Resource(format!(
                "self-dual basis computation exceeded depth {max_gap}"
            )));
        }
        // read phase: every lookup is at a depth below `level`
        let mut updates = vec![];
        for sw in &sweeps {
            let mut cur = sw.acc.get(&level).cloned().unwrap_or_default();
            for (nu, wi, m, at) in &sw.corrections {
                let Some(bucket) = sweeps[*wi].buckets.get((level - at) as usize) else {
                    continue;
                };
                let base = sweeps[*wi].x.translation;
                for (q, r) in bucket {
                    let pos = ExtAffineElement::new(q.translation - base + *nu, q.finite);
                    let entry = cur.entry(pos).or_default();
                    *entry -= &(m * r);
                }
            }
            let mut cur: Vec<_> = cur.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            cur.sort_by_key(|a| a.0);
            updates.push(cur);
        }
        // write phase
        for (si, cur) in updates.into_iter().enumerate() {
            let mut bucket = vec![];
            let mut new_corrections = vec![];
            let mut pushes: Vec<(u64, ExtAffineElement, LaurentPoly)> = vec![];
            for (pos, c) in cur {
                sweeps[si].last_active = level;
                if level == 0 {
                    if pos != sweeps[si].x || !c.is_one() {
                        return Err(Error::Internal("leading term is not 1".into()));
                    }
                    bucket.push((pos, c));
                    continue;
                }
                let m = symmetric_correction(&c);
                let r = &c - &m;
                if !r.is_zero() {
                    bucket.push((pos, r));
                }
                if m.is_zero() {
                    continue;
                }
                let class = pos.finite.index();
                if let Some(col) = &done[class] {
                    for (q, p) in col.terms() {
                        let target =
                            ExtAffineElement::new(q.translation + pos.translation, q.finite);
                        if target == pos {
                            continue;
                        }
                        let k = depth(g, &sweeps[si].top, &target)
                            .filter(|&k| k > level)
                            .ok_or_else(|| Error::Internal("correction reaches upward".into()))?;
                        pushes.push((k, target, -(&m * p)));
                    }
                } else if let Some(&wi) = in_wave.get(&class) {
                    new_corrections.push((pos.translation, wi, m, level));
                } else {
                    return Err(Error::Internal(format!(
                        "correction at {} needs a column outside the current wave",
                        g.format_element(&pos)
                    )));
                }
            }
            let sw = &mut sweeps[si];
            sw.acc.remove(&level);
            for (k, y, p) in pushes {
                let slot = sw.acc.entry(k).or_default();
                let entry = slot.entry(y).or_default();
                *entry += &p;
            }
            sw.corrections.extend(new_corrections);
            sw.buckets.push(bucket);
        }
        let last = sweeps.iter().map(|s| s.last_active).max().unwrap_or(0);
        let pending = sweeps.iter().any(|s| {
            s.acc
                .range(level + 1..)
                .any(|(_, m)| m.values().any(|p| !p.is_zero()))
        });
        // a new nonzero entry past `level` would need a nonzero entry of some
        // column at depth in (last, level]; see the module docs
        if !pending && level >= 2 * last {
            break;
        }
        level += 1;
    }
    Ok(sweeps
        .into_iter()
        .map(|sw| {
            let base = sw.x.translation;
            PeriodicElement::from_terms(
                sw.buckets
                    .into_iter()
                    .flatten()
                    .map(|(y, p)| (ExtAffineElement::new(y.translation - base, y.finite), p)),
            )
        })
        .collect())
}
