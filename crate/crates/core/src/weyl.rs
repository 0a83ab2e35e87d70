//! Finite, affine and extended affine Weyl groups.
//!
//! Elements of `W_ex = W ⋉ Λ` are kept in the normal form `t(λ)w`. The finite
//! group is small (at most 24 elements for the supported types) and is fully
//! tabulated; everything affine is computed from the tables on the fly.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::rootdata::{RootDatum, Weight, MAX_RANK};

type Matrix = [[i64; MAX_RANK]; MAX_RANK];

/// An element of the finite Weyl group, as an index into [`WeylGroup`] tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FiniteElement(pub(crate) u16);

impl FiniteElement {
    pub const IDENTITY: FiniteElement = FiniteElement(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Tabulated finite Weyl group acting on weights in fundamental coordinates.
#[derive(Debug)]
pub struct WeylGroup {
    rank: usize,
    mats: Vec<Matrix>,
    mult: Vec<u16>,
    inv: Vec<u16>,
    len: Vec<u32>,
    words: Vec<Vec<u8>>,
    /// `w^{-1} α > 0` for each positive root `α`.
    inv_positive: Vec<Vec<bool>>,
    by_rho: HashMap<Weight, u16>,
    simple: Vec<u16>,
    longest: u16,
}

fn apply(m: &Matrix, rank: usize, lam: &Weight) -> Weight {
    let mut c = [0i64; MAX_RANK];
    for (i, ci) in c.iter_mut().enumerate().take(rank) {
        *ci = (0..rank).map(|j| m[i][j] * lam[j]).sum();
    }
    Weight::new(&c[..rank])
}

fn matmul(a: &Matrix, b: &Matrix, rank: usize) -> Matrix {
    let mut out = [[0; MAX_RANK]; MAX_RANK];
    for i in 0..rank {
        for j in 0..rank {
            out[i][j] = (0..rank).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

impl WeylGroup {
    pub fn new(rd: &RootDatum) -> Self {
        let n = rd.rank();
        let a = rd.cartan_matrix();
        let mut identity = [[0; MAX_RANK]; MAX_RANK];
        for (i, row) in identity.iter_mut().enumerate().take(n) {
            row[i] = 1;
        }
        // (s_i λ)_k = λ_k - λ_i A[k][i]
        let simple: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut m = identity;
                for (k, row) in m.iter_mut().enumerate().take(n) {
                    row[i] -= a[k][i];
                }
                m
            })
            .collect();

        let rho = rd.rho();
        let mut mats = vec![identity];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut by_rho = HashMap::from([(rho, 0u16)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for (i, s) in simple.iter().enumerate() {
                let m = matmul(&mats[w], s, n);
                let key = apply(&m, n, &rho);
                if let std::collections::hash_map::Entry::Vacant(e) = by_rho.entry(key) {
                    e.insert(mats.len() as u16);
                    let mut word = words[w].clone();
                    word.push(i as u8);
                    words.push(word);
                    mats.push(m);
                    queue.push_back(mats.len() - 1);
                }
            }
        }
        let size = mats.len();
        let lookup = |m: &Matrix| by_rho[&apply(m, n, &rho)];
        let mut mult = vec![0u16; size * size];
        for x in 0..size {
            for y in 0..size {
                mult[x * size + y] = lookup(&matmul(&mats[x], &mats[y], n));
            }
        }
        let inv: Vec<u16> = (0..size)
            .map(|x| (0..size).find(|&y| mult[x * size + y] == 0).unwrap() as u16)
            .collect();
        let len: Vec<u32> = words.iter().map(|w| w.len() as u32).collect();
        let inv_positive = (0..size)
            .map(|w| {
                let winv = &mats[inv[w] as usize];
                rd.positive_roots()
                    .iter()
                    .map(|r| {
                        let img = apply(winv, n, &r.weight);
                        // positive iff its root coordinates are nonnegative
                        rd.root_coords(&img).unwrap().iter().all(|&c| c >= 0)
                    })
                    .collect()
            })
            .collect();
        let longest = (0..size).max_by_key(|&w| len[w]).unwrap() as u16;
        let simple = (0..n)
            .map(|i| {
                words
                    .iter()
                    .position(|w| w.as_slice() == [i as u8])
                    .unwrap() as u16
            })
            .collect();
        WeylGroup {
            rank: n,
            mats,
            mult,
            inv,
            len,
            words,
            inv_positive,
            by_rho,
            simple,
            longest,
        }
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = FiniteElement> {
        (0..self.order() as u16).map(FiniteElement)
    }

    pub fn simple(&self, i: usize) -> FiniteElement {
        FiniteElement(self.simple[i])
    }

    pub fn mul(&self, x: FiniteElement, y: FiniteElement) -> FiniteElement {
        FiniteElement(self.mult[x.index() * self.order() + y.index()])
    }

    pub fn inverse(&self, x: FiniteElement) -> FiniteElement {
        FiniteElement(self.inv[x.index()])
    }

    pub fn length(&self, x: FiniteElement) -> u32 {
        self.len[x.index()]
    }

    /// Canonical reduced word, 0-based simple indices.
    pub fn word(&self, x: FiniteElement) -> &[u8] {
        &self.words[x.index()]
    }

    pub fn from_word(&self, word: &[u8]) -> FiniteElement {
        word.iter().fold(FiniteElement::IDENTITY, |w, &i| {
            self.mul(w, self.simple(i as usize))
        })
    }

    pub fn act(&self, w: FiniteElement, lam: &Weight) -> Weight {
        apply(&self.mats[w.index()], self.rank, lam)
    }

    /// The unique element sending `ρ` to `image`.
    pub fn from_rho_image(&self, image: &Weight) -> Option<FiniteElement> {
        self.by_rho.get(image).map(|&i| FiniteElement(i))
    }

    pub fn matrix(&self, w: FiniteElement) -> Vec<Vec<i64>> {
        let m = &self.mats[w.index()];
        (0..self.rank).map(|i| m[i][..self.rank].to_vec()).collect()
    }

    /// Whether `w^{-1} α` is positive, for the positive root with index `root`.
    pub fn inverse_keeps_positive(&self, w: FiniteElement, root: usize) -> bool {
        self.inv_positive[w.index()][root]
    }

    pub fn longest(&self) -> FiniteElement {
        FiniteElement(self.longest)
    }

    /// The reflection `s_α` for a root given in fundamental coordinates with
    /// coroot pairing `<ρ, α^vee> = rho_pairing`.
    pub fn reflection(&self, alpha: &Weight, rho_pairing: i64) -> FiniteElement {
        let rho = Weight::new(&[1; MAX_RANK][..self.rank]);
        self.from_rho_image(&(rho - alpha.scale(rho_pairing)))
            .expect("root reflection lies in W")
    }
}

/// Affine simple reflection: `0` is `s_0`, `1..=r` are the finite `s_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineGen(pub u8);

impl AffineGen {
    pub const S0: AffineGen = AffineGen(0);

    pub fn finite(i: usize) -> Self {
        AffineGen(i as u8 + 1)
    }

    pub fn is_affine(self) -> bool {
        self.0 == 0
    }

    /// 0-based finite index, `None` for `s_0`.
    pub fn finite_index(self) -> Option<usize> {
        (self.0 > 0).then(|| self.0 as usize - 1)
    }
}

impl fmt::Display for AffineGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// `x = t(λ)w` in the extended affine Weyl group.
///
/// Length is not stored; it is an `O(|Φ+|)` evaluation of the
/// Iwahori–Matsumoto formula via [`AffineWeylGroup::length`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffineElement {
    pub translation: Weight,
    pub finite: FiniteElement,
}

impl ExtAffineElement {
    pub fn new(translation: Weight, finite: FiniteElement) -> Self {
        ExtAffineElement {
            translation,
            finite,
        }
    }

    pub fn rank(&self) -> usize {
        self.translation.rank()
    }
}

impl fmt::Debug for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}*w#{}", self.translation, self.finite.0)
    }
}

/// Decomposition `x = π · s_{i1} ⋯ s_{ik}` with `l(π) = 0` and the word reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub omega: ExtAffineElement,
    pub word: Vec<AffineGen>,
}

/// The extended affine Weyl group of a root datum, with the finite tables and
/// a memo of reduced decompositions.
pub struct AffineWeylGroup {
    rd: Arc<RootDatum>,
    w: WeylGroup,
    /// `s_θ` for the root whose coroot is the highest coroot.
    s_theta: FiniteElement,
    theta: Weight,
    omega: Vec<ExtAffineElement>,
    decompositions: RwLock<HashMap<ExtAffineElement, Arc<Decomposition>>>,
}

impl fmt::Debug for AffineWeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AffineWeylGroup({}, l={})",
            self.rd.cartan_type(),
            self.rd.l()
        )
    }
}

impl AffineWeylGroup {
    pub fn new(rd: Arc<RootDatum>) -> Self {
        let w = WeylGroup::new(&rd);
        let theta = rd.theta().weight;
        let coroot = rd.theta().coroot.clone();
        let rho = rd.rho();
        let s_theta_rho = rho - theta.scale(rd.pair(&rho, &coroot));
        let s_theta = w
            .from_rho_image(&s_theta_rho)
            .expect("reflection lies in W");
        let mut g = AffineWeylGroup {
            rd,
            w,
            s_theta,
            theta,
            omega: vec![],
            decompositions: RwLock::new(HashMap::new()),
        };
        g.omega = g.find_omega();
        g
    }

    fn find_omega(&self) -> Vec<ExtAffineElement> {
        let n = self.rank();
        let mut out = vec![];
        let mut lam = vec![-2i64; n];
        // translations of length-zero elements are W-conjugates of minuscule
        // weights, so coordinates in [-2, 2] suffice for the supported types
        loop {
            let t = Weight::new(&lam);
            for w in self.w.elements() {
                let x = ExtAffineElement::new(t, w);
                if self.length(&x) == 0 {
                    out.push(x);
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    out.sort();
                    assert_eq!(out.len() as u64, self.rd.lattice_index());
                    return out;
                }
                lam[k] += 1;
                if lam[k] <= 2 {
                    break;
                }
                lam[k] = -2;
                k += 1;
            }
        }
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn root_datum_arc(&self) -> &Arc<RootDatum> {
        &self.rd
    }

    pub fn finite_group(&self) -> &WeylGroup {
        &self.w
    }

    pub fn rank(&self) -> usize {
        self.rd.rank()
    }

    /// All affine simple reflections, `s_0` first.
    pub fn generators(&self) -> Vec<AffineGen> {
        (0..=self.rank()).map(|i| AffineGen(i as u8)).collect()
    }

    pub fn identity(&self) -> ExtAffineElement {
        ExtAffineElement::new(Weight::zero(self.rank()), FiniteElement::IDENTITY)
    }

    pub fn translation(&self, lam: Weight) -> ExtAffineElement {
        ExtAffineElement::new(lam, FiniteElement::IDENTITY)
    }

    pub fn finite(&self, w: FiniteElement) -> ExtAffineElement {
        ExtAffineElement::new(Weight::zero(self.rank()), w)
    }

    /// The affine reflection `t(kα)s_α` for the positive root with index `a`.
    pub fn affine_reflection(&self, a: usize, k: i64) -> ExtAffineElement {
        let root = &self.rd.positive_roots()[a];
        let s = self
            .w
            .reflection(&root.weight, self.rd.pair(&self.rd.rho(), &root.coroot));
        ExtAffineElement::new(root.weight.scale(k), s)
    }

    pub fn generator(&self, s: AffineGen) -> ExtAffineElement {
        match s.finite_index() {
            Some(i) => self.finite(self.w.simple(i)),
            None => ExtAffineElement::new(self.theta, self.s_theta),
        }
    }

    /// The length-zero elements, one per coset of `Λ/Q`.
    pub fn omega_elements(&self) -> &[ExtAffineElement] {
        &self.omega
    }

    pub fn mul(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> ExtAffineElement {
        ExtAffineElement::new(
            x.translation + self.w.act(x.finite, &y.translation),
            self.w.mul(x.finite, y.finite),
        )
    }

    /// Group law, checking that both elements have this group's rank.
    pub fn multiply(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn check(&self, x: &ExtAffineElement) -> Result<()> {
        if x.rank() != self.rank() || x.finite.index() >= self.w.order() {
            return Err(Error::input(format!(
                "element {x:?} does not belong to the group of type {}",
                self.rd.cartan_type()
            )));
        }
        Ok(())
    }

    pub fn inverse(&self, x: &ExtAffineElement) -> ExtAffineElement {
        let winv = self.w.inverse(x.finite);
        ExtAffineElement::new(-self.w.act(winv, &x.translation), winv)
    }

    /// Right multiplication by an affine simple reflection.
    pub fn mul_gen(&self, x: &ExtAffineElement, s: AffineGen) -> ExtAffineElement {
        match s.finite_index() {
            Some(i) => ExtAffineElement::new(x.translation, self.w.mul(x.finite, self.w.simple(i))),
            None => ExtAffineElement::new(
                x.translation + self.w.act(x.finite, &self.theta),
                self.w.mul(x.finite, self.s_theta),
            ),
        }
    }

    /// Iwahori–Matsumoto length.
    pub fn length(&self, x: &ExtAffineElement) -> u32 {
        let mut total = 0u64;
        for (a, root) in self.rd.positive_roots().iter().enumerate() {
            let p = self.rd.pair(&x.translation, &root.coroot);
            let v = if self.w.inverse_keeps_positive(x.finite, a) {
                p.unsigned_abs()
            } else {
                (p - 1).unsigned_abs()
            };
            total += v;
        }
        total as u32
    }

    pub fn is_right_descent(&self, x: &ExtAffineElement, s: AffineGen) -> bool {
        self.length(&self.mul_gen(x, s)) < self.length(x)
    }

    pub fn right_descents(&self, x: &ExtAffineElement) -> Vec<AffineGen> {
        self.generators()
            .into_iter()
            .filter(|&s| self.is_right_descent(x, s))
            .collect()
    }

    /// `x = π · s_{i1} ⋯ s_{ik}`, memoized.
    pub fn decompose(&self, x: &ExtAffineElement) -> Arc<Decomposition> {
        if let Some(d) = self.decompositions.read().unwrap().get(x) {
            return d.clone();
        }
        let mut y = *x;
        let mut rev = vec![];
        let mut len = self.length(&y);
        while len > 0 {
            let s = self
                .generators()
                .into_iter()
                .find(|&s| self.length(&self.mul_gen(&y, s)) < len)
                .expect("positive length element has a descent");
            rev.push(s);
            y = self.mul_gen(&y, s);
            len -= 1;
        }
        rev.reverse();
        let d = Arc::new(Decomposition {
            omega: y,
            word: rev,
        });
        self.decompositions.write().unwrap().insert(*x, d.clone());
        d
    }

    pub fn from_decomposition(&self, d: &Decomposition) -> ExtAffineElement {
        d.word.iter().fold(d.omega, |acc, &s| self.mul_gen(&acc, s))
    }

    /// `Λ/Q` label of `x`: elements are comparable in Bruhat or semi-infinite
    /// order only within one label.
    pub fn omega_component(&self, x: &ExtAffineElement) -> crate::rootdata::OmegaClass {
        self.rd.omega_class(&x.translation)
    }

    pub fn bruhat_leq(&self, u: &ExtAffineElement, w: &ExtAffineElement) -> bool {
        if self.omega_component(u) != self.omega_component(w) {
            return false;
        }
        let mut u = *u;
        let mut w = *w;
        loop {
            let lw = self.length(&w);
            let lu = self.length(&u);
            if lu > lw {
                return false;
            }
            if lw == 0 {
                return u == w;
            }
            if lu == 0 {
                // u is the Ω-part of its component; everything above it qualifies
                return self.decompose(&w).omega == u;
            }
            let s = self
                .generators()
                .into_iter()
                .find(|&s| self.is_right_descent(&w, s))
                .unwrap();
            let us = self.mul_gen(&u, s);
            if self.length(&us) < lu {
                u = us;
            }
            w = self.mul_gen(&w, s);
        }
    }

    /// `t(λ)w •_n μ = nλ + w(μ + ρ) − ρ`.
    pub fn dot(&self, x: &ExtAffineElement, mu: &Weight, n: i64) -> Weight {
        let rho = self.rd.rho();
        x.translation.scale(n) + self.w.act(x.finite, &(*mu + rho)) - rho
    }

    /// Converts `w t(ν)` to the stored normal form `t(wν)w`.
    pub fn from_finite_then_translation(&self, w: FiniteElement, nu: &Weight) -> ExtAffineElement {
        ExtAffineElement::new(self.w.act(w, nu), w)
    }

    pub fn longest_element(&self) -> ExtAffineElement {
        self.finite(self.w.longest())
    }

    /// All elements of length at most `max_len`, sorted.
    pub fn ball(&self, max_len: u32) -> Vec<ExtAffineElement> {
        let mut seen: HashSet<ExtAffineElement> = self.omega.iter().copied().collect();
        let mut frontier: Vec<ExtAffineElement> = self.omega.clone();
        for _ in 0..max_len {
            let mut next = vec![];
            for x in &frontier {
                for s in self.generators() {
                    let y = self.mul_gen(x, s);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// All `t(λ)w` with every fundamental coordinate of `λ` in `[-h, h]`.
    pub fn window(&self, height: u64) -> Vec<ExtAffineElement> {
        let mut out: Vec<_> = weights_in_box(self.rank(), height as i64)
            .into_iter()
            .flat_map(|lam| {
                self.w
                    .elements()
                    .map(move |w| ExtAffineElement::new(lam, w))
            })
            .collect();
        out.sort();
        out
    }
}

/// All weights with coordinates in `[-h, h]`, lexicographically sorted.
pub fn weights_in_box(rank: usize, h: i64) -> Vec<Weight> {
    let mut out = vec![];
    let mut c = vec![-h; rank];
    loop {
        out.push(Weight::new(&c));
        let mut k = rank;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            c[k] += 1;
            if c[k] <= h {
                break;
            }
            c[k] = -h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    fn group(f: Family, r: usize, l: u64) -> AffineWeylGroup {
        AffineWeylGroup::new(Arc::new(RootDatum::from_parts(f, r, l).unwrap()))
    }

    fn all_groups() -> Vec<AffineWeylGroup> {
        vec![
            group(Family::A, 1, 3),
            group(Family::A, 2, 5),
            group(Family::A, 3, 5),
            group(Family::B, 2, 5),
            group(Family::C, 2, 5),
            group(Family::G, 2, 7),
        ]
    }

    /// Shortest-word lengths by BFS over `Ω × generators`.
    fn bfs_lengths(g: &AffineWeylGroup, max_len: u32) -> HashMap<ExtAffineElement, u32> {
        let mut dist: HashMap<_, _> = g.omega_elements().iter().map(|&x| (x, 0)).collect();
        let mut frontier: Vec<_> = g.omega_elements().to_vec();
        for d in 1..=max_len {
            let mut next = vec![];
            for x in &frontier {
                for s in g.generators() {
                    let y = g.mul_gen(x, s);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                        e.insert(d);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    #[test]
    fn finite_orders_and_longest() {
        let expected = [(2, 1), (6, 3), (24, 6), (8, 4), (8, 4), (12, 6)];
        for (g, (order, l0)) in all_groups().iter().zip(expected) {
            let w = g.finite_group();
            assert_eq!(w.order(), order);
            assert_eq!(w.length(w.longest()), l0);
            assert_eq!(l0 as usize, g.root_datum().positive_roots().len());
            assert_eq!(g.length(&g.longest_element()), l0);
        }
        let a2 = group(Family::A, 2, 5);
        let w0 = a2.finite_group().longest();
        assert_eq!(a2.finite_group().word(w0).len(), 3);
    }

    #[test]
    fn multiply_examples() {
        let a1 = group(Family::A, 1, 3);
        let alpha = a1.root_datum().simple_root(0);
        let e = a1.identity();
        let t = a1.translation(alpha);
        assert_eq!(a1.multiply(&t, &a1.translation(-alpha)).unwrap(), e);
        let s = a1.generator(AffineGen::finite(0));
        assert_eq!(a1.mul(&s, &s), e);
        let ts = a1.mul(&t, &s);
        assert_eq!(ts.translation, alpha);
        assert_eq!(ts.finite, s.finite);
        let a2 = group(Family::A, 2, 5);
        assert!(a1.multiply(&a2.identity(), &e).is_err());
    }

    #[test]
    fn length_examples() {
        let a1 = group(Family::A, 1, 3);
        let alpha = a1.root_datum().simple_root(0);
        assert_eq!(a1.length(&a1.identity()), 0);
        assert_eq!(a1.length(&a1.translation(alpha)), 2);
        assert_eq!(a1.length(&a1.generator(AffineGen::finite(0))), 1);
        assert_eq!(a1.length(&a1.generator(AffineGen::S0)), 1);
    }

    #[test]
    fn length_matches_word_search() {
        for g in all_groups() {
            let max = if g.rank() > 2 { 4 } else { 6 };
            let dist = bfs_lengths(&g, max);
            for (x, d) in &dist {
                assert_eq!(g.length(x), *d, "{x:?} in {g:?}");
                for s in g.generators() {
                    let ls = g.length(&g.mul_gen(x, s));
                    assert!(ls == d + 1 || ls + 1 == *d);
                }
            }
        }
    }

    #[test]
    fn omega_is_length_zero_and_closed() {
        for g in all_groups() {
            let om = g.omega_elements();
            for x in om {
                for y in om {
                    let z = g.mul(x, y);
                    assert_eq!(g.length(&z), 0);
                    assert!(om.contains(&z));
                }
            }
            let classes: HashSet<_> = om.iter().map(|x| g.omega_component(x)).collect();
            assert_eq!(classes.len(), om.len());
        }
    }

    #[test]
    fn decomposition_roundtrip_and_reduced() {
        for g in all_groups() {
            for x in g.window(1) {
                let d = g.decompose(&x);
                assert_eq!(g.from_decomposition(&d), x);
                assert_eq!(d.word.len() as u32, g.length(&x));
                assert_eq!(g.length(&d.omega), 0);
            }
        }
    }

    #[test]
    fn subadditivity() {
        let g = group(Family::B, 2, 5);
        let xs = g.ball(3);
        for x in xs.iter().step_by(7) {
            for y in xs.iter().step_by(5) {
                let z = g.mul(x, y);
                let lz = g.length(&z);
                assert!(lz <= g.length(x) + g.length(y));
                if lz == g.length(x) + g.length(y) {
                    assert_eq!(g.length(&g.mul(&z, &g.inverse(y))), g.length(x));
                }
            }
        }
    }

    /// Subword oracle: all elements obtainable from a reduced word of `w`
    /// by deleting letters.
    fn subword_set(g: &AffineWeylGroup, w: &ExtAffineElement) -> HashSet<ExtAffineElement> {
        let d = g.decompose(w);
        let mut set = HashSet::from([d.omega]);
        for &s in &d.word {
            let extended: Vec<_> = set.iter().map(|x| g.mul_gen(x, s)).collect();
            set.extend(extended);
        }
        set
    }

    #[test]
    fn bruhat_matches_subwords() {
        for g in [
            group(Family::A, 1, 3),
            group(Family::A, 2, 5),
            group(Family::B, 2, 5),
            group(Family::G, 2, 7),
        ] {
            let max = if g.finite_group().order() > 8 { 4 } else { 5 };
            let elems = g.ball(max);
            for w in &elems {
                let below = subword_set(&g, w);
                for u in &elems {
                    assert_eq!(g.bruhat_leq(u, w), below.contains(u), "{u:?} <= {w:?}");
                }
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let a1 = group(Family::A, 1, 3);
        let t = a1.translation(a1.root_datum().simple_root(0));
        let s = a1.generator(AffineGen::finite(0));
        assert!(a1.bruhat_leq(&t, &t));
        assert!(a1.bruhat_leq(&a1.identity(), &t));
        assert!(a1.bruhat_leq(&s, &t));
        let w = a1.translation(a1.root_datum().fundamental_weight(0));
        assert!(!a1.bruhat_leq(&a1.identity(), &w));
    }

    #[test]
    fn dot_examples() {
        let a1 = group(Family::A, 1, 3);
        let alpha = a1.root_datum().simple_root(0);
        let zero = Weight::zero(1);
        assert_eq!(a1.dot(&a1.identity(), &zero, 3), zero);
        assert_eq!(a1.dot(&a1.translation(alpha), &zero, 3), alpha.scale(3));
        for n in [1, 3, 5] {
            assert_eq!(
                a1.dot(&a1.generator(AffineGen::finite(0)), &zero, n),
                -alpha
            );
        }
    }

    #[test]
    fn dot_is_an_action() {
        for g in all_groups() {
            let elems = g.window(1);
            for (i, x) in elems.iter().enumerate().step_by(3) {
                let y = &elems[(i * 7 + 3) % elems.len()];
                let mu = elems[(i * 5 + 1) % elems.len()].translation;
                for n in [1, 5] {
                    let lhs = g.dot(&g.mul(x, y), &mu, n);
                    let rhs = g.dot(x, &g.dot(y, &mu, n), n);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn wt_nu_normal_form() {
        let a2 = group(Family::A, 2, 5);
        let w = a2.finite_group().from_word(&[0, 1]);
        let nu = Weight::new(&[1, -2]);
        let x = a2.from_finite_then_translation(w, &nu);
        assert_eq!(x, a2.mul(&a2.finite(w), &a2.translation(nu)));
    }
}
