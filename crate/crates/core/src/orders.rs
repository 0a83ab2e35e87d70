//! The semi-infinite order on `W_ex`.
//!
//! Locally, `xs < x` whenever `xs •_l 0 < x •_l 0` for a simple affine
//! reflection `s`. The order itself is generated by `rx < x` for every affine
//! reflection `r` with `rx •_l 0 < x •_l 0`; closing up only the simple steps
//! gives a strictly smaller relation from rank 2 on, which does not agree with
//! the Bruhat order on dominant alcoves.
//!
//! The dot image is strictly decreasing along chains, so `x ≤ y` is decided
//! exactly by a downward search from `y` confined to
//! `{z : x•0 ≤ z•0 ≤ y•0}`, which is finite.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::Weight;
use crate::weyl::{AffineGen, AffineWeylGroup, ExtAffineElement};

/// A finite set of elements: all `t(λ)w` with `|λ_i| ≤ height`, optionally
/// restricted to one coset of `Λ/Q` (given by a representative weight).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub height: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset: Option<Vec<i64>>,
}

impl Window {
    pub fn new(height: u64) -> Self {
        Window {
            height,
            coset: None,
        }
    }

    pub fn with_coset(height: u64, rep: &Weight) -> Self {
        Window {
            height,
            coset: Some(rep.coords().to_vec()),
        }
    }

    pub fn contains(&self, g: &AffineWeylGroup, x: &ExtAffineElement) -> bool {
        x.translation.height() <= self.height
            && self
                .coset
                .as_ref()
                .is_none_or(|c| g.root_datum().omega_class(&Weight::new(c)) == g.omega_component(x))
    }

    pub fn elements(&self, g: &AffineWeylGroup) -> Vec<ExtAffineElement> {
        g.window(self.height)
            .into_iter()
            .filter(|x| self.contains(g, x))
            .collect()
    }

    pub fn check(&self, g: &AffineWeylGroup) -> Result<()> {
        match &self.coset {
            Some(c) if c.len() != g.rank() => Err(Error::input(format!(
                "coset representative has {} coordinates, expected {}",
                c.len(),
                g.rank()
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiInfOutcome {
    Leq,
    NotLeq,
    /// The search left the window before it could rule the relation out.
    Indeterminate,
    /// The elements lie in different `Λ/Q`-cosets, where the order is not
    /// defined.
    DifferentCosets,
}

/// `xs < x` in the generating relation, decided with `•_l`.
pub fn is_cover_below(g: &AffineWeylGroup, x: &ExtAffineElement, s: AffineGen) -> bool {
    let rd = g.root_datum();
    let l = rd.l() as i64;
    let zero = Weight::zero(g.rank());
    let xs = g.mul_gen(x, s);
    let hi = g.dot(x, &zero, l);
    let lo = g.dot(&xs, &zero, l);
    hi != lo && rd.dominance_leq(&lo, &hi)
}

/// All `(s, xs)` with `xs` a generating cover below `x`.
pub fn covers_below(
    g: &AffineWeylGroup,
    x: &ExtAffineElement,
) -> Vec<(AffineGen, ExtAffineElement)> {
    g.generators()
        .into_iter()
        .filter(|&s| is_cover_below(g, x, s))
        .map(|s| (s, g.mul_gen(x, s)))
        .collect()
}

fn dot0(g: &AffineWeylGroup, x: &ExtAffineElement) -> Weight {
    g.dot(x, &Weight::zero(g.rank()), g.root_datum().l() as i64)
}

/// Reflection steps `rz < z` whose dot image stays within `slack` of `z•0`
/// (root coordinates of `z•0 − rz•0` bounded componentwise by `slack`).
pub fn reflection_steps_below(
    g: &AffineWeylGroup,
    z: &ExtAffineElement,
    slack: &[i64],
) -> Vec<ExtAffineElement> {
    let rd = g.root_datum();
    let l = rd.l() as i64;
    let shifted = dot0(g, z) + rd.rho();
    let mut out = vec![];
    for (a, root) in rd.positive_roots().iter().enumerate() {
        // r_{α,k} moves z•0 down by c·α with c = <z•0+ρ, α^vee> − lk > 0
        let cmax = root
            .root_coords
            .iter()
            .zip(slack)
            .filter(|(r, _)| **r > 0)
            .map(|(r, s)| s.div_euclid(*r))
            .min()
            .unwrap_or(0);
        let p = rd.pair(&shifted, &root.coroot);
        let mut c = p.rem_euclid(l);
        if c == 0 {
            c = l;
        }
        while c <= cmax {
            let k = (p - c) / l;
            out.push(g.mul(&g.affine_reflection(a, k), z));
            c += l;
        }
    }
    out
}

/// Downward closure of `y` under reflection steps, restricted to elements
/// whose dot image lies in the box `0 ≤ y•0 − z•0 ≤ bound` (root coordinates)
/// and is accepted by `admit`.
fn search_down(
    g: &AffineWeylGroup,
    y: &ExtAffineElement,
    bound: &[i64],
    mut admit: impl FnMut(&ExtAffineElement) -> bool,
    mut stop: impl FnMut(&ExtAffineElement) -> bool,
) -> (HashSet<ExtAffineElement>, bool) {
    let rd = g.root_datum();
    let top = dot0(g, y);
    let mut seen = HashSet::from([*y]);
    let mut queue = VecDeque::from([*y]);
    if stop(y) {
        return (seen, true);
    }
    while let Some(z) = queue.pop_front() {
        let used = rd.root_coords(&(top - dot0(g, &z))).unwrap();
        let slack: Vec<i64> = bound.iter().zip(&used).map(|(b, u)| b - u).collect();
        for zs in reflection_steps_below(g, &z, &slack) {
            if seen.contains(&zs) || !admit(&zs) {
                continue;
            }
            seen.insert(zs);
            if stop(&zs) {
                return (seen, true);
            }
            queue.push_back(zs);
        }
    }
    (seen, false)
}

/// Exact `x ≤^{∞/2} y`; false across cosets.
pub fn semiinf_leq(g: &AffineWeylGroup, x: &ExtAffineElement, y: &ExtAffineElement) -> bool {
    if g.omega_component(x) != g.omega_component(y) {
        return false;
    }
    if x == y {
        return true;
    }
    let Some(bound) = gap(g, x, y) else {
        return false;
    };
    search_down(g, y, &bound, |_| true, |z| z == x).1
}

/// Root coordinates of `y•0 − x•0` when they are all nonnegative.
fn gap(g: &AffineWeylGroup, x: &ExtAffineElement, y: &ExtAffineElement) -> Option<Vec<i64>> {
    g.root_datum()
        .root_coords(&(dot0(g, y) - dot0(g, x)))
        .filter(|a| a.iter().all(|&c| c >= 0))
}

/// `x ≤^{∞/2} y` through the transitive closure of covers inside `window`.
pub fn semiinf_leq_generated(
    g: &AffineWeylGroup,
    x: &ExtAffineElement,
    y: &ExtAffineElement,
    window: &Window,
) -> SemiInfOutcome {
    if g.omega_component(x) != g.omega_component(y) {
        return SemiInfOutcome::DifferentCosets;
    }
    if x == y {
        return SemiInfOutcome::Leq;
    }
    let Some(bound) = gap(g, x, y) else {
        return SemiInfOutcome::NotLeq;
    };
    let mut escaped = false;
    let (_, found) = search_down(
        g,
        y,
        &bound,
        |z| {
            if window.contains(g, z) {
                true
            } else {
                escaped = true;
                false
            }
        },
        |z| z == x,
    );
    match (found, escaped) {
        (true, _) => SemiInfOutcome::Leq,
        (false, false) => SemiInfOutcome::NotLeq,
        (false, true) => SemiInfOutcome::Indeterminate,
    }
}

/// Why `x` does not map the fundamental alcove into the dominant chamber,
/// if it does not.
pub fn alcove_dominance_violation(g: &AffineWeylGroup, x: &ExtAffineElement) -> Option<String> {
    let w = g.finite_group();
    let winv = w.inverse(x.finite);
    for i in 0..g.rank() {
        // sign of w^{-1} α_i decides whether the alcove touches the wall from above
        let img = w.act(winv, &g.root_datum().simple_root(i));
        let positive = g
            .root_datum()
            .root_coords(&img)
            .is_some_and(|a| a.iter().all(|&c| c >= 0));
        let need = if positive { 0 } else { 1 };
        if x.translation[i] < need {
            return Some(format!(
                "<lambda, alpha_{}^vee> = {} but the alcove needs at least {need}",
                i + 1,
                x.translation[i]
            ));
        }
    }
    None
}

/// `N·ρ` with `N` two more than the largest translation coordinate among `xs`.
pub fn sufficiently_dominant(g: &AffineWeylGroup, xs: &[ExtAffineElement]) -> Weight {
    let h = xs.iter().map(|x| x.translation.height()).max().unwrap_or(0);
    g.root_datum().rho().scale(h as i64 + 2)
}

/// `x ≤^{∞/2} y` as Bruhat order between `t(μ)x` and `t(μ)y`.
pub fn semiinf_leq_via_translation(
    g: &AffineWeylGroup,
    x: &ExtAffineElement,
    y: &ExtAffineElement,
    mu: &Weight,
) -> Result<bool> {
    let rd = g.root_datum();
    if !rd.is_dominant(mu) {
        return Err(Error::input(format!("mu = {mu} is not dominant")));
    }
    let tx = g.mul(&g.translation(*mu), x);
    let ty = g.mul(&g.translation(*mu), y);
    for z in [&tx, &ty] {
        if let Some(why) = alcove_dominance_violation(g, z) {
            return Err(Error::input(format!(
                "mu = {mu} is not dominant enough for {z:?}: {why}"
            )));
        }
    }
    Ok(g.bruhat_leq(&tx, &ty))
}

/// The order restricted to a window, with its Hasse diagram.
#[derive(Clone, Debug)]
pub struct SemiInfinitePoset {
    pub elements: Vec<ExtAffineElement>,
    /// `relation[i][j]` iff `elements[i] ≤ elements[j]`.
    pub relation: Vec<Vec<bool>>,
}

impl SemiInfinitePoset {
    pub fn build(g: &AffineWeylGroup, window: &Window) -> Self {
        let elements = window.elements(g);
        let rd = g.root_datum();
        let dots: Vec<Weight> = elements.iter().map(|x| dot0(g, x)).collect();
        let n = elements.len();
        let mut relation = vec![vec![false; n]; n];
        for j in 0..n {
            let top = dots[j];
            let comp = g.omega_component(&elements[j]);
            let targets: Vec<usize> = (0..n)
                .filter(|&i| {
                    g.omega_component(&elements[i]) == comp && rd.dominance_leq(&dots[i], &top)
                })
                .collect();
            // root-coordinate box that every chain from y to a target stays in
            let mut bound = vec![0i64; g.rank()];
            for &i in &targets {
                let a = rd.root_coords(&(top - dots[i])).unwrap();
                for (b, v) in bound.iter_mut().zip(a) {
                    *b = (*b).max(v);
                }
            }
            let (seen, _) = search_down(g, &elements[j], &bound, |_| true, |_| false);
            for &i in &targets {
                relation[i][j] = seen.contains(&elements[i]);
            }
        }
        SemiInfinitePoset { elements, relation }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.relation[i][j]
    }

    /// Cover pairs `(i, j)` with `elements[i] < elements[j]` and nothing of
    /// the window strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        let mut edges = vec![];
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.relation[i][j] {
                    continue;
                }
                let between =
                    (0..n).any(|k| k != i && k != j && self.relation[i][k] && self.relation[k][j]);
                if !between {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let n = self.elements.len();
        for i in 0..n {
            if !self.relation[i][i] {
                return false;
            }
            for j in 0..n {
                if i != j && self.relation[i][j] && self.relation[j][i] {
                    return false;
                }
                if self.relation[i][j]
                    && (0..n).any(|k| self.relation[j][k] && !self.relation[i][k])
                {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Family, RootDatum};
    use std::sync::Arc;

    fn group(f: Family, r: usize, l: u64) -> AffineWeylGroup {
        AffineWeylGroup::new(Arc::new(RootDatum::from_parts(f, r, l).unwrap()))
    }

    #[test]
    fn examples() {
        let g = group(Family::A, 1, 3);
        let e = g.identity();
        let s = g.generator(AffineGen::finite(0));
        let alpha = g.root_datum().simple_root(0);
        let t = g.translation(-alpha);
        let w = Window::new(2);
        assert_eq!(semiinf_leq_generated(&g, &e, &e, &w), SemiInfOutcome::Leq);
        assert_eq!(semiinf_leq_generated(&g, &s, &e, &w), SemiInfOutcome::Leq);
        assert_eq!(semiinf_leq_generated(&g, &t, &e, &w), SemiInfOutcome::Leq);
        assert_eq!(
            semiinf_leq_generated(&g, &e, &s, &w),
            SemiInfOutcome::NotLeq
        );
        let mu = alpha.scale(3);
        assert!(semiinf_leq_via_translation(&g, &e, &e, &mu).unwrap());
        assert!(semiinf_leq_via_translation(&g, &t, &e, &mu).unwrap());
        assert!(!semiinf_leq_via_translation(&g, &e, &s, &mu).unwrap());
        let om = g.translation(g.root_datum().fundamental_weight(0));
        assert_eq!(
            semiinf_leq_generated(&g, &om, &e, &w),
            SemiInfOutcome::DifferentCosets
        );
    }

    #[test]
    fn not_dominant_enough() {
        let g = group(Family::A, 1, 3);
        let s = g.generator(AffineGen::finite(0));
        let err = semiinf_leq_via_translation(&g, &s, &g.identity(), &Weight::zero(1)).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(semiinf_leq_via_translation(&g, &s, &s, &Weight::new(&[-1])).is_err());
    }

    #[test]
    fn a1_is_a_chain_per_coset() {
        // ... > t(2ϖ) > t(2ϖ)s > e > s > t(-2ϖ) > ...
        let g = group(Family::A, 1, 3);
        let elems = Window::new(3).elements(&g);
        let p = SemiInfinitePoset::build(&g, &Window::new(3));
        assert!(p.is_partial_order());
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                if g.omega_component(x) == g.omega_component(y) {
                    assert!(p.leq(i, j) || p.leq(j, i));
                } else {
                    assert!(!p.leq(i, j));
                }
            }
        }
        assert_eq!(p.hasse_edges().len(), elems.len() - 2);
    }

    #[test]
    fn translation_invariance() {
        let g = group(Family::A, 2, 5);
        let elems = Window::new(1).elements(&g);
        let nu = g.translation(Weight::new(&[2, -1]));
        for x in elems.iter().step_by(5) {
            for y in elems.iter().step_by(3) {
                assert_eq!(
                    semiinf_leq(&g, x, y),
                    semiinf_leq(&g, &g.mul(&nu, x), &g.mul(&nu, y))
                );
            }
        }
    }

    #[test]
    fn generated_matches_translated_bruhat() {
        for (g, h) in [
            (group(Family::A, 1, 3), 3),
            (group(Family::A, 2, 5), 1),
            (group(Family::B, 2, 5), 1),
            (group(Family::C, 2, 5), 1),
            (group(Family::G, 2, 7), 1),
        ] {
            let window = Window::new(h);
            let p = SemiInfinitePoset::build(&g, &window);
            assert!(p.is_partial_order());
            let mu = sufficiently_dominant(&g, &p.elements);
            for (i, x) in p.elements.iter().enumerate() {
                for (j, y) in p.elements.iter().enumerate() {
                    let via = semiinf_leq_via_translation(&g, x, y, &mu).unwrap();
                    assert_eq!(p.leq(i, j), via, "{x:?} vs {y:?} in {g:?}");
                    assert_eq!(semiinf_leq(&g, x, y), via);
                }
            }
        }
    }
}
