//! Root data of simply-connected semisimple groups.
//!
//! Weights are stored in fundamental-weight coordinates, so the pairing of a
//! weight with a simple coroot is just a coordinate. Roots are carried both in
//! fundamental-weight coordinates and in simple-root coordinates; coroots are
//! carried in simple-coroot coordinates.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 4;

/// An element of the weight lattice, in fundamental-weight coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    rank: u8,
    c: [i64; MAX_RANK],
}

impl Weight {
    pub fn new(coords: &[i64]) -> Self {
        assert!(
            coords.len() <= MAX_RANK,
            "rank {} exceeds {MAX_RANK}",
            coords.len()
        );
        let mut c = [0; MAX_RANK];
        c[..coords.len()].copy_from_slice(coords);
        Weight {
            rank: coords.len() as u8,
            c,
        }
    }

    pub fn zero(rank: usize) -> Self {
        Weight::new(&vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.rank as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x *= k;
        }
        out
    }

    /// Max-norm of the coordinates.
    pub fn height(&self) -> u64 {
        self.coords()
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Exact division of every coordinate, if possible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if self.coords().iter().any(|x| x % k != 0) {
            return None;
        }
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x /= k;
        }
        Some(out)
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.coords()[i]
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..MAX_RANK {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..MAX_RANK {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{self}")
    }
}

/// A coroot, in simple-coroot coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coroot(pub Vec<i64>);

/// Class of a weight in `Lambda / Q`.
///
/// Encoded as `adj(A) * lambda mod e`, which is a complete invariant of the
/// coset because `adj(A) * A = e * I`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OmegaClass([i64; MAX_RANK]);

impl OmegaClass {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(Error::parse(format!("unknown Cartan type `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Self {
        CartanType { family, rank }
    }

    /// `A[i][j] = <alpha_i^vee, alpha_j>`. Long roots come first in B2,
    /// short roots first in C2 and G2.
    fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank;
        let unsupported = || {
            Error::input(format!(
                "unsupported Cartan type {self}; supported: A1, A2, A3, B2, C2, G2"
            ))
        };
        let m = match (self.family, n) {
            (Family::A, 1..=3) => (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match i.abs_diff(j) {
                            0 => 2,
                            1 => -1,
                            _ => 0,
                        })
                        .collect()
                })
                .collect(),
            (Family::B, 2) => vec![vec![2, -1], vec![-2, 2]],
            (Family::C, 2) => vec![vec![2, -2], vec![-1, 2]],
            (Family::G, 2) => vec![vec![2, -3], vec![-1, 2]],
            _ => return Err(unsupported()),
        };
        Ok(m)
    }
}

/// A positive root with its coroot.
#[derive(Clone, Debug)]
pub struct PositiveRoot {
    /// Fundamental-weight coordinates.
    pub weight: Weight,
    /// Simple-root coordinates.
    pub root_coords: Vec<i64>,
    /// Simple-coroot coordinates of the coroot.
    pub coroot: Coroot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LViolation {
    Even,
    NotAboveCoxeterNumber { coxeter_number: u64 },
    NotCoprimeToLatticeIndex { e: u64 },
    NotCoprimeToThree,
}

impl fmt::Display for LViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LViolation::Even => f.write_str("l is even"),
            LViolation::NotAboveCoxeterNumber { coxeter_number } => {
                write!(
                    f,
                    "l is not larger than the Coxeter number {coxeter_number}"
                )
            }
            LViolation::NotCoprimeToLatticeIndex { e } => {
                write!(f, "l is not coprime to |Lambda/Q| = {e}")
            }
            LViolation::NotCoprimeToThree => f.write_str("l is divisible by 3 in type G2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LWarning {
    NotPrimePower,
}

impl fmt::Display for LWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LWarning::NotPrimePower => f.write_str("l is not a prime power"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LReport {
    pub violations: Vec<LViolation>,
    pub warnings: Vec<LWarning>,
}

impl LReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Immutable root system context together with the order `l`.
#[derive(Clone, Debug)]
pub struct RootDatum {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    /// Symmetrizing integers `d_s`.
    d: Vec<i64>,
    /// `|Lambda/Q| = det(A)`.
    e: i64,
    /// Adjugate of the Cartan matrix.
    adj: Vec<Vec<i64>>,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<PositiveRoot>,
    rho: Weight,
    /// Index of the root whose coroot is the highest coroot.
    theta: usize,
    l: u64,
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            // transpose of the cofactor matrix
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    let mut m = n;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

impl RootDatum {
    pub fn new(cartan_type: CartanType, l: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::input("l must be positive"));
        }
        let cartan = cartan_type.cartan_matrix()?;
        let n = cartan_type.rank;
        let d = symmetrizer(&cartan)?;
        let e = det(&cartan);
        let adj = adjugate(&cartan);
        let simple_roots: Vec<Weight> = (0..n)
            .map(|j| Weight::new(&(0..n).map(|k| cartan[k][j]).collect::<Vec<_>>()))
            .collect();

        let positive_roots = enumerate_positive_roots(&cartan);
        let theta = (0..positive_roots.len())
            .max_by_key(|&i| positive_roots[i].coroot.0.iter().sum::<i64>())
            .expect("nonempty root system");

        Ok(RootDatum {
            cartan_type,
            cartan,
            d,
            e,
            adj,
            simple_roots,
            positive_roots,
            rho: Weight::new(&vec![1; n]),
            theta,
            l,
        })
    }

    pub fn from_parts(family: Family, rank: usize, l: u64) -> Result<Self> {
        RootDatum::new(CartanType::new(family, rank), l)
    }

    /// Parse a plain-text `key = value` description with keys `type`,
    /// `rank` and `l`. Lines starting with `#` are ignored; values may be
    /// quoted.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut family = None;
        let mut rank = None;
        let mut l = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let value = value.trim().trim_matches('"');
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::parse(format!("line {}: bad number `{v}`", lineno + 1)))
            };
            match key.trim() {
                "type" => family = Some(value.parse::<Family>()?),
                "rank" => rank = Some(num(value)? as usize),
                "l" => l = Some(num(value)?),
                other => {
                    return Err(Error::parse(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        let family = family.ok_or_else(|| Error::parse("missing `type`"))?;
        let rank = rank.ok_or_else(|| Error::parse("missing `rank`"))?;
        let l = l.ok_or_else(|| Error::parse("missing `l`"))?;
        RootDatum::from_parts(family, rank, l)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Same root system with a different `l`.
    pub fn with_l(&self, l: u64) -> Result<Self> {
        RootDatum::new(self.cartan_type, l)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    pub fn lattice_index(&self) -> u64 {
        self.e as u64
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        self.simple_roots[i]
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn simple_coroot(&self, i: usize) -> Coroot {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Coroot(c)
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.positive_roots
    }

    pub fn rho(&self) -> Weight {
        self.rho
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Weight::new(&c)
    }

    /// The root whose coroot is the highest coroot; it defines the affine wall
    /// of the fundamental alcove `<v, theta^vee> = 1`.
    pub fn theta(&self) -> &PositiveRoot {
        &self.positive_roots[self.theta]
    }

    pub fn coxeter_number(&self) -> u64 {
        (2 * self.positive_roots.len() / self.rank()) as u64
    }

    pub fn fundamental_weights(&self) -> Vec<Weight> {
        (0..self.rank())
            .map(|i| self.fundamental_weight(i))
            .collect()
    }

    /// `<lambda, coroot>`.
    pub fn pairing(&self, lam: &Weight, coroot: &Coroot) -> Result<i64> {
        if lam.rank() != self.rank() || coroot.0.len() != self.rank() {
            return Err(Error::input(format!(
                "dimension mismatch: weight of rank {}, coroot of rank {}, datum of rank {}",
                lam.rank(),
                coroot.0.len(),
                self.rank()
            )));
        }
        Ok(self.pair(lam, coroot))
    }

    pub(crate) fn pair(&self, lam: &Weight, coroot: &Coroot) -> i64 {
        lam.coords().iter().zip(&coroot.0).map(|(a, b)| a * b).sum()
    }

    /// Simple-root coordinates of a weight, or `None` off the root lattice.
    pub fn root_coords(&self, lam: &Weight) -> Option<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let num: i64 = (0..n).map(|j| self.adj[i][j] * lam[j]).sum();
                (num % self.e == 0).then(|| num / self.e)
            })
            .collect()
    }

    /// Fundamental-weight coordinates of `sum_i a_i alpha_i`.
    pub fn from_root_coords(&self, a: &[i64]) -> Weight {
        let n = self.rank();
        Weight::new(
            &(0..n)
                .map(|k| (0..n).map(|j| self.cartan[k][j] * a[j]).sum())
                .collect::<Vec<_>>(),
        )
    }

    pub fn in_root_lattice(&self, lam: &Weight) -> bool {
        self.root_coords(lam).is_some()
    }

    /// Sum of the simple-root coordinates of an element of `Q`.
    pub fn root_height(&self, lam: &Weight) -> Option<i64> {
        self.root_coords(lam).map(|a| a.iter().sum())
    }

    /// `mu <= lam` iff `lam - mu` is a non-negative integer combination of
    /// simple roots.
    pub fn dominance_leq(&self, mu: &Weight, lam: &Weight) -> bool {
        self.root_coords(&(*lam - *mu))
            .is_some_and(|a| a.iter().all(|&x| x >= 0))
    }

    pub fn omega_class(&self, lam: &Weight) -> OmegaClass {
        let n = self.rank();
        let mut c = [0; MAX_RANK];
        for (i, slot) in c.iter_mut().enumerate().take(n) {
            let num: i64 = (0..n).map(|j| self.adj[i][j] * lam[j]).sum();
            *slot = num.rem_euclid(self.e);
        }
        OmegaClass(c)
    }

    pub fn is_dominant(&self, lam: &Weight) -> bool {
        lam.coords().iter().all(|&x| x >= 0)
    }

    /// The symmetric form `(alpha_s, alpha_t) = d_s <alpha_s^vee, alpha_t>`
    /// on simple roots.
    pub fn root_pairing_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|s| (0..n).map(|t| self.d[s] * self.cartan[s][t]).collect())
            .collect()
    }

    /// `e * (varpi_i, varpi_j)`, the form on `Lambda` scaled to be integral.
    pub fn scaled_weight_pairing_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.adj[j][i] * self.d[j]).collect())
            .collect()
    }

    /// `e * (lam, mu)`.
    pub fn scaled_weight_pairing(&self, lam: &Weight, mu: &Weight) -> i64 {
        let m = self.scaled_weight_pairing_matrix();
        let n = self.rank();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| lam[i] * m[i][j] * mu[j])
            .sum()
    }

    pub fn validate_l(&self) -> LReport {
        let mut report = LReport::default();
        let l = self.l;
        if l.is_multiple_of(2) {
            report.violations.push(LViolation::Even);
        }
        let h = self.coxeter_number();
        if l <= h {
            report
                .violations
                .push(LViolation::NotAboveCoxeterNumber { coxeter_number: h });
        }
        let e = self.lattice_index();
        if gcd(l, e) != 1 {
            report
                .violations
                .push(LViolation::NotCoprimeToLatticeIndex { e });
        }
        if self.cartan_type.family == Family::G && l.is_multiple_of(3) {
            report.violations.push(LViolation::NotCoprimeToThree);
        }
        if !is_prime_power(l) {
            report.warnings.push(LWarning::NotPrimePower);
        }
        report
    }
}

/// Smallest coprime positive `d` with `d_s A[s][t]` symmetric.
fn symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = a.len();
    // Connected diagrams: propagate ratios along the path 0 - 1 - 2 ...
    let mut num = vec![1i64; n];
    let mut den = vec![1i64; n];
    for t in 1..n {
        let s = (0..t)
            .find(|&s| a[s][t] != 0)
            .ok_or_else(|| Error::input("disconnected Dynkin diagram"))?;
        // d_t = d_s * a[s][t] / a[t][s]
        num[t] = num[s] * a[s][t];
        den[t] = den[s] * a[t][s];
        let g = gcd(num[t].unsigned_abs(), den[t].unsigned_abs()) as i64;
        num[t] /= g;
        den[t] /= g;
        if den[t] < 0 {
            num[t] = -num[t];
            den[t] = -den[t];
        }
    }
    let lcm = den
        .iter()
        .fold(1i64, |acc, &x| acc / gcd(acc as u64, x as u64) as i64 * x);
    let mut d: Vec<i64> = (0..n).map(|i| num[i] * (lcm / den[i])).collect();
    let g = d.iter().fold(0u64, |acc, &x| gcd(acc, x.unsigned_abs())) as i64;
    for x in d.iter_mut() {
        *x /= g;
    }
    Ok(d)
}

fn enumerate_positive_roots(a: &[Vec<i64>]) -> Vec<PositiveRoot> {
    let n = a.len();
    let unit = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let mut found: Vec<(Vec<i64>, Vec<i64>)> = (0..n).map(|i| (unit(i), unit(i))).collect();
    let mut frontier = found.clone();
    while let Some((root, coroot)) = frontier.pop() {
        for j in 0..n {
            // <alpha, alpha_j^vee> and <alpha_j, alpha^vee>
            let p: i64 = (0..n).map(|k| root[k] * a[j][k]).sum();
            let q: i64 = (0..n).map(|k| coroot[k] * a[k][j]).sum();
            let mut r = root.clone();
            r[j] -= p;
            let mut c = coroot.clone();
            c[j] -= q;
            if r.iter().all(|&x| x >= 0)
                && r.iter().any(|&x| x > 0)
                && !found.iter().any(|(x, _)| *x == r)
            {
                found.push((r.clone(), c.clone()));
                frontier.push((r, c));
            }
        }
    }
    found.sort_by(|x, y| {
        let hx: i64 = x.0.iter().sum();
        let hy: i64 = y.0.iter().sum();
        hx.cmp(&hy).then_with(|| y.0.cmp(&x.0))
    });
    found
        .into_iter()
        .map(|(root, coroot)| {
            let weight = Weight::new(
                &(0..n)
                    .map(|k| (0..n).map(|j| a[k][j] * root[j]).sum())
                    .collect::<Vec<_>>(),
            );
            PositiveRoot {
                weight,
                root_coords: root,
                coroot: Coroot(coroot),
            }
        })
        .collect()
}
