//! Block labels and graded multiplicity tables.
//!
//! Multiplicities are relabelings of the polynomial tables by `w0`:
//!
//! * `[M(x•0) : L(y•0)] = q_{w0x, w0y}`
//! * `(P : M(x•0)) = q'_{w0y, w0x}` if `y•0 ≤ lν`, else `0`
//! * `(P_y : Z_x) = [Z_x : L_y] = p_{w0x, w0y}`
//!
//! Grading shifts are normalized so that diagonal entries are `1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::orders::Window;
use crate::periodic::{PeriodicModule, PolyKind};
use crate::rootdata::{RootDatum, Weight};
use crate::table::{DatumSpec, Table, TableKind};
use crate::weyl::{AffineGen, AffineWeylGroup, ExtAffineElement};

/// A lattice point of the closed fundamental alcove (for `•_l`) with its
/// stabilizer, given by the wall reflections fixing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLabel {
    pub representative: Weight,
    pub stabilizer: Vec<AffineGen>,
    pub regular: bool,
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        if v.is_empty() || v.len() > crate::rootdata::MAX_RANK {
            return Err(serde::de::Error::custom("weight rank out of range"));
        }
        Ok(Weight::new(&v))
    }
}

impl Serialize for AffineGen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for AffineGen {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        u8::deserialize(d).map(AffineGen)
    }
}

/// All `λ` with `0 ≤ <λ+ρ, α^vee> ≤ l` for every positive coroot.
pub fn enumerate_blocks(rd: &RootDatum) -> Result<Vec<BlockLabel>> {
    let report = rd.validate_l();
    if !report.is_ok() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::input(format!("inadmissible l: {}", msgs.join("; "))));
    }
    let l = rd.l() as i64;
    let theta = &rd.theta().coroot;
    let rho = rd.rho();
    let mut out = vec![];
    for mu in crate::weyl::weights_in_box(rd.rank(), l) {
        // mu = λ + ρ, dominant and below the affine wall
        if mu.coords().iter().any(|&c| c < 0) || rd.pair(&mu, theta) > l {
            continue;
        }
        let mut stabilizer = vec![];
        if rd.pair(&mu, theta) == l {
            stabilizer.push(AffineGen::S0);
        }
        for i in 0..rd.rank() {
            if mu[i] == 0 {
                stabilizer.push(AffineGen::finite(i));
            }
        }
        out.push(BlockLabel {
            representative: mu - rho,
            regular: stabilizer.is_empty(),
            stabilizer,
        });
    }
    Ok(out)
}

/// A label whose stabilizer is exactly `{1, s}`.
pub fn select_omega_s(blocks: &[BlockLabel], s: AffineGen) -> Option<&BlockLabel> {
    blocks.iter().find(|b| b.stabilizer == [s])
}

/// Multiplicity lookups over the polynomial tables of a periodic module,
/// restricted to a window; pairs outside it are reported as `None`.
pub struct Multiplicities<'a> {
    module: &'a PeriodicModule,
    window: Window,
}

impl<'a> Multiplicities<'a> {
    pub fn new(module: &'a PeriodicModule, window: Window) -> Self {
        Multiplicities { module, window }
    }

    fn g(&self) -> &AffineWeylGroup {
        self.module.group()
    }

    fn w0(&self, x: &ExtAffineElement) -> ExtAffineElement {
        self.g().mul(&self.g().longest_element(), x)
    }

    fn inside(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> bool {
        self.window.contains(self.g(), x) && self.window.contains(self.g(), y)
    }

    /// `[M(x•0) : L(y•0)]_gr = q_{w0x, w0y}`.
    pub fn simple_in_verma(
        &self,
        x: &ExtAffineElement,
        y: &ExtAffineElement,
    ) -> Option<LaurentPoly> {
        self.inside(x, y)
            .then(|| self.module.generic(&self.w0(x), &self.w0(y), PolyKind::Q))
    }

    /// `(P : M(x•0))_gr` for the truncation `ν`: `q'_{w0y, w0x}` when
    /// `y•0 ≤ lν`, otherwise `0`.
    pub fn verma_in_projective(
        &self,
        x: &ExtAffineElement,
        y: &ExtAffineElement,
        nu: &Weight,
    ) -> Option<LaurentPoly> {
        if !self.inside(x, y) {
            return None;
        }
        let g = self.g();
        let rd = g.root_datum();
        let l = rd.l() as i64;
        let ydot = g.dot(y, &Weight::zero(g.rank()), l);
        Some(if rd.dominance_leq(&ydot, &nu.scale(l)) {
            self.module
                .generic(&self.w0(y), &self.w0(x), PolyKind::Qprime)
        } else {
            LaurentPoly::zero()
        })
    }

    /// `(P_y : Z_x)_gr = p_{w0x, w0y}`.
    pub fn baby_verma_in_projective(
        &self,
        x: &ExtAffineElement,
        y: &ExtAffineElement,
    ) -> Option<LaurentPoly> {
        self.inside(x, y)
            .then(|| self.module.p(&self.w0(x), &self.w0(y)))
    }

    /// `[Z_x : L_y]_gr = p_{w0x, w0y}`; equal to the previous by reciprocity.
    pub fn simple_in_baby_verma(
        &self,
        x: &ExtAffineElement,
        y: &ExtAffineElement,
    ) -> Option<LaurentPoly> {
        self.inside(x, y)
            .then(|| self.module.p(&self.w0(x), &self.w0(y)))
    }

    /// Every window pair of one kind, zeros included.
    pub fn table(&self, kind: TableKind, nu: Option<&Weight>) -> Result<Table> {
        let elems = self.window.elements(self.g());
        let mut entries = BTreeMap::new();
        for x in &elems {
            for y in &elems {
                let v = match kind {
                    TableKind::SimpleInVerma => self.simple_in_verma(x, y),
                    TableKind::VermaInProjective => {
                        let nu = nu.ok_or_else(|| Error::input("verma_in_projective needs nu"))?;
                        self.verma_in_projective(x, y, nu)
                    }
                    TableKind::BabyVermaInProjective => self.baby_verma_in_projective(x, y),
                    TableKind::SimpleInBabyVerma => self.simple_in_baby_verma(x, y),
                    other => {
                        return Err(Error::input(format!("{other} is not a multiplicity table")))
                    }
                };
                entries.insert((*x, *y), v);
            }
        }
        Ok(Table {
            kind,
            datum: DatumSpec::of(self.g().root_datum()),
            window: self.window.clone(),
            nu: match kind {
                TableKind::VermaInProjective => nu.map(|n| n.coords().to_vec()),
                _ => None,
            },
            entries,
        })
    }
}
