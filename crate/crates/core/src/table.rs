//! Polynomial and multiplicity tables, with JSON and CSV encodings.
//!
//! Both encodings are canonical: entries sorted by `(x, y)` in the group's
//! element order, polynomials in canonical form, so identical inputs produce
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::orders::Window;
use crate::periodic::{PeriodicModule, PolyKind};
use crate::rootdata::{Family, RootDatum};
use crate::weyl::{AffineWeylGroup, ExtAffineElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    PeriodicP,
    GenericQ,
    GenericQprime,
    SimpleInVerma,
    VermaInProjective,
    BabyVermaInProjective,
    SimpleInBabyVerma,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::PeriodicP => "periodic_p",
            TableKind::GenericQ => "generic_q",
            TableKind::GenericQprime => "generic_qprime",
            TableKind::SimpleInVerma => "simple_in_verma",
            TableKind::VermaInProjective => "verma_in_projective",
            TableKind::BabyVermaInProjective => "baby_verma_in_projective",
            TableKind::SimpleInBabyVerma => "simple_in_baby_verma",
        }
    }
}

impl From<PolyKind> for TableKind {
    fn from(k: PolyKind) -> Self {
        match k {
            PolyKind::P => TableKind::PeriodicP,
            PolyKind::Q => TableKind::GenericQ,
            PolyKind::Qprime => TableKind::GenericQprime,
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into()))
            .map_err(|_| Error::parse(format!("unknown table kind `{s}`")))
    }
}

/// Which root datum a table belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
    pub l: u64,
}

impl DatumSpec {
    pub fn of(rd: &RootDatum) -> Self {
        DatumSpec {
            family: rd.cartan_type().family,
            rank: rd.rank(),
            l: rd.l(),
        }
    }
}

/// A table of polynomials indexed by pairs. `None` marks an entry that lies
/// outside what was computed; it never stands for zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub kind: TableKind,
    pub datum: DatumSpec,
    pub window: Window,
    /// Truncation weight for Verma-in-projective tables.
    pub nu: Option<Vec<i64>>,
    /// Keyed by `(x, y)`.
    pub entries: BTreeMap<(ExtAffineElement, ExtAffineElement), Option<LaurentPoly>>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    x: String,
    y: String,
    polynomial: Option<LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    kind: TableKind,
    root_datum: DatumSpec,
    window: Window,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<Vec<i64>>,
    entries: Vec<JsonEntry>,
}

impl Table {
    /// `p`, `q` or `q'` for all `x, y` in the window; zero entries are
    /// omitted.
    pub fn polynomials(m: &PeriodicModule, window: &Window, kind: PolyKind) -> Table {
        let g = m.group();
        let elems = window.elements(g);
        let entries: BTreeMap<_, _> = elems
            .par_iter()
            .flat_map_iter(|x| {
                elems.iter().filter_map(move |y| {
                    let p = m.generic(y, x, kind);
                    (!p.is_zero()).then_some(((*x, *y), Some(p)))
                })
            })
            .collect();
        Table {
            kind: kind.into(),
            datum: DatumSpec::of(g.root_datum()),
            window: window.clone(),
            nu: None,
            entries,
        }
    }

    pub fn get(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> Option<&Option<LaurentPoly>> {
        self.entries.get(&(*x, *y))
    }

    pub fn to_json(&self, g: &AffineWeylGroup) -> String {
        let t = JsonTable {
            kind: self.kind,
            root_datum: self.datum.clone(),
            window: self.window.clone(),
            nu: self.nu.clone(),
            entries: self
                .entries
                .iter()
                .map(|((x, y), p)| JsonEntry {
                    x: g.format_element(x),
                    y: g.format_element(y),
                    polynomial: p.clone(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&t).expect("tables serialize");
        s.push('\n');
        s
    }

    /// Parse a JSON table. The group must match the table's root datum.
    pub fn from_json(g: &AffineWeylGroup, text: &str) -> Result<Table> {
        let t: JsonTable =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("bad table JSON: {e}")))?;
        if t.root_datum != DatumSpec::of(g.root_datum()) {
            return Err(Error::input("table belongs to a different root datum"));
        }
        let mut entries = BTreeMap::new();
        for e in t.entries {
            let key = (g.parse_element(&e.x)?, g.parse_element(&e.y)?);
            if entries.insert(key, e.polynomial).is_some() {
                return Err(Error::parse(format!("duplicate entry ({}, {})", e.x, e.y)));
            }
        }
        Ok(Table {
            kind: t.kind,
            datum: t.root_datum,
            window: t.window,
            nu: t.nu,
            entries,
        })
    }

    /// Read only the header fields of a JSON table, to pick the group.
    pub fn peek_datum(text: &str) -> Result<DatumSpec> {
        #[derive(Deserialize)]
        struct Header {
            root_datum: DatumSpec,
        }
        serde_json::from_str::<Header>(text)
            .map(|h| h.root_datum)
            .map_err(|e| Error::parse(format!("bad table JSON: {e}")))
    }

    /// `x,y,polynomial` rows; missing entries are written as `null`.
    pub fn to_csv(&self, g: &AffineWeylGroup) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["x", "y", "polynomial"]).unwrap();
        for ((x, y), p) in &self.entries {
            let poly = p
                .as_ref()
                .map_or_else(|| "null".to_string(), |p| p.to_string());
            w.write_record([g.format_element(x), g.format_element(y), poly])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Parse CSV rows back into entries of a table with the given header data.
    pub fn entries_from_csv(
        g: &AffineWeylGroup,
        text: &str,
    ) -> Result<BTreeMap<(ExtAffineElement, ExtAffineElement), Option<LaurentPoly>>> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut entries = BTreeMap::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::parse(format!("bad CSV: {e}")))?;
            if rec.len() != 3 {
                return Err(Error::parse("CSV rows need three fields"));
            }
            let p = match &rec[2] {
                "null" => None,
                s => Some(s.parse()?),
            };
            entries.insert((g.parse_element(&rec[0])?, g.parse_element(&rec[1])?), p);
        }
        Ok(entries)
    }

    pub fn to_text(&self, g: &AffineWeylGroup) -> String {
        let mut out = format!(
            "# {} for {}{} l={} window height {}\n",
            self.kind, self.datum.family, self.datum.rank, self.datum.l, self.window.height
        );
        for ((x, y), p) in &self.entries {
            let poly = p
                .as_ref()
                .map_or_else(|| "null".to_string(), |p| p.to_string());
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                g.format_element(x),
                g.format_element(y),
                poly
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn module() -> PeriodicModule {
        let rd = RootDatum::from_parts(Family::A, 1, 3).unwrap();
        PeriodicModule::new(Arc::new(AffineWeylGroup::new(Arc::new(rd)))).unwrap()
    }

    #[test]
    fn json_and_csv_roundtrip() {
        let m = module();
        let g = m.group();
        for kind in [PolyKind::P, PolyKind::Q, PolyKind::Qprime] {
            let mut t = Table::polynomials(&m, &Window::new(2), kind);
            let key = *t.entries.keys().next().unwrap();
            t.entries.insert(key, None);
            let j = t.to_json(g);
            let back = Table::from_json(g, &j).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.to_json(g), j);
            assert_eq!(Table::entries_from_csv(g, &t.to_csv(g)).unwrap(), t.entries);
        }
    }

    #[test]
    fn diagonal_is_one() {
        let m = module();
        let w = Window::new(2);
        for kind in [PolyKind::P, PolyKind::Q, PolyKind::Qprime] {
            let t = Table::polynomials(&m, &w, kind);
            for x in w.elements(m.group()) {
                assert!(t.get(&x, &x).unwrap().as_ref().unwrap().is_one());
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = module();
        let g = m.group();
        assert!(Table::from_json(g, "{").is_err());
        let j = Table::polynomials(&m, &Window::new(1), PolyKind::P).to_json(g);
        let other = AffineWeylGroup::new(Arc::new(RootDatum::from_parts(Family::A, 1, 5).unwrap()));
        assert!(Table::from_json(&other, &j).is_err());
        assert!("nope".parse::<TableKind>().is_err());
        assert_eq!(
            "generic_q".parse::<TableKind>().unwrap(),
            TableKind::GenericQ
        );
    }
}
