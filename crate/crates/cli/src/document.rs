//! Fan files: a small TOML document with rays, cones, optional piecewise
//! linear functions and the results a regression run should reproduce.
//!
//! Scalars are strings in the syntax of [`FieldScalar::parse`], e.g. `"-1/2"`
//! or `"1/2+1/2*sqrt(5)"`. Canonical output is produced by
//! [`FanDocument::to_canonical`] rather than by a generic serializer so that
//! a canonical file parses and re-serializes to the identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use fanic::exactmath::{FieldScalar, Vector};
use fanic::fan::{build_fan, Fan, Field, PiecewiseLinear};
use serde::{Deserialize, Serialize};

/// Results a corpus file is expected to reproduce. Every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub num_cones: Option<usize>,
    pub f_vector: Option<Vec<usize>>,
    pub complete: Option<bool>,
    pub simplicial: Option<bool>,
    pub quasi_convex: Option<bool>,
    /// `P_Δ` coefficients by even degree.
    pub hvector: Option<Vec<i64>>,
    /// `P_{(Δ,∂Δ)}` coefficients by even degree.
    pub relative_hvector: Option<Vec<i64>>,
    /// Local polynomial of the unique maximal cone.
    pub local: Option<Vec<i64>>,
    /// Generator degrees of the unique maximal cone.
    pub generators: Option<Vec<u32>>,
    /// Name of a strictly convex function for the Lefschetz check.
    pub lefschetz: Option<String>,
    /// Corpus name of the coarser fan this file refines.
    pub refines: Option<String>,
    /// Multiplicities of the top coarse cone, by even degree.
    pub multiplicities: Option<Vec<usize>>,
    /// Corpus name of a rational fan with an isomorphic face lattice.
    pub twin: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub name: String,
    pub ambient_dim: usize,
    pub field: String,
    pub rays: Vec<Vec<String>>,
    pub cones: Vec<Vec<usize>>,
    /// Named piecewise linear functions: one ambient linear form per entry
    /// of `cones`, in the same order.
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub expected: Expected,
}

/// A document together with the fan it describes.
#[derive(Clone, Debug)]
pub struct LoadedFan {
    pub doc: FanDocument,
    pub fan: Fan,
    pub functions: BTreeMap<String, PiecewiseLinear>,
}

fn parse_vector(v: &[String], n: usize, what: &str) -> Result<Vector> {
    if v.len() != n {
        bail!("{what} has {} coordinates, expected {n}", v.len());
    }
    v.iter().map(|s| FieldScalar::parse(s).with_context(|| format!("in {what}"))).collect()
}

impl FanDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).context("malformed fan document")
    }

    /// Validates the document and builds the fan.
    pub fn load(&self) -> Result<LoadedFan> {
        let n = self.ambient_dim;
        let field: Field = self.field.parse()?;
        let rays: Vec<Vector> = self
            .rays
            .iter()
            .enumerate()
            .map(|(i, r)| parse_vector(r, n, &format!("ray {i}")))
            .collect::<Result<_>>()?;
        for (i, r) in rays.iter().enumerate() {
            for x in r {
                if let Some(d) = x.radicand() {
                    if field != Field::Quadratic(d) {
                        bail!("ray {i} uses sqrt({d}) but the declared field is {field}");
                    }
                }
            }
        }
        let fan = build_fan(n, rays, self.cones.clone())?;
        let mut functions = BTreeMap::new();
        for (name, forms) in &self.functions {
            if forms.len() != self.cones.len() {
                bail!("function {name} has {} forms for {} cones", forms.len(), self.cones.len());
            }
            let mut map = BTreeMap::new();
            for (i, (cone, form)) in self.cones.iter().zip(forms).enumerate() {
                let mut rays = cone.clone();
                rays.sort_unstable();
                let id = fan.cone_by_rays(&rays).with_context(|| format!("cone {i} of function {name}"))?;
                map.insert(id, parse_vector(form, n, &format!("form {i} of function {name}"))?);
            }
            functions.insert(name.clone(), PiecewiseLinear::new(map));
        }
        Ok(LoadedFan { doc: self.clone(), fan, functions })
    }

    /// The canonical text form.
    pub fn to_canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", quote(&self.name));
        let _ = writeln!(s, "ambient_dim = {}", self.ambient_dim);
        let _ = writeln!(s, "field = {}", quote(&self.field));
        write_rows(&mut s, "rays", self.rays.iter().map(|r| strings(r)));
        write_rows(&mut s, "cones", self.cones.iter().map(|c| ints(c)));
        if !self.functions.is_empty() {
            s.push_str("\n[functions]\n");
            for (name, forms) in &self.functions {
                write_rows(&mut s, &key(name), forms.iter().map(|f| strings(f)));
            }
        }
        let e = &self.expected;
        let mut body = String::new();
        let mut line = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(body, "{k} = {v}");
            }
        };
        line("num_cones", e.num_cones.map(|x| x.to_string()));
        line("f_vector", e.f_vector.as_ref().map(|x| ints(x)));
        line("complete", e.complete.map(|x| x.to_string()));
        line("simplicial", e.simplicial.map(|x| x.to_string()));
        line("quasi_convex", e.quasi_convex.map(|x| x.to_string()));
        line("hvector", e.hvector.as_ref().map(|x| ints(x)));
        line("relative_hvector", e.relative_hvector.as_ref().map(|x| ints(x)));
        line("local", e.local.as_ref().map(|x| ints(x)));
        line("generators", e.generators.as_ref().map(|x| ints(x)));
        line("lefschetz", e.lefschetz.as_deref().map(quote));
        line("refines", e.refines.as_deref().map(quote));
        line("multiplicities", e.multiplicities.as_ref().map(|x| ints(x)));
        line("twin", e.twin.as_deref().map(quote));
        if !body.is_empty() {
            s.push_str("\n[expected]\n");
            s.push_str(&body);
        }
        s
    }
}

fn quote(x: &str) -> String {
    serde_json::to_string(x).expect("string serializes")
}

fn key(x: &str) -> String {
    if !x.is_empty() && x.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        x.to_string()
    } else {
        quote(x)
    }
}

fn strings(xs: &[String]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| quote(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn ints<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn write_rows(s: &mut String, name: &str, rows: impl Iterator<Item = String>) {
    let _ = writeln!(s, "{name} = [");
    for r in rows {
        let _ = writeln!(s, "    {r},");
    }
    s.push_str("]\n");
}
