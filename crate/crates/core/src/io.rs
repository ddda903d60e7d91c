//! Field dispatch for the JSON formats: files name their field, and the
//! values inside are parsed over `Q` or the named `Q(sqrt d)`.

use crate::config::{Realization, RealizationJson};
use crate::error::{Error, Result};
use crate::exactnum::{QuadExt, QuadField, Rational};
use crate::lawrence::{polytope_from_json, LabeledPolytope, LiftingJson};
use crate::surface::{MeshJson, QuadMesh};

/// A field named in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Quad(QuadField),
}

impl FieldSpec {
    pub fn parse(name: &str) -> Result<Self> {
        if name.trim() == "Q" {
            return Ok(FieldSpec::Rational);
        }
        QuadField::parse_name(name).map(FieldSpec::Quad).map_err(Error::Invalid)
    }

    pub fn name(&self) -> String {
        match self {
            FieldSpec::Rational => "Q".into(),
            FieldSpec::Quad(k) => format!("Q(sqrt {})", k.radicand()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyRealization {
    Rational(Realization<Rational>),
    Quad(Realization<QuadExt>),
}

impl AnyRealization {
    pub fn from_json(j: &RealizationJson) -> Result<Self> {
        Ok(match FieldSpec::parse(&j.field)? {
            FieldSpec::Rational => AnyRealization::Rational(Realization::from_json(&(), j)?),
            FieldSpec::Quad(k) => AnyRealization::Quad(Realization::from_json(&k, j)?),
        })
    }

    pub fn to_json(&self) -> RealizationJson {
        match self {
            AnyRealization::Rational(r) => r.to_json(),
            AnyRealization::Quad(r) => r.to_json(),
        }
    }

    pub fn field_name(&self) -> String {
        match self {
            AnyRealization::Rational(r) => r.field_name(),
            AnyRealization::Quad(r) => r.field_name(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyPolytope {
    Rational(LabeledPolytope<Rational>),
    Quad(LabeledPolytope<QuadExt>),
}

impl AnyPolytope {
    pub fn from_json(j: &LiftingJson) -> Result<Self> {
        Ok(match FieldSpec::parse(&j.field)? {
            FieldSpec::Rational => AnyPolytope::Rational(polytope_from_json(&(), j)?),
            FieldSpec::Quad(k) => AnyPolytope::Quad(polytope_from_json(&k, j)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyMesh {
    Rational(QuadMesh<Rational>),
    Quad(QuadMesh<QuadExt>),
}

impl AnyMesh {
    pub fn from_json(j: &MeshJson) -> Result<Self> {
        Ok(match FieldSpec::parse(&j.field)? {
            FieldSpec::Rational => AnyMesh::Rational(QuadMesh::from_json(&(), j)?),
            FieldSpec::Quad(k) => AnyMesh::Quad(QuadMesh::from_json(&k, j)?),
        })
    }

    pub fn to_json(&self) -> MeshJson {
        match self {
            AnyMesh::Rational(m) => m.to_json(),
            AnyMesh::Quad(m) => m.to_json(),
        }
    }
}
