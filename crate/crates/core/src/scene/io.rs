//! JSON scene documents.
//!
//! ```json
//! {"mirrors":[{"anchor":[x,y],"length":L,"angle":{"num":p,"den":q}}],"source":[x,y]}
//! ```
//! Angles are exact rationals in units of π; unknown fields are rejected.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Mirror, Scene};
use crate::exact_angle::RationalTurn;
use crate::geometry::Vec2;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("scene parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("mirror {mirror}: angle {angle} does not fit a 64-bit scene document")]
    AngleOutOfRange { mirror: usize, angle: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AngleDoc {
    num: i64,
    den: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorDocument {
    pub anchor: [f64; 2],
    pub length: f64,
    #[serde(deserialize_with = "angle_from_doc", serialize_with = "angle_to_doc")]
    pub angle: RationalTurn,
}

/// Serialized form of a [`Scene`], embeddable in other documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub mirrors: Vec<MirrorDocument>,
    pub source: [f64; 2],
}

impl TryFrom<&Scene> for SceneDocument {
    type Error = SceneError;

    fn try_from(scene: &Scene) -> Result<Self, SceneError> {
        for (i, m) in scene.mirrors.iter().enumerate() {
            if m.angle.num().to_i64().is_none() || m.angle.den().to_i64().is_none() {
                return Err(SceneError::AngleOutOfRange {
                    mirror: i + 1,
                    angle: m.angle.fraction_string(),
                });
            }
        }
        Ok(SceneDocument {
            mirrors: scene
                .mirrors
                .iter()
                .map(|m| MirrorDocument {
                    anchor: m.anchor.into(),
                    length: m.length,
                    angle: m.angle.clone(),
                })
                .collect(),
            source: scene.source.into(),
        })
    }
}

impl From<SceneDocument> for Scene {
    fn from(doc: SceneDocument) -> Scene {
        Scene {
            mirrors: doc
                .mirrors
                .into_iter()
                .map(|m| Mirror::new(Vec2::from(m.anchor), m.length, m.angle))
                .collect(),
            source: Vec2::from(doc.source),
        }
    }
}

fn angle_from_doc<'de, D>(de: D) -> Result<RationalTurn, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let doc = AngleDoc::deserialize(de)?;
    RationalTurn::new(doc.num, doc.den).map_err(serde::de::Error::custom)
}

fn angle_to_doc<S>(angle: &RationalTurn, ser: S) -> Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    let (Some(num), Some(den)) = (angle.num().to_i64(), angle.den().to_i64()) else {
        return Err(serde::ser::Error::custom(format!("angle {angle} exceeds 64-bit range")));
    };
    AngleDoc { num, den }.serialize(ser)
}

/// Parses a scene document. Geometric validity is checked separately by
/// [`Scene::validate`].
pub fn load_scene(bytes: &[u8]) -> Result<Scene, SceneError> {
    let doc: SceneDocument = serde_json::from_slice(bytes).map_err(|e| SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(doc.into())
}

pub fn save_scene(scene: &Scene) -> Result<Vec<u8>, SceneError> {
    let doc = SceneDocument::try_from(scene)?;
    let mut out = serde_json::to_vec_pretty(&doc).expect("scene document serializes");
    out.push(b'\n');
    Ok(out)
}
