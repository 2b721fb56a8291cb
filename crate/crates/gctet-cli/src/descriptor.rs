//! The TetDescriptor JSON file format.

use gctet::tetrahedra::from_angles;
use gctet::{Isometry, Kind, Lambda, Mat2, Tetrahedron};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// A 2×2 matrix over ℂ_Λ as rows of [re, im] pairs.
pub type PoseArray = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TetDescriptor {
    pub lambda: i64,
    pub kind: String,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pose: Option<PoseArray>,
    pub schema_version: String,
}

pub fn pose_to_array(a: &Isometry) -> PoseArray {
    let m = a.rep();
    let (re, im) = (m.real_part(), m.imag_part());
    [[[re[0][0], im[0][0]], [re[0][1], im[0][1]]], [[re[1][0], im[1][0]], [re[1][1], im[1][1]]]]
}

pub fn pose_from_array(lam: Lambda, p: &PoseArray) -> gctet::Result<Isometry> {
    let re = [[p[0][0][0], p[0][1][0]], [p[1][0][0], p[1][1][0]]];
    let im = [[p[0][0][1], p[0][1][1]], [p[1][0][1], p[1][1][1]]];
    if re.iter().chain(im.iter()).flatten().any(|x| !x.is_finite()) {
        return Err(gctet::Error::DomainError("pose entries must be finite".into()));
    }
    Isometry::new(Mat2::from_parts(lam, re, im))
}

impl TetDescriptor {
    pub fn from_tet(t: &Tetrahedron) -> TetDescriptor {
        TetDescriptor {
            lambda: t.lambda().sign() as i64,
            kind: t.kind().to_string(),
            alpha: t.alpha(),
            beta: t.beta(),
            pose: Some(pose_to_array(&t.pose())),
            schema_version: SCHEMA_VERSION.into(),
        }
    }

    pub fn parse(text: &str) -> Result<TetDescriptor, CliError> {
        let d: TetDescriptor = serde_json::from_str(text).map_err(|e| CliError::Input("ParseError", format!("descriptor: {e}")))?;
        if d.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input("ParseError", format!("unsupported schema_version {:?}", d.schema_version)));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("descriptor serializes");
        s.push('\n');
        s
    }

    pub fn tetrahedron(&self) -> gctet::Result<Tetrahedron> {
        let lam = Lambda::from_i64(self.lambda)?;
        let kind: Kind = self.kind.parse()?;
        let t = from_angles(kind, lam, self.alpha, self.beta)?;
        Ok(match &self.pose {
            Some(p) => t.transformed(&pose_from_array(lam, p)?),
            None => t,
        })
    }
}
