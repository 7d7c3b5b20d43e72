//! JSON domain files.
//!
//! ```json
//! { "type": "annulus", "center": [0, 0], "r_inner": 0.25, "r_outer": 1 }
//! ```
//!
//! `type` is one of `disk` (`center`, `radius`), `annulus` (`center`, `r_inner`,
//! `r_outer`), `polygon` (`vertices`, counterclockwise list of `[re, im]`) or
//! `smooth_jordan` (`fourier`, list of `[k, re, im]` meaning `c_k = re + i·im` in
//! `γ(θ) = Σ c_k e^{ikθ}`). Any outer type except `annulus` may carry `holes`, a
//! list of objects of the same shape but without `holes`/`punctures`/`name`.
//! `punctures` is a list of `[re, im]` points removed from the domain; `name` is
//! an optional label. Unknown fields and fields that do not belong to the chosen
//! type are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Curve, DomainSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<Vec<DomainFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punctures: Option<Vec<[f64; 2]>>,
}

fn pt(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn unpt(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn need<T: Clone>(v: &Option<T>, field: &str, kind: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Geometry(format!("domain of type `{kind}` needs field `{field}`")))
}

impl DomainFile {
    fn check_only(&self, allowed: &[&str]) -> Result<()> {
        let present = [
            ("center", self.center.is_some()),
            ("radius", self.radius.is_some()),
            ("r_inner", self.r_inner.is_some()),
            ("r_outer", self.r_outer.is_some()),
            ("vertices", self.vertices.is_some()),
            ("fourier", self.fourier.is_some()),
        ];
        for (field, is_set) in present {
            if is_set && !allowed.contains(&field) {
                return Err(Error::Geometry(format!(
                    "field `{field}` does not apply to type `{}`",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    fn fourier_coeffs(&self) -> Result<Vec<(i32, Complex64)>> {
        need(&self.fourier, "fourier", &self.kind)?
            .into_iter()
            .map(|[k, re, im]| {
                if k.fract() != 0.0 || k.abs() > 4096.0 {
                    Err(Error::Geometry(format!("fourier index {k} must be a small integer")))
                } else {
                    Ok((k as i32, Complex64::new(re, im)))
                }
            })
            .collect()
    }

    fn curve(&self) -> Result<Curve> {
        match self.kind.as_str() {
            "disk" | "circle" => {
                self.check_only(&["center", "radius"])?;
                Curve::circle(pt(need(&self.center, "center", &self.kind)?), need(&self.radius, "radius", &self.kind)?)
            }
            "polygon" => {
                self.check_only(&["vertices"])?;
                Curve::polygon(need(&self.vertices, "vertices", &self.kind)?.into_iter().map(pt).collect())
            }
            "smooth_jordan" => {
                self.check_only(&["fourier"])?;
                Curve::fourier(self.fourier_coeffs()?)
            }
            other => Err(Error::Geometry(format!("unknown boundary type `{other}`"))),
        }
    }

    pub fn to_spec(&self) -> Result<DomainSpec> {
        let holes = self.holes.as_deref().unwrap_or_default();
        let base = if self.kind == "annulus" {
            self.check_only(&["center", "r_inner", "r_outer"])?;
            if !holes.is_empty() {
                return Err(Error::Geometry("annulus cannot carry extra holes".into()));
            }
            DomainSpec::annulus(
                pt(need(&self.center, "center", &self.kind)?),
                need(&self.r_inner, "r_inner", &self.kind)?,
                need(&self.r_outer, "r_outer", &self.kind)?,
            )?
        } else if holes.is_empty() {
            match self.curve()? {
                Curve::Circle { center, radius } => DomainSpec::disk(center, radius)?,
                Curve::Polygon { vertices } => DomainSpec::polygon(vertices)?,
                Curve::Fourier { coeffs } => DomainSpec::smooth_jordan(coeffs)?,
                Curve::Rounded { .. } => unreachable!("files cannot describe rounded curves"),
            }
        } else {
            let hole_curves = holes
                .iter()
                .map(|h| {
                    if h.holes.is_some() || h.punctures.is_some() || h.name.is_some() {
                        return Err(Error::Geometry("holes cannot have holes, punctures or names".into()));
                    }
                    h.curve()
                })
                .collect::<Result<Vec<_>>>()?;
            DomainSpec::multiply_connected(self.curve()?, hole_curves)?
        };
        match &self.punctures {
            Some(p) if !p.is_empty() => DomainSpec::punctured(base, p.iter().copied().map(pt).collect()),
            _ => Ok(base),
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> DomainFile {
        fn curve_file(c: &Curve) -> DomainFile {
            match c {
                Curve::Circle { center, radius } => DomainFile {
                    kind: "disk".into(),
                    center: Some(unpt(*center)),
                    radius: Some(*radius),
                    ..Default::default()
                },
                Curve::Polygon { vertices } | Curve::Rounded { vertices, .. } => DomainFile {
                    kind: "polygon".into(),
                    vertices: Some(vertices.iter().copied().map(unpt).collect()),
                    ..Default::default()
                },
                Curve::Fourier { coeffs } => DomainFile {
                    kind: "smooth_jordan".into(),
                    fourier: Some(coeffs.iter().map(|&(k, c)| [k as f64, c.re, c.im]).collect()),
                    ..Default::default()
                },
            }
        }
        match spec {
            DomainSpec::Annulus { center, r_inner, r_outer } => DomainFile {
                kind: "annulus".into(),
                center: Some(unpt(*center)),
                r_inner: Some(*r_inner),
                r_outer: Some(*r_outer),
                ..Default::default()
            },
            DomainSpec::Punctured { base, punctures } => {
                let mut f = DomainFile::from_spec(base);
                f.punctures = Some(punctures.iter().copied().map(unpt).collect());
                f
            }
            DomainSpec::MultiplyConnected { outer, holes } => {
                let mut f = curve_file(outer);
                if !holes.is_empty() {
                    f.holes = Some(holes.iter().map(curve_file).collect());
                }
                f
            }
            other => curve_file(&other.region().outer),
        }
    }
}

/// Parses a JSON domain file.
pub fn parse_domain(text: &str) -> Result<DomainSpec> {
    let file: DomainFile =
        serde_json::from_str(text).map_err(|e| Error::Geometry(format!("invalid domain file: {e}")))?;
    file.to_spec()
}
