use anyhow::{bail, Context, Result};
use etaid::macdonald::Identity;
use etaid::virasoro::models_up_to;
use etaid::QExponent;
use serde::Deserialize;

pub const DEFAULT_MANIFEST: &str = include_str!("../manifests/suite-v1.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub order: String,
    pub max_st: i64,
    #[serde(rename = "family")]
    pub families: Vec<Family>,
}

/// One identity family. `k` lists the Macdonald ranks; families over `(s, t)`
/// expand to the model grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub identity: String,
    #[serde(default)]
    pub k: Vec<i64>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).context("invalid suite manifest")?;
        if m.families.is_empty() {
            bail!("suite manifest `{}` lists no families", m.version);
        }
        Ok(m)
    }

    pub fn order(&self) -> Result<QExponent> {
        crate::parse_order(&self.order).map_err(anyhow::Error::msg)
    }

    /// Every identity instance, in manifest order, models sorted by `(s, t)`.
    pub fn expand(&self, max_st: i64) -> Result<Vec<Identity>> {
        let mut out = Vec::new();
        for family in &self.families {
            match family.identity.as_str() {
                "euler" | "jacobi" | "weber" => {
                    if !family.k.is_empty() {
                        bail!("family `{}` takes no k list", family.identity);
                    }
                    out.push(Identity::from_parts(&family.identity, &[])?);
                }
                "macdonald" => {
                    if family.k.is_empty() {
                        bail!("family `macdonald` needs a non-empty k list");
                    }
                    for &k in &family.k {
                        out.push(Identity::Macdonald { k });
                    }
                }
                name => {
                    if !family.k.is_empty() {
                        bail!("family `{name}` takes no k list");
                    }
                    for model in models_up_to(max_st) {
                        out.push(Identity::from_parts(name, &[model.s(), model.t()])?);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_manifest_expands_in_order() {
        let m = Manifest::parse(DEFAULT_MANIFEST).unwrap();
        assert_eq!(m.version, "suite-v1");
        let ids = m.expand(40).unwrap();
        // 3 single identities, 3 macdonald ranks, 22 models for each of 3 families
        assert_eq!(ids.len(), 3 + 3 + 3 * 22);
        assert_eq!(ids[0], Identity::Euler);
        assert_eq!(ids[6], Identity::Denominator { s: 2, t: 3 });
    }

    #[test]
    fn rejects_unknown_identity() {
        let m = Manifest::parse("version = \"x\"\norder = \"5\"\nmax_st = 10\n[[family]]\nidentity = \"nope\"\n")
            .unwrap();
        assert!(m.expand(10).is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Manifest::parse("version = \"x\"\norder = \"5\"\nmax_st = 10\nextra = 1\n").is_err());
    }
}
