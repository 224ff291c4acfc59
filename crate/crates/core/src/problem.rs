//! Turning a request (preset name or MDP document, plus parameter
//! overrides) into a model. Shared by the command line and the HTTP API.

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::mdp::{parse_mdp, validate, Mdp, MdpDocument};
use crate::recycling::{build_recycling_mdp, preset, RecyclingParams};

#[derive(Debug, Clone)]
pub enum ProblemSource {
    Preset(String),
    Document(MdpDocument),
}

/// Preset values with `overrides` applied in order. Unknown names fail.
pub fn preset_params(name: &str, overrides: &IndexMap<String, f64>) -> Result<RecyclingParams> {
    let mut params = preset(name)?.fixed;
    for (k, v) in overrides {
        params.set(k, *v)?;
    }
    Ok(params)
}

/// Builds and validates the model. A document only accepts a `gamma`
/// override; recycling parameter names have no meaning for it.
pub fn resolve_problem(source: &ProblemSource, overrides: &IndexMap<String, f64>) -> Result<Mdp> {
    match source {
        ProblemSource::Preset(name) => build_recycling_mdp(&preset_params(name, overrides)?),
        ProblemSource::Document(doc) => {
            let mut mdp = doc.to_mdp()?;
            for (k, v) in overrides {
                match k.as_str() {
                    "gamma" => mdp = mdp.with_gamma(*v),
                    _ => return Err(Error::UnknownParameter(k.clone())),
                }
            }
            let gamma = mdp.gamma();
            if !(gamma.is_finite() && (0.0..1.0).contains(&gamma)) {
                return Err(Error::Domain(format!("gamma {gamma} outside [0, 1)")));
            }
            let violations = validate(&mdp);
            if !violations.is_empty() {
                return Err(Error::Validation(violations));
            }
            Ok(mdp)
        }
    }
}

/// Reads an MDP document from text and applies overrides.
pub fn resolve_document_text(text: &str, overrides: &IndexMap<String, f64>) -> Result<Mdp> {
    if overrides.is_empty() {
        return parse_mdp(text);
    }
    let doc: MdpDocument =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    resolve_problem(&ProblemSource::Document(doc), overrides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::serialize_mdp;

    fn overrides(pairs: &[(&str, f64)]) -> IndexMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn preset_with_override() {
        let p = preset_params("exp4", &overrides(&[("r_wait", 0.5)])).unwrap();
        assert_eq!(p.r_wait, 0.5);
        assert!(matches!(
            preset_params("exp4", &overrides(&[("rwait", 0.5)])),
            Err(Error::UnknownParameter(_))
        ));
    }

    #[test]
    fn document_accepts_only_gamma() {
        let mdp = build_recycling_mdp(&RecyclingParams::default()).unwrap();
        let text = serialize_mdp(&mdp);
        let m = resolve_document_text(&text, &overrides(&[("gamma", 0.5)])).unwrap();
        assert_eq!(m.gamma(), 0.5);
        assert!(matches!(
            resolve_document_text(&text, &overrides(&[("r_wait", 0.5)])),
            Err(Error::UnknownParameter(_))
        ));
        assert!(matches!(
            resolve_document_text(&text, &overrides(&[("gamma", 1.0)])),
            Err(Error::Domain(_))
        ));
    }
}
