//! Validation of the documented message schemas and canonicalization of
//! timing-bearing payloads.
//!
//! Field-by-field schema documentation lives in `docs/schemas.md`; this
//! module enforces the required fields, types, and enum value lists.

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{schema}: {message}")]
pub struct SchemaViolation {
    pub schema: &'static str,
    pub message: String,
}

fn fail(schema: &'static str, message: impl Into<String>) -> SchemaViolation {
    SchemaViolation {
        schema,
        message: message.into(),
    }
}

fn require_field<'a>(
    schema: &'static str,
    value: &'a Value,
    field: &str,
) -> Result<&'a Value, SchemaViolation> {
    value
        .get(field)
        .ok_or_else(|| fail(schema, format!("missing required field {field:?}")))
}

fn require_str<'a>(
    schema: &'static str,
    value: &'a Value,
    field: &str,
) -> Result<&'a str, SchemaViolation> {
    require_field(schema, value, field)?
        .as_str()
        .ok_or_else(|| fail(schema, format!("field {field:?} must be a string")))
}

fn require_number(schema: &'static str, value: &Value, field: &str) -> Result<f64, SchemaViolation> {
    require_field(schema, value, field)?
        .as_f64()
        .ok_or_else(|| fail(schema, format!("field {field:?} must be a number")))
}

fn require_enum(
    schema: &'static str,
    value: &Value,
    field: &str,
    allowed: &[&str],
) -> Result<(), SchemaViolation> {
    let v = require_str(schema, value, field)?;
    if !allowed.contains(&v) {
        return Err(fail(
            schema,
            format!("field {field:?} value {v:?} not in {allowed:?}"),
        ));
    }
    Ok(())
}

const EVENT_TYPES: &[&str] = &["wildfire", "flood", "none"];
const SPECIALISTS: &[&str] = &["wildfire", "flood"];
const CLASSIFICATIONS: &[&str] = &["event_confirmed", "past_event", "no_event"];
const DECISIONS: &[&str] = &["alert", "no_alert"];
const TOOL_NAMES: &[&str] = &["ml_fire", "index_fire", "burned_area", "ml_flood"];

pub fn validate_hypothesis(value: &Value) -> Result<(), SchemaViolation> {
    const S: &str = "HypothesisReport";
    require_number(S, value, "schema_version")?;
    require_str(S, value, "scene_id")?;
    require_enum(S, value, "predicted_event", EVENT_TYPES)?;
    let reasoning = require_str(S, value, "reasoning")?;
    require_number(S, value, "elapsed_ms")?;
    if value["predicted_event"] != "none" && reasoning.is_empty() {
        return Err(fail(S, "reasoning must be non-empty for a predicted event"));
    }
    Ok(())
}

fn validate_tool_result(value: &Value) -> Result<(), SchemaViolation> {
    const S: &str = "ToolResult";
    require_enum(S, value, "tool_name", TOOL_NAMES)?;
    require_field(S, value, "detected")?
        .as_bool()
        .ok_or_else(|| fail(S, "field \"detected\" must be a boolean"))?;
    let metrics = require_field(S, value, "metrics")?
        .as_object()
        .ok_or_else(|| fail(S, "field \"metrics\" must be an object"))?;
    for (k, v) in metrics {
        let v = v
            .as_f64()
            .ok_or_else(|| fail(S, format!("metric {k:?} must be a number")))?;
        if k.ends_with("_km2") && v < 0.0 {
            return Err(fail(S, format!("area metric {k:?} must be >= 0")));
        }
        if k == "hotspot_count" && (v < 0.0 || v.fract() != 0.0) {
            return Err(fail(S, "hotspot_count must be a non-negative integer"));
        }
    }
    require_number(S, value, "mask_pixels")?;
    require_number(S, value, "elapsed_ms")?;
    Ok(())
}

pub fn validate_specialist(value: &Value) -> Result<(), SchemaViolation> {
    const S: &str = "SpecialistReport";
    require_number(S, value, "schema_version")?;
    require_str(S, value, "scene_id")?;
    require_enum(S, value, "specialist", SPECIALISTS)?;
    require_enum(S, value, "classification", CLASSIFICATIONS)?;
    require_str(S, value, "reasoning")?;
    require_number(S, value, "elapsed_ms")?;
    let tools = require_field(S, value, "tool_results")?
        .as_array()
        .ok_or_else(|| fail(S, "field \"tool_results\" must be an array"))?;
    for t in tools {
        validate_tool_result(t)?;
    }
    Ok(())
}

pub fn validate_final_alert(value: &Value) -> Result<(), SchemaViolation> {
    const S: &str = "FinalAlert";
    require_number(S, value, "schema_version")?;
    require_str(S, value, "scene_id")?;
    require_enum(S, value, "decision", DECISIONS)?;
    require_enum(S, value, "event_type", EVENT_TYPES)?;
    let confidence = require_number(S, value, "confidence")?;
    if !(0.0..=1.0).contains(&confidence) {
        return Err(fail(S, format!("confidence {confidence} outside [0, 1]")));
    }
    if value["decision"] == "alert" && value["event_type"] == "none" {
        return Err(fail(S, "an alert must carry a concrete event_type"));
    }
    require_str(S, value, "reasoning")?;
    let provenance = require_field(S, value, "provenance")?;
    if let Some(h) = provenance.get("hypothesis") {
        if !h.is_null() {
            validate_hypothesis(h)?;
        }
    }
    let reports = require_field(S, provenance, "specialist_reports")?
        .as_array()
        .ok_or_else(|| fail(S, "provenance.specialist_reports must be an array"))?;
    for r in reports {
        validate_specialist(r)?;
    }
    Ok(())
}

/// Recursively removes wall-clock fields (`elapsed_ms`, any `*_ms` key, and
/// `timings` objects) so payloads can be compared across transports and
/// runs.
pub fn strip_timings(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.retain(|k, _| !(k == "timings" || k.ends_with("_ms")));
            for v in map.values_mut() {
                strip_timings(v);
            }
        }
        Value::Array(items) => {
            for v in items {
                strip_timings(v);
            }
        }
        _ => {}
    }
}

/// Serializes a payload with timing fields removed.
pub fn canonical_json<T: serde::Serialize>(payload: &T) -> String {
    let mut value = serde_json::to_value(payload).expect("payload serializes");
    strip_timings(&mut value);
    serde_json::to_string(&value).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hypothesis_schema_accepts_valid_and_rejects_bad_enum() {
        let good = json!({
            "schema_version": 1,
            "scene_id": "s",
            "predicted_event": "wildfire",
            "reasoning": "hot",
            "elapsed_ms": 3.0,
        });
        assert!(validate_hypothesis(&good).is_ok());

        let bad = json!({
            "schema_version": 1,
            "scene_id": "s",
            "predicted_event": "earthquake",
            "reasoning": "x",
            "elapsed_ms": 3.0,
        });
        assert!(validate_hypothesis(&bad).is_err());
    }

    #[test]
    fn predicted_event_requires_reasoning() {
        let v = json!({
            "schema_version": 1,
            "scene_id": "s",
            "predicted_event": "flood",
            "reasoning": "",
            "elapsed_ms": 0.0,
        });
        assert!(validate_hypothesis(&v).is_err());
    }

    #[test]
    fn strip_timings_removes_all_ms_fields() {
        let mut v = json!({
            "elapsed_ms": 12.0,
            "total_ms": 1.0,
            "timings": {"a": 1},
            "nested": [{"elapsed_ms": 5.0, "keep": true}],
            "keep": 1,
        });
        strip_timings(&mut v);
        assert_eq!(v, json!({"nested": [{"keep": true}], "keep": 1}));
    }
}
