use serde_json::{json, Value};

const RAT: &str = r"^-?[0-9]+(/[0-9]+)?$";

fn rat() -> Value {
    json!({ "type": "string", "pattern": RAT })
}

fn index() -> Value {
    json!({ "type": "array", "items": rat(), "minItems": 1 })
}

fn ext_rat() -> Value {
    json!({ "type": "string", "pattern": r"^(inf|-?[0-9]+(/[0-9]+)?)$" })
}

fn uints() -> Value {
    json!({ "type": "array", "items": { "type": "integer", "minimum": 0 } })
}

fn ram_jumps() -> Value {
    json!({
        "type": "object",
        "required": ["r", "ebar", "jumps", "orders"],
        "additionalProperties": false,
        "properties": {
            "r": { "type": "integer", "minimum": 1 },
            "ebar": { "type": "array", "items": { "type": "integer", "minimum": 1 } },
            "jumps": { "type": "array", "items": index() },
            "orders": { "type": "array", "items": { "type": "integer", "minimum": 1 }, "minItems": 1 }
        }
    })
}

fn herbrand_map() -> Value {
    json!({
        "type": "object",
        "required": ["r", "diag", "breakpoints", "slopes"],
        "additionalProperties": false,
        "properties": {
            "r": { "type": "integer", "minimum": 1 },
            "diag": { "type": "array", "items": rat() },
            "breakpoints": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["input", "output"],
                    "additionalProperties": false,
                    "properties": { "input": index(), "output": index() }
                }
            },
            "slopes": { "type": "array", "items": rat(), "minItems": 1 }
        }
    })
}

fn eis_poly() -> Value {
    json!({
        "type": "object",
        "required": ["p", "M", "minpoly", "coeffs"],
        "additionalProperties": false,
        "properties": {
            "p": { "type": "integer", "minimum": 2 },
            "M": { "type": "integer", "minimum": 1 },
            "minpoly": { "type": "array", "items": { "type": "string", "pattern": "^-?[0-9]+$" } },
            "coeffs": { "type": "array", "items": uints() }
        }
    })
}

fn witt_vec() -> Value {
    let ints = json!({ "type": "array", "items": { "type": "string", "pattern": "^-?[0-9]+$" }, "minItems": 1 });
    let rats = json!({ "type": "array", "items": rat(), "minItems": 1 });
    let tagged = |tag: &str, extra: Option<&str>, comps: Value| {
        let mut props = json!({ "ring": { "const": tag }, "p": { "type": "integer", "minimum": 2 }, "comps": comps });
        let mut req = vec!["ring", "p", "comps"];
        if let Some(k) = extra {
            props[k] = json!({ "type": "integer", "minimum": 1 });
            req.push(k);
        }
        json!({ "type": "object", "required": req, "additionalProperties": false, "properties": props })
    };
    json!({
        "oneOf": [
            tagged("int", None, ints),
            tagged("rat", None, rats),
            tagged("zp", Some("M"), uints()),
            tagged("fq", Some("m"), json!({ "type": "array", "items": uints() }))
        ]
    })
}

fn laurent() -> Value {
    let ints = json!({ "type": "array", "items": { "type": "integer" } });
    json!({
        "type": "object",
        "required": ["N", "p", "box", "terms"],
        "additionalProperties": false,
        "properties": {
            "N": { "type": "integer", "minimum": 1 },
            "p": { "type": "integer", "minimum": 2 },
            "m": { "type": "integer", "minimum": 1, "default": 1 },
            "box": {
                "type": "object",
                "required": ["D", "lo", "hi"],
                "properties": { "D": { "type": "integer", "minimum": 1 }, "lo": ints, "hi": ints }
            },
            "terms": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["exp", "coeff"],
                    "additionalProperties": false,
                    "properties": { "exp": ints, "coeff": uints() }
                }
            }
        }
    })
}

fn as_datum() -> Value {
    json!({
        "type": "object",
        "required": ["series", "case", "c"],
        "additionalProperties": false,
        "properties": {
            "series": laurent(),
            "case": { "enum": ["b2", "c"] },
            "c": rat(),
            "e_scale": { "type": "integer", "minimum": 1, "default": 1 }
        }
    })
}

fn invariants() -> Value {
    json!({
        "type": "object",
        "required": ["A", "B", "B_s"],
        "properties": { "A": ext_rat(), "B": rat(), "B_s": { "type": "array", "items": rat() } }
    })
}

fn epp_trace() -> Value {
    json!({
        "type": "object",
        "required": ["p", "case", "c", "entries", "outcome"],
        "properties": {
            "p": { "type": "integer" },
            "case": { "enum": ["b2", "c"] },
            "c": rat(),
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["step", "phase", "e_scale", "terms", "invariants"],
                    "properties": {
                        "step": { "type": "integer", "minimum": 0 },
                        "phase": { "enum": ["tilde", "plain"] },
                        "e_scale": { "type": "integer", "minimum": 1 },
                        "terms": { "type": "integer", "minimum": 0 },
                        "invariants": invariants()
                    }
                }
            },
            "outcome": {
                "oneOf": [
                    { "type": "object", "required": ["status", "n_star"], "properties": { "status": { "const": "terminated" } } },
                    { "type": "object", "required": ["status", "max_steps"], "properties": { "status": { "const": "non_terminated" } } }
                ]
            }
        }
    })
}

fn certificate() -> Value {
    json!({
        "type": "object",
        "required": ["level", "measured_v1", "threshold", "pass"],
        "properties": {
            "level": { "type": "integer", "minimum": 0 },
            "measured_v1": ext_rat(),
            "threshold": rat(),
            "pass": { "type": "boolean" }
        }
    })
}

fn artifact() -> Value {
    json!({
        "type": "object",
        "required": ["tool", "config", "inputs", "result", "pass"],
        "properties": {
            "tool": { "type": "string" },
            "config": { "type": "object" },
            "inputs": { "type": "object" },
            "result": {},
            "pass": { "type": "boolean" }
        }
    })
}

type Builder = fn() -> Value;

const TABLE: &[(&str, Builder)] = &[
    ("Artifact", artifact),
    ("ASDatum", as_datum),
    ("Certificate", certificate),
    ("EisPoly", eis_poly),
    ("EppInvariants", invariants),
    ("EppTrace", epp_trace),
    ("HerbrandMap", herbrand_map),
    ("LaurentSeries", laurent),
    ("RamJumps", ram_jumps),
    ("WittVec", witt_vec),
];

pub fn names() -> Vec<&'static str> {
    TABLE.iter().map(|(n, _)| *n).collect()
}

fn with_header(name: &str, body: Value) -> Value {
    let mut v = body;
    v["$schema"] = json!("https://json-schema.org/draft/2020-12/schema");
    v["title"] = json!(name);
    v
}

/// One schema by name, or every schema keyed by name for "all".
pub fn lookup(name: &str) -> Option<Value> {
    if name == "all" {
        let m: serde_json::Map<String, Value> = TABLE.iter().map(|(n, f)| (n.to_string(), with_header(n, f()))).collect();
        return Some(Value::Object(m));
    }
    TABLE.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(n, f)| with_header(n, f()))
}
