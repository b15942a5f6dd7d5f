//! Deterministic output records: `key=value` text lines or one JSON object
//! per line with sorted keys.

use serde_json::{Map, Value};

pub struct Record {
    kind: &'static str,
    // insertion order for text; JSON sorts via serde_json's BTreeMap
    fields: Vec<(String, Value)>,
}

pub trait IntoValue {
    fn into_value(self) -> Value;
}

impl IntoValue for &str {
    fn into_value(self) -> Value {
        Value::String(self.to_string())
    }
}
impl IntoValue for &String {
    fn into_value(self) -> Value {
        Value::String(self.clone())
    }
}
impl IntoValue for String {
    fn into_value(self) -> Value {
        Value::String(self)
    }
}
impl IntoValue for usize {
    fn into_value(self) -> Value {
        Value::from(self as u64)
    }
}
impl IntoValue for bool {
    fn into_value(self) -> Value {
        Value::Bool(self)
    }
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Record {
            kind,
            fields: Vec::new(),
        }
    }

    pub fn set<K: Into<String>, V: IntoValue>(&mut self, key: K, value: V) {
        self.fields.push((key.into(), value.into_value()));
    }

    pub fn emit(&self, json: bool) {
        if json {
            let mut map = Map::new();
            map.insert("record".into(), Value::String(self.kind.to_string()));
            for (k, v) in &self.fields {
                map.insert(k.clone(), v.clone());
            }
            println!("{}", Value::Object(map));
        } else {
            let parts: Vec<String> = self
                .fields
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect();
            println!("{} {}", self.kind, parts.join(" "));
        }
    }
}
