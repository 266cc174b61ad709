//! Cross-product parameter sweeps over numeric scenario fields.

use serde_json::Value;

use super::scenario::SECTIONS;
use super::Failure;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    /// Dotted path from the document root, e.g. `salvo.p`.
    pub path: Vec<String>,
    pub values: Vec<Value>,
}

impl SweepAxis {
    pub fn name(&self) -> String {
        self.path.join(".")
    }
}

/// Parses `field=v1,v2,...`. A path that does not start with a top-level
/// key is taken relative to `section`.
pub fn parse_axis(spec: &str, section: &str) -> Result<SweepAxis, Failure> {
    let (field, list) = spec
        .split_once('=')
        .ok_or_else(|| Failure::Invalid(format!("sweep '{spec}' must look like field=v1,v2,...")))?;
    let mut path: Vec<String> = field.trim().split('.').map(str::to_owned).collect();
    if path.iter().any(String::is_empty) {
        return Err(Failure::Invalid(format!("sweep field '{field}' is not a valid path")));
    }
    if !SECTIONS.contains(&path[0].as_str()) && path[0] != "monte_carlo" {
        path.insert(0, section.to_owned());
    }
    let values = list
        .split(',')
        .map(|v| match serde_json::from_str::<Value>(v.trim()) {
            Ok(n @ Value::Number(_)) => Ok(n),
            _ => Err(Failure::Invalid(format!("sweep value '{v}' for {field} is not a number"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepAxis { path, values })
}

fn locate<'a>(doc: &'a mut Value, path: &[String]) -> Option<&'a mut Value> {
    path.iter().try_fold(doc, |node, key| match node {
        Value::Object(map) => map.get_mut(key),
        Value::Array(items) => key.parse::<usize>().ok().and_then(move |i| items.get_mut(i)),
        _ => None,
    })
}

/// Overwrites a numeric field in place.
pub fn assign(doc: &mut Value, path: &[String], value: &Value) -> Result<(), Failure> {
    let name = path.join(".");
    match locate(doc, path) {
        Some(slot @ Value::Number(_)) => {
            *slot = value.clone();
            Ok(())
        }
        Some(_) => Err(Failure::Invalid(format!("sweep field {name} is not numeric"))),
        None => Err(Failure::Invalid(format!("sweep field {name} does not exist in the scenario"))),
    }
}

/// Every combination of axis values, first axis varying slowest.
pub fn grid(axes: &[SweepAxis]) -> Vec<Vec<&Value>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect()
    })
}
