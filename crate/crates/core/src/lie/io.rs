//! JSON algebra files.
//!
//! Realized: `{"variables":[..],"parameters":[..],"generators":[{"name","op"}]}`.
//! Abstract: `{"dim":n,"names":[..],"brackets":{"i,j":[["k","c"],..]}}` with
//! 0-based indices and `i < j`; an optional `"parameters"` list names the
//! Laurent symbols allowed in coefficients.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{from_realization, Element, LieAlgebra};
use crate::error::{Error, Result};
use crate::poly::VarSet;
use crate::scalar::Scalar;
use crate::weyl::{DiffOp, VectorField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizedGenerator {
    pub name: String,
    pub op: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizedAlgebraFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub generators: Vec<RealizedGenerator>,
}

impl RealizedAlgebraFile {
    pub fn variable_set(&self) -> Result<Arc<VarSet>> {
        VarSet::new(&self.variables, &self.parameters)
    }

    /// Parsed operators, in file order.
    #[allow(clippy::type_complexity)]
    pub fn operators(&self) -> Result<(Arc<VarSet>, Vec<(String, DiffOp)>)> {
        let vars = self.variable_set()?;
        let mut out = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let op = DiffOp::parse(&vars, &g.op).map_err(|e| Error::Invalid(format!("generator `{}`: {e}", g.name)))?;
            out.push((g.name.clone(), op));
        }
        Ok((vars, out))
    }

    /// Extracts the algebra; every generator must be a vector field.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let (_, ops) = self.operators()?;
        let mut names = Vec::with_capacity(ops.len());
        let mut fields = Vec::with_capacity(ops.len());
        for (n, op) in ops {
            fields.push(VectorField::try_from(op).map_err(|e| Error::Invalid(format!("generator `{n}`: {e}")))?);
            names.push(n);
        }
        from_realization(names, &fields)
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Result<Self> {
        let r = alg
            .realization()
            .ok_or_else(|| Error::Invalid("algebra has no realization".into()))?;
        let vars = r.vars();
        Ok(RealizedAlgebraFile {
            variables: vars.names().to_vec(),
            parameters: vars.param_names().iter().map(|s| s.to_string()).collect(),
            generators: alg
                .names()
                .iter()
                .zip(r.ops())
                .map(|(n, op)| RealizedGenerator {
                    name: n.clone(),
                    op: op.to_string(),
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbstractAlgebraFile {
    pub dim: usize,
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<String>,
    pub brackets: Map<String, Value>,
}

impl AbstractAlgebraFile {
    pub fn from_algebra<S: Scalar>(alg: &LieAlgebra<S>) -> Self {
        let mut brackets = Map::new();
        for ((i, j), e) in alg.entries() {
            let terms: Vec<Value> = e
                .coords()
                .map(|(k, c)| Value::Array(vec![Value::String(k.to_string()), Value::String(c.to_string())]))
                .collect();
            brackets.insert(format!("{i},{j}"), Value::Array(terms));
        }
        AbstractAlgebraFile {
            dim: alg.dim(),
            names: alg.names().to_vec(),
            parameters: alg.parameters().to_vec(),
            brackets,
        }
    }

    pub fn to_algebra<S: Scalar>(&self) -> Result<LieAlgebra<S>> {
        if self.names.len() != self.dim {
            return Err(Error::Invalid(format!(
                "{} names for dimension {}",
                self.names.len(),
                self.dim
            )));
        }
        let bad = |what: &str| Error::Invalid(format!("malformed bracket entry: {what}"));
        let mut entries = Vec::new();
        for (key, terms) in &self.brackets {
            let (i, j) = key.split_once(',').ok_or_else(|| bad(key))?;
            let i: usize = i.trim().parse().map_err(|_| bad(key))?;
            let j: usize = j.trim().parse().map_err(|_| bad(key))?;
            let mut coords = Vec::new();
            for t in terms.as_array().ok_or_else(|| bad(key))? {
                let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad(key))?;
                let k: usize = pair[0].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad(key))?;
                let c = S::parse_scalar(pair[1].as_str().ok_or_else(|| bad(key))?)?;
                coords.push((k, c));
            }
            if i >= self.dim || j >= self.dim {
                return Err(bad(key));
            }
            entries.push((i, j, Element::from_coords(self.dim, coords)?));
        }
        Ok(LieAlgebra::new(self.names.clone(), entries)?.with_parameters(self.parameters.clone()))
    }
}

impl<S: Scalar> LieAlgebra<S> {
    /// Canonical abstract JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AbstractAlgebraFile::from_algebra(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: AbstractAlgebraFile = serde_json::from_str(text)?;
        f.to_algebra()
    }
}
