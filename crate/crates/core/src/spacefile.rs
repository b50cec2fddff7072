//! The JSON space-specification format.
//!
//! Every number is an exact rational string (`"3/2"`) or the name of an
//! entry of `parameters`, which can be overridden from the command line.
//! Indices into `m` (blocks, one-form covectors, metric tuples) are positions
//! within m, not global basis indices.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{HomogeneousSpace, LieAlgebraSpec, ModuleSplit, ReductiveSplit};
use crate::error::{Error, Result};
use crate::exactnum::{parse_rat, MPoly, Rat, RatMatrix, VarContext};
use crate::metrics::{BlockForm, BlockForms, MetricParams, NormFamily, NormSpec, OneFormSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// `(a, b, [(k, value)])`.
pub type BracketEntry = (usize, usize, Vec<(usize, String)>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, String>,
    pub basis: Vec<String>,
    /// `(a, b, [(k, value)])` meaning `[e_a, e_b] = sum value e_k`.
    pub brackets: Vec<BracketEntry>,
    pub h: Vec<usize>,
    pub m: Vec<usize>,
    /// Split basis vectors (columns) in original coordinates, when the split
    /// is not spanned by original basis vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_basis: Option<Vec<Vec<String>>>,
    pub blocks: Vec<Vec<usize>>,
    /// One square matrix per block; identity forms when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_forms: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub one_forms: Vec<Vec<String>>,
    pub norm: NormFile,
    #[serde(default, skip_serializing_if = "Flags::is_empty")]
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormFile {
    Qpower {
        q: String,
        metrics: Vec<Vec<String>>,
    },
    WeightedSquares {
        weights: Vec<String>,
        metrics: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        form_weights: Vec<String>,
        /// Indices into `one_forms`.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        forms: Vec<usize>,
    },
    Randers {
        metric: Vec<String>,
        form: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Asserted by the author of the file; never verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal_isometry_group: Option<bool>,
}

impl Flags {
    fn is_empty(&self) -> bool {
        self.maximal_isometry_group.is_none()
    }
}

/// A validated space file together with the objects it describes.
#[derive(Debug, Clone)]
pub struct ParsedSpace {
    /// The file with overrides applied to `parameters`.
    pub file: SpaceFile,
    pub params: BTreeMap<String, Rat>,
    pub space: Arc<HomogeneousSpace>,
    pub norm: Arc<NormSpec>,
}

/// Parses `key=rational` as given to `--param`.
pub fn parse_override(s: &str) -> Result<(String, Rat)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::parse("--param", format!("expected key=rational, got \"{s}\"")))?;
    let value = parse_rat(v).map_err(|e| Error::parse(format!("--param {k}"), e.to_string()))?;
    Ok((k.trim().to_string(), value))
}

impl ParsedSpace {
    pub fn parse_str(json: &str, overrides: &[(String, Rat)]) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(json)?;
        Self::from_file(file, overrides)
    }

    pub fn load(path: &Path, overrides: &[(String, Rat)]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text, overrides)
    }

    pub fn from_file(mut file: SpaceFile, overrides: &[(String, Rat)]) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::parse(
                "schema_version",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    file.schema_version
                ),
            ));
        }
        for (k, v) in overrides {
            match file.parameters.get_mut(k) {
                Some(slot) => *slot = v.to_string(),
                None => {
                    return Err(Error::parse(
                        format!("--param {k}"),
                        format!("unknown parameter (known: {})", known(&file.parameters)),
                    ))
                }
            }
        }
        let mut params = BTreeMap::new();
        for (k, v) in &file.parameters {
            if parse_rat(k).is_ok() {
                return Err(Error::parse(
                    format!("parameters.{k}"),
                    "parameter names must not be numbers",
                ));
            }
            params.insert(
                k.clone(),
                parse_rat(v).map_err(|e| relabel(e, &format!("parameters.{k}")))?,
            );
        }
        let r = Resolver { params: &params };

        let brackets = file
            .brackets
            .iter()
            .enumerate()
            .map(|(i, (a, b, terms))| {
                let terms = terms
                    .iter()
                    .enumerate()
                    .map(|(t, (k, v))| Ok((*k, r.value(v, &format!("brackets[{i}][2][{t}]"))?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((*a, *b, terms))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = LieAlgebraSpec::new(file.basis.clone(), brackets)?;
        let basis_change = match &file.split_basis {
            None => None,
            Some(cols) => {
                let cols = cols
                    .iter()
                    .enumerate()
                    .map(|(j, c)| r.vector(c, &format!("split_basis[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                Some(RatMatrix::from_columns(&cols)?)
            }
        };
        let split = ReductiveSplit::new(file.h.clone(), file.m.clone(), basis_change)?;
        let msplit = ModuleSplit::new(file.blocks.clone(), file.m.len())?;
        let space = HomogeneousSpace::new(spec, split, msplit.clone())?;

        let forms = match &file.block_forms {
            None => BlockForms::standard(&msplit),
            Some(mats) => {
                if mats.len() != file.blocks.len() {
                    return Err(Error::parse(
                        "block_forms",
                        format!("{} matrices for {} blocks", mats.len(), file.blocks.len()),
                    ));
                }
                let forms = mats
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        let field = format!("block_forms[{i}]");
                        let rows = rows
                            .iter()
                            .enumerate()
                            .map(|(k, row)| r.vector(row, &format!("{field}[{k}]")))
                            .collect::<Result<Vec<_>>>()?;
                        BlockForm::new(i, RatMatrix::from_rows(rows)?)
                            .map_err(|e| relabel(e, &field))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BlockForms::new(&msplit, forms)?
            }
        };

        let one_forms = file
            .one_forms
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let field = format!("one_forms[{i}]");
                OneFormSpec::new(&space, r.vector(c, &field)?).map_err(|e| relabel(e, &field))
            })
            .collect::<Result<Vec<_>>>()?;
        let form_at = |i: usize, field: &str| -> Result<OneFormSpec> {
            one_forms
                .get(i)
                .cloned()
                .ok_or_else(|| Error::parse(field, format!("no one-form with index {i}")))
        };
        let metric = |c: &[String], field: &str| -> Result<MetricParams> {
            if c.len() != msplit.n_blocks() {
                return Err(Error::parse(
                    field,
                    format!("{} values for {} blocks", c.len(), msplit.n_blocks()),
                ));
            }
            MetricParams::new(r.vector(c, field)?).map_err(|e| relabel(e, field))
        };
        let family = match &file.norm {
            NormFile::Qpower { q, metrics } => NormFamily::QPower {
                q: r.value(q, "norm.q")?,
                metrics: metrics
                    .iter()
                    .enumerate()
                    .map(|(j, c)| metric(c, &format!("norm.metrics[{j}]")))
                    .collect::<Result<_>>()?,
            },
            NormFile::WeightedSquares {
                weights,
                metrics,
                form_weights,
                forms,
            } => NormFamily::WeightedSquares {
                weights: r.vector(weights, "norm.weights")?,
                metrics: metrics
                    .iter()
                    .enumerate()
                    .map(|(j, c)| metric(c, &format!("norm.metrics[{j}]")))
                    .collect::<Result<_>>()?,
                form_weights: r.vector(form_weights, "norm.form_weights")?,
                forms: forms
                    .iter()
                    .enumerate()
                    .map(|(m, i)| form_at(*i, &format!("norm.forms[{m}]")))
                    .collect::<Result<_>>()?,
            },
            NormFile::Randers { metric: c, form } => NormFamily::Randers {
                metric: metric(c, "norm.metric")?,
                form: form_at(*form, "norm.form")?,
            },
        };
        let norm = NormSpec::new(forms, family).map_err(|e| relabel(e, "norm"))?;
        Ok(ParsedSpace {
            file,
            params,
            space: Arc::new(space),
            norm: Arc::new(norm),
        })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn maximal_isometry_group(&self) -> Option<bool> {
        self.file.flags.maximal_isometry_group
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.file)?)
    }

    /// The metric tuples of the norm as polynomials in the file parameters,
    /// so that a symbolic graph can be printed in the file's own names.
    pub fn metric_polys(&self) -> Result<(VarContext, Vec<Vec<MPoly>>)> {
        let names: Vec<String> = self.params.keys().cloned().collect();
        let ctx = VarContext::params_only(&names);
        let tuples: Vec<&Vec<String>> = match &self.file.norm {
            NormFile::Qpower { metrics, .. } | NormFile::WeightedSquares { metrics, .. } => {
                metrics.iter().collect()
            }
            NormFile::Randers { metric, .. } => vec![metric],
        };
        let polys = tuples
            .iter()
            .map(|t| {
                t.iter()
                    .map(|s| match ctx.index_of(s.trim()) {
                        Some(i) => Ok(MPoly::var(&ctx, i)),
                        None => Ok(MPoly::constant(&ctx, parse_rat(s)?)),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ctx, polys))
    }
}

struct Resolver<'a> {
    params: &'a BTreeMap<String, Rat>,
}

impl Resolver<'_> {
    fn value(&self, s: &str, field: &str) -> Result<Rat> {
        if let Some(v) = self.params.get(s.trim()) {
            return Ok(v.clone());
        }
        parse_rat(s).map_err(|_| {
            Error::parse(
                field,
                format!(
                    "\"{s}\" is neither an exact rational nor a parameter (known: {})",
                    known(self.params)
                ),
            )
        })
    }

    fn vector(&self, v: &[String], field: &str) -> Result<Vec<Rat>> {
        v.iter()
            .enumerate()
            .map(|(i, s)| self.value(s, &format!("{field}[{i}]")))
            .collect()
    }
}

fn known<V>(m: &BTreeMap<String, V>) -> String {
    if m.is_empty() {
        "none".into()
    } else {
        m.keys().cloned().collect::<Vec<_>>().join(", ")
    }
}

fn relabel(e: Error, field: &str) -> Error {
    match e {
        Error::Parse { field: f, message } => Error::parse(format!("{field}: {f}"), message),
        Error::InvalidStructure(m) | Error::InvalidNorm(m) => Error::parse(field, m),
        other => other,
    }
}
