//! JSON input files: groups, hermitian elements and Galois algebras.
//!
//! Group references inside hermitian and algebra files are either inline
//! group objects or paths, resolved relative to the referencing file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use unitrace_core::group::{named_group, Element, Permutation, DEFAULT_ORDER_CAP};
use unitrace_core::{AlgebraElement, FieldElement, FiniteGroup, GaloisAlgebra, Gf2nField, GroupAlgebra, HermitianElement};

use crate::CliError;

/// One of `table`, `generators` (cycle notation, 0-based) or `catalog`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: Option<String>,
    pub order: Option<usize>,
    pub table: Option<Vec<Vec<usize>>>,
    pub degree: Option<usize>,
    pub generators: Option<Vec<Vec<Vec<usize>>>>,
    pub catalog: Option<String>,
    pub element_names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupSpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianFile {
    pub group: GroupRef,
    pub field: String,
    /// Element (index or name) to coefficient (`0x..` hex or decimal);
    /// missing elements are zero.
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub group: GroupRef,
    pub field: String,
    pub frobenius_image: ElementRef,
}

pub struct LoadedHermitian {
    pub algebra: GroupAlgebra,
    pub hermitian: HermitianElement,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn parse_field(spec: &str) -> Result<Gf2nField, CliError> {
    spec.parse::<Gf2nField>().map_err(CliError::Core)
}

fn cycles_to_permutation(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation, CliError> {
    let mut p: Permutation = (0..degree).collect();
    let mut moved = vec![false; degree];
    for cycle in cycles {
        for (i, &x) in cycle.iter().enumerate() {
            if x >= degree {
                return Err(CliError::Input(format!("point {x} outside 0..{degree}")));
            }
            if moved[x] {
                return Err(CliError::Input(format!("point {x} appears in two cycles")));
            }
            moved[x] = true;
            p[x] = cycle[(i + 1) % cycle.len()];
        }
    }
    Ok(p)
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        let sources = [self.table.is_some(), self.generators.is_some(), self.catalog.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(CliError::Input(
                "a group needs exactly one of \"table\", \"generators\" or \"catalog\"".into(),
            ));
        }
        let name = self.name.clone();
        let mut g = if let Some(table) = &self.table {
            FiniteGroup::from_table(name.unwrap_or_else(|| "G".into()), table.clone(), DEFAULT_ORDER_CAP)?
        } else if let Some(gens) = &self.generators {
            let degree = self
                .degree
                .ok_or_else(|| CliError::Input("\"generators\" needs \"degree\"".into()))?;
            let perms = gens
                .iter()
                .map(|c| cycles_to_permutation(degree, c))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_permutations(name.unwrap_or_else(|| "G".into()), degree, &perms, DEFAULT_ORDER_CAP)?
        } else {
            let cat = self.catalog.as_deref().unwrap_or_default();
            named_group(cat).ok_or_else(|| CliError::Input(format!("unknown catalog group {cat:?}")))?
        };
        if let Some(order) = self.order {
            if order != g.order() {
                return Err(CliError::Input(format!(
                    "declared order {order} but the group has order {}",
                    g.order()
                )));
            }
        }
        if let Some(names) = &self.element_names {
            g = g.with_names(names.clone())?;
        }
        Ok(g)
    }
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, CliError> {
    let spec: GroupSpec = parse(&read(path)?, path)?;
    spec.build()
}

fn resolve_group(r: &GroupRef, base: &Path) -> Result<FiniteGroup, CliError> {
    match r {
        GroupRef::Path(p) => load_group(&base.join(p)),
        GroupRef::Inline(spec) => spec.build(),
    }
}

pub fn parse_element(group: &FiniteGroup, s: &str) -> Result<Element, CliError> {
    if let Ok(i) = s.parse::<usize>() {
        if i < group.order() {
            return Ok(i);
        }
        return Err(CliError::Input(format!("element {i} outside the group")));
    }
    (0..group.order())
        .find(|&g| group.element_name(g) == s)
        .ok_or_else(|| CliError::Input(format!("unknown element {s:?}")))
}

fn parse_scalar(field: &Gf2nField, s: &str) -> Result<FieldElement, CliError> {
    let bits = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(h, 16),
        None => s.parse::<u32>(),
    }
    .map_err(|e| CliError::Input(format!("bad coefficient {s:?}: {e}")))?;
    Ok(field.element(bits)?)
}

pub fn load_hermitian(path: &Path) -> Result<LoadedHermitian, CliError> {
    let file: HermitianFile = parse(&read(path)?, path)?;
    let group = resolve_group(&file.group, &base_dir(path))?;
    let field = parse_field(&file.field)?;
    let mut coeffs = vec![FieldElement::ZERO; group.order()];
    for (k, v) in &file.coeffs {
        coeffs[parse_element(&group, k)?] = parse_scalar(&field, v)?;
    }
    let algebra = GroupAlgebra::new(group, field);
    let hermitian = algebra.make_hermitian(AlgebraElement::from_coeffs(coeffs))?;
    Ok(LoadedHermitian { algebra, hermitian })
}

pub fn load_algebra(path: &Path) -> Result<GaloisAlgebra, CliError> {
    let file: AlgebraFile = parse(&read(path)?, path)?;
    let group = resolve_group(&file.group, &base_dir(path))?;
    let field = parse_field(&file.field)?;
    let g = match &file.frobenius_image {
        ElementRef::Index(i) => parse_element(&group, &i.to_string())?,
        ElementRef::Name(n) => parse_element(&group, n)?,
    };
    Ok(GaloisAlgebra::new(Arc::new(group), g, field)?)
}

/// SHA-256 of the multiplication table as compact JSON rows.
pub fn group_hash(group: &FiniteGroup) -> String {
    let rows = serde_json::to_string(&group.table_rows()).expect("table serializes");
    hex::encode(Sha256::digest(rows.as_bytes()))
}

/// SHA-256 of the canonical field spec `gf2^n/0x..`.
pub fn field_hash(field: &Gf2nField) -> String {
    hex::encode(Sha256::digest(canonical_field(field).as_bytes()))
}

pub fn canonical_field(field: &Gf2nField) -> String {
    format!("gf2^{}/{:#x}", field.degree(), field.modulus())
}
