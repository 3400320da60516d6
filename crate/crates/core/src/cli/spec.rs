//! Plain-text group and subgroup descriptions.
//!
//! ```text
//! # S3 * C2
//! factors: dihedral 3; cyclic 2
//! labels: a,b; c
//! ```
//!
//! Factor descriptors: `cyclic <n>`, `dihedral <n>`, `product [<d>, <d>]`
//! and `table {<row> / <row> / ... : <generator ids>}` with rows of
//! space-separated entries. Without a `labels:` line generators are named
//! `s1, s2, ...` in declaration order.
//!
//! ```text
//! free_rank: 0
//! part: factor=0 gens=a conj=1
//! part: factor=0 gens=b conj=c
//! ```

use std::sync::Arc;

use crate::closure::KuroshData;
use crate::error::{Error, Result};
use crate::finite_group::FiniteGroup;
use crate::free_product::{FpElement, FreeProduct, SubgroupPart};
use crate::words::{MixedWord, Substitution};

/// Non-comment lines as `(key, value, line offset)`.
fn entries(text: &str) -> Result<Vec<(&str, &str, usize)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let body = line.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once(':')
            .ok_or_else(|| Error::syntax(start, format!("expected `key: value`, found `{body}`")))?;
        out.push((key.trim(), value.trim(), start));
    }
    Ok(out)
}

/// Splits on `sep` outside brackets and braces.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

fn parse_usize(text: &str, offset: usize) -> Result<usize> {
    text.trim().parse().map_err(|_| Error::syntax(offset, format!("expected a number, found `{}`", text.trim())))
}

fn parse_factor(desc: &str, offset: usize) -> Result<FiniteGroup> {
    let desc = desc.trim();
    let (kind, rest) = desc.split_once(char::is_whitespace).unwrap_or((desc, ""));
    let rest = rest.trim();
    match kind {
        "cyclic" => FiniteGroup::cyclic(parse_usize(rest, offset)?),
        "dihedral" => FiniteGroup::dihedral_reflections(parse_usize(rest, offset)?),
        "product" => {
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::syntax(offset, "expected `product [<d>, <d>]`"))?;
            let items = split_top(inner, ',');
            let [a, b] = items.as_slice() else {
                return Err(Error::syntax(offset, "product takes exactly two descriptors"));
            };
            let a = parse_factor(a, offset)?;
            let b = parse_factor(b, offset)?;
            // keep the product's default labels distinct
            let a_labels: Vec<String> = (1..=a.generators().len()).map(|i| format!("u{i}")).collect();
            let b_labels: Vec<String> = (1..=b.generators().len()).map(|i| format!("v{i}")).collect();
            FiniteGroup::direct_product(&a.with_labels(&a_labels)?, &b.with_labels(&b_labels)?)
        }
        "table" => {
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| Error::syntax(offset, "expected `table {rows : generators}`"))?;
            let (rows, gens) =
                inner.split_once(':').ok_or_else(|| Error::syntax(offset, "table needs `: <generator ids>`"))?;
            let table = rows
                .split('/')
                .map(|row| row.split_whitespace().map(|x| parse_usize(x, offset)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let gen_ids = gens.split_whitespace().map(|x| parse_usize(x, offset)).collect::<Result<Vec<_>>>()?;
            let names: Vec<String> = (1..=gen_ids.len()).map(|i| format!("t{i}")).collect();
            let gens: Vec<(&str, usize)> = names.iter().map(String::as_str).zip(gen_ids).collect();
            FiniteGroup::from_cayley_table(&table, &gens)
        }
        other => Err(Error::syntax(offset, format!("unknown factor kind `{other}`"))),
    }
}

pub fn parse_group_spec(text: &str) -> Result<Arc<FreeProduct>> {
    let mut factors: Option<Vec<FiniteGroup>> = None;
    let mut labels: Option<(Vec<Vec<String>>, usize)> = None;
    for (key, value, offset) in entries(text)? {
        match key {
            "factors" => {
                let list =
                    split_top(value, ';').into_iter().map(|d| parse_factor(d, offset)).collect::<Result<Vec<_>>>()?;
                factors = Some(list);
            }
            "labels" => {
                let per_factor = split_top(value, ';')
                    .into_iter()
                    .map(|l| l.split(',').map(|s| s.trim().to_string()).collect())
                    .collect();
                labels = Some((per_factor, offset));
            }
            other => return Err(Error::syntax(offset, format!("unknown key `{other}`"))),
        }
    }
    let mut factors = factors.ok_or_else(|| Error::syntax(0, "missing `factors:` line"))?;
    match labels {
        Some((labels, offset)) => {
            if labels.len() != factors.len() {
                return Err(Error::syntax(
                    offset,
                    format!("{} label groups for {} factors", labels.len(), factors.len()),
                ));
            }
            factors = factors.into_iter().zip(&labels).map(|(f, l)| f.with_labels(l)).collect::<Result<_>>()?;
        }
        None => {
            let mut next = 1;
            factors = factors
                .into_iter()
                .map(|f| {
                    let l: Vec<String> = (next..next + f.generators().len()).map(|i| format!("s{i}")).collect();
                    next += l.len();
                    f.with_labels(&l)
                })
                .collect::<Result<_>>()?;
        }
    }
    FreeProduct::new(factors)
}

/// A variable-free word, evaluated.
pub fn parse_element(text: &str, ambient: &Arc<FreeProduct>) -> Result<FpElement> {
    let word = MixedWord::parse(text, ambient)?;
    if let Some(v) = word.variables().into_iter().next() {
        return Err(Error::syntax(0, format!("expected a group element, found variable x{v}")));
    }
    word.evaluate(&Substitution::new())
}

/// `gens` words that must all lie in factor `factor`.
fn part_from_words(ambient: &Arc<FreeProduct>, factor: usize, gens: &[&str], conj: &str) -> Result<SubgroupPart> {
    let group = ambient.factor(factor)?;
    let mut ids = Vec::new();
    for w in gens {
        let x = parse_element(w, ambient)?;
        match x.syllables() {
            [] => {}
            [s] if s.factor() == factor => ids.push(s.elem),
            _ => return Err(Error::syntax(0, format!("`{w}` is not an element of factor {factor}"))),
        }
    }
    let subgroup = group.generated_subgroup(ids)?;
    Ok(SubgroupPart::new(factor, subgroup, parse_element(conj, ambient)?))
}

pub fn parse_subgroup_spec(text: &str, ambient: &Arc<FreeProduct>) -> Result<KuroshData> {
    let mut free_rank = 0;
    let mut parts = Vec::new();
    for (key, value, offset) in entries(text)? {
        match key {
            "free_rank" => free_rank = parse_usize(value, offset)?,
            "part" => {
                let mut fields: Vec<(&str, String)> = Vec::new();
                for tok in value.split_whitespace() {
                    match tok.split_once('=') {
                        Some((k, v)) => fields.push((k, v.to_string())),
                        None => match fields.last_mut() {
                            Some((_, v)) => {
                                v.push(' ');
                                v.push_str(tok);
                            }
                            None => return Err(Error::syntax(offset, format!("unexpected `{tok}`"))),
                        },
                    }
                }
                let get = |name: &str| fields.iter().find(|(k, _)| *k == name).map(|(_, v)| v.as_str());
                for (k, _) in &fields {
                    if !["factor", "gens", "conj"].contains(k) {
                        return Err(Error::syntax(offset, format!("unknown part field `{k}`")));
                    }
                }
                let factor =
                    parse_usize(get("factor").ok_or_else(|| Error::syntax(offset, "part needs factor="))?, offset)?;
                let gens: Vec<&str> =
                    get("gens").ok_or_else(|| Error::syntax(offset, "part needs gens="))?.split(',').collect();
                parts.push(part_from_words(ambient, factor, &gens, get("conj").unwrap_or("1"))?);
            }
            other => return Err(Error::syntax(offset, format!("unknown key `{other}`"))),
        }
    }
    Ok(KuroshData::new(ambient, free_rank, parts))
}

/// `"a;b@c"`: `;`-separated parts, each a `,`-separated list of generator
/// words inside one factor, optionally conjugated by `@word`.
pub fn parse_ball_parts(text: &str, ambient: &Arc<FreeProduct>) -> Result<Vec<SubgroupPart>> {
    text.split(';')
        .map(|part| {
            let (gens, conj) = part.split_once('@').unwrap_or((part, "1"));
            let gens: Vec<&str> = gens.split(',').map(str::trim).collect();
            let first = parse_element(gens[0], ambient)?;
            let factor = match first.syllables() {
                [s] => s.factor(),
                _ => return Err(Error::syntax(0, format!("`{}` does not name a factor element", gens[0]))),
            };
            part_from_words(ambient, factor, &gens, conj.trim())
        })
        .collect()
}
