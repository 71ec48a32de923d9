//! Line-oriented text formats for categories, modules, twisted complexes,
//! module morphisms and pairing integrals.
//!
//! Blank lines and lines starting with `#` are ignored. Category files are
//! written canonically: objects in lexicographic order, basis elements by
//! `(degree, name)`, structure constants by `(arity, chain, inputs, output)`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::ainfcat::{AInfCategory, PairingIntegral};
use crate::amod::{yoneda_module, AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{BasisElement, Field, GradedVectorSpace, Scalar, SparseVec};
use crate::twcx::{Part, SumObject, Summand, TwistedComplex};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment lines with 1-based line numbers, split into tokens.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| (i + 1, t.split_whitespace().collect()))
        })
        .collect()
}

fn int<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("invalid {what} `{s}`")))
}

fn coef(line: usize, field: Field, s: &str) -> Result<Scalar> {
    field.parse(s).map_err(|_| perr(line, format!("invalid coefficient `{s}`")))
}

/// `lhs : inputs -> out coef`, shared by every structure-constant line.
struct Entry<'a> {
    line: usize,
    chain: Vec<&'a str>,
    inputs: Vec<&'a str>,
    out: &'a str,
    coef: &'a str,
}

fn entry<'a>(line: usize, toks: &[&'a str]) -> Result<Entry<'a>> {
    let colon = toks.iter().position(|t| *t == ":").ok_or_else(|| perr(line, "missing `:`"))?;
    let arrow = toks.iter().position(|t| *t == "->").ok_or_else(|| perr(line, "missing `->`"))?;
    if arrow < colon || toks.len() != arrow + 3 {
        return Err(perr(line, "expected `CHAIN : INPUTS -> OUTPUT COEF`"));
    }
    Ok(Entry {
        line,
        chain: toks[1..colon].to_vec(),
        inputs: toks[colon + 1..arrow].to_vec(),
        out: toks[arrow + 1],
        coef: toks[arrow + 2],
    })
}

fn field_line(line: usize, toks: &[&str]) -> Result<Field> {
    match toks {
        ["field", "Q"] => Ok(Field::Rational),
        ["field", "Fp", p] => {
            let p: u64 = int(line, p, "prime")?;
            Field::prime(p).map_err(|_| perr(line, format!("{p} is not prime")))
        }
        _ => Err(perr(line, "expected `field Q` or `field Fp P`")),
    }
}

fn field_text(f: Field) -> String {
    match f {
        Field::Rational => "field Q".into(),
        Field::Prime(p) => format!("field Fp {p}"),
    }
}

fn object_index(names: &[String], line: usize, s: &str) -> Result<usize> {
    names
        .iter()
        .position(|o| o == s)
        .ok_or_else(|| perr(line, format!("unknown object `{s}`")))
}

fn basis_index(space: &GradedVectorSpace, line: usize, s: &str) -> Result<usize> {
    space
        .index_of(s)
        .ok_or_else(|| perr(line, format!("unknown basis element `{s}`")))
}

/// Parses a category file.
pub fn parse_category(text: &str) -> Result<AInfCategory> {
    let ls = lines(text);
    let mut field = None;
    let mut bound = None;
    let mut objects: Vec<String> = Vec::new();
    let mut basis: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut units: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut mus = Vec::new();
    for (n, toks) in &ls {
        let n = *n;
        match toks[0] {
            "field" => field = Some(field_line(n, toks)?),
            "arity_bound" if toks.len() == 2 => bound = Some(int::<usize>(n, toks[1], "arity bound")?),
            "object" if toks.len() == 2 => {
                if objects.iter().any(|o| o == toks[1]) {
                    return Err(perr(n, format!("duplicate object `{}`", toks[1])));
                }
                objects.push(toks[1].to_string());
            }
            "basis" if toks.len() == 5 => basis.push((n, toks.clone())),
            "unit" if toks.len() == 3 => units.push((n, toks.clone())),
            "mu" => mus.push(entry(n, toks)?),
            _ => return Err(perr(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    let field = field.ok_or_else(|| perr(0, "missing `field` line"))?;
    let bound = bound.ok_or_else(|| perr(0, "missing `arity_bound` line"))?;
    let k = objects.len();
    let mut elems: Vec<Vec<Vec<BasisElement>>> = vec![vec![Vec::new(); k]; k];
    for (n, t) in &basis {
        let x = object_index(&objects, *n, t[1])?;
        let y = object_index(&objects, *n, t[2])?;
        if elems[x][y].iter().any(|b| b.name == t[3]) {
            return Err(perr(*n, format!("duplicate basis element `{}`", t[3])));
        }
        elems[x][y].push(BasisElement::new(t[3], int(*n, t[4], "degree")?));
    }
    let homs = elems
        .into_iter()
        .map(|row| row.into_iter().map(GradedVectorSpace::new).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut cat = AInfCategory::new(field, objects.clone(), homs, bound)?;
    let mut acc: BTreeMap<Vec<usize>, (usize, SparseVec)> = BTreeMap::new();
    for e in &mus {
        let d = e.inputs.len();
        if d == 0 || e.chain.len() != d + 1 {
            return Err(perr(e.line, "chain must have one more object than inputs"));
        }
        let objs: Vec<usize> = e
            .chain
            .iter()
            .map(|o| object_index(&objects, e.line, o))
            .collect::<Result<_>>()?;
        let mut key = objs.clone();
        for (j, name) in e.inputs.iter().enumerate() {
            key.push(basis_index(cat.hom(objs[d - 1 - j], objs[d - j]), e.line, name)?);
        }
        let out = basis_index(cat.hom(objs[0], objs[d]), e.line, e.out)?;
        let c = coef(e.line, field, e.coef)?;
        let slot = acc.entry(key).or_insert_with(|| (e.line, SparseVec::new()));
        slot.1.add_term(out, c);
    }
    for (key, (line, v)) in acc {
        let d = (key.len() - 1) / 2;
        cat.set_mu(&key[..=d], &key[d + 1..], v)
            .map_err(|err| perr(line, format!("mu entry rejected: {err}")))?;
    }
    if !units.is_empty() {
        let mut u = vec![usize::MAX; k];
        for (n, t) in &units {
            let x = object_index(&objects, *n, t[1])?;
            u[x] = basis_index(cat.hom(x, x), *n, t[2])?;
        }
        if u.contains(&usize::MAX) {
            return Err(perr(units[0].0, "strict units must be given for every object"));
        }
        cat.set_strict_units(u).map_err(|err| perr(units[0].0, err.to_string()))?;
    }
    Ok(cat)
}

/// The canonical text of a category.
pub fn emit_category(cat: &AInfCategory) -> String {
    let k = cat.num_objects();
    let names = cat.objects();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut new_obj = vec![0; k];
    for (i, &o) in order.iter().enumerate() {
        new_obj[o] = i;
    }
    // new_basis[x][y][old] = canonical position
    let mut new_basis = vec![vec![Vec::new(); k]; k];
    let mut out = vec![field_text(cat.field()), format!("arity_bound {}", cat.arity_bound())];
    out.extend(order.iter().map(|&o| format!("object {}", names[o])));
    for &x in &order {
        for &y in &order {
            let sp = cat.hom(x, y);
            let mut idx: Vec<usize> = (0..sp.dim()).collect();
            idx.sort_by(|&a, &b| (sp.degree(a), sp.name(a)).cmp(&(sp.degree(b), sp.name(b))));
            let mut pos = vec![0; sp.dim()];
            for (i, &b) in idx.iter().enumerate() {
                pos[b] = i;
                out.push(format!("basis {} {} {} {}", names[x], names[y], sp.name(b), sp.degree(b)));
            }
            new_basis[x][y] = pos;
        }
    }
    if let Some(u) = cat.strict_units() {
        for &x in &order {
            out.push(format!("unit {} {}", names[x], cat.hom(x, x).name(u[x])));
        }
    }
    let mut mus: Vec<((usize, Vec<usize>, Vec<usize>, usize), String)> = Vec::new();
    for (key, v) in cat.entries() {
        let d = (key.len() - 1) / 2;
        let objs = &key[..=d];
        let chain: Vec<usize> = objs.iter().map(|&o| new_obj[o]).collect();
        let ins: Vec<usize> = (0..d)
            .map(|j| new_basis[objs[d - 1 - j]][objs[d - j]][key[d + 1 + j]])
            .collect();
        let in_names: Vec<&str> = (0..d)
            .map(|j| cat.hom(objs[d - 1 - j], objs[d - j]).name(key[d + 1 + j]))
            .collect();
        let obj_names: Vec<&str> = objs.iter().map(|&o| names[o].as_str()).collect();
        let target = cat.hom(objs[0], objs[d]);
        for (o, c) in v.iter() {
            let text = format!(
                "mu {} : {} -> {} {}",
                obj_names.join(" "),
                in_names.join(" "),
                target.name(o),
                c
            );
            mus.push(((d, chain.clone(), ins.clone(), new_basis[objs[0]][objs[d]][o]), text));
        }
    }
    mus.sort();
    out.extend(mus.into_iter().map(|(_, t)| t));
    out.push(String::new());
    out.join("\n")
}

/// Reorders a category into its canonical form.
pub fn canonicalize(cat: &AInfCategory) -> AInfCategory {
    parse_category(&emit_category(cat)).expect("emitted files parse")
}

/// Parses a module over `cat`.
pub fn parse_module(text: &str, cat: &Arc<AInfCategory>) -> Result<AInfModule> {
    let ls = lines(text);
    let names = cat.objects().to_vec();
    let f = cat.field();
    let mut bound = None;
    let mut elems: Vec<Vec<BasisElement>> = vec![Vec::new(); cat.num_objects()];
    let mut mus = Vec::new();
    for (n, toks) in &ls {
        let n = *n;
        match toks[0] {
            "module" => {}
            "arity_bound" if toks.len() == 2 => bound = Some(int::<usize>(n, toks[1], "arity bound")?),
            "space" if toks.len() == 4 => {
                let x = object_index(&names, n, toks[1])?;
                elems[x].push(BasisElement::new(toks[2], int(n, toks[3], "degree")?));
            }
            "mu" => mus.push(entry(n, toks)?),
            _ => return Err(perr(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    let spaces = elems.into_iter().map(GradedVectorSpace::new).collect::<Result<Vec<_>>>()?;
    let mut m = AInfModule::new(cat.clone(), spaces, bound.unwrap_or(cat.arity_bound()))?;
    let mut acc: BTreeMap<(Vec<usize>, Vec<usize>), (usize, SparseVec)> = BTreeMap::new();
    for e in &mus {
        let (objs, inputs) = module_key(&m, &names, e)?;
        let out = basis_index(m.space(objs[0]), e.line, e.out)?;
        let slot = acc.entry((objs, inputs)).or_insert_with(|| (e.line, SparseVec::new()));
        slot.1.add_term(out, coef(e.line, f, e.coef)?);
    }
    for ((objs, inputs), (line, v)) in acc {
        m.set_mu(&objs, &inputs, v)
            .map_err(|err| perr(line, format!("mu entry rejected: {err}")))?;
    }
    Ok(m)
}

/// `X_0..X_{d-1} : b a_{d-1} .. a_1` resolved against the spaces of `m`.
fn module_key(m: &AInfModule, names: &[String], e: &Entry) -> Result<(Vec<usize>, Vec<usize>)> {
    let d = e.inputs.len();
    if d == 0 || e.chain.len() != d {
        return Err(perr(e.line, "chain must have as many objects as inputs"));
    }
    let objs: Vec<usize> = e
        .chain
        .iter()
        .map(|o| object_index(names, e.line, o))
        .collect::<Result<_>>()?;
    let spaces = m.input_spaces(&objs);
    let inputs = e
        .inputs
        .iter()
        .zip(spaces)
        .map(|(s, sp)| basis_index(sp, e.line, s))
        .collect::<Result<_>>()?;
    Ok((objs, inputs))
}

fn emit_table<'a>(
    head: &str,
    m: &AInfModule,
    entries: impl Iterator<Item = (&'a Vec<usize>, &'a SparseVec)>,
    target: &AInfModule,
) -> Vec<String> {
    let names = m.category().objects();
    let mut rows: Vec<(Vec<usize>, usize, String)> = Vec::new();
    for (key, v) in entries {
        let d = key.len() / 2;
        let objs = &key[..d];
        let spaces = m.input_spaces(objs);
        let ins: Vec<&str> = key[d..].iter().zip(&spaces).map(|(&i, s)| s.name(i)).collect();
        let chain: Vec<&str> = objs.iter().map(|&o| names[o].as_str()).collect();
        for (o, c) in v.iter() {
            let text = format!(
                "{head} {} : {} -> {} {}",
                chain.join(" "),
                ins.join(" "),
                target.space(objs[0]).name(o),
                c
            );
            rows.push((key.clone(), o, text));
        }
    }
    rows.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    rows.into_iter().map(|r| r.2).collect()
}

fn emit_spaces(m: &AInfModule) -> Vec<String> {
    let names = m.category().objects();
    let mut out = Vec::new();
    for (x, sp) in m.spaces().iter().enumerate() {
        for b in sp.basis() {
            out.push(format!("space {} {} {}", names[x], b.name, b.degree));
        }
    }
    out
}

pub fn emit_module(m: &AInfModule) -> String {
    let mut out = vec!["module".to_string(), format!("arity_bound {}", m.arity_bound())];
    out.extend(emit_spaces(m));
    out.extend(emit_table("mu", m, m.table().iter(), m));
    out.push(String::new());
    out.join("\n")
}

/// Parses a twisted complex over `cat`.
pub fn parse_complex(text: &str, cat: &Arc<AInfCategory>) -> Result<TwistedComplex> {
    let ls = lines(text);
    let names = cat.objects().to_vec();
    let f = cat.field();
    let mut name = String::from("X");
    let mut objs: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    let mut gens: Vec<Vec<BasisElement>> = Vec::new();
    let mut deltas = Vec::new();
    for (n, toks) in &ls {
        let n = *n;
        match toks[0] {
            "complex" if toks.len() == 2 => name = toks[1].to_string(),
            "summand" if toks.len() == 4 => {
                let i: usize = int(n, toks[1], "summand index")?;
                if i != objs.len() {
                    return Err(perr(n, "summands must be numbered 0, 1, … in order"));
                }
                objs.push(object_index(&names, n, toks[2])?);
                order.push(int(n, toks[3], "filtration rank")?);
                gens.push(Vec::new());
            }
            "gen" if toks.len() == 4 => {
                let i: usize = int(n, toks[1], "summand index")?;
                let g = gens.get_mut(i).ok_or_else(|| perr(n, format!("unknown summand {i}")))?;
                g.push(BasisElement::new(toks[2], int(n, toks[3], "degree")?));
            }
            "delta" if toks.len() == 9 && toks[3] == "->" && toks[6] == ":" => deltas.push((n, toks.clone())),
            _ => return Err(perr(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    let summands = gens
        .into_iter()
        .zip(&objs)
        .map(|(g, &o)| {
            Ok(Summand {
                mult: GradedVectorSpace::new(g)?,
                object: o,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = SumObject::new(summands);
    let mut entries = Vec::new();
    for (n, t) in &deltas {
        let src: usize = int(*n, t[1], "summand index")?;
        let tgt: usize = int(*n, t[4], "summand index")?;
        if src >= sum.len() || tgt >= sum.len() {
            return Err(perr(*n, "summand index out of range"));
        }
        let part = Part {
            src,
            p: basis_index(sum.mult(src), *n, t[2])?,
            tgt,
            q: basis_index(sum.mult(tgt), *n, t[5])?,
            x: basis_index(cat.hom(sum.object(src), sum.object(tgt)), *n, t[7])?,
        };
        entries.push((part, coef(*n, f, t[8])?));
    }
    TwistedComplex::from_parts(cat.clone(), name, sum, &entries, order)
        .map_err(|err| perr(deltas.first().map_or(0, |d| d.0), err.to_string()))
}

pub fn emit_complex(x: &TwistedComplex) -> String {
    let cat = x.category();
    let names = cat.objects();
    let sum = x.sum();
    let mut out = vec![format!("complex {}", x.name().replace(char::is_whitespace, "_"))];
    for i in 0..sum.len() {
        out.push(format!("summand {i} {} {}", names[sum.object(i)], x.order()[i]));
        for b in sum.mult(i).basis() {
            out.push(format!("gen {i} {} {}", b.name, b.degree));
        }
    }
    let mut ds = x.delta_entries();
    ds.sort_by_key(|(p, _)| *p);
    for (p, c) in ds {
        out.push(format!(
            "delta {} {} -> {} {} : {} {c}",
            p.src,
            sum.mult(p.src).name(p.p),
            p.tgt,
            sum.mult(p.tgt).name(p.q),
            cat.hom(sum.object(p.src), sum.object(p.tgt)).name(p.x)
        ));
    }
    out.push(String::new());
    out.join("\n")
}

/// A module named on the command line: `yoneda:OBJ`, or a module or complex file.
pub enum Target {
    Module(Arc<AInfModule>),
    Complex(Arc<TwistedComplex>),
}

impl Target {
    pub fn module(&self) -> Arc<AInfModule> {
        match self {
            Target::Module(m) => m.clone(),
            Target::Complex(x) => Arc::new(crate::twcx::tw_to_module(x)),
        }
    }
}

pub fn load_target(arg: &str, base: &Path, cat: &Arc<AInfCategory>) -> Result<Target> {
    if let Some(o) = arg.strip_prefix("yoneda:") {
        let x = cat.object_index(o)?;
        return Ok(Target::Module(Arc::new(yoneda_module(cat, x))));
    }
    let path = base.join(arg);
    let text = std::fs::read_to_string(&path)?;
    match lines(&text).first().map(|(_, t)| t[0]) {
        Some("complex") => Ok(Target::Complex(Arc::new(parse_complex(&text, cat)?))),
        Some("module") => Ok(Target::Module(Arc::new(parse_module(&text, cat)?))),
        _ => Err(perr(1, format!("{}: expected a `module` or `complex` file", path.display()))),
    }
}

/// Parses a morphism file; `source` and `target` are resolved relative to its directory.
pub fn parse_morphism(path: &Path, cat: &Arc<AInfCategory>) -> Result<PreModuleHom> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let ls = lines(&text);
    let f = cat.field();
    let names = cat.objects().to_vec();
    let (mut src, mut tgt, mut degree) = (None, None, None);
    let mut ts = Vec::new();
    for (n, toks) in &ls {
        let n = *n;
        match toks[0] {
            "morphism" => {}
            "source" if toks.len() == 2 => src = Some(load_target(toks[1], base, cat)?.module()),
            "target" if toks.len() == 2 => tgt = Some(load_target(toks[1], base, cat)?.module()),
            "degree" if toks.len() == 2 => degree = Some(int::<i64>(n, toks[1], "degree")?),
            "t" => ts.push(entry(n, toks)?),
            _ => return Err(perr(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    let src = src.ok_or_else(|| perr(0, "missing `source` line"))?;
    let tgt = tgt.ok_or_else(|| perr(0, "missing `target` line"))?;
    let mut t = PreModuleHom::zero(src.clone(), tgt.clone(), degree.unwrap_or(0));
    let mut acc: BTreeMap<(Vec<usize>, Vec<usize>), (usize, SparseVec)> = BTreeMap::new();
    for e in &ts {
        let (objs, inputs) = module_key(&src, &names, e)?;
        let out = basis_index(tgt.space(objs[0]), e.line, e.out)?;
        let slot = acc.entry((objs, inputs)).or_insert_with(|| (e.line, SparseVec::new()));
        slot.1.add_term(out, coef(e.line, f, e.coef)?);
    }
    for ((objs, inputs), (line, v)) in acc {
        t.set_component(&objs, &inputs, v)
            .map_err(|err| perr(line, format!("component rejected: {err}")))?;
    }
    Ok(t)
}

pub fn emit_morphism(t: &PreModuleHom, source: &str, target: &str) -> String {
    let mut out = vec![
        "morphism".to_string(),
        format!("source {source}"),
        format!("target {target}"),
        format!("degree {}", t.degree),
    ];
    out.extend(emit_table("t", &t.source, t.table().iter(), &t.target));
    out.push(String::new());
    out.join("\n")
}

/// `integral OBJ DEG`, then `reference NAME COEF` lines and a `value COEF` line.
pub fn parse_integral(text: &str, cat: &AInfCategory) -> Result<PairingIntegral> {
    let f = cat.field();
    let mut head = None;
    let mut reference = SparseVec::new();
    let mut value = f.one();
    for (n, toks) in lines(text) {
        match (toks[0], toks.len()) {
            ("integral", 3) => {
                let x = object_index(cat.objects(), n, toks[1])?;
                head = Some((x, int::<i64>(n, toks[2], "degree")?));
            }
            ("reference", 3) => {
                let (x, _) = head.ok_or_else(|| perr(n, "`integral` line must come first"))?;
                reference.add_term(basis_index(cat.hom(x, x), n, toks[1])?, coef(n, f, toks[2])?);
            }
            ("value", 2) => value = coef(n, f, toks[1])?,
            _ => return Err(perr(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    let (object, degree) = head.ok_or_else(|| perr(0, "missing `integral` line"))?;
    Ok(PairingIntegral {
        object,
        degree,
        reference,
        value,
    })
}

pub fn emit_integral(i: &PairingIntegral, cat: &AInfCategory) -> String {
    let x = i.object;
    let mut out = vec![format!("integral {} {}", cat.objects()[x], i.degree)];
    for (k, c) in i.reference.iter() {
        out.push(format!("reference {} {c}", cat.hom(x, x).name(k)));
    }
    out.push(format!("value {}", i.value));
    out.push(String::new());
    out.join("\n")
}
