//! Problem files: `[kind NAME ...]` headers followed by `key = value` lines.

use std::collections::BTreeMap;
use std::sync::Arc;

use supermod_core::courant::{Hamiltonian, SymplecticSpace2};
use supermod_core::dirac::{Bivector, DiracFrame};
use supermod_core::scalar::parse_scalar_at;
use supermod_core::superalg::GeneratorTable;
use supermod_core::{AlgebroidMorphism, BaseChart, Pos, ScalarField, SkewAlgebroid, SuperPoly};

use crate::CliError;

#[derive(Debug, Clone)]
struct Entry {
    key: Vec<String>,
    value: String,
    line: usize,
    value_col: usize,
}

#[derive(Debug, Clone)]
struct Section {
    words: Vec<String>,
    line: usize,
    entries: Vec<Entry>,
}

pub struct Named<T> {
    pub algebroid: String,
    pub value: T,
}

#[derive(Default)]
pub struct Problem {
    pub chart: Option<BaseChart>,
    pub algebroids: BTreeMap<String, SkewAlgebroid>,
    pub morphisms: BTreeMap<String, AlgebroidMorphism>,
    pub hamiltonians: BTreeMap<String, Named<Hamiltonian>>,
    pub bivectors: BTreeMap<String, Named<Bivector>>,
    pub frames: BTreeMap<String, Named<DiracFrame>>,
    pub cocycles: BTreeMap<String, Named<SuperPoly>>,
    pub sections: BTreeMap<String, Named<SuperPoly>>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Input(format!("{line}:{col}: {}", msg.into()))
}

fn core_err(e: supermod_core::Error) -> CliError {
    CliError::Input(e.to_string())
}

fn split_sections(text: &str) -> Result<Vec<Section>, CliError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(err(line, indent + 1, "unterminated section header"));
            };
            let inner = inner.replace(':', " : ").replace("->", " -> ");
            let words: Vec<String> = inner.split_whitespace().map(String::from).collect();
            if words.is_empty() {
                return Err(err(line, indent + 1, "empty section header"));
            }
            out.push(Section {
                words,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(section) = out.last_mut() else {
            return Err(err(line, indent + 1, "entry outside of any section"));
        };
        let Some(eq) = body.find('=') else {
            return Err(err(line, indent + 1, "expected `key = value`"));
        };
        let key: Vec<String> = body[..eq].split_whitespace().map(String::from).collect();
        if key.is_empty() {
            return Err(err(line, indent + 1, "missing key before `=`"));
        }
        let after = &body[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        section.entries.push(Entry {
            key,
            value: after.trim().to_string(),
            line,
            value_col: eq + 2 + lead,
        });
    }
    Ok(out)
}

impl Entry {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.value_col,
        }
    }

    fn err(&self, msg: impl Into<String>) -> CliError {
        err(self.line, self.value_col, msg)
    }

    /// 1-based indices after the key word, converted to 0-based.
    fn indices(&self, count: usize, bounds: &[usize]) -> Result<Vec<usize>, CliError> {
        if self.key.len() != count + 1 {
            return Err(err(
                self.line,
                1,
                format!("`{}` expects {count} indices", self.key[0]),
            ));
        }
        self.key[1..]
            .iter()
            .zip(bounds)
            .map(|(s, &b)| match s.parse::<usize>() {
                Ok(i) if i >= 1 && i <= b => Ok(i - 1),
                _ => Err(err(self.line, 1, format!("index `{s}` out of range 1..{b}"))),
            })
            .collect()
    }

    fn scalar(&self, chart: &BaseChart) -> Result<ScalarField, CliError> {
        parse_scalar_at(&self.value, chart, self.pos()).map_err(core_err)
    }

    fn super_poly(&self, table: &Arc<GeneratorTable>) -> Result<SuperPoly, CliError> {
        SuperPoly::parse_at(&self.value, table, self.pos()).map_err(core_err)
    }
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, CliError> {
        let mut p = Problem::default();
        for s in split_sections(text)? {
            p.add_section(&s)?;
        }
        Ok(p)
    }

    fn chart(&self, line: usize) -> Result<&BaseChart, CliError> {
        self.chart
            .as_ref()
            .ok_or_else(|| err(line, 1, "a [chart] section must come first"))
    }

    fn algebroid(&self, name: &str, line: usize) -> Result<&SkewAlgebroid, CliError> {
        self.algebroids
            .get(name)
            .ok_or_else(|| err(line, 1, format!("undeclared algebroid `{name}`")))
    }

    fn check_fresh(&self, name: &str, line: usize) -> Result<(), CliError> {
        let taken = self.algebroids.contains_key(name)
            || self.morphisms.contains_key(name)
            || self.hamiltonians.contains_key(name)
            || self.bivectors.contains_key(name)
            || self.frames.contains_key(name)
            || self.cocycles.contains_key(name)
            || self.sections.contains_key(name);
        if taken {
            return Err(err(line, 1, format!("`{name}` is declared twice")));
        }
        Ok(())
    }

    /// `NAME on ALGEBROID`.
    fn name_on<'a>(&self, s: &'a Section) -> Result<(&'a str, &'a str), CliError> {
        match &s.words[..] {
            [_, name, on, alg] if on == "on" => Ok((name, alg)),
            _ => Err(err(s.line, 1, format!("expected `[{} NAME on ALGEBROID]`", s.words[0]))),
        }
    }

    fn add_section(&mut self, s: &Section) -> Result<(), CliError> {
        match s.words[0].as_str() {
            "chart" => self.add_chart(s),
            "algebroid" => self.add_algebroid(s),
            "morphism" => self.add_morphism(s),
            "hamiltonian" => self.add_hamiltonian(s),
            "bivector" => self.add_bivector(s),
            "frame" => self.add_frame(s),
            "cocycle" => self.add_cocycle(s),
            "section" => self.add_section_element(s),
            other => Err(err(s.line, 2, format!("unknown section kind `{other}`"))),
        }
    }

    fn add_chart(&mut self, s: &Section) -> Result<(), CliError> {
        if self.chart.is_some() {
            return Err(err(s.line, 1, "chart declared twice"));
        }
        let mut coords = None;
        for e in &s.entries {
            match e.key[0].as_str() {
                "coords" => coords = Some(e.value.split_whitespace().collect::<Vec<_>>()),
                k => return Err(err(e.line, 1, format!("unknown chart key `{k}`"))),
            }
        }
        let coords = coords.ok_or_else(|| err(s.line, 1, "chart needs `coords = ...`"))?;
        self.chart = Some(BaseChart::new(&coords).map_err(|e| err(s.line, 1, e.to_string()))?);
        Ok(())
    }

    fn add_algebroid(&mut self, s: &Section) -> Result<(), CliError> {
        let chart = self.chart(s.line)?.clone();
        let [_, name] = &s.words[..] else {
            return Err(err(s.line, 1, "expected `[algebroid NAME]`"));
        };
        self.check_fresh(name, s.line)?;
        let rank_entry = s
            .entries
            .iter()
            .find(|e| e.key[0] == "rank")
            .ok_or_else(|| err(s.line, 1, "algebroid needs `rank = n`"))?;
        let n: usize = rank_entry
            .value
            .parse()
            .map_err(|_| rank_entry.err("rank must be a non-negative integer"))?;
        if n > 32 {
            return Err(rank_entry.err("rank is limited to 32"));
        }
        let m = chart.dim();
        let mut a = SkewAlgebroid::new(&chart, n).map_err(core_err)?;
        for e in &s.entries {
            match e.key[0].as_str() {
                "rank" => {}
                "c" => {
                    let ix = e.indices(3, &[n, n, n])?;
                    if ix[0] >= ix[1] {
                        return Err(err(e.line, 1, "structure functions are given for i < j only"));
                    }
                    a.set_c(ix[0], ix[1], ix[2], e.scalar(&chart)?).map_err(core_err)?;
                }
                "rho" => {
                    let ix = e.indices(2, &[n, m])?;
                    a.set_rho(ix[0], ix[1], e.scalar(&chart)?).map_err(core_err)?;
                }
                k => return Err(err(e.line, 1, format!("unknown algebroid key `{k}`"))),
            }
        }
        self.algebroids.insert(name.clone(), a);
        Ok(())
    }

    fn add_morphism(&mut self, s: &Section) -> Result<(), CliError> {
        let [_, name, colon, src, arrow, dst] = &s.words[..] else {
            return Err(err(s.line, 1, "expected `[morphism NAME: SRC -> DST]`"));
        };
        if colon != ":" || arrow != "->" {
            return Err(err(s.line, 1, "expected `[morphism NAME: SRC -> DST]`"));
        }
        self.check_fresh(name, s.line)?;
        let src = self.algebroid(src, s.line)?.clone();
        let dst = self.algebroid(dst, s.line)?.clone();
        let chart = src.chart().clone();
        let (n1, n2) = (src.rank(), dst.rank());
        let mut mat = vec![vec![ScalarField::zero(chart.dim()); n2]; n1];
        for e in &s.entries {
            if e.key[0] != "phi" {
                return Err(err(e.line, 1, format!("unknown morphism key `{}`", e.key[0])));
            }
            let ix = e.indices(2, &[n1, n2])?;
            mat[ix[0]][ix[1]] = e.scalar(&chart)?;
        }
        let phi = AlgebroidMorphism::new(src, dst, mat).map_err(core_err)?;
        self.morphisms.insert(name.clone(), phi);
        Ok(())
    }

    fn add_hamiltonian(&mut self, s: &Section) -> Result<(), CliError> {
        let (name, alg) = self.name_on(s)?;
        self.check_fresh(name, s.line)?;
        let a = self.algebroid(alg, s.line)?.clone();
        let n = a.rank();
        let chart = a.chart().clone();
        let space = SymplecticSpace2::for_algebroid(&a).map_err(core_err)?;
        let mut phi = SuperPoly::zero(a.forms_table());
        let mut extra = SuperPoly::zero(space.table());
        for e in &s.entries {
            match e.key[0].as_str() {
                "phi" => {
                    let ix = e.indices(3, &[n, n, n])?;
                    if !(ix[0] < ix[1] && ix[1] < ix[2]) {
                        return Err(err(e.line, 1, "3-form components are given for i < j < k only"));
                    }
                    let mono = a.y(ix[0]).mul(&a.y(ix[1])).mul(&a.y(ix[2]));
                    phi = phi.add(&mono.scale(&e.scalar(&chart)?));
                }
                "term" => extra = extra.add(&e.super_poly(space.table())?),
                k => return Err(err(e.line, 1, format!("unknown hamiltonian key `{k}`"))),
            }
        }
        let base = Hamiltonian::from_algebroid(&a, (!phi.is_zero()).then_some(&phi)).map_err(core_err)?;
        let h = Hamiltonian::new(&space, base.value().add(&extra)).map_err(|e| err(s.line, 1, e.to_string()))?;
        self.hamiltonians.insert(
            name.to_string(),
            Named {
                algebroid: alg.to_string(),
                value: h,
            },
        );
        Ok(())
    }

    fn add_bivector(&mut self, s: &Section) -> Result<(), CliError> {
        let (name, alg) = self.name_on(s)?;
        self.check_fresh(name, s.line)?;
        let a = self.algebroid(alg, s.line)?;
        let n = a.rank();
        let chart = a.chart().clone();
        let space = SymplecticSpace2::for_algebroid(a).map_err(core_err)?;
        let mut p = Bivector::zero(&space).map_err(core_err)?;
        for e in &s.entries {
            if e.key[0] != "P" {
                return Err(err(e.line, 1, format!("unknown bivector key `{}`", e.key[0])));
            }
            let ix = e.indices(2, &[n, n])?;
            if ix[0] >= ix[1] {
                return Err(err(e.line, 1, "bivector components are given for i < j only"));
            }
            p.set(ix[0], ix[1], e.scalar(&chart)?).map_err(core_err)?;
        }
        self.bivectors.insert(
            name.to_string(),
            Named {
                algebroid: alg.to_string(),
                value: p,
            },
        );
        Ok(())
    }

    fn add_frame(&mut self, s: &Section) -> Result<(), CliError> {
        let (name, alg) = self.name_on(s)?;
        self.check_fresh(name, s.line)?;
        let a = self.algebroid(alg, s.line)?;
        let n = a.rank();
        let space = SymplecticSpace2::for_algebroid(a).map_err(core_err)?;
        let mut d: Vec<Option<SuperPoly>> = vec![None; n];
        for e in &s.entries {
            if e.key[0] != "D" {
                return Err(err(e.line, 1, format!("unknown frame key `{}`", e.key[0])));
            }
            let ix = e.indices(1, &[n])?;
            d[ix[0]] = Some(e.super_poly(space.table())?);
        }
        let sections = d
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| err(s.line, 1, format!("frame element D {} is missing", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        let frame = DiracFrame::new(&space, sections).map_err(|e| err(s.line, 1, e.to_string()))?;
        self.frames.insert(
            name.to_string(),
            Named {
                algebroid: alg.to_string(),
                value: frame,
            },
        );
        Ok(())
    }

    fn single_value<'a>(&self, s: &'a Section) -> Result<&'a Entry, CliError> {
        match &s.entries[..] {
            [e] if e.key.len() == 1 && e.key[0] == "value" => Ok(e),
            _ => Err(err(s.line, 1, format!("[{}] takes exactly one `value = ...` line", s.words[0]))),
        }
    }

    fn add_cocycle(&mut self, s: &Section) -> Result<(), CliError> {
        let (name, alg) = self.name_on(s)?;
        self.check_fresh(name, s.line)?;
        let a = self.algebroid(alg, s.line)?;
        let e = self.single_value(s)?;
        let w = e.super_poly(a.forms_table())?;
        self.cocycles.insert(
            name.to_string(),
            Named {
                algebroid: alg.to_string(),
                value: w,
            },
        );
        Ok(())
    }

    fn add_section_element(&mut self, s: &Section) -> Result<(), CliError> {
        let (name, alg) = self.name_on(s)?;
        self.check_fresh(name, s.line)?;
        let a = self.algebroid(alg, s.line)?;
        let space = SymplecticSpace2::for_algebroid(a).map_err(core_err)?;
        let e = self.single_value(s)?;
        let v = e.super_poly(space.table())?;
        if v.terms().any(|(k, _)| k.degree() != 1) {
            return Err(e.err("a section is a degree-1 expression in y and xi"));
        }
        self.sections.insert(
            name.to_string(),
            Named {
                algebroid: alg.to_string(),
                value: v,
            },
        );
        Ok(())
    }
}
