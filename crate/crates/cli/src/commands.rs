use supermod_core::courant::Hamiltonian;
use supermod_core::dirac::{self, Bivector};
use supermod_core::modular::{self, Cocycle1, Exactness};
use supermod_core::{Error, SkewAlgebroid, SuperPoly};

use crate::problem::{Named, Problem};
use crate::{CliError, Verb};

pub struct Report {
    pub lines: Vec<String>,
    pub ok: bool,
}

impl Report {
    fn ok(lines: Vec<String>) -> Self {
        Report { lines, ok: true }
    }

    fn fail(lines: Vec<String>) -> Self {
        Report { lines, ok: false }
    }
}

fn input(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

fn lookup<'a, T>(map: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, CliError> {
    map.get(name)
        .ok_or_else(|| CliError::Input(format!("undeclared {kind} `{name}`")))
}

fn same_base<A, B>(a: &Named<A>, b: &Named<B>, what: &str) -> Result<(), CliError> {
    if a.algebroid != b.algebroid {
        return Err(CliError::Input(format!(
            "{what} live on different algebroids (`{}` and `{}`)",
            a.algebroid, b.algebroid
        )));
    }
    Ok(())
}

fn algebroid_lines(a: &SkewAlgebroid) -> Vec<String> {
    let chart = a.chart();
    let n = a.rank();
    let mut out = vec![format!("RANK: {n}")];
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let c = a.c(i, j, k);
                if !c.is_zero() {
                    out.push(format!("c {} {} {}: {}", i + 1, j + 1, k + 1, c.display(chart)));
                }
            }
        }
    }
    for i in 0..n {
        for b in 0..a.base_dim() {
            let r = a.rho(i, b);
            if !r.is_zero() {
                out.push(format!("rho {} {}: {}", i + 1, b + 1, r.display(chart)));
            }
        }
    }
    out
}

fn quasi_poisson_gate(p: &Bivector, h: &Hamiltonian) -> Result<Option<Report>, CliError> {
    if !h.is_projectable().map_err(input)? {
        return Ok(Some(Report::fail(vec!["PROJECTABLE: no".into()])));
    }
    match dirac::quasi_poisson_check(p, h).map_err(input)?.certificate() {
        None => Ok(None),
        Some(ob) => Ok(Some(Report::fail(vec![format!("QUASI-POISSON: FAIL, obstruction = {ob}")]))),
    }
}

fn covector(problem: &Problem, name: &str, h: &Named<Hamiltonian>) -> Result<Vec<supermod_core::ScalarField>, CliError> {
    let s = lookup(&problem.sections, "section", name)?;
    same_base(s, h, "covector and Hamiltonian")?;
    let space = h.value.space();
    let n = space.split_rank().unwrap_or(0);
    let mut out = vec![supermod_core::ScalarField::zero(space.chart().dim()); n];
    for (k, c) in s.value.terms() {
        let i = k.odd.trailing_zeros() as usize;
        if i >= n {
            return Err(CliError::Input(format!("section `{name}` is not a covector (it has xi terms)")));
        }
        out[i] = c.clone();
    }
    Ok(out)
}

fn cocycle_line(key: &str, c: &Cocycle1) -> String {
    format!("{key}: {}", c.rep())
}

pub fn run(problem: &Problem, verb: &Verb) -> Result<Report, CliError> {
    match verb {
        Verb::CheckJacobi { algebroid } => {
            let a = lookup(&problem.algebroids, "algebroid", algebroid)?;
            Ok(match a.is_lie().certificate() {
                None => Report::ok(vec!["JACOBI: OK".into()]),
                Some(f) => Report::fail(vec![format!("JACOBI: FAIL, [d, d] = {}", f.display())]),
            })
        }
        Verb::Modular { algebroid, gauge } => {
            let a = lookup(&problem.algebroids, "algebroid", algebroid)?;
            let lines = match gauge {
                None => vec![cocycle_line("MODULAR COCYCLE", &modular::modular_cocycle(a).map_err(input)?)],
                Some(g) => {
                    let g = a.chart().parse(g).map_err(input)?;
                    let form = modular::characteristic_form(a, &g).map_err(input)?;
                    vec![
                        format!("GAUGE: {}", g.display(a.chart())),
                        cocycle_line("CHARACTERISTIC FORM", &form),
                    ]
                }
            };
            Ok(Report::ok(lines))
        }
        Verb::Exact {
            algebroid,
            cocycle,
            bound,
        } => {
            let a = lookup(&problem.algebroids, "algebroid", algebroid)?;
            let w = lookup(&problem.cocycles, "cocycle", cocycle)?;
            if &w.algebroid != algebroid {
                return Err(CliError::Input(format!(
                    "cocycle `{cocycle}` is declared on `{}`, not `{algebroid}`",
                    w.algebroid
                )));
            }
            let c = Cocycle1::new(a, w.value.clone()).map_err(input)?;
            Ok(match modular::is_exact(&c, *bound).map_err(input)? {
                Exactness::Exact(f) => Report::ok(vec![
                    "EXACT: yes".into(),
                    format!("PRIMITIVE: {}", f.display(a.chart())),
                ]),
                Exactness::NotExactUpTo(d) => Report::fail(vec![format!("EXACT: no primitive of degree <= {d}")]),
            })
        }
        Verb::MorphismCheck { morphism } => {
            let phi = lookup(&problem.morphisms, "morphism", morphism)?;
            Ok(match phi.is_morphism().certificate() {
                None => Report::ok(vec!["MORPHISM: OK".into()]),
                Some(f) => Report::fail(vec![format!(
                    "MORPHISM: FAIL, {}: {}",
                    f.generator, f.difference
                )]),
            })
        }
        Verb::MorphismMod { morphism } => {
            let phi = lookup(&problem.morphisms, "morphism", morphism)?;
            if let Some(f) = phi.is_morphism().certificate() {
                return Ok(Report::fail(vec![format!(
                    "MORPHISM: FAIL, {}: {}",
                    f.generator, f.difference
                )]));
            }
            let c = modular::modular_class_of_morphism(phi).map_err(input)?;
            Ok(Report::ok(vec![cocycle_line("MODULAR CLASS", &c)]))
        }
        Verb::CourantCheck { hamiltonian } => {
            let h = &lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?.value;
            let sq = h.square();
            Ok(if sq.is_zero() {
                Report::ok(vec!["COURANT: OK".into()])
            } else {
                Report::fail(vec![format!("COURANT: FAIL, {{H,H}} = {sq}")])
            })
        }
        Verb::Dorfman { hamiltonian, x, y } => {
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            let sx = lookup(&problem.sections, "section", x)?;
            let sy = lookup(&problem.sections, "section", y)?;
            same_base(sx, h, "section and Hamiltonian")?;
            same_base(sy, h, "section and Hamiltonian")?;
            let v: SuperPoly = h.value.derived_bracket(&sx.value, &sy.value).map_err(input)?;
            Ok(Report::ok(vec![format!("DORFMAN: {v}")]))
        }
        Verb::Projectable { hamiltonian } => {
            let h = &lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?.value;
            Ok(if h.is_projectable().map_err(input)? {
                Report::ok(vec!["PROJECTABLE: yes".into()])
            } else {
                Report::fail(vec!["PROJECTABLE: no".into()])
            })
        }
        Verb::Project { hamiltonian } => {
            let h = &lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?.value;
            if !h.is_projectable().map_err(input)? {
                return Ok(Report::fail(vec!["PROJECTABLE: no".into()]));
            }
            let proj = h.project_to_e().map_err(input)?;
            let a = h.algebroid_on_e().map_err(input)?;
            let mut lines = vec!["PROJECTABLE: yes".to_string()];
            lines.push(format!("HOMOLOGICAL: {}", if proj.homological { "yes" } else { "no" }));
            lines.push(format!("FIELD: {}", proj.field.display()));
            lines.extend(algebroid_lines(&a));
            Ok(Report::ok(lines))
        }
        Verb::QuasiPoisson { bivector, hamiltonian } => {
            let p = lookup(&problem.bivectors, "bivector", bivector)?;
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            same_base(p, h, "bivector and Hamiltonian")?;
            Ok(quasi_poisson_gate(&p.value, &h.value)?.unwrap_or_else(|| Report::ok(vec!["QUASI-POISSON: OK".into()])))
        }
        Verb::TwistedBracket {
            bivector,
            hamiltonian,
            alpha,
            beta,
        } => {
            let p = lookup(&problem.bivectors, "bivector", bivector)?;
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            same_base(p, h, "bivector and Hamiltonian")?;
            let a = covector(problem, alpha, h)?;
            let b = covector(problem, beta, h)?;
            if let Some(r) = quasi_poisson_gate(&p.value, &h.value)? {
                return Ok(r);
            }
            let v = dirac::twisted_bracket(&p.value, &h.value, &a, &b).map_err(input)?;
            let e = h.value.algebroid_on_e().map_err(input)?;
            let w = e.one_form(&v).map_err(input)?;
            Ok(Report::ok(vec![format!("TWISTED BRACKET: {w}")]))
        }
        Verb::DiracCheck { frame, hamiltonian } => {
            let d = lookup(&problem.frames, "frame", frame)?;
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            same_base(d, h, "frame and Hamiltonian")?;
            if !h.value.is_projectable().map_err(input)? {
                return Ok(Report::fail(vec!["PROJECTABLE: no".into()]));
            }
            match dirac::induced_algebroid(&d.value, &h.value) {
                Ok(a) => {
                    let mut lines = vec!["DIRAC: OK".to_string()];
                    lines.extend(algebroid_lines(&a));
                    Ok(Report::ok(lines))
                }
                Err(Error::ClosureFailure { alpha, beta, residual }) => Ok(Report::fail(vec![format!(
                    "DIRAC: FAIL, [D{alpha}, D{beta}] leaves the frame, residual = {residual}"
                )])),
                Err(e) => Err(input(e)),
            }
        }
        Verb::RelativeModular { target, hamiltonian } => {
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            if !h.value.is_projectable().map_err(input)? {
                return Ok(Report::fail(vec!["PROJECTABLE: no".into()]));
            }
            let class = if let Some(p) = problem.bivectors.get(target) {
                same_base(p, h, "bivector and Hamiltonian")?;
                if let Some(r) = quasi_poisson_gate(&p.value, &h.value)? {
                    return Ok(r);
                }
                dirac::relative_modular_class_of_graph(&p.value, &h.value)
            } else {
                let d = lookup(&problem.frames, "frame or bivector", target)?;
                same_base(d, h, "frame and Hamiltonian")?;
                dirac::relative_modular_class(&d.value, &h.value)
            };
            match class {
                Ok(c) => Ok(Report::ok(vec![cocycle_line("RELATIVE MODULAR CLASS", &c)])),
                Err(Error::ClosureFailure { alpha, beta, residual }) => Ok(Report::fail(vec![format!(
                    "DIRAC: FAIL, [D{alpha}, D{beta}] leaves the frame, residual = {residual}"
                )])),
                Err(e) => Err(input(e)),
            }
        }
        Verb::VerifyCor53 { bivector, hamiltonian } => {
            let p = lookup(&problem.bivectors, "bivector", bivector)?;
            let h = lookup(&problem.hamiltonians, "hamiltonian", hamiltonian)?;
            same_base(p, h, "bivector and Hamiltonian")?;
            if let Some(r) = quasi_poisson_gate(&p.value, &h.value)? {
                return Ok(r);
            }
            Ok(match dirac::verify_morphism_cor53(&p.value, &h.value).map_err(input)?.certificate() {
                None => Report::ok(vec!["MORPHISM P#: OK".into()]),
                Some(f) => Report::fail(vec![format!("MORPHISM P#: FAIL, {}: {}", f.generator, f.difference)]),
            })
        }
    }
}

