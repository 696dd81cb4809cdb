//! Acceptance run: one PASS/FAIL line per criterion, then a single assert.

use std::path::Path;
use std::process::Command;

use supermod_core::algebroid::forms_table;
use supermod_core::courant::{Hamiltonian, SymplecticSpace2};
use supermod_core::dirac::{self, Bivector, DiracFrame};
use supermod_core::modular;
use supermod_core::superalg::{Generator, GeneratorTable, Key};
use supermod_core::{batch, random, BaseChart, ScalarField, SkewAlgebroid, SuperPoly};

type Check = Result<(), String>;

fn first_failure(label: &str, count: u64, f: impl Fn(u64) -> Check + Sync + Send) -> Check {
    let results = batch::map_seeds(count, |s| f(s).map_err(|e| format!("{label} seed {s}: {e}")));
    results.into_iter().collect::<Result<Vec<()>, String>>().map(|_| ())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chart_for(seed: u64) -> BaseChart {
    BaseChart::standard(1 + (seed % 3) as usize)
}

fn rank_for(seed: u64) -> usize {
    1 + ((seed / 3) % 4) as usize
}

// 1
fn bracket_and_anchor_on_frame() -> Check {
    first_failure("lie algebroid", 120, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let a = random::lie_algebroid(&mut r, &chart, rank_for(seed));
        let h = Hamiltonian::from_algebroid(&a, None).map_err(|e| e.to_string())?;
        let s = h.space();
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                let got = h.derived_bracket(&s.xi(i), &s.xi(j)).map_err(|e| e.to_string())?;
                let mut want = SuperPoly::zero(s.table());
                for k in 0..a.rank() {
                    if i != j {
                        want = want.add(&s.xi(k).scale(a.c(i, j, k)));
                    }
                }
                ensure(got == want, || format!("[xi{}, xi{}] = {got}, want {want}", i + 1, j + 1))?;
            }
            for b in 0..chart.dim() {
                let got = h.anchor_apply(&s.xi(i), &s.x(b)).map_err(|e| e.to_string())?;
                let want = SuperPoly::scalar(s.table(), a.rho(i, b).clone());
                ensure(got == want, || format!("anchor({}, x{}) = {got}", i + 1, b + 1))?;
            }
        }
        Ok(())
    })
}

// 2
fn three_modular_paths() -> Check {
    first_failure("skew algebroid", 150, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let m = chart.dim();
        let a = random::skew_algebroid(&mut r, &chart, rank_for(seed), 2);
        let div = modular::divergence_path(&a);
        let closed = modular::closed_form(&a);
        let nabla = modular::nabla_path(&a, &ScalarField::one(m)).map_err(|e| e.to_string())?;
        ensure(div == closed && closed == nabla, || format!("{div} / {closed} / {nabla}"))
    })
}

// 3
fn fixed_modular_values() -> Check {
    for m in 1..=4 {
        let tm = SkewAlgebroid::tangent(&BaseChart::standard(m)).unwrap();
        let c = modular::modular_cocycle(&tm).map_err(|e| e.to_string())?;
        ensure(c.is_zero(), || format!("TM on R^{m}: {}", c.rep()))?;
    }
    let chart = BaseChart::standard(1);
    let mut aff = SkewAlgebroid::new(&chart, 2).unwrap();
    aff.set_c(0, 1, 1, ScalarField::one(1)).unwrap();
    let c = modular::modular_cocycle(&aff).map_err(|e| e.to_string())?;
    ensure(c.rep().to_string() == "y1", || format!("aff(1): {}", c.rep()))?;
    let mut sl2 = SkewAlgebroid::new(&chart, 3).unwrap();
    sl2.set_c(0, 1, 1, ScalarField::from_int(1, 2)).unwrap();
    sl2.set_c(0, 2, 2, ScalarField::from_int(1, -2)).unwrap();
    sl2.set_c(1, 2, 0, ScalarField::one(1)).unwrap();
    let c = modular::modular_cocycle(&sl2).map_err(|e| e.to_string())?;
    ensure(c.is_zero(), || format!("sl2: {}", c.rep()))?;
    // trace of the adjoint matrix (ad_i)^k_j = c_ij^k, built independently
    first_failure("lie algebra", 40, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let n = 2 + (seed % 3) as usize;
        let g = random::lie_algebra(&mut r, &chart, n);
        ensure(g.is_lie().holds(), || "generated algebra is not Lie".into())?;
        let got = modular::modular_cocycle(&g).map_err(|e| e.to_string())?.coefficients();
        for (i, gi) in got.iter().enumerate() {
            let ad: Vec<Vec<ScalarField>> = (0..n).map(|k| (0..n).map(|j| g.c(i, j, k).clone()).collect()).collect();
            let tr = (0..n).fold(ScalarField::zero(chart.dim()), |acc, k| acc.add(&ad[k][k]));
            ensure(gi == &tr, || format!("coefficient {} vs trace", i + 1))?;
        }
        Ok(())
    })
}

// 4
fn gauge_law() -> Check {
    first_failure("gauge", 100, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let m = chart.dim();
        let a = if seed % 2 == 0 {
            random::skew_algebroid(&mut r, &chart, rank_for(seed), 2)
        } else {
            random::lie_algebroid(&mut r, &chart, rank_for(seed))
        };
        let g = random::nonzero_scalar(&mut r, m, 2);
        let with = modular::characteristic_form(&a, &g).map_err(|e| e.to_string())?;
        let without = modular::characteristic_form(&a, &ScalarField::one(m)).map_err(|e| e.to_string())?;
        let dg = a.d(&SuperPoly::scalar(a.forms_table(), g.clone())).map_err(|e| e.to_string())?;
        let want = dg.scale(&g.recip().unwrap());
        ensure(with.rep().sub(without.rep()) == want, || format!("difference {} vs {want}", with.rep().sub(without.rep())))
    })
}

fn super_table(m: usize) -> std::sync::Arc<GeneratorTable> {
    let odd = (1..=3).map(|i| Generator::new(format!("t{i}"), (0, 1))).collect();
    let even = vec![Generator::new("u1", (1, 1))];
    GeneratorTable::new(BaseChart::standard(m), odd, even).unwrap()
}

// 5
fn divergence_of_brackets() -> Check {
    first_failure("field pair", 120, |seed| {
        let mut r = random::rng(seed);
        let t = super_table(1 + (seed % 2) as usize);
        let (px, py) = ((seed % 2) as u8, ((seed / 2) % 2) as u8);
        let x = random::vector_field(&mut r, &t, px);
        let y = random::vector_field(&mut r, &t, py);
        let lhs = x.commutator(&y).map_err(|e| e.to_string())?.divergence();
        let mut second = y.apply(&x.divergence());
        if px & py == 1 {
            second = second.neg();
        }
        let rhs = x.apply(&y.divergence()).sub(&second);
        ensure(lhs == rhs, || format!("{lhs} vs {rhs}"))
    })
}

// 6
fn closedness() -> Check {
    first_failure("lie algebroid", 100, |seed| {
        let mut r = random::rng(seed);
        let a = random::lie_algebroid(&mut r, &chart_for(seed), rank_for(seed));
        let c = modular::modular_cocycle(&a).map_err(|e| e.to_string())?;
        let dc = a.d(c.rep()).map_err(|e| e.to_string())?;
        ensure(dc.is_zero(), || format!("d(mod) = {dc}"))
    })?;
    let witness = (0..200u64).find(|&seed| {
        let mut r = random::rng(seed);
        let a = random::skew_algebroid(&mut r, &BaseChart::standard(2), 3, 1);
        let c = modular::divergence_path(&a);
        !a.is_lie().holds() && !a.d(&c).unwrap().is_zero()
    });
    ensure(witness.is_some(), || "no non-Lie algebroid with non-closed cocycle found".into())
}

// 7
fn courant_equivalence() -> Check {
    first_failure("algebroid", 120, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let a = if seed % 2 == 0 {
            random::lie_algebroid(&mut r, &chart, rank_for(seed))
        } else {
            random::skew_algebroid(&mut r, &chart, rank_for(seed), 1)
        };
        let h = Hamiltonian::from_algebroid(&a, None).map_err(|e| e.to_string())?;
        let extracted = h.algebroid_on_e().map_err(|e| e.to_string())?;
        ensure(extracted == a, || "extracted algebroid differs".into())?;
        ensure(h.square().is_zero() == extracted.is_lie().holds(), || {
            format!("square zero: {}, lie: {}", h.square().is_zero(), extracted.is_lie().holds())
        })
    })?;
    // both directions actually occur
    let lie = (0..20).filter(|&s| random::skew_algebroid(&mut random::rng(s), &BaseChart::standard(2), 3, 1).is_lie().holds()).count();
    ensure(lie < 20, || "no non-Lie instance generated".into())?;
    let tm = SkewAlgebroid::tangent(&BaseChart::standard(4)).unwrap();
    let closed = SuperPoly::parse("y1*y2*y3 + x1*y1*y2*y4", tm.forms_table()).unwrap();
    let open = SuperPoly::parse("x4*y1*y2*y3", tm.forms_table()).unwrap();
    let hc = Hamiltonian::from_algebroid(&tm, Some(&closed)).unwrap();
    let ho = Hamiltonian::from_algebroid(&tm, Some(&open)).unwrap();
    ensure(hc.square().is_zero(), || "closed twist not homological".into())?;
    ensure(!ho.square().is_zero(), || "open twist homological".into())
}

fn random_section(r: &mut random::SeededRng, s: &SymplecticSpace2) -> SuperPoly {
    let n = s.split_rank().unwrap();
    let m = s.chart().dim();
    let e: Vec<ScalarField> = (0..n).map(|_| random::sparse_scalar(r, m, 1, 0.3)).collect();
    let w: Vec<ScalarField> = (0..n).map(|_| random::sparse_scalar(r, m, 1, 0.3)).collect();
    s.section(&e, &w).unwrap()
}

// 8
fn derived_bracket_identities() -> Check {
    first_failure("homological", 100, |seed| {
        let mut r = random::rng(seed);
        let h = random::homological(&mut r);
        ensure(h.square().is_zero(), || "not homological".into())?;
        let s = h.space();
        let (a, b, c) = (random_section(&mut r, s), random_section(&mut r, s), random_section(&mut r, s));
        let f = SuperPoly::scalar(s.table(), random::scalar(&mut r, s.chart().dim(), 2));
        let br = |u: &SuperPoly, v: &SuperPoly| h.derived_bracket(u, v).unwrap();
        let pair = |u: &SuperPoly, v: &SuperPoly| s.poisson(u, v).unwrap();
        let loday_l = br(&a, &br(&b, &c));
        let loday_r = br(&br(&a, &b), &c).add(&br(&b, &br(&a, &c)));
        ensure(loday_l == loday_r, || "Loday identity".into())?;
        let lhs = br(&a, &f.mul(&b));
        let rhs = f.mul(&br(&a, &b)).add(&h.anchor_apply(&a, &f).unwrap().mul(&b));
        ensure(lhs == rhs, || "anchored Leibniz rule".into())?;
        let lhs = h.anchor_apply(&a, &pair(&b, &c)).unwrap();
        let rhs = pair(&br(&a, &b), &c).add(&pair(&b, &br(&a, &c)));
        ensure(lhs == rhs, || "pairing invariance".into())
    })
}

// 9
fn master_identity() -> Check {
    first_failure("bivector and twist", 120, |seed| {
        let mut r = random::rng(seed);
        let chart = chart_for(seed);
        let n = 2 + (seed % 3) as usize;
        let a = random::lie_algebroid(&mut r, &chart, n);
        let phi = random::form(&mut r, &a, 3, 1);
        let twist = (!phi.is_zero()).then_some(&phi);
        let h = Hamiltonian::from_algebroid(&a, twist).map_err(|e| e.to_string())?;
        let p = random::bivector(&mut r, h.space(), 1);
        let (lhs, rhs) = dirac::quasi_poisson_sides(&p, &h).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{lhs} vs {rhs}"))
    })
}

fn r4_instance() -> (Bivector, Hamiltonian) {
    let tm = SkewAlgebroid::tangent(&BaseChart::standard(4)).unwrap();
    let space = SymplecticSpace2::for_algebroid(&tm).unwrap();
    let mut p = Bivector::zero(&space).unwrap();
    p.set(0, 1, ScalarField::one(4)).unwrap();
    p.set(2, 3, tm.chart().parse("1 + x1").unwrap()).unwrap();
    let phi = p.solve_twist(&tm).unwrap();
    (p, Hamiltonian::from_algebroid(&tm, Some(&phi)).unwrap())
}

fn quasi_poisson_corpus() -> Vec<(Bivector, Hamiltonian)> {
    let mut v = batch::map_seeds(40, |s| random::quasi_poisson(&mut random::rng(s)));
    v.push(r4_instance());
    v
}

// 10
fn bivector_morphism(corpus: &[(Bivector, Hamiltonian)]) -> Check {
    let results = batch::map(corpus, |(p, h)| -> Check {
        ensure(dirac::quasi_poisson_check(p, h).map_err(|e| e.to_string())?.holds(), || "not quasi-Poisson".into())?;
        let v = dirac::verify_morphism_cor53(p, h).map_err(|e| e.to_string())?;
        ensure(v.holds(), || format!("{:?}", v.certificate().map(|f| f.generator.clone())))
    });
    results.into_iter().enumerate().try_for_each(|(i, r)| r.map_err(|e| format!("instance {i}: {e}")))
}

// 11
fn relative_class_two_paths(corpus: &[(Bivector, Hamiltonian)]) -> Check {
    let results = batch::map(corpus, |(p, h)| -> Check {
        let e = h.algebroid_on_e().map_err(|e| e.to_string())?;
        let n = e.rank();
        let rel = dirac::relative_modular_class(&DiracFrame::graph(p).map_err(|e| e.to_string())?, h)
            .map_err(|e| e.to_string())?;
        let dual = dirac::twisted_algebroid(p, h).map_err(|e| e.to_string())?;
        let md = modular::modular_cocycle(&dual).map_err(|e| e.to_string())?;
        let me = modular::modular_cocycle(&e).map_err(|e| e.to_string())?.coefficients();
        // P# on the cocycle of E, read in the dual frame: y^i -> P^{ij} y^j
        let t = forms_table(e.chart(), n).unwrap();
        let mut sharp = SuperPoly::zero(&t);
        for i in 0..n {
            for j in 0..n {
                let mut key = Key::unit(0);
                key.odd = 1 << j;
                let mut term = SuperPoly::zero(&t);
                term.add_term(key, me[i].mul(p.entry(i, j)));
                sharp = sharp.add(&term);
            }
        }
        let other = md.rep().add(&sharp);
        ensure(rel.rep() == &other, || format!("{} vs {other}", rel.rep()))
    });
    results.into_iter().enumerate().try_for_each(|(i, r)| r.map_err(|e| format!("instance {i}: {e}")))
}

// 12
fn projection_relatedness() -> Check {
    first_failure("homological", 100, |seed| {
        let mut r = random::rng(seed);
        let h = random::homological(&mut r);
        let e = h.algebroid_on_e().map_err(|e| e.to_string())?;
        let s = h.space();
        for k in 0..=e.rank().min(2) {
            let f = random::form(&mut r, &e, k, 2);
            let lhs = s.pull_from_e(&e.d(&f).unwrap()).unwrap();
            let rhs = h.apply(&s.pull_from_e(&f).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("degree {k}: {lhs} vs {rhs}"))?;
        }
        Ok(())
    })?;
    first_failure("dirac frame", 60, |seed| {
        let mut r = random::rng(seed);
        let (d, h) = random::dirac_frame(&mut r);
        let pi = dirac::projection_morphism(&d, &h).map_err(|e| e.to_string())?;
        ensure(pi.is_morphism().holds(), || "projection is not a morphism".into())
    })
}

// 13
fn cli_golden_corpus() -> Check {
    let dir = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"));
    let cases = std::fs::read_to_string(dir.join("cases.txt")).map_err(|e| e.to_string())?;
    let expected = std::fs::read_to_string(dir.join("expected.txt")).map_err(|e| e.to_string())?;
    let mut got = String::new();
    for line in cases.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let out = Command::new(env!("CARGO_BIN_EXE_supermod"))
            .current_dir(dir)
            .args(line.split_whitespace())
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code().unwrap_or(-1);
        got.push_str(&format!("$ {line}\n{}[exit {code}]\n", String::from_utf8_lossy(&out.stdout)));
    }
    ensure(got == expected, || "transcript differs from expected.txt".into())?;
    for (file, verb, code) in [
        ("sl2.problem", "check-jacobi sl2", 0),
        ("sl2.problem", "check-jacobi bad", 1),
        ("broken.problem", "check-jacobi A", 2),
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_supermod"))
            .current_dir(dir)
            .arg(file)
            .args(verb.split_whitespace())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(code), || format!("{file} {verb}: exit {:?}", out.status.code()))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let corpus = quasi_poisson_corpus();
    let checks: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("frame brackets and anchors from the split Hamiltonian", Box::new(bracket_and_anchor_on_frame)),
        ("three modular class paths agree", Box::new(three_modular_paths)),
        ("fixed modular values and adjoint traces", Box::new(fixed_modular_values)),
        ("gauge law of characteristic forms", Box::new(gauge_law)),
        ("divergence of brackets", Box::new(divergence_of_brackets)),
        ("closedness of modular cocycles", Box::new(closedness)),
        ("{H,H} = 0 iff Jacobi", Box::new(courant_equivalence)),
        ("Loday, anchored Leibniz and pairing invariance", Box::new(derived_bracket_identities)),
        ("quasi-Poisson master identity", Box::new(master_identity)),
        ("P# is an algebroid morphism", Box::new(|| bivector_morphism(&corpus))),
        ("relative modular class, two paths", Box::new(|| relative_class_two_paths(&corpus))),
        ("projection relatedness and Dirac projections", Box::new(projection_relatedness)),
        ("CLI golden corpus", Box::new(cli_golden_corpus)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
