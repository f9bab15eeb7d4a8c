//! Acceptance run: one PASS/FAIL line per criterion with its wall time.
//! Runs without the test harness so the report is always printed.

mod common;

use std::time::{Duration, Instant};

use common::*;
use vknot::invariants::{bracket, jones, linking_number, skein_residual, unlink_value, writhe};
use vknot::moves::{apply_move, find_reductions, virtual_r2_insert, MoveKind};
use vknot::realization::{
    classify, classify_realizations, enumerate_realizations, min_unknotting_over_realizations,
    outgoing_edges, unknotting_bound, untie_by_virtualization, Assignment, Status, UntieSite,
};
use vknot::representation::{dehn_twist_meridian, knotting_sequence, parse_arcs, Representation};
use vknot::{parse_diagram, Diagram, LaurentPoly};

type Check = Result<String, String>;
type Criterion<'a> = (u32, Duration, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn js(d: &Diagram) -> String {
    jones(d).unwrap().to_string()
}

fn c1() -> Check {
    ensure(js(&Diagram::unlink(1)) == "1", "jones(unknot) != 1")?;
    let d = LaurentPoly::loop_value();
    for n in 1..=5u32 {
        ensure(
            bracket(&Diagram::unlink(n as usize)).unwrap() == d.pow(n - 1),
            format!("bracket of {n}-unlink"),
        )?;
    }
    let t = js(&load("trefoil.vkd"));
    ensure(t == TREFOIL_JONES, format!("trefoil jones {t}"))?;
    let u = js(&load("unlink2.vkd"));
    ensure(u == "-A^-2 - A^2", format!("2-unlink jones {u}"))?;
    Ok(format!("trefoil {t}; 2-unlink {u}"))
}

fn c2() -> Check {
    let reports = classify_realizations(&load("virtual_trefoil.vkd")).unwrap();
    ensure(reports.len() == 2, "expected 2 realizations")?;
    let trivial = reports
        .iter()
        .filter(|r| r.status == Status::TrivialCertified)
        .count();
    let knotted: Vec<_> = reports
        .iter()
        .filter(|r| r.status == Status::NontrivialCertified)
        .collect();
    ensure(
        trivial == 1 && knotted.len() == 1,
        "expected one trivial and one non-trivial",
    )?;
    let v = knotted[0].jones.to_string();
    ensure(
        v == TREFOIL_JONES || v == MIRROR_TREFOIL_JONES,
        format!("knotted jones {v}"),
    )?;
    Ok(format!(
        "assignment {} gives {v}",
        knotted[0].assignment.code()
    ))
}

fn c3() -> Check {
    let k = load("kishino.vkd");
    let o = oracle_jones(&k).to_string();
    ensure(o == "1", format!("oracle jones {o}"))?;
    ensure(js(&k) == "1", "state-sum jones")?;
    let reports = classify_realizations(&k).unwrap();
    ensure(reports.len() == 4, "expected 4 realizations")?;
    ensure(
        reports.iter().all(|r| r.jones.is_one()),
        "a realization has jones != 1",
    )?;
    let trivial = reports
        .iter()
        .filter(|r| r.status == Status::TrivialCertified)
        .count();
    Ok(format!(
        "oracle jones 1; 4/4 realizations jones 1, {trivial}/4 reduce to the unknot"
    ))
}

/// Kishino realized with its first virtual crossing of sign `sign`, then a
/// virtual-R2 pair on that crossing's outgoing edges, grouped into one
/// handle with the same strand over at both members.
fn kishino_pair_rep(sign: i32) -> (Diagram, Representation) {
    let k = load("kishino.vkd");
    let c = k.virtual_ids()[0];
    let (_, lr) = enumerate_realizations(&k)
        .unwrap()
        .find(|(_, r)| r.crossing_sign(c).unwrap() == sign)
        .unwrap();
    let (l, r) = outgoing_edges(&lr, c).unwrap();
    let base = virtual_r2_insert(&lr, l, r).unwrap();
    let rep = Representation::from_diagram(
        &base,
        &parse_arcs(&base, "11").unwrap(),
        &[base.virtual_ids()],
    )
    .unwrap();
    (lr, rep)
}

// the classical crossing feeding both strands into the pair
fn feeding_crossing(base: &Diagram) -> usize {
    for v in base.virtual_ids() {
        let tails: Vec<usize> = (0..2)
            .map(|w| base.edge_ends(base.strand(v, w).0).unwrap().1 .0)
            .collect();
        if tails[0] == tails[1] && base.crossings()[tails[0]].kind.is_classical() {
            return tails[0];
        }
    }
    panic!("no crossing feeds the pair");
}

fn c4() -> Check {
    let (lr, rep) = kishino_pair_rep(1);
    ensure(js(&lr) == "1", "L_r is not jones-trivial")?;
    ensure(
        js(&rep.forget().unwrap()) == "1",
        "cancelling pair changed L_r",
    )?;
    let l3 = dehn_twist_meridian(&rep, 0, 1).unwrap().forget().unwrap();
    ensure(js(&l3) == TREFOIL_JONES, format!("L3 jones {}", js(&l3)))?;

    // L2 and L_v: smooth the realized crossing in the base, then twist
    let c = feeding_crossing(&rep.base);
    let smoothed = rep.base.smooth_oriented(c).unwrap();
    let srep = Representation::from_diagram(
        &smoothed,
        &parse_arcs(&smoothed, "11").unwrap(),
        &[smoothed.virtual_ids()],
    )
    .unwrap();
    let lv = srep.forget().unwrap();
    let l2 = dehn_twist_meridian(&srep, 0, 1).unwrap().forget().unwrap();
    let expected_l2 = LaurentPoly::from_terms([(-6, 1), (-2, -1), (-6, -1), (-10, -1)]);
    ensure(
        jones(&lv).unwrap() == unlink_value(2),
        format!("L_v jones {}", js(&lv)),
    )?;
    ensure(
        jones(&l2).unwrap() == expected_l2,
        format!("L2 jones {}", js(&l2)),
    )?;
    // skein relation tying L3, L_r and L2 at a twist crossing
    for x in l3.classical_ids() {
        if l3.crossing_sign(x).unwrap() > 0 {
            ensure(skein_residual(&l3, x).unwrap().is_zero(), "skein residual")?;
        }
    }

    let other = js(&dehn_twist_meridian(&rep, 0, -1).unwrap().forget().unwrap());
    let (_, neg) = kishino_pair_rep(-1);
    let mirror = js(&dehn_twist_meridian(&neg, 0, -1).unwrap().forget().unwrap());
    ensure(
        mirror == MIRROR_TREFOIL_JONES,
        format!("mirrored pipeline gives {mirror}"),
    )?;
    Ok(format!(
        "L3 {}; L2 {}; opposite twist on the same L_r gives {other}; mirrored pipeline gives {mirror}",
        js(&l3),
        js(&l2)
    ))
}

fn c5(set: &[Diagram]) -> Check {
    let mut checked = 0;
    for d in set {
        for c in d.classical_ids() {
            if d.crossing_sign(c).unwrap() > 0 {
                ensure(skein_residual(d, c).unwrap().is_zero(), "non-zero residual")?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} positive crossings over {} diagrams",
        set.len()
    ))
}

fn c6(set: &[Diagram]) -> Check {
    let mut counts = std::collections::BTreeMap::new();
    for d in set {
        let j = jones(d).unwrap();
        let b = bracket(d).unwrap();
        for site in find_reductions(d) {
            let e = apply_move(d, &site).unwrap();
            ensure(
                jones(&e).unwrap() == j,
                format!("{:?} changed jones", site.kind),
            )?;
            let be = bracket(&e).unwrap();
            if site.kind == MoveKind::R1 {
                let w = writhe(d) - writhe(&e);
                let f = LaurentPoly::monomial(if w % 2 == 0 { 1 } else { -1 }, 3 * w);
                ensure(&f * &be == b, "R1 bracket factor")?;
            } else {
                ensure(be == b, format!("{:?} changed bracket", site.kind))?;
            }
            *counts.entry(format!("{:?}", site.kind)).or_insert(0) += 1;
        }
    }
    Ok(format!("moves checked: {counts:?}"))
}

fn c7() -> Check {
    let d = load("virtual_clasp.vkd");
    let comps = d.components();
    // component 0 over at both members
    let a = Assignment::new(d.virtual_ids().into_iter().map(|c| {
        let first = d.strand_component(&comps, c, 0) == 0;
        (
            c,
            if first {
                vknot::Over::First
            } else {
                vknot::Over::Second
            },
        )
    }));
    let rep = Representation::from_diagram(&d, &a, &[d.virtual_ids()]).unwrap();
    let t = rep.intersection_pairs();
    ensure(
        t.pair(0, 0).0.abs() == 1 && t.pair(0, 1).0.abs() == 1,
        "expected p = 1, 1",
    )?;
    let lk0 = linking_number(&rep.forget().unwrap(), 0, 1).unwrap();
    ensure(lk0 == 0, format!("lk before {lk0}"))?;
    let lk1 = linking_number(
        &dehn_twist_meridian(&rep, 0, 1).unwrap().forget().unwrap(),
        0,
        1,
    )
    .unwrap();
    ensure(lk1.abs() == 2, format!("lk after {lk1}"))?;

    // one component passes the handle twice, separated by curls
    let d = parse_diagram("V(1,3,2,4) X+(2,5,5,6) V(6,4,7,3) X+(7,8,8,1)").unwrap();
    let rep = Representation::from_diagram(&d, &parse_arcs(&d, "11").unwrap(), &[d.virtual_ids()])
        .unwrap();
    let t = rep.intersection_pairs();
    ensure(
        t.pair(0, 0).0.abs() == 2 && t.pair(0, 1).0.abs() == 1,
        format!("expected p = 2, 1, got {:?}", t.0),
    )?;
    let before = linking_number(&rep.forget().unwrap(), 0, 1).unwrap();
    let after = linking_number(
        &dehn_twist_meridian(&rep, 0, 1).unwrap().forget().unwrap(),
        0,
        1,
    )
    .unwrap();
    ensure(
        (after - before).abs() == 4,
        format!("change {}", after - before),
    )?;
    Ok(format!(
        "p=(1,1): lk 0 -> {lk1}; p=(2,1): lk {before} -> {after}"
    ))
}

fn corpus_reps() -> Vec<(String, Representation)> {
    let mut reps = Vec::new();
    for (name, d) in corpus() {
        let m = d.virtual_count();
        if m == 0 {
            continue;
        }
        for i in 0..1u64 << m {
            let a = Assignment::nth(&d.virtual_ids(), i);
            reps.push((
                format!("{name} singletons {}", a.code()),
                Representation::singletons(&d, &a).unwrap(),
            ));
        }
        if name == "virtual_clasp.vkd" {
            for code in ["11", "12", "21", "22"] {
                let a = parse_arcs(&d, code).unwrap();
                reps.push((
                    format!("{name} pair {code}"),
                    Representation::from_diagram(&d, &a, &[d.virtual_ids()]).unwrap(),
                ));
            }
        }
    }
    for sign in [1, -1] {
        reps.push((
            format!("kishino pair handle, sign {sign}"),
            kishino_pair_rep(sign).1,
        ));
    }
    reps
}

fn c8() -> Check {
    let d = load("virtual_trefoil.vkd");
    let rep = Representation::singletons(&d, &parse_arcs(&d, "1").unwrap()).unwrap();
    let start = dehn_twist_meridian(&rep, 0, 1).unwrap();
    let end = knotting_sequence(&start, 0).unwrap();
    let mut classes = vec![start.handles[0].torus_class];
    let mut cur = start.clone();
    for t in &end.handles[0].twist_word[1..] {
        cur = cur.twist(0, *t).unwrap();
        classes.push(cur.handles[0].torus_class);
    }
    ensure(
        classes == [(1, 1), (1, 2), (3, 2), (3, 5)],
        format!("class sequence {classes:?}"),
    )?;

    let mut count = 0;
    for (name, rep) in corpus_reps() {
        let table = rep.intersection_pairs();
        for h in 0..rep.genus() {
            if table.0[h].iter().all(|&e| e == (0, 0)) {
                continue;
            }
            let out = knotting_sequence(&rep, h).unwrap();
            let r = classify(Assignment::default(), out.forget().unwrap()).unwrap();
            ensure(
                r.status == Status::NontrivialCertified,
                format!("{name} handle {h}: {:?}", r.status),
            )?;
            count += 1;
        }
    }
    Ok(format!(
        "(1,1)->(1,2)->(3,2)->(3,5); {count} corpus handles knotted"
    ))
}

fn c9() -> Check {
    let mut resolved = 0;
    let mut untied = 0;
    for (name, d) in corpus() {
        if d.crossing_count() == 0 {
            continue;
        }
        let n = d.classical_count();
        if let Some((_, k)) = min_unknotting_over_realizations(&d, n).unwrap() {
            ensure(k <= n, format!("{name}: k = {k} > {n}"))?;
            resolved += 1;
        }
        // derived corpus: every realization, untied at a witness set
        for (_, r) in enumerate_realizations(&d).unwrap() {
            let Some((k, set)) = unknotting_bound(&r, r.crossing_count()).unwrap() else {
                continue;
            };
            let sites: Vec<UntieSite> = set
                .iter()
                .map(|&c| UntieSite {
                    crossing: c,
                    edges: None,
                })
                .collect();
            let u = untie_by_virtualization(&r, &sites).unwrap();
            ensure(
                u.virtual_count() == 2 * k && k <= r.crossing_count(),
                "insertion count",
            )?;
            let ok = classify_realizations(&u)
                .unwrap()
                .iter()
                .any(|x| x.status == Status::TrivialCertified);
            ensure(
                ok,
                format!("{name}: untied diagram has no trivial realization"),
            )?;
            untied += 1;
        }
    }
    Ok(format!(
        "{resolved} diagrams resolved with k <= n; {untied} realizations untied"
    ))
}

fn c10() -> Check {
    let mut n = 0;
    for (name, d) in corpus() {
        if d.crossing_count() <= 5 {
            ensure(
                bracket(&d).unwrap() == oracle_bracket(&d),
                format!("{name} differs"),
            )?;
            n += 1;
        }
    }
    Ok(format!("{n} corpus diagrams agree"))
}

fn main() {
    let set = random_diagrams(20240601, 100, 8);
    let criteria: Vec<Criterion> = vec![
        (1, Duration::from_secs(1), Box::new(c1)),
        (2, Duration::from_secs(1), Box::new(c2)),
        (3, Duration::from_secs(1), Box::new(c3)),
        (4, Duration::from_secs(5), Box::new(c4)),
        (5, Duration::from_secs(60), Box::new(|| c5(&set))),
        (6, Duration::MAX, Box::new(|| c6(&set))),
        (7, Duration::MAX, Box::new(c7)),
        (8, Duration::MAX, Box::new(c8)),
        (9, Duration::MAX, Box::new(c9)),
        (10, Duration::MAX, Box::new(c10)),
    ];
    let mut failed = Vec::new();
    for (id, limit, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let dt = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(s) if dt <= limit => (true, s),
            Ok(s) => (false, format!("{s}; over the {limit:?} limit")),
            Err(e) => (false, e),
        };
        println!(
            "criterion {id}: {} ({:.3}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
        if !ok {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
