//! Acceptance run over the default corpus. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use groupgen::catalog;
use groupgen::corpus::{self, Analysis};
use groupgen::dirichlet;
use groupgen::field::Elem;
use groupgen::generation::Generation;
use groupgen::group::{prime_factors, prime_power_base};
use groupgen::hypergraph::{self, GenHypergraph};
use groupgen::lattice::{self, LatticeConfig};
use groupgen::mgse::{self, AffineGenerator, MgseWitness};
use groupgen::quotient::quotient_group;
use groupgen::semidirect::AffineModel;
use groupgen::structure;
use groupgen::{FiniteGroup, GroupConfig, Permutation};

struct Entry {
    group: FiniteGroup,
    /// Hypergraph, Dirichlet and MGSE analyses apply.
    full: bool,
}

fn corpus_groups() -> Vec<Entry> {
    corpus::default_corpus()
        .into_iter()
        .map(|e| Entry {
            group: catalog::build(&e.spec, &GroupConfig::default()).expect("corpus group builds"),
            full: e.analyses.contains(&Analysis::Mgse),
        })
        .collect()
}

fn find<'a>(groups: &'a [Entry], name: &str) -> &'a FiniteGroup {
    &groups
        .iter()
        .find(|e| e.group.name() == name)
        .expect("corpus entry")
        .group
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn(&[Entry]) -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn frattini_elements(g: &FiniteGroup) -> Vec<usize> {
    lattice::frattini(g, &LatticeConfig::default()).unwrap().elements()
}

fn hypergraphs(g: &FiniteGroup) -> (GenHypergraph, GenHypergraph) {
    (hypergraph::gamma(g).unwrap(), hypergraph::delta(g).unwrap())
}

fn criterion_1(groups: &[Entry]) -> Check {
    let mut n = 0;
    for e in groups.iter().filter(|e| e.full && !e.group.is_cyclic()) {
        let g = &e.group;
        let delta = hypergraph::delta(g).unwrap();
        ensure(delta.isolated == frattini_elements(g), || {
            format!("{}: isolated vertices differ from Frattini", g.name())
        })?;
        ensure(hypergraph::is_connected_reduced(&delta).connected, || {
            format!("{}: reduced delta disconnected", g.name())
        })?;
        n += 1;
    }
    Ok(format!("{n} non-cyclic groups"))
}

fn criterion_2(groups: &[Entry]) -> Check {
    let mut names = Vec::new();
    for e in groups.iter().filter(|e| e.full) {
        let gamma = hypergraph::gamma(&e.group).unwrap();
        if gamma.rank >= 3 {
            ensure(hypergraph::is_connected_reduced(&gamma).connected, || {
                format!("{}: reduced gamma disconnected", e.group.name())
            })?;
            names.push(e.group.name().to_string());
        }
    }
    ensure(names == ["C2^3", "V(3,2,2)"], || {
        format!("groups with d >= 3 are {names:?}")
    })?;
    Ok(names.join(", "))
}

fn criterion_3(groups: &[Entry]) -> Check {
    let mut n = 0;
    for e in groups.iter().filter(|e| e.full && e.group.order() <= 60) {
        let g = &e.group;
        let seq = lattice::all_subgroups(g, &LatticeConfig::default())
            .unwrap()
            .a_sequence();
        for t in 1..=3 {
            let exact = dirichlet::p_gen_exact(&seq, t);
            let counted = dirichlet::p_gen_bruteforce(g, t).unwrap();
            ensure(exact == counted, || {
                format!("{}: P({t}) = {exact} vs {counted}", g.name())
            })?;
        }
        n += 1;
    }
    Ok(format!("{n} groups, t = 1, 2, 3"))
}

fn criterion_4(groups: &[Entry]) -> Check {
    let mut n = 0;
    for e in groups.iter().filter(|e| e.full && e.group.order() <= 24) {
        let g = &e.group;
        let seq = lattice::all_subgroups(g, &LatticeConfig::default())
            .unwrap()
            .a_sequence();
        // probabilities from counting where affordable, else from the lattice
        let values: Vec<_> = (1..=g.order() as u32)
            .map(|t| dirichlet::p_gen_bruteforce(g, t).unwrap_or_else(|_| dirichlet::p_gen_exact(&seq, t)))
            .collect();
        let recovered = dirichlet::recover_a_from_p(&values, g.order()).map_err(|e| format!("{}: {e}", g.name()))?;
        ensure(recovered == seq, || {
            format!("{}: recovered {:?} vs {:?}", g.name(), recovered.a, seq.a)
        })?;
        n += 1;
    }
    Ok(format!("{n} groups of order <= 24"))
}

fn criterion_5(groups: &[Entry]) -> Check {
    let mut checks = 0;
    for e in groups {
        let g = &e.group;
        let lat = lattice::all_subgroups(g, &LatticeConfig::default()).unwrap();
        let seq = lat.clone().a_sequence();
        let (detected, oracle) = (dirichlet::detect_solvable(&seq), g.is_solvable());
        ensure(detected == oracle, || {
            format!("{}: solvable detector {detected}, oracle {oracle}", g.name())
        })?;
        ensure(oracle == !matches!(g.name(), "A5" | "S5"), || {
            format!("{}: unexpected solvability {oracle}", g.name())
        })?;
        for p in prime_factors(g.order()) {
            let (d, o) = (dirichlet::detect_p_solvable(&seq, p), lat.is_p_solvable(p));
            ensure(d == o, || {
                format!("{}: {p}-solvable detector {d}, oracle {o}", g.name())
            })?;
            checks += 1;
        }
    }
    Ok(format!("{} groups, {checks} prime checks", groups.len()))
}

fn criterion_6(groups: &[Entry]) -> Check {
    let positives = [
        "C2^2", "C2^3", "C4", "Q8", "D8", "C3^2", "S3", "D10", "A4", "V(3,2,2)", "V(4,3,1)",
    ];
    let negatives = ["C2xC6", "D12", "S4", "F20"];
    for e in groups.iter().filter(|e| e.full) {
        let g = &e.group;
        if g.is_cyclic() || !g.is_solvable() {
            continue;
        }
        let holds = mgse::mgse_check(g).unwrap().holds;
        let s = structure::predict_mgse_structurally(g).unwrap();
        ensure(s.applicable && s.predicted_mgse == holds, || {
            format!(
                "{}: MGSE {holds}, prediction {} ({:?})",
                g.name(),
                s.predicted_mgse,
                s.reasons
            )
        })?;
        if let Some(d) = &s.decomposition {
            ensure(d.quotient_order == d.module_order.pow(d.delta as u32) * d.p, || {
                format!("{}: |G/Phi| != |N|^delta p", g.name())
            })?;
        }
    }
    for name in positives {
        let g = find(groups, name);
        ensure(mgse::mgse_check(g).unwrap().holds, || format!("{name}: expected MGSE"))?;
    }
    for name in negatives {
        let g = find(groups, name);
        ensure(!mgse::mgse_check(g).unwrap().holds, || {
            format!("{name}: expected MGSE to fail")
        })?;
    }
    // C4 is cyclic: the classifier declines it
    ensure(
        !structure::predict_mgse_structurally(find(groups, "C4"))
            .unwrap()
            .applicable,
        || "C4 classified".into(),
    )?;
    Ok(format!("{} positives, {} negatives", positives.len(), negatives.len()))
}

fn criterion_7(groups: &[Entry]) -> Check {
    let g = find(groups, "F20");
    let (gamma, delta) = hypergraphs(g);
    ensure(gamma.hyperedges == delta.hyperedges, || "gamma != delta".into())?;
    ensure(delta.hyperedges.iter().all(|e| e.len() == 2), || {
        "a minimal generating set is not of size 2".into()
    })?;
    let report = mgse::mgse_check(g).unwrap();
    ensure(!report.holds, || "MGSE holds".into())?;

    let idx = |s: &str| g.index_of(&Permutation::parse_cycles(s, 5).unwrap()).unwrap();
    let (x, y) = (idx("(2,3,4,5)"), idx("(1,2,3,5,4)"));
    let (x2, xy) = (g.mul(x, x), g.mul(x, y));
    let mut gen = Generation::new(g);
    ensure(gen.generates(&[x2, xy]) && gen.generates(&[x, y]), || {
        "A or B does not generate".into()
    })?;
    ensure(!gen.generates(&[x2, x]) && !gen.generates(&[x2, y]), || {
        "<x^2,x> or <x^2,y> is not proper".into()
    })?;
    let mut a = vec![x2, xy];
    a.sort_unstable();
    let mut b = vec![x, y];
    b.sort_unstable();
    let position = a.iter().position(|&e| e == xy).unwrap();
    let witness = MgseWitness { x: a, y: b, position };
    ensure(mgse::replay_witness(g, &witness), || "witness does not replay".into())?;
    ensure(report.witness.as_ref() == Some(&witness), || {
        format!("canonical witness is {:?}", report.witness)
    })?;
    Ok(format!(
        "A = {{{}, {}}}, B = {{{}, {}}}",
        g.label(x2),
        g.label(xy),
        g.label(x),
        g.label(y)
    ))
}

fn criterion_8(groups: &[Entry]) -> Check {
    let mut n = 0;
    for e in groups.iter().filter(|e| e.full) {
        let g = &e.group;
        let (gamma, delta) = hypergraphs(g);
        let holds = mgse::mgse_check(g).unwrap().holds;
        ensure(holds == mgse::basis_exchange_check(&gamma).holds, || {
            format!("{}: MGSE and exchange on gamma differ", g.name())
        })?;
        if mgse::basis_exchange_check(&delta).holds {
            ensure(gamma.hyperedges == delta.hyperedges, || {
                format!("{}: delta is a basis family but not gamma", g.name())
            })?;
        }
        n += 1;
    }
    Ok(format!("{n} groups"))
}

fn criterion_9(groups: &[Entry]) -> Check {
    let mut positives = 0;
    for e in groups.iter().filter(|e| e.full) {
        let g = &e.group;
        let holds = mgse::mgse_check(g).unwrap().holds;
        let lat = lattice::all_subgroups(g, &LatticeConfig::default()).unwrap();
        let frattini_quotient = quotient_group(g, &lat.frattini()).unwrap().group;
        ensure(mgse::mgse_check(&frattini_quotient).unwrap().holds == holds, || {
            format!("{}: G/Phi(G) verdict differs", g.name())
        })?;
        if !holds {
            continue;
        }
        positives += 1;
        for i in lat.normal_subgroups() {
            let q = quotient_group(g, lat.node(i)).unwrap().group;
            ensure(mgse::mgse_check(&q).unwrap().holds, || {
                format!("{}: quotient of order {} fails", g.name(), q.order())
            })?;
        }
        if !g.is_cyclic() {
            let ab = g.order() / g.derived_subgroup().order();
            ensure(ab == 1 || prime_power_base(ab).is_some(), || {
                format!("{}: |G/G'| = {ab}", g.name())
            })?;
        }
        if !g.is_nilpotent() {
            let m = structure::unique_maximal_normal_check(g).unwrap();
            ensure(m.unique && m.quotient_cyclic && m.quotient_prime, || {
                format!("{}: {m:?}", g.name())
            })?;
        }
    }
    Ok(format!("{positives} MGSE groups"))
}

/// Compares the determinant with closure on every `(delta + 1)`-tuple.
fn sweep(q: usize, p: usize, delta: usize) -> Result<usize, String> {
    let model = AffineModel::new(q, p, delta).unwrap();
    let g = model.group("V", &GroupConfig::default()).unwrap();
    let decoded: Vec<AffineGenerator> = g
        .elements()
        .iter()
        .map(|e| {
            let (vector, scalar): (Vec<Elem>, Elem) = model.decode(e);
            AffineGenerator { vector, scalar }
        })
        .collect();
    let n = g.order();
    let len = delta + 1;
    let mut gen = Generation::with_cyclic(&g);
    let mut tuple = vec![0usize; len];
    let mut count = 0;
    loop {
        let args: Vec<AffineGenerator> = tuple.iter().map(|&i| decoded[i].clone()).collect();
        let det = mgse::det_criterion_generates_in(model.field(), p, delta, &args).map_err(|e| e.to_string())?;
        let closure = gen.generates(&tuple);
        ensure(det == closure, || {
            format!("V({q},{p},{delta}) tuple {tuple:?}: det {det}, closure {closure}")
        })?;
        count += 1;
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(count);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

fn criterion_10(_: &[Entry]) -> Check {
    let small = sweep(3, 2, 1)?;
    let large = sweep(3, 2, 2)?;
    let a4 = sweep(4, 3, 1)?;
    Ok(format!("{small} + {large} + {a4} tuples"))
}

fn main() -> ExitCode {
    let groups = corpus_groups();
    let criteria: [Criterion; 10] = [
        (
            "isolated vertices of delta are the Frattini subgroup; reduced delta connected",
            criterion_1,
        ),
        ("reduced gamma connected when d(G) >= 3", criterion_2),
        ("Hall identity for t = 1, 2, 3", criterion_3),
        ("coefficients recovered from P(1..|G|)", criterion_4),
        ("solvability detectors match the oracles", criterion_5),
        ("MGSE matches the structural classification", criterion_6),
        ("F20 counterexample", criterion_7),
        ("exchange formulations agree", criterion_8),
        ("quotient lemmas and unique maximal normal subgroup", criterion_9),
        ("determinant criterion matches closure", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check(&groups);
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {title} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
