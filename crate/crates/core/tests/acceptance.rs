//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
//! its measured time against its time limit; the test fails if any does.

use std::time::{Duration, Instant};

use zp_colorful::altdefect::{alt_min, colorability_defect, AltMode};
use zp_colorful::colorful::{
    certify_local, colorful_corpus, colorful_from_alternation, coloring_corpus, local_lower_formulas, validate_zigzag, zigzag_check, zigzag_target,
    CorpusPolicy, LocalReport,
};
use zp_colorful::index::{s, s0, value_l, value_l_by_definition, LabeledSimplex};
use zp_colorful::report::{bounds_report, BoundsOptions};
use zp_colorful::tucker::{fan_sweep, gamma_collapse, refute_conflict, Enumeration, FanParams, ProofCase, Refutation};
use zp_colorful::{petersen, usual_kneser, ChromaticNumber, Error, Hypergraph, Modulus, SearchBudget, VertexSet};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn prime(p: usize) -> Modulus {
    Modulus::prime(p).unwrap()
}

fn chromatic_formula() -> Outcome {
    let mut seen = Vec::new();
    for (r, n, k) in [(2, 5, 2), (2, 6, 2), (2, 7, 3), (3, 7, 2), (3, 8, 2)] {
        let h = usual_kneser(n, k, r).map_err(|e| e.to_string())?;
        let res = h.chromatic_number(budget());
        let expected = (n - r * (k - 1)).div_ceil(r - 1);
        ensure(res.exact && res.value == ChromaticNumber::Finite(expected), || {
            format!("KG^{r}({n},{k}): got {:?} (exact {}), expected {expected}", res.value, res.exact)
        })?;
        seen.push(format!("KG^{r}({n},{k})={expected}"));
    }
    Ok(seen.join(" "))
}

fn defect_identity() -> Outcome {
    let mut seen = Vec::new();
    for (n, k, p) in [(6, 2, 2), (7, 2, 3), (7, 3, 2)] {
        let f = Hypergraph::complete(n, k).unwrap();
        let d = colorability_defect(&f, p, budget()).map_err(|e| e.to_string())?;
        let expected = n - p * (k - 1);
        ensure(d.value == expected, || format!("cd_{p}(K_{n}^{k}) = {}, expected {expected}", d.value))?;
        seen.push(format!("cd_{p}(K{n}^{k})={expected}"));
    }
    Ok(seen.join(" "))
}

fn alternation_identity() -> Outcome {
    let mut seen = Vec::new();
    for (n, k, p) in [(5, 2, 2), (7, 2, 3), (5, 3, 2)] {
        let f = Hypergraph::complete(n, k).unwrap();
        let alt = alt_min(&f, p, AltMode::Exact).map_err(|e| e.to_string())?;
        let cd = colorability_defect(&f, p, budget()).map_err(|e| e.to_string())?;
        ensure(alt.exact && alt.value == p * (k - 1), || format!("alt_{p}(K_{n}^{k}) = {}, expected {}", alt.value, p * (k - 1)))?;
        ensure(n - alt.value == cd.value, || format!("K_{n}^{k}: |V| - alt = {} but cd = {}", n - alt.value, cd.value))?;
        seen.push(format!("alt_{p}(K{n}^{k})={}", alt.value));
    }
    Ok(seen.join(" "))
}

fn hierarchy_consistency() -> Outcome {
    let mut runs = 0;
    let mut with_xind = 0;
    for (n, k) in [(5, 2), (6, 2), (5, 3)] {
        let f = Hypergraph::complete(n, k).unwrap();
        for p in [2, 3] {
            for r in 2..=p {
                let rep = bounds_report(&format!("K{n}^{k}"), &f, r, prime(p), &BoundsOptions::default()).map_err(|e| e.to_string())?;
                ensure(rep.consistent, || format!("K_{n}^{k}, r = {r}, p = {p}: {:?}", rep.inconsistencies))?;
                ensure(rep.bounds.iter().all(|b| b.lower.is_some()), || format!("K_{n}^{k}, r = {r}, p = {p}: missing lower endpoint"))?;
                runs += 1;
                with_xind += rep.bounds.iter().any(|b| b.name.starts_with("Xind")) as usize;
            }
        }
    }
    Ok(format!("{runs} chains ({with_xind} with the cross-index entry), 0 violations"))
}

fn fan_sweeps() -> Outcome {
    let mut seen = Vec::new();
    for (n, m, p, alpha) in [(2, 2, 2, 0), (3, 3, 2, 1), (2, 2, 3, 0)] {
        let params = FanParams { n, m, p, alpha };
        let sweep = fan_sweep(params, Enumeration::Exhaustive, SearchBudget::nodes(u64::MAX)).map_err(|e| e.to_string())?;
        ensure(sweep.complete, || format!("{params:?}: sweep incomplete"))?;
        ensure(sweep.failures() == 0, || format!("{params:?}: {} failures, first {:?}", sweep.failures(), sweep.first_counterexample))?;
        ensure(sweep.admissible > 0 && sweep.chains_found == sweep.admissible, || format!("{params:?}: {sweep:?}"))?;
        seen.push(format!("({n},{m},{p},{alpha}): {} labelings", sweep.admissible));
    }
    for (n, m, p, alpha) in [(3, 2, 2, 0), (4, 2, 2, 1), (3, 1, 3, 0)] {
        let params = FanParams { n, m, p, alpha };
        ensure(!params.within_bound(), || format!("{params:?} should be above the bound"))?;
        let sweep = fan_sweep(params, Enumeration::Exhaustive, SearchBudget::nodes(u64::MAX)).map_err(|e| e.to_string())?;
        ensure(sweep.complete && sweep.admissible == 0, || format!("{params:?}: {} admissible labelings above the bound", sweep.admissible))?;
    }
    Ok(format!("{}; none above the bound", seen.join(", ")))
}

fn colorful_witnesses() -> Outcome {
    let pet = petersen();
    let p2 = prime(2);
    let exhaustive = coloring_corpus(&pet, CorpusPolicy::Exhaustive { max_colors: 3 });
    let sampled = coloring_corpus(&pet, CorpusPolicy::Sampled { count: 1000, min_colors: 3, max_colors: 6, seed: 1 });
    ensure(sampled.len() == 1000, || format!("only {} sampled colorings", sampled.len()))?;
    for (label, corpus) in [("exhaustive", &exhaustive), ("sampled", &sampled)] {
        let rep = colorful_corpus(&pet, p2, 3, corpus, budget()).map_err(|e| e.to_string())?;
        ensure(rep.passed() && rep.found == corpus.len(), || {
            format!("Petersen {label}: {} failures, {} unknown", rep.counterexamples.len(), rep.unknown)
        })?;
    }

    let f = Hypergraph::complete(5, 2).unwrap();
    let sigma = alt_min(&f, 2, AltMode::Exact).unwrap().ordering;
    for c in sampled.iter().take(50) {
        let w = colorful_from_alternation(&f, p2, c, &sigma).map_err(|e| e.to_string())?;
        ensure(w.witness.as_ref().is_some_and(|w| w.total_size == 3), || "alternation pipeline gave no witness".into())?;
    }

    let kg = usual_kneser(7, 2, 3).unwrap();
    let corpus = coloring_corpus(&kg, CorpusPolicy::Sampled { count: 200, min_colors: 2, max_colors: 6, seed: 2 });
    ensure(corpus.len() == 200, || format!("only {} colorings of KG^3(7,2)", corpus.len()))?;
    let rep = colorful_corpus(&kg, prime(3), 4, &corpus, budget()).map_err(|e| e.to_string())?;
    ensure(rep.passed() && rep.found == 200, || format!("KG^3(7,2): {} failures, {} unknown", rep.counterexamples.len(), rep.unknown))?;
    Ok(format!("Petersen {} + {} colorings, KG^3(7,2) 200 colorings, 0 failures", exhaustive.len(), sampled.len()))
}

fn zigzag() -> Outcome {
    let k4 = Hypergraph::complete(4, 2).unwrap();
    let (t, x) = zigzag_target(&k4, budget()).map_err(|e| e.to_string())?;
    ensure(x.value() == Some(2) && t == 4, || format!("Xind(Hom(K2, K4)) = {:?}", x.value()))?;
    let all = k4.proper_colorings(4, usize::MAX);
    for c in &all {
        let w = zigzag_check(&k4, c, Some(4), budget()).map_err(|e| e.to_string())?;
        ensure(w.as_ref().is_some_and(|w| validate_zigzag(&k4, c, w) && w.sides[0].len() == 2 && w.sides[1].len() == 2), || {
            format!("K4 coloring {:?} has no alternating K_2,2", c.colors())
        })?;
    }
    let pet = petersen();
    let corpus = coloring_corpus(&pet, CorpusPolicy::Sampled { count: 500, min_colors: 3, max_colors: 10, seed: 3 });
    for c in &corpus {
        let w = zigzag_check(&pet, c, Some(3), budget()).map_err(|e| e.to_string())?;
        ensure(w.as_ref().is_some_and(|w| validate_zigzag(&pet, c, w)), || format!("Petersen coloring {:?} has no alternating K_2,1", c.colors()))?;
    }
    Ok(format!("Xind = 2, K4 {} colorings, Petersen {} colorings, 0 failures", all.len(), corpus.len()))
}

fn local_chromatic() -> Outcome {
    let mut seen = Vec::new();
    for (name, h, expected) in [("K4", Hypergraph::complete(4, 2).unwrap(), 4), ("C5", Hypergraph::cycle(5).unwrap(), 3)] {
        let res = h.local_chromatic_number(budget()).map_err(|e| e.to_string())?;
        ensure(res.exact && res.value == expected, || format!("chi_l({name}) = {} (exact {})", res.value, res.exact))?;
        let LocalReport::Checked(cert) = certify_local(&h, prime(2), budget()).map_err(|e| e.to_string())? else {
            return Err(format!("{name}: bound not applicable"));
        };
        ensure(cert.passed() && cert.formulas.hypergraph_bound <= expected, || {
            format!("{name}: bound {} vs {expected}", cert.formulas.hypergraph_bound)
        })?;
        seen.push(format!("chi_l({name})={expected}>={}", cert.formulas.hypergraph_bound));
    }
    let hyper = local_lower_formulas(7, 3, 3).map_err(|e| e.to_string())?;
    ensure(hyper.hypergraph_bound == 3, || format!("(7,3,3) gives {}", hyper.hypergraph_bound))?;
    let graph = local_lower_formulas(3, 2, 2).map_err(|e| e.to_string())?;
    ensure(graph.graph_bound == 3, || format!("(t,p) = (3,2) gives {}", graph.graph_bound))?;
    Ok(format!("{}, (7,3,3)->3, (3,2)->3", seen.join(" ")))
}

/// Every labeled simplex over `Z_p` with `m` levels, including non-simplices.
fn all_labeled(p: usize, m: usize) -> Vec<LabeledSimplex> {
    (0..1u64 << (p * m))
        .map(|mask| {
            let e: Vec<(usize, usize)> = (0..p * m).filter(|&i| mask >> i & 1 == 1).map(|i| (i % p, i / p)).collect();
            LabeledSimplex::new(p, m, &e).unwrap()
        })
        .collect()
}

fn proof_machinery() -> Outcome {
    let mut checked = 0;
    for p in 2..=3 {
        for m in 1..=4 {
            for tau in all_labeled(p, m) {
                ensure(value_l(&tau).0 == value_l_by_definition(&tau), || format!("l({tau:?}): closed form {:?}", value_l(&tau)))?;
                checked += 1;
            }
        }
    }

    let mut signs = 0;
    for p in [2, 3, 5] {
        for mask in 1u64..(1 << p) - 1 {
            let set = VertexSet(mask);
            let shifted: VertexSet = set.iter().map(|x| (x + 1) % p).collect();
            let (a, b) = (s0(set, p).map_err(|e| e.to_string())?, s0(shifted, p).map_err(|e| e.to_string())?);
            ensure(b == (a + 1) % p, || format!("s0 not equivariant at {set:?}, p = {p}"))?;
            signs += 1;
        }
        let m = if p <= 3 { 3 } else { 2 };
        for tau in all_labeled(p, m) {
            let Ok(a) = s(&tau) else { continue };
            let b = s(&tau.rotate(1)).map_err(|e| e.to_string())?;
            ensure(b == (a + 1) % p, || format!("s not equivariant at {tau:?}"))?;
            signs += 1;
        }
    }

    let t = |p: usize, e: &[(usize, usize)]| LabeledSimplex::new(p, 4, e).unwrap();
    let pairs = [
        (t(2, &[(0, 1)]), t(2, &[(0, 1), (1, 2)]), ProofCase::HZeroThenPositive),
        (t(2, &[(0, 1), (1, 2)]), t(2, &[(0, 1), (1, 2), (0, 3)]), ProofCase::SameH),
        (t(2, &[(0, 1), (1, 2), (0, 3)]), t(2, &[(0, 1), (1, 2), (0, 3), (1, 0)]), ProofCase::GrowingH),
    ];
    for (a, b, case) in &pairs {
        let (c, r) = refute_conflict(a, b, 0).map_err(|e| e.to_string())?;
        ensure(c == *case && !matches!(r, Refutation::Unrefuted { .. }), || format!("{case:?}: got {c:?} {r:?}"))?;
    }
    let too_long = [t(2, &[(0, 0), (1, 1), (0, 2), (1, 3)])];
    ensure(matches!(gamma_collapse(&too_long, 3, 0), Err(Error::Precondition(_))), || "collapse accepted l(τ) ≥ n".into())?;
    let full_level = [t(2, &[(0, 0), (1, 0)])];
    ensure(matches!(gamma_collapse(&full_level, 3, 0), Err(Error::OutsideDomain(_))), || "collapse accepted a non-simplex".into())?;
    Ok(format!("{checked} values of l, {signs} sign equivariance checks, 3 proof cases and 2 invalid inputs flagged"))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { name: "1 chromatic formula", limit: Duration::from_secs(60), run: chromatic_formula },
        Criterion { name: "2 defect identity", limit: Duration::from_secs(30), run: defect_identity },
        Criterion { name: "3 alternation identity", limit: Duration::from_secs(60), run: alternation_identity },
        Criterion { name: "4 hierarchy consistency", limit: Duration::from_secs(600), run: hierarchy_consistency },
        Criterion { name: "5 fan lemma sweeps", limit: Duration::from_secs(600), run: fan_sweeps },
        Criterion { name: "6 colorful witnesses", limit: Duration::from_secs(900), run: colorful_witnesses },
        Criterion { name: "7 zig-zag", limit: Duration::from_secs(300), run: zigzag },
        Criterion { name: "8 local chromatic", limit: Duration::from_secs(300), run: local_chromatic },
        Criterion { name: "9 proof machinery", limit: Duration::from_secs(120), run: proof_machinery },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        println!(
            "{} {:<26} {:>8.2}s / {:>4}s  tolerance 0  {detail}",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
        if !ok {
            failed.push(c.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
