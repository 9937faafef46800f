use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zp_colorful::altdefect::{alt_min, alt_sigma_witness, colorability_defect, AltMode};
use zp_colorful::colorful::{
    certify_local, colorful_corpus, coloring_corpus, find_colorful_balanced, zigzag_check, zigzag_target, ColorfulSearch, CorpusPolicy, LocalReport,
};
use zp_colorful::complex::{box_complex, hom_poset, order_complex, q_poset, GPoset};
use zp_colorful::index::{ind_bounds, xind_exact, IndOptions, IndexHint};
use zp_colorful::io::{coloring_to_text, hypergraph_to_text, one_based, parse_coloring, parse_hypergraph};
use zp_colorful::report::{bounds_report, BoundsOptions};
use zp_colorful::tucker::{run_campaign, Campaign, Enumeration, FanParams, Lemma};
use zp_colorful::{kneser, petersen, usual_kneser, ChromaticNumber, Coloring, Error, Hypergraph, Modulus, SearchBudget, VertexSet};

const OK: u8 = 0;
const USAGE: u8 = 1;
const COUNTEREXAMPLE: u8 = 2;
const EXHAUSTED: u8 = 3;

/// Beyond this the hom poset is too large to build for a default target.
const HOM_TARGET_MAX_N: usize = 16;

#[derive(Parser)]
#[command(name = "zpcolor", version, about = "Chromatic lower bounds and colorful witnesses for uniform hypergraphs")]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled corpus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Accept a non-prime modulus; results are marked experimental.
    #[arg(long, global = true)]
    allow_nonprime: bool,
    /// Node limit for each exhaustive search.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Hypergraph in the `v`/`e` text format.
    #[arg(long, conflicts_with = "graph")]
    file: Option<PathBuf>,
    /// Named instance: petersen, K<n>, K<n>_<k>, C<n>, KG(<n>,<k>) or KG<r>(<n>,<k>).
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic number with an optimal coloring.
    Chromatic {
        #[command(flatten)]
        input: Input,
    },
    /// Local chromatic number; with --p also the certified lower bound.
    Local {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Writes the Kneser hypergraph KG^r(F) in the text format.
    Kneser {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
    },
    /// Alternation number alt_p(F) with an optimal ordering.
    Alt {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
        /// Minimize over this many seeded random orderings instead of all.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Colorability defect cd_p(F).
    Cd {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
    },
    /// The box complex B_0(H, Z_p).
    Box {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
    },
    /// The hom poset Hom(K^r_p, H).
    Hom {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
    },
    /// Cross-index of a hom poset or of Q_{n,p}.
    Xind {
        #[arg(long, value_enum, default_value_t = PosetKind::Hom)]
        poset: PosetKind,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
        /// Level count parameter for `--poset q`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Certified interval for the Z_p-index of a complex.
    Indbounds {
        #[arg(long, value_enum, default_value_t = ComplexKind::Box)]
        complex: ComplexKind,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
        /// Treat the input as F and use KG^r(F), with the alternation bound.
        #[arg(long)]
        kneser_r: Option<usize>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// The chain of lower bounds for KG^r(F) with a consistency verdict.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: usize,
        /// Minimize the alternation number over seeded samples only.
        #[arg(long)]
        alt_samples: Option<usize>,
    },
    /// Colorful balanced complete multipartite witnesses.
    Colorful {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: usize,
        /// Witness size; defaults to Xind(Hom(K^r_p, H)) + p, or to the certified
        /// index bound of B_0(H, Z_p) plus one for large H or H without a p-clique.
        #[arg(long)]
        target: Option<usize>,
        /// Coloring file (1-based colors); defaults to an optimal coloring.
        #[arg(long, conflicts_with = "samples")]
        coloring: Option<PathBuf>,
        /// Test this many seeded random colorings.
        #[arg(long)]
        samples: Option<usize>,
        /// Test every proper coloring up to color permutation.
        #[arg(long, conflicts_with_all = ["coloring", "samples"])]
        all_colorings: bool,
        /// Largest palette for generated colorings.
        #[arg(long, default_value_t = 6)]
        max_colors: usize,
    },
    /// Alternating multicolored complete bipartite subgraphs.
    Zigzag {
        #[command(flatten)]
        input: Input,
        /// Witness size; defaults to Xind(Hom(K_2, G)) + 2.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long, conflicts_with = "coloring")]
        all_colorings: bool,
    },
    /// Exhaustive or sampled sweeps of the chain lemmas.
    Verify {
        #[arg(long, value_enum)]
        lemma: Option<LemmaArg>,
        /// Campaign manifest (JSON); replaces the grid flags.
        #[arg(long, conflicts_with = "lemma")]
        manifest: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PosetKind {
    Hom,
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexKind {
    Box,
    /// Order complex of the hom poset.
    Hom,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaArg {
    ZpFan,
    Tucker,
}

struct Ctx {
    json: bool,
    seed: u64,
    allow_nonprime: bool,
    budget: SearchBudget,
    ind: IndOptions,
}

struct Output {
    human: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(human: String, json: Value) -> Self {
        Output { human, json, code: OK }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res = Result<Output, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn named(name: &str) -> Result<Hypergraph, Failure> {
    let bad = || usage(format!("unknown instance `{name}`"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if name.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    if let Some(rest) = name.strip_prefix("KG") {
        let (r, args) = rest.split_once('(').ok_or_else(bad)?;
        let r = if r.is_empty() { 2 } else { num(r)? };
        let (n, k) = args.strip_suffix(')').and_then(|a| a.split_once(',')).ok_or_else(bad)?;
        return Ok(usual_kneser(num(n.trim())?, num(k.trim())?, r)?);
    }
    if let Some(rest) = name.strip_prefix('K') {
        return Ok(match rest.split_once('_') {
            Some((n, k)) => Hypergraph::complete(num(n)?, num(k)?)?,
            None => Hypergraph::complete(num(rest)?, 2)?,
        });
    }
    if let Some(rest) = name.strip_prefix('C') {
        return Ok(Hypergraph::cycle(num(rest)?)?);
    }
    Err(bad())
}

fn load(input: &Input) -> Result<(String, Hypergraph), Failure> {
    match (&input.file, &input.graph) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), parse_hypergraph(&text)?))
        }
        (None, Some(name)) => Ok((name.clone(), named(name)?)),
        (None, None) => Err(usage("give --file or --graph")),
    }
}

fn load_coloring(path: &PathBuf, n: usize) -> Result<Coloring, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(parse_coloring(&text, n)?)
}

fn modulus(p: usize, ctx: &Ctx) -> Result<Modulus, Failure> {
    if ctx.allow_nonprime {
        Ok(Modulus::experimental(p)?)
    } else {
        Modulus::prime(p).map_err(|e| match e {
            Error::NotPrime(_) => usage(format!("{e}; pass --allow-nonprime to run experimentally")),
            other => Failure::Lib(other),
        })
    }
}

fn sets(s: &[VertexSet]) -> Vec<Vec<usize>> {
    s.iter().map(|x| one_based(*x)).collect()
}

fn colors_1(c: &Coloring) -> Vec<usize> {
    c.colors().iter().map(|k| k + 1).collect()
}

fn chromatic(ctx: &Ctx, input: &Input) -> Res {
    let (name, h) = load(input)?;
    let res = h.chromatic_number(ctx.budget);
    let value = match res.value {
        ChromaticNumber::Finite(k) => json!(k),
        ChromaticNumber::Infinite => json!("infinite"),
    };
    let coloring = res.witness.as_ref().map(colors_1);
    let mut human = format!("instance    {name}\nchromatic   {value}{}\n", if res.exact { "" } else { " (upper bound)" });
    human += &format!("lower       {}\n", res.lower);
    if let Some(c) = &res.witness {
        human += &format!("coloring    {}", coloring_to_text(c));
    }
    let code = if res.exact { OK } else { EXHAUSTED };
    Ok(Output { human, json: json!({"instance": name, "chromatic": value, "exact": res.exact, "lower": res.lower, "coloring": coloring}), code })
}

fn local(ctx: &Ctx, input: &Input, p: Option<usize>) -> Res {
    let (name, h) = load(input)?;
    let Some(p) = p else {
        let res = h.local_chromatic_number(ctx.budget)?;
        let human = format!(
            "instance    {name}\nlocal       {}{}\ncoloring    {}",
            res.value,
            if res.exact { "" } else { " (upper bound)" },
            coloring_to_text(&res.witness)
        );
        let code = if res.exact { OK } else { EXHAUSTED };
        return Ok(Output {
            human,
            json: json!({"instance": name, "local_chromatic": res.value, "exact": res.exact, "coloring": colors_1(&res.witness)}),
            code,
        });
    };
    let m = modulus(p, ctx)?;
    match certify_local(&h, m, ctx.budget)? {
        LocalReport::NotApplicable { clique_number, p } => Ok(Output::ok(
            format!("instance    {name}\nnot applicable: clique number {clique_number} < p = {p}\n"),
            json!({"instance": name, "applicable": false, "clique_number": clique_number, "p": p}),
        )),
        LocalReport::Checked(cert) => {
            let replay = cert.replay.as_ref();
            let mut human = format!("instance    {name}\n");
            human += &format!("xind        {}{}\n", cert.xind.lower, if cert.xind.is_exact() { "" } else { " (lower bound)" });
            human += &format!("t           {}\nbound       {}\n", cert.t, cert.formulas.hypergraph_bound);
            human += &format!("local       {}{}\n", cert.local_chromatic, if cert.local_chromatic_exact { "" } else { " (upper bound)" });
            human += &format!("bound holds {}\n", cert.bound_holds);
            if let Some(r) = replay {
                human += &format!(
                    "argument    case {}, edge {:?}, u = {}, {} colors near e - u (promised {}): {}\n",
                    r.case,
                    r.edge.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    r.u + 1,
                    r.neighborhood_colors,
                    r.promised,
                    if r.holds { "ok" } else { "FAILED" }
                );
            }
            let code = if !cert.passed() {
                COUNTEREXAMPLE
            } else if !cert.local_chromatic_exact {
                EXHAUSTED
            } else {
                OK
            };
            Ok(Output {
                human,
                json: json!({
                    "instance": name,
                    "applicable": true,
                    "p": cert.p,
                    "r": cert.r,
                    "xind": {"lower": cert.xind.lower, "upper": cert.xind.upper},
                    "t": cert.t,
                    "formulas": cert.formulas,
                    "local_chromatic": cert.local_chromatic,
                    "exact": cert.local_chromatic_exact,
                    "bound_holds": cert.bound_holds,
                    "witness": cert.witness.as_ref().map(|w| sets(w.parts.parts())),
                    "replay": replay.map(|r| json!({
                        "case": r.case,
                        "edge": r.edge.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        "u": r.u + 1,
                        "v": r.v.map(|v| v + 1),
                        "covered_colors": r.covered.iter().map(|c| c + 1).collect::<Vec<_>>(),
                        "neighborhood_colors": r.neighborhood_colors,
                        "promised": r.promised,
                        "holds": r.holds,
                    })),
                }),
                code,
            })
        }
    }
}

fn kneser_cmd(input: &Input, r: usize) -> Res {
    let (name, f) = load(input)?;
    let kg = kneser(&f, r)?;
    let text = hypergraph_to_text(&kg);
    let mut human = format!("# KG^{r}({name}); vertex i is edge i of the input\n");
    for (i, e) in f.edges().iter().enumerate() {
        human += &format!("# {} = {:?}\n", i + 1, one_based(*e));
    }
    human += &text;
    Ok(Output::ok(
        human,
        json!({"instance": name, "r": r, "vertices": sets(f.edges()), "edges": kg.edges().iter().map(|e| one_based(*e)).collect::<Vec<_>>()}),
    ))
}

fn alt_cmd(ctx: &Ctx, input: &Input, p: usize, samples: Option<usize>) -> Res {
    let (name, f) = load(input)?;
    let mode = match samples {
        Some(samples) => AltMode::Sampled { samples, seed: ctx.seed },
        None => AltMode::Exact,
    };
    let res = alt_min(&f, p, mode)?;
    let witness = alt_sigma_witness(&f, p, &res.ordering)?;
    let ordering: Vec<usize> = res.ordering.as_slice().iter().map(|v| v + 1).collect();
    let human = format!(
        "instance    {name}\nalt_{p}       {}{}\n|V| - alt   {}\nordering    {ordering:?}\nwitness     {witness:?}\n",
        res.value,
        if res.exact { "" } else { " (upper bound)" },
        f.n() - res.value
    );
    let entries: Vec<Value> = witness.entries().iter().map(|e| e.map_or(json!(0), |k| json!(zp_colorful::zp::exponent(k, p)))).collect();
    Ok(Output::ok(human, json!({"instance": name, "p": p, "alt": res.value, "exact": res.exact, "ordering": ordering, "witness": entries})))
}

fn cd_cmd(ctx: &Ctx, input: &Input, p: usize) -> Res {
    let (name, f) = load(input)?;
    let d = colorability_defect(&f, p, ctx.budget)?;
    let human = format!("instance    {name}\ncd_{p}        {}\nremoved     {:?}\n", d.value, one_based(d.removed));
    Ok(Output::ok(human, json!({"instance": name, "p": p, "cd": d.value, "removed": one_based(d.removed)})))
}

fn box_cmd(ctx: &Ctx, input: &Input, p: usize) -> Res {
    let (name, h) = load(input)?;
    let k = box_complex(&h, modulus(p, ctx)?)?;
    let human = format!(
        "instance    {name}\nvertices    {}\nfacets      {}\ndimension   {}\nfree        {}\n",
        k.num_vertices(),
        k.facets().len(),
        k.dim(),
        k.is_free()
    );
    Ok(Output::ok(
        human,
        json!({"instance": name, "p": p, "vertices": k.num_vertices(), "facets": k.facets().len(), "dimension": k.dim(), "free": k.is_free()}),
    ))
}

fn hom_of(ctx: &Ctx, h: &Hypergraph, p: usize) -> Result<GPoset, Failure> {
    let r = h.require_uniformity()?;
    Ok(hom_poset(h, r, modulus(p, ctx)?)?.poset)
}

fn hom_cmd(ctx: &Ctx, input: &Input, p: usize) -> Res {
    let (name, h) = load(input)?;
    let poset = hom_of(ctx, &h, p)?;
    let orbits = poset.orbits();
    let human = format!(
        "instance    {name}\nelements    {}\norbits      {}\ncovers      {}\nheight      {}\n",
        poset.len(),
        orbits.reps.len(),
        poset.covers().len(),
        poset.height()
    );
    Ok(Output::ok(
        human,
        json!({"instance": name, "p": p, "elements": poset.len(), "orbits": orbits.reps.len(), "covers": poset.covers().len(), "height": poset.height()}),
    ))
}

fn xind_cmd(ctx: &Ctx, kind: PosetKind, input: &Input, p: usize, n: Option<usize>) -> Res {
    let (name, poset) = match kind {
        PosetKind::Hom => {
            let (name, h) = load(input)?;
            (format!("Hom(K_{p}, {name})"), hom_of(ctx, &h, p)?)
        }
        PosetKind::Q => {
            let n = n.ok_or_else(|| usage("--poset q needs --n"))?;
            modulus(p, ctx)?;
            (format!("Q_{{{n},{p}}}"), q_poset(n, p)?)
        }
    };
    let x = xind_exact(&poset, poset.height(), ctx.budget)?;
    let value = x.value();
    let human = match value {
        Some(v) => format!("{name}\nxind        {v}\n"),
        None => format!("{name}\nxind        in [{}, {}] (budget exhausted)\n", x.lower, x.upper.map_or("?".into(), |u| u.to_string())),
    };
    let witness: Option<Vec<Value>> = x.witness.as_ref().map(|w| {
        w.iter().enumerate().map(|(i, &(g, l))| json!({"element": poset.label(i), "sign": zp_colorful::zp::exponent(g, p), "level": l})).collect()
    });
    let code = if value.is_some() { OK } else { EXHAUSTED };
    Ok(Output { human, json: json!({"poset": name, "xind": value, "lower": x.lower, "upper": x.upper, "map": witness}), code })
}

fn indbounds_cmd(ctx: &Ctx, kind: ComplexKind, input: &Input, p: usize, kneser_r: Option<usize>, depth: usize) -> Res {
    let (name, h) = load(input)?;
    let m = modulus(p, ctx)?;
    let (target, hints) = match kneser_r {
        Some(r) => {
            let alt = alt_min(&h, p, AltMode::Exact)?;
            (kneser(&h, r)?, vec![IndexHint::KneserBox { f: h.clone(), r, ordering: alt.ordering }])
        }
        None => (h.clone(), Vec::new()),
    };
    let k = match kind {
        ComplexKind::Box => box_complex(&target, m)?,
        ComplexKind::Hom => {
            let r = target.require_uniformity()?;
            order_complex(&hom_poset(&target, r, m)?.poset)
        }
    };
    let opts = IndOptions { depth, ..ctx.ind };
    let i = ind_bounds(&k, &hints, &opts)?;
    let human = format!("instance    {name}\nind         [{}, {}]\ncertificates {}\n", i.lower, i.upper, i.certificates.len());
    Ok(Output::ok(human, json!({"instance": name, "p": p, "lower": i.lower, "upper": i.upper, "certificates": i.certificates})))
}

fn bounds_cmd(ctx: &Ctx, input: &Input, r: usize, p: usize, alt_samples: Option<usize>) -> Res {
    let (name, f) = load(input)?;
    let m = modulus(p, ctx)?;
    let opts = BoundsOptions {
        alt: alt_samples.map_or(AltMode::Exact, |samples| AltMode::Sampled { samples, seed: ctx.seed }),
        ind: ctx.ind,
        budget: ctx.budget,
    };
    let rep = bounds_report(&name, &f, r, m, &opts)?;
    let mut human = format!("instance {name}, r = {r}, p = {p}{}\n", if rep.experimental { " (experimental)" } else { "" });
    let show = |v: Option<i64>| v.map_or("?".to_string(), |x| if x == i64::MAX { "inf".into() } else { x.to_string() });
    for b in &rep.bounds {
        let value = match b.exact() {
            Some(v) => show(Some(v)),
            None => format!("[{}, {}]", show(b.lower), show(b.upper)),
        };
        human += &format!("  {:<40} {:>10}  {:>6} ms  {}\n", b.name, value, b.wall_ms, b.certificate);
    }
    human += if rep.consistent { "chain consistent\n" } else { "chain INCONSISTENT\n" };
    for bad in &rep.inconsistencies {
        human += &format!("  {} >= {} > {} >= {}\n", bad.below, bad.lower, bad.upper, bad.above);
    }
    let code = if rep.consistent { OK } else { COUNTEREXAMPLE };
    Ok(Output { human, json: serde_json::to_value(&rep).expect("report serializes"), code })
}

fn default_colorful_target(ctx: &Ctx, h: &Hypergraph, m: Modulus) -> Result<usize, Failure> {
    let r = h.require_uniformity()?;
    let p = m.get();
    if h.n() <= HOM_TARGET_MAX_N && h.clique_number()? >= p {
        let hom = hom_poset(h, r, m)?;
        let x = xind_exact(&hom.poset, hom.poset.height(), ctx.ind.budget)?;
        if x.is_exact() {
            return Ok((x.lower + p as isize).max(0) as usize);
        }
    }
    let i = ind_bounds(&box_complex(h, m)?, &[], &ctx.ind)?;
    Ok((i.lower + 1).max(0) as usize)
}

#[allow(clippy::too_many_arguments)]
fn colorful_cmd(
    ctx: &Ctx,
    input: &Input,
    p: usize,
    target: Option<usize>,
    coloring: Option<&PathBuf>,
    samples: Option<usize>,
    all: bool,
    max_colors: usize,
) -> Res {
    let (name, h) = load(input)?;
    let m = modulus(p, ctx)?;
    let target = match target {
        Some(t) => t,
        None => default_colorful_target(ctx, &h, m)?,
    };
    if samples.is_some() || all {
        let chi = h.chromatic_number(ctx.budget).finite().unwrap_or(1);
        let policy = match samples {
            Some(count) => CorpusPolicy::Sampled { count, min_colors: chi, max_colors: max_colors.max(chi), seed: ctx.seed },
            None => CorpusPolicy::Exhaustive { max_colors },
        };
        let corpus = coloring_corpus(&h, policy);
        let rep = colorful_corpus(&h, m, target, &corpus, ctx.budget)?;
        let human = format!(
            "instance    {name}\ntarget      {target}\ncolorings   {}\nwitnesses   {}\nfailures    {}\nunknown     {}\n",
            rep.colorings,
            rep.found,
            rep.counterexamples.len(),
            rep.unknown
        );
        let code = if !rep.counterexamples.is_empty() {
            COUNTEREXAMPLE
        } else if rep.unknown > 0 {
            EXHAUSTED
        } else {
            OK
        };
        let failures: Vec<Value> = rep.counterexamples.iter().map(|(c, best)| json!({"coloring": colors_1(c), "best_total": best})).collect();
        return Ok(Output {
            human,
            json: json!({"instance": name, "p": p, "target": target, "colorings": rep.colorings, "found": rep.found, "counterexamples": failures, "unknown": rep.unknown}),
            code,
        });
    }
    let c = match coloring {
        Some(path) => load_coloring(path, h.n())?,
        None => h.chromatic_number(ctx.budget).witness.ok_or_else(|| usage("no proper coloring exists"))?,
    };
    let res = find_colorful_balanced(&h, &c, m, target, ctx.budget)?;
    let (status, w, code) = match &res {
        ColorfulSearch::Found(w) => ("found", Some(w), OK),
        ColorfulSearch::Counterexample { best, .. } => ("counterexample", Some(best), COUNTEREXAMPLE),
        ColorfulSearch::Unknown { best, .. } => ("budget exhausted", best.as_ref(), EXHAUSTED),
    };
    let mut human = format!("instance    {name}\ntarget      {target}\nstatus      {status}\ncoloring    {}", coloring_to_text(&c));
    if let Some(w) = w {
        for (i, part) in w.parts.parts().iter().enumerate() {
            human += &format!("U_{}         {:?} colors {:?}\n", i + 1, one_based(*part), w.colors[i].iter().map(|k| k + 1).collect::<Vec<_>>());
        }
    }
    let parts = w.map(|w| sets(w.parts.parts()));
    let part_colors = w.map(|w| w.colors.iter().map(|cs| cs.iter().map(|k| k + 1).collect::<Vec<_>>()).collect::<Vec<_>>());
    Ok(Output {
        human,
        json: json!({"instance": name, "p": p, "target": target, "status": status, "coloring": colors_1(&c), "parts": parts, "part_colors": part_colors, "total": w.map(|w| w.total_size), "experimental": !m.is_prime()}),
        code,
    })
}

fn zigzag_cmd(ctx: &Ctx, input: &Input, t: Option<usize>, coloring: Option<&PathBuf>, all: bool) -> Res {
    let (name, g) = load(input)?;
    let t = match t {
        Some(t) => t,
        None => zigzag_target(&g, ctx.budget)?.0,
    };
    let colorings = if all {
        g.proper_colorings(g.n(), zp_colorful::colorful::EXHAUSTIVE_CAP)
    } else {
        vec![match coloring {
            Some(path) => load_coloring(path, g.n())?,
            None => g.chromatic_number(ctx.budget).witness.ok_or_else(|| usage("no proper coloring exists"))?,
        }]
    };
    let mut found = 0;
    let mut failures = Vec::new();
    let mut first = None;
    for c in &colorings {
        match zigzag_check(&g, c, Some(t), ctx.budget)? {
            Some(w) => {
                found += 1;
                first.get_or_insert(w);
            }
            None => failures.push(colors_1(c)),
        }
    }
    let mut human = format!("instance    {name}\nt           {t}\ncolorings   {}\nwitnesses   {found}\n", colorings.len());
    if let (Some(w), false) = (&first, all) {
        human += &format!(
            "side 1      {:?}\nside 2      {:?}\ncolors      {:?}\n",
            w.sides[0].iter().map(|v| v + 1).collect::<Vec<_>>(),
            w.sides[1].iter().map(|v| v + 1).collect::<Vec<_>>(),
            w.colors.iter().map(|k| k + 1).collect::<Vec<_>>()
        );
    }
    let code = if failures.is_empty() { OK } else { COUNTEREXAMPLE };
    let witness = first.map(|w| {
        json!({
            "sides": w.sides.iter().map(|s| s.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "colors": w.colors.iter().map(|k| k + 1).collect::<Vec<_>>(),
        })
    });
    Ok(Output {
        human,
        json: json!({"instance": name, "t": t, "colorings": colorings.len(), "found": found, "failures": failures, "witness": witness}),
        code,
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    ctx: &Ctx,
    lemma: Option<LemmaArg>,
    manifest: Option<&PathBuf>,
    n: Option<usize>,
    m: Option<usize>,
    p: Option<usize>,
    alpha: usize,
    exhaustive: bool,
    samples: Option<usize>,
) -> Res {
    let campaign = match (manifest, lemma) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<Campaign>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(lemma)) => {
            let (Some(n), Some(m)) = (n, m) else {
                return Err(usage("give --n and --m"));
            };
            let lemma = match lemma {
                LemmaArg::ZpFan => Lemma::ZpFan,
                LemmaArg::Tucker => Lemma::Tucker,
            };
            let p = p.unwrap_or(2);
            let enumeration = match samples {
                Some(samples) => Enumeration::Sampled { samples, seed: ctx.seed },
                None => {
                    let _ = exhaustive;
                    Enumeration::Exhaustive
                }
            };
            Campaign { lemma, grid: vec![FanParams { n, m, p, alpha }], enumeration, max_nodes: Some(ctx.budget.max_nodes) }
        }
        (None, None) => return Err(usage("give --lemma or --manifest")),
    };
    for params in &campaign.grid {
        modulus(params.p, ctx)?;
    }
    let rep = run_campaign(&campaign)?;
    let mut human = String::new();
    for run in &rep.runs {
        let q = run.params;
        human += &format!(
            "(n, m, p, alpha) = ({}, {}, {}, {}): {} admissible labelings, {} chains, {} counterexamples{}{}\n",
            q.n,
            q.m,
            q.p,
            q.alpha,
            run.admissible,
            run.chains_found,
            run.failures(),
            run.even_alternating_counts.map_or(String::new(), |e| format!(", {e} with even alternating-chain count")),
            if run.complete { "" } else { " (budget exhausted)" }
        );
    }
    human += &format!("{} counterexamples\n", rep.counterexamples);
    let code = if rep.counterexamples > 0 {
        COUNTEREXAMPLE
    } else if !rep.complete {
        EXHAUSTED
    } else {
        OK
    };
    Ok(Output { human, json: serde_json::to_value(&rep).expect("report serializes"), code })
}

fn run(cli: Cli) -> Res {
    let ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
        allow_nonprime: cli.allow_nonprime,
        budget: cli.max_nodes.map_or_else(SearchBudget::default, SearchBudget::nodes),
        ind: cli.max_nodes.map_or_else(IndOptions::default, |n| IndOptions { budget: SearchBudget::nodes(n), ..IndOptions::default() }),
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be positive"));
        }
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    if cli.max_nodes == Some(0) {
        return Err(usage("--max-nodes must be positive"));
    }
    match &cli.command {
        Command::Chromatic { input } => chromatic(&ctx, input),
        Command::Local { input, p } => local(&ctx, input, *p),
        Command::Kneser { input, r } => kneser_cmd(input, *r),
        Command::Alt { input, p, samples } => alt_cmd(&ctx, input, *p, *samples),
        Command::Cd { input, p } => cd_cmd(&ctx, input, *p),
        Command::Box { input, p } => box_cmd(&ctx, input, *p),
        Command::Hom { input, p } => hom_cmd(&ctx, input, *p),
        Command::Xind { poset, input, p, n } => xind_cmd(&ctx, *poset, input, *p, *n),
        Command::Indbounds { complex, input, p, kneser_r, depth } => indbounds_cmd(&ctx, *complex, input, *p, *kneser_r, *depth),
        Command::Bounds { input, r, p, alt_samples } => bounds_cmd(&ctx, input, *r, *p, *alt_samples),
        Command::Colorful { input, p, target, coloring, samples, all_colorings, max_colors } => {
            colorful_cmd(&ctx, input, *p, *target, coloring.as_ref(), *samples, *all_colorings, *max_colors)
        }
        Command::Zigzag { input, t, coloring, all_colorings } => zigzag_cmd(&ctx, input, *t, coloring.as_ref(), *all_colorings),
        Command::Verify { lemma, manifest, n, m, p, alpha, exhaustive, samples } => {
            verify_cmd(&ctx, *lemma, manifest.as_ref(), *n, *m, *p, *alpha, *exhaustive, *samples)
        }
    }
    .inspect(|out| {
        if ctx.json {
            println!("{}", serde_json::to_string_pretty(&out.json).expect("json output"));
        } else {
            print!("{}", out.human);
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok(out) => ExitCode::from(out.code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
