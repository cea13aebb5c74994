use std::io::Write;

use anyhow::{anyhow, Result};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use twistmaps::canonical::Form;
use twistmaps::census::{h, CensusReport};
use twistmaps::gfield::odd_prime_power;
use twistmaps::oracle::selfdual::{reference_rows, SelfDualRow};
use twistmaps::oracle::{OracleCensus, OracleOptions, OrbitRec};
use twistmaps::twisted_group::TwistedGroup;

use crate::{cache, render, Cli, Command, Failure, Format, Level, Outcome};

/// Default bound on q for orbit enumeration.
pub const DEFAULT_MAX_Q: u64 = 27;
/// Brute-force comparisons run up to this q unless explicitly lifted.
pub const BRUTEFORCE_MAX_Q: u64 = 9;
/// Random twisted elements checked per brute-force verification.
const ORDER_SAMPLES: usize = 1000;

pub fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<Outcome> {
    match &cli.command {
        Command::Count { p, f, reflexible } => count(cli, out, *p, *f, *reflexible),
        Command::Verify { q, level, allow_large } => verify(cli, out, *q, *level, *allow_large),
        Command::Selfdual { q } => selfdual(cli, out, *q),
        Command::Orbits { q, kind, fuse } => orbits(cli, out, *q, *kind, *fuse),
    }
}

fn split_q(q: u64) -> Result<(u64, u32)> {
    odd_prime_power(q).ok_or_else(|| Failure::Usage(format!("q = {q} is not a power of an odd prime")).into())
}

fn census(cli: &Cli, p: u64, f: u32) -> Result<CensusReport> {
    cache::get_or_compute(cli.cache_dir.as_deref(), "census", p, f, || {
        CensusReport::compute(p, f).map_err(|e| Failure::Usage(e.to_string()).into())
    })
}

fn group(cli: &Cli, q: u64) -> Result<TwistedGroup> {
    let (p, f) = split_q(q)?;
    if q > cli.max_q {
        return Err(Failure::Resource(format!("q = {q} exceeds the enumeration bound {}", cli.max_q)).into());
    }
    TwistedGroup::new(p, f).map_err(|e| Failure::Resource(e.to_string()).into())
}

fn oracle(cli: &Cli, g: &TwistedGroup) -> Result<OracleCensus> {
    cache::get_or_compute(cli.cache_dir.as_deref(), "oracle", g.p(), g.f(), || {
        OracleCensus::run(g, OracleOptions::all()).map_err(|e| anyhow!(e))
    })
}

#[derive(Serialize)]
struct CountRow {
    p: u64,
    f: u32,
    q: String,
    total_orbits: String,
    orb_f: String,
    map_count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflexible_orb_f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflexible_count: Option<String>,
}

fn count<W: Write>(cli: &Cli, out: &mut W, p: u64, f: u32, reflexible: bool) -> Result<Outcome> {
    let r = census(cli, p, f)?;
    match cli.format {
        Format::Json => render::json(out, &r)?,
        Format::Csv => render::csv(
            out,
            &[CountRow {
                p,
                f,
                q: r.q.to_string(),
                total_orbits: r.total_orbits.to_string(),
                orb_f: r.orb_f.to_string(),
                map_count: r.map_count.to_string(),
                reflexible_orb_f: reflexible.then(|| r.reflexible_orb_f.to_string()),
                reflexible_count: reflexible.then(|| r.reflexible_count.to_string()),
            }],
        )?,
        Format::Text => {
            writeln!(out, "q = {}^{} = {}", p, f, r.q)?;
            writeln!(out, "f = 2^{} * {}", r.alpha, r.o)?;
            let divs: Vec<String> = r.twisted_divisors.iter().map(u32::to_string).collect();
            writeln!(out, "levels: {}", divs.join(" "))?;
            writeln!(out, "n_f = {}", r.n_f)?;
            let n = &r.orbits;
            writeln!(
                out,
                "orbits: n1 = {}, n2 = {}, n3 = {}, n4 = {}, total = {}",
                n.n1, n.n2, n.n3, n.n4, r.total_orbits
            )?;
            for l in &r.orb {
                writeln!(out, "orb({}) = {}", l.e, l.orb)?;
            }
            writeln!(out, "maps: {}", r.map_count)?;
            if reflexible {
                let rr = &r.reflexible_orbits;
                writeln!(
                    out,
                    "reflexible orbits: r1 = {}, r2 = {}, r3 = {}, r4 = {}, R = {}",
                    rr.r1, rr.r2, rr.r3, rr.r4, rr.big_r
                )?;
                writeln!(out, "reflexible orb({}) = {}", f, r.reflexible_orb_f)?;
                writeln!(out, "reflexible maps: {}", r.reflexible_count)?;
            }
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Debug, Clone, Serialize)]
struct Comparison {
    name: String,
    expected: String,
    actual: String,
    ok: bool,
}

fn cmp(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Comparison {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Comparison {
        name: name.into(),
        ok: expected == actual,
        expected,
        actual,
    }
}

fn formula_comparisons(r: &CensusReport) -> Vec<Comparison> {
    let q2 = &r.q * &r.q;
    let direct = (&q2 - 1u32) * (&q2 - 2u32) / 8u32;
    let rr = &r.reflexible_orbits;
    let resum: BigUint = r.orb.iter().map(|l| &l.orb).sum();
    vec![
        cmp("n1+n2+n3+n4", &direct, r.orbits.total()),
        cmp("total orbits", &direct, &r.total_orbits),
        cmp("h(f)", &direct, h(r.p, r.f)),
        cmp("sum of orb(e)", &direct, resum),
        cmp("orb(f)", &r.map_count * r.f, &r.orb_f),
        cmp("reflexible orb(f)", &r.reflexible_count * r.f, &r.reflexible_orb_f),
        cmp("r1+r2", &rr.big_r1, &rr.r1 + &rr.r2),
        cmp("r3+r4", &rr.big_r2, &rr.r3 + &rr.r4),
        cmp("R1+R2", &rr.big_r, &rr.big_r1 + &rr.big_r2),
    ]
}

fn partition_comparisons(r: &CensusReport, c: &OracleCensus) -> Vec<Comparison> {
    let case = |form: Form, exceptional: bool| {
        c.records
            .iter()
            .filter(|rec| rec.form() == form && rec.key.class.is_exceptional(c.q) == exceptional)
            .count()
    };
    let mut v = vec![
        cmp("n1", &r.orbits.n1, case(Form::Dia, false)),
        cmp("n2", &r.orbits.n2, case(Form::Dia, true)),
        cmp("n3", &r.orbits.n3, case(Form::Off, false)),
        cmp("n4", &r.orbits.n4, case(Form::Off, true)),
        cmp("total orbits", &r.total_orbits, c.total_orbits()),
    ];
    for l in &r.orb {
        v.push(cmp(format!("orb({})", l.e), &l.orb, c.orbits_at_level(l.e)));
    }
    v
}

fn bruteforce_comparisons(cli: &Cli, g: &TwistedGroup, r: &CensusReport, c: &OracleCensus) -> Result<Vec<Comparison>> {
    let mut v = partition_comparisons(r, c);
    v.push(cmp("maps", &r.map_count, c.maps()?));
    v.push(cmp("reflexible maps", &r.reflexible_count, c.reflexible_maps()?));
    v.push(cmp(
        "reflexible orb(f)",
        &r.reflexible_orb_f,
        c.reflexible_generating_orbits()?,
    ));
    let rr = &r.reflexible_orbits;
    v.push(cmp(
        "reflexible Dia orbits",
        &rr.big_r1,
        c.reflexible_by_form(Form::Dia)?,
    ));
    v.push(cmp(
        "reflexible Off orbits",
        &rr.big_r2,
        c.reflexible_by_form(Form::Off)?,
    ));
    if let Some(fusion) = &c.fusion {
        let gen_bundles: Vec<&Vec<usize>> = fusion.bundles.iter().filter(|b| c.records[b[0]].level == c.f).collect();
        let sized = gen_bundles.iter().filter(|b| b.len() == c.f as usize).count();
        v.push(cmp("generating bundles of size f", gen_bundles.len(), sized));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let bad = (0..ORDER_SAMPLES)
        .filter(|_| !g.order(&g.random_twisted(&mut rng)).is_multiple_of(4))
        .count();
    v.push(cmp("sampled twisted orders not divisible by 4", 0, bad));
    Ok(v)
}

fn selfdual_comparisons(q: u64, c: &OracleCensus) -> Result<Vec<Comparison>> {
    let want = reference_rows(q).ok_or_else(|| Failure::Usage(format!("no reference self-duality row for q = {q}")))?;
    let got = c.self_dual_rows()?;
    let names = ["k=l", "positive", "negative", "both"];
    let mut v = Vec::new();
    for (w, g) in want.iter().zip(&got) {
        for ((name, a), b) in names.iter().zip(w.cells()).zip(g.cells()) {
            v.push(cmp(format!("{} {name}", w.form), a, b));
        }
    }
    Ok(v)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    q: u64,
    level: &'a str,
    pass: bool,
    comparisons: &'a [Comparison],
}

fn verify<W: Write>(cli: &Cli, out: &mut W, q: u64, level: Level, allow_large: bool) -> Result<Outcome> {
    let (p, f) = split_q(q)?;
    let report = census(cli, p, f)?;
    let (label, comparisons) = match level {
        Level::Formulas => ("formulas", formula_comparisons(&report)),
        Level::Orbits => {
            let g = group(cli, q)?;
            ("orbits", partition_comparisons(&report, &oracle(cli, &g)?))
        }
        Level::Bruteforce => {
            if q > BRUTEFORCE_MAX_Q && !allow_large {
                return Err(Failure::Resource(format!(
                    "brute force is limited to q <= {BRUTEFORCE_MAX_Q}; pass --allow-large for a partition-only run"
                ))
                .into());
            }
            let g = group(cli, q)?;
            let c = oracle(cli, &g)?;
            if q > BRUTEFORCE_MAX_Q {
                ("bruteforce (partition only)", partition_comparisons(&report, &c))
            } else {
                ("bruteforce", bruteforce_comparisons(cli, &g, &report, &c)?)
            }
        }
        Level::Selfdual => {
            if reference_rows(q).is_none() {
                return Err(Failure::Usage(format!("no reference self-duality row for q = {q}")).into());
            }
            let g = group(cli, q)?;
            ("selfdual", selfdual_comparisons(q, &oracle(cli, &g)?)?)
        }
    };
    let pass = comparisons.iter().all(|c| c.ok);
    match cli.format {
        Format::Json => render::json(
            out,
            &VerifyReport {
                q,
                level: label,
                pass,
                comparisons: &comparisons,
            },
        )?,
        Format::Csv => render::csv(out, &comparisons)?,
        Format::Text => {
            for c in &comparisons {
                let mark = if c.ok { "ok  " } else { "FAIL" };
                writeln!(out, "{mark} {}: expected {}, actual {}", c.name, c.expected, c.actual)?;
            }
            writeln!(out, "{} q={q} level={label}", if pass { "PASS" } else { "MISMATCH" })?;
        }
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Mismatch })
}

fn selfdual<W: Write>(cli: &Cli, out: &mut W, q: u64) -> Result<Outcome> {
    let g = group(cli, q)?;
    let rows: Vec<SelfDualRow> = oracle(cli, &g)?.self_dual_rows()?.to_vec();
    match cli.format {
        Format::Json => render::json(out, &rows)?,
        Format::Csv => render::csv(out, &rows)?,
        Format::Text => {
            writeln!(
                out,
                "{:>6} {:>4} {:>8} {:>8} {:>8} {:>8}",
                "q", "form", "k=l", "+sd", "-sd", "both"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>6} {:>4} {:>8} {:>8} {:>8} {:>8}",
                    r.q,
                    r.form.to_string(),
                    r.k_eq_l,
                    r.pos_sd,
                    r.neg_sd,
                    r.both
                )?;
            }
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct OrbitRow {
    class: String,
    e1: String,
    e2: String,
    u: String,
    size: usize,
    level: u32,
    k: u64,
    l: u64,
    reflexible: bool,
    shapes: String,
    pos_sd: Option<bool>,
    neg_sd: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bundle_size: Option<usize>,
}

const ORBIT_HEADER: [&str; 12] = [
    "class",
    "e1",
    "e2",
    "u",
    "size",
    "level",
    "k",
    "l",
    "reflexible",
    "shapes",
    "pos_sd",
    "neg_sd",
];

fn orbit_row(g: &TwistedGroup, r: &OrbitRec, bundle_size: Option<usize>) -> OrbitRow {
    let f = g.field();
    let shapes: Vec<String> = r.shapes.iter().map(|s| format!("{s:?}")).collect();
    OrbitRow {
        class: r.key.class.to_string(),
        e1: f.render(r.key.e1),
        e2: f.render(r.key.e2),
        u: f.render(r.key.u),
        size: r.size,
        level: r.level,
        k: r.k,
        l: r.l,
        reflexible: r.reflexible == Some(true),
        shapes: shapes.join(";"),
        pos_sd: r.self_duality.map(|s| s.positive),
        neg_sd: r.self_duality.map(|s| s.negative),
        bundle_size,
    }
}

fn orbits<W: Write>(cli: &Cli, out: &mut W, q: u64, kind: Option<(u64, u64)>, fuse: bool) -> Result<Outcome> {
    let g = group(cli, q)?;
    let c = oracle(cli, &g)?;
    let keep = |r: &OrbitRec| kind.is_none_or(|(k, l)| r.k == k && r.l == l);
    let rows: Vec<OrbitRow> = if fuse {
        let fusion = c
            .fusion
            .as_ref()
            .ok_or_else(|| anyhow!("fusion missing from oracle result"))?;
        fusion
            .bundles
            .iter()
            .map(|b| (&c.records[b[0]], b.len()))
            .filter(|(r, _)| keep(r))
            .map(|(r, n)| orbit_row(&g, r, Some(n)))
            .collect()
    } else {
        c.records
            .iter()
            .filter(|r| keep(r))
            .map(|r| orbit_row(&g, r, None))
            .collect()
    };
    match cli.format {
        Format::Json => render::json(out, &rows)?,
        Format::Csv => render::csv_with_header(out, &ORBIT_HEADER, &rows)?,
        Format::Text => {
            let flag = |b: Option<bool>| match b {
                Some(true) => "y",
                Some(false) => "n",
                None => "-",
            };
            for r in &rows {
                write!(
                    out,
                    "{} ({}, {}) u={} size={} e={} type=({},{}) reflexible={} shapes=[{}] sd={}/{}",
                    r.class,
                    r.e1,
                    r.e2,
                    r.u,
                    r.size,
                    r.level,
                    r.k,
                    r.l,
                    flag(Some(r.reflexible)),
                    r.shapes,
                    flag(r.pos_sd),
                    flag(r.neg_sd)
                )?;
                match r.bundle_size {
                    Some(n) => writeln!(out, " bundle={n}")?,
                    None => writeln!(out)?,
                }
            }
            writeln!(out, "{} rows", rows.len())?;
        }
    }
    Ok(Outcome::Pass)
}
