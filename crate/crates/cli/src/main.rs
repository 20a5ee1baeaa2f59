use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mapcone_core::dg::{
    aci_resolution, dg_check, koszul_dg, koszul_sequence_check, koszul_type_check, taylor_dg,
    taylor_via_star,
};
use mapcone_core::export::serde_value::{Input, PolynomialInput, Section};
use mapcone_core::export::{
    betti_json, class_report_json, complex_json, dg_json, ideal_json, polynomial_terms, regularity_json,
    sets_json, verify_json, ErrorJson, Report,
};
use mapcone_core::format::{parse_aci, parse_ideal, parse_matroid, parse_sequence};
use mapcone_core::resolution::{betti_from_sets, betti_of_complex, betti_oracle, lq_resolution, verify_complex};
use mapcone_core::{Decomposer, OrderStrategy, OrderedIdeal, Polynomial};

const SEED_ENV: &str = "MAPCONE_SEED";

#[derive(Parser)]
#[command(name = "mapcone", version, about = "Free resolutions of monomial ideals with linear quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Generator order used for the linear-quotient checks.
    #[arg(long, value_enum, default_value_t = Order::Given, global = true)]
    order: Order,
    /// Seed for randomized rank checks; MAPCONE_SEED overrides it.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable summary.
    #[arg(long, global = true)]
    text: bool,
    /// Read the input as matroid bases instead of monomials.
    #[arg(long, global = true)]
    matroid: bool,
    /// Include DG product tables in the report.
    #[arg(long, global = true)]
    tables: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Given,
    Degrevlex,
    Search,
}

impl Order {
    fn name(self) -> &'static str {
        match self {
            Order::Given => "given",
            Order::Degrevlex => "degrevlex",
            Order::Search => "search",
        }
    }
}

#[derive(Args)]
struct InputArg {
    /// Input file, or `-` for standard input.
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Class report, sets and regularity of the decomposition function.
    Analyze(InputArg),
    /// The linear-quotient resolution.
    Resolve(InputArg),
    /// Betti numbers from the sets and from an independent oracle.
    Betti(InputArg),
    /// Verification report of the linear-quotient resolution.
    Verify(InputArg),
    /// Taylor DG algebra and its construction as an iterated star.
    Taylor(InputArg),
    /// DG-algebra laws of the Koszul and Taylor algebras of the generators.
    Dgcheck(InputArg),
    /// Resolution of an almost complete intersection (`f:`, `g:`, `a:` lines).
    Aci(InputArg),
    /// Koszul-sequence check (`f:`, `steps:` and optional `g:`, `a:` lines).
    Koszulseq(InputArg),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Resolve(_) => "resolve",
            Command::Betti(_) => "betti",
            Command::Verify(_) => "verify",
            Command::Taylor(_) => "taylor",
            Command::Dgcheck(_) => "dgcheck",
            Command::Aci(_) => "aci",
            Command::Koszulseq(_) => "koszulseq",
        }
    }

    fn input(&self) -> &str {
        match self {
            Command::Analyze(a)
            | Command::Resolve(a)
            | Command::Betti(a)
            | Command::Verify(a)
            | Command::Taylor(a)
            | Command::Dgcheck(a)
            | Command::Aci(a)
            | Command::Koszulseq(a) => &a.input,
        }
    }
}

struct Session {
    report: Report,
    text: Vec<String>,
    seed: u64,
    order: Order,
    matroid: bool,
    tables: bool,
}

impl Session {
    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn dg(&mut self, key: &str, section: Section) {
        self.report
            .dg
            .get_or_insert_with(BTreeMap::new)
            .insert(key.to_string(), section);
    }

    fn load_ideal(&mut self, path: &str) -> anyhow::Result<OrderedIdeal> {
        let text = read_input(path)?;
        let ideal = if self.matroid {
            parse_matroid(&text)?
        } else {
            parse_ideal(&text)?
        };
        let ordered = self.apply_order(&ideal)?;
        self.report.input = Some(Input::Ideal(ideal_json(&ordered)));
        self.report.order = Some(self.order.name().to_string());
        let gens: Vec<String> = ordered.generators().iter().map(ToString::to_string).collect();
        self.line(format!("ideal: ({})", gens.join(", ")));
        self.line(format!("order: {}", self.order.name()));
        Ok(ordered)
    }

    fn apply_order(&self, ideal: &OrderedIdeal) -> anyhow::Result<OrderedIdeal> {
        Ok(match self.order {
            Order::Given => ideal.clone(),
            Order::Degrevlex => ideal.degrevlex_order(),
            Order::Search => match ideal.find_lq_order(OrderStrategy::Degrevlex)? {
                Some(o) => o,
                None => ideal.find_lq_order(OrderStrategy::Exhaustive)?.unwrap_or_else(|| ideal.clone()),
            },
        })
    }

    /// Attaches the sets, reporting them; fails without linear quotients.
    fn sets(&mut self, ideal: &OrderedIdeal) -> anyhow::Result<OrderedIdeal> {
        let with = ideal.clone().with_sets()?;
        let sets = with.require_sets()?;
        self.report.sets = Some(sets_json(&with, &sets));
        for (g, s) in with.generators().iter().zip(&sets) {
            let s: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            self.line(format!("set({g}) = {{{}}}", s.join(",")));
        }
        Ok(with)
    }

    fn regularity(&mut self, ideal: &OrderedIdeal) -> anyhow::Result<()> {
        let r = Decomposer::new(ideal)?.is_regular();
        let j = regularity_json(ideal, &r);
        self.report.regular = Some(j.regular);
        self.line(format!("regular: {}", j.regular));
        if let Some(w) = j.witness {
            let found: Vec<String> = w.found.iter().map(ToString::to_string).collect();
            self.line(format!("witness: set(g(x{}*{})) = {{{}}}", w.s, w.u, found.join(",")));
            self.report.regularity_witness = Some(w);
        }
        Ok(())
    }

    fn analyze(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let class = ideal.classify();
        let cj = class_report_json(&class);
        self.line(format!(
            "linear_quotients: {}  degree_nondecreasing: {}  stable: {}  squarefree_stable: {}  exchange_property: {}  matroidal: {}",
            cj.linear_quotients, cj.degree_nondecreasing, cj.stable, cj.squarefree_stable, cj.exchange_property, cj.matroidal
        ));
        self.report.class_report = Some(cj);
        if !class.linear_quotients {
            return Ok(());
        }
        let ideal = self.sets(&ideal)?;
        self.regularity(&ideal)?;
        let formula = betti_from_sets(&ideal)?;
        self.report.possibly_non_minimal = Some(!ideal.degrees_nondecreasing());
        self.line(format!("betti (formula):\n{formula}"));
        self.report.betti_formula = Some(betti_json(&formula));
        Ok(())
    }

    fn resolve(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let ideal = self.sets(&ideal)?;
        self.regularity(&ideal)?;
        let f = lq_resolution(&ideal)?;
        self.line(format!("ranks: {:?}", f.ranks()));
        self.report.resolution = Some(complex_json(&f));
        Ok(())
    }

    fn betti(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let oracle = betti_oracle(&ideal);
        self.report.betti_oracle = Some(betti_json(&oracle));
        self.line(format!("betti (oracle):\n{oracle}"));
        let ideal = self.sets(&ideal)?;
        let formula = betti_from_sets(&ideal)?;
        let matches = formula == oracle;
        self.report.betti_formula = Some(betti_json(&formula));
        self.report.possibly_non_minimal = Some(!ideal.degrees_nondecreasing());
        self.report.matches = Some(matches);
        self.line(format!("betti (formula):\n{formula}"));
        self.line(format!("match: {matches}"));
        Ok(())
    }

    fn verify(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let ideal = self.sets(&ideal)?;
        let f = lq_resolution(&ideal)?;
        let v = verify_complex(&f);
        let j = verify_json(&f, &v);
        self.line(format!(
            "dsq_zero: {}  minimal: {}  exact (box-certified): {:?}  strands: {}  passed: {}",
            j.dsq_zero, j.minimal, j.exact, j.strands_checked, j.passed
        ));
        self.report.verify = Some(j);
        Ok(())
    }

    fn taylor(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let t = taylor_dg(ideal.generators())?;
        let r = dg_check(&t);
        self.line(format!("taylor ranks: {:?}", t.complex().ranks()));
        self.line(format!("dg_check passed: {}", r.passed()));
        self.dg("dg_check", Section::Dg(r));
        if ideal.len() >= 2 {
            let star = taylor_via_star(ideal.generators())?;
            self.line(format!("star isomorphism passed: {}", star.iso.passed()));
            self.dg("star_isomorphism", Section::Iso(star.iso));
        }
        if self.tables {
            self.dg("algebra", Section::Algebra(Box::new(dg_json(&t))));
        }
        Ok(())
    }

    fn dgcheck(&mut self, path: &str) -> anyhow::Result<()> {
        let ideal = self.load_ideal(path)?;
        let gens: Vec<Polynomial> = ideal.generators().iter().cloned().map(Polynomial::monomial).collect();
        let koszul = koszul_dg(&gens)?;
        let taylor = taylor_dg(ideal.generators())?;
        let kr = dg_check(&koszul);
        let tr = dg_check(&taylor);
        let kt = koszul_type_check(&taylor, ideal.len(), self.seed);
        self.line(format!("koszul dg_check passed: {}", kr.passed()));
        self.line(format!("taylor dg_check passed: {}", tr.passed()));
        self.line(format!("taylor koszul type of length {}: {}", ideal.len(), kt.passed()));
        self.dg("koszul", Section::Dg(kr));
        self.dg("taylor", Section::Dg(tr));
        self.dg("taylor_koszul_type", Section::KoszulType(kt));
        if self.tables {
            self.dg("koszul_algebra", Section::Algebra(Box::new(dg_json(&koszul))));
            self.dg("taylor_algebra", Section::Algebra(Box::new(dg_json(&taylor))));
        }
        Ok(())
    }

    fn aci(&mut self, path: &str) -> anyhow::Result<()> {
        let input = parse_aci(&read_input(path)?)?;
        self.report.input = Some(polynomial_input(&input.f, &input.g, &input.a, &[]));
        let r = aci_resolution(&input)?;
        let c = r.star.complex();
        let v = verify_complex(c);
        let kt = koszul_type_check(&r.star, input.n() + 1, self.seed);
        let dg = dg_check(&r.star);
        self.line(format!("delta: {}", r.delta));
        self.line(format!("ranks: {:?}", c.ranks()));
        if let Some(b) = betti_of_complex(c) {
            self.line(format!("betti:\n{b}"));
            self.dg("betti", Section::Betti(betti_json(&b)));
        }
        self.line(format!(
            "composites: {}  koszul type: {}  dg_check: {}  dsq_zero: {}  exact: {:?}",
            r.composites.passed(),
            kt.passed(),
            dg.passed(),
            v.dsq_zero,
            v.exact
        ));
        self.dg("delta", Section::Polynomial(polynomial_terms(&r.delta)));
        self.dg("composites", Section::Composite(r.composites.clone()));
        self.dg("koszul_type", Section::KoszulType(kt));
        self.dg("dg_check", Section::Dg(dg));
        if self.tables {
            self.dg("algebra", Section::Algebra(Box::new(dg_json(&r.star))));
        }
        self.report.resolution = Some(complex_json(c));
        self.report.verify = Some(verify_json(c, &v));
        Ok(())
    }

    fn koszulseq(&mut self, path: &str) -> anyhow::Result<()> {
        let (f, steps) = parse_sequence(&read_input(path)?)?;
        let (g, a) = steps
            .iter()
            .find_map(|s| match s {
                mapcone_core::dg::SequenceStep::Linked { g, a } => Some((g.clone(), a.clone())),
                _ => None,
            })
            .unwrap_or_default();
        let names: Vec<String> = steps.iter().map(step_name).collect();
        self.report.input = Some(polynomial_input(&f, &g, &a, &names));
        let r = koszul_sequence_check(&f, &steps, self.seed)?;
        for s in &r.steps {
            self.line(format!(
                "step to length {} ({}): star koszul type {}  dg {}  canonical {:?}  resolves {}",
                s.length,
                s.kind,
                s.star_koszul_type.passed(),
                s.star_dg,
                s.isomorphic_to_canonical,
                s.resolves()
            ));
        }
        self.line(format!("passed: {}", r.passed()));
        self.dg("passed", Section::Flag(r.passed()));
        self.dg("sequence", Section::Sequence(r));
        Ok(())
    }
}

fn step_name(s: &mapcone_core::dg::SequenceStep) -> String {
    use mapcone_core::dg::SequenceStep::*;
    match s {
        Regular => "regular",
        Monomial => "monomial",
        Linked { .. } => "linked",
    }
    .to_string()
}

fn polynomial_input(f: &[Polynomial], g: &[Polynomial], a: &[Vec<Polynomial>], steps: &[String]) -> Input {
    let show = |ps: &[Polynomial]| ps.iter().map(ToString::to_string).collect::<Vec<_>>();
    Input::Polynomials(PolynomialInput {
        nvars: f.first().map_or(0, Polynomial::nvars),
        f: show(f),
        g: show(g),
        a: a.iter().map(|row| show(row)).collect(),
        steps: steps.to_vec(),
    })
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn seed(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(flag),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut s = Session {
        report: Report::new(cli.command.name()),
        text: Vec::new(),
        seed: 0,
        order: cli.order,
        matroid: cli.matroid,
        tables: cli.tables,
    };
    let path = cli.command.input().to_string();
    let outcome = seed(cli.seed).and_then(|seed| {
        s.seed = seed;
        match cli.command {
            Command::Analyze(_) => s.analyze(&path),
            Command::Resolve(_) => s.resolve(&path),
            Command::Betti(_) => s.betti(&path),
            Command::Verify(_) => s.verify(&path),
            Command::Taylor(_) => s.taylor(&path),
            Command::Dgcheck(_) => s.dgcheck(&path),
            Command::Aci(_) => s.aci(&path),
            Command::Koszulseq(_) => s.koszulseq(&path),
        }
    });
    let code = match outcome {
        Ok(()) => 0,
        Err(e) => {
            let (err, code) = match e.downcast_ref::<mapcone_core::Error>() {
                Some(core) => (ErrorJson::from(core), if core.is_refusal() { 2 } else { 1 }),
                None => (
                    ErrorJson {
                        kind: "Io".to_string(),
                        refusal: false,
                        message: format!("{e:#}"),
                    },
                    1,
                ),
            };
            s.line(format!("error ({}): {}", err.kind, err.message));
            s.report.error = Some(err);
            code
        }
    };
    if cli.text {
        println!("{}", s.text.join("\n"));
    } else {
        println!("{}", serde_json::to_string_pretty(&s.report).expect("serializable report"));
    }
    ExitCode::from(code)
}
