//! Command implementations. Each returns a [`Report`] holding both output
//! formats and the number of violations found.

use std::collections::BTreeMap;
use std::fs;

use asram::asympt::{
    asymptotic_slope, generic_jump, generic_or_measured, measure_jump, pivot_index,
    within_envelope, GenericReport, Measurement,
};
use asram::cover::{
    jet_order_bound, sufficient_jet_order, CoverSpec, CurveJet, OrderMode, Regime,
};
use asram::strata::{clear_strata_polys, verify_semicontinuity, StrataSystem};
use asram::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coverfile::CoverFile;
use crate::curvefile::CurveFile;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "asram", version, about = "Ramification jumps of Artin-Schreier covers along curves")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,
    /// Largest jet space an exhaustive scan may visit.
    #[arg(long, env = "ASRAM_ENUM_CAP", default_value_t = asram::cover::DEFAULT_ENUMERATION_CAP as u64, global = true)]
    pub cap: u64,
    /// Seed for every randomized path.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Uniform sufficient jet order.
    Usu,
    /// Strata {h <= s} are cut out by the cleared polynomials.
    Semicont,
    /// Generic jump bounded by rm+n.
    Gener,
    /// Closed-form generic jumps and the slope limit.
    Asymp,
}

#[derive(Args, Debug)]
pub struct CoverArg {
    /// Cover description file.
    #[arg(long)]
    pub cover: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jump of the cover along one curve.
    Jump {
        #[command(flatten)]
        cover: CoverArg,
        /// Jet in normal form, `x:a1,...` or `t:r:b_r,...`.
        #[arg(long, conflicts_with = "curve", required_unless_present = "curve")]
        jet: Option<String>,
        /// Curve equation file, normalized on input.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Export the cleared strata polynomials.
    Strata {
        #[command(flatten)]
        cover: CoverArg,
        #[arg(short = 'r', long)]
        r: u32,
        #[arg(short = 's', long, default_value_t = 0)]
        s: u32,
    },
    /// Generic jump h_r.
    Generic {
        #[command(flatten)]
        cover: CoverArg,
        #[arg(short = 'r', long)]
        r: u32,
        /// Scan every jet over the cover's field.
        #[arg(long)]
        exhaustive: bool,
        /// Random jets to sample where no closed form applies.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Table of h_r and h_r / r.
    Asymptote {
        #[command(flatten)]
        cover: CoverArg,
        #[arg(long)]
        rmax: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Run one of the verification experiments.
    Verify {
        #[command(flatten)]
        cover: CoverArg,
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Largest r; defaults to the largest with rm+n <= depth.
        #[arg(long)]
        rmax: Option<u32>,
        /// Largest rm+n considered; 6 by default, 8 for asymp.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Every jet of T_r with its jump.
    Enumerate {
        #[command(flatten)]
        cover: CoverArg,
        #[arg(short = 'r', long)]
        r: u32,
    },
}

/// Output of one command.
#[derive(Debug)]
pub struct Report {
    pub tsv: String,
    pub json: Value,
    pub violations: usize,
}

impl Report {
    fn ok(tsv: String, json: Value) -> Self {
        Self {
            tsv,
            json,
            violations: 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.tsv.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("plain JSON values");
                s.push('\n');
                s
            }
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load_cover(path: &str) -> Result<CoverSpec, CliError> {
    let file = CoverFile::parse(&read(path)?).map_err(|e| CliError::parse(path, e))?;
    file.field().map_err(|e| CliError::parse(path, e))?;
    file.datum().map_err(|e| CliError::parse(path, e))?;
    file.to_cover()
}

fn parse_jet(cover: &CoverSpec, text: &str) -> Result<CurveJet, CliError> {
    CurveJet::from_text(cover.field(), text).map_err(|e| match e {
        Error::ZeroLeadingCoefficient | Error::BranchComponent | Error::ShortJet { .. } => {
            CliError::Core(e)
        }
        other => CliError::parse("--jet", crate::ParseError::new(1, other.to_string())),
    })
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cap = cli.cap as u128;
    match &cli.command {
        Command::Jump { cover, jet, curve } => {
            let c = load_cover(&cover.cover)?;
            let jet = match (jet, curve) {
                (Some(j), _) => parse_jet(&c, j)?,
                (None, Some(path)) => CurveFile::parse(&read(path)?)
                    .map_err(|e| CliError::parse(path, e))?
                    .to_jet(&c)?,
                (None, None) => return Err(CliError::Usage("one of --jet, --curve is required".into())),
            };
            jump(&c, &jet)
        }
        Command::Strata { cover, r, s } => strata(&load_cover(&cover.cover)?, *r, *s),
        Command::Generic {
            cover,
            r,
            exhaustive,
            trials,
        } => generic(&load_cover(&cover.cover)?, *r, *exhaustive, *trials, cli.seed, cap),
        Command::Asymptote {
            cover,
            rmax,
            trials,
        } => asymptote(&load_cover(&cover.cover)?, *rmax, *trials, cli.seed, cap),
        Command::Verify {
            cover,
            theorem,
            rmax,
            depth,
        } => verify(&load_cover(&cover.cover)?, *theorem, *rmax, *depth, cap),
        Command::Enumerate { cover, r } => enumerate(&load_cover(&cover.cover)?, *r, cap),
    }
}

pub fn jump(cover: &CoverSpec, jet: &CurveJet) -> Result<Report, CliError> {
    let f = cover.field();
    let rep = cover.jump(jet)?;
    let terms: Vec<(u32, String)> = rep
        .reduced
        .terms()
        .map(|(l, c)| (l, f.format_element(c)))
        .collect();
    let reduced = if terms.is_empty() {
        "0".to_string()
    } else {
        terms
            .iter()
            .rev()
            .map(|(l, c)| format!("({c})*t^-{l}"))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let tsv = format!("h={}\nreduced={reduced}\njet={}\n", rep.h, jet.to_text(f));
    let json = json!({
        "h": rep.h,
        "reduced": terms.iter().map(|(l, c)| json!({"l": l, "c": c})).collect::<Vec<_>>(),
        "jet": jet.to_text(f),
    });
    Ok(Report::ok(tsv, json))
}

pub fn strata(cover: &CoverSpec, r: u32, s: u32) -> Result<Report, CliError> {
    let f = cover.field();
    let sys = StrataSystem::new(cover, r)?;
    let polys = clear_strata_polys(&sys, s)?;
    let mut tsv = format!(
        "r\t{r}\nm\t{}\nn\t{}\np\t{}\ne\t{}\nvars\t{}\n",
        cover.m(),
        cover.n(),
        f.characteristic(),
        f.degree(),
        sys.depth()
    );
    let mut blocks = Vec::new();
    for cp in &polys {
        tsv.push_str(&format!(
            "l\t{}\tN_l\t{}\tN\t{}\tterms\t{}\n",
            cp.l,
            cp.n_l,
            cp.clearing,
            cp.poly.num_terms()
        ));
        tsv.push_str(&cp.poly.to_text());
        blocks.push(json!({
            "l": cp.l,
            "n_l": cp.n_l,
            "clearing": cp.clearing,
            "terms": cp.poly.terms().map(|(e, c)| json!({"c": f.format_element(c), "e": e})).collect::<Vec<_>>(),
        }));
    }
    let json = json!({
        "r": r, "m": cover.m(), "n": cover.n(),
        "p": f.characteristic(), "e": f.degree(), "vars": sys.depth(),
        "polys": blocks,
    });
    Ok(Report::ok(tsv, json))
}

fn generic_json(cover: &CoverSpec, rep: &GenericReport) -> Value {
    json!({
        "r": rep.r,
        "h": rep.h,
        "j": rep.j,
        "case": rep.case.label(),
        "closed_form": rep.closed_form,
        "slope": [rep.slope.numer(), rep.slope.denom()],
        "witness": rep.witness.as_ref().map(|w| w.to_text(cover.field())),
    })
}

pub fn generic(
    cover: &CoverSpec,
    r: u32,
    exhaustive: bool,
    trials: u64,
    seed: u64,
    cap: u128,
) -> Result<Report, CliError> {
    let how = if exhaustive {
        Measurement::Exhaustive { cap }
    } else {
        Measurement::Sampled { trials, seed }
    };
    let rep = generic_or_measured(cover, r, how)?;
    let mut json = generic_json(cover, &rep);
    let mut tsv = format!(
        "r={}\nh={}\nj={}\ncase={}\nclosed_form={}\nslope={}/{}\n",
        rep.r,
        rep.h,
        rep.j,
        rep.case.label(),
        rep.closed_form,
        rep.slope.numer(),
        rep.slope.denom()
    );
    if let Some(w) = &rep.witness {
        tsv.push_str(&format!("witness={}\n", w.to_text(cover.field())));
    }
    let mut violations = 0;
    if rep.closed_form && exhaustive {
        let (max, _) = measure_jump(cover, r, how)?;
        tsv.push_str(&format!("exhaustive={max}\n"));
        json["exhaustive"] = json!(max);
        violations += (max != rep.h) as usize;
    }
    Ok(Report {
        tsv,
        json,
        violations,
    })
}

pub fn asymptote(
    cover: &CoverSpec,
    rmax: u32,
    trials: u64,
    seed: u64,
    cap: u128,
) -> Result<Report, CliError> {
    let table = asymptotic_slope(cover, rmax, Measurement::Auto { cap, trials, seed })?;
    let mut tsv = String::from("r\th_r\tnum\tden\n");
    let mut rows = Vec::new();
    for row in &table.rows {
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            row.r,
            row.h,
            row.slope.numer(),
            row.slope.denom()
        ));
        rows.push(json!({
            "r": row.r, "h_r": row.h,
            "num": row.slope.numer(), "den": row.slope.denom(),
            "closed_form": row.closed_form,
        }));
    }
    tsv.push_str(&format!("# limit {}\n", table.limit));
    let json = json!({"j": table.j, "limit": table.limit, "rows": rows});
    Ok(Report::ok(tsv, json))
}

/// `r = 1, 2, ...` with `rm + n <= depth`, further capped by `rmax`.
fn r_range(cover: &CoverSpec, rmax: Option<u32>, depth: u32) -> Vec<u32> {
    (1..)
        .take_while(|&r| cover.pole_depth(r) <= depth)
        .take_while(|&r| rmax.is_none_or(|x| r <= x))
        .collect()
}

pub fn verify(
    cover: &CoverSpec,
    theorem: Theorem,
    rmax: Option<u32>,
    depth: Option<u32>,
    cap: u128,
) -> Result<Report, CliError> {
    let depth = depth.unwrap_or(if theorem == Theorem::Asymp { 8 } else { 6 });
    let rs = r_range(cover, rmax, depth);
    let mut violations = 0;
    let mut rows = Vec::new();
    let mut tsv = String::new();
    match theorem {
        Theorem::Usu => {
            tsv.push_str("r\ts\tbound\tstatus\n");
            for r in rs {
                let s = sufficient_jet_order(cover, r, OrderMode::Exhaustive { cap });
                let bound = jet_order_bound(cover, r)?;
                let (s, ok) = match s {
                    Ok(s) => (Some(s), s <= bound),
                    Err(Error::Verification(_)) => (None, false),
                    Err(e) => return Err(e.into()),
                };
                violations += !ok as usize;
                let shown = s.map_or("-".to_string(), |s| s.to_string());
                tsv.push_str(&format!("{r}\t{shown}\t{bound}\t{}\n", status(ok)));
                rows.push(json!({"r": r, "s": s, "bound": bound, "ok": ok}));
            }
        }
        Theorem::Semicont => {
            tsv.push_str("r\ts\tby_jump\tby_cleared\tby_contains\tmismatches\n");
            for r in rs {
                let rep = verify_semicontinuity(cover, r, cap)?;
                for st in &rep.strata {
                    tsv.push_str(&format!(
                        "{r}\t{}\t{}\t{}\t{}\t{}\n",
                        st.s, st.by_jump, st.by_cleared, st.by_contains, st.mismatches
                    ));
                    violations += (st.mismatches > 0) as usize;
                }
                violations += !rep.nested as usize;
                let counts: BTreeMap<String, u64> =
                    rep.jump_counts.iter().map(|(h, c)| (h.to_string(), *c)).collect();
                tsv.push_str(&format!("# r={r} nested={} jets={}", rep.nested, rep.jets));
                for (h, c) in &rep.jump_counts {
                    tsv.push_str(&format!(" h{h}={c}"));
                }
                tsv.push('\n');
                rows.push(json!({
                    "r": r, "jets": rep.jets, "nested": rep.nested, "jump_counts": counts,
                    "strata": rep.strata.iter().map(|st| json!({
                        "s": st.s, "by_jump": st.by_jump, "by_cleared": st.by_cleared,
                        "by_contains": st.by_contains, "mismatches": st.mismatches,
                    })).collect::<Vec<_>>(),
                    "counterexample": rep.counterexample.map(|j| j.to_text(cover.field())),
                }));
            }
        }
        Theorem::Gener => {
            tsv.push_str("r\tmax_h\tbound\tstatus\n");
            for r in rs {
                let (max, _) = measure_jump(cover, r, Measurement::Exhaustive { cap })?;
                let bound = match cover.regime(r)? {
                    Regime::Transversal => cover.m(),
                    Regime::Tangent { .. } => cover.pole_depth(r),
                };
                let ok = max <= bound;
                violations += !ok as usize;
                tsv.push_str(&format!("{r}\t{max}\t{bound}\t{}\n", status(ok)));
                rows.push(json!({"r": r, "max_h": max, "bound": bound, "ok": ok}));
            }
        }
        Theorem::Asymp => {
            let j = pivot_index(cover)?;
            tsv.push_str("r\tclosed\texhaustive\tenvelope\tstatus\n");
            for r in rs.into_iter().filter(|&r| r > j.max(1)) {
                let rep = generic_jump(cover, r)?;
                let (max, _) = measure_jump(cover, r, Measurement::Exhaustive { cap })?;
                let env = within_envelope(cover, &rep);
                let ok = env && max == rep.h;
                violations += !ok as usize;
                tsv.push_str(&format!("{r}\t{}\t{max}\t{env}\t{}\n", rep.h, status(ok)));
                rows.push(json!({
                    "r": r, "closed": rep.h, "exhaustive": max, "envelope": env, "ok": ok,
                }));
            }
            tsv.push_str(&format!("# j {j} limit {}\n", cover.m()));
        }
    }
    tsv.push_str(&format!("violations\t{violations}\n"));
    let json = json!({
        "theorem": format!("{theorem:?}").to_lowercase(),
        "rows": rows,
        "violations": violations,
    });
    Ok(Report {
        tsv,
        json,
        violations,
    })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATION"
    }
}

pub fn enumerate(cover: &CoverSpec, r: u32, cap: u128) -> Result<Report, CliError> {
    let f = cover.field();
    let space = cover.jet_space(r)?;
    let table = cover.jump_table(&space, cap)?;
    let mut tsv = String::with_capacity(table.len() * 16);
    let mut rows = Vec::with_capacity(table.len());
    for (idx, h) in table.iter().enumerate() {
        let jet = space.jet_at(idx as u64).to_text(f);
        tsv.push_str(&format!("{jet}\t{h}\n"));
        rows.push(json!({"jet": jet, "h": h}));
    }
    Ok(Report::ok(tsv, Value::Array(rows)))
}
