//! Subcommand logic, kept free of process state so it can be tested in-process.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use linrank_core::arith::Rational;
use linrank_core::constraints::{is_satisfiable, LinConstraint, LoopModel, Relation};
use linrank_core::equivalence::cross_check;
use linrank_core::ms::{
    ms_analyze, ms_bounded_space, ms_decreasing_space, ms_space, svg_analyze, svg_space, AnalysisError, RankingFunction,
    RankingSpace, Verdict,
};
use linrank_core::pr::{pr_alt_analyze, pr_alt_space, pr_analyze, pr_space};
use linrank_core::text::parse_loop;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gen::{random_guarded_loop, random_loop, GenConfig};
use crate::report::{CompareJson, ConditionalJson, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ms,
    Pr,
    PrAlt,
    Svg,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ms => "ms",
            Method::Pr => "pr",
            Method::PrAlt => "pr-alt",
            Method::Svg => "svg",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// A failure reported on stderr with exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

type CmdResult = Result<Outcome, InputError>;

pub fn load(path: &Path) -> Result<LoopModel, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_loop(&text).map_err(|e| InputError(format!("{}:{e}", path.display())))
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.proves_termination() {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    }
}

fn single_verdict(l: &LoopModel, method: Method) -> Result<Verdict, InputError> {
    match method {
        Method::Ms => Ok(ms_analyze(l)),
        Method::Pr => Ok(pr_analyze(l)),
        Method::PrAlt => pr_alt_analyze(l).map_err(|e| InputError(format!("pr-alt: {e}"))),
        Method::Svg => svg_analyze(&l.merged()).map_err(|e| InputError(format!("svg: {e}"))),
        Method::Both => unreachable!("split by the caller"),
    }
}

/// `mu·x + mu0` written with the loop's variable names, e.g. `2*x1 - 4`.
pub fn render_function(f: &RankingFunction, names: &[String]) -> String {
    let text = LinConstraint::new(f.mu.clone(), Relation::Eq, Rational::zero()).render(names);
    let lhs = text.strip_suffix(" = 0").unwrap_or(&text);
    if lhs == "0" {
        f.mu0.to_string()
    } else if f.mu0.is_zero() {
        lhs.to_string()
    } else if f.mu0.is_negative() {
        format!("{lhs} - {}", f.mu0.abs())
    } else {
        format!("{lhs} + {}", f.mu0)
    }
}

fn rank_report(v: &Verdict, method: Method, with_function: bool) -> Report {
    let mut r = Report::new(v.name(), method.name());
    if with_function {
        r.ranking_function = v.witness().map(Into::into);
    }
    r
}

fn write_verdict(out: &mut String, label: Option<&str>, v: &Verdict, names: &[String], with_function: bool) {
    let prefix = label.map(|l| format!("{l}: ")).unwrap_or_default();
    let _ = writeln!(out, "{prefix}{}", v.name());
    if let (true, Some(f)) = (with_function, v.witness()) {
        let _ = writeln!(out, "{prefix}f = {}", render_function(f, names));
        let _ = writeln!(out, "{prefix}delta = {}", f.delta);
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

/// `check` and `rank`: the verdict, and for `rank` the function found.
pub fn analyze(l: &LoopModel, method: Method, format: Format, with_function: bool) -> CmdResult {
    let names = l.space().names();
    if method != Method::Both {
        let v = single_verdict(l, method)?;
        let stdout = match format {
            Format::Json => json(&rank_report(&v, method, with_function)),
            Format::Text => {
                let mut s = String::new();
                write_verdict(&mut s, None, &v, names, with_function);
                s
            }
        };
        return Ok(Outcome { code: verdict_code(&v), stdout });
    }
    let ms = ms_analyze(l);
    let pr = pr_analyze(l);
    let agree = ms.name() == pr.name();
    let code = if agree { verdict_code(&ms) } else { EXIT_DISAGREE };
    let status = if agree { ms.name() } else { "disagreement" };
    let stdout = match format {
        Format::Json => {
            let mut r = Report::new(status, "both");
            r.engines = vec![rank_report(&ms, Method::Ms, with_function), rank_report(&pr, Method::Pr, with_function)];
            if agree && with_function {
                r.ranking_function = ms.witness().map(Into::into);
            }
            json(&r)
        }
        Format::Text => {
            let mut s = String::new();
            if !agree {
                let _ = writeln!(s, "disagreement: ms {}, pr {}", ms.name(), pr.name());
            } else if !with_function {
                let _ = writeln!(s, "{}", ms.name());
            }
            if with_function || !agree {
                write_verdict(&mut s, Some("ms"), &ms, names, with_function);
                write_verdict(&mut s, Some("pr"), &pr, names, with_function);
            }
            s
        }
    };
    Ok(Outcome { code, stdout })
}

fn space_text(out: &mut String, title: &str, s: &RankingSpace) {
    if s.is_empty() {
        let _ = writeln!(out, "{title}: empty space");
        return;
    }
    let _ = writeln!(out, "{title} over {}:", s.system.vars().join(", "));
    for r in s.system.rows() {
        let _ = writeln!(out, "  {}", r.render(s.system.vars()));
    }
}

fn space_status(s: &RankingSpace) -> &'static str {
    if s.is_empty() {
        "empty"
    } else {
        "nonempty"
    }
}

fn space_of(l: &LoopModel, method: Method) -> Result<Result<RankingSpace, AnalysisError>, InputError> {
    Ok(match method {
        Method::Ms => ms_space(l),
        Method::Pr => pr_space(l),
        Method::PrAlt => {
            if !l.is_guarded() {
                return Err(InputError(String::from("pr-alt: loop has no guard/update split")));
            }
            pr_alt_space(l)
        }
        Method::Svg => svg_space(&l.merged()),
        Method::Both => unreachable!("split by the caller"),
    })
}

/// `space`: the projected parameter space, or with `conditional` the
/// decreasing and bounded spaces of the MS method.
pub fn space(l: &LoopModel, method: Method, format: Format, conditional: bool) -> CmdResult {
    if conditional && !matches!(method, Method::Ms | Method::Both) {
        return Err(InputError(format!("--conditional is only available with --method=ms, not {}", method.name())));
    }
    if !is_satisfiable(&l.merged()) {
        let stdout = match format {
            Format::Json => json(&Report::new("trivially-terminating", method.name())),
            Format::Text => String::from("trivially-terminating: the loop admits no transition\n"),
        };
        return Ok(Outcome { code: EXIT_OK, stdout });
    }
    let to_input = |e: AnalysisError| InputError(e.to_string());
    if conditional {
        let dec = ms_decreasing_space(l).map_err(to_input)?;
        let bnd = ms_bounded_space(l).map_err(to_input)?;
        let full = ms_space(l).map_err(to_input)?;
        let stdout = match format {
            Format::Json => {
                let mut r = Report::new(space_status(&full), "ms");
                r.space = Some((&full).into());
                r.conditional = Some(ConditionalJson { decreasing: (&dec).into(), bounded: (&bnd).into() });
                json(&r)
            }
            Format::Text => {
                let mut s = String::new();
                space_text(&mut s, "decreasing", &dec);
                space_text(&mut s, "bounded", &bnd);
                s
            }
        };
        return Ok(Outcome { code: if full.is_empty() { EXIT_UNKNOWN } else { EXIT_OK }, stdout });
    }
    let methods: Vec<Method> = if method == Method::Both { vec![Method::Ms, Method::Pr] } else { vec![method] };
    let mut spaces = Vec::new();
    for m in &methods {
        spaces.push((*m, space_of(l, *m)?.map_err(to_input)?));
    }
    let empties: Vec<bool> = spaces.iter().map(|(_, s)| s.is_empty()).collect();
    let agree = empties.iter().all(|&e| e == empties[0]);
    let code = if !agree {
        EXIT_DISAGREE
    } else if empties[0] {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let stdout = match format {
        Format::Json => {
            let one = |(m, s): &(Method, RankingSpace)| {
                let mut r = Report::new(space_status(s), m.name());
                r.space = Some(s.into());
                r
            };
            if spaces.len() == 1 {
                json(&one(&spaces[0]))
            } else {
                let mut r = Report::new(if agree { space_status(&spaces[0].1) } else { "disagreement" }, "both");
                r.engines = spaces.iter().map(one).collect();
                json(&r)
            }
        }
        Format::Text => {
            let mut s = String::new();
            for (m, sp) in &spaces {
                space_text(&mut s, m.name(), sp);
            }
            s
        }
    };
    Ok(Outcome { code, stdout })
}

/// `compare`: the cross-validation report of both engines.
pub fn compare(l: &LoopModel, format: Format) -> CmdResult {
    let r = cross_check(l);
    let j = CompareJson::from(&r);
    let stdout = match format {
        Format::Json => json(&j),
        Format::Text => {
            let fmt_opt = |o: Option<bool>| o.map_or("vacuous".to_string(), |b| b.to_string());
            let mut s = String::new();
            let _ = writeln!(s, "ms: {}", j.ms);
            let _ = writeln!(s, "pr: {}", j.pr);
            let _ = writeln!(s, "agree: {}", j.agree);
            let _ = writeln!(s, "ms witness in pr space: {}", fmt_opt(j.ms_witness_in_pr));
            let _ = writeln!(s, "pr witness in ms space: {}", fmt_opt(j.pr_witness_in_ms));
            let _ = writeln!(s, "spaces: {}", j.spaces);
            let _ = writeln!(s, "{}", j.status);
            s
        }
    };
    Ok(Outcome { code: if r.consistent() { EXIT_OK } else { EXIT_DISAGREE }, stdout })
}

/// Settings of the random-loop commands.
#[derive(Debug, Clone)]
pub struct FuzzOptions {
    pub seed: u64,
    pub count: usize,
    pub guarded: bool,
    pub out: Option<std::path::PathBuf>,
    pub config: GenConfig,
}

/// `fuzz` and `selftest`: cross-check random loops; optionally keep them as files.
pub fn fuzz(o: &FuzzOptions) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    if let Some(dir) = &o.out {
        fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    }
    let start = Instant::now();
    let mut stdout = String::new();
    let (mut terminating, mut failures) = (0, 0);
    for i in 0..o.count {
        let l = if o.guarded { random_guarded_loop(&mut rng, &o.config) } else { random_loop(&mut rng, &o.config) };
        let text = linrank_core::text::serialize_loop(&l);
        if let Some(dir) = &o.out {
            let path = dir.join(format!("fuzz_{:04}.loop", i));
            fs::write(&path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        }
        let r = cross_check(&l);
        if r.ms.proves_termination() {
            terminating += 1;
        }
        if !r.consistent() {
            failures += 1;
            let _ = writeln!(stdout, "loop {i}: {}", r.problems().join("; "));
            for line in text.lines() {
                let _ = writeln!(stdout, "  {line}");
            }
        }
    }
    let _ = writeln!(
        stdout,
        "{} loops (seed {}), {} terminating, {} inconsistent, {:.2}s",
        o.count,
        o.seed,
        terminating,
        failures,
        start.elapsed().as_secs_f64()
    );
    Ok(Outcome { code: if failures == 0 { EXIT_OK } else { EXIT_DISAGREE }, stdout })
}
