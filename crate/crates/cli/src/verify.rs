use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};

use catport_core::analysis::{channel_negativity_report, closed_form_max, teleportable_entanglement_range};
use catport_core::locc::{enumerate, validate_locality, Branch, Protocol, Step};
use catport_core::protocol_math::overlap_frame;
use catport_core::protocols::{
    order_permutation_check, probabilistic_script, script_for, ChannelFamily, ChannelSpec, InputFrame,
    MeasurementOrder, TeleportInput, ALICE_BELL, ALICE_GHZ, FILTER,
};
use catport_core::qstate::{fidelity, QubitVector, SingleQubitGate, C64};
use catport_core::sampling::{
    random_amplitudes, random_pair, random_pair_with_overlap, random_schmidt_frame,
};
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scenario::{overlap_pair, Family, Scenario, DEFAULT_SEED};
use crate::CliError;

const SPECIAL_R: [f64; 5] = [0.0, 0.3, FRAC_1_SQRT_2, 0.95, 1.0];
const CAT_DRAW_CAP: usize = 50;
const FILTER_WEIGHTS: [f64; 4] = [0.5, 0.6, 0.8, 0.99];
const ANALYSIS_TOL: f64 = 1e-10;
const E_MAX_TOL: f64 = 1e-6;
const SHOWN_FAILURES: usize = 20;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every suite (the default when no protocol or scenario is given).
    #[arg(long)]
    all: bool,
    /// Only the suites of one family.
    #[arg(long, value_enum)]
    protocol: Option<Family>,
    /// Number of Bobs for the cat suites (default: 2 to 6).
    #[arg(long = "n", alias = "N")]
    n: Option<usize>,
    /// Random draws per suite; cat suites use at most 50.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Seed for all draws (default 24301).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    fidelity_tol: f64,
    /// Tolerance on probabilities.
    #[arg(long, default_value_t = 1e-12)]
    prob_tol: f64,
    /// Scenario files to check in addition to (or instead of) the suites.
    #[arg(long)]
    scenario: Vec<PathBuf>,
    /// Replace one correction with a wrong gate, e.g. `psi+:a`.
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Debug, Clone, Copy)]
struct Tolerances {
    fidelity: f64,
    probability: f64,
}

/// Outcome of one draw.
#[derive(Debug, Default)]
struct CaseResult {
    branches: usize,
    min_fidelity: Option<f64>,
    max_defect: f64,
    failures: Vec<String>,
}

impl CaseResult {
    fn fidelity(&mut self, f: f64) {
        self.min_fidelity = Some(self.min_fidelity.map_or(f, |m| m.min(f)));
    }

    fn defect(&mut self, d: f64) {
        self.max_defect = self.max_defect.max(d);
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

/// One line of the summary.
#[derive(Debug)]
struct Check {
    name: String,
    draws: usize,
    branches: usize,
    min_fidelity: Option<f64>,
    max_defect: f64,
    failures: Vec<String>,
}

impl Check {
    fn from_cases(name: impl Into<String>, cases: Vec<CaseResult>) -> Self {
        let mut check = Check {
            name: name.into(),
            draws: cases.len(),
            branches: cases.iter().map(|c| c.branches).max().unwrap_or(0),
            min_fidelity: None,
            max_defect: 0.0,
            failures: vec![],
        };
        for c in cases {
            if let Some(f) = c.min_fidelity {
                check.min_fidelity = Some(check.min_fidelity.map_or(f, |m: f64| m.min(f)));
            }
            check.max_defect = check.max_defect.max(c.max_defect);
            check.failures.extend(c.failures);
        }
        check
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn line(&self) -> String {
        let fid = self.min_fidelity.map_or("-".to_owned(), |f| format!("{f:.12}"));
        format!(
            "{}  {:<26} draws={:<4} branches/draw={:<4} min_fidelity={fid}  max_defect={:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.draws,
            self.branches,
            self.max_defect
        )
    }
}

/// Outcome names naming one correction entry, e.g. `psi+`, `a`.
#[derive(Debug)]
struct Fault {
    outcomes: Vec<String>,
    used: AtomicBool,
}

impl Fault {
    fn parse(spec: &str) -> Result<Self, CliError> {
        let outcomes: Vec<String> = spec.split(':').map(|s| s.trim().to_owned()).collect();
        if outcomes.iter().any(String::is_empty) {
            return Err(CliError::Usage(format!("fault '{spec}' is not a ':'-separated outcome list")));
        }
        Ok(Fault { outcomes, used: AtomicBool::new(false) })
    }

    /// Makes Bob2's correction for the named outcomes wrong by an extra X.
    fn apply(&self, protocol: &mut Protocol) {
        let table = protocol.steps.iter().find_map(|s| match s {
            Step::Correct { party, table, .. } if party == "Bob2" => Some(table.clone()),
            _ => None,
        });
        let Some(table) = table else { return };
        if table.depends_on.len() != self.outcomes.len() {
            return;
        }
        let mut key = Vec::new();
        for (m, name) in table.depends_on.iter().zip(&self.outcomes) {
            let Some(kind) = protocol.measurement(m) else { return };
            match (0..kind.alphabet()).find(|&i| kind.outcome_name(i) == *name) {
                Some(i) => key.push(i),
                None => return,
            }
        }
        let Some(gate) = table.entries.get(&key) else { return };
        let wrong = gate.compose(&SingleQubitGate::pauli_x()).renamed("fault");
        if protocol.override_correction("Bob2", &key, wrong) > 0 {
            self.used.store(true, Ordering::Relaxed);
        }
    }
}

struct Context {
    seed: u64,
    tol: Tolerances,
    fault: Option<Fault>,
}

impl Context {
    fn rng(&self, suite: u32, draw: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((u64::from(suite) << 32) | draw as u64);
        rng
    }

    fn script(&self, input: &TeleportInput, channel: &ChannelSpec) -> Result<Protocol, CliError> {
        let mut protocol = script_for(input, channel, MeasurementOrder::AliceFirst)?;
        if let Some(fault) = &self.fault {
            fault.apply(&mut protocol);
        }
        Ok(protocol)
    }

    /// Enumerates `protocol` and runs the checks shared by every script.
    fn run_case(&self, label: &str, protocol: &Protocol) -> Result<(Vec<Branch>, CaseResult), CliError> {
        let branches = enumerate(protocol)?;
        let mut case = CaseResult { branches: branches.len(), ..CaseResult::default() };
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        case.defect((total - 1.0).abs());
        if (total - 1.0).abs() > self.tol.probability {
            case.fail(format!("{label}: branch probabilities sum to {total:.15}"));
        }
        for b in &branches {
            let report = validate_locality(&b.transcript);
            for v in &report.violations {
                case.fail(format!("{label}: branch {} locality: {v}", b.outcome_tuple()));
            }
            if !(b.reachable && b.success) {
                continue;
            }
            let f = b.fidelity.unwrap_or(0.0);
            case.fidelity(f);
            if f < 1.0 - self.tol.fidelity {
                case.fail(format!("{label}: branch {} has fidelity {f:.12}", b.outcome_tuple()));
            }
            self.classical_cost(label, protocol, b, &mut case);
        }
        Ok((branches, case))
    }

    /// One broadcast of Alice's basis measurement, one 1-bit message per
    /// Claire and one 1-bit filter announcement when there is a filter.
    fn classical_cost(&self, label: &str, protocol: &Protocol, b: &Branch, case: &mut CaseResult) {
        let messages: Vec<_> = b.transcript.messages().collect();
        let claires = protocol.parties.iter().filter(|p| p.id.starts_with("Claire")).count();
        let alice_main: Vec<_> =
            messages.iter().filter(|m| m.measurement == ALICE_BELL || m.measurement == ALICE_GHZ).collect();
        if alice_main.len() != 1 || alice_main[0].bit_count != 2 || alice_main[0].from != "Alice" {
            case.fail(format!("{label}: branch {} does not carry one 2-bit message from Alice", b.outcome_tuple()));
        }
        for i in 1..=claires {
            let id = format!("claire{i}");
            let sent: Vec<_> = messages.iter().filter(|m| m.measurement == id).collect();
            if sent.len() != 1 || sent[0].bit_count != 1 {
                case.fail(format!("{label}: branch {} does not carry one 1-bit message from Claire{i}", b.outcome_tuple()));
            }
        }
        let filters = messages.iter().filter(|m| m.measurement == FILTER).count();
        let expected = usize::from(protocol.measurement(FILTER).is_some());
        if filters != expected || messages.len() != 1 + claires + expected {
            case.fail(format!("{label}: branch {} sends {} messages", b.outcome_tuple(), messages.len()));
        }
    }

    fn in_parallel<F>(&self, draws: usize, f: F) -> Vec<CaseResult>
    where
        F: Fn(usize) -> Result<CaseResult, CliError> + Sync + Send,
    {
        (0..draws)
            .into_par_iter()
            .map(|i| {
                f(i).unwrap_or_else(|e| CaseResult {
                    failures: vec![format!("draw {i}: {}", message(&e))],
                    ..CaseResult::default()
                })
            })
            .collect()
    }
}

fn message(e: &CliError) -> &str {
    match e {
        CliError::Usage(m) | CliError::Failed(m) => m,
    }
}

fn ghz_case(rng: &mut ChaCha8Rng) -> Result<(TeleportInput, ChannelSpec), CliError> {
    let (alpha, beta) = random_amplitudes(rng);
    let frame = InputFrame::Schmidt { first: random_schmidt_frame(rng), second: random_schmidt_frame(rng) };
    Ok((TeleportInput::new(alpha, beta, frame)?, ChannelSpec::ghz()))
}

/// Random draw with `n` Bobs; `r` fixes every overlap when given.
fn overlap_case(rng: &mut ChaCha8Rng, family: ChannelFamily, n: usize, r: Option<f64>) -> Result<(TeleportInput, ChannelSpec), CliError> {
    let (alpha, beta) = random_amplitudes(rng);
    let (phis, primes): (Vec<QubitVector>, Vec<QubitVector>) = (0..n - 1)
        .map(|_| match r {
            Some(r) => random_pair_with_overlap(rng, r),
            None => random_pair(rng),
        })
        .unzip();
    let frame = InputFrame::Product { phis: phis.clone(), phi_primes: primes.clone(), last: random_schmidt_frame(rng) };
    let channel = match family {
        ChannelFamily::GhzClass => ChannelSpec::ghz_class(phis[0], primes[0]),
        _ => ChannelSpec::cat(phis, primes)?,
    };
    Ok((TeleportInput::new(alpha, beta, frame)?, channel))
}

fn ghz_class_r(draw: usize) -> Option<f64> {
    (draw % 4 == 0).then(|| SPECIAL_R[(draw / 4) % SPECIAL_R.len()])
}

fn ghz_suite(ctx: &Context, trials: usize) -> Check {
    let cases = ctx.in_parallel(trials, |i| {
        let label = format!("ghz draw {i}");
        let (input, channel) = ghz_case(&mut ctx.rng(1, i))?;
        let (branches, mut case) = ctx.run_case(&label, &ctx.script(&input, &channel)?)?;
        let p5: f64 = branches.iter().filter(|b| b.outcome(ALICE_GHZ).is_some_and(|o| o.index == 4)).map(|b| b.probability).sum();
        case.defect(p5);
        if p5 >= ctx.tol.probability {
            case.fail(format!("{label}: P5 clicked with probability {p5:e}"));
        }
        let reachable = branches.iter().filter(|b| b.reachable).count();
        if reachable != 4 {
            case.fail(format!("{label}: {reachable} reachable branches instead of 4"));
        }
        Ok(case)
    });
    Check::from_cases("ghz", cases)
}

/// Leaf probability `(1/4) Π cos²(θᵢ/2)` or `sin²(θᵢ/2)` by Claire outcome.
fn check_leaf_probabilities(ctx: &Context, label: &str, channel: &ChannelSpec, branches: &[Branch], case: &mut CaseResult) {
    let frames = channel.frames();
    for b in branches {
        let mut expected = 0.25;
        for (i, frame) in frames.iter().enumerate() {
            let (c, s) = frame.half_angle();
            expected *= match b.outcome(&format!("claire{}", i + 1)).map(|o| o.index) {
                Some(0) => c * c,
                Some(_) => s * s,
                None => 0.0,
            };
        }
        let d = (b.probability - expected).abs();
        case.defect(d);
        if d > ctx.tol.probability {
            case.fail(format!("{label}: branch {} has probability {:.15}, expected {expected:.15}", b.outcome_tuple(), b.probability));
        }
    }
}

fn ghz_class_suite(ctx: &Context, trials: usize) -> Check {
    let cases = ctx.in_parallel(trials, |i| {
        let label = format!("ghz-class draw {i}");
        let (input, channel) = overlap_case(&mut ctx.rng(2, i), ChannelFamily::GhzClass, 2, ghz_class_r(i))?;
        let (branches, mut case) = ctx.run_case(&label, &ctx.script(&input, &channel)?)?;
        if branches.len() != 8 {
            case.fail(format!("{label}: {} branches instead of 8", branches.len()));
        }
        for bell in 0..4 {
            let p: f64 = branches.iter().filter(|b| b.outcome(ALICE_BELL).is_some_and(|o| o.index == bell)).map(|b| b.probability).sum();
            case.defect((p - 0.25).abs());
            if (p - 0.25).abs() > ctx.tol.probability {
                case.fail(format!("{label}: Bell outcome {bell} has probability {p:.15}"));
            }
        }
        let r = channel.frames()[0].r;
        for b in branches.iter().filter(|b| b.reachable) {
            let Some(o) = b.outcome("claire1") else { continue };
            let expected = if o.index == 0 { (1.0 + r) / 2.0 } else { (1.0 - r) / 2.0 };
            case.defect((o.probability - expected).abs());
            if (o.probability - expected).abs() > ctx.tol.probability {
                case.fail(format!("{label}: branch {} has Claire conditional {:.15}", b.outcome_tuple(), o.probability));
            }
        }
        check_leaf_probabilities(ctx, &label, &channel, &branches, &mut case);
        Ok(case)
    });
    Check::from_cases("ghz-class", cases)
}

fn cat_suite(ctx: &Context, n: usize, trials: usize) -> Check {
    let draws = trials.min(CAT_DRAW_CAP);
    let cases = ctx.in_parallel(draws, |i| {
        let label = format!("cat N={n} draw {i}");
        let (input, channel) = overlap_case(&mut ctx.rng(10 + n as u32, i), ChannelFamily::Cat, n, None)?;
        let (branches, mut case) = ctx.run_case(&label, &ctx.script(&input, &channel)?)?;
        let expected = 4 << (n - 1);
        if branches.len() != expected {
            case.fail(format!("{label}: {} branches instead of {expected}", branches.len()));
        }
        check_leaf_probabilities(ctx, &label, &channel, &branches, &mut case);
        Ok(case)
    });
    Check::from_cases(format!("cat N={n}"), cases)
}

fn order_suite(ctx: &Context, family: ChannelFamily, n: usize, draws: usize) -> Check {
    let cases = ctx.in_parallel(draws, |i| {
        let label = format!("order {family} N={n} draw {i}");
        let r = if family == ChannelFamily::GhzClass { ghz_class_r(i) } else { None };
        let (input, channel) = overlap_case(&mut ctx.rng(30 + n as u32, i), family, n, r)?;
        let report = order_permutation_check(&input, &channel)?;
        let mut case = CaseResult { branches: report.branches, ..CaseResult::default() };
        case.defect(report.max_probability_defect);
        case.fidelity(report.min_state_fidelity);
        if !report.passes(ctx.tol.probability, ctx.tol.fidelity) {
            case.fail(format!(
                "{label}: orderings differ (probability defect {:e}, state fidelity {:.12})",
                report.max_probability_defect, report.min_state_fidelity
            ));
        }
        Ok(case)
    });
    let name = match family {
        ChannelFamily::Cat => format!("order cat N={n}"),
        _ => format!("order {family}"),
    };
    Check::from_cases(name, cases)
}

fn draw_for(ctx: &Context, suite: u32, family: ChannelFamily, n: usize, i: usize) -> Result<(TeleportInput, ChannelSpec), CliError> {
    let mut rng = ctx.rng(suite, i);
    match family {
        ChannelFamily::Ghz => ghz_case(&mut rng),
        _ => overlap_case(&mut rng, family, n, None),
    }
}

/// Filtered runs for each weight and the branch-for-branch match with the
/// deterministic script at `a = b`.
fn filter_suite(ctx: &Context, family: ChannelFamily, n: usize, draws: usize) -> Check {
    let jobs: Vec<(f64, usize)> = FILTER_WEIGHTS.iter().flat_map(|&a2| (0..draws).map(move |i| (a2, i))).collect();
    let cases = ctx.in_parallel(jobs.len(), |j| {
        let (a2, i) = jobs[j];
        let label = format!("{family}-filtered a2={a2} draw {i}");
        let (input, channel) = draw_for(ctx, 50 + n as u32, family, n, i)?;
        let weighted = channel.clone().with_weights(C64::new(a2.sqrt(), 0.0), C64::new((1.0 - a2).sqrt(), 0.0))?;
        let mut protocol = probabilistic_script(&input, &weighted, MeasurementOrder::AliceFirst)?;
        if let Some(fault) = &ctx.fault {
            fault.apply(&mut protocol);
        }
        let (branches, mut case) = ctx.run_case(&label, &protocol)?;
        let success: f64 = branches.iter().filter(|b| b.reachable && b.success).map(|b| b.probability).sum();
        let expected = 2.0 * a2.min(1.0 - a2);
        case.defect((success - expected).abs());
        if (success - expected).abs() > ctx.tol.probability {
            case.fail(format!("{label}: success probability {success:.15}, expected {expected:.15}"));
        }
        if a2 == 0.5 {
            let deterministic = enumerate(&ctx.script(&input, &channel)?)?;
            match_branches(ctx, &label, &branches, &deterministic, &mut case);
        }
        Ok(case)
    });
    let name = match family {
        ChannelFamily::Cat => format!("filtered cat N={n}"),
        _ => format!("filtered {family}"),
    };
    Check::from_cases(name, cases)
}

fn match_branches(ctx: &Context, label: &str, filtered: &[Branch], deterministic: &[Branch], case: &mut CaseResult) {
    let kept: Vec<&Branch> = filtered.iter().filter(|b| b.reachable && b.success).collect();
    let reference: Vec<&Branch> = deterministic.iter().filter(|b| b.reachable).collect();
    if kept.len() != reference.len() {
        case.fail(format!("{label}: {} filtered branches against {} deterministic ones", kept.len(), reference.len()));
        return;
    }
    for (f, d) in kept.iter().zip(&reference) {
        let mut key = f.outcome_key();
        key.remove(FILTER);
        let same_state = match (&f.bob_state, &d.bob_state) {
            (Some(s), Some(t)) => fidelity(s, t).is_ok_and(|x| x >= 1.0 - ctx.tol.fidelity),
            _ => false,
        };
        let dp = (f.probability - d.probability).abs();
        case.defect(dp);
        if key != d.outcome_key() || dp > ctx.tol.probability || !same_state {
            case.fail(format!("{label}: branch {} differs from the deterministic run", f.outcome_tuple()));
        }
    }
}

fn negativity_check() -> Result<Check, CliError> {
    let mut case = CaseResult::default();
    let ghz = channel_negativity_report(&ChannelSpec::ghz())?;
    for (name, v) in [("GHZ N(A:B2)", ghz.alice_bob2), ("GHZ N(A:B1)", ghz.alice_bob1)] {
        case.defect(v.abs());
        if v.abs() > ANALYSIS_TOL {
            case.fail(format!("negativity: {name} = {v:e}"));
        }
    }
    for k in 0..=10 {
        let r = k as f64 / 10.0;
        let (phi, prime) = overlap_pair(r, 0.0)?;
        let report = channel_negativity_report(&ChannelSpec::ghz_class(phi, prime))?;
        let d2 = (report.alice_bob2 - r / 2.0).abs();
        case.defect(d2.max(report.alice_bob1.abs()));
        if d2 > ANALYSIS_TOL || report.alice_bob1.abs() > ANALYSIS_TOL {
            case.fail(format!("negativity at r = {r}: N(A:B2) = {:.12}, N(A:B1) = {:.12}", report.alice_bob2, report.alice_bob1));
        }
        if r > 0.0 && !report.alice_bob2_distillable(ANALYSIS_TOL) {
            case.fail(format!("negativity at r = {r}: A:B2 is not NPT"));
        }
    }
    case.branches = 11;
    Ok(Check::from_cases("channel negativity", vec![case]))
}

fn range_check() -> Result<Check, CliError> {
    let mut case = CaseResult::default();
    for k in 0..=20 {
        let r = k as f64 / 20.0;
        let (phi, prime) = overlap_pair(r, 0.0)?;
        let range = teleportable_entanglement_range(&overlap_frame(&phi, &prime), 10001)?;
        let d = (range.e_max - closed_form_max(r)).abs();
        case.defect(d);
        if d > E_MAX_TOL {
            case.fail(format!("e_max at r = {r}: grid {:.12} against H((1+r)/2) = {:.12}", range.e_max, closed_form_max(r)));
        }
        if range.e_max > 1.0 + 1e-9 {
            case.fail(format!("e_max at r = {r} exceeds one ebit: {:.12}", range.e_max));
        }
        let at_one = (range.e_max - 1.0).abs() < 1e-9;
        if at_one != (k == 0) {
            case.fail(format!("e_max at r = {r} is {:.12}", range.e_max));
        }
    }
    case.branches = 21;
    Ok(Check::from_cases("entanglement range", vec![case]))
}

fn scenario_check(ctx: &Context, path: &PathBuf) -> Result<Check, CliError> {
    let scenario = Scenario::load(path)?;
    let (input, channel) = scenario.build()?;
    let label = path.display().to_string();
    let (_, mut case) = ctx.run_case(&label, &ctx.script(&input, &channel)?)?;
    if channel.family != ChannelFamily::Ghz {
        let report = order_permutation_check(&input, &channel)?;
        case.defect(report.max_probability_defect);
        if !report.passes(ctx.tol.probability, ctx.tol.fidelity) {
            case.fail(format!("{label}: orderings differ"));
        }
    }
    Ok(Check::from_cases(format!("scenario {label}"), vec![case]))
}

pub fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    for (name, tol) in [("fidelity-tol", args.fidelity_tol), ("prob-tol", args.prob_tol)] {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Usage(format!("{name} must be positive")));
        }
    }
    if let Some(n) = args.n {
        if !(2..=catport_core::protocols::MAX_BOBS).contains(&n) {
            return Err(CliError::Usage(format!("N must lie in 2..={}, got {n}", catport_core::protocols::MAX_BOBS)));
        }
        if args.protocol.is_some_and(|p| p != Family::Cat) && n != 2 {
            return Err(CliError::Usage(format!("only cat channels have {n} Bobs")));
        }
    }
    let ctx = Context {
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        tol: Tolerances { fidelity: args.fidelity_tol, probability: args.prob_tol },
        fault: args.inject_fault.as_deref().map(Fault::parse).transpose()?,
    };
    let everything = args.all || (args.protocol.is_none() && args.scenario.is_empty());
    let run = |f: Family| everything || args.protocol == Some(f);
    let trials = args.trials;
    let filter_draws = (trials / 20).max(1).min(trials);
    let cat_ns: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None => (2..=6).collect(),
    };

    let mut checks = Vec::new();
    if run(Family::Ghz) {
        checks.push(ghz_suite(&ctx, trials));
        checks.push(filter_suite(&ctx, ChannelFamily::Ghz, 2, filter_draws));
    }
    if run(Family::GhzClass) {
        checks.push(ghz_class_suite(&ctx, trials));
        checks.push(order_suite(&ctx, ChannelFamily::GhzClass, 2, trials / 2));
        checks.push(filter_suite(&ctx, ChannelFamily::GhzClass, 2, filter_draws));
    }
    if run(Family::Cat) {
        for &n in &cat_ns {
            checks.push(cat_suite(&ctx, n, trials));
        }
        let order_ns: Vec<usize> = if args.n.is_some() { cat_ns.clone() } else { vec![3] };
        for &n in &order_ns {
            checks.push(order_suite(&ctx, ChannelFamily::Cat, n, trials.min(20)));
            checks.push(filter_suite(&ctx, ChannelFamily::Cat, n, filter_draws.min(5)));
        }
    }
    if everything {
        checks.push(negativity_check()?);
        checks.push(range_check()?);
    }
    for path in &args.scenario {
        checks.push(scenario_check(&ctx, path)?);
    }

    if let Some(fault) = &ctx.fault {
        if !fault.used.load(Ordering::Relaxed) {
            return Err(CliError::Usage(format!("fault {} matches no correction table", fault.outcomes.join(":"))));
        }
    }

    for c in &checks {
        println!("{}", c.line());
    }
    let min_fidelity = checks.iter().filter_map(|c| c.min_fidelity).reduce(f64::min);
    let max_defect = checks.iter().map(|c| c.max_defect).fold(0.0, f64::max);
    let failures: Vec<&String> = checks.iter().flat_map(|c| &c.failures).collect();
    let fid = min_fidelity.map_or("-".to_owned(), |f| format!("{f:.12}"));
    println!(
        "{}: {} checks, min fidelity {fid}, max probability defect {max_defect:.1e}",
        if failures.is_empty() { "PASS" } else { "FAIL" },
        checks.len()
    );
    if failures.is_empty() {
        return Ok(());
    }
    for f in failures.iter().take(SHOWN_FAILURES) {
        println!("  {f}");
    }
    if failures.len() > SHOWN_FAILURES {
        println!("  ... and {} more", failures.len() - SHOWN_FAILURES);
    }
    Err(CliError::Failed(format!("{} failed invariant(s); first: {}", failures.len(), failures[0])))
}
