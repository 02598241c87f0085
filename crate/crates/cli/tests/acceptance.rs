//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catport_core::analysis::{channel_negativity_report, teleportable_entanglement_range};
use catport_core::locc::{enumerate, validate_locality, Branch, Event, LoccError, Phase, Protocol, Step};
use catport_core::protocol_math::overlap_frame;
use catport_core::protocols::{
    cat_protocol, ghz_class_protocol, ghz_protocol, order_permutation_check, probabilistic_protocol, script_for,
    ChannelSpec, InputFrame, MeasurementOrder, TeleportInput, ALICE_BELL, ALICE_GHZ, FILTER,
};
use catport_core::qstate::{Label, QubitVector, SingleQubitGate, C64};
use catport_core::sampling::{random_amplitudes, random_pair, random_pair_with_overlap, random_schmidt_frame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FID: f64 = 1e-10;
const PROB: f64 = 1e-12;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn inner(p: &QubitVector, q: &QubitVector) -> C64 {
    let ([p0, p1], [q0, q1]) = (p.amplitudes(), q.amplitudes());
    p0.conj() * q0 + p1.conj() * q1
}

fn kron(factors: &[QubitVector]) -> Vec<C64> {
    factors.iter().fold(vec![C64::new(1.0, 0.0)], |acc, q| {
        acc.iter().flat_map(|&a| q.amplitudes().map(|c| a * c)).collect()
    })
}

/// `|⟨χ|bobs⟩|²` with `χ = α|x⟩ + β|y⟩` assembled from the input factors.
fn oracle_fidelity(input: &TeleportInput, branch: &Branch) -> f64 {
    let Some(bobs) = &branch.bob_state else { return 0.0 };
    let n = input.n();
    let labels: Vec<Label> = (1..=n).map(|j| Label::new(format!("B{j}"))).collect();
    let bobs = bobs.permuted(&labels).expect("Bob labels");
    let (x, y) = input.frame.basis_vectors();
    let (kx, ky) = (kron(&x), kron(&y));
    let amp: C64 = (0..kx.len())
        .map(|i| (input.alpha * kx[i] + input.beta * ky[i]).conj() * bobs.amplitudes()[i])
        .sum();
    amp.norm_sqr()
}

fn ghz_draw(rng: &mut ChaCha8Rng) -> (TeleportInput, ChannelSpec) {
    let (alpha, beta) = random_amplitudes(rng);
    let frame = InputFrame::Schmidt { first: random_schmidt_frame(rng), second: random_schmidt_frame(rng) };
    (TeleportInput::new(alpha, beta, frame).unwrap(), ChannelSpec::ghz())
}

fn overlap_draw(rng: &mut ChaCha8Rng, n: usize, r: Option<f64>) -> (TeleportInput, ChannelSpec) {
    let (alpha, beta) = random_amplitudes(rng);
    let (phis, primes): (Vec<_>, Vec<_>) = (0..n - 1)
        .map(|_| match r {
            Some(r) => random_pair_with_overlap(rng, r),
            None => random_pair(rng),
        })
        .unzip();
    let frame = InputFrame::Product { phis: phis.clone(), phi_primes: primes.clone(), last: random_schmidt_frame(rng) };
    let channel = if n == 2 {
        ChannelSpec::ghz_class(phis[0], primes[0])
    } else {
        ChannelSpec::cat(phis, primes).unwrap()
    };
    (TeleportInput::new(alpha, beta, frame).unwrap(), channel)
}

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&q| q > 0.0).map(|q| -q * q.log2()).sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(101);
    let mut min_f: f64 = 1.0;
    let mut max_p5: f64 = 0.0;
    for draw in 0..200 {
        let (input, channel) = ghz_draw(&mut rng);
        let branches = ghz_protocol(&input, &channel).map_err(|e| e.to_string())?;
        let p5: f64 = branches.iter().filter(|b| b.outcome(ALICE_GHZ).unwrap().name == "P5").map(|b| b.probability).sum();
        max_p5 = max_p5.max(p5);
        ensure(p5 < PROB, || format!("draw {draw}: P5 probability {p5:e}"))?;
        let reachable: Vec<_> = branches.iter().filter(|b| b.reachable).collect();
        ensure(reachable.len() == 4, || format!("draw {draw}: {} reachable branches", reachable.len()))?;
        for b in reachable {
            let f = oracle_fidelity(&input, b);
            min_f = min_f.min(f);
            ensure(f >= 1.0 - FID, || format!("draw {draw}: branch {} fidelity {f}", b.outcome_tuple()))?;
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("200 draws, min fidelity {min_f:.12}, max P5 {max_p5:.1e}, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(102);
    let special = [0.0, 0.3, FRAC_1_SQRT_2, 0.95, 1.0];
    let mut min_f: f64 = 1.0;
    for draw in 0..200 {
        let r = (draw < 100).then(|| special[draw % special.len()]);
        let (input, channel) = overlap_draw(&mut rng, 2, r);
        let r = inner(&channel.phis[0], &channel.phi_primes[0]).norm();
        let branches = ghz_class_protocol(&input, &channel).map_err(|e| e.to_string())?;
        ensure(branches.len() == 8, || format!("draw {draw}: {} branches", branches.len()))?;
        for bell in ["phi+", "phi-", "psi+", "psi-"] {
            let p: f64 = branches.iter().filter(|b| b.outcome(ALICE_BELL).unwrap().name == bell).map(|b| b.probability).sum();
            ensure((p - 0.25).abs() <= PROB, || format!("draw {draw}: P({bell}) = {p}"))?;
        }
        for b in &branches {
            let o = b.outcome("claire1").unwrap();
            let expect = if o.name == "a" { (1.0 + r) / 2.0 } else { (1.0 - r) / 2.0 };
            if b.reachable {
                ensure((o.probability - expect).abs() <= PROB, || {
                    format!("draw {draw}: Claire conditional {} against {expect}", o.probability)
                })?;
                let f = oracle_fidelity(&input, b);
                min_f = min_f.min(f);
                ensure(f >= 1.0 - FID, || format!("draw {draw}: branch {} fidelity {f}", b.outcome_tuple()))?;
            } else {
                ensure(expect < 1e-12, || format!("draw {draw}: branch {} unreachable", b.outcome_tuple()))?;
            }
        }
    }
    let t = within(start, Duration::from_secs(2))?;
    Ok(format!("200 draws, min fidelity {min_f:.12}, {t:.2?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(103);
    let mut min_f: f64 = 1.0;
    let mut max_defect: f64 = 0.0;
    for n in 2..=6 {
        for draw in 0..50 {
            let (input, channel) = overlap_draw(&mut rng, n, None);
            let branches = if n == 2 {
                ghz_class_protocol(&input, &channel)
            } else {
                cat_protocol(&input, &channel)
            }
            .map_err(|e| e.to_string())?;
            ensure(branches.len() == 4 << (n - 1), || format!("N={n}: {} branches", branches.len()))?;
            // θᵢ from cos θᵢ = |⟨φᵢ|φ'ᵢ⟩|
            let thetas: Vec<f64> =
                channel.phis.iter().zip(&channel.phi_primes).map(|(p, q)| inner(p, q).norm().min(1.0).acos()).collect();
            for b in &branches {
                let expect = thetas.iter().enumerate().fold(0.25, |acc, (i, t)| {
                    let o = b.outcome(&format!("claire{}", i + 1)).unwrap();
                    acc * if o.name == "a" { (t / 2.0).cos().powi(2) } else { (t / 2.0).sin().powi(2) }
                });
                max_defect = max_defect.max((b.probability - expect).abs());
                ensure((b.probability - expect).abs() <= PROB, || {
                    format!("N={n} draw {draw}: leaf {} has p {} against {expect}", b.outcome_tuple(), b.probability)
                })?;
                if b.reachable {
                    let f = oracle_fidelity(&input, b);
                    min_f = min_f.min(f);
                    ensure(f >= 1.0 - FID, || format!("N={n} draw {draw}: branch {} fidelity {f}", b.outcome_tuple()))?;
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("N=2..6 x 50 draws, min fidelity {min_f:.12}, max leaf defect {max_defect:.1e}, {t:.2?}"))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(104);
    let mut worst_p: f64 = 0.0;
    let mut worst_f: f64 = 1.0;
    for (n, draws) in [(2, 100), (3, 20)] {
        for draw in 0..draws {
            let (input, channel) = overlap_draw(&mut rng, n, None);
            let report = order_permutation_check(&input, &channel).map_err(|e| e.to_string())?;
            worst_p = worst_p.max(report.max_probability_defect);
            worst_f = worst_f.min(report.min_state_fidelity);
            ensure(report.max_probability_defect < PROB && report.min_state_fidelity >= 1.0 - FID, || {
                format!("N={n} draw {draw}: {report:?}")
            })?;
        }
    }
    Ok(format!("120 draws, max defect {worst_p:.1e}, min state fidelity {worst_f:.12}"))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(105);
    for a2 in [0.5f64, 0.6, 0.8, 0.99] {
        for draw in 0..10 {
            let (input, channel) = overlap_draw(&mut rng, 2 + draw % 2, None);
            let weighted = channel
                .clone()
                .with_weights(C64::new(a2.sqrt(), 0.0), C64::new((1.0 - a2).sqrt(), 0.0))
                .map_err(|e| e.to_string())?;
            let branches = probabilistic_protocol(&input, &weighted).map_err(|e| e.to_string())?;
            let success: f64 = branches.iter().filter(|b| b.success && b.reachable).map(|b| b.probability).sum();
            let expect = 2.0 * a2.min(1.0 - a2);
            ensure((success - expect).abs() <= PROB, || format!("a2={a2}: success {success} against {expect}"))?;
            for b in branches.iter().filter(|b| b.success && b.reachable) {
                let f = oracle_fidelity(&input, b);
                ensure(f >= 1.0 - FID, || format!("a2={a2}: branch {} fidelity {f}", b.outcome_tuple()))?;
            }
            if a2 == 0.5 {
                let deterministic = enumerate(&script_for(&input, &channel, MeasurementOrder::AliceFirst).unwrap())
                    .map_err(|e| e.to_string())?;
                let kept: Vec<_> = branches.iter().filter(|b| b.success && b.reachable).collect();
                ensure(kept.len() == deterministic.len(), || "branch counts differ at a = b".into())?;
                for (f, d) in kept.iter().zip(&deterministic) {
                    let mut key = f.outcome_key();
                    key.remove(FILTER);
                    ensure(key == d.outcome_key() && (f.probability - d.probability).abs() <= PROB, || {
                        format!("branch {} differs at a = b", f.outcome_tuple())
                    })?;
                }
            }
        }
    }
    Ok("|a|² in {0.5, 0.6, 0.8, 0.99}, success = 2 min(|a|², |b|²)".into())
}

fn criterion_6() -> Outcome {
    let ghz = channel_negativity_report(&ChannelSpec::ghz()).map_err(|e| e.to_string())?;
    ensure(ghz.alice_bob2.abs() <= 1e-10 && ghz.alice_bob1.abs() <= 1e-10, || format!("GHZ: {ghz:?}"))?;
    for k in 0..=10 {
        let r = k as f64 / 10.0;
        let prime = QubitVector::new(C64::new(r, 0.0), C64::new((1.0 - r * r).sqrt(), 0.0)).unwrap();
        let report = channel_negativity_report(&ChannelSpec::ghz_class(QubitVector::zero(), prime)).unwrap();
        ensure((report.alice_bob2 - r / 2.0).abs() <= 1e-10, || format!("r={r}: N(A:B2) = {}", report.alice_bob2))?;
        ensure(report.alice_bob1.abs() <= 1e-10, || format!("r={r}: N(A:B1) = {}", report.alice_bob1))?;
        ensure((r > 0.0) == (report.alice_bob2 > 1e-10), || format!("r={r}: sign of N(A:B2)"))?;
    }
    Ok("N(A:B2) = r/2 and N(A:B1) = 0 on r = 0:0.1:1".into())
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let r = k as f64 / 20.0;
        let prime = QubitVector::new(C64::new(r, 0.0), C64::new((1.0 - r * r).sqrt(), 0.0)).unwrap();
        let range = teleportable_entanglement_range(&overlap_frame(&QubitVector::zero(), &prime), 10001)
            .map_err(|e| e.to_string())?;
        let expect = binary_entropy((1.0 + r) / 2.0);
        worst = worst.max((range.e_max - expect).abs());
        ensure((range.e_max - expect).abs() <= 1e-6, || format!("r={r}: e_max {} against {expect}", range.e_max))?;
        ensure(range.e_max <= 1.0 + 1e-9, || format!("r={r}: e_max {} above one ebit", range.e_max))?;
        ensure(((range.e_max - 1.0).abs() < 1e-9) == (k == 0), || format!("r={r}: e_max {}", range.e_max))?;
    }
    Ok(format!("e_max = H((1+r)/2) within {worst:.1e} on 21 overlaps"))
}

fn check_messages(name: &str, protocol: &Protocol, claires: usize) -> Result<(), String> {
    for b in enumerate(protocol).map_err(|e| e.to_string())?.iter().filter(|b| b.reachable) {
        let report = validate_locality(&b.transcript);
        ensure(report.is_ok(), || format!("{name}: {:?}", report.violations))?;
        let msgs: Vec<_> = b.transcript.messages().collect();
        let alice: Vec<_> = msgs.iter().filter(|m| m.from == "Alice").collect();
        ensure(alice.len() == 1 && alice[0].bit_count == 2, || format!("{name}: Alice sent {alice:?}"))?;
        for i in 1..=claires {
            let from = format!("Claire{i}");
            let sent: Vec<_> = msgs.iter().filter(|m| m.from == from).collect();
            ensure(sent.len() == 1 && sent[0].bit_count == 1, || format!("{name}: {from} sent {sent:?}"))?;
        }
        ensure(msgs.len() == 1 + claires, || format!("{name}: {} messages", msgs.len()))?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = rng(108);
    let mut scripts = 0;
    for _ in 0..10 {
        let (input, channel) = ghz_draw(&mut rng);
        check_messages("ghz", &script_for(&input, &channel, MeasurementOrder::AliceFirst).unwrap(), 0)?;
        scripts += 1;
        for n in 2..=5 {
            let (input, channel) = overlap_draw(&mut rng, n, None);
            for order in [MeasurementOrder::AliceFirst, MeasurementOrder::ClairesFirst] {
                check_messages(&format!("N={n}"), &script_for(&input, &channel, order).unwrap(), n - 1)?;
                scripts += 1;
            }
        }
    }

    let (input, channel) = overlap_draw(&mut rng, 2, None);
    let script = script_for(&input, &channel, MeasurementOrder::AliceFirst).unwrap();
    let mut branch = enumerate(&script).unwrap().remove(0);
    branch.transcript.events.push(Event::LocalOp {
        party: "Bob1".into(),
        labels: vec![Label::new("B1"), Label::new("B2")],
        operation: "CNOT".into(),
        conditioned_on: vec![],
    });
    ensure(!validate_locality(&branch.transcript).is_ok(), || "nonlocal CNOT not reported".into())?;

    let mut nonlocal = script.clone();
    nonlocal.steps.push(Step::Gate {
        party: "Bob1".into(),
        label: Label::new("B2"),
        gate: SingleQubitGate::pauli_x(),
        phase: Phase::Correction,
    });
    ensure(matches!(enumerate(&nonlocal), Err(LoccError::Locality(_))), || "gate on a foreign qubit accepted".into())?;

    let mut premature = script.clone();
    let broadcast = premature.steps.iter().position(|s| matches!(s, Step::Broadcast { .. })).unwrap();
    let correct = premature.steps.iter().position(|s| matches!(s, Step::Correct { .. })).unwrap();
    let step = premature.steps.remove(correct);
    premature.steps.insert(broadcast, step);
    ensure(matches!(enumerate(&premature), Err(LoccError::Locality(_))), || "premature correction accepted".into())?;

    let mut branch = enumerate(&script).unwrap().remove(0);
    let events = &mut branch.transcript.events;
    let msg = events.iter().position(|e| matches!(e, Event::Message(_))).unwrap();
    let corr = events
        .iter()
        .position(|e| matches!(e, Event::LocalOp { conditioned_on, .. } if !conditioned_on.is_empty()))
        .unwrap();
    let moved = events.remove(corr);
    events.insert(msg, moved);
    ensure(!validate_locality(&branch.transcript).is_ok(), || "reordered correction not reported".into())?;

    Ok(format!("{scripts} scripts local with 2 + 1·(N−1) bits; nonlocal and premature faults caught"))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_catport");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let status = Command::new(bin)
            .args(["run", "--protocol", "ghz-class", "--r", "0.5", "--alpha2", "0.3", "--seed", "7", "--report", name])
            .env("CATPORT_REPORT_DIR", dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("run exited with {:?}", status.status.code()))?;
        std::fs::read(dir.path().join(name)).map_err(|e| e.to_string())
    };
    let (first, second) = (run("first.json")?, run("second.json")?);
    ensure(first == second, || "reports differ for the same seed".into())?;

    let start = Instant::now();
    let out = Command::new(bin).args(["verify", "--all", "--trials", "200"]).output().map_err(|e| e.to_string())?;
    let t = within(start, Duration::from_secs(60))?;
    ensure(out.status.success(), || format!("verify --all failed:\n{}", String::from_utf8_lossy(&out.stdout)))?;
    Ok(format!("reports byte-identical ({} bytes), verify --all in {t:.1?}", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("GHZ protocol", criterion_1),
        ("GHZ-class protocol", criterion_2),
        ("cat protocol N = 2..6", criterion_3),
        ("order invariance", criterion_4),
        ("probabilistic variants", criterion_5),
        ("channel negativity", criterion_6),
        ("entanglement range", criterion_7),
        ("locality and classical cost", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
