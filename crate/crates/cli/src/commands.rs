use std::path::Path;

use serde_json::{json, Value};

use listdec::chains::{
    self, best_translate_oracle, chain_bound, chain_find, guaranteed_chain_length, longest_chain_oracle,
    parse_vector_set, shatter_find, shatter_verify, Chain, ShatterWitness,
};
use listdec::codes::{check_ld_exact, check_ld_montecarlo, random_code, CheckMode, Code};
use listdec::experiments::{
    run_pair_sum_experiment, run_rate_sweep, run_span_experiment, CenterMode, PairSumConfig, SpanConfig, SweepConfig,
};
use listdec::hamming::{ball_volume, entropy_q, BallSampler, BallSpec};
use listdec::SeedStream;

use crate::output::Report;
use crate::{CenterArg, ChainCmd, CheckLdCmd, CliError, Command, ModeArg, ShatterCmd};

pub struct Ctx {
    pub seed: u64,
    pub verbose: bool,
}

impl From<ModeArg> for CheckMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => CheckMode::Auto,
            ModeArg::Exhaustive => CheckMode::Exhaustive,
            ModeArg::Candidates => CheckMode::Candidates,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn execute(cmd: &Command, ctx: &Ctx) -> Result<Report, CliError> {
    let mut rep = Report::new();
    match cmd {
        Command::Entropy { q, x } => {
            let h = entropy_q(*x, *q)?;
            rep.record("entropy", json!({ "q": q, "x": x, "value": h }));
            rep.header(&["q", "x", "value"]);
            rep.row([q.to_string(), x.to_string(), h.to_string()]);
            rep.line(format!("{h:?}"));
        }
        Command::BallVolume { n, r, p, q } => {
            let radius = match (r, p) {
                (Some(r), _) => *r,
                (None, Some(p)) => BallSpec::from_fraction(*n, *p, *q)?.radius,
                (None, None) => unreachable!("clap requires one of --r/--p"),
            };
            listdec::Field::new(*q)?;
            let vol = ball_volume(*n, radius, *q)?;
            rep.record(
                "ball-volume",
                json!({ "n": n, "radius": radius, "q": q, "p": p.map(|p| p.to_string()), "volume": vol.to_string() }),
            );
            rep.header(&["n", "radius", "q", "volume"]);
            rep.row([n.to_string(), radius.to_string(), q.to_string(), vol.to_string()]);
            rep.line(vol.to_string());
        }
        Command::SampleBall { n, p, q, count } => {
            let spec = BallSpec::from_fraction(*n, *p, *q)?;
            let sampler = BallSampler::new(&spec)?;
            let seeds = SeedStream::new(ctx.seed);
            rep.header(&["index", "vector", "weight"]);
            for i in 0..*count {
                let v = sampler.sample(&mut seeds.rng(i as u64));
                rep.record(
                    "ball-sample",
                    json!({ "index": i, "n": n, "q": q, "p": p.to_string(), "radius": spec.radius, "vector": v.to_string(), "weight": v.weight() }),
                );
                rep.row([i.to_string(), v.to_string(), v.weight().to_string()]);
                rep.line(v.to_string());
            }
        }
        Command::GenCode { n, k, q, iid } => {
            let code = random_code(*n, *k, *q, !iid, &mut SeedStream::new(ctx.seed).rng(0))?;
            let rows: Vec<String> = code.generator().iter().map(|r| r.to_string()).collect();
            rep.record(
                "code",
                json!({ "q": q, "n": n, "k": k, "full_rank": code.full_rank(), "rank": code.rank(), "generator": rows }),
            );
            rep.header(&["row", "digits"]);
            for (i, r) in rows.iter().enumerate() {
                rep.row([i.to_string(), r.clone()]);
            }
            rep.text = code.to_text();
        }
        Command::CheckLd { mode } => check_ld(mode, ctx, &mut rep)?,
        Command::SpanExp { n, p, q, ell, c_threshold, trials } => {
            let cfg = SpanConfig { n: *n, p: *p, q: *q, ell: *ell, c_threshold: *c_threshold, trials: *trials, seed: ctx.seed };
            let s = run_span_experiment(&cfg, ctx.verbose)?;
            let mut summary = to_value(&s);
            let detail = summary.as_object_mut().and_then(|m| m.remove("trials_detail"));
            rep.record("span-summary", summary);
            if let Some(Value::Array(trials)) = detail {
                for t in trials {
                    rep.record("span-trial", t);
                }
            }
            rep.header(&["count", "trials"]);
            for (c, t) in &s.histogram {
                rep.row([c.to_string(), t.to_string()]);
            }
            rep.line(format!(
                "n={} q={} ell={} radius={} trials={} C={}",
                n, q, ell, s.radius, trials, c_threshold
            ));
            if s.ell_squared_ge_n {
                rep.line("warning: ell^2 >= n, outside the ell = o(sqrt n) regime");
            }
            rep.line(format!("tail_count={} tail_frequency={}", s.tail_count, s.tail_frequency));
            rep.line(format!("dependent_trials={} rank_mismatches={}", s.dependent_trials, s.rank_mismatches));
            rep.line("count  trials");
            for (c, t) in &s.histogram {
                rep.line(format!("{c:>5}  {t}"));
            }
        }
        Command::PairSum { n, p, q, trials, center } => {
            let centers = match center {
                CenterArg::Zero => vec![CenterMode::Zero],
                CenterArg::Random => vec![CenterMode::Random],
                CenterArg::Both => vec![CenterMode::Zero, CenterMode::Random],
            };
            let cfg = PairSumConfig { ns: n.clone(), p: *p, q: *q, trials: *trials, seed: ctx.seed, centers };
            let s = run_pair_sum_experiment(&cfg)?;
            rep.header(&["n", "center", "radius", "trials", "hits", "estimate", "std_error", "log2_estimate_per_n"]);
            rep.line("n      center  radius  hits        estimate");
            for r in &s.records {
                rep.record("pair-sum", to_value(r));
                let center = to_value(&r.center).as_str().unwrap_or_default().to_string();
                rep.row([
                    r.n.to_string(),
                    center.clone(),
                    r.radius.to_string(),
                    r.trials.to_string(),
                    r.hit_count.to_string(),
                    r.estimate.to_string(),
                    r.std_error.to_string(),
                    r.log_estimate_per_n.map(|v| v.to_string()).unwrap_or_default(),
                ]);
                rep.line(format!("{:<6} {:<7} {:<7} {:<11} {}", r.n, center, r.radius, r.hit_count, r.estimate));
            }
            for f in &s.fits {
                rep.record("pair-sum-fit", to_value(f));
                let center = to_value(&f.center);
                match f.slope {
                    Some(sl) => rep.line(format!("{} decay slope (log2 per coordinate): {sl}", center.as_str().unwrap_or_default())),
                    None => rep.line(format!("{}: too few nonzero estimates for a slope", center.as_str().unwrap_or_default())),
                }
                if !f.excluded_ns.is_empty() {
                    rep.line(format!("  excluded (no hits): {:?}", f.excluded_ns));
                }
            }
        }
        Command::RateSweep { n, q, p, eps, codes, c_const, mode, save_codes } => {
            let cfg = SweepConfig {
                n: *n,
                q: *q,
                p: *p,
                eps: eps.clone(),
                codes_per_point: *codes,
                seed: ctx.seed,
                c_const: *c_const,
                mode: (*mode).into(),
                retain_codes: save_codes.is_some(),
            };
            let s = run_rate_sweep(&cfg)?;
            if let Some(dir) = save_codes {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                for (pi, pt) in s.points.iter().enumerate() {
                    for (ci, g) in pt.generators.iter().enumerate() {
                        let path = dir.join(format!("point{pi}_code{ci}.txt"));
                        std::fs::write(&path, g).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    }
                }
            }
            rep.record("sweep-config", json!({ "n": n, "q": q, "p": p.to_string(), "radius": s.radius, "entropy": s.entropy }));
            rep.header(&["eps", "rate", "k", "degenerate", "codes", "max_l_max", "candidate_L", "failure_frequency", "code_size", "failure_at_code_size"]);
            rep.line(format!("n={n} q={q} p={p} radius={} H_q(p)={}", s.radius, s.entropy));
            for pt in &s.points {
                let mut v = to_value(pt);
                if let Some(m) = v.as_object_mut() {
                    m.remove("generators");
                }
                rep.record("sweep-point", v);
                let top = pt.l_max.iter().max().copied().unwrap_or(0);
                rep.row([
                    pt.eps.to_string(),
                    pt.rate.to_string(),
                    pt.k.to_string(),
                    pt.degenerate.to_string(),
                    pt.codes_sampled.to_string(),
                    top.to_string(),
                    pt.candidate_list_size.to_string(),
                    pt.failure_frequency.to_string(),
                    pt.code_size.to_string(),
                    pt.failure_frequency_at_code_size.to_string(),
                ]);
                if pt.degenerate {
                    rep.line(format!("eps={}: {}", pt.eps, pt.note.clone().unwrap_or_default()));
                } else {
                    rep.line(format!(
                        "eps={} k={} codes={} L_max histogram={:?} failure@L={}: {}",
                        pt.eps, pt.k, pt.codes_sampled, pt.l_max_histogram, pt.candidate_list_size, pt.failure_frequency
                    ));
                }
            }
        }
        Command::Chain { action } => chain(action, &mut rep)?,
        Command::Shatter { action } => shatter(action, &mut rep)?,
    }
    Ok(rep)
}

fn check_ld(mode: &CheckLdCmd, ctx: &Ctx, rep: &mut Report) -> Result<(), CliError> {
    match mode {
        CheckLdCmd::Exact { code, p, list_size, mode } => {
            let code = Code::from_text(&read(code)?)?;
            let spec = BallSpec::from_fraction(code.n(), *p, code.field().q())?;
            let v = check_ld_exact(&code, spec.radius, (*mode).into())?;
            let decodable = list_size.map(|l| v.is_list_decodable(l));
            rep.record(
                "check-ld-exact",
                json!({
                    "q": code.field().q(), "n": code.n(), "k": code.k(), "p": p.to_string(), "radius": v.radius,
                    "l_max": v.l_max, "witness_center": v.witness_center.to_string(),
                    "centers_inspected": v.centers_inspected.to_string(), "exhaustive": v.exhaustive,
                    "list_size": list_size, "list_decodable": decodable,
                }),
            );
            rep.header(&["radius", "l_max", "witness_center", "centers_inspected", "exhaustive"]);
            rep.row([
                v.radius.to_string(),
                v.l_max.to_string(),
                v.witness_center.to_string(),
                v.centers_inspected.to_string(),
                v.exhaustive.to_string(),
            ]);
            rep.line(format!("L_max={}", v.l_max));
            rep.line(format!("radius={} witness={}", v.radius, v.witness_center));
            rep.line(format!(
                "centers_inspected={} ({})",
                v.centers_inspected,
                if v.exhaustive { "exhaustive" } else { "candidate-restricted" }
            ));
            if let (Some(l), Some(ok)) = (list_size, decodable) {
                rep.line(format!("({p}, {l})-list-decodable: {ok}"));
            }
        }
        CheckLdCmd::Mc { code, p, trials } => {
            let code = Code::from_text(&read(code)?)?;
            let spec = BallSpec::from_fraction(code.n(), *p, code.field().q())?;
            let mc = check_ld_montecarlo(&code, spec.radius, *trials, SeedStream::new(ctx.seed))?;
            let mut hist = std::collections::BTreeMap::new();
            for &c in &mc.counts {
                *hist.entry(c).or_insert(0usize) += 1;
            }
            rep.record(
                "check-ld-mc",
                json!({ "q": code.field().q(), "n": code.n(), "k": code.k(), "p": p.to_string(), "radius": spec.radius, "trials": trials, "max": mc.max, "histogram": hist }),
            );
            if ctx.verbose {
                for (t, c) in mc.counts.iter().enumerate() {
                    rep.record("check-ld-mc-trial", json!({ "trial": t, "count": c }));
                }
            }
            rep.header(&["list_size", "trials"]);
            for (c, t) in &hist {
                rep.row([c.to_string(), t.to_string()]);
            }
            rep.line(format!("max list size over {trials} sampled centers: {}", mc.max));
            rep.line(format!("histogram: {hist:?}"));
        }
    }
    Ok(())
}

fn chain(action: &ChainCmd, rep: &mut Report) -> Result<(), CliError> {
    match action {
        ChainCmd::Find { set, c } => {
            let (field, ell, vs) = parse_vector_set(&read(set)?)?;
            let ch = chain_find(&vs, *c)?;
            let distinct = vs.iter().collect::<std::collections::BTreeSet<_>>().len();
            let bound = chain_bound(field.q(), ell, distinct, *c);
            let guaranteed = guaranteed_chain_length(field.q(), ell, distinct, *c);
            rep.record(
                "chain",
                json!({
                    "q": field.q(), "ell": ell, "c": c, "set_size": distinct, "d": ch.len(),
                    "bound": bound, "guaranteed": guaranteed, "verified": ch.verify(),
                    "translate": ch.translate.to_string(),
                    "members": ch.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                }),
            );
            rep.header(&["position", "member", "shifted"]);
            for (i, m) in ch.members.iter().enumerate() {
                rep.row([i.to_string(), m.to_string(), m.add(&ch.translate)?.to_string()]);
            }
            rep.text = ch.to_text();
        }
        ChainCmd::Verify { chain } => {
            let ch = Chain::from_text(&read(chain)?)?;
            let ok = ch.verify();
            rep.record("chain-verify", json!({ "c": ch.c, "d": ch.len(), "valid": ok }));
            rep.header(&["c", "d", "valid"]);
            rep.row([ch.c.to_string(), ch.len().to_string(), ok.to_string()]);
            rep.line(if ok { "valid" } else { "invalid" });
        }
        ChainCmd::Oracle { set, c, scan_translates } => {
            let (_, _, vs) = parse_vector_set(&read(set)?)?;
            let plain = longest_chain_oracle(&vs, *c)?;
            let scan = if *scan_translates { Some(best_translate_oracle(&vs, *c)?) } else { None };
            rep.record(
                "chain-oracle",
                json!({
                    "c": c, "longest": plain,
                    "best_translate": scan.as_ref().map(|(w, _)| w.to_string()),
                    "best_translate_longest": scan.as_ref().map(|(_, l)| l),
                }),
            );
            rep.header(&["c", "longest", "best_translate", "best_translate_longest"]);
            rep.row([
                c.to_string(),
                plain.to_string(),
                scan.as_ref().map(|(w, _)| w.to_string()).unwrap_or_default(),
                scan.as_ref().map(|(_, l)| l.to_string()).unwrap_or_default(),
            ]);
            rep.line(format!("longest {c}-increasing chain: {plain}"));
            if let Some((w, l)) = scan {
                rep.line(format!("best over translates: {l} (w={w})"));
            }
        }
    }
    Ok(())
}

fn shatter(action: &ShatterCmd, rep: &mut Report) -> Result<(), CliError> {
    match action {
        ShatterCmd::Find { set, c } => {
            let (field, ell, vs) = parse_vector_set(&read(set)?)?;
            let threshold = chains::shatter_threshold(field.q(), ell, *c);
            let distinct = vs.iter().collect::<std::collections::BTreeSet<_>>().len();
            match shatter_find(&vs, *c) {
                Some(w) => {
                    rep.record(
                        "shatter",
                        json!({ "q": field.q(), "ell": ell, "c": c, "set_size": distinct, "threshold": threshold.to_string(), "found": true, "coords": w.coords, "verified": w.verify(&vs) }),
                    );
                    rep.header(&["u", "v"]);
                    for (u, v) in &w.covering {
                        rep.row([u.clone(), v.clone()]);
                    }
                    rep.text = w.to_text();
                }
                None => {
                    rep.record(
                        "shatter",
                        json!({ "q": field.q(), "ell": ell, "c": c, "set_size": distinct, "threshold": threshold.to_string(), "found": false }),
                    );
                    rep.header(&["u", "v"]);
                    rep.line("none");
                }
            }
        }
        ShatterCmd::Verify { set, witness, coords } => {
            let (field, _, vs) = parse_vector_set(&read(set)?)?;
            let (coords, ok) = match (witness, coords) {
                (Some(path), _) => {
                    let w = ShatterWitness::from_text(&read(path)?)?;
                    let ok = w.q == field.q() && w.verify(&vs) && shatter_verify(&vs, &w.coords, field.q());
                    (w.coords, ok)
                }
                (None, Some(c)) => (c.clone(), shatter_verify(&vs, c, field.q())),
                (None, None) => unreachable!("clap requires --witness or --coords"),
            };
            rep.record("shatter-verify", json!({ "coords": coords, "valid": ok }));
            rep.header(&["coords", "valid"]);
            rep.row([format!("{coords:?}"), ok.to_string()]);
            rep.line(if ok { "valid" } else { "invalid" });
        }
    }
    Ok(())
}
