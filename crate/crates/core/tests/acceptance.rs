mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bondminer_core::measures::supports;
use bondminer_core::miner_gmjp::mine_with;
use bondminer_core::miner_opt::mine_opt_with;
use bondminer_core::oracle::{Families, Lattice};
use bondminer_core::representations::{
    self as reps, compactness_rate, derive, query, query_approx, query_mmaxcr, query_rfccp, BondInterval, ExactAnswer,
    MiningOutput,
};
use bondminer_core::rules::{
    classification_rules, evaluate, filter_igb, generate_generic_rules, majority_label, split_labeled, RulePairing,
};
use bondminer_core::{
    CondensedRepresentation, Item, MinSupport, PatternRecord, RepresentationKind, Scenario, Thresholds, TransactionDb,
};
use common::{ids, random_db, random_thresholds, rec, sorted, toy, toy_thresholds};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_b0d0;
const CONTEXTS: usize = 200;
const THRESHOLDS_PER_CONTEXT: usize = 5;

enum Outcome {
    Pass(String),
    Fail(Vec<String>),
    Skip(String),
}

/// Collects mismatches, keeping the first few for the report.
#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    samples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.samples.len() < 8 {
                self.samples.push(what());
            }
        }
    }

    fn outcome(self, label: &str) -> Outcome {
        if self.failures == 0 {
            Outcome::Pass(format!("{} {label}", self.checks))
        } else {
            let mut v = vec![format!("{} of {} {label} failed", self.failures, self.checks)];
            v.extend(self.samples);
            Outcome::Fail(v)
        }
    }
}

fn rep(out: &MiningOutput) -> &CondensedRepresentation {
    out.representation().expect("condensed output")
}

fn toy_rcpr() -> CondensedRepresentation {
    let out = mine_with(&toy(), &toy_thresholds(), Scenario::Rcpr, 1).unwrap();
    rep(&out).clone()
}

fn running_example() -> Outcome {
    let db = toy();
    let th = toy_thresholds();
    let mut t = Tally::default();
    let fcp = sorted(vec![rec("B", 4, 4), rec("C", 4, 4), rec("E", 4, 4), rec("BE", 4, 4)]);
    let rcp = sorted(vec![
        rec("A", 3, 3),
        rec("D", 1, 1),
        rec("AB", 2, 5),
        rec("AC", 3, 4),
        rec("AD", 1, 3),
        rec("AE", 2, 5),
        rec("BC", 3, 5),
        rec("CD", 1, 4),
        rec("CE", 3, 5),
        rec("ABC", 2, 5),
        rec("ABE", 2, 5),
        rec("ACD", 1, 4),
        rec("ACE", 2, 5),
        rec("BCE", 3, 5),
        rec("ABCE", 2, 5),
    ]);
    let mrcp = sorted(vec![
        rec("A", 3, 3),
        rec("D", 1, 1),
        rec("AB", 2, 5),
        rec("AC", 3, 4),
        rec("AD", 1, 3),
        rec("AE", 2, 5),
        rec("BC", 3, 5),
        rec("CD", 1, 4),
        rec("CE", 3, 5),
    ]);
    let crcp = sorted(vec![
        rec("A", 3, 3),
        rec("D", 1, 1),
        rec("AC", 3, 4),
        rec("AD", 1, 3),
        rec("ACD", 1, 4),
        rec("BCE", 3, 5),
        rec("ABCE", 2, 5),
    ]);
    let maxcrcp = sorted(vec![rec("ACD", 1, 4), rec("ABCE", 2, 5)]);
    let minmrcp = sorted(vec![rec("A", 3, 3), rec("D", 1, 1), rec("BC", 3, 5), rec("CE", 3, 5)]);
    let fccp = sorted(vec![rec("C", 4, 4), rec("BE", 4, 4)]);

    for (name, miner) in [("gmjp", mine_with as Miner), ("opt", mine_opt_with as Miner)] {
        let run = |s| miner(&db, &th, s, 1).unwrap();
        let got = run(Scenario::Fcp);
        t.check(got.records() == fcp, || format!("{name} FCP {:?}", got.records()));
        let got = run(Scenario::Rcp);
        t.check(got.records() == rcp, || format!("{name} RCP {:?}", got.records()));
        let got = run(Scenario::Rcpr);
        let r = rep(&got);
        t.check(r.minimal_part == mrcp, || format!("{name} MRCP {:?}", r.minimal_part));
        t.check(r.closed_part == crcp, || format!("{name} CRCP {:?}", r.closed_part));
        t.check(r.distinct_count() == 12, || format!("{name} RCPR distinct {}", r.distinct_count()));
        let mm = derive(RepresentationKind::MMaxCr, r).unwrap();
        t.check(mm.closed_part == maxcrcp, || format!("{name} MaxCRCP {:?}", mm.closed_part));
        let mn = derive(RepresentationKind::MinMcr, r).unwrap();
        t.check(mn.minimal_part == minmrcp, || format!("{name} MinMRCP {:?}", mn.minimal_part));
        let both = derive(RepresentationKind::MinMMaxCr, r).unwrap();
        t.check(both.distinct_count() == 6, || format!("{name} MinMMaxCR distinct {}", both.distinct_count()));
        let got = run(Scenario::Rfccp);
        t.check(rep(&got).closed_part == fccp, || format!("{name} RFCCP {:?}", rep(&got).closed_part));
    }
    t.outcome("listing checks")
}

type Miner = fn(&TransactionDb, &Thresholds, Scenario, usize) -> bondminer_core::Result<MiningOutput>;

fn exact_answer(r: &PatternRecord, t: u64) -> ExactAnswer {
    ExactAnswer {
        record: r.clone(),
        neg: t - r.disj,
    }
}

fn query_fidelity() -> Outcome {
    let rcpr = toy_rcpr();
    let mut t = Tally::default();
    let got = query(&rcpr, &ids("ACE")).unwrap();
    t.check(got == Some(exact_answer(&rec("ACE", 2, 5), 5)), || format!("query(ACE) = {got:?}"));
    let got = query(&rcpr, &ids("BE")).unwrap();
    t.check(got.is_none(), || format!("query(BE) = {got:?}"));

    let mmaxcr = derive(RepresentationKind::MMaxCr, &rcpr).unwrap();
    let got = query_mmaxcr(&mmaxcr, &ids("ABE")).unwrap();
    t.check(
        got.as_ref().map(|a| (a.record.conj, a.record.bond)) == Some((2, Ratio::new(2, 5))),
        || format!("query_mmaxcr(ABE) = {got:?}"),
    );

    let minmmaxcr = derive(RepresentationKind::MinMMaxCr, &rcpr).unwrap();
    let got = query_approx(&minmmaxcr, &ids("ABE")).unwrap();
    let expected = BondInterval {
        conj_lo: 2,
        conj_hi: 3,
        disj_lo: 5,
        disj_hi: 5,
        bond_lo: Ratio::new(2, 5),
        bond_hi: Ratio::new(3, 5),
    };
    t.check(got == Some(expected), || {
        format!(
            "query_approx(ABE): expected conj=[2,3] disj=[5,5] bond=[2/5,3/5], got {}",
            got.map_or("none".to_string(), |iv| reps::Answer::RareCorrelatedWithin(iv).to_string())
        )
    });

    let regenerated = reps::regenerate_rcp(&rcpr).unwrap();
    let rcp = mine_with(&toy(), &toy_thresholds(), Scenario::Rcp, 1).unwrap();
    t.check(regenerated.len() == 15 && regenerated == rcp.records(), || {
        format!("regenerate_rcp gave {} records", regenerated.len())
    });
    t.outcome("query checks")
}

/// Everything the random sweep measures, split per criterion.
#[derive(Default)]
struct Sweep {
    oracle: Tally,
    closure: Tally,
    sizes: Tally,
}

fn compare(t: &mut Tally, ctx: &str, what: &str, got: &[PatternRecord], want: &[PatternRecord]) {
    t.check(got == want, || {
        format!("{ctx}: {what} has {} records, oracle {}", got.len(), want.len())
    });
}

fn check_miners(t: &mut Tally, ctx: &str, db: &TransactionDb, th: &Thresholds, f: &Families) {
    for (name, miner) in [("gmjp", mine_with as Miner), ("opt", mine_opt_with as Miner)] {
        for s in Scenario::ALL {
            let out = miner(db, th, s, 2).unwrap();
            let tag = format!("{name} {}", s.name());
            match s {
                Scenario::Fcp => compare(t, ctx, &tag, out.records(), &f.fcp),
                Scenario::Rcp => compare(t, ctx, &tag, out.records(), &f.rcp),
                Scenario::Rcpr => {
                    compare(t, ctx, &format!("{tag} minimal"), &rep(&out).minimal_part, &f.mrcp);
                    compare(t, ctx, &format!("{tag} closed"), &rep(&out).closed_part, &f.crcp);
                }
                Scenario::Rfccp => {
                    compare(t, ctx, &format!("{tag} generators"), &rep(&out).generators, &f.fmcp);
                    compare(t, ctx, &format!("{tag} closed"), &rep(&out).closed_part, &f.fccp);
                }
            }
        }
    }
}

fn check_queries(t: &mut Tally, ctx: &str, lattice: &Lattice, th: &Thresholds, rcpr: &CondensedRepresentation, rfccp: &CondensedRepresentation) {
    let mmaxcr = derive(RepresentationKind::MMaxCr, rcpr).unwrap();
    let minmcr = derive(RepresentationKind::MinMcr, rcpr).unwrap();
    let minmmaxcr = derive(RepresentationKind::MinMMaxCr, rcpr).unwrap();
    let n = lattice.transaction_count();
    for mask in lattice.masks() {
        let x = lattice.itemset(mask);
        let truth = lattice.record(mask);
        let rare = lattice.is_rare_correlated(mask, th).then(|| exact_answer(&truth, n));
        let a = query(rcpr, &x).unwrap();
        t.check(a == rare, || format!("{ctx}: RCPR query {x:?} = {a:?}, truth {rare:?}"));
        let a = query(&minmcr, &x).unwrap();
        t.check(a == rare, || format!("{ctx}: MinMCR query {x:?} = {a:?}, truth {rare:?}"));
        let a = query_mmaxcr(&mmaxcr, &x).unwrap();
        t.check(a == rare, || format!("{ctx}: MMaxCR query {x:?} = {a:?}, truth {rare:?}"));
        let iv = query_approx(&minmmaxcr, &x).unwrap();
        let ok = match (&iv, &rare) {
            (Some(iv), Some(_)) => iv.contains(&truth),
            (None, None) => true,
            _ => false,
        };
        t.check(ok, || format!("{ctx}: MinMMaxCR query {x:?} = {iv:?}, truth {truth:?}"));
        let frequent = (lattice.is_correlated(mask, th) && lattice.is_frequent(mask, th)).then(|| exact_answer(&truth, n));
        let a = query_rfccp(rfccp, &x).unwrap();
        t.check(a == frequent, || format!("{ctx}: RFCCP query {x:?} = {a:?}, truth {frequent:?}"));
    }
}

fn check_closure_laws(t: &mut Tally, rng: &mut ChaCha8Rng, ctx: &str, lattice: &Lattice) {
    let full = (1u32 << lattice.item_count()) - 1;
    for mask in lattice.masks() {
        let c = lattice.closure(mask);
        t.check(mask & !c == 0, || format!("{ctx}: extensivity fails on {:?}", lattice.itemset(mask)));
        t.check(lattice.closure(c) == c, || format!("{ctx}: idempotency fails on {:?}", lattice.itemset(mask)));
        let sup = mask | (rng.gen::<u32>() & full);
        t.check(c & !lattice.closure(sup) == 0, || {
            format!("{ctx}: isotony fails on {:?} below {:?}", lattice.itemset(mask), lattice.itemset(sup))
        });
        if lattice.conj(mask) > 0 {
            t.check(lattice.conj(c) == lattice.conj(mask) && lattice.disj(c) == lattice.disj(mask), || {
                format!("{ctx}: supports differ between {:?} and its closure", lattice.itemset(mask))
            });
        }
    }
}

fn check_sizes(t: &mut Tally, ctx: &str, rcpr: &CondensedRepresentation, rcp_len: usize) {
    let size = |k| derive(k, rcpr).unwrap().distinct_count();
    let (mm, mn, both) = (
        size(RepresentationKind::MMaxCr),
        size(RepresentationKind::MinMcr),
        size(RepresentationKind::MinMMaxCr),
    );
    let full = rcpr.distinct_count();
    t.check(both <= mm && both <= mn && mn <= full && mm <= full && full <= rcp_len, || {
        format!("{ctx}: MinMMaxCR {both}, MMaxCR {mm}, MinMCR {mn}, RCPR {full}, RCP {rcp_len}")
    });
}

fn sweep() -> (Sweep, Duration) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut s = Sweep::default();
    for c in 0..CONTEXTS {
        let db = random_db(&mut rng, 10, 25);
        let lattice = Lattice::build(&db).unwrap();
        check_closure_laws(&mut s.closure, &mut rng, &format!("context {c}"), &lattice);
        for k in 0..THRESHOLDS_PER_CONTEXT {
            let th = random_thresholds(&mut rng, &db);
            let ctx = format!("context {c} thresholds {k} ({} {})", th.minsupp, th.minbond);
            let f = lattice.families(&th);
            check_miners(&mut s.oracle, &ctx, &db, &th, &f);
            let rcpr = mine_opt_with(&db, &th, Scenario::Rcpr, 1).unwrap();
            let rfccp = mine_opt_with(&db, &th, Scenario::Rfccp, 1).unwrap();
            check_queries(&mut s.oracle, &ctx, &lattice, &th, rep(&rcpr), rep(&rfccp));
            check_sizes(&mut s.sizes, &ctx, rep(&rcpr), f.rcp.len());
        }
    }
    (s, started.elapsed())
}

fn size_chain(sizes: Tally) -> Outcome {
    let mut t = sizes;
    let rcpr = toy_rcpr();
    let rate = compactness_rate(rcpr.distinct_count(), 15).unwrap();
    t.check(rate == Ratio::new(1, 5), || format!("running-example compactness {rate}"));
    t.outcome("size and compactness checks")
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut contexts: Vec<(TransactionDb, Thresholds)> = vec![(toy(), toy_thresholds())];
    for _ in 0..12 {
        let db = random_db(&mut rng, 14, 60);
        let th = random_thresholds(&mut rng, &db);
        contexts.push((db, th));
    }
    let mut t = Tally::default();
    for (c, (db, th)) in contexts.iter().enumerate() {
        for (name, miner) in [("gmjp", mine_with as Miner), ("opt", mine_opt_with as Miner)] {
            for s in Scenario::ALL {
                let reference = miner(db, th, s, 1).unwrap().to_file_string();
                for workers in [1, 2, 8] {
                    for run in 0..3 {
                        let got = miner(db, th, s, workers).unwrap().to_file_string();
                        t.check(got == reference, || {
                            format!("context {c} {name} {} workers {workers} run {run} differs", s.name())
                        });
                    }
                }
            }
        }
    }
    t.outcome("repeated runs byte-identical")
}

fn mushroom() -> Outcome {
    let Ok(path) = std::env::var("BONDMINER_MUSHROOM") else {
        return Outcome::Skip("set BONDMINER_MUSHROOM to a mushroom.dat path".into());
    };
    let db = TransactionDb::load_fimi(&path).unwrap();
    let n = db.transaction_count() as u64;
    let th = |pct: u64| {
        let minsupp = MinSupport::Relative(Ratio::new(pct, 100)).resolve(n).unwrap();
        Thresholds::new(minsupp, Ratio::new(15, 100)).unwrap()
    };
    let mut t = Tally::default();
    let mut counts = Vec::new();
    let mut expect = |name: &str, got: usize, want: usize| {
        counts.push(format!("{name}={got}"));
        t.check(got == want, || format!("{name}: got {got}, expected {want}"));
    };

    let th35 = th(35);
    let rcpr = mine_opt_with(&db, &th35, Scenario::Rcpr, 8).unwrap();
    let r = rep(&rcpr);
    expect("35% RCPR", r.distinct_count(), 1810);
    expect("35% MRCP", r.minimal_part.len(), 1412);
    expect("35% CRCP", r.closed_part.len(), 652);
    expect("35% RCP", reps::regenerate_rcp(r).unwrap().len(), 100_156);

    let th30 = th(30);
    expect("30% FCP", mine_opt_with(&db, &th30, Scenario::Fcp, 8).unwrap().records().len(), 2701);
    expect("30% FCCP", rep(&mine_opt_with(&db, &th30, Scenario::Rfccp, 8).unwrap()).closed_part.len(), 427);
    let rcpr = mine_opt_with(&db, &th30, Scenario::Rcpr, 8).unwrap();
    expect("30% RCP", reps::regenerate_rcp(rep(&rcpr)).unwrap().len(), 98_566);
    expect("30% RCPR", rep(&rcpr).distinct_count(), 1704);

    match t.outcome("counts") {
        Outcome::Pass(_) => Outcome::Pass(counts.join(" ")),
        Outcome::Fail(mut v) => {
            v.push(counts.join(" "));
            Outcome::Fail(v)
        }
        skip => skip,
    }
}

fn rules() -> Outcome {
    let db = toy();
    let rcpr = toy_rcpr();
    let mut t = Tally::default();
    for pairing in [RulePairing::ContainingClosures, RulePairing::OwnClosure] {
        for minconf in [Ratio::new(1, 5), Ratio::new(1, 2), Ratio::new(1, 1)] {
            let generic = generate_generic_rules(&rcpr, minconf, pairing).unwrap();
            for r in &generic {
                let whole = supports(&db, &r.closed()).unwrap();
                let premise = supports(&db, &r.premise).unwrap();
                t.check(
                    r.support == whole.conj && r.confidence == Ratio::new(whole.conj, premise.conj) && r.confidence >= minconf,
                    || format!("rule {r} does not re-verify"),
                );
            }
            let igb = filter_igb(&generic);
            t.check(filter_igb(&igb) == igb, || format!("IGB filter not idempotent at {minconf}"));
            for r in &generic {
                let closed = r.closed();
                t.check(igb.iter().any(|k| k.closed() == closed), || {
                    format!("IGB filter emptied closure {closed:?} at {minconf}")
                });
            }
        }
    }

    let rows: Vec<Vec<Item>> = vec![
        vec![1, 3, 100],
        vec![1, 4, 100],
        vec![1, 100],
        vec![2, 3, 200],
        vec![2, 4, 200],
        vec![2, 200],
    ];
    let fixture = TransactionDb::from_transactions(rows.clone()).unwrap();
    let th = Thresholds::new(2, Ratio::new(1, 5)).unwrap();
    let out = mine_with(&fixture, &th, Scenario::Rfccp, 1).unwrap();
    let generic = generate_generic_rules(rep(&out), Ratio::new(1, 2), RulePairing::default()).unwrap();
    let class_rules = classification_rules(&filter_igb(&generic), &[100, 200]).unwrap();
    let (labeled, _) = split_labeled(&rows, &[100, 200]);
    let default = majority_label(labeled.iter().map(|(_, l)| *l)).unwrap();
    let eval = evaluate(&class_rules, &labeled, default);
    t.check(eval.accuracy() == Ratio::from_integer(1), || {
        format!("separable fixture accuracy {}", eval.accuracy())
    });
    t.outcome("rule checks")
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let started = Instant::now();
    let outcome = f();
    let elapsed = started.elapsed();
    (over_budget(outcome, elapsed, budget), elapsed)
}

fn over_budget(outcome: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    match outcome {
        Outcome::Pass(_) if elapsed > budget => Outcome::Fail(vec![format!("took {elapsed:?}, budget {budget:?}")]),
        o => o,
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut results: Vec<(u8, &str, Outcome, Duration)> = Vec::new();

    let (o, d) = timed(secs(1), running_example);
    results.push((1, "running-example exactness", o, d));
    let (o, d) = timed(secs(1), query_fidelity);
    results.push((2, "query and regeneration fidelity", o, d));

    let (s, d) = sweep();
    results.push((3, "oracle equivalence", over_budget(s.oracle.outcome("oracle checks"), d, secs(300)), d));
    results.push((4, "closure laws", s.closure.outcome("closure law checks"), d));
    let (o, d5) = timed(secs(60), || size_chain(s.sizes));
    results.push((5, "size chain and compactness", o, d + d5));

    let (o, d) = timed(secs(120), determinism);
    results.push((6, "miner determinism", o, d));
    let (o, d) = timed(secs(1800), mushroom);
    results.push((7, "mushroom counts", o, d));
    let (o, d) = timed(secs(60), rules);
    results.push((8, "rules", o, d));

    let mut failed = 0;
    for (n, title, outcome, d) in &results {
        match outcome {
            Outcome::Pass(msg) => println!("criterion {n} PASS {title}: {msg} ({:.2}s)", d.as_secs_f64()),
            Outcome::Skip(msg) => println!("criterion {n} SKIP {title}: {msg}"),
            Outcome::Fail(lines) => {
                failed += 1;
                println!("criterion {n} FAIL {title}: {} ({:.2}s)", lines[0], d.as_secs_f64());
                for l in &lines[1..] {
                    println!("    {l}");
                }
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
