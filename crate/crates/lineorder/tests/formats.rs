use lineorder::cert::{Body, Certificate, Outcome, Task};
use lineorder::core::bundle::{build_cayley_ball, certify_embedding};
use lineorder::core::gset::make_regular;
use lineorder::core::realization::embed_in_rationals;
use lineorder::core::GroupCtx;
use lineorder::doc::{GSetSpec, GroupDef};
use lineorder::job::{execute, Enumeration, OracleSpec, RelationSpec};
use lineorder::plot::{to_csv, to_svg};
use lineorder::{par, verify::verify, JobSpec};
use proptest::prelude::*;

fn named(name: &str) -> GroupDef {
    GroupDef::Named { name: name.into() }
}

fn job(task: Task, group: &str, radius: u32) -> JobSpec {
    let mut j = JobSpec::new(task, named(group));
    j.radius = Some(radius);
    j
}

/// A spread of jobs touching every task and body kind.
fn sample_jobs() -> Vec<JobSpec> {
    let mut jobs = Vec::new();
    for (g, r) in [("Z", 3), ("Z2", 2), ("K", 2), ("C3", 3)] {
        jobs.push(job(Task::ConeSearch, g, r));
    }
    let mut bi = job(Task::ConeSearch, "K", 1);
    bi.mode = Some(lineorder::core::oracle::Mode::Bi);
    jobs.push(bi);
    for g in ["C2", "S3"] {
        let mut j = job(Task::SearchOrder, g, 0);
        j.gset = Some(GSetSpec::Regular);
        jobs.push(j);
        let mut t = job(Task::SearchOrder, g, 0);
        t.gset = Some(GSetSpec::Trivial);
        jobs.push(t);
    }
    let mut explicit = job(Task::SearchOrder, "Z", 0);
    explicit.gset = Some(GSetSpec::Explicit {
        action: vec![vec![1, 2, 0]],
        truncated: false,
    });
    jobs.push(explicit);
    for g in ["Z", "F2", "K", "C3"] {
        jobs.push(job(Task::CheckAxioms, g, 1));
    }
    let mut pairs = job(Task::CheckAxioms, "Z", 1);
    pairs.relation = Some(RelationSpec::Pairs {
        pairs: vec![(0, 1), (1, 2)],
    });
    jobs.push(pairs);
    let mut ranking = job(Task::CheckAxioms, "Z", 1);
    ranking.relation = Some(RelationSpec::Ranking {
        ranking: vec![2, 0, 1],
    });
    jobs.push(ranking);
    let mut cone = job(Task::CheckAxioms, "Z", 2);
    cone.cone = Some(vec!["a".into(), "a^2".into()]);
    jobs.push(cone);
    let mut bad_cone = job(Task::CheckAxioms, "Z", 2);
    bad_cone.cone = Some(vec!["a".into(), "a^-2".into()]);
    jobs.push(bad_cone);
    for task in [Task::Embed, Task::Realize, Task::Witness, Task::BiWitness] {
        for (g, r) in [("Z", 2), ("F2", 2), ("K", 2), ("C3", 0), ("Z2", 1)] {
            jobs.push(job(task, g, r));
        }
    }
    let mut coset = job(Task::Witness, "S3", 0);
    coset.gset = Some(GSetSpec::Coset {
        subgroup: vec!["g1".into()],
    });
    jobs.push(coset);
    let mut by_cone = job(Task::Witness, "K", 2);
    by_cone.oracle = OracleSpec::Cone;
    jobs.push(by_cone);
    let mut no_cone = job(Task::Witness, "C4", 1);
    no_cone.oracle = OracleSpec::Cone;
    jobs.push(no_cone);
    let mut seeded = job(Task::Realize, "F2", 2);
    seeded.enumeration = Enumeration::Seeded { seed: 9 };
    jobs.push(seeded);
    jobs
}

#[test]
fn every_certificate_round_trips_through_verify() {
    for j in sample_jobs() {
        let cert = execute(&j).unwrap().certificate;
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        verify(&back).unwrap_or_else(|e| panic!("{:?} on {:?}: {e}", j.task, j.group));
    }
}

#[test]
fn identical_jobs_give_identical_bytes() {
    for j in sample_jobs() {
        let a = execute(&j).unwrap().certificate.to_json();
        let b = execute(&j).unwrap().certificate.to_json();
        assert_eq!(a, b);
        for threads in [2, 4] {
            let mut t = j.clone();
            t.threads = Some(threads);
            assert_eq!(execute(&t).unwrap().certificate.to_json(), a);
        }
    }
}

#[test]
fn expected_outcomes() {
    let outcome = |j: &JobSpec| execute(j).unwrap().certificate.outcome;
    assert_eq!(outcome(&job(Task::Witness, "Z", 2)), Outcome::Certified);
    assert_eq!(outcome(&job(Task::Witness, "C2", 0)), Outcome::Refuted);
    assert_eq!(outcome(&job(Task::Realize, "F2", 2)), Outcome::Passed);
    assert_eq!(outcome(&job(Task::Realize, "C3", 0)), Outcome::Refuted);
    assert_eq!(outcome(&job(Task::CheckAxioms, "C3", 0)), Outcome::Failed);
    assert_eq!(outcome(&job(Task::BiWitness, "K", 2)), Outcome::Refuted);
    let mut no_cone = job(Task::Witness, "C4", 1);
    no_cone.oracle = OracleSpec::Cone;
    let cert = execute(&no_cone).unwrap().certificate;
    assert_eq!(cert.outcome, Outcome::ImpossibleOnWindow);
    assert!(matches!(cert.result, Body::Cone(_)));
}

#[test]
fn unknown_fields_are_rejected_with_their_name() {
    let toml = "task = \"embed\"\ncolour = 1\n[group]\nbackend = \"free\"\nrank = 2\n";
    let err = JobSpec::parse(toml, false).unwrap_err().to_string();
    assert!(err.contains("colour"), "{err}");
    let json = r#"{"task": "embed", "group": {"backend": "free", "rank": 2, "extra": 0}}"#;
    let err = JobSpec::parse(json, true).unwrap_err().to_string();
    assert!(err.contains("extra"), "{err}");
    let json = r#"{"task": "embed", "group": {"backend": "free", "rank": 2}, "enumeration": {"policy": "seeded", "seed": 1, "x": 2}}"#;
    assert!(JobSpec::parse(json, true).is_err());

    let cert = execute(&job(Task::Witness, "Z", 1)).unwrap().certificate.to_json();
    let tampered = cert.replacen("\"verdict\"", "\"note\": 1,\n    \"verdict\"", 1);
    assert!(Certificate::from_json(&tampered).is_err());
}

#[test]
fn tampering_names_the_failed_check() {
    let check = |j: &JobSpec, edit: &dyn Fn(&mut serde_json::Value)| {
        let cert = execute(j).unwrap().certificate;
        let mut v = serde_json::to_value(&cert).unwrap();
        edit(&mut v);
        let bad: Certificate = serde_json::from_value(v).unwrap();
        verify(&bad).unwrap_err().check().map(String::from)
    };
    let w = job(Task::Witness, "Z", 2);
    // swapping the heights of the points 1 and -1 breaks the order
    let swapped = check(&w, &|v| {
        let hs = &mut v["result"]["placement"]["heights"];
        let (a, b) = (hs[1].clone(), hs[2].clone());
        hs[1] = b;
        hs[2] = a;
    });
    assert_eq!(swapped.as_deref(), Some("order"));
    // 1 -> 3/2 keeps the order but not the insertion rule
    let nudged = check(&w, &|v| {
        v["result"]["placement"]["heights"][1] = serde_json::json!({"num": "3", "den": "2"});
    });
    assert_eq!(nudged.as_deref(), Some("placement"));
    let verdict = check(&w, &|v| {
        v["result"]["verdict"] = serde_json::json!({"equal_heights": [0, 1]});
    });
    assert_eq!(verdict.as_deref(), Some("verdict"));
    let outcome = check(&w, &|v| v["outcome"] = serde_json::json!("refuted"));
    assert_eq!(outcome.as_deref(), Some("outcome"));
    let graph = check(&w, &|v| {
        v["result"]["graph"]["dropped"].as_array_mut().unwrap().pop();
    });
    assert_eq!(graph.as_deref(), Some("graph"));

    let cone = job(Task::ConeSearch, "Z", 3);
    let member = check(&cone, &|v| {
        v["result"]["members"][1] = serde_json::json!({"vector": [-2]});
    });
    assert_eq!(member.as_deref(), Some("closure"));

    let real = job(Task::Realize, "Z", 2);
    let map = check(&real, &|v| {
        v["result"]["maps"][0]["values"][2] = serde_json::json!({"num": "-1", "den": "2"});
    });
    assert_eq!(map.as_deref(), Some("equivariance"));
}

#[test]
fn integer_plots() {
    let out = execute(&job(Task::Witness, "Z", 2)).unwrap();
    let w = out.witness.unwrap();
    let csv = to_csv(&w);
    assert_eq!(csv.lines().filter(|l| l.starts_with("vertex,")).count(), 5);
    assert_eq!(csv.lines().filter(|l| l.starts_with("edge,")).count(), 4);
    assert!(!csv.lines().skip(1).any(|l| l.ends_with(",1")));
    let svg = to_svg(&w);
    assert_eq!(svg, to_svg(&execute(&job(Task::Witness, "Z", 2)).unwrap().witness.unwrap()));
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("class=\"edge\"").count(), 4);
}

#[test]
fn refuted_plots_mark_the_pair() {
    let w = execute(&job(Task::Witness, "C2", 0)).unwrap().witness.unwrap();
    let csv = to_csv(&w);
    let marked: Vec<&str> = csv.lines().filter(|l| l.starts_with("edge,") && l.ends_with(",1")).collect();
    assert_eq!(marked.len(), 2);
    assert_eq!(to_svg(&w).matches("edge crossing").count(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallel_verdict_matches_sequential(seed in 0u64..10_000, threads in 2usize..6, r in 1u32..4) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f2 = GroupCtx::free(2);
        let x = make_regular(&f2, r).unwrap();
        let mut rank: Vec<usize> = (0..x.len()).collect();
        rank.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let order: Vec<usize> = (0..x.len()).collect();
        let emb = embed_in_rationals(&order, |a, b| Some(rank[a].cmp(&rank[b]))).unwrap();
        let graph = build_cayley_ball(&x);
        let seq = certify_embedding(&graph, &emb).unwrap();
        let parallel = par::certify(&graph, &emb, threads).unwrap();
        prop_assert_eq!(seq.verdict, parallel.verdict);
    }
}
