//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! and timings. Every tolerance here is exact; the seeded generators make
//! each case reproducible from the printed seed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heegaard::diagram::{
    destabilize, diagram_from_json, diagram_to_json, diagrams_isomorphic, dual_cell_counts,
    enumerate_anchors, find_destabilizable_pairs, good_to_great, handle_slide, stabilize,
    HeegaardDiagram, SlideSpec, SystemClass,
};
use heegaard::search::{
    pachner_path, unstabilize_search, verify_unstabilize_trace, Budget, PachnerOutcome,
    UnstabilizeOutcome,
};
use heegaard::tricomplex::{
    flip, flip_sites, flip_with_inverse, isomorphic, parse_tri, write_tri, FlipKind, FlipSite,
    Triangulation,
};
use heegaard::waldhausen::{verify_run, wald_pipeline, ConfigBuilder, Verdict};

const KINDS: [FlipKind; 4] = [
    FlipKind::OneFour,
    FlipKind::TwoThree,
    FlipKind::ThreeTwo,
    FlipKind::FourOne,
];

fn random_site(t: &Triangulation, rng: &mut ChaCha8Rng) -> Option<FlipSite> {
    let mut all = Vec::new();
    for kind in KINDS {
        all.extend(flip_sites(t, kind));
    }
    if all.is_empty() {
        None
    } else {
        Some(all[rng.random_range(0..all.len())])
    }
}

/// Random slide of one w-curve over another; `ordered` restricts to moving
/// a higher index over a lower one, which preserves goodness under the
/// identity witness.
fn random_slide(
    d: &HeegaardDiagram,
    rng: &mut ChaCha8Rng,
    ordered: bool,
) -> Option<HeegaardDiagram> {
    let g = d.w_count();
    if g < 2 {
        return None;
    }
    for _ in 0..8 {
        let (l, k) = if ordered {
            let k = rng.random_range(0..g - 1);
            let l = rng.random_range(k + 1..g);
            (l, k)
        } else {
            let l = rng.random_range(0..g);
            let k = (l + 1 + rng.random_range(0..g - 1)) % g;
            (l, k)
        };
        let anchors = enumerate_anchors(d, l, k);
        if anchors.is_empty() {
            continue;
        }
        let anchor = anchors[rng.random_range(0..anchors.len())].clone();
        if let Ok(next) = handle_slide(
            d,
            &SlideSpec {
                moving: l,
                over: k,
                anchor,
            },
        ) {
            return Some(next);
        }
    }
    None
}

#[test]
fn acceptance_1_genus_bookkeeping() {
    let start = Instant::now();
    let cases = 1000;
    for case in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + case);
        let mut t = Triangulation::boundary_four_simplex();
        let mut expected: i64 = 6;
        let len = rng.random_range(0..=20);
        for _ in 0..len {
            let site = random_site(&t, &mut rng).expect("some flip always applies");
            t = flip(&t, site).unwrap_or_else(|e| panic!("seed {}: {e}", 1_000 + case));
            let rep = t.validate();
            assert!(
                rep.valid(),
                "seed {}: intermediate invalid:\n{}",
                1_000 + case,
                rep.render_text()
            );
            expected += site.kind().genus_delta();
            let genus = t.associated_genus().unwrap() as i64;
            assert_eq!(genus, expected, "seed {}: genus mismatch", 1_000 + case);
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 1 exceeded 60 s: {elapsed:?}"
    );
    println!(
        "acceptance 1 (genus bookkeeping): PASS - {cases}/{cases} sequences exact in {:.1?}",
        elapsed
    );
}

#[test]
fn acceptance_2_pachner_desk_scale() {
    let start = Instant::now();
    let cases = 200u64;
    let base = Triangulation::boundary_four_simplex();
    for case in 0..cases {
        let seed = 2_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scrambled = base.clone();
        for _ in 0..4 {
            let site = random_site(&scrambled, &mut rng).unwrap();
            scrambled = flip(&scrambled, site).unwrap();
        }
        match pachner_path(&base, &scrambled, Budget::default(), 1)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"))
        {
            PachnerOutcome::Found(path) => {
                // independent replay check on top of the search's own
                let mut cur = base.clone();
                for mv in &path.moves {
                    cur = flip(&cur, mv.site).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                }
                assert!(
                    isomorphic(&cur, &scrambled),
                    "seed {seed}: replay missed the target"
                );
            }
            PachnerOutcome::NotFound(stats) => {
                panic!("seed {seed}: no path within default budget ({stats:?})")
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "criterion 2 exceeded 5 min: {elapsed:?}"
    );
    println!(
        "acceptance 2 (flip-path desk scale): PASS - {cases}/{cases} scrambles reconnected in {:.1?}",
        elapsed
    );
}

#[test]
fn acceptance_3_good_to_great_replay() {
    let start = Instant::now();
    let cases = 500u64;
    for case in 0..cases {
        let seed = 3_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rng.random_range(1..=4usize);
        let mut d = HeegaardDiagram::standard_s3(g);
        let slides = rng.random_range(0..=4usize);
        for _ in 0..slides {
            if let Some(next) = random_slide(&d, &mut rng, true) {
                d = next;
            }
        }
        let witness: Vec<usize> = (0..g).collect();
        assert!(
            d.intersection_matrix().is_unit_upper_triangular_under(&witness),
            "seed {seed}: generator left the identity witness"
        );
        let before = d.crossing_count() as i64;
        let (great, trace) =
            good_to_great(&d, &witness).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(
            great.intersection_matrix().is_identity(),
            "seed {seed}: result is not great"
        );
        assert!(
            trace.all_checks_pass(),
            "seed {seed}: a slide check failed"
        );
        let mut last = before;
        for step in &trace.steps {
            assert!(
                step.measure_after[0] < step.measure_before[0],
                "seed {seed}: crossing count did not strictly decrease"
            );
            assert_eq!(step.measure_before[0], last, "seed {seed}: measures skip");
            last = step.measure_after[0];
        }
        assert!(trace.len() <= (before as usize).saturating_sub(g), "seed {seed}: too many slides");
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance 3 (good-to-great replay): PASS - {cases}/{cases} normalizations strict in {:.1?}",
        elapsed
    );
}

#[test]
fn acceptance_4_unstabilize_desk_scale() {
    let start = Instant::now();
    let cases = 500u64;
    for case in 0..cases {
        let seed = 4_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = HeegaardDiagram::standard_s3(0);
        let stabs = rng.random_range(0..=6usize);
        for _ in 0..stabs {
            d = stabilize(&d);
        }
        let slides = rng.random_range(0..=15usize);
        for _ in 0..slides {
            if let Some(next) = random_slide(&d, &mut rng, false) {
                d = next;
            }
        }
        match unstabilize_search(&d, Budget::default())
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"))
        {
            UnstabilizeOutcome::Found(trace) => {
                verify_unstabilize_trace(&d, &trace)
                    .unwrap_or_else(|e| panic!("seed {seed}: replay failed: {e}"));
            }
            UnstabilizeOutcome::NotFound(stats) => {
                panic!("seed {seed}: not reduced within default budget ({stats:?})")
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance 4 (unstabilize desk scale): PASS - {cases}/{cases} reductions replay-verified in {:.1?}",
        elapsed
    );
}

#[test]
fn acceptance_5_dual_construction() {
    let start = Instant::now();
    // corpus: the standard filling diagram plus every filling diagram met
    // along seeded slide walks
    let mut corpus: Vec<HeegaardDiagram> = vec![HeegaardDiagram::standard_s3(1)];
    for case in 0..300u64 {
        let seed = 5_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rng.random_range(1..=4usize);
        let mut d = HeegaardDiagram::standard_s3(g);
        for _ in 0..rng.random_range(1..=5usize) {
            if let Some(next) = random_slide(&d, &mut rng, false) {
                d = next;
            }
            if d.validate().filling == Some(true) {
                corpus.push(d.clone());
            }
        }
    }
    assert!(corpus.len() > 100, "corpus too small: {}", corpus.len());
    for d in &corpus {
        let n = d.crossing_count();
        let c = dual_cell_counts(d).expect("filling diagram");
        assert_eq!(c.vertices, 2);
        assert_eq!(c.edges, n + 2);
        assert_eq!(c.faces, 2 * n);
        assert_eq!(c.tetrahedra, n);
        assert_eq!(c.alternating_sum(), 0);
    }
    // non-filling diagrams are rejected
    assert!(dual_cell_counts(&HeegaardDiagram::standard_s3(3)).is_err());
    let elapsed = start.elapsed();
    println!(
        "acceptance 5 (dual construction): PASS - {} filling diagrams exact in {:.1?}",
        corpus.len(),
        elapsed
    );
}

#[test]
fn acceptance_6_reduction_engine() {
    let start = Instant::now();
    let cases = 400u64;
    let mut genus_zero = 0usize;
    let mut contradictions = 0usize;
    for case in 0..cases {
        let seed = 6_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(0..=5usize);
        let m = rng.random_range(0..=n);
        let arcs = if m > 0 { rng.random_range(0..=3usize) } else { 0 };
        let circles = if m > 0 { rng.random_range(0..=3usize) } else { 0 };
        let config = ConfigBuilder::new(n, m)
            .seed(seed)
            .random_arcs(arcs)
            .random_circles(circles)
            .build()
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let (_, trace, verdict) =
            wald_pipeline(&config).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        match verdict {
            Verdict::GenusZeroReached => genus_zero += 1,
            Verdict::StabilizationContradiction => contradictions += 1,
        }
        assert!(trace.all_checks_pass(), "seed {seed}: a runtime check failed");
        for step in &trace.steps {
            let op = step.mv["op"].as_str().unwrap();
            match op {
                // reduction steps: the lexicographic pair (n, meetings)
                "bigon_surgery" | "y_slide" | "case1_swap" => {
                    assert!(
                        step.measure_after < step.measure_before,
                        "seed {seed}: step {} did not decrease ({:?} -> {:?})",
                        step.step,
                        step.measure_before,
                        step.measure_after
                    );
                }
                // normalization: arcs strictly decrease; the terminal witness
                // step does not move
                "resolve_arc" => {
                    assert!(step.measure_after[0] < step.measure_before[0]);
                }
                "remove_circles" => {
                    assert_eq!(step.measure_after[0], 0);
                }
                "case2_enlarge" => {}
                other => panic!("seed {seed}: unexpected op {other}"),
            }
        }
        verify_run(&config, &trace).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance 6 (reduction engine): PASS - {cases}/{cases} runs verified \
         ({genus_zero} genus-zero, {contradictions} stabilization verdicts) in {:.1?}",
        elapsed
    );
}

#[test]
fn acceptance_7_round_trips_and_inverses() {
    let start = Instant::now();
    let cases = 1000u64;
    for case in 0..cases {
        let seed = 7_000 + case;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // triangulation side: scramble, round-trip the text, flip and invert
        let mut t = Triangulation::boundary_four_simplex();
        for _ in 0..rng.random_range(0..=5usize) {
            if let Some(site) = random_site(&t, &mut rng) {
                t = flip(&t, site).unwrap();
            }
        }
        let text = write_tri(&t);
        let back = parse_tri(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(back, t, "seed {seed}: text round trip changed the value");
        assert_eq!(write_tri(&back), text, "seed {seed}: text not canonical");
        if let Some(site) = random_site(&t, &mut rng) {
            let (flipped, inverse) = flip_with_inverse(&t, site).unwrap();
            let restored = flip(&flipped, inverse).unwrap();
            assert!(
                isomorphic(&restored, &t),
                "seed {seed}: flip inverse is not the identity up to isomorphism"
            );
        }
        // diagram side: scramble, round-trip the JSON, stabilize/destabilize
        let mut d = HeegaardDiagram::standard_s3(rng.random_range(0..=3usize));
        for _ in 0..rng.random_range(0..=3usize) {
            if let Some(next) = random_slide(&d, &mut rng, false) {
                d = next;
            }
        }
        let json = diagram_to_json(&d);
        let back = diagram_from_json(&json).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(back, d, "seed {seed}: json round trip changed the value");
        assert_eq!(diagram_to_json(&back), json, "seed {seed}: json not canonical");
        let up = stabilize(&d);
        let fresh = up.genus() - 1;
        assert!(find_destabilizable_pairs(&up).contains(&fresh));
        let down = destabilize(&up, fresh).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(
            diagrams_isomorphic(&down, &d),
            "seed {seed}: stabilize/destabilize is not the identity up to isomorphism"
        );
        // classification survives the round trip
        assert_eq!(
            d.classify_system().unwrap() == SystemClass::Great,
            back.classify_system().unwrap() == SystemClass::Great
        );
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance 7 (round trips and inverses): PASS - {cases}/{cases} cases bit-exact in {:.1?}",
        elapsed
    );
}
