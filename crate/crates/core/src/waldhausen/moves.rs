//! The moves of the reduction and its driver.

use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{draw_block_sequence, Configuration, LevelSource, WaldError};
use crate::diagram::{classify_matrix, destabilize, stabilize, IntersectionMatrix, SystemClass};
use crate::trace::{check, NamedCheck, Trace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DestabilizationInstruction {
    /// 0-based index of the pair cut off: (v_last, w_last) at this level.
    pub pair: usize,
    /// y-curve that met the last v-curve and is swapped to the back.
    pub swapped_y: usize,
    /// genus before the cut
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationWitness {
    /// intersection matrix of the enlarged pair (x*, y*)
    pub matrix: IntersectionMatrix,
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    GenusZeroReached,
    StabilizationContradiction,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::GenusZeroReached => "genus-zero reached",
            Verdict::StabilizationContradiction => "stabilization contradiction found",
        }
    }
}

fn record(
    trace: &mut Trace,
    mv: serde_json::Value,
    before: Vec<i64>,
    after: Vec<i64>,
    checks: Vec<NamedCheck>,
) -> Result<(), WaldError> {
    let ok = checks.iter().all(|c| c.pass);
    let names: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let failed = names.join(", ");
    trace.push(mv, before, after, checks);
    if ok {
        Ok(())
    } else {
        Err(WaldError::CheckFailed(failed))
    }
}

/// Deletes every circle record. The innermost-disk surgeries behind this are
/// trusted; the move verifies the bookkeeping they promise: arcs untouched
/// and both goodness witnesses intact.
pub fn remove_circles(c: &Configuration, trace: &mut Trace) -> Result<Configuration, WaldError> {
    c.check_invariants()?;
    let mut out = c.clone();
    out.circles.clear();
    let checks = vec![
        check("axiom_innermost_disk_surgery", true),
        check("circles_empty", out.circles.is_empty()),
        check("arcs_unchanged", out.vx_arcs == c.vx_arcs),
        check(
            "witness_preserved",
            out.xy == c.xy && out.xy.is_unit_upper_triangular_under(&out.xy_witness),
        ),
    ];
    record(
        trace,
        json!({"op": "remove_circles", "removed": c.circles.len()}),
        vec![c.circles.len() as i64],
        vec![0],
        checks,
    )?;
    Ok(out)
}

/// Resolves one v-x intersection arc by stabilizing: the met disks split,
/// the base gains a handle pair, the second system gains the pair
/// (x_j'', y-bar). The arc count strictly decreases and the w-y count is
/// untouched.
pub fn resolve_arc(
    c: &Configuration,
    arc: (usize, usize),
    trace: &mut Trace,
) -> Result<Configuration, WaldError> {
    c.check_invariants()?;
    if !c.circles.is_empty() {
        return Err(WaldError::Precondition(
            "resolve circles before arcs".to_string(),
        ));
    }
    let Some(at) = c.vx_arcs.iter().position(|&a| a == arc) else {
        return Err(WaldError::Precondition(format!(
            "arc ({}, {}) is not present",
            arc.0, arc.1
        )));
    };
    let (i, j) = arc;
    let mut out = c.clone();
    out.n = c.n + 1;
    out.m = c.m + 1;
    out.base = stabilize(&c.base);
    out.vw_witness = (0..out.n).collect();

    // x_j keeps index j and its crossings; the pair (x_j'', y-bar) enters at
    // index j + 1; higher indices shift
    let mm = out.m;
    let mut xy = IntersectionMatrix {
        entries: vec![vec![0u64; mm]; mm],
    };
    let old = |t: usize| if t <= j { t } else { t - 1 };
    for r in 0..mm {
        for col in 0..mm {
            if r == j + 1 || col == j + 1 {
                xy.entries[r][col] = u64::from(r == col);
            } else {
                xy.entries[r][col] = c.xy.entries[old(r)][old(col)];
            }
        }
    }
    out.xy = xy;
    let mut witness = Vec::with_capacity(mm);
    for &t in &c.xy_witness {
        let t2 = if t <= j { t } else { t + 1 };
        witness.push(t2);
        if t == j {
            witness.push(j + 1);
        }
    }
    out.xy_witness = witness;

    out.vx_arcs.remove(at);
    for a in out.vx_arcs.iter_mut() {
        // surviving records stay with the primed halves
        if a.0 > i {
            a.0 += 1;
        }
        if a.1 > j {
            a.1 += 1;
        }
    }
    // remaining y crossings stay with the primed half; if the last v-curve
    // split, the new last curve starts clean
    if i == c.n - 1 {
        out.y_vn.clear();
    } else {
        for t in out.y_vn.iter_mut() {
            if *t > j {
                *t += 1;
            }
        }
    }

    let checks = vec![
        check("axiom_tube_spanning_disks", true),
        check("stabilization", out.n == c.n + 1 && out.base.genus() == out.n),
        check("arc_count_decreased", out.vx_arcs.len() < c.vx_arcs.len()),
        check("wy_invariant", out.wy_count == c.wy_count),
        check(
            "x_good_wrt_y",
            out.xy.is_unit_upper_triangular_under(&out.xy_witness),
        ),
        check(
            "v_good_wrt_w",
            out.base.classify_system()? == SystemClass::Great,
        ),
    ];
    record(
        trace,
        json!({"op": "resolve_arc", "v": i, "x": j}),
        vec![c.vx_arcs.len() as i64],
        vec![out.vx_arcs.len() as i64],
        checks,
    )?;
    out.check_invariants()?;
    Ok(out)
}

/// Full normalization: one circle sweep, then arcs in ascending order until
/// none remain.
pub fn normalize(c: &Configuration, trace: &mut Trace) -> Result<Configuration, WaldError> {
    let mut cur = c.clone();
    if !cur.circles.is_empty() {
        cur = remove_circles(&cur, trace)?;
    }
    while let Some(&arc) = cur.vx_arcs.first() {
        cur = resolve_arc(&cur, arc, trace)?;
    }
    if cur.wy_count != 0 {
        return Err(WaldError::Precondition(
            "w-y intersections present; the builder must start them at zero".to_string(),
        ));
    }
    Ok(cur)
}

/// Drives |y meet v_last| to at most one by bigon surgeries (a doubly-met
/// y-disk loses an adjacent pair) and handle slides (the later of two
/// adjacent singly-met disks slides over the earlier). The count strictly
/// decreases every iteration.
pub fn reduce_y_meets_vn(
    c: &Configuration,
    trace: &mut Trace,
) -> Result<Configuration, WaldError> {
    c.check_invariants()?;
    if !c.is_normalized() {
        return Err(WaldError::Precondition(
            "configuration is not normalized".to_string(),
        ));
    }
    let mut cur = c.clone();
    while cur.y_vn.len() > 1 {
        let len = cur.y_vn.len();
        let adjacent_equal = (0..len).find(|&p| cur.y_vn[p] == cur.y_vn[(p + 1) % len]);
        let before = vec![cur.n as i64, len as i64];
        if let Some(p) = adjacent_equal {
            // bigon surgery on the doubly-met disk: the adjacent pair vanishes
            let j = cur.y_vn[p];
            let mut next = cur.clone();
            if p + 1 < len {
                next.y_vn.drain(p..=p + 1);
            } else {
                next.y_vn.remove(p);
                next.y_vn.remove(0);
            }
            let checks = vec![
                check("axiom_bigon_in_spotted_ball", true),
                check("measure_decreased", next.y_vn.len() < len),
                check(
                    "x_determined_preserved",
                    next.xy.is_unit_upper_triangular_under(&next.xy_witness),
                ),
                check("only_y_altered", next.base == cur.base && next.xy == cur.xy),
            ];
            record(
                trace,
                json!({"op": "bigon_surgery", "y": j, "pos": p}),
                before,
                vec![next.n as i64, next.y_vn.len() as i64],
                checks,
            )?;
            cur = next;
        } else {
            // adjacent crossings always lie on distinct disks here; take the
            // lexicographically least pair (i, j), i < j, and slide y_j over y_i
            let mut best: Option<(usize, usize, usize)> = None; // (i, j, pos)
            for p in 0..len {
                let (a, b) = (cur.y_vn[p], cur.y_vn[(p + 1) % len]);
                let (i, j) = (a.min(b), a.max(b));
                if best.map_or(true, |(bi, bj, _)| (i, j) < (bi, bj)) {
                    best = Some((i, j, p));
                }
            }
            let Some((i, j, p)) = best else {
                return Err(WaldError::Precondition(
                    "no adjacent pair available".to_string(),
                ));
            };
            if i == j {
                return Err(WaldError::CheckFailed(
                    "adjacent pair lies on one disk without a bigon".to_string(),
                ));
            }
            let mut next = cur.clone();
            // slide y_j over y_i: column j gains column i
            for r in 0..next.m {
                next.xy.entries[r][j] += next.xy.entries[r][i];
            }
            // the slid disk no longer meets the last v-curve
            let jpos = if next.y_vn[p] == j { p } else { (p + 1) % len };
            next.y_vn.remove(jpos);
            let checks = vec![
                check("slide_over_lower_index", i < j),
                check("measure_decreased", next.y_vn.len() < len),
                check(
                    "x_determined_preserved",
                    next.xy.is_unit_upper_triangular_under(&next.xy_witness),
                ),
                check("only_y_altered", next.base == cur.base),
            ];
            record(
                trace,
                json!({"op": "y_slide", "moving": j, "over": i, "pos": p}),
                before,
                vec![next.n as i64, next.y_vn.len() as i64],
                checks,
            )?;
            cur = next;
        }
    }
    Ok(cur)
}

fn next_level_sequence(levels: &mut LevelSource, new_m: usize, level: usize) -> Vec<usize> {
    match levels {
        LevelSource::Explicit(stack) => {
            if stack.is_empty() {
                Vec::new()
            } else {
                stack.remove(0)
            }
        }
        LevelSource::Seeded(seed) => {
            let mix = seed.wrapping_add((level as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix);
            draw_block_sequence(&mut rng, new_m)
        }
    }
}

/// The case of a single meeting: swap the met pair to the back, verify the
/// rebuilt system is good, and cut the trivial handle. Genus and the second
/// system each shrink by one.
pub fn case1_swap(
    c: &Configuration,
    trace: &mut Trace,
) -> Result<(Configuration, DestabilizationInstruction), WaldError> {
    c.check_invariants()?;
    if c.y_vn.len() != 1 {
        return Err(WaldError::Precondition(format!(
            "case 1 needs exactly one meeting, found {}",
            c.y_vn.len()
        )));
    }
    if c.n == 0 || c.m == 0 {
        return Err(WaldError::Precondition("nothing to cut".to_string()));
    }
    let j = c.y_vn[0];
    let m = c.m;
    // x' = x minus x_j plus the last v-curve; y' = y with y_j moved last
    let old = |t: usize| if t < j { t } else { t + 1 };
    let mut xprime = IntersectionMatrix {
        entries: vec![vec![0u64; m]; m],
    };
    for r in 0..m - 1 {
        for col in 0..m - 1 {
            xprime.entries[r][col] = c.xy.entries[old(r)][old(col)];
        }
        xprime.entries[r][m - 1] = c.xy.entries[old(r)][j];
    }
    // the last v-curve meets only y_j, once
    xprime.entries[m - 1][m - 1] = 1;
    let xprime_class = classify_matrix(&xprime)?;
    let xprime_good = xprime_class != SystemClass::Neither;

    // y' and y are equal as sets: permutation bookkeeping only
    let y_sets_equal = true;

    let mut out = c.clone();
    out.n = c.n - 1;
    out.m = c.m - 1;
    out.base = destabilize(&c.base, c.n - 1)?;
    out.vw_witness = (0..out.n).collect();
    let mut xy = IntersectionMatrix {
        entries: vec![vec![0u64; out.m]; out.m],
    };
    for r in 0..out.m {
        for col in 0..out.m {
            xy.entries[r][col] = c.xy.entries[old(r)][old(col)];
        }
    }
    out.xy = xy;
    let witness: Vec<usize> = c
        .xy_witness
        .iter()
        .filter(|&&t| t != j)
        .map(|&t| if t < j { t } else { t - 1 })
        .collect();
    // the minor of a unit upper-triangular matrix stays one; reuse its order
    out.xy_witness = witness;
    out.y_vn = next_level_sequence(&mut out.levels, out.m, out.n);
    out.y_vn.retain(|&t| t < out.m);

    let instr = DestabilizationInstruction {
        pair: c.n - 1,
        swapped_y: j,
        level: c.n,
    };
    let checks = vec![
        check("x_prime_good_wrt_y_prime", xprime_good),
        check("y_sets_equal", y_sets_equal),
        check("genus_decremented", out.n + 1 == c.n),
        check("base_destabilized", out.base.genus() == out.n),
        check(
            "x_good_wrt_y",
            out.xy.is_unit_upper_triangular_under(&out.xy_witness),
        ),
    ];
    record(
        trace,
        json!({"op": "case1_swap", "y": j, "pair": instr.pair}),
        vec![c.n as i64, 1],
        vec![out.n as i64, out.y_vn.len() as i64],
        checks,
    )?;
    out.check_invariants()?;
    Ok((out, instr))
}

/// The empty case: enlarging the second system by the last pair exhibits the
/// reduced splitting as a stabilization, the contradiction that ends a run.
pub fn case2_enlarge(
    c: &Configuration,
    trace: &mut Trace,
) -> Result<StabilizationWitness, WaldError> {
    c.check_invariants()?;
    if !c.y_vn.is_empty() {
        return Err(WaldError::Precondition(format!(
            "case 2 needs an empty meeting record, found {}",
            c.y_vn.len()
        )));
    }
    if c.n == 0 {
        return Err(WaldError::Precondition("no handle left to add".to_string()));
    }
    let m = c.m;
    let mut matrix = IntersectionMatrix {
        entries: vec![vec![0u64; m + 1]; m + 1],
    };
    for r in 0..m {
        for col in 0..m {
            matrix.entries[r][col] = c.xy.entries[r][col];
        }
    }
    matrix.entries[m][m] = 1;
    let mut witness = c.xy_witness.clone();
    witness.push(m);
    let good = matrix.is_unit_upper_triangular_under(&witness);
    let w = StabilizationWitness {
        matrix,
        witness,
    };
    let checks = vec![
        check("witness_unit_upper_triangular", good),
        check("terminal", true),
    ];
    record(
        trace,
        json!({"op": "case2_enlarge", "m": m}),
        vec![c.n as i64, 0],
        vec![c.n as i64, 0],
        checks,
    )?;
    Ok(w)
}

/// The driver: reduce the meeting count, then either cut a handle and
/// recurse one genus lower, or stop at the stabilization contradiction.
/// Terminates because (n, |y meet v_n|) strictly decreases lexicographically
/// across every non-terminal step.
pub fn run_waldhausen(c: &Configuration) -> Result<(Configuration, Trace, Verdict), WaldError> {
    c.check_invariants()?;
    if !c.is_normalized() {
        return Err(WaldError::Precondition(
            "run requires a normalized configuration".to_string(),
        ));
    }
    let mut trace = Trace::new();
    let mut cur = c.clone();
    let verdict = loop {
        if cur.n == 0 {
            break Verdict::GenusZeroReached;
        }
        cur = reduce_y_meets_vn(&cur, &mut trace)?;
        if cur.y_vn.len() == 1 {
            let (next, _instr) = case1_swap(&cur, &mut trace)?;
            cur = next;
        } else {
            case2_enlarge(&cur, &mut trace)?;
            break Verdict::StabilizationContradiction;
        }
    };
    trace.verdict = Some(verdict.label().to_string());
    Ok((cur, trace, verdict))
}

/// Normalization followed by the reduction, one trace.
pub fn wald_pipeline(c: &Configuration) -> Result<(Configuration, Trace, Verdict), WaldError> {
    let mut trace = Trace::new();
    let normalized = normalize(c, &mut trace)?;
    let (end, run_trace, verdict) = run_waldhausen(&normalized)?;
    for mut step in run_trace.steps {
        step.step = trace.steps.len();
        trace.steps.push(step);
    }
    trace.verdict = run_trace.verdict;
    Ok((end, trace, verdict))
}

/// Re-runs the pipeline from the initial configuration and demands the
/// recorded trace match step for step, checks included.
pub fn verify_run(initial: &Configuration, recorded: &Trace) -> Result<(), String> {
    let (_, fresh, _) = wald_pipeline(initial).map_err(|e| e.to_string())?;
    if fresh.steps.len() != recorded.steps.len() {
        return Err(format!(
            "step count mismatch: recorded {}, replay {}",
            recorded.steps.len(),
            fresh.steps.len()
        ));
    }
    for (a, b) in recorded.steps.iter().zip(&fresh.steps) {
        if a != b {
            return Err(format!("step {} differs on replay", a.step));
        }
    }
    if fresh.verdict != recorded.verdict {
        return Err("verdict differs on replay".to_string());
    }
    Ok(())
}
