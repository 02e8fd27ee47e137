//! Acceptance suite. Runs without the libtest harness so every criterion prints
//! one PASS/FAIL line; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdc::bench::{compile, phasor_circuit, random_phasor_circuit, verify_compiled, CompileOptions, GenSpec, Pipeline, WeightSpec};
use qdc::circuit::Instruction;
use qdc::passes::{compile_sections, push_cliffords, rotation_instruction};
use qdc::reduce::{
    eliminate_resets, emit_cap, emit_cup, emit_zag, reduce_clifford, reduce_phasor, SnakePlan, D_PHASOR,
    SNAKE_OVERHEAD,
};
use qdc::sim::{
    channel_equiv, default_inputs, pauli_matrix, random_state, run_static, state_expectation, unitary_of,
    z_distribution, zero_state, SimOptions, State,
};
use qdc::synth::{delete_trivial_prefix, drop_phase_layer, expectation_mode, is_lnn, synthesize_lnn, Downstream};
use qdc::{Circuit, CliffordGate, CliffordTableau, Pauli, PauliFrame, PauliRotation, PauliString};

type Outcome = Result<String, String>;

const TOL: f64 = 1e-9;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

// ---- random instances -------------------------------------------------------

fn random_gate(n: usize, rng: &mut ChaCha8Rng, adjacent_only: bool) -> CliffordGate {
    let a = rng.gen_range(0..n);
    let kinds = if n > 1 { 9 } else { 6 };
    let b = if adjacent_only {
        if a + 1 < n {
            a + 1
        } else {
            a.saturating_sub(1)
        }
    } else {
        (a + rng.gen_range(1..n.max(2))) % n
    };
    match rng.gen_range(0..kinds) {
        0 => CliffordGate::H(a),
        1 => CliffordGate::S(a),
        2 => CliffordGate::Sdg(a),
        3 => CliffordGate::X(a),
        4 => CliffordGate::Y(a),
        5 => CliffordGate::Z(a),
        6 => CliffordGate::CX(a, b),
        7 => CliffordGate::CZ(a, b),
        _ => CliffordGate::Swap(a, b),
    }
}

fn random_gates(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<CliffordGate> {
    (0..k).map(|_| random_gate(n, rng, false)).collect()
}

fn random_tableau(n: usize, rng: &mut ChaCha8Rng) -> CliffordTableau {
    CliffordTableau::from_gates(n, &random_gates(n, 12 * n, rng)).unwrap()
}

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    let ps: Vec<Pauli> = (0..n).map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)]).collect();
    PauliString::from_paulis(&ps)
}

fn random_nontrivial_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    loop {
        let p = random_pauli(n, rng);
        if !p.is_identity() {
            return p;
        }
    }
}

fn full_weight_pauli(w: usize, rng: &mut ChaCha8Rng) -> PauliString {
    let ps: Vec<Pauli> = (0..w).map(|_| [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]).collect();
    PauliString::from_paulis(&ps)
}

fn non_clifford_angle(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let a = rng.gen_range(-3.0..3.0);
        if !PauliRotation::new(PauliString::identity(1), a).unwrap().is_clifford() {
            return a;
        }
    }
}

fn random_rotations(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<PauliRotation> {
    (0..k)
        .map(|_| PauliRotation::new(random_nontrivial_pauli(n, rng), non_clifford_angle(rng)).unwrap())
        .collect()
}

fn rotations_circuit(n: usize, rs: &[PauliRotation]) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for r in rs {
        c.push(rotation_instruction(r)).unwrap();
    }
    c
}

fn max_diff(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

// ---- criteria ---------------------------------------------------------------

fn pauli_and_tableau() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for case in 0..500 {
        let n = rng.gen_range(1..=5);
        let mut p = random_pauli(n, &mut rng);
        p.set_phase(rng.gen_range(0..4));
        if case % 2 == 0 {
            let gates = random_gates(n, 4 * n, &mut rng);
            let t = CliffordTableau::from_gates(n, &gates).map_err(e)?;
            let u = unitary_of(&Circuit::from_clifford_gates(n, &gates).map_err(e)?).map_err(e)?;
            let dense = u.mul(&pauli_matrix(&p)).mul(&u.adjoint());
            let sym = pauli_matrix(&t.conjugate(&p).map_err(e)?);
            worst = worst.max(dense.max_abs_diff(&sym));
        } else {
            let mut q = random_pauli(n, &mut rng);
            q.set_phase(rng.gen_range(0..4));
            let dense = pauli_matrix(&p).mul(&pauli_matrix(&q));
            let sym = pauli_matrix(&p.multiply(&q).map_err(e)?);
            worst = worst.max(dense.max_abs_diff(&sym));
        }
    }
    ensure(worst < 1e-12, || format!("max entry error {worst:.2e}"))?;
    Ok(format!("500 cases, max entry error {worst:.1e}"))
}

fn random_static_circuit(n: usize, len: usize, pct: f64, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for _ in 0..len {
        if rng.gen_bool(pct / 100.0) {
            c.push(Instruction::from_clifford(random_gate(n, rng, false))).unwrap();
        } else if rng.gen_bool(0.5) {
            c.push(Instruction::rz(non_clifford_angle(rng), rng.gen_range(0..n))).unwrap();
        } else {
            let r = PauliRotation::new(random_nontrivial_pauli(n, rng), non_clifford_angle(rng)).unwrap();
            c.push(rotation_instruction(&r)).unwrap();
        }
    }
    c
}

fn push_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.gen_range(1..=4);
        let pct = [25.0, 50.0, 75.0][case % 3];
        let src = random_static_circuit(n, rng.gen_range(1..=25), pct, &mut rng);
        let pushed = push_cliffords(&compile_sections(&src).map_err(e)?).map_err(e)?;
        // V = U_src · U_phasors† must be the tail Clifford: compare its action on generators.
        let u_src = unitary_of(&src).map_err(e)?;
        let u_ph = unitary_of(&pushed.phasor_circuit().map_err(e)?).map_err(e)?;
        let v = u_src.mul(&u_ph.adjoint());
        for q in 0..n {
            for (gen, img) in [
                (PauliString::single(n, q, Pauli::X), pushed.tail.x_image(q)),
                (PauliString::single(n, q, Pauli::Z), pushed.tail.z_image(q)),
            ] {
                let dense = v.mul(&pauli_matrix(&gen)).mul(&v.adjoint());
                worst = worst.max(dense.max_abs_diff(&pauli_matrix(img)));
            }
        }
    }
    ensure(worst <= TOL, || format!("max deviation {worst:.2e}"))?;
    Ok(format!("100 circuits, max deviation {worst:.1e}"))
}

fn synthesis_round_trip() -> Outcome {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/synth_baseline.json"))
        .map_err(e)?;
    let baseline: serde_json::Value = serde_json::from_str(&text).map_err(e)?;
    let c2 = baseline["suffix_depth_per_qubit"].as_f64().ok_or("missing suffix_depth_per_qubit")?;
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut max_c2, mut max_c1) = (0.0f64, 0.0f64);
    for case in 0..100 {
        let n = 2 + case % 5;
        let t = random_tableau(n, &mut rng);
        let s = synthesize_lnn(&t).map_err(e)?;
        ensure(s.tableau().map_err(e)? == t, || format!("case {case}: tableau changed"))?;
        ensure(is_lnn(&s.prefix) && is_lnn(&s.suffix), || format!("case {case}: non-adjacent gate"))?;
        let ratio = s.suffix.depth() as f64 / n as f64;
        ensure(ratio <= c2, || format!("case {case}: suffix depth {} > {c2}·{n}", s.suffix.depth()))?;
        max_c2 = max_c2.max(ratio);
        max_c1 = max_c1.max(s.prefix.depth() as f64 / n as f64);
    }
    Ok(format!("100 tableaux, suffix depth/n ≤ {max_c2:.2} (baseline {c2}), prefix depth/n ≤ {max_c1:.2}"))
}

fn prefix_deletion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut worst_state, mut worst_tv) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let phasors = random_rotations(n, rng.gen_range(1..=5), &mut rng);
        let s = synthesize_lnn(&random_tableau(n, &mut rng)).map_err(e)?;
        let mut src = rotations_circuit(n, &phasors);
        src.append(&s.prefix).map_err(e)?;
        src.append(&s.suffix).map_err(e)?;
        let before = run_static(&src, &zero_state(n)).map_err(e)?;

        let (moved, suffix) = delete_trivial_prefix(&s, &phasors).map_err(e)?;
        let mut after = rotations_circuit(n, &moved);
        after.append(&suffix).map_err(e)?;
        worst_state = worst_state.max(max_diff(&before, &run_static(&after, &zero_state(n)).map_err(e)?));

        let dropped = drop_phase_layer(&s, Downstream::ZMeasurement).map_err(e)?;
        let (moved, suffix) = delete_trivial_prefix(&dropped, &phasors).map_err(e)?;
        let mut z = rotations_circuit(n, &moved);
        z.append(&suffix).map_err(e)?;
        let p = z_distribution(&before);
        let q = z_distribution(&run_static(&z, &zero_state(n)).map_err(e)?);
        let tv = 0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>();
        worst_tv = worst_tv.max(tv);
    }
    ensure(worst_state <= TOL, || format!("state deviation {worst_state:.2e}"))?;
    ensure(worst_tv <= TOL, || format!("TV distance {worst_tv:.2e}"))?;
    Ok(format!("50 instances, state deviation {worst_state:.1e}, TV {worst_tv:.1e}"))
}

fn expectation_value_mode() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let phasors = random_rotations(n, rng.gen_range(1..=5), &mut rng);
        let t = random_tableau(n, &mut rng);
        let s = synthesize_lnn(&t).map_err(e)?;
        let mut obs = random_nontrivial_pauli(n, &mut rng);
        if rng.gen_bool(0.5) {
            obs.set_phase(2);
        }
        let mut with_c = rotations_circuit(n, &phasors);
        with_c.append(&s.prefix).map_err(e)?;
        with_c.append(&s.suffix).map_err(e)?;
        let lhs = state_expectation(&run_static(&with_c, &zero_state(n)).map_err(e)?, &obs);
        let rewritten = expectation_mode(&t, &obs).map_err(e)?;
        let rhs = state_expectation(&run_static(&rotations_circuit(n, &phasors), &zero_state(n)).map_err(e)?, &rewritten);
        worst = worst.max((lhs - rhs).abs());
    }
    ensure(worst <= TOL, || format!("max |Δ⟨P⟩| {worst:.2e}"))?;
    Ok(format!("50 instances, max |Δ⟨P⟩| {worst:.1e}"))
}

fn attach(c: &mut Circuit, frame: &PauliFrame, target: usize) -> Result<(), String> {
    for (ex, p) in frame.terms() {
        c.push_post(ex.clone(), p.embed(c.num_qubits(), &[target]).map_err(e)?).map_err(e)?;
    }
    Ok(())
}

fn gadgets() -> Outcome {
    let id = Circuit::new(1, 0);
    let opts = SimOptions::default();
    let mut worst = 1.0f64;

    let mut tele = Circuit::new(3, 2);
    emit_cup(&mut tele, 1, 2).map_err(e)?;
    let fr = emit_cap(&mut tele, 0, 1, (0, 1)).map_err(e)?;
    attach(&mut tele, &fr, 2)?;
    tele.set_outputs(vec![2]).map_err(e)?;
    let r = channel_equiv(&tele, &id, &[0], &default_inputs(1, 61), TOL, &opts).map_err(e)?;
    ensure(r.equivalent && r.exhaustive, || format!("cup+cap: {r:?}"))?;
    worst = worst.min(r.worst_fidelity);

    let mut zag = Circuit::new(2, 1);
    let fr = emit_zag(&mut zag, 0, 1, 0).map_err(e)?;
    attach(&mut zag, &fr, 1)?;
    zag.set_outputs(vec![1]).map_err(e)?;
    let r = channel_equiv(&zag, &id, &[0], &default_inputs(1, 62), TOL, &opts).map_err(e)?;
    ensure(r.equivalent && r.exhaustive, || format!("zag: {r:?}"))?;
    worst = worst.min(r.worst_fidelity);

    // Ricochet on two Bell pairs: a gate on the first halves equals its transpose on the second.
    for g in [CliffordGate::CX(0, 1), CliffordGate::CX(1, 0), CliffordGate::CZ(0, 1), CliffordGate::S(0), CliffordGate::H(1)] {
        let mut bell = Circuit::new(4, 0);
        emit_cup(&mut bell, 0, 2).map_err(e)?;
        emit_cup(&mut bell, 1, 3).map_err(e)?;
        let mut left = bell.clone();
        left.push(Instruction::from_clifford(g)).map_err(e)?;
        let mut right = bell;
        right.push(Instruction::from_clifford(g.remap(&[2, 3, 0, 1]))).map_err(e)?;
        let d = max_diff(&run_static(&left, &zero_state(4)).map_err(e)?, &run_static(&right, &zero_state(4)).map_err(e)?);
        ensure(d < 1e-12, || format!("ricochet of {g:?}: deviation {d:.2e}"))?;
    }

    // Inside a snake, the middle column runs its chunk backward as transposed gates.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut hopped = 0;
    for _ in 0..10 {
        let gates: Vec<CliffordGate> = (0..12).map(|_| random_gate(2, &mut rng, true)).collect();
        let c = Circuit::from_clifford_gates(2, &gates).map_err(e)?;
        let f = reduce_clifford(&c, 3).map_err(e)?;
        let col1 = 2..4;
        hopped += f
            .circuit
            .instructions()
            .iter()
            .filter(|i| matches!(i, Instruction::Gate2 { a, b, .. } if col1.contains(a) && col1.contains(b)))
            .count();
        let r = channel_equiv(&f.circuit, &c, &f.inputs, &default_inputs(2, 63), TOL, &opts).map_err(e)?;
        ensure(r.equivalent, || format!("snake ricochet: {r:?}"))?;
        worst = worst.min(r.worst_fidelity);
    }
    ensure(hopped > 0, || "no two-qubit gate ran on the backward column".into())?;
    Ok(format!("cup+cap, zag, 5 ricochet identities, 10 snakes ({hopped} backward CX/CZ); min fidelity {worst:.12}"))
}

fn probe_inputs(n: usize, seed: u64) -> Vec<State> {
    if n <= 3 {
        return default_inputs(n, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![zero_state(n)];
    for _ in 0..4 {
        v.push(random_state(n, &mut rng));
    }
    v
}

fn phasor_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let opts = SimOptions::default();
    let mut worst = 1.0f64;
    let mut depths = BTreeSet::new();
    let mut w2_depths = BTreeSet::new();
    for w in 2..=6 {
        for _ in 0..20 {
            let r = PauliRotation::new(full_weight_pauli(w, &mut rng), non_clifford_angle(&mut rng)).unwrap();
            let f = reduce_phasor(&r, &SnakePlan::for_rotation(&r).map_err(e)?, &PauliFrame::new()).map_err(e)?;
            let rep = channel_equiv(&f.circuit, &rotations_circuit(w, &[r.clone()]), &f.inputs, &probe_inputs(w, w as u64), TOL, &opts)
                .map_err(e)?;
            ensure(rep.equivalent && rep.exhaustive, || format!("{}: {rep:?}", r.pauli()))?;
            worst = worst.min(rep.worst_fidelity);
            ensure(f.circuit.num_qubits() == 2 * w, || format!("{}: {} qubits", r.pauli(), f.circuit.num_qubits()))?;
            let d = f.circuit.depth();
            if w >= 3 {
                ensure(d == D_PHASOR, || format!("{}: depth {d} != {D_PHASOR}", r.pauli()))?;
                depths.insert(d);
            } else {
                ensure(d <= D_PHASOR, || format!("{}: depth {d} > {D_PHASOR}", r.pauli()))?;
                w2_depths.insert(d);
            }
        }
    }
    Ok(format!(
        "100 rotations, 2·w qubits, depth {depths:?} for w 3..6 and {w2_depths:?} ≤ {D_PHASOR} for w 2; min fidelity {worst:.12}"
    ))
}

fn chained_phasors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 1.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(2..=3);
        let rs = random_rotations(n, 3, &mut rng);
        let mut f = reduce_phasor(&rs[0], &SnakePlan::for_rotation(&rs[0]).map_err(e)?, &PauliFrame::new()).map_err(e)?;
        for r in &rs[1..] {
            f = eliminate_resets(&f, r, &SnakePlan::for_rotation(r).map_err(e)?).map_err(e)?;
        }
        ensure(f.circuit.count_resets() == 0, || "reset left in chain".into())?;
        let rep = channel_equiv(&f.circuit, &rotations_circuit(n, &rs), &f.inputs, &default_inputs(n, 81), TOL, &SimOptions::default())
            .map_err(e)?;
        ensure(rep.equivalent, || format!("{rep:?}"))?;
        worst = worst.min(rep.worst_fidelity);
    }
    Ok(format!("10 chains of 3, no resets; min fidelity {worst:.12}"))
}

fn clifford_snaking() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst = 1.0f64;
    let mut cases = 0;
    for n in 1..=3 {
        for d in [1, 3, 5] {
            for _ in 0..4 {
                let suffix = if n == 1 {
                    Circuit::from_clifford_gates(1, &random_gates(1, 10, &mut rng)).map_err(e)?
                } else {
                    synthesize_lnn(&random_tableau(n, &mut rng)).map_err(e)?.suffix
                };
                let f = reduce_clifford(&suffix, d).map_err(e)?;
                ensure(f.circuit.num_qubits() == n * d, || format!("n={n} d={d}: {} qubits", f.circuit.num_qubits()))?;
                let m = suffix.depth();
                let bound = if d == 1 { m } else { m.div_ceil(d) + SNAKE_OVERHEAD };
                ensure(f.circuit.depth() <= bound, || format!("n={n} d={d}: depth {} > {bound}", f.circuit.depth()))?;
                let opts = SimOptions { max_qubits: 16, max_branches: 1 << 10, samples: 128, ..SimOptions::default() };
                let inputs = if n * d > 9 { probe_inputs(n, 91).split_off(1) } else { default_inputs(n, 92) };
                let rep = channel_equiv(&f.circuit, &suffix, &f.inputs, &inputs, TOL, &opts).map_err(e)?;
                ensure(rep.equivalent, || format!("n={n} d={d}: {rep:?}"))?;
                worst = worst.min(rep.worst_fidelity);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} suffixes, n·d qubits, depth ≤ ⌈m/d⌉+{SNAKE_OVERHEAD}; min fidelity {worst:.12}"))
}

fn end_to_end() -> Outcome {
    let mut worst = 1.0f64;
    for i in 0..30u64 {
        let n = 2 + (i as usize % 3);
        let pct = [0.0, 50.0, 90.0][(i as usize / 3) % 3];
        let spec = GenSpec { n_qubits: n, n_phasors: 1 + (i as usize % 6), clifford_pct: pct, weight: WeightSpec::RANDOM, seed: 1000 + i };
        let src = phasor_circuit(n, &random_phasor_circuit(&spec).map_err(e)?).map_err(e)?;
        let c = compile(&src, Pipeline::QdcFull, &CompileOptions::grid(n, 3)).map_err(e)?;
        let bad = c.layout.check(&c.circuit).map_err(e)?;
        ensure(bad.is_empty(), || format!("instance {i}: {} layout violations", bad.len()))?;
        let rep = verify_compiled(&c, &src, TOL).map_err(e)?;
        ensure(rep.equivalent, || format!("instance {i}: {rep:?}"))?;
        worst = worst.min(rep.worst_fidelity);
    }
    Ok(format!("30 instances on n×3 grids; min fidelity {worst:.12}"))
}

fn mean_depth(p: Pipeline, pct: f64, weight: WeightSpec) -> Result<f64, String> {
    let mut total = 0usize;
    for seed in 0..10 {
        let spec = GenSpec { n_qubits: 9, n_phasors: 40, clifford_pct: pct, weight, seed };
        let src = phasor_circuit(9, &random_phasor_circuit(&spec).map_err(e)?).map_err(e)?;
        total += compile(&src, p, &CompileOptions::grid(9, 5)).map_err(e)?.circuit.depth();
    }
    Ok(total as f64 / 10.0)
}

fn qualitative_benchmark() -> Outcome {
    let mut by_pct = Vec::new();
    for pct in [0.0, 30.0, 60.0, 90.0] {
        let b = mean_depth(Pipeline::Baseline, pct, WeightSpec::RANDOM)?;
        let q = mean_depth(Pipeline::QdcFull, pct, WeightSpec::RANDOM)?;
        ensure(q < b, || format!("clifford_pct {pct}: qdc_full {q} ≥ baseline {b}"))?;
        by_pct.push(format!("{pct}%: {b:.1}/{q:.1}"));
    }
    let mut ratios = Vec::new();
    for w in [2, 3, 5, 7] {
        let b = mean_depth(Pipeline::Baseline, 0.0, WeightSpec::Fixed(w))?;
        let q = mean_depth(Pipeline::QdcFull, 0.0, WeightSpec::Fixed(w))?;
        ratios.push(b / q);
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    ensure(ratios.windows(2).all(|w| w[1] > w[0]), || format!("ratios over weights 2,3,5,7 not increasing: {shown:?}"))?;
    Ok(format!("baseline/qdc_full mean depth {}; ratio by weight 2,3,5,7 = {}", by_pct.join(", "), shown.join(", ")))
}

/// Bit sets of the Z corrections on `Z^w`, in the 1-based symbols `z_1..z_{⌊w/2⌋+1}`:
/// cap z-bits in snake order, then the ancilla readout.
fn derived_sets(w: usize) -> Result<Vec<BTreeSet<usize>>, String> {
    let r = PauliRotation::new(PauliString::from_paulis(&vec![Pauli::Z; w]), 0.37).unwrap();
    let f = reduce_phasor(&r, &SnakePlan::for_rotation(&r).map_err(e)?, &PauliFrame::new()).map_err(e)?;
    let rec = &f.phasors[0];
    let mut symbol = std::collections::BTreeMap::new();
    for (i, &(z, _)) in rec.caps.iter().enumerate() {
        symbol.insert(z, i + 1);
    }
    symbol.insert(rec.readout, rec.caps.len() + 1);
    let mut out = vec![BTreeSet::new(); w];
    for (row, ex) in &rec.corrections {
        ensure(!ex.constant_term(), || format!("w={w}: constant term on row {row}"))?;
        for b in ex.bits() {
            let s = symbol.get(b).ok_or_else(|| format!("w={w}: row {row} reads non-z bit c{b}"))?;
            out[*row].insert(*s);
        }
    }
    Ok(out)
}

fn s_j_resolution() -> Outcome {
    // Two candidate closed forms for s_j (1-based j) differ only in the upper limit:
    // short: sum_{i=⌊j/2⌋}^{⌊n/2⌋} z_{i+1}, long: sum_{i=⌊j/2⌋}^{n-1} z_{i+1}.
    let mut short_ok = true;
    let mut long_ok = true;
    let mut missing = BTreeSet::new();
    for w in [3, 5, 7] {
        let derived = derived_sets(w)?;
        let available = w / 2 + 1;
        for (j0, set) in derived.iter().enumerate() {
            let j = j0 + 1;
            let short: BTreeSet<usize> = (j / 2..=w / 2).map(|i| i + 1).collect();
            let long: BTreeSet<usize> = (j / 2..=w - 1).map(|i| i + 1).collect();
            short_ok &= *set == short;
            long_ok &= *set == long;
            missing.extend(long.into_iter().filter(|&k| k > available));
        }
    }
    let verdict = match (short_ok, long_ok) {
        (true, false) => format!(
            "derived sets equal the sum up to ⌊n/2⌋ (readout as z_(⌊n/2⌋+1)); the sum up to n-1 reads z_k for k in {missing:?}, which no snake produces"
        ),
        (true, true) => "both closed forms match".into(),
        (false, true) => "only the sum up to n-1 matches".into(),
        (false, false) => "neither closed form matches".into(),
    };
    ensure(short_ok || long_ok, || verdict.clone())?;
    Ok(format!("weights 3,5,7: {verdict}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 12] = [
        ("pauli and tableau vs dense", pauli_and_tableau, Some(Duration::from_secs(10))),
        ("clifford pushing", push_correctness, Some(Duration::from_secs(60))),
        ("LNN synthesis round trip", synthesis_round_trip, None),
        ("prefix deletion on |0…0⟩", prefix_deletion, None),
        ("expectation-value mode", expectation_value_mode, None),
        ("cup, cap, zag and ricochet", gadgets, None),
        ("phasor reduction", phasor_reduction, Some(Duration::from_secs(300))),
        ("chained phasors without resets", chained_phasors, None),
        ("clifford snaking", clifford_snaking, None),
        ("end-to-end qdc_full", end_to_end, None),
        ("depth against the in-repo baseline", qualitative_benchmark, None),
        ("s_j parity sets", s_j_resolution, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("{msg}; took {took:.1?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.1?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.1?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
