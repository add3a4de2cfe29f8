// SPDX-License-Identifier: Apache-2.0

//! Acquisition-cycle timing, checked against a closed form and against the
//! simulated application's saved files.

use std::collections::BTreeMap;

use proptest::prelude::*;
use virtuser_core::desktop::{AppError, DaqAppConfig, Desktop};
use virtuser_core::keycode::{Action, VirtualKey};
use virtuser_core::scheduler::{
    execute, replay_check, ExecConfig, ExecError, ExecutionTrace, Outcome, RealClock, TraceKind,
    VirtualClock,
};
use virtuser_core::script::{acquisition_script, Cycles};
use virtuser_core::sink::SinkError;

fn run(t1: u64, t0: u64, n: u64, measurement_ms: u64) -> (ExecutionTrace, Desktop) {
    let script = acquisition_script("DAQ", "M", "S", t1, t0, Cycles::Count(n)).unwrap();
    let mut desktop = Desktop::with_daq(
        "DAQ",
        DaqAppConfig {
            measurement_ms,
            ..DaqAppConfig::default()
        },
    )
    .unwrap();
    let trace = execute(
        &script,
        &mut VirtualClock::new(),
        &mut desktop,
        &ExecConfig::default(),
    );
    (trace, desktop)
}

/// Release of Enter ending each save sequence: every second Enter release.
fn save_completions(trace: &ExecutionTrace) -> Vec<u64> {
    trace
        .key_events()
        .filter(|e| e.key == VirtualKey::RETURN && e.action == Action::Release)
        .skip(1)
        .step_by(2)
        .map(|e| e.t)
        .collect()
}

#[test]
fn three_cycle_reference_timeline() {
    let (trace, desktop) = run(2000, 10_000, 3, 2000);
    assert!(trace.is_completed());
    assert_eq!(save_completions(&trace), vec![2000, 14_000, 26_000]);
    let files = desktop.saved_files();
    let names: Vec<&str> = files.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, vec!["acq_1.dat", "acq_2.dat", "acq_3.dat"]);
    assert_eq!(
        files.iter().map(|f| f.cycle).collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn saves_follow_closed_form(t1 in 1u64..20_000, t0 in 0u64..20_000, n in 1u64..=50) {
        let (trace, desktop) = run(t1, t0, n, t1);
        prop_assert!(trace.is_completed());
        let expected: Vec<u64> = (1..=n).map(|k| t1 + (k - 1) * (t1 + t0)).collect();
        prop_assert_eq!(save_completions(&trace), expected.clone());
        let saved: Vec<u64> = desktop.saved_files().iter().map(|f| f.saved_at).collect();
        prop_assert_eq!(saved, expected);
    }

    #[test]
    fn trace_keys_balance(t1 in 1u64..5000, t0 in 0u64..5000, n in 1u64..10) {
        let (trace, _) = run(t1, t0, n, t1);
        let mut depth: BTreeMap<VirtualKey, i64> = BTreeMap::new();
        let mut last_t = 0;
        for e in &trace.entries {
            prop_assert!(e.t >= last_t);
            last_t = e.t;
            if let Some(k) = e.key_event() {
                let d = depth.entry(k.key).or_default();
                *d += if k.action == Action::Press { 1 } else { -1 };
                prop_assert!(*d >= 0);
            }
        }
        prop_assert!(depth.values().all(|&d| d == 0));
    }

    #[test]
    fn measurement_longer_than_t1_fails_save(t1 in 1u64..5000, extra in 1u64..5000, t0 in 0u64..5000) {
        let (trace, desktop) = run(t1, t0, 3, t1 + extra);
        prop_assert_eq!(
            trace.outcome,
            Outcome::Aborted(ExecError::Sink(SinkError::App(AppError::SaveWithoutMeasurement { t: t1 })))
        );
        prop_assert!(desktop.saved_files().is_empty());
        prop_assert_eq!(trace.entries.last().unwrap().kind(), TraceKind::Error);
    }

    #[test]
    fn never_more_saves_than_measurements(t1 in 1u64..3000, t0 in 0u64..3000, m in 0u64..6000, n in 1u64..6) {
        let (_, desktop) = run(t1, t0, n, m);
        let files = desktop.saved_files();
        for f in &files {
            prop_assert!(f.cycle >= 1);
        }
        prop_assert!(files.len() as u64 <= n);
    }
}

#[test]
fn virtual_runs_are_deterministic() {
    let (a, da) = run(2000, 10_000, 3, 2000);
    let (b, db) = run(2000, 10_000, 3, 2000);
    assert!(replay_check(&a, &b));
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(da.saved_files(), db.saved_files());
}

#[test]
fn persisted_trace_reads_back() {
    let (trace, _) = run(2000, 10_000, 3, 2000);
    let text = trace.to_tsv();
    let read = ExecutionTrace::read_tsv(text.as_bytes()).unwrap();
    assert!(replay_check(&trace, &read));
    assert_eq!(read.outcome, Outcome::Completed);

    let (aborted, _) = run(2000, 0, 1, 5000);
    let read = ExecutionTrace::read_tsv(aborted.to_tsv().as_bytes()).unwrap();
    assert!(matches!(
        read.outcome,
        Outcome::Aborted(ExecError::Recorded(_))
    ));
}

#[test]
fn real_clock_waits_span_wall_time() {
    let script = acquisition_script("DAQ", "M", "S", 30, 10, Cycles::Count(1)).unwrap();
    let mut desktop = Desktop::with_daq(
        "DAQ",
        DaqAppConfig {
            measurement_ms: 30,
            ..DaqAppConfig::default()
        },
    )
    .unwrap();
    let started = std::time::Instant::now();
    let cfg = ExecConfig {
        inter_key_delay: 0,
        loop_limit: None,
    };
    let trace = execute(&script, &mut RealClock::new(), &mut desktop, &cfg);
    assert!(trace.is_completed(), "{:?}", trace.outcome);
    assert!(started.elapsed().as_millis() >= 40);
    let waits: Vec<_> = trace
        .entries
        .iter()
        .filter(|e| matches!(e.kind(), TraceKind::WaitStart | TraceKind::WaitEnd))
        .map(|e| e.t)
        .collect();
    assert!(waits[1] - waits[0] >= 30);
    assert!(waits[3] - waits[2] >= 10);
}
