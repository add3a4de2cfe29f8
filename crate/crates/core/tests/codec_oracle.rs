// SPDX-License-Identifier: Apache-2.0

//! Codec checked against a hand transcription of the Set 2 make/break table,
//! plus round-trip and chunking properties.

mod common;

use common::set2::SET2;
use proptest::prelude::*;
use virtuser_core::keycode::{Action, KeyEvent, Stroke, VirtualKey};
use virtuser_core::scancode::{
    decode_bytes, encode_event, encode_events, scan_table, typematic_expand, DecoderState,
    TypematicParams,
};

fn vk(name: &str) -> VirtualKey {
    VirtualKey::from_name(name).unwrap()
}

#[test]
fn encoder_matches_transcribed_table() {
    for (name, make, brk) in SET2 {
        let key = vk(name);
        assert_eq!(
            encode_event(&KeyEvent::press(key, 0)).unwrap(),
            *make,
            "{name} make"
        );
        assert_eq!(
            encode_event(&KeyEvent::release(key, 0)).unwrap(),
            *brk,
            "{name} break"
        );
    }
    // The oracle covers the whole key table.
    assert_eq!(SET2.len(), VirtualKey::all().count());
}

#[test]
fn exhaustive_round_trip() {
    for entry in scan_table() {
        for action in [Action::Press, Action::Release] {
            let e = KeyEvent {
                key: entry.key,
                action,
                t: 0,
            };
            let bytes = encode_event(&e).unwrap();
            let (strokes, state) = decode_bytes(DecoderState::new(), &bytes).unwrap();
            assert_eq!(strokes, vec![e.stroke()]);
            assert!(state.is_empty());
        }
    }
}

#[test]
fn make_sequences_are_prefix_free() {
    let makes: Vec<Vec<u8>> = scan_table().map(|e| e.make()).collect();
    for (i, a) in makes.iter().enumerate() {
        for (j, b) in makes.iter().enumerate() {
            if i != j {
                assert!(!b.starts_with(a), "{a:02X?} is a prefix of {b:02X?}");
            }
        }
    }
}

fn event_strategy() -> impl Strategy<Value = Stroke> {
    let keys: Vec<VirtualKey> = VirtualKey::all().collect();
    (proptest::sample::select(keys), any::<bool>()).prop_map(|(key, press)| Stroke {
        key,
        action: if press {
            Action::Press
        } else {
            Action::Release
        },
    })
}

proptest! {
    #[test]
    fn decoding_is_chunk_invariant(
        strokes in proptest::collection::vec(event_strategy(), 0..40),
        cuts in proptest::collection::vec(any::<prop::sample::Index>(), 0..8),
    ) {
        let events: Vec<KeyEvent> =
            strokes.iter().map(|s| KeyEvent { key: s.key, action: s.action, t: 0 }).collect();
        let bytes = encode_events(&events).unwrap();
        let mut bounds: Vec<usize> = cuts.iter().map(|c| c.index(bytes.len() + 1)).collect();
        bounds.push(0);
        bounds.push(bytes.len());
        bounds.sort_unstable();
        let mut state = DecoderState::new();
        let mut out = Vec::new();
        for w in bounds.windows(2) {
            state.feed(&bytes[w[0]..w[1]], &mut out).unwrap();
        }
        prop_assert!(state.is_empty());
        prop_assert_eq!(out, strokes);
    }
}

/// Millisecond-stepping oracle: walks every ms of the hold and fires a
/// repeat whenever the exact (rational) repeat time has been reached.
fn typematic_oracle(hold: u64, delay: u64, rate: u64) -> Vec<u64> {
    let mut presses = vec![0];
    // next repeat time scaled by `rate`: delay*rate + n*1000
    let mut next_scaled = delay * rate;
    for t in 0..hold {
        while next_scaled < (t + 1) * rate {
            presses.push(t);
            next_scaled += 1000;
        }
    }
    presses
}

#[test]
fn typematic_hand_enumerated() {
    assert_eq!(typematic_oracle(700, 500, 10), vec![0, 500, 600]);
    assert_eq!(typematic_oracle(400, 500, 10), vec![0]);
    assert_eq!(typematic_oracle(0, 500, 10), vec![0]);
}

proptest! {
    #[test]
    fn typematic_matches_stepping_oracle(hold in 0u64..5000, delay in 1u64..1000, rate in 1u32..40) {
        let key = vk("VK_A");
        let events = typematic_expand(key, hold, TypematicParams::new(delay, rate).unwrap());
        let (last, presses) = events.split_last().unwrap();
        prop_assert_eq!(*last, KeyEvent::release(key, hold));
        prop_assert!(presses.iter().all(|e| e.action == Action::Press && e.key == key));
        let times: Vec<u64> = presses.iter().map(|e| e.t).collect();
        prop_assert_eq!(times, typematic_oracle(hold, delay, u64::from(rate)));
    }
}
