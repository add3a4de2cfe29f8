// SPDX-License-Identifier: Apache-2.0

//! A deterministic "virtual user" for keystroke-driven acquisition software.
//!
//! Scripts written in the `.vus` language ([`script`]) are executed by the
//! [`scheduler`] against a clock and a key target, usually the simulated
//! [`desktop`]. Every keystroke is also encoded as Scan Code Set 2 bytes
//! ([`scancode`]). The [`wedge`] module bridges device byte streams into the
//! same keystroke pipeline.

pub mod desktop;
pub mod keycode;
pub mod scancode;
pub mod scheduler;
pub mod script;
pub mod sink;
pub mod wedge;

pub use keycode::{Action, KeyChord, KeyEvent, Modifier, VirtualKey};
pub use scheduler::{execute, ExecConfig, ExecutionTrace, Outcome};
pub use script::{parse, validate, Script};
