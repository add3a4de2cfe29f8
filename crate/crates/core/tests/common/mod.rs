// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by several test targets; not every target uses all of them.
#![allow(dead_code)]

pub mod set2;
pub mod us_layout;
