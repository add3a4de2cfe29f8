// SPDX-License-Identifier: Apache-2.0

//! US keyboard fixtures: the reference virtual-key table and the printable
//! rows with their plain and shifted legends.

use std::collections::BTreeMap;

use virtuser_core::keycode::{vk_from_name, KeyChord, VirtualKey};

/// The keys listed in the reference table of US virtual key codes.
pub const REFERENCE_TABLE: &[(&str, u8)] = &[
    ("VK_RETURN", 0x0D),
    ("VK_SHIFT", 0x10),
    ("VK_ESCAPE", 0x1B),
    ("VK_SPACE", 0x20),
    ("VK_PRIOR", 0x21),
    ("VK_NEXT", 0x22),
    ("VK_END", 0x23),
    ("VK_LEFT", 0x25),
    ("VK_UP", 0x26),
    ("VK_0", 0x30),
    ("VK_1", 0x31),
    ("VK_2", 0x32),
    ("VK_4", 0x34),
    ("VK_5", 0x35),
    ("VK_6", 0x36),
    ("VK_7", 0x37),
    ("VK_8", 0x38),
    ("VK_9", 0x39),
    ("VK_A", 0x41),
    ("VK_B", 0x42),
    ("VK_D", 0x44),
];

/// The four printable rows of a US keyboard: keys left to right, the
/// unshifted legend, and the shifted legend.
pub const ROWS: &[(&[&str], &str, &str)] = &[
    (
        &[
            "VK_OEM_3",
            "VK_1",
            "VK_2",
            "VK_3",
            "VK_4",
            "VK_5",
            "VK_6",
            "VK_7",
            "VK_8",
            "VK_9",
            "VK_0",
            "VK_OEM_MINUS",
            "VK_OEM_PLUS",
        ],
        "`1234567890-=",
        "~!@#$%^&*()_+",
    ),
    (
        &[
            "VK_Q", "VK_W", "VK_E", "VK_R", "VK_T", "VK_Y", "VK_U", "VK_I", "VK_O", "VK_P",
            "VK_OEM_4", "VK_OEM_6", "VK_OEM_5",
        ],
        "qwertyuiop[]\\",
        "QWERTYUIOP{}|",
    ),
    (
        &[
            "VK_A", "VK_S", "VK_D", "VK_F", "VK_G", "VK_H", "VK_J", "VK_K", "VK_L", "VK_OEM_1",
            "VK_OEM_7",
        ],
        "asdfghjkl;'",
        "ASDFGHJKL:\"",
    ),
    (
        &[
            "VK_Z",
            "VK_X",
            "VK_C",
            "VK_V",
            "VK_B",
            "VK_N",
            "VK_M",
            "VK_OEM_COMMA",
            "VK_OEM_PERIOD",
            "VK_OEM_2",
        ],
        "zxcvbnm,./",
        "ZXCVBNM<>?",
    ),
];

pub fn layout_oracle() -> BTreeMap<char, KeyChord> {
    let mut map = BTreeMap::new();
    for (keys, plain, shifted) in ROWS {
        assert_eq!(keys.len(), plain.chars().count());
        assert_eq!(keys.len(), shifted.chars().count());
        for ((name, p), s) in keys.iter().zip(plain.chars()).zip(shifted.chars()) {
            let key = vk_from_name(name).unwrap();
            map.insert(p, KeyChord::plain(key));
            map.insert(s, KeyChord::shifted(key));
        }
    }
    map.insert(' ', KeyChord::plain(VirtualKey::SPACE));
    map
}
