// SPDX-License-Identifier: Apache-2.0

//! Hand transcription of the Set 2 make/break table (both columns copied,
//! not derived).

/// (key, make, break) as listed in the Set 2 column of the scan code table.
pub const SET2: &[(&str, &[u8], &[u8])] = &[
    ("VK_A", &[0x1C], &[0xF0, 0x1C]),
    ("VK_B", &[0x32], &[0xF0, 0x32]),
    ("VK_C", &[0x21], &[0xF0, 0x21]),
    ("VK_D", &[0x23], &[0xF0, 0x23]),
    ("VK_E", &[0x24], &[0xF0, 0x24]),
    ("VK_F", &[0x2B], &[0xF0, 0x2B]),
    ("VK_G", &[0x34], &[0xF0, 0x34]),
    ("VK_H", &[0x33], &[0xF0, 0x33]),
    ("VK_I", &[0x43], &[0xF0, 0x43]),
    ("VK_J", &[0x3B], &[0xF0, 0x3B]),
    ("VK_K", &[0x42], &[0xF0, 0x42]),
    ("VK_L", &[0x4B], &[0xF0, 0x4B]),
    ("VK_M", &[0x3A], &[0xF0, 0x3A]),
    ("VK_N", &[0x31], &[0xF0, 0x31]),
    ("VK_O", &[0x44], &[0xF0, 0x44]),
    ("VK_P", &[0x4D], &[0xF0, 0x4D]),
    ("VK_Q", &[0x15], &[0xF0, 0x15]),
    ("VK_R", &[0x2D], &[0xF0, 0x2D]),
    ("VK_S", &[0x1B], &[0xF0, 0x1B]),
    ("VK_T", &[0x2C], &[0xF0, 0x2C]),
    ("VK_U", &[0x3C], &[0xF0, 0x3C]),
    ("VK_V", &[0x2A], &[0xF0, 0x2A]),
    ("VK_W", &[0x1D], &[0xF0, 0x1D]),
    ("VK_X", &[0x22], &[0xF0, 0x22]),
    ("VK_Y", &[0x35], &[0xF0, 0x35]),
    ("VK_Z", &[0x1A], &[0xF0, 0x1A]),
    ("VK_0", &[0x45], &[0xF0, 0x45]),
    ("VK_1", &[0x16], &[0xF0, 0x16]),
    ("VK_2", &[0x1E], &[0xF0, 0x1E]),
    ("VK_3", &[0x26], &[0xF0, 0x26]),
    ("VK_4", &[0x25], &[0xF0, 0x25]),
    ("VK_5", &[0x2E], &[0xF0, 0x2E]),
    ("VK_6", &[0x36], &[0xF0, 0x36]),
    ("VK_7", &[0x3D], &[0xF0, 0x3D]),
    ("VK_8", &[0x3E], &[0xF0, 0x3E]),
    ("VK_9", &[0x46], &[0xF0, 0x46]),
    ("VK_OEM_3", &[0x0E], &[0xF0, 0x0E]),
    ("VK_OEM_MINUS", &[0x4E], &[0xF0, 0x4E]),
    ("VK_OEM_PLUS", &[0x55], &[0xF0, 0x55]),
    ("VK_OEM_5", &[0x5D], &[0xF0, 0x5D]),
    ("VK_BACK", &[0x66], &[0xF0, 0x66]),
    ("VK_SPACE", &[0x29], &[0xF0, 0x29]),
    ("VK_TAB", &[0x0D], &[0xF0, 0x0D]),
    ("VK_CAPITAL", &[0x58], &[0xF0, 0x58]),
    ("VK_SHIFT", &[0x12], &[0xF0, 0x12]),
    ("VK_CONTROL", &[0x14], &[0xF0, 0x14]),
    ("VK_MENU", &[0x11], &[0xF0, 0x11]),
    ("VK_RETURN", &[0x5A], &[0xF0, 0x5A]),
    ("VK_ESCAPE", &[0x76], &[0xF0, 0x76]),
    ("VK_F1", &[0x05], &[0xF0, 0x05]),
    ("VK_F2", &[0x06], &[0xF0, 0x06]),
    ("VK_F3", &[0x04], &[0xF0, 0x04]),
    ("VK_F4", &[0x0C], &[0xF0, 0x0C]),
    ("VK_F5", &[0x03], &[0xF0, 0x03]),
    ("VK_F6", &[0x0B], &[0xF0, 0x0B]),
    ("VK_F7", &[0x83], &[0xF0, 0x83]),
    ("VK_F8", &[0x0A], &[0xF0, 0x0A]),
    ("VK_F9", &[0x01], &[0xF0, 0x01]),
    ("VK_F10", &[0x09], &[0xF0, 0x09]),
    ("VK_F11", &[0x78], &[0xF0, 0x78]),
    ("VK_F12", &[0x07], &[0xF0, 0x07]),
    ("VK_SCROLL", &[0x7E], &[0xF0, 0x7E]),
    ("VK_OEM_4", &[0x54], &[0xF0, 0x54]),
    ("VK_NUMLOCK", &[0x77], &[0xF0, 0x77]),
    ("VK_OEM_6", &[0x5B], &[0xF0, 0x5B]),
    ("VK_OEM_1", &[0x4C], &[0xF0, 0x4C]),
    ("VK_OEM_7", &[0x52], &[0xF0, 0x52]),
    ("VK_OEM_COMMA", &[0x41], &[0xF0, 0x41]),
    ("VK_OEM_PERIOD", &[0x49], &[0xF0, 0x49]),
    ("VK_OEM_2", &[0x4A], &[0xF0, 0x4A]),
    ("VK_INSERT", &[0xE0, 0x70], &[0xE0, 0xF0, 0x70]),
    ("VK_HOME", &[0xE0, 0x6C], &[0xE0, 0xF0, 0x6C]),
    ("VK_PRIOR", &[0xE0, 0x7D], &[0xE0, 0xF0, 0x7D]),
    ("VK_DELETE", &[0xE0, 0x71], &[0xE0, 0xF0, 0x71]),
    ("VK_END", &[0xE0, 0x69], &[0xE0, 0xF0, 0x69]),
    ("VK_NEXT", &[0xE0, 0x7A], &[0xE0, 0xF0, 0x7A]),
    ("VK_UP", &[0xE0, 0x75], &[0xE0, 0xF0, 0x75]),
    ("VK_LEFT", &[0xE0, 0x6B], &[0xE0, 0xF0, 0x6B]),
    ("VK_DOWN", &[0xE0, 0x72], &[0xE0, 0xF0, 0x72]),
    ("VK_RIGHT", &[0xE0, 0x74], &[0xE0, 0xF0, 0x74]),
];
