// SPDX-License-Identifier: Apache-2.0

//! Where synthesized keystrokes go.

use std::fmt;

use thiserror::Error;

use crate::desktop::AppError;
use crate::keycode::KeyEvent;

/// Opaque window identifier, stable for the lifetime of its desktop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowHandle(pub(crate) u32);

impl fmt::Display for WindowHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SinkError {
    #[error("window not found: {0}")]
    WindowNotFound(String),
    #[error("invalid window handle {0}")]
    InvalidHandle(WindowHandle),
    #[error(transparent)]
    App(#[from] AppError),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("{0}")]
    Other(String),
}

/// Consumes key events in delivery order.
pub trait KeySink {
    fn send(&mut self, event: &KeyEvent) -> Result<(), SinkError>;
}

/// Window lookup and focus, the counterpart of a desktop's window manager.
pub trait WindowService {
    fn find_window(&self, title: &str) -> Result<WindowHandle, SinkError>;
    fn focus(&mut self, handle: WindowHandle) -> Result<(), SinkError>;
}

impl<S: KeySink + ?Sized> KeySink for &mut S {
    fn send(&mut self, event: &KeyEvent) -> Result<(), SinkError> {
        (**self).send(event)
    }
}

/// Collects events in memory. Every title resolves to the same window.
#[derive(Debug, Default, Clone)]
pub struct RecordingSink {
    pub events: Vec<KeyEvent>,
    pub focused: Option<String>,
}

impl KeySink for RecordingSink {
    fn send(&mut self, event: &KeyEvent) -> Result<(), SinkError> {
        self.events.push(*event);
        Ok(())
    }
}

impl WindowService for RecordingSink {
    fn find_window(&self, _title: &str) -> Result<WindowHandle, SinkError> {
        Ok(WindowHandle(0))
    }

    fn focus(&mut self, _handle: WindowHandle) -> Result<(), SinkError> {
        Ok(())
    }
}

/// Placeholder for injecting keys into the host OS. Not implemented; every
/// call fails with [`SinkError::Unsupported`].
#[derive(Debug, Default, Clone, Copy)]
pub struct OsInjectionSink;

const OS_UNSUPPORTED: &str = "OS key injection is not implemented; use the simulated desktop";

impl KeySink for OsInjectionSink {
    fn send(&mut self, _event: &KeyEvent) -> Result<(), SinkError> {
        Err(SinkError::Unsupported(OS_UNSUPPORTED))
    }
}

impl WindowService for OsInjectionSink {
    fn find_window(&self, _title: &str) -> Result<WindowHandle, SinkError> {
        Err(SinkError::Unsupported(OS_UNSUPPORTED))
    }

    fn focus(&mut self, _handle: WindowHandle) -> Result<(), SinkError> {
        Err(SinkError::Unsupported(OS_UNSUPPORTED))
    }
}
