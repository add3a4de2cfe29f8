// SPDX-License-Identifier: Apache-2.0

//! Simulated desktop: a window registry with focus, and a keystroke-driven
//! data-acquisition application to run scripts against.
//!
//! The acquisition app ([`DaqApp`]) accepts two commands typed into its input
//! line and submitted with Enter. The measure trigger starts a measurement
//! that completes `measurement_ms` later on the run clock; the save trigger
//! stores a file, and is only accepted once a measurement has completed.

use std::any::Any;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::keycode::{char_for_key, Action, KeyEvent, VirtualKey};
use crate::sink::{KeySink, SinkError, WindowHandle, WindowService};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppError {
    #[error("application rejected key {key} at t={t}ms")]
    AppRejectedKey { key: VirtualKey, t: u64 },
    #[error("save requested at t={t}ms without a completed measurement")]
    SaveWithoutMeasurement { t: u64 },
    #[error("measure requested at t={t}ms while a measurement is pending")]
    MeasurementPending { t: u64 },
    #[error("unrecognized input {text:?} at t={t}ms")]
    UnrecognizedInput { text: String, t: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesktopError {
    #[error("a window titled {0:?} already exists")]
    DuplicateTitle(String),
    #[error("invalid application config: {0}")]
    InvalidConfig(&'static str),
}

/// What a delivered key did to the application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effect {
    Nothing,
    Typed(char),
    MeasurementStarted { until: u64 },
    Saved(SavedFile),
    Dropped,
}

/// A window's keystroke consumer.
pub trait Application: Any {
    fn on_key(&mut self, event: &KeyEvent, now: u64) -> Result<Effect, AppError>;
    fn as_any(&self) -> &dyn Any;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownKeyPolicy {
    #[default]
    Ignore,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaqAppConfig {
    pub measure_trigger: String,
    pub save_trigger: String,
    pub measurement_ms: u64,
    /// File name with a `{n}` placeholder for the save counter.
    pub file_pattern: String,
    pub unknown_keys: UnknownKeyPolicy,
}

impl Default for DaqAppConfig {
    fn default() -> Self {
        DaqAppConfig {
            measure_trigger: "M".into(),
            save_trigger: "S".into(),
            measurement_ms: 2000,
            file_pattern: "acq_{n}.dat".into(),
            unknown_keys: UnknownKeyPolicy::Ignore,
        }
    }
}

impl DaqAppConfig {
    pub fn check(&self) -> Result<(), DesktopError> {
        if self.measure_trigger.is_empty() || self.save_trigger.is_empty() {
            return Err(DesktopError::InvalidConfig("triggers must be non-empty"));
        }
        if self.measure_trigger == self.save_trigger {
            return Err(DesktopError::InvalidConfig(
                "measure and save triggers must differ",
            ));
        }
        if !self.file_pattern.contains("{n}") {
            return Err(DesktopError::InvalidConfig(
                "file pattern needs a {n} placeholder",
            ));
        }
        Ok(())
    }

    fn file_name(&self, n: u64) -> String {
        self.file_pattern.replace("{n}", &n.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavedFile {
    pub name: String,
    pub saved_at: u64,
    pub cycle: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaqState {
    Idle,
    Measuring { until: u64 },
    Ready,
}

#[derive(Debug)]
pub struct DaqApp {
    config: DaqAppConfig,
    state: DaqState,
    buffer: String,
    shift_down: bool,
    measurements: u64,
    saved: Vec<SavedFile>,
    submissions: Vec<(u64, String)>,
}

impl DaqApp {
    pub fn new(config: DaqAppConfig) -> Result<Self, DesktopError> {
        config.check()?;
        Ok(DaqApp {
            config,
            state: DaqState::Idle,
            buffer: String::new(),
            shift_down: false,
            measurements: 0,
            saved: Vec::new(),
            submissions: Vec::new(),
        })
    }

    pub fn config(&self) -> &DaqAppConfig {
        &self.config
    }

    /// State as of `now`; a measurement whose end has passed reads as `Ready`.
    pub fn state_at(&self, now: u64) -> DaqState {
        match self.state {
            DaqState::Measuring { until } if now >= until => DaqState::Ready,
            s => s,
        }
    }

    pub fn input_buffer(&self) -> &str {
        &self.buffer
    }

    pub fn saved_files(&self) -> &[SavedFile] {
        &self.saved
    }

    /// Every line submitted with Enter, with its submission time.
    pub fn submissions(&self) -> &[(u64, String)] {
        &self.submissions
    }

    fn submit(&mut self, now: u64) -> Result<Effect, AppError> {
        let text = std::mem::take(&mut self.buffer);
        self.submissions.push((now, text.clone()));
        if text == self.config.measure_trigger {
            if self.state != DaqState::Idle {
                return Err(AppError::MeasurementPending { t: now });
            }
            let until = now + self.config.measurement_ms;
            self.measurements += 1;
            self.state = DaqState::Measuring { until };
            Ok(Effect::MeasurementStarted { until })
        } else if text == self.config.save_trigger {
            if self.state != DaqState::Ready {
                return Err(AppError::SaveWithoutMeasurement { t: now });
            }
            let file = SavedFile {
                name: self.config.file_name(self.saved.len() as u64 + 1),
                saved_at: now,
                cycle: self.measurements,
            };
            self.saved.push(file.clone());
            self.state = DaqState::Idle;
            Ok(Effect::Saved(file))
        } else {
            match self.config.unknown_keys {
                UnknownKeyPolicy::Ignore => Ok(Effect::Dropped),
                UnknownKeyPolicy::Fail => Err(AppError::UnrecognizedInput { text, t: now }),
            }
        }
    }
}

impl Application for DaqApp {
    fn on_key(&mut self, event: &KeyEvent, now: u64) -> Result<Effect, AppError> {
        self.state = self.state_at(now);
        let key = event.key;
        if event.action == Action::Release {
            if key == VirtualKey::SHIFT {
                self.shift_down = false;
            }
            return Ok(Effect::Nothing);
        }
        match key {
            VirtualKey::SHIFT => {
                self.shift_down = true;
                Ok(Effect::Nothing)
            }
            VirtualKey::RETURN => self.submit(now),
            VirtualKey::BACK => {
                self.buffer.pop();
                Ok(Effect::Nothing)
            }
            _ => match char_for_key(key, self.shift_down) {
                Some(c) => {
                    self.buffer.push(c);
                    Ok(Effect::Typed(c))
                }
                None => match self.config.unknown_keys {
                    UnknownKeyPolicy::Ignore => Ok(Effect::Dropped),
                    UnknownKeyPolicy::Fail => Err(AppError::AppRejectedKey { key, t: now }),
                },
            },
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

struct Window {
    title: String,
    app: Box<dyn Application>,
}

/// Window registry with a single focused window. Key events sent through
/// [`KeySink`] go to the focused window, timestamped by the event itself;
/// with nothing focused they are dropped.
#[derive(Default)]
pub struct Desktop {
    windows: Vec<Window>,
    focused: Option<WindowHandle>,
    dropped: u64,
}

impl Desktop {
    pub fn new() -> Self {
        Self::default()
    }

    /// A desktop holding one acquisition app under `title`.
    pub fn with_daq(title: &str, config: DaqAppConfig) -> Result<Self, DesktopError> {
        let mut desktop = Desktop::new();
        desktop.register(title, Box::new(DaqApp::new(config)?))?;
        Ok(desktop)
    }

    pub fn register(
        &mut self,
        title: &str,
        app: Box<dyn Application>,
    ) -> Result<WindowHandle, DesktopError> {
        if self.windows.iter().any(|w| w.title == title) {
            return Err(DesktopError::DuplicateTitle(title.to_string()));
        }
        self.windows.push(Window {
            title: title.to_string(),
            app,
        });
        Ok(WindowHandle(self.windows.len() as u32 - 1))
    }

    pub fn title(&self, handle: WindowHandle) -> Option<&str> {
        self.windows
            .get(handle.0 as usize)
            .map(|w| w.title.as_str())
    }

    pub fn focused(&self) -> Option<WindowHandle> {
        self.focused
    }

    /// Events that arrived with no window focused.
    pub fn dropped_events(&self) -> u64 {
        self.dropped
    }

    pub fn deliver(
        &mut self,
        handle: WindowHandle,
        event: &KeyEvent,
        now: u64,
    ) -> Result<Effect, SinkError> {
        let window = self
            .windows
            .get_mut(handle.0 as usize)
            .ok_or(SinkError::InvalidHandle(handle))?;
        Ok(window.app.on_key(event, now)?)
    }

    pub fn app<T: Application>(&self, handle: WindowHandle) -> Option<&T> {
        self.windows
            .get(handle.0 as usize)?
            .app
            .as_any()
            .downcast_ref::<T>()
    }

    /// Files saved by every acquisition app on this desktop, in save order.
    pub fn saved_files(&self) -> Vec<SavedFile> {
        let mut files: Vec<SavedFile> = self
            .windows
            .iter()
            .filter_map(|w| w.app.as_any().downcast_ref::<DaqApp>())
            .flat_map(|app| app.saved_files().iter().cloned())
            .collect();
        files.sort_by_key(|f| f.saved_at);
        files
    }

    /// Writes one small text file per saved file into `dir`.
    pub fn write_run_output(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        self.saved_files()
            .iter()
            .map(|f| {
                let path = dir.join(&f.name);
                fs::write(
                    &path,
                    format!(
                        "name={}\nsaved_at={}\ncycle={}\n",
                        f.name, f.saved_at, f.cycle
                    ),
                )?;
                Ok(path)
            })
            .collect()
    }
}

impl WindowService for Desktop {
    fn find_window(&self, title: &str) -> Result<WindowHandle, SinkError> {
        self.windows
            .iter()
            .position(|w| w.title == title)
            .map(|i| WindowHandle(i as u32))
            .ok_or_else(|| SinkError::WindowNotFound(title.to_string()))
    }

    fn focus(&mut self, handle: WindowHandle) -> Result<(), SinkError> {
        if handle.0 as usize >= self.windows.len() {
            return Err(SinkError::InvalidHandle(handle));
        }
        self.focused = Some(handle);
        Ok(())
    }
}

impl KeySink for Desktop {
    fn send(&mut self, event: &KeyEvent) -> Result<(), SinkError> {
        match self.focused {
            Some(handle) => self.deliver(handle, event, event.t).map(|_| ()),
            None => {
                self.dropped += 1;
                Ok(())
            }
        }
    }
}
