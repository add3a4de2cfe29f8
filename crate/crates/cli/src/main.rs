// SPDX-License-Identifier: Apache-2.0

//! `virtuser`: run keystroke scripts against a simulated desktop, convert
//! between key names and scan codes, and bridge byte streams into keys.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use virtuser_core::desktop::{DaqAppConfig, Desktop, UnknownKeyPolicy};
use virtuser_core::keycode::{export_key_table, Action};
use virtuser_core::scancode::{decode_all, encode_into};
use virtuser_core::scheduler::{
    execute, parse_hex, Clock, ExecConfig, ExecutionTrace, Outcome, RealClock, TraceKind,
    VirtualClock,
};
use virtuser_core::script::{
    parse, parse_duration, resolve_key_name, validate, AcquisitionPlan, Cycles, ParseIssue, Script,
    StatementKind,
};
use virtuser_core::sink::{KeySink, OsInjectionSink, WindowService};
use virtuser_core::wedge::{
    serve, Endpoint, HexLines, OutputForm, WedgeConfig, WedgeError, WedgeOutput, WedgeSink,
};

/// Exit status: invalid script or input.
const EXIT_INVALID: u8 = 2;
/// Exit status: a file or endpoint could not be read or written.
const EXIT_IO: u8 = 3;
/// Exit status: the run aborted.
const EXIT_ABORTED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "virtuser",
    version,
    about = "Deterministic keystroke automation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a script and print its issues as `line:col: message`.
    Validate { script: PathBuf },
    /// Execute a script, or the built-in acquisition program if none is given.
    Run(Box<RunArgs>),
    /// Print the Set 2 make and break bytes of each key.
    Encode {
        #[arg(required = true)]
        keys: Vec<String>,
    },
    /// Decode Set 2 bytes given as hex into key strokes.
    Decode {
        #[arg(required = true)]
        hex: Vec<String>,
    },
    /// Turn delimited records from an endpoint into keystrokes.
    Wedge(WedgeArgs),
    /// Print the virtual key table as `NAME<TAB>HEX`.
    Keys,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClockKind {
    Virtual,
    Real,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SinkKind {
    /// The simulated desktop with one acquisition application.
    Desktop,
    /// Operating-system key injection (not available in this build).
    Os,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KeyPolicy {
    Ignore,
    Fail,
}

#[derive(Args)]
struct RunArgs {
    /// Script to execute. Without one, the acquisition program is generated
    /// from the options below.
    script: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "virtual")]
    clock: ClockKind,
    /// Pause between adjacent keystrokes [default: 0 virtual, 20 real].
    #[arg(long)]
    delay_ms: Option<u64>,
    /// Stop each `loop` after this many iterations.
    #[arg(long)]
    loop_limit: Option<u64>,
    /// Write the execution trace here instead of standard output.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write one file per saved acquisition into this directory.
    #[arg(long)]
    outdir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "desktop")]
    sink: SinkKind,
    /// Title of the simulated acquisition window.
    #[arg(long, default_value = "DAQ")]
    window: String,
    /// Measurement time between measure and save (e.g. 2s, 1500ms).
    #[arg(long, value_parser = duration, default_value = "2s")]
    t1: u64,
    /// Idle time after each save.
    #[arg(long, value_parser = duration, default_value = "10s")]
    t0: u64,
    /// Number of cycles, or `forever`.
    #[arg(long, value_parser = cycles, default_value = "3")]
    cycles: Cycles,
    #[arg(long, default_value = "M")]
    measure_keys: String,
    #[arg(long, default_value = "S")]
    save_keys: String,
    /// How long the simulated application takes to measure.
    #[arg(long, value_parser = duration)]
    measurement_ms: Option<u64>,
    /// Saved file name; `{n}` is replaced by the save counter.
    #[arg(long, default_value = "acq_{n}.dat")]
    file_pattern: String,
    /// What the simulated application does with input it does not expect.
    #[arg(long, value_enum, default_value = "ignore")]
    unknown_keys: KeyPolicy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WedgeOut {
    /// One `VK_NAME action` line per key event.
    Events,
    /// One line of hex scan codes per record.
    Scanbytes,
}

#[derive(Args)]
struct WedgeArgs {
    /// `-` for standard input, `tcp://host:port` to accept one connection,
    /// otherwise a file.
    endpoint: String,
    /// Record delimiter: `cr`, `lf`, `tab`, or a single ASCII character.
    #[arg(long, value_parser = delimiter, default_value = "cr")]
    delimiter: u8,
    #[arg(long, value_enum, default_value = "events")]
    out: WedgeOut,
    /// Longest accepted record, in bytes.
    #[arg(long, default_value_t = 256)]
    max_record_len: usize,
}

fn duration(text: &str) -> Result<u64, String> {
    parse_duration(text).ok_or_else(|| format!("invalid duration `{text}` (use ms, s or m)"))
}

fn cycles(text: &str) -> Result<Cycles, String> {
    match text {
        "forever" => Ok(Cycles::Unbounded),
        n => n
            .parse()
            .map(Cycles::Count)
            .map_err(|_| format!("expected a cycle count or `forever`, got `{n}`")),
    }
}

fn delimiter(text: &str) -> Result<u8, String> {
    match text {
        "cr" => Ok(b'\r'),
        "lf" => Ok(b'\n'),
        "tab" => Ok(b'\t'),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        s => Err(format!("invalid delimiter `{s}`")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { script } => validate_cmd(&script),
        Command::Run(args) => run_cmd(&args),
        Command::Encode { keys } => encode_cmd(&keys),
        Command::Decode { hex } => decode_cmd(&hex),
        Command::Wedge(args) => wedge_cmd(&args),
        Command::Keys => keys_cmd(),
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("virtuser: {message}");
    ExitCode::from(code)
}

fn print_issues(issues: &[ParseIssue]) {
    for issue in issues {
        eprintln!("{issue}");
    }
}

/// Reads and checks a script; on failure returns the exit code to use.
fn load_script(path: &Path) -> Result<Script, ExitCode> {
    let src = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format_args!("{}: {e}", path.display())))?;
    let script = parse(&src).map_err(|issues| {
        print_issues(&issues);
        ExitCode::from(EXIT_INVALID)
    })?;
    let issues = validate(&script);
    if !issues.is_empty() {
        print_issues(&issues);
        return Err(ExitCode::from(EXIT_INVALID));
    }
    Ok(script)
}

fn validate_cmd(path: &Path) -> ExitCode {
    match load_script(path) {
        Ok(_) => {
            println!("{}: ok", path.display());
            ExitCode::SUCCESS
        }
        Err(code) => code,
    }
}

fn has_loop(script: &Script) -> bool {
    script
        .statements
        .iter()
        .any(|s| matches!(s.kind, StatementKind::Loop(_)))
}

fn run_cmd(args: &RunArgs) -> ExitCode {
    let script = match &args.script {
        Some(path) => match load_script(path) {
            Ok(script) => script,
            Err(code) => return code,
        },
        None => {
            let plan = AcquisitionPlan {
                window: args.window.clone(),
                measure_keys: args.measure_keys.clone(),
                save_keys: args.save_keys.clone(),
                t1: args.t1,
                t0: args.t0,
                cycles: args.cycles,
            };
            match plan.to_script() {
                Ok(script) => script,
                Err(e) => return fail(EXIT_INVALID, e),
            }
        }
    };
    if args.clock == ClockKind::Virtual && args.loop_limit.is_none() && has_loop(&script) {
        return fail(
            EXIT_INVALID,
            "an unbounded loop on the virtual clock needs --loop-limit",
        );
    }

    let default_delay = match args.clock {
        ClockKind::Virtual => ExecConfig::VIRTUAL_DEFAULT_DELAY,
        ClockKind::Real => ExecConfig::REAL_DEFAULT_DELAY,
    };
    let cfg = ExecConfig {
        inter_key_delay: args.delay_ms.unwrap_or(default_delay),
        loop_limit: args.loop_limit,
    };
    let mut clock: Box<dyn Clock> = match args.clock {
        ClockKind::Virtual => Box::new(VirtualClock::new()),
        ClockKind::Real => Box::new(RealClock::new()),
    };

    let (trace, desktop) = match args.sink {
        SinkKind::Desktop => {
            let daq = DaqAppConfig {
                measure_trigger: args.measure_keys.clone(),
                save_trigger: args.save_keys.clone(),
                measurement_ms: args.measurement_ms.unwrap_or(args.t1),
                file_pattern: args.file_pattern.clone(),
                unknown_keys: match args.unknown_keys {
                    KeyPolicy::Ignore => UnknownKeyPolicy::Ignore,
                    KeyPolicy::Fail => UnknownKeyPolicy::Fail,
                },
            };
            let mut desktop = match Desktop::with_daq(&args.window, daq) {
                Ok(d) => d,
                Err(e) => return fail(EXIT_INVALID, e),
            };
            (
                run_on(&script, clock.as_mut(), &mut desktop, &cfg),
                Some(desktop),
            )
        }
        SinkKind::Os => (
            run_on(&script, clock.as_mut(), &mut OsInjectionSink, &cfg),
            None,
        ),
    };

    // The trace is persisted even when the run aborted.
    let written = match &args.trace {
        Some(path) => fs::File::create(path).and_then(|f| {
            let mut out = BufWriter::new(f);
            trace.write_tsv(&mut out)?;
            out.flush()
        }),
        None => trace.write_tsv(io::stdout().lock()),
    };
    if let Err(e) = written {
        return fail(EXIT_IO, format_args!("writing trace: {e}"));
    }

    let saved = desktop.as_ref().map_or(0, |d| d.saved_files().len());
    if let (Some(dir), Some(desktop)) = (&args.outdir, &desktop) {
        if let Err(e) = desktop.write_run_output(dir) {
            return fail(EXIT_IO, format_args!("{}: {e}", dir.display()));
        }
    }
    if let Some(d) = &desktop {
        if d.dropped_events() > 0 {
            warn!(
                "{} key events arrived with no window focused",
                d.dropped_events()
            );
        }
    }
    let keys = trace.of_kind(TraceKind::KeyEmit).count();
    match &trace.outcome {
        Outcome::Completed => {
            eprintln!("completed: {keys} key events, {saved} files saved");
            ExitCode::SUCCESS
        }
        Outcome::Aborted(e) => {
            eprintln!("aborted after {keys} key events, {saved} files saved");
            fail(EXIT_ABORTED, e)
        }
    }
}

fn run_on<T: WindowService + KeySink>(
    script: &Script,
    clock: &mut dyn Clock,
    target: &mut T,
    cfg: &ExecConfig,
) -> ExecutionTrace {
    info!("running {} top-level statements", script.statements.len());
    execute(script, clock, target, cfg)
}

fn encode_cmd(names: &[String]) -> ExitCode {
    let mut lines = Vec::new();
    for name in names {
        let key = match resolve_key_name(name) {
            Ok(key) => key,
            Err(e) => return fail(EXIT_INVALID, e),
        };
        let mut bytes = Vec::new();
        let result = encode_into(key, Action::Press, &mut bytes)
            .and_then(|_| encode_into(key, Action::Release, &mut bytes));
        if let Err(e) = result {
            return fail(EXIT_INVALID, e);
        }
        lines.push(virtuser_core::scheduler::hex(&bytes));
    }
    for line in lines {
        println!("{line}");
    }
    ExitCode::SUCCESS
}

fn decode_cmd(hex: &[String]) -> ExitCode {
    let bytes = match parse_hex(&hex.join(" ")) {
        Ok(bytes) => bytes,
        Err(e) => return fail(EXIT_INVALID, e),
    };
    match decode_all(&bytes) {
        Ok(strokes) => {
            for s in strokes {
                println!("{} {}", s.key.name(), s.action.as_str());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_INVALID, e),
    }
}

/// Prints each delivered key event as `VK_NAME action`.
struct EventLines<W>(W);

impl<W: Write> WedgeSink for EventLines<W> {
    fn deliver(&mut self, output: WedgeOutput) -> Result<(), WedgeError> {
        let lines: Vec<String> = match output {
            WedgeOutput::Events(events) => events
                .iter()
                .map(|e| format!("{} {}", e.key.name(), e.action.as_str()))
                .collect(),
            WedgeOutput::Bytes(bytes) => decode_all(&bytes)?
                .iter()
                .map(|s| format!("{} {}", s.key.name(), s.action.as_str()))
                .collect(),
        };
        for line in lines {
            writeln!(self.0, "{line}")
                .map_err(|e| virtuser_core::sink::SinkError::Other(e.to_string()))?;
        }
        Ok(())
    }
}

fn wedge_cmd(args: &WedgeArgs) -> ExitCode {
    let cfg = WedgeConfig {
        delimiter: args.delimiter,
        max_record_len: args.max_record_len,
        output: match args.out {
            WedgeOut::Events => OutputForm::KeyEvents,
            WedgeOut::Scanbytes => OutputForm::ScanBytes,
        },
        ..WedgeConfig::default()
    };
    let endpoint = Endpoint::parse(&args.endpoint);
    let input = match endpoint.open() {
        Ok(input) => input,
        Err(e) => return fail(EXIT_IO, format_args!("{}: {e}", args.endpoint)),
    };
    let stdout = io::stdout().lock();
    let result = match args.out {
        WedgeOut::Events => serve(input, &cfg, &mut EventLines(stdout)),
        WedgeOut::Scanbytes => serve(input, &cfg, &mut HexLines(stdout)),
    };
    match result {
        Ok(summary) => {
            match args.out {
                WedgeOut::Events => println!("{summary}"),
                WedgeOut::Scanbytes => eprintln!("{summary}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_IO, e),
    }
}

fn keys_cmd() -> ExitCode {
    match export_key_table(io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_IO, e),
    }
}
