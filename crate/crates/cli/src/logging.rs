use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Quiet,
    Info,
    Debug,
}

impl Level {
    /// Verbosity from the `KIAE_LOG` environment variable (default info).
    pub fn from_env() -> Level {
        match std::env::var("KIAE_LOG").ok().as_deref() {
            Some("quiet") => Level::Quiet,
            Some("debug") => Level::Debug,
            _ => Level::Info,
        }
    }
}

/// Plain-text run log: every line goes to the file; lines at or below the
/// echo level also go to stderr.
pub struct RunLog {
    file: Option<BufWriter<File>>,
    echo: Level,
}

impl RunLog {
    pub fn to_file(path: &Path, echo: Level) -> std::io::Result<RunLog> {
        Ok(RunLog {
            file: Some(BufWriter::new(File::create(path)?)),
            echo,
        })
    }

    /// Log that only echoes to stderr (no file).
    pub fn stderr_only(echo: Level) -> RunLog {
        RunLog { file: None, echo }
    }

    pub fn line(&mut self, level: Level, msg: &str) {
        let tag = match level {
            Level::Quiet => "error",
            Level::Info => "info",
            Level::Debug => "debug",
        };
        if let Some(f) = &mut self.file {
            let _ = writeln!(f, "[{tag}] {msg}");
        }
        if level <= self.echo {
            eprintln!("[{tag}] {msg}");
        }
    }

    pub fn info(&mut self, msg: &str) {
        self.line(Level::Info, msg);
    }

    pub fn debug(&mut self, msg: &str) {
        self.line(Level::Debug, msg);
    }

    pub fn flush(&mut self) {
        if let Some(f) = &mut self.file {
            let _ = f.flush();
        }
    }
}

impl Drop for RunLog {
    fn drop(&mut self) {
        self.flush();
    }
}
