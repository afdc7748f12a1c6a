//! Structured log events, one per line: `<level> <event> <key=value>...`.

use std::fmt;
use std::io::Write;
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Error,
    Warn,
    Info,
    Debug,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Error => "error",
            Level::Warn => "warn",
            Level::Info => "info",
            Level::Debug => "debug",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub level: Level,
    pub name: &'static str,
    pub fields: Vec<(String, String)>,
}

impl Event {
    pub fn new(level: Level, name: &'static str) -> Self {
        Event {
            level,
            name,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.level.name(), self.name)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

pub trait Logger: Send + Sync {
    fn enabled(&self, level: Level) -> bool;
    fn emit(&self, event: &Event);

    fn log(&self, event: Event) {
        if self.enabled(event.level) {
            self.emit(&event);
        }
    }
}

/// Writes events to stderr.
#[derive(Debug, Clone)]
pub struct ConsoleLogger {
    verbosity: Level,
}

impl ConsoleLogger {
    pub fn new(verbosity: Level) -> Self {
        ConsoleLogger { verbosity }
    }

    /// Only errors.
    pub fn silent() -> Self {
        ConsoleLogger::new(Level::Error)
    }
}

impl Default for ConsoleLogger {
    fn default() -> Self {
        ConsoleLogger::new(Level::Info)
    }
}

impl Logger for ConsoleLogger {
    fn enabled(&self, level: Level) -> bool {
        level <= self.verbosity
    }

    fn emit(&self, event: &Event) {
        let _ = writeln!(std::io::stderr().lock(), "{event}");
    }
}

/// Keeps events in memory.
#[derive(Debug)]
pub struct MemoryLogger {
    verbosity: Level,
    events: Mutex<Vec<Event>>,
}

impl MemoryLogger {
    pub fn new(verbosity: Level) -> Self {
        MemoryLogger {
            verbosity,
            events: Mutex::new(Vec::new()),
        }
    }

    pub fn events(&self) -> Vec<Event> {
        self.events.lock().unwrap().clone()
    }

    pub fn lines(&self) -> Vec<String> {
        self.events().iter().map(ToString::to_string).collect()
    }
}

impl Logger for MemoryLogger {
    fn enabled(&self, level: Level) -> bool {
        level <= self.verbosity
    }

    fn emit(&self, event: &Event) {
        self.events.lock().unwrap().push(event.clone());
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NullLogger;

impl Logger for NullLogger {
    fn enabled(&self, _: Level) -> bool {
        false
    }

    fn emit(&self, _: &Event) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_filtering() {
        let log = MemoryLogger::new(Level::Info);
        log.log(Event::new(Level::Info, "code_found").with("index", 1).with("d", 4));
        log.log(Event::new(Level::Debug, "node_expanded").with("depth", 2));
        assert_eq!(log.lines(), vec!["info code_found index=1 d=4"]);
        let quiet = MemoryLogger::new(Level::Error);
        quiet.log(Event::new(Level::Info, "search_started"));
        quiet.log(Event::new(Level::Error, "io").with("path", "x"));
        assert_eq!(quiet.lines(), vec!["error io path=x"]);
        assert!(!ConsoleLogger::silent().enabled(Level::Warn));
    }
}
