//! Plain-text reports ending in one `RESULT` line of `key=value` fields.

use std::fmt;

#[derive(Debug, Default)]
pub struct Report {
    item: String,
    lines: Vec<String>,
    values: Vec<(String, String)>,
    failures: Vec<String>,
}

impl Report {
    pub fn new(item: &str) -> Self {
        Report {
            item: item.to_string(),
            ..Default::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Adds a footer field. Spaces are dropped so the footer splits on
    /// whitespace.
    pub fn value(&mut self, k: &str, v: impl fmt::Display) {
        self.values
            .push((k.to_string(), v.to_string().replace(' ', "")));
    }

    /// Records a check; a false condition makes the report fail.
    pub fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.lines.push(format!(
            "check {}: {what}",
            if ok { "ok" } else { "FAILED" }
        ));
        if !ok {
            self.failures.push(what);
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        write!(
            f,
            "RESULT item={} status={}",
            self.item,
            if self.ok() { "ok" } else { "fail" }
        )?;
        for (k, v) in &self.values {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)
    }
}
