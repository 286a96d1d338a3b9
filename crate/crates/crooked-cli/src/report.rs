//! Plain structured text result files: `key = value` lines and simple
//! arrays, written in a fixed order.

use std::fmt::Write as _;

#[derive(Default)]
pub struct Report {
    body: String,
}

impl Report {
    pub fn new(title: &str) -> Report {
        let mut r = Report::default();
        let _ = writeln!(r.body, "# {title}");
        r
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.body, "{key} = {value}");
    }

    pub fn kv_f64(&mut self, key: &str, value: f64) {
        let _ = writeln!(self.body, "{key} = {value:.12e}");
    }

    pub fn array(&mut self, key: &str, values: &[f64]) {
        let joined: Vec<String> = values.iter().map(|v| format!("{v:.12e}")).collect();
        let _ = writeln!(self.body, "{key} = [{}]", joined.join(", "));
    }

    pub fn section(&mut self, name: &str) {
        let _ = writeln!(self.body, "\n[{name}]");
    }

    pub fn finish(self) -> String {
        self.body
    }
}
