//! Multiple-choice QA answer extraction (options A through E).

use std::sync::OnceLock;

use regex::Regex;

fn marker_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // A line starting with ### then a letter A-E, with nothing
    // alphanumeric glued to the letter.
    RE.get_or_init(|| Regex::new(r"^###\s*([A-E])([^A-Za-z0-9].*)?$").unwrap())
}

/// Scans for the last line beginning with `###` followed by a letter in
/// A..=E. Returns `None` when no such line exists (the thought keeps
/// going as an intermediate) or when the letter is out of domain.
pub fn parse_answer_letter(text: &str) -> Option<char> {
    let mut found = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(caps) = marker_regex().captures(line) {
            found = caps.get(1).unwrap().as_str().chars().next();
        }
    }
    found
}
