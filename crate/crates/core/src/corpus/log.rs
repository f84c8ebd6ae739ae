use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Codebook;
use crate::error::{Error, Result};

/// One coded student message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedEvent {
    pub student_id: String,
    pub seq_index: u64,
    pub codes: Vec<String>,
    /// Raw message text. Carried through I/O, never used in computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudentSession {
    pub student_id: String,
    /// Sorted by strictly increasing `seq_index`.
    pub events: Vec<CodedEvent>,
}

impl StudentSession {
    pub fn code_count(&self) -> usize {
        self.events.iter().map(|e| e.codes.len()).sum()
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str, line: usize) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::parse(line, format!("missing field '{name}'")))
}

fn parse_record(raw: &str, line: usize, codebook: &Codebook) -> Result<CodedEvent> {
    let value: Value = serde_json::from_str(raw).map_err(|e| Error::parse(line, format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(line, "record is not a JSON object"))?;

    let student_id = match field(obj, "student_id", line)? {
        Value::String(s) if !s.is_empty() => s.clone(),
        _ => return Err(Error::parse(line, "student_id must be a non-empty string")),
    };
    let seq_index = field(obj, "seq_index", line)?
        .as_u64()
        .ok_or_else(|| Error::parse(line, "seq_index must be a non-negative integer"))?;
    let codes_raw = field(obj, "codes", line)?
        .as_array()
        .ok_or_else(|| Error::parse(line, "codes must be an array of strings"))?;
    if codes_raw.is_empty() {
        return Err(Error::parse(line, "empty codes list"));
    }
    let mut codes = Vec::with_capacity(codes_raw.len());
    for c in codes_raw {
        let code = c
            .as_str()
            .ok_or_else(|| Error::parse(line, "codes must be an array of strings"))?;
        if !codebook.contains(code) {
            return Err(Error::parse(line, format!("unknown code '{code}'")));
        }
        if codes.iter().any(|x: &String| x == code) {
            return Err(Error::parse(line, format!("code '{code}' repeated within one event")));
        }
        codes.push(code.to_string());
    }
    let text = match obj.get("text") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(Error::parse(line, "text must be a string")),
    };

    Ok(CodedEvent {
        student_id,
        seq_index,
        codes,
        text,
    })
}

/// Parses a line-delimited JSON interaction log.
///
/// Blank lines are skipped. Sessions come back in order of each student's
/// first appearance; events within a session are sorted by `seq_index`.
pub fn parse_event_log<R: BufRead>(reader: R, codebook: &Codebook) -> Result<Vec<StudentSession>> {
    let mut order: Vec<String> = Vec::new();
    let mut by_student: HashMap<String, Vec<CodedEvent>> = HashMap::new();
    let mut seen: HashSet<(String, u64)> = HashSet::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let event = parse_record(trimmed, lineno, codebook)?;
        if !seen.insert((event.student_id.clone(), event.seq_index)) {
            return Err(Error::parse(
                lineno,
                format!(
                    "duplicate seq_index {} for student '{}'",
                    event.seq_index, event.student_id
                ),
            ));
        }
        let bucket = by_student.entry(event.student_id.clone()).or_insert_with(|| {
            order.push(event.student_id.clone());
            Vec::new()
        });
        bucket.push(event);
    }

    Ok(order
        .into_iter()
        .map(|student_id| {
            let mut events = by_student.remove(&student_id).unwrap_or_default();
            events.sort_by_key(|e| e.seq_index);
            StudentSession { student_id, events }
        })
        .collect())
}

/// Writes sessions in the same line-delimited format `parse_event_log` reads.
pub fn write_event_log<W: Write>(sessions: &[StudentSession], mut writer: W) -> Result<()> {
    for session in sessions {
        for event in &session.events {
            serde_json::to_writer(&mut writer, event).map_err(std::io::Error::from)?;
            writer.write_all(b"\n")?;
        }
    }
    writer.flush()?;
    Ok(())
}
