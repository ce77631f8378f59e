//! Line-delimited JSON transcripts: one `ClassicalMessage` per line.

use std::io::{BufRead, Write};

use cbqsdc_core::protocol::ClassicalMessage;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TranscriptIoError {
    #[error("transcript line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("transcript i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub fn write_jsonl<W: Write>(messages: &[ClassicalMessage], mut out: W) -> Result<(), TranscriptIoError> {
    for m in messages {
        serde_json::to_writer(&mut out, m).map_err(|e| TranscriptIoError::Io(e.into()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads messages back, skipping blank lines.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<ClassicalMessage>, TranscriptIoError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let m = serde_json::from_str(&line).map_err(|source| TranscriptIoError::Parse { line: i + 1, source })?;
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cbqsdc_core::protocol::{run_scenario, RunConfig, Scenario};

    #[test]
    fn round_trip() {
        let r = run_scenario(&RunConfig::new(Scenario::Network, 2, 3, 1)).unwrap();
        let mut buf = Vec::new();
        write_jsonl(r.transcript.public(), &mut buf).unwrap();
        assert_eq!(buf.iter().filter(|b| **b == b'\n').count(), r.transcript.public().len());
        let back = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, r.transcript.public());
    }

    #[test]
    fn bad_line_is_reported() {
        let err = read_jsonl("\n{oops}\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TranscriptIoError::Parse { line: 2, .. }));
    }
}
