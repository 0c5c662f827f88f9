//! Subprocess sequence oracles.
//!
//! Protocol: the parent writes one decimal integer n per line to the child's
//! standard input; the child replies with exactly one line containing a
//! rational ("p/q" or "p") and flushes. Every request is subject to a
//! timeout; any malformed reply, timeout, or child death aborts the
//! evaluation with an [`EvalError`].

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use crate::error::EvalError;
use crate::rat::{parse_rat, Rat};
use crate::sequence::OracleSequence;

/// Default per-request timeout, overridable via `SEQDIM_ORACLE_TIMEOUT`
/// (seconds, fractional allowed).
pub fn default_timeout() -> Duration {
    if let Ok(v) = std::env::var("SEQDIM_ORACLE_TIMEOUT") {
        if let Ok(secs) = v.trim().parse::<f64>() {
            if secs > 0.0 {
                return Duration::from_secs_f64(secs);
            }
        }
    }
    Duration::from_secs(10)
}

struct OracleProcess {
    child: Child,
    stdin: ChildStdin,
    replies: Receiver<std::io::Result<String>>,
}

impl OracleProcess {
    fn spawn(command: &str) -> Result<Self, EvalError> {
        let mut cmd = Command::new("/bin/sh");
        cmd.arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit());
        // Own process group, so dropping the handle can take down the whole
        // pipeline the shell may have spawned, not just the shell.
        #[cfg(unix)]
        {
            use std::os::unix::process::CommandExt;
            cmd.process_group(0);
        }
        let mut child = cmd
            .spawn()
            .map_err(|e| EvalError::Oracle(format!("failed to spawn {command:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(OracleProcess {
            child,
            stdin,
            replies: rx,
        })
    }

    fn query(&mut self, n: i64, timeout: Duration) -> Result<Rat, EvalError> {
        writeln!(self.stdin, "{n}")
            .and_then(|_| self.stdin.flush())
            .map_err(|e| EvalError::Oracle(format!("failed to write index {n}: {e}")))?;
        let line = match self.replies.recv_timeout(timeout) {
            Ok(Ok(line)) => line,
            Ok(Err(e)) => {
                return Err(EvalError::Oracle(format!(
                    "failed to read reply for {n}: {e}"
                )))
            }
            Err(RecvTimeoutError::Timeout) => {
                return Err(EvalError::Oracle(format!(
                    "timeout after {:?} waiting for reply to {n}",
                    timeout
                )))
            }
            Err(RecvTimeoutError::Disconnected) => {
                return Err(EvalError::Oracle(format!(
                    "oracle process exited before replying to {n}"
                )))
            }
        };
        parse_rat(&line)
            .map_err(|e| EvalError::Oracle(format!("malformed reply {line:?} for index {n}: {e}")))
    }
}

impl Drop for OracleProcess {
    fn drop(&mut self) {
        #[cfg(unix)]
        unsafe {
            libc::kill(-(self.child.id() as i32), libc::SIGKILL);
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Build an [`OracleSequence`] backed by an external command.
///
/// The process is spawned lazily on the first query, so equations can be
/// constructed and serialized without ever running the command. All clones
/// of the returned handle share one process and one cache.
pub fn command_oracle(command: impl Into<String>, timeout: Duration) -> OracleSequence {
    let command = command.into();
    let spawn_command = command.clone();
    let mut process: Option<OracleProcess> = None;
    OracleSequence::with_command(command, move |n| {
        if process.is_none() {
            process = Some(OracleProcess::spawn(&spawn_command)?);
        }
        process.as_mut().unwrap().query(n, timeout)
    })
}
