//! External TPTP provers run as subprocesses.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use super::{Outcome, ProofStatus, GRACE};

/// Status named by the first `SZS status <S>` line of `output`.
pub fn parse_szs(output: &str) -> Option<ProofStatus> {
    output.lines().find_map(|line| {
        let rest = &line[line.find("SZS status")? + "SZS status".len()..];
        let word = rest.split_whitespace().next()?;
        Some(match word {
            "Theorem" => ProofStatus::Thm,
            "CounterSatisfiable" => ProofStatus::Csa,
            "Timeout" | "ResourceOut" => ProofStatus::Tmo,
            _ => ProofStatus::Unk,
        })
    })
}

/// Substitutes `{file}` and `{timeout}` in the command words. Without a
/// `{file}` placeholder the problem file is passed as the last argument.
pub fn instantiate(command: &[String], file: &Path, timeout: Duration) -> Vec<String> {
    let file = file.display().to_string();
    let secs = timeout.as_secs().max(1).to_string();
    let mut args: Vec<String> =
        command.iter().map(|w| w.replace("{file}", &file).replace("{timeout}", &secs)).collect();
    if !command.iter().any(|w| w.contains("{file}")) {
        args.push(file);
    }
    args
}

fn drain(mut pipe: impl Read + Send + 'static, tx: mpsc::Sender<String>) {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = pipe.read_to_end(&mut buf);
        let _ = tx.send(String::from_utf8_lossy(&buf).into_owned());
    });
}

/// Writes `problem` to a fresh file and runs `command` on it. The process is
/// killed shortly before `timeout` plus the grace period has elapsed.
pub fn prove_external(problem: &str, command: &[String], timeout: Duration, keep_dir: Option<&Path>) -> Outcome {
    let err = |msg: String| Outcome::new(ProofStatus::Err, None, msg);
    if command.is_empty() {
        return err("empty prover command".into());
    }
    let file = match keep_dir {
        Some(dir) => tempfile::Builder::new().prefix("problem-").suffix(".p").disable_cleanup(true).tempfile_in(dir),
        None => tempfile::Builder::new().prefix("problem-").suffix(".p").tempfile(),
    };
    let mut file = match file {
        Ok(f) => f,
        Err(e) => return err(format!("cannot create problem file: {e}")),
    };
    if let Err(e) = file.write_all(problem.as_bytes()).and_then(|_| file.flush()) {
        return err(format!("cannot write problem file: {e}"));
    }
    let args = instantiate(command, file.path(), timeout);
    let started = Instant::now();
    let mut child = match Command::new(&args[0])
        .args(&args[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return err(format!("cannot start `{}`: {e}", args[0])),
    };
    let (tx, rx) = mpsc::channel();
    if let Some(out) = child.stdout.take() {
        drain(out, tx.clone());
    }
    if let Some(e) = child.stderr.take() {
        drain(e, tx.clone());
    }
    drop(tx);
    let kill_at = started + timeout + GRACE - Duration::from_millis(150);
    let mut killed = false;
    let exit = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if Instant::now() >= kill_at => {
                let _ = child.kill();
                let _ = child.wait();
                killed = true;
                break None;
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return err(format!("waiting for prover failed: {e}")),
        }
    };
    // Descendants may keep the pipes open, so reading is bounded as well.
    let mut output = String::new();
    let read_until = Instant::now().max(kill_at) + Duration::from_millis(50);
    for _ in 0..2 {
        match rx.recv_timeout(read_until.saturating_duration_since(Instant::now())) {
            Ok(text) => output.push_str(&text),
            Err(_) => break,
        }
    }
    let status = if killed {
        ProofStatus::Tmo
    } else {
        match parse_szs(&output) {
            Some(s) => s,
            None if exit.is_some_and(|e| !e.success()) => ProofStatus::Err,
            None => ProofStatus::Unk,
        }
    };
    Outcome::new(status, None, output)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(script: &str) -> Vec<String> {
        vec!["sh".into(), "-c".into(), script.into()]
    }

    #[test]
    fn szs_lines() {
        assert_eq!(parse_szs("% SZS status Theorem for p"), Some(ProofStatus::Thm));
        assert_eq!(parse_szs("# SZS status CounterSatisfiable"), Some(ProofStatus::Csa));
        assert_eq!(parse_szs("SZS status ResourceOut"), Some(ProofStatus::Tmo));
        assert_eq!(parse_szs("SZS status GaveUp"), Some(ProofStatus::Unk));
        assert_eq!(parse_szs("x\nSZS status Theorem\nSZS status CounterSatisfiable"), Some(ProofStatus::Thm));
        assert_eq!(parse_szs("no status here"), None);
    }

    #[test]
    fn placeholders() {
        let cmd: Vec<String> = vec!["prover".into(), "-t".into(), "{timeout}".into()];
        let args = instantiate(&cmd, Path::new("/tmp/x.p"), Duration::from_secs(7));
        assert_eq!(args, ["prover", "-t", "7", "/tmp/x.p"]);
        let cmd: Vec<String> = vec!["p".into(), "--in={file}".into()];
        assert_eq!(instantiate(&cmd, Path::new("f"), Duration::from_secs(1)), ["p", "--in=f"]);
    }

    #[test]
    fn runs_a_script_on_the_problem_file() {
        let o = prove_external("fof(a, axiom, p).", &sh("grep -q 'fof(a' \"$0\" && echo 'SZS status Theorem'"), Duration::from_secs(5), None);
        assert_eq!(o.status, ProofStatus::Thm, "{}", o.output);
    }

    #[test]
    fn failures() {
        let missing = prove_external("", &["/nonexistent/prover".into()], Duration::from_secs(1), None);
        assert_eq!(missing.status, ProofStatus::Err);
        assert_eq!(prove_external("", &sh("exit 3"), Duration::from_secs(1), None).status, ProofStatus::Err);
        assert_eq!(prove_external("", &sh("true"), Duration::from_secs(1), None).status, ProofStatus::Unk);
    }

    #[test]
    fn hung_prover_is_killed() {
        let start = Instant::now();
        let o = prove_external("", &sh("sleep 30"), Duration::from_secs(1), None);
        assert_eq!(o.status, ProofStatus::Tmo);
        assert!(start.elapsed() <= Duration::from_secs(1) + GRACE, "{:?}", start.elapsed());
    }

    #[test]
    fn kept_files_stay() {
        let dir = tempfile::tempdir().unwrap();
        prove_external("fof(a, axiom, p).", &sh("true"), Duration::from_secs(1), Some(dir.path()));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
