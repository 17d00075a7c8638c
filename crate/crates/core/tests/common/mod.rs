use std::path::{Path, PathBuf};
use std::process::Command;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path() -> PathBuf {
    manifest_dir().join("tests/golden/session.txt")
}

/// Runs each line of the scripted session through the binary and returns the
/// transcript: the command, its stdout and stderr, and its exit code.
pub fn session_transcript() -> String {
    let dir = manifest_dir();
    let script = std::fs::read_to_string(dir.join("tests/data/session.cmds")).unwrap();
    let mut out = String::new();
    for line in script.lines().filter(|l| !l.trim().is_empty()) {
        let output = Command::new(env!("CARGO_BIN_EXE_cstlab"))
            .current_dir(&dir)
            .args(["--workspace", "tests/data/session.ws"])
            .args(line.split_whitespace())
            .output()
            .unwrap();
        out.push_str(&format!("$ {line}\n"));
        out.push_str(&String::from_utf8(output.stdout).unwrap());
        out.push_str(&String::from_utf8(output.stderr).unwrap());
        out.push_str(&format!("[exit {}]\n", output.status.code().unwrap_or(-1)));
    }
    out
}

/// Writes the golden file when `CSTLAB_BLESS` is set.
pub fn maybe_bless(transcript: &str, path: &Path) {
    if std::env::var_os("CSTLAB_BLESS").is_some() {
        std::fs::write(path, transcript).unwrap();
    }
}
