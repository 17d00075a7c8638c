use std::process::ExitCode;

use cstlab::cli::{parse_workspace, run_args, Report, Workspace, VERBS};

const USAGE: &str = "usage: cstlab [--workspace FILE] <verb> [args]";

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    let mut ws = Workspace::default();
    if args.first().map(String::as_str) == Some("--workspace") {
        let Some(path) = args.get(1).cloned() else {
            return finish(Report::usage("`--workspace` needs a file"));
        };
        args.drain(..2);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return finish(Report { code: 1, text: format!("error: {path}: {e}\n") }),
        };
        ws = match parse_workspace(&text) {
            Ok(ws) => ws,
            Err(e) => return finish(Report::usage(format!("{path}: {e}"))),
        };
    }
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        println!("{USAGE}\nverbs: {}", VERBS.join(", "));
        return ExitCode::SUCCESS;
    }
    finish(run_args(&args, &ws))
}

fn finish(report: Report) -> ExitCode {
    if report.code == 0 {
        print!("{}", report.text);
    } else {
        eprint!("{}", report.text);
    }
    ExitCode::from(report.code as u8)
}
