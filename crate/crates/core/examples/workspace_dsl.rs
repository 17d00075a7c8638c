//! Parsing a workspace and running CLI verbs against it in-process.

use cstlab::cli::{parse_workspace, run_args};

const WORKSPACE: &str = "
signature G { E/2 }
structure A : G { size 2; E 0 1 }
structure B : G { size 2; E 1 0 }
graph P { size 3; 0 1; 1 2 }
tree T { .; 0; 1 }
";

fn main() {
    let ws = parse_workspace(WORKSPACE).unwrap();
    print!("{ws}");
    for line in ["iso A B", "kb T", "edge-root P 0 2 --budget 2", "ulm p=2 parts=2,1", "rank Q"] {
        let args: Vec<String> = line.split_whitespace().map(String::from).collect();
        let report = run_args(&args, &ws);
        print!("$ {line}\n{}[exit {}]\n", report.text, report.code);
    }
    match parse_workspace("signature G { E/ }") {
        Err(e) => println!("syntax error reported at {e}"),
        Ok(_) => unreachable!(),
    }
}
