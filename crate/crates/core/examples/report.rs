//! Drive the command-line front end in-process and print its JSON Lines.
//!
//!     cargo run --example report

fn main() {
    let code = pisotlab::cli::main_with(["pisotlab", "certify", "--name", "plastic"]);
    eprintln!("exit code {code}");
    let code = pisotlab::cli::main_with(["pisotlab", "certify", "--poly", "-3,-1,1"]);
    eprintln!("exit code {code}");
}
