use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = sp_schubert_cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
