use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = fracgauss::cli::run(&argv, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
