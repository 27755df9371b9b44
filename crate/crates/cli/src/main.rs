use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gasket_cli::run(std::env::args_os()))
}
