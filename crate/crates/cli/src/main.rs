use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(vpdk_cli::run(std::env::args_os()))
}
