use std::process::ExitCode;

fn main() -> ExitCode {
    subpel::cli::main_with_args(std::env::args_os())
}
