use std::process::ExitCode;

fn main() -> ExitCode {
    crimenet::cli::main_with_args(std::env::args_os())
}
