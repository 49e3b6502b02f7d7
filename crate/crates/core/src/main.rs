use std::process::ExitCode;

fn main() -> ExitCode {
    rhombus_saw::cli::main_with_args(std::env::args_os())
}
