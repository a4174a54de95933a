use std::process::ExitCode;

fn main() -> ExitCode {
    rsp_forge::cli::main_with(std::env::args_os())
}
