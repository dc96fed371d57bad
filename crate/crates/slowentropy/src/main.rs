use std::process::ExitCode;

fn main() -> ExitCode {
    slowentropy::cli::run()
}
