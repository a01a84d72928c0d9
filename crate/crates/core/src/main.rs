use std::process::ExitCode;

fn main() -> ExitCode {
    magtoffoli::cli::main()
}
