fn main() -> std::process::ExitCode {
    pvlab::cli::main_with_args(std::env::args_os())
}
