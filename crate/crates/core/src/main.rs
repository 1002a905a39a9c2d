fn main() -> std::process::ExitCode {
    nls6::cli::main_entry()
}
