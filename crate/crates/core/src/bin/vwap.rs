fn main() -> std::process::ExitCode {
    vwap_gamma::cli::main()
}
