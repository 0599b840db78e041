fn main() -> std::process::ExitCode {
    nbraid::cli::main()
}
