fn main() { std::process::exit(mkdv_dirac::cli::run_from_env()) }
