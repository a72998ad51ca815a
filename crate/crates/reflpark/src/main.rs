fn main() { std::process::exit(reflpark::cli::run()); }
