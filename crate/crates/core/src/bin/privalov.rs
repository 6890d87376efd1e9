fn main() { std::process::exit(privalov::cli::main()) }
