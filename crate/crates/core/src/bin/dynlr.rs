fn main() {
    std::process::exit(dynlr::cli::main());
}
