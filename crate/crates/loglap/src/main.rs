fn main() {
    std::process::exit(loglap::cli::main_entry());
}
