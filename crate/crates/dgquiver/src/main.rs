fn main() {
    std::process::exit(dgquiver::cli::main_entry());
}
