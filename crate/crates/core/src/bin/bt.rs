fn main() {
    std::process::exit(bruhat_tits::cli::main_entry(std::env::args_os()));
}
