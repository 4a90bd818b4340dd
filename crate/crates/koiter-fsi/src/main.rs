fn main() {
    std::process::exit(koiter_fsi::cli::run());
}
