fn main() {
    std::process::exit(rotxfmr::cli::run());
}
