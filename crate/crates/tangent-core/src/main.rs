fn main() {
    std::process::exit(tangent_core::cli::run());
}
