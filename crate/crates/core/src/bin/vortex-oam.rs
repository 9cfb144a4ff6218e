fn main() {
    std::process::exit(vortex_oam::cli::run());
}
