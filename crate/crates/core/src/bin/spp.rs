fn main() {
    std::process::exit(spp_core::cli::run(std::env::args_os()));
}
