fn main() {
    std::process::exit(floquet_bands::cli::run(std::env::args_os()));
}
