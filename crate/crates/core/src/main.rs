fn main() {
    std::process::exit(coremix::experiments::cli::cli_main(std::env::args_os()));
}
