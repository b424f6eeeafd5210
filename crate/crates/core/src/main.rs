fn main() {
    std::process::exit(cvmem::cli::dispatch(std::env::args_os()));
}
