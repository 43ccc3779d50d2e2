fn main() {
    std::process::exit(rmt_core::cli::main_with_args(std::env::args_os()));
}
