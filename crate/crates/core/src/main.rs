fn main() {
    std::process::exit(nichols_engine::cli::run(std::env::args_os()));
}
