fn main() {
    std::process::exit(pll_cli::run(std::env::args_os().collect()));
}
