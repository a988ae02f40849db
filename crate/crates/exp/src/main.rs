fn main() {
    std::process::exit(ermrer_exp::cli::cli_main(std::env::args_os()));
}
