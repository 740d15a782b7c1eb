fn main() {
    tropfan::cli::configure_threads();
    let code = tropfan::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
