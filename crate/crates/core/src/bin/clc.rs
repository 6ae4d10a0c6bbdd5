fn main() {
    let code = cl_structures::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
