fn main() {
    let (code, out) = tjoin_cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
