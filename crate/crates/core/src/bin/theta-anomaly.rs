fn main() {
    let code = theta_anomaly::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
