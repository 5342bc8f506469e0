use clap::Parser;

fn main() {
    let cli = rtg::cli::Cli::parse();
    let code = rtg::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
