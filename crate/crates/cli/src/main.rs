use clap::Parser;

fn main() {
    let cli = schedrisk_cli::Cli::parse();
    let code = schedrisk_cli::run(&cli, &mut std::io::stdout().lock());
    std::process::exit(code);
}
