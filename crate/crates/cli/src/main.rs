use std::io::Write;

fn main() {
    let env_seed = std::env::var(repairaf_cli::SEED_ENV).ok();
    let (code, stdout, stderr) = repairaf_cli::main_with(std::env::args_os(), env_seed.as_deref());
    print!("{stdout}");
    eprint!("{stderr}");
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
