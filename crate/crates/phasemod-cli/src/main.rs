use phasemod_cli::{args, commands};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(&argv));
}

fn run(argv: &[String]) -> i32 {
    let command = match args::parse(argv) {
        Ok(command) => command,
        Err(err) => {
            eprintln!("{}", err.message);
            return err.exit_code;
        }
    };
    match commands::execute(&command.invocation) {
        Ok(outcome) => {
            if let Some(path) = &command.out {
                if let Err(err) = std::fs::write(path, &outcome.output) {
                    eprintln!("cannot write {}: {err}", path.display());
                    return 2;
                }
            } else {
                print!("{}", outcome.output);
            }
            outcome.exit_code
        }
        Err(err) => {
            eprintln!("{}", err.message);
            err.exit_code
        }
    }
}
