use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = nonrational::cli::run(std::env::args_os());
    if outcome.status == 0 {
        print!("{}", outcome.report);
    } else {
        eprint!("{}", outcome.report);
    }
    ExitCode::from(outcome.status as u8)
}
