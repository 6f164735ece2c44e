use std::io::Write;

fn main() {
    let run = stringy_core::cli::run(std::env::args_os());
    let text_error = run.report.error.is_some() && !run.output.trim_start().starts_with('{');
    if text_error {
        let _ = std::io::stderr().write_all(run.output.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(run.output.as_bytes());
    }
    std::process::exit(run.exit_code);
}
