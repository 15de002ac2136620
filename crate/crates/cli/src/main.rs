use std::process::ExitCode;

fn main() -> ExitCode {
    match geocurrents_cli::run(std::env::args_os()) {
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code as u8)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Ok(Ok(())) => ExitCode::SUCCESS,
    }
}
