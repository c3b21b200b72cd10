use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, doc) = chevalley_cli::run(std::env::args_os().skip(1));
    let out = doc.render();
    if code == 2 || (code != 0 && doc.payload.get("error").is_some()) {
        eprint!("{}", doc.text);
        if doc.format == chevalley_cli::Format::Json {
            print!("{out}");
        }
    } else {
        print!("{out}");
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(code as u8)
}
