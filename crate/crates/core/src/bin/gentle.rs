use std::io::{stderr, stdout, Write};

fn main() {
    let (mut out, mut err) = (stdout().lock(), stderr().lock());
    let code = gentle_derived::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
