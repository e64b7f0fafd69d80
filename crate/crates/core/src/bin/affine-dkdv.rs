use std::process::ExitCode;

fn main() -> ExitCode {
    affine_dkdv::cli::main_entry()
}
