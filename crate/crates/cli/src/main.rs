fn main() {
    std::process::exit(boussinesq_cli::main_with_args(std::env::args_os()));
}
