fn main() {
    if let Err(err) = omaslab_cli::cli::main_impl() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
