fn main() {
    std::process::exit(a2g_los::cli::main());
}
