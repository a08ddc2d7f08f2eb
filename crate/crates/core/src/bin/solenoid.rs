fn main() {
    std::process::exit(solenoids::cli::main());
}
