fn main() {
    whitcell::cli::main();
}
