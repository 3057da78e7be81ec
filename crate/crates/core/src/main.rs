fn main() {
    std::process::exit(bandclust::cli::main());
}
