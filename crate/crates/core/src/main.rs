fn main() {
    std::process::exit(planar_curvature::cli::run(std::env::args_os()));
}
