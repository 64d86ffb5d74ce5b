fn main() {
    std::process::exit(mgtdetect::run(std::env::args_os()));
}
