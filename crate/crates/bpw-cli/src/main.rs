fn main() {
    // Deep strategies and proofs recurse far; give the worker room.
    let child = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(|| bpw_cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock()))
        .expect("spawn");
    std::process::exit(child.join().unwrap_or(101));
}
