/// Worker threads for parallel recounts; defaults to one per core.
const THREADS_VAR: &str = "DEBRUIJN_THREADS";

fn main() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: {THREADS_VAR}: {e}");
        }
    }
    let code = debruijn_indep::cli::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
