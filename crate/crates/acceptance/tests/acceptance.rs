use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check) in acceptance::criteria() {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let v = check();
        println!("criterion {n:>2} {name}: {v} [{:.1}s]", start.elapsed().as_secs_f64());
        for f in v.failures.iter().take(5) {
            println!("    {}", f.replace('\n', "\n    "));
        }
        failed += usize::from(!v.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
