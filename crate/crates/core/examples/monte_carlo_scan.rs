//! Seeded scan of random pure two-qutrit states. Pass the sample count as
//! the first argument (default 100000).

use qutrit_chsh::montecarlo::write_histogram_csv;
use qutrit_chsh::{run_scan, table_rows, ScanConfig, Sampler};

fn main() -> qutrit_chsh::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    for sampler in [Sampler::UniformSquare, Sampler::HaarGaussian] {
        let cfg = ScanConfig { n_samples: n, sampler, seed: 2024, ..Default::default() };
        let r = run_scan(&cfg)?;
        println!(
            "{sampler:?}: n {}  max gamma {:.6} at #{}  mean {:.4}  violations {}  concurrence [{:.4}, {:.4}]",
            r.n_samples, r.max_gamma, r.argmax_index, r.mean_gamma, r.violation_count, r.min_concurrence, r.max_concurrence
        );
        if sampler == Sampler::UniformSquare {
            for row in table_rows(&cfg, 3, 2)? {
                println!("  {}", row.format(2));
            }
            write_histogram_csv(&r, std::io::stdout().lock())?;
        }
    }
    Ok(())
}
