//! Simulates a few jump-diffusion paths and writes them as CSV, one row per
//! node with the left and right limits at jump times.

use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::simulate::{simulate_path, write_paths_csv, GridSpec};
use levy_greeks::stream::derive_stream;

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.3, 1.0)
        .with_jumps(2.0, 1.0, JumpMarkSpec::Normal { mean: 0.0, std_dev: 0.2 })
        .risk_neutral();
    let grid = GridSpec::new(12)?;
    let paths: Vec<_> = (0..3).map(|i| (i, simulate_path(&model, grid, &derive_stream(42, i)))).collect();
    for (i, p) in &paths {
        eprintln!("path {i}: {} jumps", p.jump_count());
    }
    write_paths_csv(std::io::stdout().lock(), &paths)
}
