//! Error against cost over a lattice of path counts and grid sizes, via the
//! same job runner the binary uses.

use levy_greeks::job::{run_job, Command, JobSpec};

const JOB: &str = r#"{
    "model": {"x": 100, "r": 0.05, "sigma": 0.2, "lambda": 0, "alpha": 0, "T": 1},
    "payoff": {"kind": "call", "strike": 100, "style": "european"},
    "run": {"n_paths": 1000, "grid_steps": 1, "master_seed": 9},
    "convergence": {"n_paths": [10000, 40000, 160000, 640000], "grid_steps": [1], "greek": "vega"}
}"#;

fn main() -> levy_greeks::error::Result<()> {
    let spec = JobSpec::from_json(JOB)?;
    print!("{}", run_job(Command::Convergence, &spec)?.to_csv());
    Ok(())
}
