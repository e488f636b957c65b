//! The experiment harness as a library: build a configuration in code,
//! run a named experiment, and consume the CSV it would write.
//!
//! The same entry points back the `lmg` binary; identical configuration
//! yields byte-identical output, so tables can be regenerated and
//! diffed. Unknown keys are rejected before any computation.

use lmg::experiment::{run_experiment, Config, Experiment};

fn main() -> Result<(), lmg::LmgError> {
    let mut cfg = Config::parse(
        "# slow-flow coefficient table, coarse grid\n\
         lambda = 0.5,2.0\n\
         n_energy = 9\n",
    )?;
    // overrides win over the file, as with --set on the command line
    cfg.set("n_energy", "7")?;

    let table = run_experiment(Experiment::SlowFlow, &mut cfg)?;
    let csv = table.to_csv();
    println!("{} metadata lines, {} data rows", table.meta.len(), table.rows.len());
    for line in csv.lines().take(12) {
        println!("{line}");
    }
    println!("...");

    // a typo'd key is caught, not silently ignored
    let mut bad = Config::parse("lamda = 0.5\n")?;
    match run_experiment(Experiment::Figure1, &mut bad) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("unknown key must not pass"),
    }
    Ok(())
}
