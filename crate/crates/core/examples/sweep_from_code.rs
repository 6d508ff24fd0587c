//! Drives a command-line sweep from code: configuration layering, the
//! sweep itself and JSON output.

use nument::cli::{run, Command, Overrides, SweepConfig};

fn main() -> nument::Result<()> {
    let file = Overrides::from_config_text("points = 4\nbeta-max = 10\n")?;
    let flags = Overrides {
        eta: Some(vec![4.0]),
        ..Default::default()
    };
    let cfg = SweepConfig::resolve(Command::XxzSweep, flags.over(file))?;
    let out = run(&cfg)?;
    out.table.write_json(std::io::stdout().lock())
}
