// Drive the command-line front end in-process: draw, then verify the report.

use genus_approx::cli::run;

/// Returns the exit codes of the draw and verify steps.
pub fn run_example() -> (i32, i32) {
    let k33 = "0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n";
    let (mut report, mut err) = (Vec::new(), Vec::new());
    let drawn = run(["genus-approx", "genus", "--budget", "1"], &mut k33.as_bytes(), &mut report, &mut err);
    let mut verdict = Vec::new();
    let checked = run(["genus-approx", "verify"], &mut report.as_slice(), &mut verdict, &mut err);
    println!("{}", String::from_utf8_lossy(&verdict).trim());
    (drawn, checked)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
