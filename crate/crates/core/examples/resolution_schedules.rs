//! How the resolution exponent evolves under each schedule.

use qopt::schedules::{h_log, sigma_inf, ScheduleSpec};

fn main() {
    let greedy = ScheduleSpec::greedy();
    let log = ScheduleSpec::log();
    let cap = 40;

    println!("{:>9} {:>8} {:>6} {:>9}", "t", "greedy", "log", "sigma");
    let mut h = 0;
    let mut t_prev = 0;
    for t in [1u64, 10, 100, 1_000, 10_000, 100_000, 1_000_000] {
        // every iteration counts as an acceptance here
        for _ in t_prev..t {
            h = greedy.next_h(h, true, t, 2, cap).h;
        }
        t_prev = t;
        println!(
            "{t:>9} {h:>8} {:>6} {:>9.4}",
            h_log(t, 2, &log),
            sigma_inf(t, log.c_o)
        );
    }
    println!("\nthe greedy schedule stops at the exactness cap ({cap}); the log schedule grows like log log t");
}
