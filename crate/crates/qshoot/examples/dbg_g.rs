use ival::Interval;
use qshoot::cases::{self, Case};
use qshoot::matching::{eval_g, FreeVars, MatchVars};
use qshoot::qzero::IntegrateOptions;
use std::time::Instant;

fn main() {
    let opts = IntegrateOptions::default();
    for (case, j) in [(Case::One, 1), (Case::Two, 1)] {
        let base = case.params(j).unwrap();
        let mu = cases::mu_seed(case, j).unwrap();
        let vars = MatchVars::from_params(&base, Interval::point(mu));
        let t0 = Instant::now();
        match eval_g(&base, &vars, FreeVars::FixEpsilon, &opts) {
            Ok(g) => {
                println!("case {case:?} j={j} xi1={} ({:.1}s)", base.xi1.mid(), t0.elapsed().as_secs_f64());
                for (i, v) in g.value.iter().enumerate() {
                    println!("  G[{i}] = [{:+.3e}, {:+.3e}] width {:.2e} straddles0={}"
                        , v.lo(), v.hi(), v.width(), v.contains(0.0));
                }
                for r in 0..4 {
                    print!("  J row{r}:");
                    for c in 0..4 {
                        print!(" {:+.7}", g.jac[(r, c)].mid());
                    }
                    println!();
                }
            }
            Err(e) => println!("case {case:?} j={j}: ERROR {e}"),
        }
    }
}
