use ival::Interval;
use qshoot::cases;
use qshoot::qzero::{field::DIM, lohner::*};

fn main() {
    let p = cases::case1_params(1).unwrap();
    let mut y = [Interval::ZERO; DIM];
    y[0] = Interval::point(1.2320375232100302);
    y[4] = Interval::ONE;
    let mut st = IntegratorState::new(Interval::ZERO, y);
    let opts = IntegrateOptions::default();
    for k in 0..16 {
        st = integrate(st, &p, 0.5 * (k + 1) as f64, &opts).unwrap();
        let enc = st.enclosure();
        println!(
            "xi={:0.3} w_a={:9.2e} w_a'={:9.2e} w_amu={:9.2e} a={:12.8} amu={:12.8}",
            st.xi.mid(),
            enc[0].width(),
            enc[1].width(),
            enc[4].width(),
            enc[0].mid(),
            enc[4].mid()
        );
    }
}
