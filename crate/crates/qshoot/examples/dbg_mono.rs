use ival::{elem, Interval};
use qshoot::cases;
use qshoot::coeffs::coefficient_table;
use qshoot::qinf::*;

fn main() {
    let p = cases::case2_params(1).unwrap();
    let ct = coefficient_table(&p, 5).unwrap();
    let con = fixed_point_radius(&p, &ct).unwrap();
    println!("rho   = {:?}", con.rho);
    println!("C_T1  = {:?}", con.c_t1);
    println!("M_s   = {:?}", con.m_sigma);
    let nb = norm_bounds(&p, &ct, &con).unwrap();
    println!("nq1   = {:?}", nb.nq1);
    println!("nq2   = {:?}", nb.nq2);
    println!("nq3   = {:?}", nb.nq3);
    println!("nqg   = {:?}", nb.nqg);
    println!("nqk   = {:?}", nb.nqk);
    for (n, v) in ct.entries() {
        println!("{n:10} = [{:.6}, {:.6}]", v.lo(), v.hi());
    }
    let mt = monotonicity_tail(&p, &ct, &nb, 5).unwrap();
    println!("C_pQ  = {:?}", mt.c_p_q);
    println!("C_RQ  = {:?}", mt.c_r_q);
    println!("C_RQ' = {:?}", mt.c_r_q1);
    println!("C_pmon= {:?}", mt.c_pmon);
    println!("C_Rmon= {:?}", mt.c_rmon);
    println!("thresh= {:?}", mt.threshold);
    // breakdown of C_Rmon
    let t1 = mt.c_p_q.ldexp(2) * mt.c_r_q1;
    println!("4 C_pQ C_RQ' = {:?}", t1);
    let xi1 = p.xi1;
    let t2 = mt.c_p_q * mt.c_r_q * elem::pow(xi1, Interval::point(-1.0)).unwrap();
    println!("8|a| C_pQ C_RQ /xi = {:?}", t2.ldexp(3));
    let t3 = mt.c_r_q.ldexp(2) * mt.c_r_q1 * elem::pow(xi1, Interval::point(-2.7)).unwrap();
    println!("4 C_RQ C_RQ' xi^.. = {:?}", t3);
}
