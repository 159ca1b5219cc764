//! Reference parameter sets: the two studied NLS families and their known
//! matching points, used to seed the verification runs.
//!
//! Case I is d = 1, sigma = 2.3; Case II is d = 3, sigma = 1. Throughout,
//! omega is normalized to 1 and delta = 0. The index j labels the solution
//! by its number of monotone intervals of |Q|.

use ival::{Complex, Interval};

use crate::params::Params;
use crate::{Error, Result};

/// (mu, Re gamma, Im gamma, kappa, xi1) seed approximations.
const CASE1_SEEDS: [(f64, f64, f64, f64, f64); 8] = [
    (1.2320375232100302, 0.75815066, -0.43437115, 0.8531088807225934, 10.0),
    (0.7830771, 1.791642, -1.1049105, 0.4932228, 15.0),
    (1.1238427, 4.3312850, -1.5341044, 0.3467537, 20.0),
    (0.8838777, 9.7377950, 0.0464600, 0.2667595, 25.0),
    (1.0795592, 18.1568500, 9.2631900, 0.2164021, 40.0),
    (0.9271844, 21.9410500, 36.2825500, 0.1818379, 45.0),
    (1.0544104, -8.2214050, 87.5047000, 0.1566780, 60.0),
    (0.9511459, -130.0550000, 126.9923000, 0.1375644, 75.0),
];

const CASE2_SEEDS: [(f64, f64, f64, f64, f64); 2] = [
    (
        1.885656965028834,
        1.713600954676407,
        -1.491793871828511,
        0.9173561185914533,
        60.0,
    ),
    (0.83995950, 13.8526200, 6.0345150, 0.3212400, 140.0),
];

fn params_from_seed(seed: (f64, f64, f64, f64, f64), sigma: f64, d: u32) -> Params {
    let (mu, gr, gi, kappa, xi1) = seed;
    // mu is carried by the solution from zero; stash it via matching
    let _ = mu;
    Params {
        gamma: Complex::point(gr, gi),
        kappa: Interval::point(kappa),
        omega: Interval::ONE,
        epsilon: Interval::ZERO,
        delta: Interval::ZERO,
        sigma: Interval::point(sigma),
        d,
        v: Interval::point(0.1),
        xi1: Interval::point(xi1),
    }
}

/// Parameters seeded at the j-th Case I matching point (1-based).
pub fn case1_params(j: usize) -> Result<Params> {
    let seed = CASE1_SEEDS
        .get(j.checked_sub(1).ok_or_else(|| Error::Domain("j >= 1".into()))?)
        .ok_or_else(|| Error::Domain(format!("case I has 8 entries, got j = {j}")))?;
    Ok(params_from_seed(*seed, 2.3, 1))
}

/// Parameters seeded at the j-th Case II matching point (1-based).
pub fn case2_params(j: usize) -> Result<Params> {
    let seed = CASE2_SEEDS
        .get(j.checked_sub(1).ok_or_else(|| Error::Domain("j >= 1".into()))?)
        .ok_or_else(|| Error::Domain(format!("case II has 2 entries, got j = {j}")))?;
    Ok(params_from_seed(*seed, 1.0, 3))
}

/// The mu seed for the solution from zero.
pub fn mu_seed(case: Case, j: usize) -> Result<f64> {
    match case {
        Case::One => Ok(CASE1_SEEDS
            .get(j - 1)
            .ok_or_else(|| Error::Domain("bad j".into()))?
            .0),
        Case::Two => Ok(CASE2_SEEDS
            .get(j - 1)
            .ok_or_else(|| Error::Domain("bad j".into()))?
            .0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    One,
    Two,
}

impl Case {
    pub fn params(&self, j: usize) -> Result<Params> {
        match self {
            Case::One => case1_params(j),
            Case::Two => case2_params(j),
        }
    }

    pub fn count(&self) -> usize {
        match self {
            Case::One => 8,
            Case::Two => 2,
        }
    }
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        match s {
            "I" | "i" | "1" => Ok(Case::One),
            "II" | "ii" | "2" => Ok(Case::Two),
            other => Err(Error::Domain(format!("unknown case {other:?}"))),
        }
    }
}

/// Published enclosure of the Case II j = 1 zero (mu, Re/Im gamma, kappa).
pub fn case2_j1_zero_enclosure() -> [Interval; 4] {
    [
        Interval::new(1.885656717, 1.885657258),
        Interval::new(1.713600562, 1.713601256),
        Interval::new(-1.491794103, -1.491793579),
        Interval::new(0.917355988, 0.917356298),
    ]
}

/// Published uniqueness box of the Case II j = 1 verification.
pub fn case2_j1_uniqueness_box() -> [Interval; 4] {
    [
        Interval::new(1.885656707, 1.885657268),
        Interval::new(1.713600550, 1.713601269),
        Interval::new(-1.491794112, -1.491793570),
        Interval::new(0.917355982, 0.917356304),
    ]
}

/// Published enclosure of the Case I j = 1 zero.
pub fn case1_j1_zero_enclosure() -> [Interval; 4] {
    [
        Interval::new(1.232037502, 1.232037549),
        Interval::new(0.75815046, 0.75815086),
        Interval::new(-0.4343714, -0.4343709),
        Interval::new(0.85310870, 0.85310897),
    ]
}

/// First two points of the first Case I branch: (eps, mu, kappa) each.
pub fn cgl_case1_branch_start() -> [(f64, f64, f64); 2] {
    [
        (0.0, 1.23203752321003, 0.8531088807225934),
        (0.0001414213562373095, 1.2320784725879492, 0.8527751258771901),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validate() {
        for j in 1..=8 {
            case1_params(j).unwrap().validate().unwrap();
        }
        for j in 1..=2 {
            case2_params(j).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn seeds_inside_published_enclosures() {
        let p = case2_params(1).unwrap();
        let z = case2_j1_zero_enclosure();
        assert!(z[1].contains(p.gamma.re.mid()));
        assert!(z[2].contains(p.gamma.im.mid()));
        assert!(z[3].contains(p.kappa.mid()));
        assert!(z[0].contains(mu_seed(Case::Two, 1).unwrap()));
    }
}
