//! Acceptance criteria. Prints one line per criterion, then the
//! informational findings, and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dynsym_cli::suite::{check_ids, run_check, SuiteRow};
use rayon::prelude::*;

struct Criterion {
    number: u32,
    title: &'static str,
    ids: &'static [&'static str],
    /// Wall-clock budget for running `ids` on their own.
    budget: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "exact structure constants of sch, sv, age, cga, ecga, dual, bulk and lattice representations",
        ids: &[
            "algebra.structure.sch",
            "algebra.structure.sv",
            "algebra.structure.age",
            "algebra.structure.cga",
            "algebra.structure.ecga",
            "algebra.structure.dual_sch",
            "algebra.structure.dual_cga",
            "algebra.structure.bulk_sch",
            "algebra.structure.lattice_sch",
        ],
        budget: Some(Duration::from_secs(30)),
    },
    Criterion {
        number: 2,
        title: "Schroedinger anomaly, sch extension constraint and the z = n exceptional commutator",
        ids: &["algebra.symmetry.sch_anomaly", "algebra.symmetry.sch_extension", "algebra.structure.nonlocal_age"],
        budget: None,
    },
    Criterion {
        number: 3,
        title: "quartic Casimir M^2 (2x-1)(2x-5), symmetric under x -> 3-x",
        ids: &["algebra.casimir.sch"],
        budget: None,
    },
    Criterion {
        number: 4,
        title: "Ward identities of all eight forms below 1e-30 at 100 points, 50 digits",
        ids: &[
            "ward.conformal_2pt",
            "ward.sch_2pt",
            "ward.age_resp",
            "ward.cga_2pt",
            "ward.dual_sch_2pt",
            "ward.dual_cga_2pt",
            "ward.causal_sch",
            "ward.causal_cga",
        ],
        budget: None,
    },
    Criterion {
        number: 5,
        title: "Glauber-Ising autocorrelator at N = 1e5, s = 25, 16 replicas",
        ids: &["models.glauber", "models.glauber_exact"],
        budget: Some(Duration::from_secs(300)),
    },
    Criterion {
        number: 6,
        title: "Arcetri critical temperatures, step-halving order and g(0)",
        ids: &["models.arcetri_tc1", "models.arcetri_tc2", "models.arcetri_order", "models.arcetri_g0"],
        budget: None,
    },
    Criterion {
        number: 7,
        title: "autocorrelator integral proportional to the arctan form within 2%",
        ids: &["models.autocorr_shape"],
        budget: None,
    },
    Criterion {
        number: 8,
        title: "lattice two-point residual and heat-kernel limit",
        ids: &["models.lattice"],
        budget: None,
    },
    Criterion {
        number: 9,
        title: "causal support of both dual forms and the line-integral bound",
        ids: &["causality.dual_sch", "causality.dual_cga", "causality.hardy"],
        budget: None,
    },
];

fn run_timed(ids: &[&str]) -> (Vec<SuiteRow>, Duration) {
    let start = Instant::now();
    let rows = ids.par_iter().map(|id| run_check(id).unwrap_or_else(|| panic!("unknown check {}", id))).collect();
    (rows, start.elapsed())
}

fn main() -> ExitCode {
    let mut all_pass = true;
    for c in CRITERIA {
        let (rows, elapsed) = run_timed(c.ids);
        let within_budget = c.budget.is_none_or(|b| elapsed <= b);
        let pass = within_budget && rows.iter().all(|r| r.pass);
        all_pass &= pass;
        println!("criterion {}: {} ({}; {:.1} s)", c.number, if pass { "PASS" } else { "FAIL" }, c.title, elapsed.as_secs_f64());
        for r in &rows {
            println!("    {:<4} {:<34} {}", if r.pass { "ok" } else { "FAIL" }, r.id, r.value);
        }
        if !within_budget {
            println!("    over the {} s budget", c.budget.unwrap().as_secs());
        }
    }

    let info: Vec<&str> = check_ids("all").expect("suite all").into_iter().filter(|id| id.contains(".info.")).collect();
    let rows: BTreeMap<String, SuiteRow> = info.par_iter().map(|id| run_check(id).unwrap()).map(|r| (r.id.clone(), r)).collect();
    println!("findings (not part of the verdict):");
    for r in rows.values() {
        println!("    {:<34} literal claim holds: {}; {}", r.id, r.pass, r.value);
    }

    println!("{}", if all_pass { "acceptance: all criteria pass" } else { "acceptance: some criteria fail" });
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
