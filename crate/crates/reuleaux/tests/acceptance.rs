//! Release acceptance suite: one check per criterion, one printed pass/fail
//! line each, with the stated runtime budgets enforced where given.

use std::time::{Duration, Instant};

use reuleaux::verify::{self, OracleReport};

struct Criterion {
    run: fn() -> OracleReport,
    budget: Option<Duration>,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion {
            run: verify::acceptance_regular_areas,
            budget: Some(Duration::from_secs(1)),
        },
        Criterion {
            run: verify::acceptance_gradient_certification,
            budget: Some(Duration::from_secs(30)),
        },
        Criterion { run: verify::acceptance_criticality, budget: None },
        Criterion { run: verify::acceptance_second_order_signs, budget: None },
        Criterion { run: verify::acceptance_critical_angle_window, budget: None },
        Criterion { run: verify::acceptance_multipliers, budget: None },
        Criterion { run: verify::acceptance_hessian_oracles, budget: None },
        Criterion { run: verify::acceptance_non_minimality, budget: None },
        Criterion {
            run: verify::acceptance_optimization_endpoints,
            budget: Some(Duration::from_secs(120)),
        },
        Criterion { run: verify::acceptance_blaschke_consistency, budget: None },
    ];

    let mut failures = Vec::new();
    for criterion in &criteria {
        let start = Instant::now();
        let report = (criterion.run)();
        let elapsed = start.elapsed();
        let mut ok = report.pass;
        let mut budget_note = String::new();
        if let Some(budget) = criterion.budget {
            if elapsed > budget {
                ok = false;
                budget_note = format!(" [exceeded budget {budget:?}]");
            }
        }
        println!(
            "{} {} ({:.2}s, max_abs {:.3e}, max_rel {:.3e}){}",
            if ok { "PASS" } else { "FAIL" },
            report.name,
            elapsed.as_secs_f64(),
            report.max_abs_err,
            report.max_rel_err,
            budget_note
        );
        if !ok {
            failures.push(format!("{}: {}{}", report.name, report.notes, budget_note));
        }
    }
    assert!(failures.is_empty(), "acceptance failures:\n{}", failures.join("\n"));
}
