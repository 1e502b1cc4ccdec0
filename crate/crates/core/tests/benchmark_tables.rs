//! Checks tied to the bundled benchmark tables: the execution-time formula,
//! which tables are (and are not) derivable from the raw specifications, and
//! the per-policy traces.

use ramm::{
    compute_metrics, fixtures, improved_max_min, max_min, min_min, ramm, validate_schedule, DivertVariant, Duration,
    PolicyId, Rational, ResourceId, RoundingMode, TaskId,
};

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn integer_rows(text: &str) -> Vec<Vec<u64>> {
    fixtures::load(text)
        .etc()
        .unwrap()
        .rows()
        .map(|row| row.iter().map(|d| d.value().to_integer() as u64).collect())
        .collect()
}

fn derived_rows(text: &str, mode: RoundingMode) -> Vec<Vec<Rational>> {
    fixtures::load(text)
        .etc_with(Some(mode))
        .unwrap()
        .rows()
        .map(|row| row.iter().map(Duration::value).collect())
        .collect()
}

#[test]
fn exact_formula_on_first_workload() {
    let rows = derived_rows(fixtures::P1_WORKLOAD, RoundingMode::Exact);
    assert_eq!(rows[0][0], r(2, 1)); // 256/150 + 88/300
    assert_eq!(rows[2][0], r(5, 2)); // 327/150 + 96/300
    assert_eq!(rows[3][0], r(101, 30)); // 210/150 + 590/300
    assert_eq!(rows[1][0], r(101, 300)); // 35/150 + 31/300
    assert_eq!(rows[2][1], r(749, 100)); // 327/300 + 96/15
}

#[test]
fn second_workload_matches_its_table_under_nearest_rounding() {
    assert_eq!(
        derived_rows(fixtures::P2_WORKLOAD, RoundingMode::Nearest),
        integer_rows(fixtures::P2)
            .into_iter()
            .map(|row| row.into_iter().map(|v| r(v as i128, 1)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
}

#[test]
fn first_table_matches_no_single_rounding_mode() {
    let table = integer_rows(fixtures::P1_TABLE3);
    for mode in RoundingMode::ALL {
        let derived = derived_rows(fixtures::P1_WORKLOAD, mode);
        let same = derived
            .iter()
            .flatten()
            .zip(table.iter().flatten())
            .all(|(d, &t)| *d == r(t as i128, 1));
        assert!(!same, "{mode} unexpectedly reproduces the table");
    }
}

#[test]
fn third_table_is_not_derivable_from_its_workload() {
    let table = integer_rows(fixtures::P3);
    let exact = derived_rows(fixtures::P3_WORKLOAD, RoundingMode::Exact);
    // T2 on R2: 31/30 + 350/15 = 24.37 against a listed 14
    assert_eq!(exact[1][1], r(731, 30));
    assert_eq!(table[1][1], 14);
    for mode in RoundingMode::ALL {
        let derived = derived_rows(fixtures::P3_WORKLOAD, mode);
        let differs = derived
            .iter()
            .flatten()
            .zip(table.iter().flatten())
            .any(|(d, &t)| *d != r(t as i128, 1));
        assert!(differs, "{mode}");
    }
}

#[test]
fn both_first_instance_variants_give_the_same_headline_results() {
    let a = fixtures::load(fixtures::P1).etc().unwrap();
    let b = fixtures::load(fixtures::P1_TABLE3).etc().unwrap();
    for p in PolicyId::ALL {
        let v = DivertVariant::PaperConsistent;
        assert_eq!(p.schedule(&a, v).makespan, p.schedule(&b, v).makespan, "{p}");
    }
    assert_eq!(
        ramm(&a, DivertVariant::PaperConsistent).order(),
        ramm(&b, DivertVariant::PaperConsistent).order()
    );
}

#[test]
fn worked_example_trace() {
    let etc = fixtures::load(fixtures::P1_TABLE3).etc().unwrap();
    let s = ramm(&etc, DivertVariant::PaperConsistent);
    let trace: Vec<_> = s.assignments.iter().map(|a| (a.task, a.resource)).collect();
    assert_eq!(
        trace,
        [
            (TaskId(1), ResourceId(0)),
            (TaskId(0), ResourceId(1)),
            (TaskId(2), ResourceId(0)),
            (TaskId(3), ResourceId(0)),
        ]
    );
    let m = compute_metrics(&s, 2);
    assert_eq!(m.loads, [Duration::from_integer(7), Duration::from_integer(6)]);
    assert_eq!(m.imbalance, r(1, 7));
}

#[test]
fn baseline_traces_on_first_instance() {
    let etc = fixtures::load(fixtures::P1).etc().unwrap();
    for s in [min_min(&etc), max_min(&etc)] {
        assert!(s.assignments.iter().all(|a| a.resource == ResourceId(0)));
        assert_eq!(s.makespan, Duration::from_integer(9));
        assert_eq!(compute_metrics(&s, 2).loads[1], Duration::ZERO);
    }
    let s = improved_max_min(&etc, DivertVariant::PaperConsistent);
    let trace: Vec<_> = s.assignments.iter().map(|a| (a.task.0, a.resource.0)).collect();
    assert_eq!(trace, [(3, 0), (2, 1), (0, 0), (1, 0)]);
    assert_eq!(
        compute_metrics(&s, 2).loads,
        [Duration::from_integer(6), Duration::from_integer(8)]
    );
}

#[test]
fn ramm_is_never_worse_on_the_benchmarks() {
    for (_, text) in fixtures::BENCHMARKS {
        let etc = fixtures::load(text).etc().unwrap();
        let best = ramm(&etc, DivertVariant::PaperConsistent).makespan;
        for p in PolicyId::ALL {
            let s = p.schedule(&etc, DivertVariant::PaperConsistent);
            assert!(validate_schedule(&s, &etc).is_empty());
            assert!(best <= s.makespan, "{p}");
        }
    }
}
