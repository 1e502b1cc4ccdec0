use proptest::prelude::*;

use ramm::etc::rounding_error;
use ramm::oracle::DEFAULT_LIMIT;
use ramm::{
    build_schedule, completion_matrix, compute_metrics, derive_etc, optimal_makespan, parse_scenario,
    validate_schedule, DivertVariant, Duration, EtcMatrix, Labels, PolicyId, Rational, ReadyTimes, ResourceId,
    ResourceSpec, RoundingMode, Scenario, ScenarioInput, TaskId, TaskSpec,
};

const VARIANTS: [DivertVariant; 2] = [DivertVariant::PaperConsistent, DivertVariant::Strict];

fn matrix(max_tasks: usize, max_resources: usize, max_value: u64) -> impl Strategy<Value = EtcMatrix> {
    (1..=max_tasks, 1..=max_resources).prop_flat_map(move |(n, m)| {
        prop::collection::vec(prop::collection::vec(0..=max_value, m), n)
            .prop_map(|rows| EtcMatrix::from_integers(&rows).unwrap())
    })
}

/// Entries are distinct powers of two, so no two subset sums coincide and no
/// completion-time or execution-time comparison can tie.
fn tie_free_matrix() -> impl Strategy<Value = EtcMatrix> {
    (1usize..=6, 1usize..=3).prop_flat_map(|(n, m)| {
        Just((0..(n * m) as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |exps| {
                let rows: Vec<Vec<u64>> = exps.chunks(m).map(|c| c.iter().map(|&e| 1u64 << e).collect()).collect();
                EtcMatrix::from_integers(&rows).unwrap()
            })
    })
}

fn specs() -> impl Strategy<Value = (Vec<TaskSpec>, Vec<ResourceSpec>)> {
    let tasks = prop::collection::vec((0i128..2000, 0i128..800), 1..6);
    let resources = prop::collection::vec((1i128..400, 1i128..400), 1..4);
    (tasks, resources).prop_map(|(t, r)| {
        (
            t.into_iter()
                .enumerate()
                .map(|(i, (mi, mb))| TaskSpec {
                    id: TaskId(i),
                    name: None,
                    instruction_volume: Rational::from_integer(mi),
                    data_volume: Rational::from_integer(mb),
                })
                .collect(),
            r.into_iter()
                .enumerate()
                .map(|(j, (mips, mbps))| ResourceSpec {
                    id: ResourceId(j),
                    name: None,
                    processing_speed: Rational::from_integer(mips),
                    bandwidth: Rational::from_integer(mbps),
                })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn every_policy_is_feasible_and_bounded_by_the_optimum(etc in matrix(6, 3, 20)) {
        let opt = optimal_makespan(&etc, DEFAULT_LIMIT).unwrap().optimal_makespan;
        for p in PolicyId::ALL {
            for v in VARIANTS {
                let s = p.schedule(&etc, v);
                prop_assert!(validate_schedule(&s, &etc).is_empty());
                prop_assert!(s.makespan >= opt);
                prop_assert_eq!(&s, &p.schedule(&etc, v));
                prop_assert_eq!(&s, &build_schedule(&s.order(), &etc).unwrap());
            }
        }
    }

    #[test]
    fn makespan_is_largest_column_load(etc in matrix(6, 3, 20)) {
        for p in PolicyId::ALL {
            let s = p.schedule(&etc, DivertVariant::PaperConsistent);
            let max_load = etc
                .resource_ids()
                .map(|j| s.on_resource(j).map(|a| etc.get(a.task, j)).sum::<Duration>())
                .max()
                .unwrap();
            prop_assert_eq!(s.makespan, max_load);
        }
    }

    #[test]
    fn single_resource_runs_everything_serially(etc in matrix(6, 1, 20)) {
        let total: Duration = etc.column(ResourceId(0)).sum();
        for p in PolicyId::ALL {
            for v in VARIANTS {
                prop_assert_eq!(p.schedule(&etc, v).makespan, total);
            }
        }
    }

    #[test]
    fn relabeling_tasks_relabels_the_mapping(etc in tie_free_matrix(), seed in any::<u64>()) {
        let n = etc.tasks();
        let mut perm: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut state = seed | 1;
        for k in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            perm.swap(k, (state % (k as u64 + 1)) as usize);
        }
        let permuted = etc.permute_tasks(&perm).unwrap();
        for p in PolicyId::ALL {
            for v in VARIANTS {
                let a = p.schedule(&etc, v);
                let b = p.schedule(&permuted, v);
                for (k, &old) in perm.iter().enumerate() {
                    prop_assert_eq!(b.resource_of(TaskId(k)), a.resource_of(TaskId(old)));
                }
                prop_assert_eq!(a.makespan, b.makespan);
            }
        }
        let opt_a = optimal_makespan(&etc, DEFAULT_LIMIT).unwrap().optimal_makespan;
        let opt_b = optimal_makespan(&permuted, DEFAULT_LIMIT).unwrap().optimal_makespan;
        prop_assert_eq!(opt_a, opt_b);
    }

    #[test]
    fn oracle_witness_is_valid(etc in matrix(6, 3, 30)) {
        let found = optimal_makespan(&etc, DEFAULT_LIMIT).unwrap();
        let s = found.witness_schedule(&etc).unwrap();
        prop_assert!(validate_schedule(&s, &etc).is_empty());
        prop_assert_eq!(s.makespan, found.optimal_makespan);
        prop_assert_eq!(found.explored, (etc.resources() as u64).pow(etc.tasks() as u32));
    }

    #[test]
    fn ramm_all_busy_tail_is_min_et_to_min_ct(etc in matrix(7, 3, 15)) {
        for v in VARIANTS {
            let s = ramm::ramm(&etc, v);
            let mut ready = ReadyTimes::new(etc.resources());
            let mut remaining: Vec<TaskId> = etc.task_ids().collect();
            for a in &s.assignments {
                if !ready.any_idle() {
                    // reference rule: smallest execution time task to its cheapest resource
                    let min_et = |t: TaskId| *etc.row(t).iter().min().unwrap();
                    let task = *remaining.iter().min_by_key(|&&t| (min_et(t), t)).unwrap();
                    let resource = etc
                        .resource_ids()
                        .min_by_key(|&j| (etc.get(task, j) + ready.get(j), j))
                        .unwrap();
                    prop_assert_eq!((a.task, a.resource), (task, resource));
                }
                remaining.retain(|&t| t != a.task);
                ready.add(a.resource, etc.get(a.task, a.resource));
            }
        }
    }

    #[test]
    fn completion_times_grow_with_ready_times(
        etc in matrix(4, 3, 20),
        base in prop::collection::vec(0u64..10, 3),
        bump in 0u64..10,
        which in 0usize..3,
    ) {
        let m = etc.resources();
        let before = ReadyTimes::from_values(base[..m].iter().map(|&v| Duration::from_integer(v)).collect());
        let mut after = before.clone();
        after.add(ResourceId(which % m), Duration::from_integer(bump));
        let a = completion_matrix(&etc, &before).unwrap();
        let b = completion_matrix(&etc, &after).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!(y >= x);
            }
        }
    }

    #[test]
    fn exact_derivation_is_scale_invariant((tasks, resources) in specs(), factor in 1i128..50) {
        let base = derive_etc(&tasks, &resources, RoundingMode::Exact).unwrap();
        let scale = Rational::from_integer(factor);
        let tasks2: Vec<_> = tasks
            .iter()
            .map(|t| TaskSpec { instruction_volume: t.instruction_volume * scale, ..t.clone() })
            .collect();
        let resources2: Vec<_> = resources
            .iter()
            .map(|r| ResourceSpec { processing_speed: r.processing_speed * scale, ..r.clone() })
            .collect();
        prop_assert_eq!(derive_etc(&tasks2, &resources2, RoundingMode::Exact).unwrap(), base);
    }

    #[test]
    fn rounded_derivation_stays_within_one_unit((tasks, resources) in specs()) {
        let exact = derive_etc(&tasks, &resources, RoundingMode::Exact).unwrap();
        for mode in [RoundingMode::Ceil, RoundingMode::Nearest, RoundingMode::Floor] {
            let rounded = derive_etc(&tasks, &resources, mode).unwrap();
            for (r, e) in rounded.entries().iter().zip(exact.entries()) {
                prop_assert!(r.is_integer());
                let diff = if r >= e { r.value() - e.value() } else { e.value() - r.value() };
                prop_assert!(diff < Rational::from_integer(1));
                prop_assert!(rounding_error(mode, e.value()) == diff);
            }
        }
    }

    #[test]
    fn metrics_invariants(etc in matrix(6, 3, 20), c in 1u64..9) {
        let scaled = EtcMatrix::from_rows(
            etc.rows()
                .map(|r| r.iter().map(|d| Duration::new(d.value() * Rational::from_integer(c as i128)).unwrap()).collect())
                .collect(),
        ).unwrap();
        for p in PolicyId::ALL {
            let s = p.schedule(&etc, DivertVariant::PaperConsistent);
            let m = compute_metrics(&s, etc.resources());
            let total: Duration = m.loads.iter().sum();
            let assigned: Duration = s.assignments.iter().map(|a| etc.get(a.task, a.resource)).sum();
            prop_assert_eq!(total, assigned);
            prop_assert_eq!(m.makespan, s.makespan);
            prop_assert!(m.imbalance >= Rational::from_integer(0) && m.imbalance <= Rational::from_integer(1));
            prop_assert!(m.utilization.iter().all(|u| *u >= Rational::from_integer(0) && *u <= Rational::from_integer(1)));
            for j in etc.resource_ids() {
                if let Some(first) = s.on_resource(j).next() {
                    prop_assert_eq!(m.waiting_of(first.task), Duration::ZERO);
                }
            }
            // same mapping on the scaled matrix keeps the imbalance ratio
            let s2 = build_schedule(&s.order(), &scaled).unwrap();
            prop_assert_eq!(compute_metrics(&s2, etc.resources()).imbalance, m.imbalance);
        }
    }

    #[test]
    fn matrix_scenarios_round_trip(
        rows in (1usize..5, 1usize..4).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec((0i128..500, 1i128..64), m), n)
        }),
    ) {
        let etc = EtcMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| Duration::from_fraction(p, q).unwrap()).collect())
                .collect(),
        ).unwrap();
        let labels = Labels::default_for(etc.tasks(), etc.resources());
        let scenario = Scenario {
            name: "round-trip".into(),
            input: ScenarioInput::Matrix { tasks: labels.tasks, resources: labels.resources, etc },
        };
        prop_assert_eq!(parse_scenario(&scenario.to_json()).unwrap(), scenario);
    }
}
