mod support {
    pub mod twopoint;
}

use std::collections::BTreeMap;
use std::path::Path;

use proptest::prelude::*;
use schedrisk::schedule::validate_starts;
use schedrisk::sgs::{serial_sgs, PriorityRule};
use schedrisk::srb::{
    analyze, simulate_table, ControlGrid, DeviateSource, NormalDeviates, OngoingPolicy, SimOptions,
    StartPolicy,
};
use schedrisk::uncertainty::{DurationModel, Family, ModelConfig};
use schedrisk::{parse_instance, ActivityKey, Network, ProjectInstance};
use support::twopoint::cases;

const POLICIES: [(StartPolicy, OngoingPolicy); 4] = [
    (StartPolicy::ReadyTime, OngoingPolicy::LinearScaled),
    (StartPolicy::ReadyTime, OngoingPolicy::AllOrNothing),
    (StartPolicy::PrecedenceOnly, OngoingPolicy::LinearScaled),
    (StartPolicy::PrecedenceOnly, OngoingPolicy::AllOrNothing),
];

fn fixture(name: &str) -> Network {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    Network::from_instance(&parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap())
}

#[test]
fn engine_equals_enumeration_exactly() {
    for case in cases() {
        assert!(
            validate_starts(case.name, &case.network, &case.starts).feasible,
            "{}",
            case.name
        );
        let grid = ControlGrid::unit(case.planned());
        for (start, ongoing) in POLICIES {
            let opts = SimOptions {
                start,
                ongoing,
                threads: None,
            };
            let table = simulate_table(
                &case.network,
                &case.starts,
                &case.model(),
                &grid,
                &opts,
                &case.deviates(),
            );
            for (&t, (_, var)) in grid.times().iter().zip(table.moments()) {
                let expected = case.variance(t, start, ongoing);
                assert_eq!(var, expected, "{} {start}/{ongoing} t={t}", case.name);
            }
        }
    }
}

#[test]
fn enumeration_is_not_trivial() {
    for case in cases() {
        let v0 = case.variance(0, StartPolicy::ReadyTime, OngoingPolicy::LinearScaled);
        assert!(v0 > 0.0, "{}", case.name);
    }
}

/// Closed form for a serial chain run as soon as predecessors allow: each
/// activity contributes its variance scaled by the squared fraction of its
/// duration still ahead of `t`.
fn chain_srb(chain: &[(f64, f64)], t: f64) -> f64 {
    let mut finish = 0.0;
    let mut total = 0.0;
    for &(mean, sd) in chain {
        finish += mean;
        let left = (finish - t).clamp(0.0, mean) / mean;
        total += sd * sd * left * left;
    }
    total
}

fn chain_network(means: &[u32]) -> (Network, Vec<u32>) {
    let n = means.len();
    let mut rows = vec![(0, vec![0], vec![2])];
    for (k, &m) in means.iter().enumerate() {
        rows.push((m, vec![1], vec![k as u32 + 3]));
    }
    rows.push((0, vec![0], vec![]));
    let inst = ProjectInstance::from_table("chain", &rows, &[1]).unwrap();
    let mut starts = vec![0];
    let mut t = 0;
    for &m in means {
        starts.push(t);
        t += m;
    }
    starts.push(t);
    assert_eq!(starts.len(), n + 2);
    (Network::from_instance(&inst), starts)
}

fn chain_model(net: &Network, cvs: &[f64], reps: usize, seed: u64) -> DurationModel {
    let map: BTreeMap<ActivityKey, f64> = net
        .nodes
        .iter()
        .filter(|n| !n.dummy)
        .zip(cvs)
        .map(|(n, &cv)| (n.key.clone(), cv))
        .collect();
    DurationModel::from_cvs(net, Family::Lognormal, &map, seed, reps).unwrap()
}

#[test]
fn serial_chain_matches_closed_form() {
    let net = fixture("chain.sm");
    let model = chain_model(&net, &[0.25, 1.0 / 3.0], 50_000, 7);
    let schedule = net.schedule_from_starts("chain", &[0, 0, 4, 7]);
    let opts = SimOptions {
        start: StartPolicy::PrecedenceOnly,
        ..Default::default()
    };
    let a = analyze(&net, &schedule, &model, 1, &opts).unwrap();

    let expected = [2.0, 1.5625, 1.25, 1.0625, 1.0, 4.0 / 9.0, 1.0 / 9.0, 0.0];
    for (p, &e) in a.curve.points.iter().zip(&expected) {
        assert!((chain_srb(&[(4.0, 1.0), (3.0, 1.0)], f64::from(p.t)) - e).abs() < 1e-12);
        let tol = if e < 0.5 { 0.02 } else { 0.03 * e };
        assert!(
            (p.variance - e).abs() <= tol,
            "t={} {} vs {e}",
            p.t,
            p.variance
        );
    }
    assert!((a.srv - 6.430_555).abs() <= 0.02 * 6.430_555, "{}", a.srv);
}

#[test]
fn front_loaded_risk_ranks_lower() {
    let (net, starts) = chain_network(&[4, 4, 4]);
    let schedule = net.schedule_from_starts("chain", &starts);
    let opts = SimOptions {
        start: StartPolicy::PrecedenceOnly,
        ..Default::default()
    };
    let grid: Vec<f64> = (0..=12).map(f64::from).collect();
    let exact = |cvs: &[f64]| {
        let chain: Vec<(f64, f64)> = cvs.iter().map(|cv| (4.0, 4.0 * cv)).collect();
        let ys: Vec<f64> = grid.iter().map(|&t| chain_srb(&chain, t)).collect();
        schedrisk::srb::trapezoid(&grid, &ys)
    };

    let front = [0.3, 0.1, 0.1];
    let back = [0.1, 0.1, 0.3];
    assert!(exact(&front) < exact(&back));
    let srv = |cvs: &[f64]| {
        analyze(
            &net,
            &schedule,
            &chain_model(&net, cvs, 20_000, 3),
            1,
            &opts,
        )
        .unwrap()
        .srv
    };
    let (f, b) = (srv(&front), srv(&back));
    assert!(f < b, "{f} {b}");
    assert!((f - exact(&front)).abs() < 0.03 * exact(&front));
    assert!((b - exact(&back)).abs() < 0.03 * exact(&back));
}

fn j30_model(net: &Network, reps: usize) -> DurationModel {
    DurationModel::generate(
        net,
        &ModelConfig {
            cv_seed: 2,
            seed: 9,
            replications: reps,
            ..Default::default()
        },
    )
    .unwrap()
}

#[test]
fn terminal_zero_and_degeneracy_on_fixtures() {
    for name in [
        "j30_1.sm",
        "j30_2.sm",
        "j30_3.sm",
        "chain.sm",
        "overlap.sm",
        "minimal.sm",
    ] {
        let net = fixture(name);
        let flat = DurationModel::generate(
            &net,
            &ModelConfig {
                cv_lo: 0.0,
                cv_hi: 0.0,
                replications: 16,
                ..Default::default()
            },
        )
        .unwrap();
        let model = j30_model(&net, 200);
        for rule in PriorityRule::DETERMINISTIC {
            let s = serial_sgs(&net, rule).unwrap();
            let a = analyze(&net, &s, &model, 1, &SimOptions::default()).unwrap();
            assert_eq!(
                a.curve.points.last().unwrap().variance,
                0.0,
                "{name} {rule}"
            );

            let d = analyze(&net, &s, &flat, 1, &SimOptions::default()).unwrap();
            assert_eq!(d.mean_duration(), f64::from(d.planned), "{name} {rule}");
            assert_eq!(d.srv, 0.0, "{name} {rule}");
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let net = fixture("j30_2.sm");
    let s = serial_sgs(&net, PriorityRule::MinSlack).unwrap();
    let starts = net.resolve(&s).unwrap();
    let model = j30_model(&net, 300);
    let grid = ControlGrid::with_step(net.planned_finish(&starts), 3).unwrap();
    let run = |threads| {
        let opts = SimOptions {
            threads,
            ..Default::default()
        };
        simulate_table(
            &net,
            &starts,
            &model,
            &grid,
            &opts,
            &NormalDeviates { seed: 4 },
        )
    };
    let one = run(Some(1));
    assert_eq!(one, run(Some(4)));
    assert_eq!(one, run(None));
}

struct Shifted {
    inner: NormalDeviates,
    by: f64,
}

impl DeviateSource for Shifted {
    fn fill(&self, replication: usize, out: &mut [f64]) {
        self.inner.fill(replication, out);
        for z in out {
            *z += self.by;
        }
    }
}

fn random_case() -> impl Strategy<Value = (usize, PriorityRule, u64, usize)> {
    (0usize..3, 0u64..50, any::<u64>(), 0usize..4)
        .prop_map(|(f, r, seed, p)| (f, PriorityRule::Random(r), seed, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Larger deviates never shorten any replication at any period.
    #[test]
    fn durations_are_monotone_in_deviates((f, rule, seed, p) in random_case(), by in 0.01f64..1.0) {
        let net = fixture(["j30_1.sm", "j30_2.sm", "j30_3.sm"][f]);
        let s = serial_sgs(&net, rule).unwrap();
        let starts = net.resolve(&s).unwrap();
        let model = j30_model(&net, 40);
        let grid = ControlGrid::with_step(net.planned_finish(&starts), 4).unwrap();
        let (start, ongoing) = POLICIES[p];
        let opts = SimOptions { start, ongoing, threads: None };
        let base = simulate_table(&net, &starts, &model, &grid, &opts, &NormalDeviates { seed });
        let up = simulate_table(&net, &starts, &model, &grid, &opts, &Shifted { inner: NormalDeviates { seed }, by });
        for (lo, hi) in base.durations.iter().zip(&up.durations) {
            for (a, b) in lo.iter().zip(hi) {
                prop_assert!(b >= a);
            }
        }
    }

    /// Under ready-time starts each replication lasts at least as long as
    /// every activity's planned start plus its sampled duration.
    #[test]
    fn mean_duration_bounds((f, rule, seed, _) in random_case()) {
        let net = fixture(["j30_1.sm", "j30_2.sm", "j30_3.sm"][f]);
        let s = serial_sgs(&net, rule).unwrap();
        let starts = net.resolve(&s).unwrap();
        let model = j30_model(&net, 64).reseeded(seed);
        let a = analyze(&net, &s, &model, 5, &SimOptions::default()).unwrap();
        let deviates = NormalDeviates { seed };
        let mut sums = vec![0.0; net.len()];
        let mut z = vec![0.0; net.len()];
        for r in 0..model.replications {
            deviates.fill(r, &mut z);
            for (i, spec) in model.specs.iter().enumerate() {
                sums[i] += spec.sample(z[i]);
            }
        }
        let n = model.replications as f64;
        let bound = (0..net.len())
            .map(|i| f64::from(starts[i]) + sums[i] / n)
            .fold(0.0, f64::max);
        prop_assert!(a.mean_duration() >= bound - 1e-9);
        prop_assert_eq!(a.curve.points.last().unwrap().variance, 0.0);
        prop_assert!(a.curve.points.iter().all(|p| p.variance >= 0.0));
    }
}
