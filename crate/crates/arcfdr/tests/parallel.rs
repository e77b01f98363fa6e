use arcfdr::parallel::{run_experiment, run_trials, with_threads};
use arcfdr_core::simulate::{parse_roster, Experiment, ExperimentConfig};

fn experiment() -> Experiment {
    let mut cfg = ExperimentConfig::new(60, 6, 3.5, vec![0.2, 0.7], 5, 0.95, 0.05, 3);
    cfg.audit = true;
    Experiment::prepare(cfg, parse_roster("all").unwrap()).unwrap()
}

#[test]
fn parallel_matches_sequential() {
    let exp = experiment();
    let par = with_threads(Some(3), || run_trials(&exp)).unwrap().unwrap();
    assert_eq!(par, exp.run_all().unwrap());
    assert_eq!(run_experiment(&exp).unwrap(), exp.run().unwrap());
}

#[test]
fn thread_count_does_not_matter() {
    let exp = experiment();
    let one = with_threads(Some(1), || run_experiment(&exp)).unwrap().unwrap();
    let four = with_threads(Some(4), || run_experiment(&exp)).unwrap().unwrap();
    assert_eq!(one, four);
}
