//! The full cross-validation sweep, run sequentially.

use hopf_lpa::cross_check::{default_sweep, run_instance, summarize, CheckConfig};

#[test]
fn default_sweep_has_no_disagreements() {
    let config = CheckConfig::default();
    let instances = default_sweep();
    let results: Vec<_> = instances.iter().map(|i| run_instance(i, &config)).collect();
    for (inst, r) in instances.iter().zip(&results) {
        let r = r.as_ref().unwrap_or_else(|e| panic!("{inst:?}: {e}"));
        if let Some(ce) = r.counterexample() {
            panic!("disagreement: {ce:#}");
        }
    }
    let s = summarize(&results);
    eprintln!("{s:?}");
    assert_eq!(s.errors, 0);
    assert_eq!(s.disagreements, 0);
    assert!(s.ibn_decisive_fraction() >= 0.95, "{s:?}");
}
