//! Seeded workloads shared by the benchmarks.

use tracemine::corpus::{flatten, Codebook, IntraEventOrder, SequenceDatabase};
use tracemine::synth::{generate, BehaviorProfile, SynthCohort};

fn chain(name: &str, codes: &[&str], stay: f64, length_range: [usize; 2]) -> BehaviorProfile {
    let n = codes.len() as f64;
    let other = (1.0 - stay) / (n - 1.0);
    let row = |from: &str| {
        codes
            .iter()
            .map(|c| (c.to_string(), if *c == from { stay } else { other }))
            .collect()
    };
    BehaviorProfile {
        name: name.into(),
        initial: codes.iter().map(|c| (c.to_string(), 1.0 / n)).collect(),
        transitions: codes.iter().map(|c| (c.to_string(), row(c))).collect(),
        length_range,
        score_range: None,
    }
}

/// Two behavioural profiles over overlapping code sets, `per_profile`
/// students each.
pub fn cohort(per_profile: usize, length_range: [usize; 2], seed: u64) -> SynthCohort {
    let structure = chain("structure", &["hep", "p", "w", "r", "hec"], 0.3, length_range);
    let content = chain("content", &["hec", "her", "m", "a"], 0.6, length_range);
    generate(&[(structure, per_profile), (content, per_profile)], seed).expect("valid bench profiles")
}

pub fn database(per_profile: usize, length_range: [usize; 2], seed: u64) -> SequenceDatabase {
    let c = cohort(per_profile, length_range, seed);
    flatten(&c.sessions, IntraEventOrder::Listed, &Codebook::bundled()).expect("flatten")
}
