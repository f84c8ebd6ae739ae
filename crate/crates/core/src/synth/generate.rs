use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::profile::BehaviorProfile;
use crate::corpus::{CodedEvent, EssayScores, StudentSession};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCohort {
    pub sessions: Vec<StudentSession>,
    /// `(student_id, profile name)` in session order.
    pub ground_truth: Vec<(String, String)>,
    /// Present for students whose profile declares a score range.
    pub scores: Vec<EssayScores>,
    pub seed: u64,
}

impl SynthCohort {
    /// Profile names in order of first appearance.
    pub fn profile_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for (_, p) in &self.ground_truth {
            if !names.contains(&p.as_str()) {
                names.push(p);
            }
        }
        names
    }

    /// Ground truth as profile indices aligned with `sessions`.
    pub fn truth_labels(&self) -> Vec<usize> {
        let names = self.profile_names();
        self.ground_truth
            .iter()
            .map(|(_, p)| names.iter().position(|n| n == p).expect("listed"))
            .collect()
    }

    pub fn write_ground_truth<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "student_id,profile")?;
        for (id, p) in &self.ground_truth {
            writeln!(w, "{id},{p}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Draws `count` students from each profile. Student `i` (0-based, across
/// profiles in order) uses its own ChaCha8 stream `i` of the cohort seed, so
/// each session is independent of how the others are generated.
pub fn generate(profiles: &[(BehaviorProfile, usize)], seed: u64) -> Result<SynthCohort> {
    if profiles.is_empty() {
        return Err(Error::invalid("no profiles to generate from"));
    }
    let mut chains = Vec::with_capacity(profiles.len());
    for (i, (p, count)) in profiles.iter().enumerate() {
        if *count == 0 {
            return Err(Error::Profile {
                profile: p.name.clone(),
                message: "count must be at least 1".into(),
            });
        }
        if profiles[..i].iter().any(|(q, _)| q.name == p.name) {
            return Err(Error::Profile {
                profile: p.name.clone(),
                message: "duplicate profile name".into(),
            });
        }
        chains.push(p.compile()?);
    }

    let total: usize = profiles.iter().map(|(_, c)| c).sum();
    let width = total.to_string().len().max(3);
    let mut cohort = SynthCohort {
        sessions: Vec::with_capacity(total),
        ground_truth: Vec::with_capacity(total),
        scores: Vec::new(),
        seed,
    };
    let mut student = 0u64;
    for ((profile, count), chain) in profiles.iter().zip(&chains) {
        for _ in 0..*count {
            let id = format!("s{:0width$}", student + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(student);

            let [lo, hi] = profile.length_range;
            let len = rng.random_range(lo as u64..=hi as u64) as usize;
            let mut state = chain.first(rng.next_u64());
            let mut events = Vec::with_capacity(len);
            for i in 0..len {
                if i > 0 {
                    state = chain.next(state, rng.next_u64());
                }
                events.push(CodedEvent {
                    student_id: id.clone(),
                    seq_index: i as u64,
                    codes: vec![chain.states[state].clone()],
                    text: None,
                });
            }
            if let Some([a, b]) = profile.score_range {
                let mut draw = || rng.random_range(a..=b);
                cohort.scores.push(EssayScores {
                    student_id: id.clone(),
                    content: draw(),
                    analysis: draw(),
                    organization: draw(),
                    quality_of_writing: draw(),
                    word_limit: None,
                });
            }
            cohort.sessions.push(StudentSession {
                student_id: id.clone(),
                events,
            });
            cohort.ground_truth.push((id, profile.name.clone()));
            student += 1;
        }
    }
    Ok(cohort)
}

#[cfg(test)]
mod tests {
    use super::super::profile::tests::profile;
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn codes(s: &StudentSession) -> Vec<&str> {
        s.events.iter().map(|e| e.codes[0].as_str()).collect()
    }

    #[test]
    fn degenerate_chain() {
        let p = profile("h", &[("hec", 1.0)], &[("hec", &[("hec", 1.0)])], [3, 3]);
        let c = generate(&[(p, 1)], 9).unwrap();
        assert_eq!(codes(&c.sessions[0]), ["hec", "hec", "hec"]);
        assert_eq!(c.ground_truth, [("s001".to_string(), "h".to_string())]);
        assert!(c.scores.is_empty());
    }

    fn mixed() -> BehaviorProfile {
        profile(
            "m",
            &[("a", 0.5), ("b", 0.5)],
            &[("a", &[("a", 0.8), ("b", 0.2)]), ("b", &[("a", 0.8), ("b", 0.2)])],
            [5, 57],
        )
    }

    #[test]
    fn deterministic_and_within_bounds() {
        let mut p = mixed();
        p.score_range = Some([2, 3]);
        let profiles = [(p.clone(), 20), (p.clone().renamed("n"), 5)];
        let a = generate(&profiles, 42).unwrap();
        let b = generate(&profiles, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate(&profiles, 43).unwrap());
        assert!(a.sessions.iter().all(|s| (5..=57).contains(&s.events.len())));
        assert!(a
            .scores
            .iter()
            .all(|s| (2..=3).contains(&s.content) && s.validate().is_ok()));
        assert_eq!(a.truth_labels().iter().filter(|&&l| l == 1).count(), 5);
        // each student's session depends only on its own stream
        let alone = generate(&[(p, 20)], 42).unwrap();
        assert_eq!(alone.sessions[..], a.sessions[..20]);
    }

    #[test]
    fn stationary_frequency() {
        let mut p = mixed();
        p.length_range = [10_000, 10_000];
        let c = generate(&[(p, 1)], 7).unwrap();
        let freq = codes(&c.sessions[0]).iter().filter(|&&x| x == "a").count() as f64 / 10_000.0;
        assert!((freq - 0.8).abs() <= 0.01, "{freq}");
    }

    #[test]
    fn transition_counts_fit_matrix() {
        let row: &[(&str, f64)] = &[("x", 0.5), ("y", 0.3), ("z", 0.2)];
        let mut p = profile(
            "t",
            row,
            &[("x", row), ("y", &[("x", 0.1), ("y", 0.1), ("z", 0.8)]), ("z", row)],
            [1, 1],
        );
        p.length_range = [10_000, 10_000];
        let c = generate(&[(p.clone(), 10)], 3).unwrap();
        let mut counts = std::collections::BTreeMap::<(&str, &str), f64>::new();
        for s in &c.sessions {
            for w in codes(s).windows(2) {
                *counts.entry((w[0], w[1])).or_default() += 1.0;
            }
        }
        for (from, probs) in &p.transitions {
            let n: f64 = counts.iter().filter(|((f, _), _)| f == from).map(|(_, c)| c).sum();
            let chi2: f64 = probs
                .iter()
                .map(|(to, q)| {
                    let obs = counts.get(&(from.as_str(), to.as_str())).copied().unwrap_or(0.0);
                    (obs - n * q).powi(2) / (n * q)
                })
                .sum();
            let p_value = 1.0 - ChiSquared::new((probs.len() - 1) as f64).unwrap().cdf(chi2);
            assert!(p_value > 0.01, "row {from}: chi2 {chi2}");
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&[], 1).is_err());
        assert!(generate(&[(mixed(), 0)], 1).is_err());
        assert!(generate(&[(mixed(), 1), (mixed(), 1)], 1).is_err());
    }

    impl BehaviorProfile {
        fn renamed(mut self, name: &str) -> Self {
            self.name = name.into();
            self
        }
    }
}
