//! One row of a sweep: a sampled formula and its measurements.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use obdd_phase_core::certify::certified_lower_bound_capped;
use obdd_phase_core::graph::{
    best_balanced_cut, every_component_at_most_one_cycle, extract_matching_subformula, primal_graph, tw_upper,
};
use obdd_phase_core::obdd::{compile_with_strategy, heuristic_order, Strategy};
use obdd_phase_core::order::VarOrder;
use obdd_phase_core::random::{Distribution, Seed};
use obdd_phase_core::sat::is_satisfiable;
use obdd_phase_core::theta::Theta;
use obdd_phase_core::Error as CoreError;

use crate::config::{clause_count, format_delta, Metric, SweepConfig};
use crate::error::Result;
use crate::estimate::{prefix_length, prefix_theta};

/// CSV column names in order.
pub const HEADER: [&str; 20] = [
    "distribution",
    "n",
    "delta",
    "trialIndex",
    "seed",
    "satisfiable",
    "simple",
    "nonUniqueClauses",
    "maxDegree",
    "oneCyclePerComponent",
    "twUpper",
    "mmwLinearBest",
    "cutPosition",
    "matchingSize",
    "prefixMatchingSize",
    "prefixIsMatching",
    "thetaPrefix",
    "obddSize",
    "certFloor",
    "runtimeMs",
];

pub const NA: &str = "NA";
pub const BLOWUP: &str = "BLOWUP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObddSize {
    Nodes(usize),
    /// Compilation hit the node capacity.
    Blowup,
}

/// `None` fields were not requested or could not be computed and print as `NA`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub distribution: Distribution,
    pub n: usize,
    pub delta: Ratio<u64>,
    pub trial_index: u64,
    /// Stream of the trial's ChaCha8 generator under the master seed.
    pub seed: u64,
    pub satisfiable: Option<bool>,
    pub simple: Option<bool>,
    pub non_unique_clauses: Option<usize>,
    pub max_degree: Option<usize>,
    pub one_cycle_per_component: Option<bool>,
    pub tw_upper: Option<usize>,
    pub mmw_linear_best: Option<usize>,
    pub cut_position: Option<usize>,
    pub matching_size: Option<usize>,
    pub prefix_matching_size: Option<usize>,
    pub prefix_is_matching: Option<bool>,
    pub theta_prefix: Option<Theta>,
    pub obdd_size: Option<ObddSize>,
    pub cert_floor: Option<BigUint>,
    pub runtime_ms: Option<u64>,
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| NA.to_string(), T::to_string)
}

fn flag(v: Option<bool>) -> String {
    v.map_or_else(|| NA.to_string(), |b| u8::from(b).to_string())
}

/// θ rounded half up to six decimals.
pub fn format_theta(t: &Theta) -> String {
    if t.total == 0 {
        return "1.000000".to_string();
    }
    let scaled = (2 * t.extendable as u128 * 1_000_000 + t.total as u128) / (2 * t.total as u128);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

impl TrialRecord {
    pub fn to_row(&self) -> Vec<String> {
        vec![
            self.distribution.name().to_string(),
            self.n.to_string(),
            format_delta(self.delta),
            self.trial_index.to_string(),
            self.seed.to_string(),
            flag(self.satisfiable),
            flag(self.simple),
            cell(&self.non_unique_clauses),
            cell(&self.max_degree),
            flag(self.one_cycle_per_component),
            cell(&self.tw_upper),
            cell(&self.mmw_linear_best),
            cell(&self.cut_position),
            cell(&self.matching_size),
            cell(&self.prefix_matching_size),
            flag(self.prefix_is_matching),
            self.theta_prefix.as_ref().map_or_else(|| NA.to_string(), format_theta),
            match self.obdd_size {
                None => NA.to_string(),
                Some(ObddSize::Blowup) => BLOWUP.to_string(),
                Some(ObddSize::Nodes(s)) => s.to_string(),
            },
            cell(&self.cert_floor),
            cell(&self.runtime_ms),
        ]
    }
}

/// Generator for the randomized parts of a trial besides sampling the formula.
pub fn auxiliary_seed(seed: Seed) -> Seed {
    Seed::new(!seed.master, seed.stream)
}

/// The static order behind the cut metrics. Sifting contributes its
/// min-fill starting order, so the cut metrics do not depend on whether a
/// diagram was compiled.
pub fn cut_order(f: &obdd_phase_core::cnf::Cnf, strategy: &Strategy, aux: Seed) -> Result<VarOrder> {
    let base = match strategy {
        Strategy::Sifting => &Strategy::MinFill,
        s => s,
    };
    Ok(heuristic_order(f, base, aux)?)
}

pub fn run_trial(config: &SweepConfig, n: usize, delta: Ratio<u64>, trial: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let m = clause_count(n, delta);
    let seed = Seed::for_trial(config.master_seed, trial, n as u64, m);
    let aux = auxiliary_seed(seed);
    let f = config.distribution.sample(n, m as usize, seed)?;
    let want = |metric| config.wants(metric);

    let mut r = TrialRecord {
        distribution: config.distribution,
        n,
        delta,
        trial_index: trial,
        seed: seed.stream,
        satisfiable: want(Metric::Satisfiable).then(|| is_satisfiable(&f)),
        simple: want(Metric::Simple).then(|| f.is_simple()),
        non_unique_clauses: want(Metric::NonUniqueClauses).then(|| f.count_non_unique()),
        max_degree: None,
        one_cycle_per_component: None,
        tw_upper: None,
        mmw_linear_best: None,
        cut_position: None,
        matching_size: None,
        prefix_matching_size: None,
        prefix_is_matching: None,
        theta_prefix: None,
        obdd_size: None,
        cert_floor: None,
        runtime_ms: None,
    };

    let graph_metrics = [Metric::MaxDegree, Metric::OneCyclePerComponent, Metric::TwUpper];
    let cut_metrics = [Metric::MmwLinearBest, Metric::CutPosition, Metric::MatchingSize, Metric::PrefixMatchingSize];
    let k = prefix_length(n);
    if graph_metrics.into_iter().chain(cut_metrics).any(want) {
        let g = primal_graph(&f, true);
        r.max_degree = want(Metric::MaxDegree).then(|| g.max_degree());
        r.one_cycle_per_component = want(Metric::OneCyclePerComponent).then(|| every_component_at_most_one_cycle(&g));
        r.tw_upper = want(Metric::TwUpper).then(|| tw_upper(&g, aux));
        if cut_metrics.into_iter().any(want) && n >= 3 {
            let order = cut_order(&f, &config.order, aux)?;
            let cut = best_balanced_cut(&g, &order)?;
            r.mmw_linear_best = want(Metric::MmwLinearBest).then(|| cut.matching.len());
            r.cut_position = want(Metric::CutPosition).then_some(cut.k);
            r.matching_size = want(Metric::MatchingSize).then(|| cut.matching.len());
            if want(Metric::PrefixMatchingSize) {
                let sides = cut.matching.sides().expect("balanced cuts carry sides");
                let mf = extract_matching_subformula(&f, &cut.matching, sides)?;
                let mut remaining: BTreeSet<_> = mf.clauses().iter().collect();
                let shared = f.clauses().iter().take(k).filter(|c| remaining.remove(c)).count();
                r.prefix_matching_size = Some(shared);
            }
        }
    }

    if want(Metric::PrefixIsMatching) || want(Metric::ThetaPrefix) {
        let (pre, post) = f.split_at(k.min(f.len()))?;
        r.prefix_is_matching = want(Metric::PrefixIsMatching).then(|| pre.is_matching_formula(None));
        if want(Metric::ThetaPrefix) {
            r.theta_prefix = prefix_theta(&pre, &post)?;
        }
    }

    if want(Metric::ObddSize) {
        r.obdd_size = Some(match compile_with_strategy(&f, &config.order, aux, config.node_capacity) {
            Ok(b) => ObddSize::Nodes(b.size()),
            Err(CoreError::CapacityExceeded { .. }) => ObddSize::Blowup,
            Err(e) => return Err(e.into()),
        });
    }

    if want(Metric::CertFloor) {
        let order = cut_order(&f, &config.order, aux)?;
        r.cert_floor = Some(certified_lower_bound_capped(&f, &order, config.cert_max_clauses)?.floor);
    }

    if want(Metric::RuntimeMs) {
        r.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(r)
}
