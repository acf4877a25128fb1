//! Property suites over instance corpora, with replayable counterexamples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::auxgraph::{aux_graph, aux_graph_bruteforce};
use crate::budget::Budget;
use crate::corpus::{all_quasi_orders_up_to, RandomCorpus};
use crate::dilworth::{dichotomy, enumerate_antichains, min_chain_cover, width_and_antichain, DichotomyResult};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::procedures::paper_chain_cover;
use crate::propositions::{verify_proposition, Instance, Proposition, VerifyOptions, EXHAUSTIVE_MAX_N};
use crate::relation::{FiniteRelation, Graph, QuasiOrder};

/// One named property that can be checked on a single instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Proposition(Proposition),
    /// Chain cover size equals width.
    Dilworth,
    /// Exactly one alternative for every `k ≤ width + 1`.
    Dichotomy,
    /// Layered cover has `width` chains and every layer meets every maximum antichain.
    PaperCover,
    /// Contraction-based Ĝ equals the enumeration-based Ĝ.
    AuxOracle,
}

impl Check {
    pub fn all() -> Vec<Check> {
        let mut out: Vec<Check> = Proposition::ALL.into_iter().map(Check::Proposition).collect();
        out.extend([Check::Dilworth, Check::Dichotomy, Check::PaperCover, Check::AuxOracle]);
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::Proposition(p) => p.name(),
            Check::Dilworth => "dilworth",
            Check::Dichotomy => "dichotomy",
            Check::PaperCover => "paper-cover",
            Check::AuxOracle => "aux-oracle",
        }
    }

    /// Whether the check runs on `instance`. The coloring-enumeration
    /// oracle is limited to small ground sets.
    pub fn applies(self, instance: &Instance) -> bool {
        let kind_ok = matches!(instance, Instance::QuasiOrder(_)) || self.applies_to_graphs();
        let size_ok = self != Check::AuxOracle || instance.n() <= EXHAUSTIVE_MAX_N;
        kind_ok && size_ok
    }

    /// Whether the check also runs on bare graph instances.
    pub fn applies_to_graphs(self) -> bool {
        match self {
            Check::Proposition(p) => !p.needs_quasi_order(),
            Check::AuxOracle => true,
            _ => false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::all()
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

/// Result of one check on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub checks: u64,
    pub violation: Option<String>,
}

impl Outcome {
    fn pass(checks: u64) -> Self {
        Outcome {
            checks,
            violation: None,
        }
    }
}

fn order_of(check: Check, instance: &Instance) -> Result<&QuasiOrder> {
    match instance {
        Instance::QuasiOrder(q) => Ok(q),
        Instance::Graph(_) => Err(Error::InvalidArgument(format!(
            "`{check}` needs a quasi-order instance"
        ))),
    }
}

/// Runs `check` on one instance.
pub fn run_check(check: Check, instance: &Instance, opts: &VerifyOptions) -> Result<Outcome> {
    let budget = opts.budget;
    match check {
        Check::Proposition(p) => {
            let r = verify_proposition(p, instance, opts)?;
            Ok(Outcome {
                checks: r.checks,
                violation: r.counterexample.map(|c| c.detail),
            })
        }
        Check::Dilworth => {
            let q = order_of(check, instance)?;
            let (w, antichain) = width_and_antichain(q);
            let cover = min_chain_cover(q);
            let violation = if cover.chains.len() != w {
                Some(format!("cover has {} chains, width is {w}", cover.chains.len()))
            } else if let Err(e) = cover.validate(q) {
                Some(format!("invalid cover: {e}"))
            } else if antichain.len() != w || !q.is_antichain(&antichain) {
                Some(format!("invalid antichain witness {antichain:?}"))
            } else {
                None
            };
            Ok(Outcome { checks: 1, violation })
        }
        Check::Dichotomy => {
            let q = order_of(check, instance)?;
            let w = width_and_antichain(q).0;
            for k in 1..=w + 1 {
                let bigger = enumerate_antichains(q, k + 1, budget)?;
                let verdict = match dichotomy(q, k, budget)? {
                    DichotomyResult::Cover(cover) => {
                        if !bigger.is_empty() {
                            Some(format!("k = {k}: cover returned but antichain {:?} exists", bigger[0]))
                        } else if cover.chains.len() != k {
                            Some(format!("k = {k}: cover has {} chains", cover.chains.len()))
                        } else {
                            cover.validate(q).err().map(|e| format!("k = {k}: {e}"))
                        }
                    }
                    DichotomyResult::Antichain(a) => {
                        if bigger.is_empty() {
                            Some(format!("k = {k}: antichain returned but none of size {} exists", k + 1))
                        } else if a.len() != k + 1 || !q.is_antichain(&a) {
                            Some(format!("k = {k}: invalid antichain {a:?}"))
                        } else if a != bigger[0] {
                            Some(format!("k = {k}: antichain {a:?} is not the least, {:?} is", bigger[0]))
                        } else {
                            None
                        }
                    }
                };
                if verdict.is_some() {
                    return Ok(Outcome {
                        checks: k as u64,
                        violation: verdict,
                    });
                }
            }
            Ok(Outcome::pass(w as u64 + 1))
        }
        Check::PaperCover => {
            let q = order_of(check, instance)?;
            let w = width_and_antichain(q).0;
            let pc = match paper_chain_cover(q, budget) {
                Ok(pc) => pc,
                Err(e @ (Error::PropositionViolated { .. } | Error::HypothesisViolated { .. })) => {
                    return Ok(Outcome {
                        checks: 1,
                        violation: Some(e.to_string()),
                    })
                }
                Err(e) => return Err(e),
            };
            if pc.cover.chains.len() != w {
                return Ok(Outcome {
                    checks: 1,
                    violation: Some(format!("{} chains for width {w}", pc.cover.chains.len())),
                });
            }
            if let Err(e) = pc.cover.validate(q) {
                return Ok(Outcome {
                    checks: 1,
                    violation: Some(e),
                });
            }
            let mut residual: Vec<usize> = (0..q.n()).collect();
            let mut checks = 1;
            for layer in &pc.layers {
                let sub = q.induced(&residual);
                let rw = width_and_antichain(&sub).0;
                for a in enumerate_antichains(&sub, rw, budget)? {
                    checks += 1;
                    if !a.iter().any(|&i| layer.contains(&residual[i])) {
                        let lifted: Vec<usize> = a.iter().map(|&i| residual[i]).collect();
                        return Ok(Outcome {
                            checks,
                            violation: Some(format!("layer {layer:?} misses maximum antichain {lifted:?}")),
                        });
                    }
                }
                residual.retain(|v| !layer.contains(v));
            }
            Ok(Outcome::pass(checks))
        }
        Check::AuxOracle => {
            let g = instance.graph();
            let fast = aux_graph(&g, budget)?;
            let slow = aux_graph_bruteforce(&g, budget)?;
            let violation = (fast != slow).then(|| {
                format!(
                    "contraction gives {:?}, enumeration gives {:?}",
                    fast.aux.edges(),
                    slow.aux.edges()
                )
            });
            Ok(Outcome { checks: 1, violation })
        }
    }
}

/// Serializable form of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub kind: InstanceKind,
    pub rows: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    QuasiOrder,
    Graph,
}

impl InstanceRecord {
    pub fn of(instance: &Instance) -> Self {
        match instance {
            Instance::QuasiOrder(q) => InstanceRecord {
                kind: InstanceKind::QuasiOrder,
                rows: q.relation().to_row_strings(),
            },
            Instance::Graph(g) => InstanceRecord {
                kind: InstanceKind::Graph,
                rows: g.relation().to_row_strings(),
            },
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        let rel = FiniteRelation::from_row_strings(&self.rows)?;
        Ok(match self.kind {
            InstanceKind::QuasiOrder => Instance::QuasiOrder(QuasiOrder::new(rel)?),
            InstanceKind::Graph => Instance::Graph(Graph::new(rel)?),
        })
    }
}

/// Everything needed to re-run a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub check: String,
    pub corpus: String,
    pub index: usize,
    pub instance: InstanceRecord,
    pub seed: u64,
    pub samples: usize,
    pub detail: String,
}

/// Re-runs a bundle's check; returns the violation if it reproduces.
pub fn replay(bundle: &Bundle, budget: Budget) -> Result<Option<String>> {
    let check: Check = bundle.check.parse()?;
    let instance = bundle.instance.instance()?;
    let opts = VerifyOptions {
        budget,
        seed: bundle.seed,
        samples: bundle.samples,
    };
    Ok(run_check(check, &instance, &opts)?.violation)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProveConfig {
    pub checks: Vec<Check>,
    /// Include every quasi-order with at most this many points.
    pub exhaustive_n_max: Option<usize>,
    pub random: RandomCorpus,
    pub budget: Budget,
    pub samples: usize,
    pub exec: Exec,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig {
            checks: Check::all(),
            exhaustive_n_max: None,
            random: RandomCorpus::default(),
            budget: Budget::default(),
            samples: 32,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub instances: u64,
    pub passed: u64,
    pub checks: u64,
    /// Instances outside the check's size or kind range.
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProveReport {
    pub exhaustive_instances: usize,
    pub random_orders: usize,
    pub random_graphs: usize,
    pub tallies: BTreeMap<String, Tally>,
    pub violations: Vec<Bundle>,
}

impl ProveReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Job {
    corpus: &'static str,
    index: usize,
    instance: Instance,
}

/// Runs every configured check over the exhaustive and random corpora.
/// Instances are evaluated independently; the report is ordered by corpus
/// and instance index, never by completion order.
pub fn prove(config: &ProveConfig) -> Result<ProveReport> {
    let mut jobs = Vec::new();
    let exhaustive = config.exhaustive_n_max.map(all_quasi_orders_up_to).unwrap_or_default();
    let exhaustive_instances = exhaustive.len();
    for (index, q) in exhaustive.into_iter().enumerate() {
        jobs.push(Job {
            corpus: "exhaustive",
            index,
            instance: Instance::QuasiOrder(q),
        });
    }
    let orders = if config.random.count > 0 {
        config.random.quasi_orders()
    } else {
        Vec::new()
    };
    let random_orders = orders.len();
    for (index, q) in orders.into_iter().enumerate() {
        jobs.push(Job {
            corpus: "random-orders",
            index,
            instance: Instance::QuasiOrder(q),
        });
    }
    let graph_checks = config.checks.iter().any(|c| c.applies_to_graphs());
    let graphs = if graph_checks && config.random.count > 0 {
        config.random.graphs()
    } else {
        Vec::new()
    };
    let random_graphs = graphs.len();
    for (index, g) in graphs.into_iter().enumerate() {
        jobs.push(Job {
            corpus: "random-graphs",
            index,
            instance: Instance::Graph(g),
        });
    }

    let opts = VerifyOptions {
        budget: config.budget,
        seed: config.random.seed,
        samples: config.samples,
    };
    let results = par::map_slice(config.exec, &jobs, |job| {
        config
            .checks
            .iter()
            .map(|&c| {
                if c.applies(&job.instance) {
                    run_check(c, &job.instance, &opts).map(|o| (c, Some(o)))
                } else {
                    Ok((c, None))
                }
            })
            .collect::<Result<Vec<_>>>()
    });

    let mut tallies: BTreeMap<String, Tally> = config
        .checks
        .iter()
        .map(|c| (c.name().to_string(), Tally::default()))
        .collect();
    let mut violations = Vec::new();
    for (job, result) in jobs.iter().zip(results) {
        for (check, outcome) in result? {
            let t = tallies.get_mut(check.name()).expect("tally per check");
            let Some(outcome) = outcome else {
                t.skipped += 1;
                continue;
            };
            t.instances += 1;
            t.checks += outcome.checks;
            match outcome.violation {
                None => t.passed += 1,
                Some(detail) => violations.push(Bundle {
                    check: check.name().to_string(),
                    corpus: job.corpus.to_string(),
                    index: job.index,
                    instance: InstanceRecord::of(&job.instance),
                    seed: opts.seed,
                    samples: opts.samples,
                    detail,
                }),
            }
        }
    }
    Ok(ProveReport {
        exhaustive_instances,
        random_orders,
        random_graphs,
        tallies,
        violations,
    })
}
