//! Trial orchestration and empirical outcome probabilities.
//!
//! Trial `i` of a batch always draws from substream `i` of the master seed,
//! so results do not depend on how trials are spread over worker threads.
//! Per-trial records are collected in trial order and replayed sequentially
//! to build counts and convergence checkpoints.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::sampling::{MethodParams, RisGenerator, RngStream};
use crate::septest::{Certifier, EntBasis, SepCertificate, SepConfig, Verdict};
use crate::spectra::{PartitionFlags, PptAnalyzer, TAU_PPT};
use crate::symspace::{max_cut, SymState};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    #[serde(rename = "NPT")]
    Npt,
    #[serde(rename = "PPT_BE")]
    PptBe,
    #[serde(rename = "SEP")]
    Sep,
    #[serde(rename = "UNK")]
    Unk,
}

impl OutcomeKind {
    pub const ALL: [OutcomeKind; 4] = [
        OutcomeKind::Npt,
        OutcomeKind::PptBe,
        OutcomeKind::Sep,
        OutcomeKind::Unk,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            OutcomeKind::Npt => "NPT",
            OutcomeKind::PptBe => "PPTBE",
            OutcomeKind::Sep => "SEP",
            OutcomeKind::Unk => "UNK",
        }
    }

    /// Column index in `[NPT, PPTBE, SEP, UNK]` arrays.
    pub fn slot(&self) -> usize {
        *self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LabelTag {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "ALL")]
    All,
    #[serde(rename = "X")]
    X,
}

/// The cut left out by the `X` label: `⌈N/2⌉+1 | ⌊N/2⌋-1`, i.e. `k = ⌊N/2⌋ - 1`.
/// `None` when the register has fewer than two cuts.
pub fn penultimate_cut(n_qubits: usize) -> Option<usize> {
    let m = max_cut(n_qubits);
    (m >= 2).then(|| m - 1)
}

/// Outcome of one trial; `ppt_set` lists the PPT cuts of a PPT-BE state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutcomeClass {
    pub kind: OutcomeKind,
    pub ppt_set: Vec<usize>,
    pub tag: LabelTag,
}

impl OutcomeClass {
    pub fn simple(kind: OutcomeKind) -> Self {
        Self {
            kind,
            ppt_set: Vec::new(),
            tag: LabelTag::Plain,
        }
    }

    /// PPT-BE class for the given PPT cuts, tagged `ALL`/`X` where applicable.
    pub fn bound_entangled(n_qubits: usize, ppt_set: Vec<usize>) -> Self {
        let m = max_cut(n_qubits);
        let tag = if ppt_set.len() == m && ppt_set.iter().copied().eq(1..=m) {
            LabelTag::All
        } else if let Some(pen) = penultimate_cut(n_qubits) {
            let x: Vec<usize> = (1..=m).filter(|&k| k != pen).collect();
            if ppt_set == x {
                LabelTag::X
            } else {
                LabelTag::Plain
            }
        } else {
            LabelTag::Plain
        };
        Self {
            kind: OutcomeKind::PptBe,
            ppt_set,
            tag,
        }
    }

    /// `NPT`, `SEP`, `UNK`, or `BE_i_j_…` for the PPT cuts of a PPT-BE state.
    pub fn label(&self) -> String {
        match self.kind {
            OutcomeKind::PptBe => refined_label(&self.ppt_set),
            k => k.label().to_string(),
        }
    }
}

/// Column name of a refined PPT-BE label, e.g. `BE_1_2` for PPT cuts {1,2}.
pub fn refined_label(ppt_set: &[usize]) -> String {
    let mut s = String::from("BE");
    for k in ppt_set {
        let _ = write!(s, "_{k}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    pub tau_ppt: f64,
    pub sep: SepConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            tau_ppt: TAU_PPT,
            sep: SepConfig::default(),
        }
    }
}

/// Full result of classifying one state.
#[derive(Debug, Clone)]
pub struct Classification<T: Real> {
    pub flags: PartitionFlags<T>,
    pub certificate: SepCertificate,
    pub outcome: OutcomeClass,
}

/// Compact per-trial record kept by the ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub outcome: OutcomeClass,
    pub min_eig: Vec<f64>,
    pub verdict: Verdict,
    pub basis: EntBasis,
    pub residual: Option<f64>,
}

impl TrialRecord {
    /// Checks the stored label against the PPT cuts implied by `min_eig`.
    pub fn label_consistent(&self, tau_ppt: f64) -> bool {
        let ppt: Vec<usize> = self
            .min_eig
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >= -tau_ppt)
            .map(|(i, _)| i + 1)
            .collect();
        match self.outcome.kind {
            OutcomeKind::Npt => ppt.is_empty() && self.outcome.ppt_set.is_empty(),
            OutcomeKind::PptBe => {
                !self.outcome.ppt_set.is_empty()
                    && self.outcome.ppt_set == ppt
                    && self.verdict == Verdict::Ent
            }
            OutcomeKind::Sep | OutcomeKind::Unk => ppt.len() == self.min_eig.len(),
        }
    }
}

/// Generator, PPT analyzer and certifier for one parameter point.
#[derive(Debug, Clone)]
pub struct Classifier<T: Real> {
    generator: RisGenerator<T>,
    analyzer: PptAnalyzer<T>,
    certifier: Certifier<T>,
    config: ClassifyConfig,
}

impl<T: Real> Classifier<T> {
    pub fn new(params: MethodParams, config: ClassifyConfig) -> Result<Self> {
        Ok(Self {
            generator: RisGenerator::new(params)?,
            analyzer: PptAnalyzer::new(params.n_qubits, config.tau_ppt)?,
            certifier: Certifier::new(params.n_qubits, config.sep.clone()),
            config,
        })
    }

    /// Classifier for externally supplied states of `n_qubits` qubits; its
    /// generator is the trivial single-level ancilla.
    pub fn for_register(n_qubits: usize, config: ClassifyConfig) -> Result<Self> {
        Self::new(MethodParams::mii(n_qubits, 1)?, config)
    }

    pub fn params(&self) -> &MethodParams {
        self.generator.params()
    }

    pub fn config(&self) -> &ClassifyConfig {
        &self.config
    }

    pub fn generator(&self) -> &RisGenerator<T> {
        &self.generator
    }

    pub fn certifier(&self) -> &Certifier<T> {
        &self.certifier
    }

    /// Classifies an arbitrary state with `N` matching this classifier.
    pub fn classify_state(&self, rho: &SymState<T>) -> Result<Classification<T>> {
        let flags = self.analyzer.flags(rho)?;
        let n = rho.n_qubits();
        let (outcome, certificate) = if flags.all_npt() {
            let cert = self.certifier.certify(rho, &flags);
            (OutcomeClass::simple(OutcomeKind::Npt), cert)
        } else if !flags.all_ppt() {
            let cert = self.certifier.certify(rho, &flags);
            (OutcomeClass::bound_entangled(n, flags.ppt_cuts()), cert)
        } else {
            let cert = self.certifier.certify(rho, &flags);
            let outcome = match cert.verdict {
                Verdict::Sep => OutcomeClass::simple(OutcomeKind::Sep),
                Verdict::Ent => OutcomeClass::bound_entangled(n, flags.ppt_cuts()),
                Verdict::Unk => OutcomeClass::simple(OutcomeKind::Unk),
            };
            (outcome, cert)
        };
        Ok(Classification {
            flags,
            certificate,
            outcome,
        })
    }

    /// Draws and classifies the state of one substream.
    pub fn classify_stream(&self, stream: RngStream) -> Result<(SymState<T>, Classification<T>)> {
        let wrap = |e: Error| Error::Trial {
            trial: stream.stream_index,
            source: Box::new(e),
        };
        let rho = self.generator.draw(stream).map_err(wrap)?;
        let c = self.classify_state(&rho).map_err(wrap)?;
        Ok((rho, c))
    }

    pub fn record(&self, stream: RngStream) -> Result<TrialRecord> {
        let (_, c) = self.classify_stream(stream)?;
        Ok(TrialRecord {
            trial: stream.stream_index,
            outcome: c.outcome,
            min_eig: c.flags.min_eig.iter().map(|x| Real::to_f64(*x)).collect(),
            verdict: c.certificate.verdict,
            basis: c.certificate.basis,
            residual: c.certificate.residual,
        })
    }
}

/// Outcome class of trial `stream.stream_index` with default settings.
pub fn classify_trial<T: Real>(params: MethodParams, stream: RngStream) -> Result<OutcomeClass> {
    Ok(Classifier::<T>::new(params, ClassifyConfig::default())?
        .record(stream)?
        .outcome)
}

/// Empirical probabilities `(NPT, PPT_BE, SEP, UNK)` after `n` trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub counts: [u64; 4],
    pub probs: [f64; 4],
}

/// `1, 2, 4, …, 8192`, then every 2000 from 10 000, capped at `n` (always
/// ending with `n` itself).
pub fn checkpoint_schedule(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..14).map(|e| 1u64 << e).take_while(|&v| v <= n).collect();
    let mut v = 10_000;
    while v <= n {
        out.push(v);
        v += 2000;
    }
    if out.last() != Some(&n) && n > 0 {
        out.push(n);
    }
    out
}

/// JSON object keys must be strings, so counts go out as `[class, count]` pairs.
mod count_list {
    use super::OutcomeClass;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<OutcomeClass, u64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<OutcomeClass, u64>, D::Error> {
        Ok(Vec::<(OutcomeClass, u64)>::deserialize(d)?
            .into_iter()
            .collect())
    }
}

/// Streaming outcome counts for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLedger {
    pub params: MethodParams,
    pub seed: u64,
    pub n: u64,
    #[serde(with = "count_list")]
    pub counts: BTreeMap<OutcomeClass, u64>,
    pub checkpoints: Vec<Checkpoint>,
    pub records: Vec<TrialRecord>,
}

impl TrialLedger {
    pub fn new(params: MethodParams, seed: u64) -> Self {
        Self {
            params,
            seed,
            n: 0,
            counts: BTreeMap::new(),
            checkpoints: Vec::new(),
            records: Vec::new(),
        }
    }

    /// Builds a ledger by replaying records in trial order.
    pub fn from_records(params: MethodParams, seed: u64, records: Vec<TrialRecord>) -> Self {
        let mut ledger = Self::new(params, seed);
        let schedule = checkpoint_schedule(records.len() as u64);
        let mut next = schedule.iter().peekable();
        let mut kinds = [0u64; 4];
        for r in &records {
            ledger.n += 1;
            kinds[r.outcome.kind.slot()] += 1;
            *ledger.counts.entry(r.outcome.clone()).or_insert(0) += 1;
            if next.peek() == Some(&&ledger.n) {
                next.next();
                ledger.checkpoints.push(Checkpoint {
                    n: ledger.n,
                    counts: kinds,
                    probs: kinds.map(|c| c as f64 / ledger.n as f64),
                });
            }
        }
        ledger.records = records;
        ledger
    }

    pub fn count(&self, kind: OutcomeKind) -> u64 {
        self.counts
            .iter()
            .filter(|(c, _)| c.kind == kind)
            .map(|(_, v)| v)
            .sum()
    }

    /// `P̃_K = n_K / n`.
    pub fn probability(&self, kind: OutcomeKind) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.count(kind) as f64 / self.n as f64
        }
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn std_error(&self, kind: OutcomeKind) -> f64 {
        binomial_se(self.probability(kind), self.n)
    }

    /// Counts per refined PPT-BE label (`BE_1`, `BE_1_2`, …).
    pub fn refined_counts(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for (c, v) in &self.counts {
            if c.kind == OutcomeKind::PptBe {
                *out.entry(c.label()).or_insert(0) += v;
            }
        }
        out
    }

    pub fn tag_count(&self, tag: LabelTag) -> u64 {
        self.counts
            .iter()
            .filter(|(c, _)| c.kind == OutcomeKind::PptBe && c.tag == tag)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn probabilities(&self) -> [f64; 4] {
        OutcomeKind::ALL.map(|k| self.probability(k))
    }
}

pub fn binomial_se(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        b = b.num_threads(workers);
    }
    b.build()
        .map_err(|e| Error::Other(format!("thread pool: {e}")))
}

/// Classifies trials `0..n` of `seed` on `workers` threads (0 = all cores).
pub fn estimate_with<T: Real>(
    classifier: &Classifier<T>,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<TrialLedger> {
    if n == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    let records = pool(workers)?.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| classifier.record(RngStream::new(seed, i)))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TrialLedger::from_records(
        *classifier.params(),
        seed,
        records,
    ))
}

/// [`estimate_with`] using default settings and all cores.
pub fn estimate<T: Real>(params: MethodParams, n: u64, seed: u64) -> Result<TrialLedger> {
    let c = Classifier::<T>::new(params, ClassifyConfig::default())?;
    estimate_with(&c, n, seed, 0)
}

/// Runs one ledger per ancilla value; ancilla `a` uses the seed
/// `seed ^ (a << 32)` so points are independent.
pub fn sweep<T: Real>(
    method: crate::sampling::Method,
    n_qubits: usize,
    ancillas: &[usize],
    n: u64,
    seed: u64,
    config: &ClassifyConfig,
    workers: usize,
) -> Result<Vec<TrialLedger>> {
    ancillas
        .iter()
        .map(|&a| {
            let p = MethodParams::new(method, n_qubits, a)?;
            let c = Classifier::<T>::new(p, config.clone())?;
            estimate_with(&c, n, point_seed(seed, a), workers)
        })
        .collect()
}

pub fn point_seed(seed: u64, ancilla: usize) -> u64 {
    seed ^ ((ancilla as u64) << 32)
}

/// First ancilla value at which each refined label reaches `10/n`
/// (i.e. at least ten occurrences), sorted by that value. Ties keep the
/// smaller PPT set first.
pub fn refine_order(sweep: &[TrialLedger]) -> Vec<(OutcomeClass, usize)> {
    let mut first: BTreeMap<OutcomeClass, usize> = BTreeMap::new();
    for ledger in sweep {
        let floor = 10.0 / ledger.n as f64;
        for (c, &v) in &ledger.counts {
            if c.kind != OutcomeKind::PptBe {
                continue;
            }
            if v as f64 / ledger.n as f64 >= floor {
                let a = ledger.params.ancilla;
                first
                    .entry(c.clone())
                    .and_modify(|x| *x = (*x).min(a))
                    .or_insert(a);
            }
        }
    }
    let mut out: Vec<(OutcomeClass, usize)> = first.into_iter().collect();
    out.sort_by(|a, b| {
        a.1.cmp(&b.1)
            .then(a.0.ppt_set.len().cmp(&b.0.ppt_set.len()))
            .then(a.0.ppt_set.cmp(&b.0.ppt_set))
    });
    out
}

/// Collects the first `count` states (in trial order) whose outcome passes
/// `keep`, scanning trials in parallel blocks.
pub fn collect_states<T: Real, F>(
    classifier: &Classifier<T>,
    seed: u64,
    count: usize,
    max_trials: u64,
    workers: usize,
    keep: F,
) -> Result<Vec<SymState<T>>>
where
    F: Fn(&OutcomeClass) -> bool + Sync,
{
    let pool = pool(workers)?;
    let mut out = Vec::with_capacity(count);
    let mut start = 0u64;
    let block = 512u64;
    while out.len() < count && start < max_trials {
        let end = (start + block).min(max_trials);
        let found: Vec<Option<SymState<T>>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| {
                    let (rho, c) = classifier.classify_stream(RngStream::new(seed, i))?;
                    Ok(keep(&c.outcome).then_some(rho))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        out.extend(found.into_iter().flatten().take(count - out.len()));
        start = end;
    }
    Ok(out)
}

/// Union of refined labels observed across ledgers, ordered by PPT-set size
/// then lexicographically.
pub fn refined_columns(ledgers: &[TrialLedger]) -> Vec<String> {
    let mut sets: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for l in ledgers {
        for c in l.counts.keys() {
            if c.kind == OutcomeKind::PptBe {
                sets.insert((c.ppt_set.len(), c.ppt_set.clone()));
            }
        }
    }
    sets.into_iter().map(|(_, s)| refined_label(&s)).collect()
}

/// Wide probability table: one row per ledger.
pub fn ledger_csv(ledgers: &[TrialLedger]) -> String {
    let refined = refined_columns(ledgers);
    let mut s = String::from("method,N,ancilla,n,P_NPT,P_PPTBE,P_SEP,P_UNK,P_BE_all,P_BE_X");
    for r in &refined {
        let _ = write!(s, ",P_{r}");
    }
    s.push('\n');
    for l in ledgers {
        let [a, b, c, d] = l.probabilities();
        let nf = l.n as f64;
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            l.params.method,
            l.params.n_qubits,
            l.params.ancilla,
            l.n,
            a,
            b,
            c,
            d,
            l.tag_count(LabelTag::All) as f64 / nf,
            l.tag_count(LabelTag::X) as f64 / nf
        );
        let rc = l.refined_counts();
        for r in &refined {
            let _ = write!(s, ",{}", *rc.get(r).unwrap_or(&0) as f64 / nf);
        }
        s.push('\n');
    }
    s
}

/// Long table: one row per (ancilla, outcome) with counts and standard errors.
pub fn outcome_rows_csv(ledgers: &[TrialLedger]) -> String {
    let refined = refined_columns(ledgers);
    let mut s = String::from("method,N,ancilla,n,outcome,count,probability,std_error\n");
    for l in ledgers {
        let rc = l.refined_counts();
        let mut rows: Vec<(String, u64)> = OutcomeKind::ALL
            .iter()
            .map(|k| (k.label().to_string(), l.count(*k)))
            .collect();
        rows.push(("BE_all".into(), l.tag_count(LabelTag::All)));
        rows.push(("BE_X".into(), l.tag_count(LabelTag::X)));
        rows.extend(
            refined
                .iter()
                .map(|r| (r.clone(), *rc.get(r).unwrap_or(&0))),
        );
        for (name, c) in rows {
            let p = c as f64 / l.n as f64;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                l.params.method,
                l.params.n_qubits,
                l.params.ancilla,
                l.n,
                name,
                c,
                p,
                binomial_se(p, l.n)
            );
        }
    }
    s
}

/// Checkpoint series with successive absolute differences.
pub fn checkpoint_csv(ledger: &TrialLedger) -> String {
    let mut s = String::from("n,P_NPT,P_PPTBE,P_SEP,P_UNK,D_NPT,D_PPTBE,D_SEP,D_UNK\n");
    let mut prev: Option<[f64; 4]> = None;
    for c in &ledger.checkpoints {
        let _ = write!(
            s,
            "{},{},{},{},{}",
            c.n, c.probs[0], c.probs[1], c.probs[2], c.probs[3]
        );
        match prev {
            Some(p) => {
                for i in 0..4 {
                    let _ = write!(s, ",{}", (c.probs[i] - p[i]).abs());
                }
            }
            None => s.push_str(",,,,"),
        }
        s.push('\n');
        prev = Some(c.probs);
    }
    s
}

/// `|P̃_K(n_i) - P̃_K(n_{i-1})|` for every checkpoint after the first.
pub fn successive_differences(ledger: &TrialLedger) -> Vec<(u64, [f64; 4])> {
    ledger
        .checkpoints
        .windows(2)
        .map(|w| {
            let mut d = [0.0; 4];
            for i in 0..4 {
                d[i] = (w[1].probs[i] - w[0].probs[i]).abs();
            }
            (w[1].n, d)
        })
        .collect()
}
