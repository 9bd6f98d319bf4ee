//! The randomized strategy T_R over cyclic intervals with up to `2^k`
//! elements added or removed. Expected depth of every `x` is at most
//! `log2(1/mu(x)) + r + r^2` for the Huffman measure `mu` and `r = 4/2^k`.
//!
//! Masses live in `u128` units of `2^-W`, where `W = D + b + 1`, `D` is the
//! deepest Huffman leaf and `b = 2k + ceil(log2 n)` is the number of random
//! bits used to place a window.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::family::QuestionFamily;
use crate::huffman::huffman;
use crate::question::{CyclicQuestion, Question, QuestionKind};
use crate::set::{Element, ElementSet};
use crate::split::dyadic_prefix_split;
use crate::stepper::{StepState, Stepper};
use crate::tree::{DecisionTree, Node, Step, Transcript, TreeBuilder};

const MAX_BITS: u32 = 126;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProlixityParams {
    pub k: u32,
    pub seed: u64,
}

impl ProlixityParams {
    pub fn new(k: u32, seed: u64) -> Result<Self> {
        if !(3..=30).contains(&k) {
            return Err(Error::PreconditionViolated(format!("k = {k} outside 3..=30")));
        }
        Ok(ProlixityParams { k, seed })
    }

    /// `r = 4 / 2^k`.
    pub fn r(&self) -> f64 {
        4.0 / (1u64 << self.k) as f64
    }

    fn with_seed(self, seed: u64) -> Self {
        ProlixityParams { seed, ..self }
    }
}

/// `n^2 C(n, 2^k) 3^(2^k)` and the closed-form bound it is checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySizeBound {
    pub count: BigUint,
    /// `log2` of `n^2 ((3e/4) r n)^(4/r)`.
    pub log2_bound: f64,
}

pub fn prolixity_family_size_bound(n: usize, k: u32) -> Result<FamilySizeBound> {
    let d = 1usize << k;
    if n <= d {
        return Err(Error::PreconditionViolated(format!("need n > 2^k = {d}, got n = {n}")));
    }
    let count = BigUint::from(n) * BigUint::from(n) * binomial(BigUint::from(n), BigUint::from(d))
        * BigUint::from(3u8).pow(d as u32);
    let r = 4.0 / d as f64;
    let nf = n as f64;
    let log2_bound = 2.0 * nf.log2() + (4.0 / r) * (0.75 * std::f64::consts::E * r * nf).log2();
    let log2_count = log2_big(&count);
    if log2_count > log2_bound + 1e-9 {
        return Err(Error::PreconditionViolated(format!(
            "family count 2^{log2_count:.3} exceeds the closed form 2^{log2_bound:.3}"
        )));
    }
    Ok(FamilySizeBound { count, log2_bound })
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    (x >> shift).to_f64().expect("fits").log2() + shift as f64
}

/// True iff the witness is in range and uses at most `2^k` adjustments.
pub fn certify_question(q: &CyclicQuestion, n: usize, k: u32) -> bool {
    let in_range = |&i: &usize| i < n;
    q.n == n
        && q.interval.is_none_or(|(s, e)| s < n && e < n)
        && q.added.iter().all(in_range)
        && q.removed.iter().all(in_range)
        && (q.added.len() + q.removed.len()) as u128 <= 1u128 << k
}

/// Fewest additions and removals turning some cyclic interval of `X_n`
/// (the empty set and `X_n` included) into `set`.
pub fn cyclic_distance(set: &ElementSet) -> usize {
    let n = set.ground_size();
    let total = set.len();
    let mut best = total.min(n - total);
    for start in 0..n {
        // interval start..=start+len-1: mismatches = outside-members + inside-nonmembers
        let mut inside_members = 0;
        for len in 1..n {
            let x = (start + len - 1) % n;
            if set.contains(x) {
                inside_members += 1;
            }
            let d = (total - inside_members) + (len - inside_members);
            best = best.min(d);
        }
    }
    best
}

/// Cyclic intervals with up to `2^k` elements added or removed.
#[derive(Debug, Clone)]
pub struct CyclicFamily {
    n: usize,
    k: u32,
}

impl CyclicFamily {
    pub fn new(n: usize, k: u32) -> Self {
        CyclicFamily { n, k }
    }
}

impl QuestionFamily for CyclicFamily {
    fn ground_size(&self) -> usize {
        self.n
    }

    /// The counting bound `n^2 C(n, 2^k) 3^(2^k)`, not an exact count.
    fn cardinality(&self) -> BigUint {
        let d = 1usize << self.k;
        BigUint::from(self.n * self.n)
            * binomial(BigUint::from(self.n), BigUint::from(d.min(self.n)))
            * BigUint::from(3u8).pow(d as u32)
    }

    fn admits(&self, q: &Question) -> bool {
        if q.n() != self.n {
            return false;
        }
        if let QuestionKind::Cyclic(c) = q.kind() {
            return certify_question(c, self.n, self.k);
        }
        cyclic_distance(&q.resolve()) as u128 <= 1u128 << self.k
    }

    fn name(&self) -> &'static str {
        "cyclic"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrCase {
    /// Heavy mass at least one half: ask a half-mass set of heavies.
    Heavy,
    /// Light mass at most one half: ask heavy versus light.
    Light,
    /// Random window over the light elements.
    Window,
}

/// One update of the maintained measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrRecord {
    pub case: TrCase,
    /// The question was trivial on the current domain and was not asked.
    pub silent: bool,
    /// Domain and masses before the update, in ground order.
    pub before: Vec<(usize, u128)>,
    pub after: Vec<(usize, u128)>,
    /// Elements whose arcs were cut by the window boundary.
    pub boundary: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Pending {
    question: Question,
    yes: Vec<(usize, u128)>,
    no: Vec<(usize, u128)>,
    case: TrCase,
    boundary: Vec<usize>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Live state of one run. Randomness at a node depends only on the seed and
/// the events leading to it, so lazy runs and full trees agree.
#[derive(Debug, Clone)]
pub struct TrState {
    n: usize,
    k: u32,
    bits: u32,
    scale: u32,
    key: u64,
    dom: Vec<(usize, u128)>,
    pending: Option<Pending>,
    asked: usize,
    trace: Option<Vec<TrRecord>>,
}

impl TrState {
    pub fn new(dist: &Distribution, params: ProlixityParams) -> Result<Self> {
        Self::init(dist, params, false)
    }

    fn init(dist: &Distribution, params: ProlixityParams, traced: bool) -> Result<Self> {
        let n = dist.n();
        let exps = huffman(dist).dyadic;
        let depth = exps.max_exponent().unwrap_or(0);
        let bits = 2 * params.k + (n.max(1) as u64).next_power_of_two().trailing_zeros();
        let scale = depth + bits + 1;
        if scale > MAX_BITS {
            return Err(Error::PrecisionExceeded { needed: scale });
        }
        let dom = (0..n)
            .filter_map(|i| exps.exponent(i).map(|e| (i, 1u128 << (scale - e))))
            .collect();
        let mut s = TrState {
            n,
            k: params.k,
            bits,
            scale,
            key: splitmix(params.seed),
            dom,
            pending: None,
            asked: 0,
            trace: traced.then(Vec::new),
        };
        s.advance();
        Ok(s)
    }

    /// Exponent `W` of the mass unit `2^-W`.
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn domain(&self) -> &[(usize, u128)] {
        &self.dom
    }

    pub fn trace(&self) -> &[TrRecord] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn push_event(&mut self, event: u64) {
        self.key = splitmix(self.key ^ (event + 1).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    }

    fn record(&mut self, case: TrCase, silent: bool, after: &[(usize, u128)], boundary: &[usize]) {
        if let Some(t) = self.trace.as_mut() {
            t.push(TrRecord {
                case,
                silent,
                before: self.dom.clone(),
                after: after.to_vec(),
                boundary: boundary.to_vec(),
            });
        }
    }

    /// Plans steps until a nontrivial question is pending or one element is left.
    fn advance(&mut self) {
        loop {
            if self.dom.len() <= 1 {
                self.pending = None;
                return;
            }
            let p = self.plan();
            let yes_empty = p.yes.is_empty();
            let no_empty = p.no.is_empty();
            if yes_empty || no_empty {
                let next = if yes_empty { p.no } else { p.yes };
                self.record(p.case, true, &next, &p.boundary);
                self.dom = next;
                self.push_event(2);
                continue;
            }
            self.pending = Some(p);
            return;
        }
    }

    fn plan(&self) -> Pending {
        let heavy_min = 1u128 << (self.scale - self.k);
        let half = 1u128 << (self.scale - 1);
        let is_heavy = |q: u128| q >= heavy_min;
        let heavy_mass: u128 = self.dom.iter().filter(|e| is_heavy(e.1)).map(|e| e.1).sum();
        let light_mass: u128 = self.dom.iter().filter(|e| !is_heavy(e.1)).map(|e| e.1).sum();

        if heavy_mass >= half {
            let mut heavies: Vec<(usize, u128)> =
                self.dom.iter().copied().filter(|e| is_heavy(e.1)).collect();
            heavies.sort_by_key(|&(i, q)| (std::cmp::Reverse(q), i));
            let exps: Vec<u32> = heavies.iter().map(|&(_, q)| self.scale - q.trailing_zeros()).collect();
            let m = dyadic_prefix_split(&exps, 1).expect("heavy mass reaches one half");
            let mut chosen: Vec<usize> = heavies[..m].iter().map(|&(i, _)| i).collect();
            chosen.sort_unstable();
            let question = CyclicQuestion {
                n: self.n,
                interval: Some((chosen[0], chosen[0])),
                added: chosen[1..].to_vec(),
                removed: Vec::new(),
            };
            let (yes, no) = self.split(|i| chosen.binary_search(&i).is_ok(), &[]);
            return self.pending(question, yes, no, TrCase::Heavy, Vec::new());
        }

        let heavies: Vec<usize> = self.dom.iter().filter(|e| is_heavy(e.1)).map(|e| e.0).collect();
        if light_mass <= half {
            let question = CyclicQuestion {
                n: self.n,
                interval: Some((0, self.n - 1)),
                added: Vec::new(),
                removed: heavies.clone(),
            };
            let (yes, no) = self.split(|i| heavies.binary_search(&i).is_err(), &[]);
            return self.pending(question, yes, no, TrCase::Light, Vec::new());
        }

        // Window of length 1/2 on the circle of circumference sigma.
        let sigma = light_mass;
        let lights: Vec<(usize, u128)> = self.dom.iter().copied().filter(|e| !is_heavy(e.1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        let draw: u128 = if self.bits >= 128 {
            rng.random::<u128>()
        } else {
            rng.random::<u128>() & ((1u128 << self.bits) - 1)
        };
        // sigma is a multiple of 2^bits units, so this is exact
        let u = (sigma >> self.bits) * draw;
        let lo = u;
        let hi = (u + half) % sigma;
        let windows: Vec<(u128, u128)> = if u + half <= sigma {
            vec![(u, u + half)]
        } else {
            vec![(u, sigma), (0, u + half - sigma)]
        };
        let in_window = |p: u128| (p + sigma - u) % sigma < half;

        let mut start = 0u128;
        let mut in_k = Vec::with_capacity(lights.len());
        let mut boundary = Vec::new();
        for &(i, q) in &lights {
            let end = start + q;
            let overlap: u128 = windows
                .iter()
                .map(|&(a, b)| b.min(end).saturating_sub(a.max(start)))
                .sum();
            let mid = start + q / 2;
            // Equivalent to "midpoint in window" unless both boundaries cut the arc.
            in_k.push(2 * overlap > q || (2 * overlap == q && in_window(mid)));
            let cut = |p: u128| start < p && p < end;
            if cut(lo) || cut(hi) {
                boundary.push(i);
            }
            start = end;
        }
        let kset: Vec<usize> = lights
            .iter()
            .zip(&in_k)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e.0)
            .collect();
        let question = self.window_question(&lights, &in_k, &heavies);
        let (yes, no) = self.split(|i| kset.binary_search(&i).is_ok(), &boundary);
        self.pending(question, yes, no, TrCase::Window, boundary)
    }

    /// The cyclic run of `K` among the lights as an interval of `X_n`, with
    /// the heavy elements inside it removed.
    fn window_question(&self, lights: &[(usize, u128)], in_k: &[bool], heavies: &[usize]) -> CyclicQuestion {
        let m = lights.len();
        let interval = if in_k.iter().all(|&b| b) {
            (0, self.n - 1)
        } else {
            let first = (0..m).find(|&j| in_k[j] && !in_k[(j + m - 1) % m]).expect("K is nonempty");
            let mut last = first;
            while in_k[(last + 1) % m] {
                last = (last + 1) % m;
            }
            (lights[first].0, lights[last].0)
        };
        let probe = CyclicQuestion {
            n: self.n,
            interval: Some(interval),
            added: Vec::new(),
            removed: Vec::new(),
        };
        let removed = heavies.iter().copied().filter(|&h| probe.in_interval(h)).collect();
        CyclicQuestion { removed, ..probe }
    }

    /// Masses after each answer: the chosen side doubles except boundary
    /// elements, which keep their mass; the other side drops out.
    fn split(&self, yes: impl Fn(usize) -> bool, boundary: &[usize]) -> (Vec<(usize, u128)>, Vec<(usize, u128)>) {
        let mut y = Vec::new();
        let mut n = Vec::new();
        for &(i, q) in &self.dom {
            let q2 = if boundary.contains(&i) { q } else { 2 * q };
            if yes(i) {
                y.push((i, q2));
            } else {
                n.push((i, q2));
            }
        }
        (y, n)
    }

    fn pending(&self, q: CyclicQuestion, yes: Vec<(usize, u128)>, no: Vec<(usize, u128)>, case: TrCase, boundary: Vec<usize>) -> Pending {
        Pending {
            question: Question::new(self.n, QuestionKind::Cyclic(q)),
            yes,
            no,
            case,
            boundary,
        }
    }

    fn pending_question(&self) -> Option<&Question> {
        self.pending.as_ref().map(|p| &p.question)
    }

    fn apply(&mut self, answer: bool) -> Result<()> {
        let p = self
            .pending
            .take()
            .ok_or_else(|| Error::PreconditionViolated("the game is over".into()))?;
        let next = if answer { p.yes } else { p.no };
        if next.is_empty() {
            return Err(Error::InconsistentAnswers);
        }
        self.record(p.case, false, &next, &p.boundary);
        self.dom = next;
        self.asked += 1;
        self.push_event(answer as u64);
        self.advance();
        Ok(())
    }
}

impl Stepper for TrState {
    fn state(&self) -> StepState {
        match self.pending_question() {
            Some(q) => StepState::Ask(q.clone()),
            None => StepState::Done(Element(self.dom[0].0)),
        }
    }

    fn answer(&mut self, yes: bool) -> Result<StepState> {
        self.apply(yes)?;
        Ok(self.state())
    }

    fn questions_asked(&self) -> usize {
        self.asked
    }
}

pub fn prolixity_stepper(dist: &Distribution, params: ProlixityParams) -> Result<TrState> {
    TrState::new(dist, params)
}

/// A run of T_R together with every measure update it made.
#[derive(Debug, Clone)]
pub struct TrRun {
    pub transcript: Transcript,
    pub scale: u32,
    pub trace: Vec<TrRecord>,
}

fn check_secret(dist: &Distribution, secret: Element) -> Result<()> {
    if secret.0 >= dist.n() || dist.numerators()[secret.0] == BigUint::default() {
        return Err(Error::SecretNotInTree(secret.0));
    }
    Ok(())
}

/// Runs T_R against `secret`, answering by membership.
pub fn run_tr_traced(dist: &Distribution, params: ProlixityParams, secret: Element) -> Result<TrRun> {
    check_secret(dist, secret)?;
    let mut s = TrState::init(dist, params, true)?;
    let mut steps = Vec::new();
    while let Some(q) = s.pending_question().cloned() {
        let answer = q.contains(secret.0);
        steps.push(Step { question: q, answer });
        s.apply(answer)?;
    }
    Ok(TrRun {
        transcript: Transcript { secret, steps },
        scale: s.scale,
        trace: s.trace.take().unwrap_or_default(),
    })
}

pub fn run_tr(dist: &Distribution, params: ProlixityParams, secret: Element) -> Result<Transcript> {
    check_secret(dist, secret)?;
    let mut s = TrState::new(dist, params)?;
    let mut steps = Vec::new();
    while let Some(q) = s.pending_question().cloned() {
        let answer = q.contains(secret.0);
        steps.push(Step { question: q, answer });
        s.apply(answer)?;
    }
    Ok(Transcript { secret, steps })
}

/// The whole tree T_R for one seed.
pub fn build_tr_tree(dist: &Distribution, params: ProlixityParams) -> Result<DecisionTree> {
    build_tree_inner(dist, params, None)
}

/// Like [`build_tr_tree`], also handing every measure update on every
/// branch to `audit` together with the mass scale.
pub fn build_tr_tree_audited(
    dist: &Distribution,
    params: ProlixityParams,
    audit: &mut dyn FnMut(&TrRecord, u32),
) -> Result<DecisionTree> {
    build_tree_inner(dist, params, Some(audit))
}

fn build_tree_inner(
    dist: &Distribution,
    params: ProlixityParams,
    mut audit: Option<&mut dyn FnMut(&TrRecord, u32)>,
) -> Result<DecisionTree> {
    let traced = audit.is_some();
    let mut drain = |s: &mut TrState| {
        if let (Some(a), Some(trace)) = (audit.as_mut(), s.trace.as_mut()) {
            for rec in trace.drain(..) {
                a(&rec, s.scale);
            }
        }
    };
    let mut root_state = TrState::init(dist, params, traced)?;
    drain(&mut root_state);
    let mut b = TreeBuilder::new();
    let root = b.reserve();
    let mut stack = vec![(root, root_state)];
    while let Some((id, s)) = stack.pop() {
        match s.pending_question().cloned() {
            None => b.set(id, Node::Leaf(Element(s.dom[0].0))),
            Some(question) => {
                let mut ys = s.clone();
                let mut ns = s;
                ys.apply(true)?;
                ns.apply(false)?;
                drain(&mut ys);
                drain(&mut ns);
                let yes = b.reserve();
                let no = b.reserve();
                b.set(id, Node::Ask { question, yes, no });
                stack.push((yes, ys));
                stack.push((no, ns));
            }
        }
    }
    Ok(b.finish(dist.n(), root))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementCost {
    pub element: Element,
    pub mean_depth: f64,
    pub stderr: f64,
    /// `log2(1/mu(x)) + r + r^2`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostEstimate {
    pub per_element: Vec<ElementCost>,
    /// Mean of the tree cost under `pi`, over trials.
    pub mean_cost: f64,
    pub cost_stderr: f64,
    pub opt: f64,
    pub r: f64,
    pub trials: usize,
}

/// Seed of trial `j` for a base seed.
pub fn trial_seed(seed: u64, j: u64) -> u64 {
    splitmix(seed ^ splitmix(j.wrapping_add(0xA076_1D64_78BD_642F)))
}

/// Monte Carlo estimate of the per-element expected depth of T_R.
pub fn estimate_expected_cost(dist: &Distribution, params: ProlixityParams, trials: usize) -> Result<CostEstimate> {
    if trials == 0 {
        return Err(Error::PreconditionViolated("need at least one trial".into()));
    }
    let support = dist.support();
    let pi: Vec<f64> = dist.weights_f64();
    let h = huffman(dist);
    let depths: Vec<Vec<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|j| {
            let t = build_tr_tree(dist, params.with_seed(trial_seed(params.seed, j)))?;
            let d = t.depths();
            Ok(support.iter().map(|&i| d[i].expect("support leaf")).collect())
        })
        .collect::<Result<_>>()?;
    let r = params.r();
    let tf = trials as f64;
    let stats = |xs: &mut dyn Iterator<Item = f64>| {
        let v: Vec<f64> = xs.collect();
        let mean = v.iter().sum::<f64>() / tf;
        let var = if trials > 1 {
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (tf - 1.0)
        } else {
            0.0
        };
        (mean, (var / tf).sqrt())
    };
    let per_element = support
        .iter()
        .enumerate()
        .map(|(col, &i)| {
            let (mean, se) = stats(&mut depths.iter().map(|row| row[col] as f64));
            let e = h.dyadic.exponent(i).expect("support") as f64;
            ElementCost {
                element: Element(i),
                mean_depth: mean,
                stderr: se,
                bound: e + r + r * r,
            }
        })
        .collect();
    let (mean_cost, cost_stderr) = stats(&mut depths.iter().map(|row| {
        support
            .iter()
            .enumerate()
            .map(|(col, &i)| pi[i] * row[col] as f64)
            .sum::<f64>()
    }));
    Ok(CostEstimate {
        per_element,
        mean_cost,
        cost_stderr,
        opt: h.opt_cost.to_f64().expect("finite"),
        r,
        trials,
    })
}

/// Checks one measure update: masses are dropped, kept, or doubled, never
/// otherwise, and the total stays at most one.
pub fn check_record(rec: &TrRecord, scale: u32) -> std::result::Result<(), String> {
    let total: u128 = rec.after.iter().map(|e| e.1).sum();
    if total > 1u128 << scale {
        return Err(format!("total mass {total} exceeds 2^{scale}"));
    }
    for &(i, q) in &rec.after {
        let Some(&(_, before)) = rec.before.iter().find(|e| e.0 == i) else {
            return Err(format!("{} gained mass from zero", Element(i)));
        };
        if q != before && q != 2 * before {
            return Err(format!("{} went from {before} to {q}", Element(i)));
        }
        if !q.is_power_of_two() {
            return Err(format!("{} has non-dyadic mass {q}", Element(i)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn params(k: u32, seed: u64) -> ProlixityParams {
        ProlixityParams::new(k, seed).unwrap()
    }

    #[test]
    fn family_size_examples() {
        let b = prolixity_family_size_bound(16, 3).unwrap();
        // 256 * 12870 * 6561
        assert_eq!(b.count, BigUint::from(21_616_657_920u64));
        assert_eq!(prolixity_family_size_bound(9, 3).unwrap().count, BigUint::from(4_782_969u64));
        assert!(log2_big(&b.count) <= b.log2_bound);
        assert!(prolixity_family_size_bound(8, 3).is_err());
    }

    #[test]
    fn certify_examples() {
        let q = CyclicQuestion {
            n: 10,
            interval: Some((2, 6)),
            added: vec![],
            removed: vec![4],
        };
        assert!(certify_question(&q, 10, 3));
        let q = CyclicQuestion {
            n: 20,
            interval: Some((0, 19)),
            added: vec![],
            removed: (0..9).collect(),
        };
        assert!(!certify_question(&q, 20, 3));
        let q = CyclicQuestion {
            n: 7,
            interval: Some((3, 2)),
            added: vec![],
            removed: vec![],
        };
        assert!(certify_question(&q, 7, 3));
        assert_eq!(cyclic_distance(&Question::new(7, QuestionKind::Cyclic(q)).resolve()), 0);
    }

    #[test]
    fn cyclic_distance_examples() {
        assert_eq!(cyclic_distance(&ElementSet::from_indices(6, [0, 5])), 0);
        assert_eq!(cyclic_distance(&ElementSet::from_indices(6, [0, 2, 4])), 2);
        assert_eq!(cyclic_distance(&ElementSet::empty(4)), 0);
    }

    #[test]
    fn run_examples() {
        let d = Distribution::uniform(2);
        for seed in 0..5 {
            let t = run_tr(&d, params(3, seed), Element(1)).unwrap();
            assert_eq!(t.depth(), 1);
        }
        let run = run_tr_traced(&d, params(3, 0), Element(0)).unwrap();
        assert_eq!(run.trace[0].case, TrCase::Heavy);

        assert_eq!(run_tr(&Distribution::point_mass(5, 2), params(3, 1), Element(2)).unwrap().depth(), 0);

        let u8 = Distribution::uniform(8);
        for seed in 0..4 {
            for x in 0..8 {
                assert_eq!(run_tr(&u8, params(3, seed), Element(x)).unwrap().depth(), 3);
            }
        }
    }

    #[test]
    fn lazy_run_matches_tree() {
        let d = Distribution::from_u64_masses(&[9, 1, 1, 3, 1, 1, 7, 2, 1, 1, 1, 30, 1, 2, 1, 1, 1, 4, 1, 1]).unwrap();
        for seed in 0..20 {
            let p = params(3, seed);
            let t = build_tr_tree(&d, p).unwrap();
            assert!(t.validate(&d, Some(&CyclicFamily::new(20, 3))).is_valid());
            for x in d.support() {
                let run = run_tr_traced(&d, p, Element(x)).unwrap();
                assert_eq!(Some(run.transcript.depth()), t.depths()[x]);
                for rec in &run.trace {
                    check_record(rec, run.scale).unwrap();
                    assert!(rec.after.iter().any(|e| e.0 == x));
                }
            }
        }
    }

    #[test]
    fn double_cut_arc_keeps_total_below_one() {
        // lights 8 x 1/16 + 1/64: sigma just above 1/2, so a short arc can
        // contain both window ends
        let mut w: Vec<u64> = vec![4; 8];
        w.push(1);
        w.push(63);
        let d = Distribution::from_u64_masses(&w).unwrap();
        for seed in 0..300 {
            let p = params(3, seed);
            for x in d.support() {
                let run = run_tr_traced(&d, p, Element(x)).unwrap();
                for rec in &run.trace {
                    check_record(rec, run.scale).unwrap();
                }
            }
        }
    }

    #[test]
    fn precision_limit() {
        let masses: Vec<BigUint> = (0..130).map(|i| BigUint::one() << (129 - i.min(129))).collect();
        let d = Distribution::from_masses(&masses).unwrap();
        assert!(matches!(
            TrState::new(&d, params(3, 0)),
            Err(Error::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn estimate_examples() {
        let u8 = Distribution::uniform(8);
        let est = estimate_expected_cost(&u8, params(3, 7), 20).unwrap();
        for e in &est.per_element {
            assert_eq!(e.mean_depth, 3.0);
            assert!((e.bound - 3.75).abs() < 1e-12);
        }
        let est = estimate_expected_cost(&Distribution::uniform(2), params(3, 7), 10).unwrap();
        assert_eq!(est.per_element[0].mean_depth, 1.0);
        assert!((est.per_element[0].bound - 1.75).abs() < 1e-12);
    }

    #[test]
    fn audited_tree_sees_every_run_update() {
        let d = Distribution::from_u64_masses(&[40, 1, 1, 2, 3, 1, 9, 1, 1, 1, 5, 1]).unwrap();
        let p = params(3, 11);
        let mut seen = Vec::new();
        let t = build_tr_tree_audited(&d, p, &mut |rec, scale| {
            assert!(check_record(rec, scale).is_ok());
            seen.push(rec.clone());
        })
        .unwrap();
        assert_eq!(t, build_tr_tree(&d, p).unwrap());
        for x in d.support() {
            for rec in run_tr_traced(&d, p, Element(x)).unwrap().trace {
                assert!(seen.contains(&rec));
            }
        }
    }
}
