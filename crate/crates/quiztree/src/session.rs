//! Interactive games: one secret, one strategy, answers fed one at a time.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use quiztree_core::json::{distribution_to_json, question_to_json};
use quiztree_core::stepper::{StepState, Stepper};
use quiztree_core::{huffman, Distribution, Element, Error, Question};

use crate::spec::StrategySpec;

/// Element lists are attached to questions up to this ground size.
pub const ELEMENT_LIST_LIMIT: usize = 256;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("no session with id {0}")]
    UnknownSession(String),
    #[error("the game is already over")]
    WrongState,
    #[error("answers are inconsistent with every remaining candidate")]
    InconsistentAnswers,
    #[error("bad strategy: {0}")]
    BadStrategy(String),
    #[error("bad distribution: {0}")]
    BadDistribution(String),
}

pub struct GameSession {
    id: String,
    dist: Distribution,
    strategy: StrategySpec,
    stepper: Box<dyn Stepper>,
    history: Vec<(Question, bool)>,
    entropy: f64,
    opt: String,
    last_used: Instant,
}

pub fn question_json(q: &Question) -> Value {
    question_to_json(q, q.n() <= ELEMENT_LIST_LIMIT)
}

fn result_json(e: Element) -> Value {
    json!({ "element": e.one_based(), "render": e.to_string() })
}

impl GameSession {
    pub fn new(id: String, dist: Distribution, strategy: StrategySpec) -> Result<Self, SessionError> {
        let stepper = strategy.stepper(&dist).map_err(|e| match e {
            Error::InvalidDistribution(m) => SessionError::BadDistribution(m),
            other => SessionError::BadStrategy(other.to_string()),
        })?;
        let h = huffman(&dist);
        Ok(GameSession {
            id,
            entropy: dist.entropy(),
            opt: h.opt_cost.to_string(),
            dist,
            strategy,
            stepper,
            history: Vec::new(),
            last_used: Instant::now(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> StepState {
        self.stepper.state()
    }

    pub fn asked(&self) -> usize {
        self.history.len()
    }

    pub fn history(&self) -> &[(Question, bool)] {
        &self.history
    }

    pub fn answer(&mut self, yes: bool) -> Result<StepState, SessionError> {
        self.last_used = Instant::now();
        let StepState::Ask(q) = self.stepper.state() else {
            return Err(SessionError::WrongState);
        };
        let next = self.stepper.answer(yes).map_err(|e| match e {
            Error::InconsistentAnswers => SessionError::InconsistentAnswers,
            _ => SessionError::WrongState,
        })?;
        self.history.push((q, yes));
        Ok(next)
    }

    /// `{question}` or `{result}`, plus `asked`.
    pub fn step_json(&self) -> Value {
        let mut v = match self.state() {
            StepState::Ask(q) => json!({ "question": question_json(&q) }),
            StepState::Done(e) => json!({ "result": result_json(e) }),
        };
        v["asked"] = json!(self.asked());
        v
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "n": self.dist.n(),
            "entropy": format!("{:.12}", self.entropy),
            "opt": self.opt,
        })
    }

    pub fn full_json(&self) -> Value {
        let mut v = self.step_json();
        v["id"] = json!(self.id);
        v["status"] = json!(match self.state() {
            StepState::Ask(_) => "awaiting-answer",
            StepState::Done(_) => "done",
        });
        v["strategy"] = self.strategy.to_json();
        v["distribution"] = distribution_to_json(&self.dist);
        v["summary"] = self.summary_json();
        v["history"] = self
            .history
            .iter()
            .map(|(q, a)| json!({ "question": question_json(q), "answer": a }))
            .collect();
        v
    }
}

/// In-memory sessions with idle expiry. Each session sits behind its own
/// lock so concurrent games do not serialize on one another.
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Mutex<GameSession>>>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            ttl,
        }
    }

    fn evict(&self, map: &mut HashMap<String, Arc<Mutex<GameSession>>>) {
        let ttl = self.ttl;
        map.retain(|_, s| s.lock().map(|g| g.last_used.elapsed() < ttl).unwrap_or(false));
    }

    pub fn create(&self, dist: Distribution, strategy: StrategySpec) -> Result<Arc<Mutex<GameSession>>, SessionError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Arc::new(Mutex::new(GameSession::new(id.clone(), dist, strategy)?));
        let mut map = self.sessions.lock().expect("store lock");
        self.evict(&mut map);
        map.insert(id, session.clone());
        Ok(session)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, SessionError> {
        let mut map = self.sessions.lock().expect("store lock");
        self.evict(&mut map);
        let s = map
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))?;
        s.lock().expect("session lock").last_used = Instant::now();
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(Duration::from_secs(3600))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist() -> Distribution {
        Distribution::from_strs(&["1/2", "1/4", "1/4"]).unwrap()
    }

    #[test]
    fn cone_game_no_no() {
        let mut s = GameSession::new("a".into(), dist(), StrategySpec::Cone).unwrap();
        assert!(matches!(s.answer(false).unwrap(), StepState::Ask(_)));
        assert_eq!(s.answer(false).unwrap(), StepState::Done(Element(2)));
        assert_eq!(s.asked(), 2);
        assert_eq!(s.answer(true), Err(SessionError::WrongState));
        let v = s.full_json();
        assert_eq!(v["status"], "done");
        assert_eq!(v["result"]["element"], 3);
        assert_eq!(v["history"].as_array().unwrap().len(), 2);
        assert_eq!(v["summary"]["opt"], "3/2");
    }

    #[test]
    fn point_mass_is_immediately_done() {
        let d = Distribution::point_mass(4, 2);
        let s = GameSession::new("b".into(), d, StrategySpec::At { t: "3/10".parse().unwrap() }).unwrap();
        assert_eq!(s.state(), StepState::Done(Element(2)));
        assert_eq!(s.step_json()["asked"], 0);
    }

    #[test]
    fn store_expires_idle_sessions() {
        let store = SessionStore::new(Duration::from_millis(30));
        let s = store.create(dist(), StrategySpec::Huffman).unwrap();
        let id = s.lock().unwrap().id().to_string();
        assert!(store.get(&id).is_ok());
        std::thread::sleep(Duration::from_millis(60));
        assert_eq!(store.get(&id).err(), Some(SessionError::UnknownSession(id)));
        assert!(store.is_empty());
    }
}
