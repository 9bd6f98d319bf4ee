//! Interactive play: a strategy driven one answer at a time.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::question::Question;
use crate::set::Element;
use crate::tree::{DecisionTree, Node, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepState {
    Ask(Question),
    Done(Element),
}

pub trait Stepper: Send {
    fn state(&self) -> StepState;

    /// Feeds the answer to the pending question.
    ///
    /// Errors with `InconsistentAnswers` if no candidate survives, and with
    /// `PreconditionViolated` if the game is already over.
    fn answer(&mut self, yes: bool) -> Result<StepState>;

    fn questions_asked(&self) -> usize;
}

/// Walks a prebuilt tree.
#[derive(Debug, Clone)]
pub struct TreeStepper {
    tree: Arc<DecisionTree>,
    at: NodeId,
    asked: usize,
}

impl TreeStepper {
    pub fn new(tree: Arc<DecisionTree>) -> Self {
        let at = tree.root();
        TreeStepper { tree, at, asked: 0 }
    }
}

impl Stepper for TreeStepper {
    fn state(&self) -> StepState {
        match self.tree.node(self.at) {
            Node::Leaf(e) => StepState::Done(*e),
            Node::Ask { question, .. } => StepState::Ask(question.clone()),
        }
    }

    fn answer(&mut self, yes: bool) -> Result<StepState> {
        match self.tree.node(self.at) {
            Node::Leaf(_) => Err(Error::PreconditionViolated("the game is over".into())),
            Node::Ask { yes: y, no, .. } => {
                self.at = if yes { *y } else { *no };
                self.asked += 1;
                Ok(self.state())
            }
        }
    }

    fn questions_asked(&self) -> usize {
        self.asked
    }
}
