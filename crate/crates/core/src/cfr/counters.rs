use std::ops::AddAssign;

/// Work done by a solver, cumulative since construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub histories_touched: u64,
    pub infostate_value_updates: u64,
    pub infostate_action_updates: u64,
    pub terminal_eval_ops: u64,
    pub wall_nanoseconds: u64,
}

impl Counters {
    /// Infostate and infostate-action values written.
    pub fn value_updates(&self) -> u64 {
        self.infostate_value_updates + self.infostate_action_updates
    }

    pub fn since(&self, earlier: &Counters) -> Counters {
        Counters {
            histories_touched: self.histories_touched - earlier.histories_touched,
            infostate_value_updates: self.infostate_value_updates - earlier.infostate_value_updates,
            infostate_action_updates: self.infostate_action_updates - earlier.infostate_action_updates,
            terminal_eval_ops: self.terminal_eval_ops - earlier.terminal_eval_ops,
            wall_nanoseconds: self.wall_nanoseconds - earlier.wall_nanoseconds,
        }
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.histories_touched += o.histories_touched;
        self.infostate_value_updates += o.infostate_value_updates;
        self.infostate_action_updates += o.infostate_action_updates;
        self.terminal_eval_ops += o.terminal_eval_ops;
        self.wall_nanoseconds += o.wall_nanoseconds;
    }
}
