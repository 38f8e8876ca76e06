//! Counterfactual values at terminal public states.

use super::Counters;
use crate::error::{contract, Error, Result};
use crate::fosg::{Chwu, LinearTerminal, Player, PublicState, Settlement, NO_CARD};

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return contract(format!("{what} has {got} entries, the terminal expects {want}"));
    }
    Ok(())
}

/// `V_i = ChWU_i * reach_-i`, one operation per matrix cell.
pub fn terminal_eval_generic(
    chwu: &Chwu,
    player: Player,
    opponent_reach: &[f64],
    out: &mut [f64],
    counters: &mut Counters,
) -> Result<()> {
    let (own, opp) = if player == 0 { (chwu.rows, chwu.cols) } else { (chwu.cols, chwu.rows) };
    check_len("opponent reach", opponent_reach.len(), opp)?;
    check_len("output", out.len(), own)?;
    out.fill(0.0);
    for r in 0..chwu.rows {
        for c in 0..chwu.cols {
            let u = chwu.cells[r * chwu.cols + c][player];
            if player == 0 {
                out[r] += u * opponent_reach[c];
            } else {
                out[c] += u * opponent_reach[r];
            }
        }
    }
    counters.terminal_eval_ops += (chwu.rows * chwu.cols) as u64;
    Ok(())
}

/// Both players' terminal values in one sweep over the matrix, one
/// operation per cell.
pub(crate) fn terminal_eval_generic_pair(
    chwu: &Chwu,
    reach: [&[f64]; 2],
    v1: &mut [f64],
    v2: &mut [f64],
    counters: &mut Counters,
) {
    v1.fill(0.0);
    v2.fill(0.0);
    let cols = chwu.cols;
    for (r, v1r) in v1.iter_mut().enumerate() {
        let row = &chwu.cells[r * cols..(r + 1) * cols];
        let r1 = reach[0][r];
        let mut acc = 0.0;
        for ((cell, r2), v2c) in row.iter().zip(reach[1]).zip(v2.iter_mut()) {
            acc += cell[0] * r2;
            *v2c += cell[1] * r1;
        }
        *v1r = acc;
    }
    counters.terminal_eval_ops += (chwu.rows * cols) as u64;
}

/// Reach of opponent hands that share a card with `hand`. A hand sharing
/// both cards appears in both per-card sums and is added back once.
fn blocked(per_card: &[f64], hand: [u8; 2], twin: f64) -> f64 {
    if hand[1] == NO_CARD {
        per_card[hand[0] as usize]
    } else {
        per_card[hand[0] as usize] + per_card[hand[1] as usize] - twin
    }
}

fn add(per_card: &mut [f64], hand: [u8; 2], r: f64) {
    per_card[hand[0] as usize] += r;
    if hand[1] != NO_CARD {
        per_card[hand[1] as usize] += r;
    }
}

/// Terminal values of a rank-ordered two-player terminal computed by a sweep
/// over hands sorted by rank, in `O(|S'_1| + |S'_2|)` operations.
pub fn terminal_eval_poker_linear(
    lt: &LinearTerminal,
    player: Player,
    opponent_reach: &[f64],
    out: &mut [f64],
    counters: &mut Counters,
) -> Result<()> {
    let opp = 1 - player;
    let (own_cards, opp_cards) = (&lt.cards[player], &lt.cards[opp]);
    check_len("opponent reach", opponent_reach.len(), opp_cards.len())?;
    check_len("output", out.len(), own_cards.len())?;
    let scale = lt.stake * lt.chance;
    match lt.settlement {
        Settlement::Fold { folder } => {
            let sign = if folder == player { -1.0 } else { 1.0 };
            let mut buffer = [0.0f64; 64];
            let per_card = &mut buffer[..lt.num_cards];
            let mut total = 0.0;
            for (&h, &r) in opp_cards.iter().zip(opponent_reach) {
                total += r;
                add(per_card, h, r);
            }
            for (k, (&h, o)) in own_cards.iter().zip(out.iter_mut()).enumerate() {
                let twin = lt.twin[player][k].map_or(0.0, |j| opponent_reach[j]);
                *o = sign * scale * (total - blocked(per_card, h, twin));
            }
            counters.terminal_eval_ops += (opp_cards.len() + own_cards.len()) as u64;
        }
        Settlement::Showdown if lt.single_card => {
            // A one-card hand is only blocked by the same card, which ties,
            // so weaker and stronger reach are plain prefix sums.
            let own_rank = &lt.ranks[player];
            let opp_sorted = &lt.sorted_ranks[opp];
            let m = opp_sorted.len();
            // Card masks are 64 bits wide, so at most 64 hands.
            let mut prefix = [0.0f64; 65];
            for (j, &o) in lt.order[opp].iter().enumerate() {
                prefix[j + 1] = prefix[j] + opponent_reach[o];
            }
            let total = prefix[m];
            let (mut lo, mut hi) = (0, 0);
            for &k in &lt.order[player] {
                let rank = own_rank[k];
                while lo < m && opp_sorted[lo] < rank {
                    lo += 1;
                }
                hi = hi.max(lo);
                while hi < m && opp_sorted[hi] <= rank {
                    hi += 1;
                }
                out[k] = scale * (prefix[lo] - (total - prefix[hi]));
            }
            counters.terminal_eval_ops += (2 * (opp_cards.len() + own_cards.len())) as u64;
        }
        Settlement::Showdown => {
            let own_rank = &lt.ranks[player];
            let (own_order, opp_order) = (&lt.order[player], &lt.order[opp]);
            let opp_sorted = &lt.sorted_ranks[opp];
            let m = opp_order.len();
            let mut buffer = [0.0f64; 64];
            let per_card = &mut buffer[..lt.num_cards];
            // Ascending sweep: reach of strictly weaker opponent hands.
            // Identical hands tie, so no twin is ever in the running sums.
            let mut total = 0.0;
            let mut j = 0;
            for &k in own_order {
                while j < m && opp_sorted[j] < own_rank[k] {
                    let o = opp_order[j];
                    total += opponent_reach[o];
                    add(per_card, opp_cards[o], opponent_reach[o]);
                    j += 1;
                }
                out[k] = total - blocked(per_card, own_cards[k], 0.0);
            }
            // Descending sweep: reach of strictly stronger opponent hands.
            per_card.fill(0.0);
            let mut total = 0.0;
            let mut j = m;
            for &k in own_order.iter().rev() {
                while j > 0 && opp_sorted[j - 1] > own_rank[k] {
                    let o = opp_order[j - 1];
                    total += opponent_reach[o];
                    add(per_card, opp_cards[o], opponent_reach[o]);
                    j -= 1;
                }
                out[k] = scale * (out[k] - (total - blocked(per_card, own_cards[k], 0.0)));
            }
            counters.terminal_eval_ops += (2 * (opp_cards.len() + own_cards.len())) as u64;
        }
    }
    Ok(())
}

/// Linear evaluation of a public state's terminal, failing when the game
/// does not expose rank data there.
pub fn linear_terminal(node: &PublicState) -> Result<&LinearTerminal> {
    node.linear
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("terminal {} has no rank-ordered settlement", node.key)))
}
