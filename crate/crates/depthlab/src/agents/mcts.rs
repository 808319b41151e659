//! UCT search. One tree per decision, one node expanded per iteration,
//! uniform-random playouts, win/loss backup from each node mover's
//! perspective. Everything that breaks ties does so in row-major move
//! order, so a decision is a pure function of (position, seed, budget).

use rand_chacha::ChaCha8Rng;

use crate::games::{Color, Move, Position};

struct Node {
    /// Move that led here; the root holds a placeholder.
    mv: Move,
    /// Who played `mv`. Backed-up wins are from this player's view.
    mover: Color,
    visits: u32,
    wins: u32,
    children: Vec<u32>,
    /// Legal continuations not yet expanded, row-major; `cursor` consumes
    /// them front to back so expansion order is deterministic.
    untried: Vec<Move>,
    cursor: usize,
    winner: Option<Color>,
}

/// Runs exactly `sims` playout iterations (an in-tree terminal counts as an
/// iteration) and returns the most-visited root move, earliest expanded on
/// ties. The caller guarantees `pos` is not terminal.
pub(crate) fn search(
    pos: &Position,
    sims: u32,
    exploration: f64,
    rng: &mut ChaCha8Rng,
    scratch: &mut Vec<u8>,
    playouts: &mut u64,
) -> Move {
    debug_assert!(pos.winner().is_none());
    let root_untried = pos.legal_moves();
    debug_assert!(!root_untried.is_empty());
    let mut nodes = vec![Node {
        mv: Move::new(0, 0),
        mover: pos.to_move().opponent(),
        visits: 0,
        wins: 0,
        children: Vec::new(),
        untried: root_untried,
        cursor: 0,
        winner: None,
    }];
    let mut path: Vec<u32> = Vec::with_capacity(64);

    for _ in 0..sims {
        let mut state = pos.clone();
        let mut at = 0u32;
        path.clear();
        path.push(at);

        // Selection: descend through fully expanded nodes by UCB.
        loop {
            let node = &nodes[at as usize];
            if node.winner.is_some() || node.cursor < node.untried.len() || node.children.is_empty()
            {
                break;
            }
            let ln_parent = (node.visits as f64).ln();
            let mut best = node.children[0];
            let mut best_score = f64::NEG_INFINITY;
            for &c in &node.children {
                let child = &nodes[c as usize];
                let score = child.wins as f64 / child.visits as f64
                    + exploration * (ln_parent / child.visits as f64).sqrt();
                if score > best_score {
                    best_score = score;
                    best = c;
                }
            }
            state.apply_unchecked(nodes[best as usize].mv);
            path.push(best);
            at = best;
        }

        // Expansion and playout; a terminal node just replays its result.
        let winner = if let Some(w) = nodes[at as usize].winner {
            w
        } else {
            let mover = state.to_move();
            let mv = {
                let node = &mut nodes[at as usize];
                let mv = node.untried[node.cursor];
                node.cursor += 1;
                mv
            };
            state.apply_unchecked(mv);
            let state_winner = state.winner();
            let untried = if state_winner.is_some() { Vec::new() } else { state.legal_moves() };
            let fresh = Node {
                mv,
                mover,
                visits: 0,
                wins: 0,
                children: Vec::new(),
                untried,
                cursor: 0,
                winner: state_winner,
            };
            let idx = nodes.len() as u32;
            nodes.push(fresh);
            nodes[at as usize].children.push(idx);
            path.push(idx);
            match state_winner {
                Some(w) => w,
                None => state.playout(rng, scratch),
            }
        };
        *playouts += 1;

        for &i in &path {
            let node = &mut nodes[i as usize];
            node.visits += 1;
            node.wins += (winner == node.mover) as u32;
        }
    }

    let root = &nodes[0];
    let mut best = root.children[0];
    for &c in &root.children {
        if nodes[c as usize].visits > nodes[best as usize].visits {
            best = c;
        }
    }
    nodes[best as usize].mv
}
