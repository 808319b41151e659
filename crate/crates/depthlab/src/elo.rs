//! Elo arithmetic, playing-level complexity, and depth.
//!
//! The playing-level complexity (PLC) of a pool is the Elo spread recovered
//! from win probabilities: each adjacent pair contributes
//! `-400*log10(1/p - 1)` where `p` is the stronger player's win rate, and
//! the chain sum telescopes to the spread when the probabilities are exact.
//! Depth counts how many 60%-steps fit into that spread.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elo gap of a single 60% step: `-400*log10(1/0.6 - 1)`, about 70.4365.
pub fn level_ratio() -> f64 {
    -400.0 * (1.0f64 / 0.6 - 1.0).log10()
}

/// Win probability of the stronger side at Elo difference `diff`.
pub fn elo_win_prob(diff: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf(-diff / 400.0))
}

/// Elo difference that produces win probability `p`. Finite only on (0, 1).
pub fn elo_gap(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::EloDomain { p });
    }
    // + 0.0 turns the -0.0 at p = 0.5 into a plain zero
    Ok(-400.0 * (1.0 / p - 1.0).log10() + 0.0)
}

/// Depth in fractional 60%-levels.
pub fn depth_fractional(plc: f64) -> f64 {
    plc / level_ratio()
}

/// Number of distinguishable levels: one more than the whole 60%-steps.
pub fn depth_integer(plc: f64) -> i64 {
    1 + depth_fractional(plc).floor() as i64
}

/// How empirical win rates of exactly 0 or 1 are handled before taking an
/// Elo gap. `HalfGame` credits the loser half a game: with `g` games the
/// rate is pulled into `[1/(2g), 1 - 1/(2g)]`. Cells with no game count
/// attached (analytic tables) are never clamped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clamp {
    Raw,
    HalfGame,
}

/// Pairwise win probabilities of a player pool. `p[i][j]` is the probability
/// that player `i` beats player `j`; `counts[i][j]` is the number of games
/// behind that estimate, zero for analytic values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinMatrix {
    pub labels: Vec<String>,
    pub p: Vec<Vec<f64>>,
    pub counts: Vec<Vec<u64>>,
}

impl WinMatrix {
    /// Builds from exact probabilities with zero counts.
    pub fn analytic(labels: Vec<String>, p: Vec<Vec<f64>>) -> Result<WinMatrix> {
        let n = labels.len();
        let m = WinMatrix { labels, p, counts: vec![vec![0; n]; n] };
        m.validate()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::Empty { what: "win matrix" });
        }
        if self.p.len() != n
            || self.counts.len() != n
            || self.p.iter().any(|r| r.len() != n)
            || self.counts.iter().any(|r| r.len() != n)
        {
            return Err(Error::Dimension(format!("matrix rows/cols must all be {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.p[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Dimension(format!("p[{i}][{j}] = {v} outside [0,1]")));
                }
                if i != j {
                    if (self.p[i][j] + self.p[j][i] - 1.0).abs() > 1e-9 {
                        return Err(Error::Dimension(format!("p[{i}][{j}] + p[{j}][{i}] != 1")));
                    }
                    if self.counts[i][j] != self.counts[j][i] {
                        return Err(Error::Dimension(format!(
                            "counts[{i}][{j}] != counts[{j}][{i}]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Win probability with the clamping policy applied. The flag reports
    /// whether clamping changed the value.
    pub fn prob(&self, i: usize, j: usize, clamp: Clamp) -> (f64, bool) {
        let raw = self.p[i][j];
        let g = self.counts[i][j];
        if clamp == Clamp::HalfGame && g > 0 {
            let lo = 1.0 / (2.0 * g as f64);
            let clamped = raw.clamp(lo, 1.0 - lo);
            (clamped, clamped != raw)
        } else {
            (raw, false)
        }
    }

    /// Indices sorted weakest to strongest by mean score against the pool.
    pub fn order_by_mean_score(&self) -> Vec<usize> {
        let n = self.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mean = |i: usize| -> f64 {
            if n == 1 {
                return 0.5;
            }
            self.p[i].iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum::<f64>()
                / (n - 1) as f64
        };
        order.sort_by(|&a, &b| mean(a).partial_cmp(&mean(b)).unwrap().then(a.cmp(&b)));
        order
    }
}

/// A PLC value with its per-step gaps. `degenerate` marks a step whose win
/// rate stayed at 0 or 1 even after clamping; the sum is then infinite.
#[derive(Debug, Clone, Serialize)]
pub struct PlcValue {
    pub plc: f64,
    pub gaps: Vec<f64>,
    pub clamped_cells: usize,
    pub degenerate: bool,
}

fn gap_or_infinity(p: f64) -> f64 {
    match elo_gap(p) {
        Ok(g) => g,
        Err(_) => {
            if p >= 1.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        }
    }
}

/// Chain PLC: sum of adjacent-pair gaps along `order` (weakest first).
pub fn plc_chain(m: &WinMatrix, order: &[usize], clamp: Clamp) -> Result<PlcValue> {
    m.validate()?;
    let n = m.n();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::Dimension(format!("order must be a permutation of 0..{n}")));
    }
    let mut gaps = Vec::with_capacity(n.saturating_sub(1));
    let mut clamped_cells = 0;
    let mut degenerate = false;
    for k in 0..n.saturating_sub(1) {
        let (stronger, weaker) = (order[k + 1], order[k]);
        let (p, clamped) = m.prob(stronger, weaker, clamp);
        clamped_cells += clamped as usize;
        let gap = gap_or_infinity(p);
        degenerate |= !gap.is_finite();
        gaps.push(gap);
    }
    Ok(PlcValue { plc: gaps.iter().sum(), gaps, clamped_cells, degenerate })
}

/// Extremes PLC: the single gap between the pool's strongest and weakest.
pub fn plc_extremes(
    m: &WinMatrix,
    strongest: usize,
    weakest: usize,
    clamp: Clamp,
) -> Result<PlcValue> {
    m.validate()?;
    let n = m.n();
    if strongest >= n || weakest >= n || strongest == weakest {
        return Err(Error::Dimension(format!(
            "extremes ({strongest}, {weakest}) must be distinct indices below {n}"
        )));
    }
    let (p, clamped) = m.prob(strongest, weakest, clamp);
    let gap = gap_or_infinity(p);
    Ok(PlcValue {
        plc: gap,
        gaps: vec![gap],
        clamped_cells: clamped as usize,
        degenerate: !gap.is_finite(),
    })
}

/// Longest chain of players where each beats the next with probability at
/// least `threshold` (raw probabilities). Returns player indices, strongest
/// first; ties resolve to the lexicographically smallest index sequence.
pub fn depth_chain(m: &WinMatrix, threshold: f64) -> Result<Vec<usize>> {
    m.validate()?;
    let n = m.n();
    if n > 20 {
        return Err(Error::Dimension(format!("chain search supports at most 20 players, got {n}")));
    }
    if !(0.5..=1.0).contains(&threshold) {
        return Err(Error::InvalidConfig(format!("chain threshold {threshold} outside [0.5, 1]")));
    }
    let edge = |a: usize, b: usize| m.p[a][b] >= threshold;

    // Longest-suffix search over (visited set, last node). The value of a
    // state is independent of how it was reached, so memoization is sound.
    type Memo = std::collections::HashMap<(u32, u8), (u8, u8)>;
    const STOP: u8 = u8::MAX;

    fn best(
        mask: u32,
        last: u8,
        n: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        memo: &mut Memo,
    ) -> (u8, u8) {
        if let Some(&hit) = memo.get(&(mask, last)) {
            return hit;
        }
        let mut result = (0u8, STOP);
        for next in 0..n as u8 {
            if mask & (1 << next) != 0 || !edge(last as usize, next as usize) {
                continue;
            }
            let (suffix, _) = best(mask | (1 << next), next, n, edge, memo);
            if suffix + 1 > result.0 {
                result = (suffix + 1, next);
            }
        }
        memo.insert((mask, last), result);
        result
    }

    let mut memo = Memo::new();
    let mut start = 0usize;
    let mut len = 0u8;
    for s in 0..n {
        let (suffix, _) = best(1 << s, s as u8, n, &edge, &mut memo);
        if suffix + 1 > len {
            len = suffix + 1;
            start = s;
        }
    }
    let mut chain = vec![start];
    let mut mask = 1u32 << start;
    let mut last = start as u8;
    loop {
        let (_, next) = best(mask, last, n, &edge, &mut memo);
        if next == STOP {
            break;
        }
        chain.push(next as usize);
        mask |= 1 << next;
        last = next;
    }
    Ok(chain)
}

/// Everything the depth of one pool rests on, bundled for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct DepthReport {
    pub labels: Vec<String>,
    /// Pool indices weakest to strongest, as used by the chain PLC.
    pub order: Vec<usize>,
    pub plc_chain: PlcValue,
    pub plc_extremes: PlcValue,
    pub depth_fractional: f64,
    pub depth_integer: i64,
    /// Longest 60% chain, strongest first.
    pub chain: Vec<usize>,
}

pub fn depth_report(m: &WinMatrix, clamp: Clamp) -> Result<DepthReport> {
    m.validate()?;
    let order = m.order_by_mean_score();
    let chain_plc = plc_chain(m, &order, clamp)?;
    let extremes = if m.n() > 1 {
        plc_extremes(m, order[m.n() - 1], order[0], clamp)?
    } else {
        PlcValue { plc: 0.0, gaps: vec![], clamped_cells: 0, degenerate: false }
    };
    let chain = depth_chain(m, 0.6)?;
    Ok(DepthReport {
        labels: m.labels.clone(),
        order,
        depth_fractional: depth_fractional(chain_plc.plc),
        depth_integer: depth_integer(chain_plc.plc),
        plc_chain: chain_plc,
        plc_extremes: extremes,
        chain,
    })
}

#[cfg(test)]
// Index loops fill the random antisymmetric matrices more clearly than
// iterator chains would.
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use rand::Rng;

    fn ratings_matrix(ratings: &[f64]) -> WinMatrix {
        let n = ratings.len();
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0.5 } else { elo_win_prob(ratings[i] - ratings[j]) })
                    .collect()
            })
            .collect();
        WinMatrix::analytic(labels, p).unwrap()
    }

    #[test]
    fn level_ratio_value() {
        assert!((level_ratio() - 70.43650362227247).abs() < 1e-9);
        assert!((elo_win_prob(level_ratio()) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn gap_and_win_prob_invert() {
        for k in -40..=40 {
            let d = k as f64 * 50.0;
            let p = elo_win_prob(d);
            // Near-saturated probabilities amplify rounding when mapped
            // back, so the tolerance scales with the gap.
            let tol = 1e-8 * d.abs().max(1.0);
            assert!((elo_gap(p).unwrap() - d).abs() < tol, "diff {d}");
        }
    }

    #[test]
    fn gap_domain() {
        for p in [0.0, 1.0, -0.2, 1.2, f64::NAN] {
            assert!(matches!(elo_gap(p), Err(Error::EloDomain { .. })));
        }
        assert!(elo_gap(1e-12).is_ok());
    }

    #[test]
    fn depth_examples() {
        assert!((depth_fractional(270.73) - 3.84).abs() < 0.01);
        assert!((depth_fractional(323.95) - 4.60).abs() < 0.01);
        assert_eq!(depth_integer(270.73), 4);
        assert_eq!(depth_integer(323.95), 5);
        assert_eq!(depth_integer(0.0), 1);
    }

    #[test]
    fn chain_telescopes_on_exact_ratings() {
        let m = ratings_matrix(&[0.0, 100.0, 250.0, 330.0]);
        let chain = plc_chain(&m, &[0, 1, 2, 3], Clamp::Raw).unwrap();
        assert!((chain.plc - 330.0).abs() < 1e-9);
        let ext = plc_extremes(&m, 3, 0, Clamp::Raw).unwrap();
        assert!((ext.plc - 330.0).abs() < 1e-9);
        assert_eq!(chain.clamped_cells, 0);
        assert!(!chain.degenerate);
    }

    #[test]
    fn order_by_mean_score_sorts_weakest_first() {
        let m = ratings_matrix(&[200.0, 0.0, 400.0]);
        assert_eq!(m.order_by_mean_score(), vec![1, 0, 2]);
    }

    #[test]
    fn chain_rejects_non_permutations() {
        let m = ratings_matrix(&[0.0, 50.0]);
        assert!(plc_chain(&m, &[0, 0], Clamp::Raw).is_err());
        assert!(plc_chain(&m, &[0], Clamp::Raw).is_err());
        assert!(plc_chain(&m, &[0, 2], Clamp::Raw).is_err());
    }

    #[test]
    fn half_game_clamp_restores_finiteness() {
        let labels = vec!["a".into(), "b".into()];
        let m = WinMatrix {
            labels,
            p: vec![vec![0.5, 1.0], vec![0.0, 0.5]],
            counts: vec![vec![0, 100], vec![100, 0]],
        };
        let raw = plc_chain(&m, &[1, 0], Clamp::Raw).unwrap();
        assert!(raw.degenerate && raw.plc.is_infinite());
        let clamped = plc_chain(&m, &[1, 0], Clamp::HalfGame).unwrap();
        assert!(!clamped.degenerate);
        assert_eq!(clamped.clamped_cells, 1);
        let expect = elo_gap(1.0 - 1.0 / 200.0).unwrap();
        assert!((clamped.plc - expect).abs() < 1e-12);
    }

    #[test]
    fn analytic_extremes_stay_degenerate() {
        // Zero counts mean there is no game scale to clamp with.
        let m =
            WinMatrix::analytic(vec!["a".into(), "b".into()], vec![vec![0.5, 1.0], vec![0.0, 0.5]])
                .unwrap();
        let v = plc_chain(&m, &[1, 0], Clamp::HalfGame).unwrap();
        assert!(v.degenerate && v.plc == f64::INFINITY && v.clamped_cells == 0);
    }

    #[test]
    fn validation_catches_asymmetry() {
        let bad = WinMatrix {
            labels: vec!["a".into(), "b".into()],
            p: vec![vec![0.5, 0.7], vec![0.4, 0.5]],
            counts: vec![vec![0, 0], vec![0, 0]],
        };
        assert!(bad.validate().is_err());
    }

    /// Exhaustive longest-path search by permutation prefix enumeration,
    /// lexicographically smallest among the longest. Oracle for `depth_chain`.
    fn chain_oracle(m: &WinMatrix, threshold: f64) -> Vec<usize> {
        let n = m.n();
        let mut best: Vec<usize> = Vec::new();
        fn extend(
            m: &WinMatrix,
            threshold: f64,
            chain: &mut Vec<usize>,
            used: &mut Vec<bool>,
            best: &mut Vec<usize>,
        ) {
            if chain.len() > best.len() {
                *best = chain.clone();
            }
            for next in 0..m.n() {
                if used[next] {
                    continue;
                }
                if let Some(&last) = chain.last() {
                    if m.p[last][next] < threshold {
                        continue;
                    }
                }
                used[next] = true;
                chain.push(next);
                extend(m, threshold, chain, used, best);
                chain.pop();
                used[next] = false;
            }
        }
        let mut used = vec![false; n];
        extend(m, threshold, &mut Vec::new(), &mut used, &mut best);
        best
    }

    #[test]
    fn depth_chain_matches_exhaustive_oracle() {
        let mut rng = rng_from(31);
        for trial in 0..200 {
            let n = rng.random_range(2..=6);
            let mut p = vec![vec![0.5; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.random();
                    p[i][j] = v;
                    p[j][i] = 1.0 - v;
                }
            }
            let m = WinMatrix::analytic((0..n).map(|i| format!("p{i}")).collect(), p).unwrap();
            let got = depth_chain(&m, 0.6).unwrap();
            let want = chain_oracle(&m, 0.6);
            assert_eq!(got, want, "trial {trial}");
        }
    }

    #[test]
    fn depth_chain_on_transitive_ladder() {
        // 5 players 80 Elo apart: every 80-gap is a 61% edge, so the chain
        // walks the whole ladder strongest to weakest.
        let m = ratings_matrix(&[0.0, 80.0, 160.0, 240.0, 320.0]);
        assert_eq!(depth_chain(&m, 0.6).unwrap(), vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn raising_threshold_never_lengthens_chain() {
        let mut rng = rng_from(37);
        for _ in 0..100 {
            let n = rng.random_range(2..=6);
            let mut p = vec![vec![0.5; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.random();
                    p[i][j] = v;
                    p[j][i] = 1.0 - v;
                }
            }
            let m = WinMatrix::analytic((0..n).map(|i| format!("p{i}")).collect(), p).unwrap();
            let lo = depth_chain(&m, 0.55).unwrap().len();
            let mid = depth_chain(&m, 0.6).unwrap().len();
            let hi = depth_chain(&m, 0.75).unwrap().len();
            assert!(lo >= mid && mid >= hi);
        }
    }

    #[test]
    fn relabeling_preserves_chain_length() {
        let mut rng = rng_from(41);
        for _ in 0..60 {
            let n = 5;
            let mut p = vec![vec![0.5; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.random();
                    p[i][j] = v;
                    p[j][i] = 1.0 - v;
                }
            }
            let m =
                WinMatrix::analytic((0..n).map(|i| format!("p{i}")).collect(), p.clone()).unwrap();
            // Rotate the labels by one.
            let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let mut q = vec![vec![0.5; n]; n];
            for i in 0..n {
                for j in 0..n {
                    q[perm[i]][perm[j]] = p[i][j];
                }
            }
            let m2 = WinMatrix::analytic((0..n).map(|i| format!("q{i}")).collect(), q).unwrap();
            assert_eq!(depth_chain(&m, 0.6).unwrap().len(), depth_chain(&m2, 0.6).unwrap().len());
        }
    }

    #[test]
    fn depth_report_is_internally_consistent() {
        let m = ratings_matrix(&[0.0, 90.0, 170.0, 280.0]);
        let report = depth_report(&m, Clamp::Raw).unwrap();
        assert_eq!(report.order, vec![0, 1, 2, 3]);
        assert!((report.plc_chain.plc - 280.0).abs() < 1e-9);
        assert!((report.plc_extremes.plc - 280.0).abs() < 1e-9);
        assert!((report.depth_fractional - 280.0 / level_ratio()).abs() < 1e-12);
        assert_eq!(report.depth_integer, 1 + (280.0 / level_ratio()).floor() as i64);
        // Chain respects the 60% condition pairwise.
        for w in report.chain.windows(2) {
            assert!(m.p[w[0]][w[1]] >= 0.6);
        }
    }
}
