//! Bellman table fill over integer grid indices with scaled integer costs.
//!
//! Row `k` holds the cheapest way to cover each demand index `p` with the
//! first `k` items (suppliers, or batch copies of one supplier). Every item
//! offers a sorted list of grid amounts with a scaled cost; an item may also
//! be skipped.

/// Marker stored in the choice matrix when the item is skipped.
pub(crate) const SKIP: u32 = u32::MAX;

/// Offers of one item: sorted grid amounts and their scaled costs.
#[derive(Debug, Clone, Default)]
pub(crate) struct Offers {
    pub amounts: Vec<usize>,
    pub costs: Vec<i128>,
}

impl Offers {
    pub fn push(&mut self, amount: usize, cost: i128) {
        debug_assert!(self.amounts.last().is_none_or(|&a| a < amount));
        self.amounts.push(amount);
        self.costs.push(cost);
    }

    pub fn len(&self) -> usize {
        self.amounts.len()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Filled {
    /// `phi[k][p]`, `None` when no combination of the first `k` items covers `p`.
    pub phi: Vec<Vec<Option<i128>>>,
    /// Offer position taken at each cell, or [`SKIP`].
    pub choice: Vec<Vec<u32>>,
}

/// Fills rows `1..=items.len()` over demand indices `0..points`.
///
/// With `cover` set, a row entry is the cheapest cost of delivering *at
/// least* `p`: an offer larger than `p` closes the state to zero, and the
/// cheapest such offer is used. Without it, the total must equal `p` exactly.
///
/// Ties keep the earlier option: skipping first, then smaller amounts.
pub(crate) fn fill(points: usize, items: &[Offers], cover: bool) -> Filled {
    let mut phi = Vec::with_capacity(items.len() + 1);
    let mut choice = Vec::with_capacity(items.len() + 1);

    let mut base = vec![None; points];
    if points > 0 {
        base[0] = Some(0);
    }
    phi.push(base);
    choice.push(vec![SKIP; points]);

    for offers in items {
        let prev = phi.last().expect("base row present");
        let suffix = suffix_minima(offers);
        let mut row = vec![None; points];
        let mut picks = vec![SKIP; points];

        for p in 0..points {
            let mut best = prev[p];
            let mut pick = SKIP;

            for (pos, (&amount, &cost)) in offers.amounts.iter().zip(&offers.costs).enumerate() {
                if amount > p {
                    break;
                }
                if let Some(rest) = prev[p - amount] {
                    let cand = cost + rest;
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                        pick = pos as u32;
                    }
                }
            }

            if cover && p > 0 {
                let first_above = offers.amounts.partition_point(|&a| a <= p);
                if let Some(&(cost, pos)) = suffix.get(first_above) {
                    if best.is_none_or(|b| cost < b) {
                        best = Some(cost);
                        pick = pos as u32;
                    }
                }
            }

            row[p] = best;
            picks[p] = pick;
        }

        debug_assert!(
            row.iter()
                .zip(prev)
                .all(|(now, before)| match (now, before) {
                    (_, None) => true,
                    (Some(a), Some(b)) => a <= b,
                    (None, Some(_)) => false,
                }),
            "adding an item never raises a cell"
        );
        debug_assert!(
            !cover
                || row.windows(2).all(|w| match (w[0], w[1]) {
                    (_, None) => true,
                    (Some(a), Some(b)) => a <= b,
                    (None, Some(_)) => false,
                }),
            "covering more demand never gets cheaper"
        );

        phi.push(row);
        choice.push(picks);
    }
    Filled { phi, choice }
}

/// `(cost, position)` of the cheapest offer at or after each position,
/// preferring the smaller amount on ties.
fn suffix_minima(offers: &Offers) -> Vec<(i128, usize)> {
    let mut out = vec![(0, 0); offers.len()];
    let mut best: Option<(i128, usize)> = None;
    for pos in (0..offers.len()).rev() {
        let c = offers.costs[pos];
        if best.is_none_or(|(b, _)| c <= b) {
            best = Some((c, pos));
        }
        out[pos] = best.expect("set above");
    }
    out
}
