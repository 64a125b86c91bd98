//! Exhaustive enumeration of perfect and maximal matchings.
//!
//! Both searches branch on the lowest undecided vertex and visit neighbours
//! in ascending order, so the visiting order is deterministic.

use std::ops::ControlFlow;

use crate::budget::{Budget, BudgetExceeded};
use crate::graph::{EdgeId, Graph};

/// Calls `visit` with the sorted edge ids of every perfect matching.
pub(crate) fn for_each_perfect<F>(g: &Graph, budget: &Budget, mut visit: F) -> Result<(), BudgetExceeded>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    if g.n() % 2 == 1 {
        return Ok(());
    }
    let mut matched = vec![false; g.n()];
    let mut stack = Vec::with_capacity(g.n() / 2);
    let mut sorted = Vec::with_capacity(g.n() / 2);
    perfect_rec(g, budget, &mut matched, 0, &mut stack, &mut sorted, &mut visit).map(|_| ())
}

fn perfect_rec<F>(
    g: &Graph,
    budget: &Budget,
    matched: &mut [bool],
    from: usize,
    stack: &mut Vec<EdgeId>,
    sorted: &mut Vec<EdgeId>,
    visit: &mut F,
) -> Result<ControlFlow<()>, BudgetExceeded>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    budget.tick()?;
    let Some(v) = (from..g.n()).find(|&v| !matched[v]) else {
        sorted.clear();
        sorted.extend_from_slice(stack);
        sorted.sort_unstable();
        return Ok(visit(sorted));
    };
    matched[v] = true;
    for &(w, e) in g.neighbors(v) {
        if matched[w] {
            continue;
        }
        matched[w] = true;
        stack.push(e);
        let flow = perfect_rec(g, budget, matched, v + 1, stack, sorted, visit)?;
        stack.pop();
        matched[w] = false;
        if flow.is_break() {
            matched[v] = false;
            return Ok(flow);
        }
    }
    matched[v] = false;
    Ok(ControlFlow::Continue(()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Matched,
    Exposed,
}

/// Calls `visit` with the sorted edge ids of every maximal matching.
///
/// A matching is maximal exactly when its unsaturated vertices form an
/// independent set, so the search assigns each vertex "matched" or
/// "exposed" and forbids two adjacent exposed vertices.
pub(crate) fn for_each_maximal<F>(g: &Graph, budget: &Budget, mut visit: F) -> Result<(), BudgetExceeded>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    let mut state = vec![State::Open; g.n()];
    let mut stack = Vec::with_capacity(g.n() / 2);
    let mut sorted = Vec::with_capacity(g.n() / 2);
    maximal_rec(g, budget, &mut state, 0, &mut stack, &mut sorted, &mut visit).map(|_| ())
}

fn maximal_rec<F>(
    g: &Graph,
    budget: &Budget,
    state: &mut [State],
    from: usize,
    stack: &mut Vec<EdgeId>,
    sorted: &mut Vec<EdgeId>,
    visit: &mut F,
) -> Result<ControlFlow<()>, BudgetExceeded>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    budget.tick()?;
    let Some(v) = (from..g.n()).find(|&v| state[v] == State::Open) else {
        sorted.clear();
        sorted.extend_from_slice(stack);
        sorted.sort_unstable();
        return Ok(visit(sorted));
    };
    let blocked = g.neighbors(v).iter().any(|&(w, _)| state[w] == State::Exposed);
    state[v] = State::Matched;
    for &(w, e) in g.neighbors(v) {
        if state[w] != State::Open {
            continue;
        }
        state[w] = State::Matched;
        stack.push(e);
        let flow = maximal_rec(g, budget, state, v + 1, stack, sorted, visit)?;
        stack.pop();
        state[w] = State::Open;
        if flow.is_break() {
            state[v] = State::Open;
            return Ok(flow);
        }
    }
    if !blocked && open_neighbours_can_match(g, state, v) {
        state[v] = State::Exposed;
        let flow = maximal_rec(g, budget, state, v + 1, stack, sorted, visit)?;
        state[v] = State::Open;
        return Ok(flow);
    }
    state[v] = State::Open;
    Ok(ControlFlow::Continue(()))
}

// If `v` is left exposed every open neighbour must still find a partner.
fn open_neighbours_can_match(g: &Graph, state: &[State], v: usize) -> bool {
    g.neighbors(v).iter().all(|&(u, _)| {
        state[u] != State::Open || g.neighbors(u).iter().any(|&(x, _)| x != v && state[x] == State::Open)
    })
}
