//! The derivation preorder on symbols, its components, and the periodic word
//! `u_X` attached to every recursive nonterminal.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Nt, SForm, Symbol};
use crate::words::{primitive_root, Word};

#[derive(Debug, Clone)]
pub struct ComponentTable {
    comp: Vec<usize>,
    members: Vec<Vec<Nt>>,
    recursive: Vec<bool>,
    comp_height: Vec<usize>,
    /// `reach[x][y]`: `y` occurs in some form derivable from `x`.
    reach: Vec<Vec<bool>>,
    u: Vec<Option<Word>>,
}

/// Component-internal step `X' -> w X'' ...`: `label` is the terminal prefix
/// `w` in front of the unique component symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentEdge {
    pub from: Nt,
    pub to: Nt,
    pub label: Word,
}

impl ComponentTable {
    pub fn num_components(&self) -> usize {
        self.members.len()
    }

    pub fn component(&self, n: Nt) -> usize {
        self.comp[n.index()]
    }

    pub fn members(&self, c: usize) -> &[Nt] {
        &self.members[c]
    }

    pub fn is_recursive(&self, n: Nt) -> bool {
        self.recursive[self.comp[n.index()]]
    }

    pub fn component_is_recursive(&self, c: usize) -> bool {
        self.recursive[c]
    }

    pub fn component_height(&self, c: usize) -> usize {
        self.comp_height[c]
    }

    /// Length of the longest strictly descending chain ending in `s`;
    /// terminals have height 0.
    pub fn height(&self, s: Symbol) -> usize {
        match s {
            Symbol::T(_) => 0,
            Symbol::N(n) => self.comp_height[self.comp[n.index()]],
        }
    }

    /// `y ⪯ x`: `x` derives a form containing `y`.
    pub fn preceq(&self, y: Symbol, x: Symbol) -> bool {
        match (y, x) {
            (_, Symbol::T(a)) => y == Symbol::T(a),
            (Symbol::T(_), Symbol::N(_)) => true,
            (Symbol::N(m), Symbol::N(n)) => self.reach[n.index()][m.index()],
        }
    }

    pub fn same_component(&self, a: Symbol, b: Symbol) -> bool {
        match (a, b) {
            (Symbol::N(m), Symbol::N(n)) => self.comp[m.index()] == self.comp[n.index()],
            _ => a == b,
        }
    }

    /// `u_X`, for recursive `X`.
    pub fn u(&self, n: Nt) -> Option<&Word> {
        self.u[n.index()].as_ref()
    }

    /// Components ordered by increasing height.
    pub fn bottom_up(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by_key(|&c| (self.comp_height[c], c));
        order
    }
}

/// Components of the preorder `Y ⪯ X`, recursiveness, heights, and `u_X` for
/// every recursive nonterminal. The grammar is expected in normal form.
pub fn compute_components(g: &Grammar) -> Result<ComponentTable> {
    let mut table = component_structure(g);
    for x in g.nonterminals() {
        if table.is_recursive(x) {
            table.u[x.index()] = Some(compute_u(g, &table, x)?);
        }
    }
    Ok(table)
}

/// Like [`compute_components`] but leaves every `u_X` unset; usable on
/// grammars whose shape has not been checked yet.
pub fn component_structure(g: &Grammar) -> ComponentTable {
    let n = g.num_nonterminals();
    let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut self_loop = vec![false; n];
    for (x, alt) in g.productions() {
        for m in alt.nonterminals() {
            edges[x.index()].push((m.index(), true));
            if m == x {
                self_loop[x.index()] = true;
            }
        }
    }
    let raw = crate::grammar::scc_ids(&edges);
    // Renumber components densely in first-occurrence order.
    let mut remap = vec![usize::MAX; n];
    let mut members: Vec<Vec<Nt>> = Vec::new();
    let mut comp = vec![0; n];
    for i in 0..n {
        if remap[raw[i]] == usize::MAX {
            remap[raw[i]] = members.len();
            members.push(Vec::new());
        }
        comp[i] = remap[raw[i]];
        members[comp[i]].push(Nt(i as u32));
    }
    let recursive: Vec<bool> = members
        .iter()
        .map(|ms| ms.len() > 1 || self_loop[ms[0].index()])
        .collect();

    let reach: Vec<Vec<bool>> = g.nonterminals().map(|x| g.reachable_from([x])).collect();

    // Heights over the condensation, memoized by depth-first search.
    let k = members.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (x, out) in edges.iter().enumerate() {
        for &(m, _) in out {
            if comp[x] != comp[m] {
                succ[comp[x]].push(comp[m]);
            }
        }
    }
    let mut comp_height = vec![0usize; k];
    let mut done = vec![false; k];
    fn height_of(c: usize, succ: &[Vec<usize>], h: &mut [usize], done: &mut [bool]) -> usize {
        if !done[c] {
            let mut best = 0;
            for &d in &succ[c] {
                best = best.max(height_of(d, succ, h, done));
            }
            h[c] = best + 1;
            done[c] = true;
        }
        h[c]
    }
    for c in 0..k {
        height_of(c, &succ, &mut comp_height, &mut done);
    }

    ComponentTable {
        comp,
        members,
        recursive,
        comp_height,
        reach,
        u: vec![None; n],
    }
}

/// Steps `X' -> w X''` inside the component of `x`.
pub fn component_edges(g: &Grammar, t: &ComponentTable, x: Nt) -> Result<Vec<ComponentEdge>> {
    let c = t.component(x);
    let mut out = Vec::new();
    for &from in t.members(c) {
        for alt in g.alternatives(from) {
            let Some(pos) = alt
                .symbols()
                .iter()
                .position(|&s| t.same_component(s, Symbol::N(from)))
            else {
                continue;
            };
            let label: Option<Word> = alt.symbols()[..pos]
                .iter()
                .map(|s| s.as_terminal())
                .collect();
            let label = label.ok_or_else(|| shape_error(g, from, alt, NONTERMINAL_BEFORE))?;
            if label.is_empty() {
                return Err(Error::LeftRecursion(g.name(from).to_string()));
            }
            out.push(ComponentEdge {
                from,
                to: alt.symbols()[pos].as_nonterminal().unwrap(),
                label,
            });
        }
    }
    Ok(out)
}

pub(crate) const NONTERMINAL_BEFORE: &str = "a nonterminal precedes the component symbol";
pub(crate) const TWO_COMPONENT_SYMBOLS: &str = "more than one symbol from the head's component";

pub(crate) fn shape_error(g: &Grammar, n: Nt, f: &SForm, reason: &str) -> Error {
    Error::ShapeViolation {
        production: g.render_production(n, f),
        reason: reason.to_string(),
    }
}

/// The primitive word `u_X` such that every pumping prefix through `x` is a
/// power of it. Labels of the shortest cycle through `x` fix the candidate;
/// every other component step is then checked for agreement with it.
pub fn compute_u(g: &Grammar, t: &ComponentTable, x: Nt) -> Result<Word> {
    let edges = component_edges(g, t, x)?;
    let n = g.num_nonterminals();
    // BFS tree from x; path[y] is the label of the tree path x ~> y.
    let mut path: Vec<Option<Word>> = vec![None; n];
    path[x.index()] = Some(Vec::new());
    let mut queue = VecDeque::from([x]);
    let mut cycle: Option<Word> = None;
    while let Some(y) = queue.pop_front() {
        let base = path[y.index()].clone().unwrap();
        for e in edges.iter().filter(|e| e.from == y) {
            let mut label = base.clone();
            label.extend_from_slice(&e.label);
            if e.to == x {
                if cycle.is_none() {
                    cycle = Some(label);
                }
            } else if path[e.to.index()].is_none() {
                path[e.to.index()] = Some(label);
                queue.push_back(e.to);
            }
        }
        if cycle.is_some() {
            break;
        }
    }
    let cycle = cycle
        .ok_or_else(|| Error::NotAnOrdinalGrammar(format!("`{}` is not on a cycle", g.name(x))))?;
    let u = primitive_root(&cycle)?;

    // Finish the tree so every member has an offset.
    while let Some(y) = queue.pop_front() {
        let base = path[y.index()].clone().unwrap();
        for e in edges.iter().filter(|e| e.from == y) {
            if path[e.to.index()].is_none() {
                let mut label = base.clone();
                label.extend_from_slice(&e.label);
                path[e.to.index()] = Some(label);
                queue.push_back(e.to);
            }
        }
    }
    let along = |offset: usize, w: &[crate::words::Letter]| {
        w.iter()
            .enumerate()
            .all(|(i, l)| *l == u[(offset + i) % u.len()])
    };
    let inconsistent = || {
        Error::NotAnOrdinalGrammar(format!(
            "pumping prefixes through `{}` are not powers of a common primitive word",
            g.name(x)
        ))
    };
    for e in &edges {
        let (Some(pf), Some(pt)) = (&path[e.from.index()], &path[e.to.index()]) else {
            continue;
        };
        if !along(0, pf) || !along(0, pt) {
            return Err(inconsistent());
        }
        let off = pf.len() % u.len();
        if !along(off, &e.label) || (off + e.label.len()) % u.len() != pt.len() % u.len() {
            return Err(inconsistent());
        }
    }
    Ok(u)
}
