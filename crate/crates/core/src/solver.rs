//! Order types of ordinal grammars: recursive components by case analysis
//! on the escaping and component productions, sentential forms as reversed
//! products, and the nonrecursive start symbol by splitting its language at
//! suprema.

use std::cell::Cell;
use std::collections::BTreeSet;

use crate::components::{compute_components, ComponentTable};
use crate::error::{Error, Result};
use crate::grammar::{FormSet, Grammar, Nt, SForm, Symbol};
use crate::langops::{
    eventually_avoids, expand_leading, left_quot_set, quot_less, separating_prefix,
    strictly_below_period, sup,
};
use crate::normalize::{to_normal_form, Normalized};
use crate::ordinal::Ordinal;
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Loop iterations of the start-symbol splitting procedure, summed over
    /// all recursive calls.
    pub step_budget: usize,
    pub depth_cap: usize,
    /// Alternatives created while substituting during normalization.
    pub substitution_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            step_budget: 100_000,
            depth_cap: 256,
            substitution_budget: 200_000,
        }
    }
}

/// Which of the three cases produced a recursive component's order type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// `(o_α)^ω`
    Power,
    /// `o_β`
    Beta,
    /// `o_β × ω`
    BetaOmega,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSolution {
    pub o_alpha: Ordinal,
    pub o_beta: Ordinal,
    pub gamma: Ordinal,
    pub delta: Ordinal,
    pub case: Case,
    pub value: Ordinal,
    /// Whether `o_β < (o_α)^ω` and `δ < γ×ω` agree.
    pub routes_agree: bool,
}

#[derive(Debug, Clone, Default)]
pub struct OrderTypeTable {
    nt: Vec<Option<Ordinal>>,
    components: Vec<Option<ComponentSolution>>,
}

impl OrderTypeTable {
    pub fn new(num_nonterminals: usize, num_components: usize) -> Self {
        OrderTypeTable {
            nt: vec![None; num_nonterminals],
            components: vec![None; num_components],
        }
    }

    pub fn get(&self, s: Symbol) -> Option<Ordinal> {
        match s {
            Symbol::T(_) => Some(Ordinal::one()),
            Symbol::N(n) => self.nt.get(n.index()).cloned().flatten(),
        }
    }

    pub fn set(&mut self, n: Nt, o: Ordinal) {
        self.nt[n.index()] = Some(o);
    }

    pub fn component(&self, c: usize) -> Option<&ComponentSolution> {
        self.components.get(c).and_then(Option::as_ref)
    }
}

/// `o(X_n) × … × o(X_1)`; the empty form has type 1.
pub fn order_type_of_form(types: &OrderTypeTable, form: &SForm) -> Result<Ordinal> {
    let mut acc = Ordinal::one();
    for &s in form.symbols().iter().rev() {
        let o = types
            .get(s)
            .ok_or_else(|| Error::NotAnOrdinalGrammar("symbol used before it was solved".into()))?;
        acc = acc.mul(&o)?;
    }
    Ok(acc)
}

/// Order type shared by all members of the recursive component `c`.
pub fn solve_recursive_component(
    g: &Grammar,
    t: &ComponentTable,
    types: &OrderTypeTable,
    c: usize,
) -> Result<ComponentSolution> {
    let mut o_alpha: Option<Ordinal> = None;
    // escaping bodies with their head
    let mut escaping: Vec<(Nt, &SForm, Ordinal)> = Vec::new();
    for &x in t.members(c) {
        for body in g.alternatives(x) {
            let pos = body
                .symbols()
                .iter()
                .position(|s| matches!(s, Symbol::N(m) if t.component(*m) == c));
            match pos {
                Some(i) => {
                    let tail = SForm(body.symbols()[i + 1..].to_vec());
                    let o = order_type_of_form(types, &tail)?;
                    o_alpha = Some(o_alpha.map_or(o.clone(), |a| a.max(o)));
                }
                None => {
                    let o = order_type_of_form(types, body)?;
                    escaping.push((x, body, o));
                }
            }
        }
    }
    let o_alpha = o_alpha.unwrap_or_else(Ordinal::one);
    let o_beta = escaping
        .iter()
        .map(|(_, _, o)| o.clone())
        .max()
        .ok_or_else(|| Error::Unproductive(g.name(t.members(c)[0]).to_string()))?;
    let gamma = o_alpha.degree()?;
    let delta = o_beta.degree()?;

    let power = o_alpha.pow_omega()?;
    let statement_case1 = o_beta < power;
    let proof_case1 = delta < gamma.mul(&Ordinal::omega())?;

    let (case, value) = if statement_case1 {
        (Case::Power, power)
    } else if o_beta.is_omega_power()
        && escaping
            .iter()
            .filter(|(_, _, o)| o.degree().ok().as_ref() == Some(&delta))
            .all(|(x, body, _)| {
                let u = t.u(*x).expect("recursive nonterminal has u");
                !eventually_avoids(g, &[], u, body)
            })
    {
        (Case::Beta, o_beta.clone())
    } else {
        (Case::BetaOmega, o_beta.mul(&Ordinal::omega())?)
    };
    Ok(ComponentSolution {
        o_alpha,
        o_beta,
        gamma,
        delta,
        case,
        value,
        routes_agree: statement_case1 == proof_case1,
    })
}

/// Splits `L(forms)` at suprema until the top part is an ω-power block.
pub struct SplitSolver<'a> {
    g: &'a Grammar,
    t: &'a ComponentTable,
    types: &'a OrderTypeTable,
    limits: Limits,
    steps: Cell<usize>,
}

impl<'a> SplitSolver<'a> {
    pub fn new(
        g: &'a Grammar,
        t: &'a ComponentTable,
        types: &'a OrderTypeTable,
        limits: Limits,
    ) -> Self {
        SplitSolver {
            g,
            t,
            types,
            limits,
            steps: Cell::new(0),
        }
    }

    pub fn solve(&self, forms: &FormSet) -> Result<Ordinal> {
        self.run(forms, 0)
    }

    fn tick(&self) -> Result<()> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.limits.step_budget {
            return Err(Error::BudgetExceeded {
                what: "step",
                limit: self.limits.step_budget,
            });
        }
        Ok(())
    }

    fn prefix_cap(&self, w: &crate::words::UpWord) -> usize {
        10 * (w.prefix().len() + w.period().len() + self.g.size())
    }

    fn run(&self, forms: &FormSet, depth: usize) -> Result<Ordinal> {
        if forms.is_empty() {
            return Ok(Ordinal::zero());
        }
        if depth > self.limits.depth_cap {
            return Err(Error::BudgetExceeded {
                what: "depth",
                limit: self.limits.depth_cap,
            });
        }
        let mut left = FormSet::new();
        let mut u: Word = Vec::new();
        let mut right: FormSet = forms
            .iter()
            .flat_map(|f| expand_leading(self.g, f))
            .collect();
        loop {
            self.tick()?;
            if right.is_empty() {
                return self.run(&left, depth + 1);
            }
            if right.len() > 1 && right.contains(&SForm::empty()) {
                return Err(Error::NotAnOrdinalGrammar(format!(
                    "language is not prefix-free: `{}` is a proper prefix of another word",
                    self.g.alphabet().render(&u)
                )));
            }
            let sups = right
                .iter()
                .map(|f| Ok((f, sup(self.g, self.t, f)?.value)))
                .collect::<Result<Vec<_>>>()?;
            let w = sups.iter().map(|(_, s)| s).max().expect("nonempty").clone();
            let (right2, right1): (Vec<_>, Vec<_>) = sups.into_iter().partition(|(_, s)| *s == w);
            let right1: FormSet = right1.into_iter().map(|(f, _)| f.clone()).collect();
            let right2: Vec<&SForm> = right2.into_iter().map(|(f, _)| f).collect();
            let o = right2
                .iter()
                .map(|f| order_type_of_form(self.types, f))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .expect("nonempty");
            if o.is_omega_power() {
                let gamma = o.degree()?;
                let cut = separating_prefix(self.g, &right1, &w, self.prefix_cap(&w)).ok_or(
                    Error::BudgetExceeded {
                        what: "prefix search",
                        limit: self.prefix_cap(&w),
                    },
                )?;
                let mut lower = right1;
                for f in right2 {
                    lower.extend(quot_less(self.g, f, &cut));
                }
                let below = self.run(&left, depth + 1)?;
                let middle = self.run(&lower, depth + 1)?;
                return below.add(&middle)?.add(&Ordinal::omega_pow(gamma));
            }
            let a = right
                .iter()
                .filter_map(|f| f.first().and_then(Symbol::as_terminal))
                .max()
                .expect("some form has a leading letter");
            let (heads, rest): (Vec<&SForm>, Vec<&SForm>) =
                right.iter().partition(|f| f.first() == Some(Symbol::T(a)));
            left.extend(rest.into_iter().map(|f| f.prepend(&u)));
            right = left_quot_set(self.g, heads, &[a]);
            u.push(a);
        }
    }
}

/// Order type of `L(forms)` for forms over solved symbols.
pub fn algorithm_a(
    g: &Grammar,
    t: &ComponentTable,
    types: &OrderTypeTable,
    forms: &FormSet,
    limits: Limits,
) -> Result<Ordinal> {
    SplitSolver::new(g, t, types, limits).solve(forms)
}

/// Everything computed on the way to `o(G)`.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub normalized: Normalized,
    /// Present when the language is infinite.
    pub solved: Option<SolvedGrammar>,
    pub order_type: Ordinal,
}

#[derive(Debug, Clone)]
pub struct SolvedGrammar {
    pub grammar: Grammar,
    pub components: ComponentTable,
    pub types: OrderTypeTable,
}

fn check_prefix_free(words: &BTreeSet<Word>, g: &Grammar) -> Result<()> {
    // in sorted order a word's extensions follow it directly
    let list: Vec<&Word> = words.iter().collect();
    for pair in list.windows(2) {
        if pair[1].starts_with(pair[0]) {
            return Err(Error::NotAnOrdinalGrammar(format!(
                "language is not prefix-free: `{}` is a proper prefix of `{}`",
                g.alphabet().render(pair[0]),
                g.alphabet().render(pair[1])
            )));
        }
    }
    Ok(())
}

/// Order types of every nonterminal of a normal-form grammar.
pub fn solve_normal_form(g: &Grammar, limits: Limits) -> Result<SolvedGrammar> {
    let t = compute_components(g)?;
    for x in g.nonterminals() {
        if let Some(u) = t.u(x) {
            if !strictly_below_period(g, &SForm(vec![Symbol::N(x)]), u) {
                return Err(Error::NotAnOrdinalGrammar(format!(
                    "some word of `{}` is not strictly below ({})^w",
                    g.name(x),
                    g.alphabet().render(u)
                )));
            }
        }
    }
    let mut types = OrderTypeTable::new(g.num_nonterminals(), t.num_components());
    for c in t.bottom_up() {
        if t.component_is_recursive(c) {
            let sol = solve_recursive_component(g, &t, &types, c)?;
            for &x in t.members(c) {
                types.set(x, sol.value.clone());
            }
            types.components[c] = Some(sol);
        } else {
            for &x in t.members(c) {
                let forms: FormSet = g.alternatives(x).iter().cloned().collect();
                let o = algorithm_a(g, &t, &types, &forms, limits)?;
                types.set(x, o);
            }
        }
    }
    Ok(SolvedGrammar {
        grammar: g.clone(),
        components: t,
        types,
    })
}

pub fn analyze(g: &Grammar, limits: Limits) -> Result<Analysis> {
    let normalized = to_normal_form(g, limits.substitution_budget)?;
    let (solved, order_type) = match &normalized {
        Normalized::Grammar(ng) => {
            let solved = solve_normal_form(ng, limits)?;
            let o = solved
                .types
                .get(Symbol::N(ng.start()))
                .expect("start symbol solved");
            (Some(solved), o)
        }
        Normalized::Finite(words) => {
            check_prefix_free(words, g)?;
            (None, normalized.early_order_type().expect("finite"))
        }
        Normalized::Empty => (None, Ordinal::zero()),
    };
    if !order_type.below_omega_omega_omega() {
        return Err(Error::BoundViolation(order_type.to_text()));
    }
    Ok(Analysis {
        normalized,
        solved,
        order_type,
    })
}

pub fn order_type_with(g: &Grammar, limits: Limits) -> Result<Ordinal> {
    Ok(analyze(g, limits)?.order_type)
}

/// `o(L(G))` in Cantor normal form.
pub fn order_type_of_grammar(g: &Grammar) -> Result<Ordinal> {
    order_type_with(g, Limits::default())
}

pub fn isomorphic(g1: &Grammar, g2: &Grammar) -> Result<bool> {
    Ok(order_type_of_grammar(g1)? == order_type_of_grammar(g2)?)
}
