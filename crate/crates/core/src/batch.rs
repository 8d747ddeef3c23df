//! Data-parallel evaluation of independent jobs.
//!
//! With the `parallel` feature (on by default) work is spread over the
//! rayon pool; without it every call runs sequentially. Output order always
//! matches input order.

use crate::compose::{readings, ComposeConfig, ComposeError, Reading, SyntaxTree};
use crate::kernel::{normalize, Normalized, ReduceError, Term};
use crate::lexicon::Grammar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Maps `f` over `items`, in parallel when requested and available.
pub fn map<T, R, F>(execution: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn normalize_all(terms: &[Term], fuel: usize, execution: Execution) -> Vec<Result<Normalized, ReduceError>> {
    map(execution, terms, |t| normalize(t, fuel))
}

pub fn readings_all(
    trees: &[SyntaxTree],
    grammar: &Grammar,
    config: &ComposeConfig,
) -> Vec<Result<Vec<Reading>, ComposeError>> {
    // Candidates inside each tree stay sequential; the trees are the unit
    // of parallel work.
    let inner = ComposeConfig { execution: Execution::Sequential, ..*config };
    map(config.execution, trees, |t| readings(t, grammar, &inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;

    #[test]
    fn both_modes_agree() {
        let g = demo::grammar();
        let trees: Vec<SyntaxTree> = demo::TREES.iter().map(|(_, t)| SyntaxTree::parse(t).unwrap()).collect();
        let run = |execution| readings_all(&trees, &g, &ComposeConfig { execution, ..Default::default() });
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));

        let terms: Vec<Term> = run(Execution::Sequential).into_iter().flatten().flatten().map(|r| r.composed).collect();
        assert_eq!(
            normalize_all(&terms, 1000, Execution::Sequential),
            normalize_all(&terms, 1000, Execution::Parallel)
        );
    }
}
