use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::LexiconError;

/// A declared inclusion `sub ⊆ super`, witnessed by the morphism constant
/// `morphism : sub → super`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inclusion {
    pub sub: String,
    pub sup: String,
    pub morphism: String,
}

/// Entity sorts and the acyclic inclusion graph between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    sorts: BTreeSet<String>,
    /// Outgoing inclusions per sort, sorted by morphism name.
    edges: BTreeMap<String, Vec<Inclusion>>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: impl Into<String>) {
        self.sorts.insert(name.into());
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(String::as_str)
    }

    fn require(&self, sort: &str) -> Result<(), LexiconError> {
        if self.sorts.contains(sort) {
            Ok(())
        } else {
            Err(LexiconError::UnknownSort(sort.to_string()))
        }
    }

    /// Adds an inclusion, refusing any edge that would close a cycle.
    pub fn add_inclusion(&mut self, inc: Inclusion) -> Result<(), LexiconError> {
        self.require(&inc.sub)?;
        self.require(&inc.sup)?;
        if inc.sub == inc.sup || self.reachable(&inc.sup, usize::MAX).contains(&inc.sub) {
            return Err(LexiconError::Cycle { sub: inc.sub, sup: inc.sup });
        }
        let out = self.edges.entry(inc.sub.clone()).or_default();
        out.push(inc);
        out.sort_by(|a, b| (&a.morphism, &a.sup).cmp(&(&b.morphism, &b.sup)));
        Ok(())
    }

    pub fn inclusions(&self) -> impl Iterator<Item = &Inclusion> {
        self.edges.values().flatten()
    }

    pub fn is_inclusion_morphism(&self, name: &str) -> bool {
        self.inclusions().any(|i| i.morphism == name)
    }

    fn out(&self, sort: &str) -> &[Inclusion] {
        self.edges.get(sort).map_or(&[], Vec::as_slice)
    }

    /// Sorts reachable from `from` by a nonempty chain of at most
    /// `max_depth` inclusions.
    pub fn reachable(&self, from: &str, max_depth: usize) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut frontier = vec![from.to_string()];
        let mut depth = 0;
        while !frontier.is_empty() && depth < max_depth {
            let mut next = Vec::new();
            for s in &frontier {
                for inc in self.out(s) {
                    if seen.insert(inc.sup.clone()) {
                        next.push(inc.sup.clone());
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        seen
    }

    /// The shortest chain of inclusion morphisms from `from` to `to` of
    /// length at most `max_depth`; ties go to the lexicographically smallest
    /// sequence of morphism names. `Some(vec![])` when `from == to`.
    pub fn inclusion_chain(&self, from: &str, to: &str, max_depth: usize) -> Result<Option<Vec<String>>, LexiconError> {
        self.require(from)?;
        self.require(to)?;
        // Breadth-first with sorted edges keeps each level in lexicographic
        // order, so the first path reaching `to` is the one we want.
        let mut queue = VecDeque::from([(from.to_string(), Vec::<String>::new())]);
        let mut visited = BTreeSet::from([from.to_string()]);
        while let Some((sort, path)) = queue.pop_front() {
            if sort == to {
                return Ok(Some(path));
            }
            if path.len() == max_depth {
                continue;
            }
            for inc in self.out(&sort) {
                if visited.insert(inc.sup.clone()) {
                    let mut p = path.clone();
                    p.push(inc.morphism.clone());
                    queue.push_back((inc.sup.clone(), p));
                }
            }
        }
        Ok(None)
    }

    /// Every chain from `from` to `to` of length at most `max_depth`,
    /// ordered by length and then by morphism names.
    pub fn inclusion_paths(&self, from: &str, to: &str, max_depth: usize) -> Result<Vec<Vec<String>>, LexiconError> {
        self.require(from)?;
        self.require(to)?;
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.paths_from(from, to, max_depth, &mut path, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn paths_from(&self, at: &str, to: &str, budget: usize, path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if at == to {
            out.push(path.clone());
            // The graph is acyclic, so no longer path can return here.
            return;
        }
        if budget == 0 {
            return;
        }
        for inc in self.out(at) {
            path.push(inc.morphism.clone());
            self.paths_from(&inc.sup, to, budget - 1, path, out);
            path.pop();
        }
    }

    /// Sort reached from `from` by following `chain`, if the chain is valid.
    pub fn follow(&self, from: &str, chain: &[String]) -> Option<String> {
        let mut cur = from.to_string();
        for m in chain {
            cur = self.out(&cur).iter().find(|i| &i.morphism == m)?.sup.clone();
        }
        Some(cur)
    }
}
