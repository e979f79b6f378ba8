//! Word graphs: the reduction digraphs of double occurrence words.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use crate::digraph::Digraph;
use crate::dow::{immediate_successors, Dow};

/// A digraph whose vertices are canonical DOWs, with an edge `[w, v]`
/// whenever `v ∈ D(w)`. Vertex `i` of `graph` is `words[i]`; labels are the
/// comma-separated word forms.
#[derive(Clone, Debug)]
pub struct WordGraph {
    pub graph: Digraph,
    pub words: Vec<Dow>,
    pub root: Option<Dow>,
}

impl WordGraph {
    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn vertex_of(&self, d: &Dow) -> Option<usize> {
        self.graph.vertex_id(&d.to_comma_string())
    }

    pub fn contains(&self, d: &Dow) -> bool {
        self.vertex_of(d).is_some()
    }
}

/// Shared memo of `D(w)`. Cloning shares the underlying map.
#[derive(Clone, Debug, Default)]
pub struct SuccessorCache {
    map: Arc<Mutex<HashMap<Dow, Arc<Vec<Dow>>>>>,
}

impl SuccessorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn successors(&self, d: &Dow) -> Arc<Vec<Dow>> {
        if let Some(hit) = self.map.lock().expect("cache lock").get(d) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(immediate_successors(d));
        let mut map = self.map.lock().expect("cache lock");
        Arc::clone(map.entry(d.clone()).or_insert(computed))
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn rooted_word_graph(d: &Dow) -> WordGraph {
    rooted_word_graph_with(&SuccessorCache::new(), d)
}

/// Breadth-first closure of `D` from `d`. Vertices appear in discovery
/// order, successors visited in lexicographic order.
pub fn rooted_word_graph_with(cache: &SuccessorCache, d: &Dow) -> WordGraph {
    let mut words = vec![d.clone()];
    let mut ids: HashMap<Dow, usize> = HashMap::from([(d.clone(), 0)]);
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let succ = cache.successors(&words[i]);
        let mut targets = Vec::with_capacity(succ.len());
        for v in succ.iter() {
            let id = *ids.entry(v.clone()).or_insert_with(|| {
                words.push(v.clone());
                queue.push_back(words.len() - 1);
                words.len() - 1
            });
            targets.push(id);
        }
        if adjacency.len() <= i {
            adjacency.resize(i + 1, Vec::new());
        }
        adjacency[i] = targets;
    }
    adjacency.resize(words.len(), Vec::new());
    WordGraph {
        graph: assemble(&words, &adjacency),
        words,
        root: Some(d.clone()),
    }
}

fn assemble(words: &[Dow], adjacency: &[Vec<usize>]) -> Digraph {
    let mut g = Digraph::new();
    for w in words {
        g.add_vertex(&w.to_comma_string())
            .expect("distinct canonical words");
    }
    for (u, targets) in adjacency.iter().enumerate() {
        for &v in targets {
            g.add_edge(u, v).expect("deletion shortens the word");
        }
    }
    g
}

/// All canonical DOWs of size at most `n`, by size then lexicographically,
/// with edges given by `D`.
pub fn global_word_graph(n: usize) -> WordGraph {
    let words: Vec<Dow> = (0..=n).flat_map(enumerate_dows).collect();
    let ids: HashMap<&Dow, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let adjacency: Vec<Vec<usize>> = words
        .iter()
        .map(|w| immediate_successors(w).iter().map(|v| ids[v]).collect())
        .collect();
    WordGraph {
        graph: assemble(&words, &adjacency),
        words,
        root: None,
    }
}

/// All canonical DOWs of size exactly `n`, in lexicographic order. Symbol
/// `k` takes the leftmost free slot and its partner any later free slot, so
/// each ascending word is produced exactly once.
pub fn enumerate_dows(n: usize) -> Vec<Dow> {
    fn place(slots: &mut Vec<u32>, next: u32, out: &mut Vec<Dow>) {
        let Some(first) = slots.iter().position(|&s| s == 0) else {
            out.push(Dow::normalize(slots).expect("perfect matching"));
            return;
        };
        slots[first] = next;
        for second in first + 1..slots.len() {
            if slots[second] == 0 {
                slots[second] = next;
                place(slots, next + 1, out);
                slots[second] = 0;
            }
        }
        slots[first] = 0;
    }
    let mut out = Vec::new();
    place(&mut vec![0; 2 * n], 1, &mut out);
    out.sort();
    out
}

/// Concatenation `u · v` with `v` shifted past the symbols of `u`, normalized.
pub fn join(u: &Dow, v: &Dow) -> Dow {
    let shift = u.size() as u32;
    let mut symbols = u.symbols().to_vec();
    symbols.extend(v.symbols().iter().map(|&s| s + shift));
    Dow::normalize(&symbols).expect("disjoint concatenation of DOWs")
}

/// True iff `(u, v) ↦ u·v` is injective on `V(G_{d1}) × V(G_{d2})`.
pub fn are_coprime(d1: &Dow, d2: &Dow) -> bool {
    let cache = SuccessorCache::new();
    let g1 = rooted_word_graph_with(&cache, d1);
    let g2 = rooted_word_graph_with(&cache, d2);
    let mut seen: HashSet<Dow> = HashSet::with_capacity(g1.words.len() * g2.words.len());
    g1.words
        .iter()
        .all(|u| g2.words.iter().all(|v| seen.insert(join(u, v))))
}
