//! Determinantal ideals `I_t` generated by the `t`-minors of a generic
//! `m x n` matrix: permutations between row and column index sets, the
//! specialized p-form formula, the relation graph and the sign-alternating
//! breadth-first relation construction.
//!
//! Row and column indices are 0-based internally and 1-based in every
//! rendering. Minors are ordered by `(I, J)` with both index sets compared
//! lexicographically, and this order fixes the generator index `i` of the
//! y-variables `y_{(I,J),γ}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Rational};
use crate::pforms::{PForm, YVar};
use crate::poly::{monomial_basis, Exponent, GeneratorSystem, Polynomial, Shape};

/// Backtracking steps allowed in [`DeterminantalIdeal::bfs_relation`].
pub const DEFAULT_RELATION_STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("invalid parameters: need 1 <= t <= min(m, n), got m={m}, n={n}, t={t}")]
    InvalidParameters { m: usize, n: usize, t: usize },
    #[error("exponent {0} does not have the expected shape or degree")]
    BadExponent(String),
    #[error("p-form of {0} is zero")]
    ZeroForm(String),
    #[error("the start exponent {0} is listed as forbidden")]
    StartForbidden(String),
    #[error("{found} forbidden exponents exceed the limit {limit}")]
    TooManyForbidden { found: usize, limit: usize },
    #[error("no partner with opposite sign is available for {var} in p_{alpha}")]
    NoValidPartner { alpha: String, var: String },
    #[error("relation search exceeded {0} steps")]
    StepLimit(usize),
    #[error("invariant violation: constructed relation does not sum to zero")]
    VerificationFailed,
}

/// A bijection `σ: I → J` between a row set and a column set of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    rows: Vec<usize>,
    cols: Vec<usize>,
    images: Vec<usize>,
}

impl Permutation {
    /// `images[k]` is the column assigned to `rows[k]`. Both index sets must
    /// be sorted and `images` must be a rearrangement of `cols`.
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, images: Vec<usize>) -> Option<Self> {
        let sorted = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.len() != cols.len() || images.len() != cols.len() || !sorted(&rows) || !sorted(&cols) {
            return None;
        }
        let mut check = images.clone();
        check.sort_unstable();
        (check == cols).then_some(Permutation { rows, cols, images })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// One-line word `(σ(i_1), ..., σ(i_t))`.
    pub fn word(&self) -> &[usize] {
        &self.images
    }

    /// Sign of `ψ ∘ σ ∘ φ` where `φ: [t] → I`, `ψ: J → [t]` are the order
    /// preserving bijections.
    pub fn sign(&self) -> i64 {
        let positions: Vec<usize> =
            self.images.iter().map(|c| self.cols.binary_search(c).expect("image in J")).collect();
        let inversions = positions.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        if inversions % 2 == 0 { 1 } else { -1 }
    }

    /// Exponent of the permutation matrix `E_σ` in an `m x n` grid.
    pub fn matrix(&self, m: usize, n: usize) -> Exponent {
        let mut entries = vec![0u32; m * n];
        for (r, c) in self.rows.iter().zip(&self.images) {
            entries[r * n + c] = 1;
        }
        Exponent::new(entries).expect("0/1 matrix")
    }
}

/// All bijections `I → J`, ordered lexicographically by one-line word.
pub fn permutations(rows: &[usize], cols: &[usize]) -> Vec<Permutation> {
    cols.iter()
        .copied()
        .permutations(cols.len())
        .map(|images| Permutation { rows: rows.to_vec(), cols: cols.to_vec(), images })
        .collect()
}

/// `⌊t!/2⌋ + 1`.
pub fn theorem_bound(t: usize) -> u128 {
    let factorial: u128 = (1..=t as u128).product();
    factorial / 2 + 1
}

#[derive(Clone, Debug)]
struct Block {
    perms: Vec<Permutation>,
    signs: Vec<i64>,
    matrices: Vec<Exponent>,
}

/// The ideal of `t`-minors of a generic `m x n` matrix.
#[derive(Clone, Debug)]
pub struct DeterminantalIdeal {
    m: usize,
    n: usize,
    t: usize,
    blocks: Vec<Block>,
}

impl DeterminantalIdeal {
    pub fn new(m: usize, n: usize, t: usize) -> Result<Self, DetError> {
        if t == 0 || t > m.min(n) {
            return Err(DetError::InvalidParameters { m, n, t });
        }
        let mut blocks = Vec::new();
        for rows in (0..m).combinations(t) {
            for cols in (0..n).combinations(t) {
                let perms = permutations(&rows, &cols);
                let signs = perms.iter().map(Permutation::sign).collect();
                let matrices = perms.iter().map(|p| p.matrix(m, n)).collect();
                blocks.push(Block { perms, signs, matrices });
            }
        }
        Ok(DeterminantalIdeal { m, n, t, blocks })
    }

    pub fn shape(&self) -> Shape {
        Shape::Grid(self.m, self.n)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_minors(&self) -> usize {
        self.blocks.len()
    }

    /// `(I, J)` of generator `gen`, 0-based.
    pub fn minor_index_sets(&self, gen: usize) -> (&[usize], &[usize]) {
        let p = &self.blocks[gen].perms[0];
        (p.rows(), p.cols())
    }

    /// The minors `f_(I,J) = Σ_σ sgn(σ) x^{E_σ}` as a generator system.
    pub fn minors<F: Field>(&self) -> GeneratorSystem<F> {
        let shape = self.shape();
        let gens = self
            .blocks
            .iter()
            .map(|b| {
                Polynomial::from_terms(
                    shape,
                    b.matrices.iter().cloned().zip(b.signs.iter().map(|&s| F::from_i64(s))),
                )
            })
            .collect();
        GeneratorSystem::new(shape, gens).expect("minors are homogeneous and nonzero")
    }

    fn check_exponent(&self, d: u32, alpha: &Exponent) -> Result<(), DetError> {
        if alpha.num_vars() != self.m * self.n || alpha.degree() != self.t as u32 + d {
            return Err(DetError::BadExponent(self.shape().format_exponent(alpha)));
        }
        Ok(())
    }

    /// Terms of `p_α` as `(generator, permutation index)` pairs with `E_σ ≤ α`.
    fn terms_of(&self, alpha: &Exponent) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (gen, block) in self.blocks.iter().enumerate() {
            for (k, e) in block.matrices.iter().enumerate() {
                if e.divides(alpha) {
                    out.push((gen, k));
                }
            }
        }
        out
    }

    /// `p_α = Σ_{σ ∈ S_{I,J}, E_σ ≤ α} sgn(σ) y_{(I,J), α - E_σ}`, computed by
    /// enumerating permutation matrices under `α`.
    pub fn pform<F: Field>(&self, d: u32, alpha: &Exponent) -> Result<PForm<F>, DetError> {
        self.check_exponent(d, alpha)?;
        let mut form = PForm::zero(alpha.clone());
        for (gen, k) in self.terms_of(alpha) {
            let block = &self.blocks[gen];
            let gamma = alpha.checked_sub(&block.matrices[k]).expect("E_σ ≤ α");
            form.add_term(YVar { gen, gamma }, F::from_i64(block.signs[k]));
        }
        Ok(form)
    }

    /// Graph on the nonzero p-forms of degree `t + d`, with an edge whenever
    /// two forms share a y-variable.
    pub fn relation_graph(&self, d: u32) -> RelationGraph {
        let mut vertices = Vec::new();
        let mut by_var: BTreeMap<(usize, Exponent), Vec<usize>> = BTreeMap::new();
        for alpha in monomial_basis(self.shape(), self.t as u32 + d) {
            let terms = self.terms_of(&alpha);
            if terms.is_empty() {
                continue;
            }
            let v = vertices.len();
            for (gen, k) in terms {
                let gamma = alpha.checked_sub(&self.blocks[gen].matrices[k]).expect("E_σ ≤ α");
                by_var.entry((gen, gamma)).or_default().push(v);
            }
            vertices.push(alpha);
        }
        let mut edges = BTreeSet::new();
        for members in by_var.values() {
            for (&a, &b) in members.iter().tuple_combinations() {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        RelationGraph { shape: self.shape(), vertices, edges: edges.into_iter().collect() }
    }

    /// Builds a set `V ∋ β` of exponents, avoiding `forbidden`, whose p-forms
    /// sum to zero, so that `p_β = -Σ_{α ∈ V \ {β}} p_α`.
    ///
    /// The construction runs level by level. For every y-variable of a form in
    /// the current level, with `α = γ + E_σ`:
    /// 1. if the pair `(α, σ)` already has a partner, nothing happens;
    /// 2. if some `(γ + E_τ, τ)` in the set chose `σ` as its partner, then `τ`
    ///    becomes the partner of `(α, σ)`;
    /// 3. otherwise the lexicographically smallest `τ` of opposite sign whose
    ///    form `γ + E_τ` is allowed and not yet paired on this variable is
    ///    chosen, and `γ + E_τ` joins the next level.
    ///
    /// When a choice in step 3 leads to a dead end, the next candidate is
    /// tried. The result is verified to sum to the zero form before returning.
    pub fn bfs_relation(
        &self,
        d: u32,
        beta: &Exponent,
        forbidden: &BTreeSet<Exponent>,
    ) -> Result<Relation, DetError> {
        self.bfs_relation_with_limit(d, beta, forbidden, DEFAULT_RELATION_STEP_LIMIT)
    }

    pub fn bfs_relation_with_limit(
        &self,
        d: u32,
        beta: &Exponent,
        forbidden: &BTreeSet<Exponent>,
        step_limit: usize,
    ) -> Result<Relation, DetError> {
        let shape = self.shape();
        self.check_exponent(d, beta)?;
        for f in forbidden {
            self.check_exponent(d, f)?;
        }
        if self.terms_of(beta).is_empty() {
            return Err(DetError::ZeroForm(shape.format_exponent(beta)));
        }
        if forbidden.contains(beta) {
            return Err(DetError::StartForbidden(shape.format_exponent(beta)));
        }
        let limit = (theorem_bound(self.t) - 1) as usize;
        if forbidden.len() > limit {
            return Err(DetError::TooManyForbidden { found: forbidden.len(), limit });
        }

        let basis = monomial_basis(shape, self.t as u32 + d);
        let index: HashMap<Exponent, usize> = basis.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        let beta_idx = index[beta];
        let blocked: HashSet<usize> = forbidden.iter().map(|f| index[f]).chain([beta_idx]).collect();

        let search = RelationSearch { ideal: self, basis: &basis, index: &index, blocked: &blocked, step_limit };
        let start = SearchState {
            members: BTreeSet::from([beta_idx]),
            levels: vec![vec![beta_idx]],
            cursor: (0, 0),
            next: BTreeSet::new(),
            partners: HashMap::new(),
        };
        let mut steps = 0;
        let mut dead_end = None;
        let done = search.run(start, &mut steps, &mut dead_end)?.ok_or_else(|| {
            let (alpha, gen, k) = dead_end.expect("a failed search records its dead end");
            let gamma = basis[alpha].checked_sub(&self.blocks[gen].matrices[k]).expect("E_σ ≤ α");
            DetError::NoValidPartner {
                alpha: shape.format_exponent(&basis[alpha]),
                var: self.format_var(gen, &gamma),
            }
        })?;

        let members: Vec<Exponent> = done.members.iter().map(|&k| basis[k].clone()).collect();
        let mut sum: PForm<Rational> = PForm::zero(beta.clone());
        for alpha in &members {
            for (y, c) in self.pform::<Rational>(d, alpha)?.terms {
                sum.add_term(y, c);
            }
        }
        if !sum.is_zero() {
            return Err(DetError::VerificationFailed);
        }
        let levels = done
            .levels
            .iter()
            .filter(|l| !l.is_empty())
            .map(|l| l.iter().map(|&k| basis[k].clone()).collect())
            .collect();
        Ok(Relation { shape, beta: beta.clone(), members, levels })
    }

    /// `y[(I|J)]γ` with 1-based index sets.
    pub fn format_var(&self, gen: usize, gamma: &Exponent) -> String {
        let (rows, cols) = self.minor_index_sets(gen);
        let fmt = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        format!("y[({{{}}},{{{}}})]{}", fmt(rows), fmt(cols), self.shape().format_exponent(gamma))
    }
}

#[derive(Clone)]
struct SearchState {
    members: BTreeSet<usize>,
    levels: Vec<Vec<usize>>,
    /// (position in the current level, term index of that form)
    cursor: (usize, usize),
    next: BTreeSet<usize>,
    /// y-variable → permutation index → partner permutation index
    partners: HashMap<(usize, Exponent), HashMap<usize, usize>>,
}

struct RelationSearch<'a> {
    ideal: &'a DeterminantalIdeal,
    basis: &'a [Exponent],
    index: &'a HashMap<Exponent, usize>,
    blocked: &'a HashSet<usize>,
    step_limit: usize,
}

impl RelationSearch<'_> {
    fn run(
        &self,
        mut state: SearchState,
        steps: &mut usize,
        dead_end: &mut Option<(usize, usize, usize)>,
    ) -> Result<Option<SearchState>, DetError> {
        loop {
            let level = state.levels.len() - 1;
            let (pos, term) = state.cursor;
            if pos == state.levels[level].len() {
                if state.next.is_empty() {
                    return Ok(Some(state));
                }
                let next: Vec<usize> = std::mem::take(&mut state.next).into_iter().collect();
                state.levels.push(next);
                state.cursor = (0, 0);
                continue;
            }
            let alpha_idx = state.levels[level][pos];
            let alpha = &self.basis[alpha_idx];
            let terms = self.ideal.terms_of(alpha);
            if term == terms.len() {
                state.cursor = (pos + 1, 0);
                continue;
            }
            let (gen, sigma) = terms[term];
            let block = &self.ideal.blocks[gen];
            let gamma = alpha.checked_sub(&block.matrices[sigma]).expect("E_σ ≤ α");
            let var = (gen, gamma);
            // Rules 1 and 2: the pair was already matched, either by this form
            // or reciprocally by the form that chose it.
            if state.partners.get(&var).is_some_and(|p| p.contains_key(&sigma)) {
                state.cursor = (pos, term + 1);
                continue;
            }
            // Rule 3.
            let taken = state.partners.get(&var);
            let candidates: Vec<(usize, usize)> = (0..block.perms.len())
                .filter(|&tau| block.signs[tau] == -block.signs[sigma])
                .filter(|&tau| taken.is_none_or(|p| !p.contains_key(&tau)))
                .filter_map(|tau| {
                    let target = var.1.checked_add(&block.matrices[tau]).expect("degree within limits");
                    let target_idx = self.index[&target];
                    (!self.blocked.contains(&target_idx)).then_some((tau, target_idx))
                })
                .collect();
            if candidates.is_empty() {
                dead_end.get_or_insert((alpha_idx, gen, sigma));
                return Ok(None);
            }
            let last = candidates.len() - 1;
            for (k, (tau, target_idx)) in candidates.into_iter().enumerate() {
                *steps += 1;
                if *steps > self.step_limit {
                    return Err(DetError::StepLimit(self.step_limit));
                }
                let mut branch = if k == last { std::mem::replace(&mut state, empty_state()) } else { state.clone() };
                let pairs = branch.partners.entry(var.clone()).or_default();
                pairs.insert(sigma, tau);
                pairs.insert(tau, sigma);
                if branch.members.insert(target_idx) {
                    branch.next.insert(target_idx);
                }
                branch.cursor = (pos, term + 1);
                if let Some(done) = self.run(branch, steps, dead_end)? {
                    return Ok(Some(done));
                }
            }
            return Ok(None);
        }
    }
}

fn empty_state() -> SearchState {
    SearchState {
        members: BTreeSet::new(),
        levels: Vec::new(),
        cursor: (0, 0),
        next: BTreeSet::new(),
        partners: HashMap::new(),
    }
}

/// Output of [`DeterminantalIdeal::bfs_relation`]: `Σ_{α ∈ members} p_α = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub shape: Shape,
    pub beta: Exponent,
    /// All of `V`, including `β`, in basis order.
    pub members: Vec<Exponent>,
    /// The breadth-first levels `V_0 = {β}, V_1 \ V_0, ...`.
    pub levels: Vec<Vec<Exponent>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationJson {
    pub beta: String,
    pub members: Vec<String>,
    pub levels: Vec<Vec<String>>,
    /// `p_β = Σ coeff · p_α` over `V \ {β}`.
    pub relation: Vec<RelationTermJson>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationTermJson {
    pub alpha: String,
    pub coeff: String,
}

impl Relation {
    pub fn to_json(&self) -> RelationJson {
        let fmt = |e: &Exponent| self.shape.format_exponent(e);
        RelationJson {
            beta: fmt(&self.beta),
            members: self.members.iter().map(fmt).collect(),
            levels: self.levels.iter().map(|l| l.iter().map(fmt).collect()).collect(),
            relation: self
                .members
                .iter()
                .filter(|a| **a != self.beta)
                .map(|a| RelationTermJson { alpha: fmt(a), coeff: "-1/1".to_string() })
                .collect(),
        }
    }
}

/// Vertices are the exponents with nonzero p-form, in basis order; edges are
/// index pairs `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationGraph {
    pub shape: Shape,
    pub vertices: Vec<Exponent>,
    pub edges: Vec<(usize, usize)>,
}

impl RelationGraph {
    pub fn vertex_index(&self, alpha: &Exponent) -> Option<usize> {
        self.vertices.iter().position(|v| v == alpha)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Connected components by breadth-first search, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut component = Vec::new();
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            out.push(component);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph relations {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{k} [label=\"{}\"];", self.shape.format_exponent(v));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }
}
