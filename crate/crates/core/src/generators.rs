//! Constructors for the graph families used throughout the library, plus
//! reproducible random uniform graphs for property testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{LayeredGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("at least one level size is required")]
    EmptyLevelSizes,
    #[error("level size at position {0} is zero; all levels must be nonempty")]
    ZeroLevelSize(usize),
    #[error("boolean graph needs N >= 1, got {0}")]
    BooleanTooSmall(u32),
    #[error("no height-3 uniform graph with r = {r}, s = {s}: need r >= 3 and r - 3 <= s <= ((r-1)^2)/4 - 1 rounded down")]
    InfeasibleRS { r: u32, s: u32 },
    #[error("palindromic family needs r >= 9, got {0}")]
    PalindromicTooSmall(u32),
    #[error("could not read {0:?} as a comma-separated list of level sizes")]
    BadSizeList(String),
}

/// A buildable description of one graph family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Sizes listed from the top level down to level 0.
    CompleteLayered(Vec<u32>),
    Boolean(u32),
    CassidyShelton,
    CassidySheltonDeleted,
    PrescribedRS { r: u32, s: u32 },
    Palindromic { r: u32 },
    RandomUniform { seed: u64, level_sizes: Vec<u32> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<LayeredGraph, FamilyError> {
        match self {
            FamilySpec::CompleteLayered(sizes) => complete_layered(sizes),
            FamilySpec::Boolean(n) => boolean_graph(*n),
            FamilySpec::CassidyShelton => Ok(cassidy_shelton(false)),
            FamilySpec::CassidySheltonDeleted => Ok(cassidy_shelton(true)),
            FamilySpec::PrescribedRS { r, s } => prescribed_rs(*r, *s),
            FamilySpec::Palindromic { r } => palindromic_graph(*r),
            FamilySpec::RandomUniform { seed, level_sizes } => {
                random_uniform(*seed, level_sizes)
            }
        }
    }
}

fn check_sizes(sizes: &[u32]) -> Result<(), FamilyError> {
    if sizes.is_empty() {
        return Err(FamilyError::EmptyLevelSizes);
    }
    if let Some(pos) = sizes.iter().position(|&m| m == 0) {
        return Err(FamilyError::ZeroLevelSize(pos));
    }
    Ok(())
}

fn assemble(vertices: Vec<(String, u32)>, edges: Vec<(String, String)>) -> LayeredGraph {
    match LayeredGraph::new(vertices, edges) {
        Ok(g) => g,
        Err(e) => unreachable!("generator produced a malformed graph: {e}"),
    }
}

/// C[m_N, ..., m_0]: every vertex of level i is joined to every vertex of
/// level i−1. `sizes` lists m_N first. Uniform whenever m_0 = 1.
pub fn complete_layered(sizes: &[u32]) -> Result<LayeredGraph, FamilyError> {
    check_sizes(sizes)?;
    let top = sizes.len() as u32 - 1;
    let level_of = |pos: usize| top - pos as u32;
    let name = |pos: usize, j: u32| format!("v{}_{}", level_of(pos), j + 1);

    let mut vertices = Vec::new();
    for (pos, &m) in sizes.iter().enumerate() {
        for j in 0..m {
            vertices.push((name(pos, j), level_of(pos)));
        }
    }
    let mut edges = Vec::new();
    for pos in 0..sizes.len() - 1 {
        for j in 0..sizes[pos] {
            for k in 0..sizes[pos + 1] {
                edges.push((name(pos, j), name(pos + 1, k)));
            }
        }
    }
    Ok(assemble(vertices, edges))
}

fn subset_id(mask: u32) -> String {
    let elems: Vec<String> =
        (0..32).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
    format!("{{{}}}", elems.join(","))
}

/// Θ_N: the Hasse graph of the Boolean lattice on {1,...,N}. Vertices are
/// named by their sorted subsets, e.g. "{1,3}"; level = cardinality.
pub fn boolean_graph(n: u32) -> Result<LayeredGraph, FamilyError> {
    if n < 1 {
        return Err(FamilyError::BooleanTooSmall(n));
    }
    assert!(n <= 20, "boolean graph on 2^{n} vertices is not going to fit");
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for mask in 0u32..1 << n {
        vertices.push((subset_id(mask), mask.count_ones()));
        for b in 0..n {
            if mask >> b & 1 == 1 {
                edges.push((subset_id(mask), subset_id(mask & !(1 << b))));
            }
        }
    }
    Ok(assemble(vertices, edges))
}

/// The height-4 graph of Cassidy and Shelton: a over b_1..b_3 over c_1..c_3
/// over d_1..d_3 over *, with (b_i, c_j) and (c_i, d_j) edges exactly when
/// i ≠ j. The variant drops the edge (b_3, c_2); both are uniform and
/// neither is numerically Koszul.
pub fn cassidy_shelton(delete_b3_c2: bool) -> LayeredGraph {
    let mut vertices = vec![("a".to_string(), 4), ("*".to_string(), 0)];
    let mut edges = Vec::new();
    for i in 1..=3u32 {
        vertices.push((format!("b{i}"), 3));
        vertices.push((format!("c{i}"), 2));
        vertices.push((format!("d{i}"), 1));
        edges.push(("a".to_string(), format!("b{i}")));
        edges.push((format!("d{i}"), "*".to_string()));
        for j in 1..=3u32 {
            if i != j {
                edges.push((format!("b{i}"), format!("c{j}")));
                edges.push((format!("c{i}"), format!("d{j}")));
            }
        }
    }
    if delete_b3_c2 {
        edges.retain(|(t, h)| !(t == "b3" && h == "c2"));
    }
    assemble(vertices, edges)
}

/// A height-3 uniform graph with r positive vertices and s + 1 edges out of
/// level 2, so that h(B) = 1 + rτ + sτ² + (s−r+3)τ³. One top vertex a over
/// b_1..b_m over c_1..c_k over *, with m = ⌊(r−1)/2⌋ and k = r−1−m; the
/// skeleton joins b_1 to every c and every b to c_1, and further (b_i, c_j)
/// edges are appended in lexicographic order until level 2 carries s + 1.
pub fn prescribed_rs(r: u32, s: u32) -> Result<LayeredGraph, FamilyError> {
    let infeasible = FamilyError::InfeasibleRS { r, s };
    if r < 3 || s + 3 < r || 4 * (s + 1) > (r - 1) * (r - 1) {
        return Err(infeasible);
    }
    let m = (r - 1) / 2;
    let k = r - 1 - m;

    let mut vertices = vec![("a".to_string(), 3), ("*".to_string(), 0)];
    let mut edges = Vec::new();
    for i in 1..=m {
        vertices.push((format!("b{i}"), 2));
        edges.push(("a".to_string(), format!("b{i}")));
        edges.push((format!("b{i}"), "c1".to_string()));
    }
    for j in 1..=k {
        vertices.push((format!("c{j}"), 1));
        edges.push((format!("c{j}"), "*".to_string()));
        if j > 1 {
            edges.push(("b1".to_string(), format!("c{j}")));
        }
    }
    let mut middle = (m + k - 1) as usize; // skeleton size, = r - 2
    'fill: for i in 1..=m {
        for j in 1..=k {
            if middle == s as usize + 1 {
                break 'fill;
            }
            if i == 1 || j == 1 {
                continue; // already in the skeleton
            }
            edges.push((format!("b{i}"), format!("c{j}")));
            middle += 1;
        }
    }
    assert_eq!(middle, s as usize + 1, "feasibility bound must leave room for s + 1 edges");
    Ok(assemble(vertices, edges))
}

/// A height-3 uniform graph on r positive vertices whose inverse A-series is
/// the palindromic polynomial 1 − rτ + rτ² − τ³. Level 2 holds b_1, b_2 and
/// e_1..e_{r−7}; level 1 holds c_1, c_2, d_1, d_2. The top vertex sees only
/// the b's, every e covers both d's, and b_1, b_2, e_1, e_2 cover both c's.
pub fn palindromic_graph(r: u32) -> Result<LayeredGraph, FamilyError> {
    if r < 9 {
        return Err(FamilyError::PalindromicTooSmall(r));
    }
    let mut vertices = vec![("a".to_string(), 3), ("*".to_string(), 0)];
    let mut edges = Vec::new();
    for i in 1..=2u32 {
        vertices.push((format!("b{i}"), 2));
        edges.push(("a".to_string(), format!("b{i}")));
        for j in 1..=2u32 {
            edges.push((format!("b{i}"), format!("c{j}")));
        }
    }
    for j in 1..=2u32 {
        vertices.push((format!("c{j}"), 1));
        vertices.push((format!("d{j}"), 1));
        edges.push((format!("c{j}"), "*".to_string()));
        edges.push((format!("d{j}"), "*".to_string()));
    }
    for i in 1..=r - 7 {
        vertices.push((format!("e{i}"), 2));
        for j in 1..=2u32 {
            edges.push((format!("e{i}"), format!("d{j}")));
            if i <= 2 {
                edges.push((format!("e{i}"), format!("c{j}")));
            }
        }
    }
    Ok(assemble(vertices, edges))
}

/// Splits S(t) into the classes generated by "covers a common vertex".
/// Uniformity at t means a single class.
fn successor_components(g: &LayeredGraph, t: Vertex) -> Vec<Vec<Vertex>> {
    let succ = g.successor_set(t);
    let mut comp: Vec<Option<usize>> = vec![None; succ.len()];
    let mut components = Vec::new();
    for start in 0..succ.len() {
        if comp[start].is_some() {
            continue;
        }
        let label = components.len();
        let mut queue = vec![start];
        comp[start] = Some(label);
        let mut members = vec![succ[start]];
        while let Some(x) = queue.pop() {
            let below: Vec<Vertex> = g.successor_set(succ[x]);
            for y in 0..succ.len() {
                if comp[y].is_none()
                    && below.iter().any(|&u| g.covers(succ[y], u))
                {
                    comp[y] = Some(label);
                    members.push(succ[y]);
                    queue.push(y);
                }
            }
        }
        members.sort_by_key(|v| v.index());
        components.push(members);
    }
    components
}

/// A reproducible pseudorandom layered graph, post-processed into a uniform
/// one. `level_sizes` lists the top level first and every level must be
/// nonempty. Each vertex above level 1 covers a random nonempty subset of
/// the next level; level-1 vertices all cover the first level-0 vertex so
/// that the repair phase, which only ever adds edges, can always finish.
/// Equal seeds give identical graphs.
pub fn random_uniform(seed: u64, level_sizes: &[u32]) -> Result<LayeredGraph, FamilyError> {
    check_sizes(level_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = level_sizes.len() as u32 - 1;
    let level_of = |pos: usize| top - pos as u32;
    let name = |pos: usize, j: u32| format!("r{}_{}", level_of(pos), j + 1);

    let mut vertices = Vec::new();
    for (pos, &m) in level_sizes.iter().enumerate() {
        for j in 0..m {
            vertices.push((name(pos, j), level_of(pos)));
        }
    }
    let mut edges: Vec<(String, String)> = Vec::new();
    for pos in 0..level_sizes.len() - 1 {
        let below = level_sizes[pos + 1];
        for j in 0..level_sizes[pos] {
            if level_of(pos) == 1 {
                edges.push((name(pos, j), name(pos + 1, 0)));
                continue;
            }
            let mut any = false;
            for k in 0..below {
                if rng.random_bool(0.5) {
                    edges.push((name(pos, j), name(pos + 1, k)));
                    any = true;
                }
            }
            if !any {
                edges.push((name(pos, j), name(pos + 1, rng.random_range(0..below))));
            }
        }
    }

    loop {
        let g = assemble(vertices.clone(), edges.clone());
        let report = g.is_uniform();
        let Some(&tail) = report.failing_tails.first() else {
            return Ok(g);
        };
        // Stitch the first two components together: give the second one an
        // edge onto a vertex the first already covers. Tails at level 1
        // never fail (single successor), so the target level stays >= 1 and
        // the loop is capped by the complete graph, which is uniform.
        let components = successor_components(&g, tail);
        let (w1, w2) = (components[0][0], components[1][0]);
        let u = g.successor_set(w1)[0];
        edges.push((g.id(w2).to_string(), g.id(u).to_string()));
    }
}

// Convenience used by tests and the command-line interface.
pub fn parse_sizes(text: &str) -> Result<Vec<u32>, FamilyError> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<u32>().map_err(|_| FamilyError::BadSizeList(text.to_string()))
        })
        .collect()
}
