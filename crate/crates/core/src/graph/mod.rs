//! Tanner-graph construction and measurement.
//!
//! Regular bipartite graphs built by greedy girth-maximizing edge placement
//! (progressive edge growth), exact girth measurement, collinear VLSI
//! layouts with exact wire-area accounting, crossing-number and wiring-area
//! bounds, and a Monte-Carlo BSC decoding oracle on concrete graphs.

pub mod bounds;
pub mod layout;
pub mod mc;

use crate::codes::blocklength_bounds_from_girth;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

/// A bipartite variable/check graph. Checks store ordered variable lists;
/// the variable-side adjacency is derived. Graphs built or loaded through
/// the regular constructors additionally carry their declared degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    check_adj: Vec<Vec<usize>>,
    var_adj: Vec<Vec<usize>>,
    declared: Option<(u32, u32)>,
}

impl TannerGraph {
    /// General bipartite constructor: validates index ranges and rejects
    /// parallel edges.
    pub fn new(n_vars: usize, check_adj: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_adj = vec![Vec::new(); n_vars];
        for (c, vars) in check_adj.iter().enumerate() {
            let mut seen = vars.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("parallel edge at check {c}")));
            }
            for &v in vars {
                if v >= n_vars {
                    return Err(Error::domain(format!(
                        "check {c} references variable {v} out of range"
                    )));
                }
                var_adj[v].push(c);
            }
        }
        Ok(TannerGraph {
            n_vars,
            check_adj,
            var_adj,
            declared: None,
        })
    }

    /// Constructor for (d_v, d_c)-regular graphs; degree regularity and the
    /// node-count relation are enforced.
    pub fn regular(n_vars: usize, check_adj: Vec<Vec<usize>>, d_v: u32, d_c: u32) -> Result<Self> {
        let mut g = Self::new(n_vars, check_adj)?;
        if g.n_checks() * d_c as usize != n_vars * d_v as usize {
            return Err(Error::domain(format!(
                "{} checks of degree {d_c} cannot cover {n_vars} variables of degree {d_v}",
                g.n_checks()
            )));
        }
        for (c, vars) in g.check_adj.iter().enumerate() {
            if vars.len() != d_c as usize {
                return Err(Error::domain(format!(
                    "check {c} has degree {}, expected {d_c}",
                    vars.len()
                )));
            }
        }
        for (v, checks) in g.var_adj.iter().enumerate() {
            if checks.len() != d_v as usize {
                return Err(Error::domain(format!(
                    "variable {v} has degree {}, expected {d_v}",
                    checks.len()
                )));
            }
        }
        g.declared = Some((d_v, d_c));
        Ok(g)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.check_adj.iter().map(|v| v.len()).sum()
    }

    /// Declared (d_v, d_c) for graphs built through the regular paths.
    pub fn degrees(&self) -> Option<(u32, u32)> {
        self.declared
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    /// Exact girth: length of the shortest cycle, found by a breadth-first
    /// search rooted at every edge (shortest alternative path between the
    /// edge's endpoints, plus one). `None` for forests.
    pub fn girth(&self) -> Option<u32> {
        let n_nodes = self.n_vars + self.n_checks();
        let mut best: Option<u32> = None;
        let mut dist = vec![u32::MAX; n_nodes];
        let mut queue = std::collections::VecDeque::new();
        for c in 0..self.n_checks() {
            for &v in &self.check_adj[c] {
                // Shortest v -> c path avoiding the direct edge.
                let c_node = self.n_vars + c;
                dist.fill(u32::MAX);
                dist[v] = 0;
                queue.clear();
                queue.push_back(v);
                let cap = best.map(|b| b - 1).unwrap_or(u32::MAX);
                'bfs: while let Some(u) = queue.pop_front() {
                    if dist[u] >= cap {
                        break;
                    }
                    if u < self.n_vars {
                        for &cn in &self.var_adj[u] {
                            let w = self.n_vars + cn;
                            if u == v && cn == c {
                                continue; // skip the rooted edge itself
                            }
                            if dist[w] == u32::MAX {
                                dist[w] = dist[u] + 1;
                                if w == c_node {
                                    break 'bfs;
                                }
                                queue.push_back(w);
                            }
                        }
                    } else {
                        for &vn in &self.check_adj[u - self.n_vars] {
                            if u == c_node && vn == v {
                                continue;
                            }
                            if dist[vn] == u32::MAX {
                                dist[vn] = dist[u] + 1;
                                queue.push_back(vn);
                            }
                        }
                    }
                }
                if dist[c_node] != u32::MAX {
                    let cycle = dist[c_node] + 1;
                    if best.map_or(true, |b| cycle < b) {
                        best = Some(cycle);
                    }
                }
            }
        }
        best
    }

    /// Serializes to the graph file format: header `n d_v d_c`, then one
    /// line per check listing its variable indices.
    pub fn to_file_string(&self) -> Result<String> {
        let (d_v, d_c) = self.declared.ok_or_else(|| {
            Error::domain("only regular graphs have a file representation".to_string())
        })?;
        let mut out = format!("{} {} {}\n", self.n_vars, d_v, d_c);
        for vars in &self.check_adj {
            let line: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Loads a graph file (header `n d_v d_c`, one line of 0-based variable
    /// indices per check) and validates regularity.
    pub fn load_file(path: &Path) -> Result<TannerGraph> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "empty graph file".to_string(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: hline,
                message: "header must be `n d_v d_c`".to_string(),
            });
        }
        let parse = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("invalid integer {s:?}"),
            })
        };
        let n = parse(head[0], hline)?;
        let d_v = parse(head[1], hline)? as u32;
        let d_c = parse(head[2], hline)? as u32;
        let mut check_adj = Vec::new();
        for (line_no, line) in lines {
            let vars: Vec<usize> = line
                .split_whitespace()
                .map(|s| parse(s, line_no))
                .collect::<Result<_>>()?;
            check_adj.push(vars);
        }
        TannerGraph::regular(n, check_adj, d_v, d_c)
    }
}

/// Result of a construction attempt: the graph, its measured girth, and
/// whether the requested girth was met. Construction is best-effort; a
/// graph that falls short of the target still ships, carrying the girth it
/// achieved, so parameter sweeps can proceed.
#[derive(Debug, Clone)]
pub struct TannerBuild {
    pub graph: TannerGraph,
    pub achieved_girth: Option<u32>,
    pub target_met: bool,
}

const BUILD_ATTEMPTS: u64 = 24;

/// Builds a (d_v, d_c)-regular Tanner graph by progressive edge growth:
/// each edge attaches to the check that is farthest from the variable in
/// the graph built so far (unreachable preferred), breaking ties toward the
/// least-loaded check and then by seeded randomness. Deterministic for a
/// given seed.
///
/// Rejected up front: `n d_v` not divisible by `d_c`, odd target girth, or
/// `n` below the girth-implied blocklength lower bound.
pub fn build_regular_tanner(
    d_v: u32,
    d_c: u32,
    n: usize,
    target_girth: u32,
    seed: u64,
) -> Result<TannerBuild> {
    if d_v < 2 || d_c <= d_v {
        return Err(Error::domain(format!(
            "need d_c > d_v >= 2, got d_v = {d_v}, d_c = {d_c}"
        )));
    }
    if (n * d_v as usize) % d_c as usize != 0 {
        return Err(Error::domain(format!(
            "n*d_v = {} not divisible by d_c = {d_c}",
            n * d_v as usize
        )));
    }
    let (lower, _) = blocklength_bounds_from_girth(d_v, d_c, target_girth)?;
    if (n as f64) < lower {
        return Err(Error::infeasible(format!(
            "girth {target_girth} needs blocklength >= {lower}, got {n}"
        )));
    }

    let mut best: Option<TannerBuild> = None;
    for attempt in 0..BUILD_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let Some(graph) = peg_attempt(d_v, d_c, n, &mut rng) else {
            continue;
        };
        let girth = graph.girth();
        let target_met = girth.map_or(true, |g| g >= target_girth);
        let build = TannerBuild {
            graph,
            achieved_girth: girth,
            target_met,
        };
        if build.target_met {
            return Ok(build);
        }
        let better = match (&best, girth) {
            (None, _) => true,
            (Some(b), g) => g > b.achieved_girth,
        };
        if better {
            best = Some(build);
        }
    }
    best.ok_or_else(|| Error::infeasible("edge placement failed on every attempt".to_string()))
}

fn peg_attempt(d_v: u32, d_c: u32, n: usize, rng: &mut ChaCha8Rng) -> Option<TannerGraph> {
    let m = n * d_v as usize / d_c as usize;
    let mut check_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut var_adj: Vec<Vec<usize>> = vec![Vec::new(); n];

    // BFS scratch: distance from the current variable to every check.
    let mut check_dist = vec![u32::MAX; m];
    let mut var_dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();

    for v in 0..n {
        for _edge in 0..d_v {
            // Distances in the partial graph.
            check_dist.fill(u32::MAX);
            var_dist.fill(u32::MAX);
            var_dist[v] = 0;
            queue.clear();
            queue.push_back(v);
            while let Some(u) = queue.pop_front() {
                for &c in &var_adj[u] {
                    if check_dist[c] == u32::MAX {
                        check_dist[c] = var_dist[u] + 1;
                        for &w in &check_adj[c] {
                            if var_dist[w] == u32::MAX {
                                var_dist[w] = check_dist[c] + 1;
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
            // Candidates: spare capacity, not already adjacent; farthest
            // first, then least loaded.
            let mut best_key = (0u32, u32::MAX);
            let mut pool: Vec<usize> = Vec::new();
            for c in 0..m {
                if check_adj[c].len() >= d_c as usize || check_adj[c].contains(&v) {
                    continue;
                }
                let key = (check_dist[c], check_adj[c].len() as u32);
                let better = key.0 > best_key.0 || (key.0 == best_key.0 && key.1 < best_key.1);
                if pool.is_empty() || better {
                    best_key = key;
                    pool.clear();
                    pool.push(c);
                } else if key == best_key {
                    pool.push(c);
                }
            }
            let &c = pool.choose(rng)?;
            check_adj[c].push(v);
            var_adj[v].push(c);
        }
    }
    TannerGraph::regular(n, check_adj, d_v, d_c).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hamming_7_4() -> TannerGraph {
        TannerGraph::new(7, vec![vec![0, 3, 4, 6], vec![1, 3, 5, 6], vec![2, 4, 5, 6]]).unwrap()
    }

    #[test]
    fn girth_of_hamming_is_four() {
        assert_eq!(hamming_7_4().girth(), Some(4));
    }

    #[test]
    fn girth_of_complete_bipartite_is_four() {
        // d_v = d_c = 3 on three variables and three checks: any two checks
        // share two variables.
        let g = TannerGraph::new(3, vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(g.girth(), Some(4));
    }

    #[test]
    fn girth_of_ring_is_full_length() {
        // A single 2n-cycle: variables and checks alternate around a ring.
        let n = 7;
        let checks = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let g = TannerGraph::regular(n, checks, 2, 2).unwrap();
        assert_eq!(g.girth(), Some(2 * n as u32));
    }

    #[test]
    fn forest_has_no_girth() {
        let g = TannerGraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn rejects_parallel_edges() {
        assert!(TannerGraph::new(3, vec![vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn build_small_graph_meets_girth() {
        // Girth 6 at (3,6) needs n >= 26 just to give every variable a
        // distinct check pair; 36 leaves the greedy room to succeed.
        let b = build_regular_tanner(3, 6, 36, 6, 1).unwrap();
        assert!(b.target_met);
        assert!(b.achieved_girth.unwrap() >= 6);
        assert_eq!(b.graph.n_edges(), 108);
        assert_eq!(b.graph.degrees(), Some((3, 6)));
    }

    #[test]
    fn build_rejects_infeasible_blocklength() {
        // Girth 8 at (3,6) needs n >= 10.
        assert!(matches!(
            build_regular_tanner(3, 6, 8, 8, 1),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn build_rejects_bad_divisibility() {
        assert!(build_regular_tanner(3, 6, 13, 6, 1).is_err());
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_regular_tanner(3, 6, 24, 4, 7).unwrap();
        let b = build_regular_tanner(3, 6, 24, 4, 7).unwrap();
        assert_eq!(a.graph, b.graph);
        let c = build_regular_tanner(3, 6, 24, 4, 8).unwrap();
        // Different seed will generally wire differently; only determinism
        // per seed is contractual.
        let _ = c;
    }

    #[test]
    fn built_graphs_respect_girth_blocklength_bound() {
        for (d_v, d_c, n, tg, seed) in [
            (3u32, 6u32, 36usize, 6u32, 1u64),
            (3, 6, 48, 6, 2),
            (4, 8, 32, 4, 3),
            (2, 4, 16, 8, 4),
            (5, 10, 40, 4, 5),
        ] {
            let b = build_regular_tanner(d_v, d_c, n, tg, seed).unwrap();
            let g = b.achieved_girth.unwrap();
            let (lower, _) = blocklength_bounds_from_girth(d_v, d_c, g).unwrap();
            assert!(
                n as f64 >= lower,
                "({d_v},{d_c},n={n}) girth {g}: bound {lower} violated"
            );
        }
    }

    #[test]
    fn file_round_trip() {
        let b = build_regular_tanner(3, 6, 12, 4, 1).unwrap();
        let text = b.graph.to_file_string().unwrap();
        let dir = std::env::temp_dir().join(format!("tanner_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.tg");
        std::fs::write(&path, &text).unwrap();
        let loaded = TannerGraph::load_file(&path).unwrap();
        assert_eq!(loaded, b.graph);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn loader_rejects_irregular_file() {
        let dir = std::env::temp_dir().join(format!("tanner_bad_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.tg");
        std::fs::write(&path, "4 2 4\n0 1 2 3\n0 1 2\n").unwrap();
        assert!(TannerGraph::load_file(&path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
