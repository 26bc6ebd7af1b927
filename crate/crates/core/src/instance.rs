//! Problem data: outage probabilities, station selections, and the
//! vertex-cover graphs used to build adversarial instances.

use std::fmt;

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::BilpInstance;
use crate::FORMAT_VERSION;

/// Per-station, per-period outage probabilities together with the maximum
/// tolerated system outage in each period.
///
/// `outage[k][t]` is the probability that station `k` cannot close the link
/// during period `t`. Stations are assumed to fail independently.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    outage: Vec<Vec<f64>>,
    required_outage: Vec<f64>,
}

impl ProblemInstance {
    /// Validates dimensions and probability ranges. Every probability must lie
    /// in `(0, 1]`; an entry of exactly 1 is a station that never helps in
    /// that period.
    pub fn new(outage: Vec<Vec<f64>>, required_outage: Vec<f64>) -> Result<Self> {
        let num_stations = outage.len();
        let num_periods = required_outage.len();
        if num_stations == 0 {
            return Err(Error::parameter("num_stations", "must be at least 1"));
        }
        if num_periods == 0 {
            return Err(Error::parameter("num_periods", "must be at least 1"));
        }
        for (k, row) in outage.iter().enumerate() {
            if row.len() != num_periods {
                return Err(Error::parameter(
                    format!("outage[{k}]"),
                    format!("has {} periods, expected {num_periods}", row.len()),
                ));
            }
            for (t, &p) in row.iter().enumerate() {
                check_probability(&format!("outage[{k}][{t}]"), p)?;
            }
        }
        for (t, &p) in required_outage.iter().enumerate() {
            check_probability(&format!("required_outage[{t}]"), p)?;
        }
        Ok(Self {
            outage,
            required_outage,
        })
    }

    pub fn num_stations(&self) -> usize {
        self.outage.len()
    }

    pub fn num_periods(&self) -> usize {
        self.required_outage.len()
    }

    pub fn outage(&self, station: usize, period: usize) -> f64 {
        self.outage[station][period]
    }

    /// Rows are stations, columns are periods.
    pub fn outage_matrix(&self) -> &[Vec<f64>] {
        &self.outage
    }

    pub fn required_outage(&self) -> &[f64] {
        &self.required_outage
    }

    /// `1 - required_outage[period]`.
    pub fn required_availability(&self, period: usize) -> f64 {
        1.0 - self.required_outage[period]
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT_VERSION {
            return Err(Error::parameter(
                "format",
                format!("unsupported version {}, expected {FORMAT_VERSION}", doc.format),
            ));
        }
        if doc.outage.len() != doc.num_stations {
            return Err(Error::parameter(
                "num_stations",
                format!("declares {} but outage has {} rows", doc.num_stations, doc.outage.len()),
            ));
        }
        if doc.required_outage.len() != doc.num_periods {
            return Err(Error::parameter(
                "num_periods",
                format!(
                    "declares {} but required_outage has {} entries",
                    doc.num_periods,
                    doc.required_outage.len()
                ),
            ));
        }
        Self::new(doc.outage, doc.required_outage)
    }

    pub fn to_json_string(&self) -> String {
        let doc = InstanceDocument {
            format: FORMAT_VERSION,
            num_stations: self.num_stations(),
            num_periods: self.num_periods(),
            outage: self.outage.clone(),
            required_outage: self.required_outage.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization is infallible")
    }
}

fn check_probability(field: &str, p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::parameter(
            field,
            format!("value {p} violates positivity: probabilities must lie in (0, 1]"),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDocument {
    #[serde(default = "default_format")]
    format: u32,
    num_stations: usize,
    num_periods: usize,
    outage: Vec<Vec<f64>>,
    required_outage: Vec<f64>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

/// Parameters of the i.i.d. uniform outage model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformScenario {
    pub num_stations: usize,
    pub num_periods: usize,
    pub low: f64,
    pub high: f64,
    pub required_availability: f64,
}

impl UniformScenario {
    pub fn validate(&self) -> Result<()> {
        if self.num_stations == 0 {
            return Err(Error::parameter("num_stations", "must be at least 1"));
        }
        if self.num_periods == 0 {
            return Err(Error::parameter("num_periods", "must be at least 1"));
        }
        if !(self.low > 0.0 && self.low <= self.high && self.high <= 1.0) {
            return Err(Error::parameter(
                "low/high",
                format!("need 0 < low <= high <= 1, got [{}, {}]", self.low, self.high),
            ));
        }
        let avl = self.required_availability;
        if !(avl > 0.0 && avl < 1.0) {
            return Err(Error::parameter(
                "required_availability",
                format!("must lie in (0, 1), got {avl}"),
            ));
        }
        Ok(())
    }

    /// Draws one instance from `rng`. Entries are filled station-major: all
    /// periods of station 0, then station 1, and so on.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ProblemInstance> {
        self.validate()?;
        let dist = Uniform::new_inclusive(self.low, self.high)
            .map_err(|e| Error::parameter("low/high", e.to_string()))?;
        let outage = (0..self.num_stations)
            .map(|_| (0..self.num_periods).map(|_| dist.sample(rng)).collect())
            .collect();
        let required = vec![1.0 - self.required_availability; self.num_periods];
        ProblemInstance::new(outage, required)
    }
}

/// Seeded instance with outages drawn i.i.d. from `[low, high]`.
///
/// The stream is ChaCha8 seeded through `seed_from_u64`, so a given seed
/// yields the same instance on every platform.
pub fn generate_uniform(
    num_stations: usize,
    num_periods: usize,
    low: f64,
    high: f64,
    required_availability: f64,
    seed: u64,
) -> Result<ProblemInstance> {
    let scenario = UniformScenario {
        num_stations,
        num_periods,
        low,
        high,
        required_availability,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    scenario.sample(&mut rng)
}

/// A set of installed stations, stored as a 0/1 vector over all candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    chosen: Vec<bool>,
}

impl Selection {
    pub fn new(chosen: Vec<bool>) -> Self {
        Self { chosen }
    }

    pub fn empty(len: usize) -> Self {
        Self::new(vec![false; len])
    }

    pub fn full(len: usize) -> Self {
        Self::new(vec![true; len])
    }

    /// Builds a selection from 0-based station indices.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut chosen = vec![false; len];
        for i in indices {
            chosen[i] = true;
        }
        Self::new(chosen)
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn is_chosen(&self, station: usize) -> bool {
        self.chosen[station]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.chosen
    }

    pub fn cardinality(&self) -> usize {
        self.chosen.iter().filter(|&&c| c).count()
    }

    /// 0-based indices of chosen stations, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.chosen
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| c.then_some(i))
            .collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

/// Undirected simple graph whose minimum vertex cover is an instance of the
/// selection problem with unit coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCoverGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl NodeCoverGraph {
    /// `edges` use 0-based node indices. Self-loops, out-of-range endpoints
    /// and duplicate edges (in either orientation) are rejected.
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::parameter("num_nodes", "node set must be non-empty"));
        }
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (i, &(n, m)) in edges.iter().enumerate() {
            if n >= num_nodes || m >= num_nodes {
                return Err(Error::parameter(
                    format!("edges[{i}]"),
                    format!("endpoint out of range for {num_nodes} nodes"),
                ));
            }
            if n == m {
                return Err(Error::parameter(format!("edges[{i}]"), "self-loop"));
            }
            if !seen.insert((n.min(m), n.max(m))) {
                return Err(Error::parameter(format!("edges[{i}]"), "duplicate edge"));
            }
        }
        Ok(Self { num_nodes, edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses the text format: a header line `N M` followed by `M` lines
    /// `n m` with 1-based endpoints. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing `N M` header".into()))?;
        let (n, m) = parse_pair(header, "header")?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            let (a, b) = parse_pair(line, &format!("edge line {}", i + 1))?;
            if a == 0 || b == 0 {
                return Err(Error::Format(format!("edge line {}: nodes are 1-based", i + 1)));
            }
            edges.push((a - 1, b - 1));
        }
        if edges.len() != m {
            return Err(Error::Format(format!(
                "header declares {m} edges but {} were listed",
                edges.len()
            )));
        }
        Self::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.num_nodes, self.edges.len());
        for &(n, m) in &self.edges {
            out.push_str(&format!("{} {}\n", n + 1, m + 1));
        }
        out
    }
}

fn parse_pair(line: &str, what: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace().map(str::parse::<usize>);
    match (parts.next(), parts.next(), parts.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Format(format!("{what}: expected two integers, got `{line}`"))),
    }
}

/// One variable per node and one `z_n + z_m >= 1` row per edge.
pub fn encode_node_cover(graph: &NodeCoverGraph) -> Result<BilpInstance> {
    if graph.num_nodes() == 0 {
        return Err(Error::parameter("num_nodes", "node set must be non-empty"));
    }
    let alpha = graph
        .edges()
        .iter()
        .map(|&(n, m)| {
            let mut row = vec![0.0; graph.num_nodes()];
            row[n] = 1.0;
            row[m] = 1.0;
            row
        })
        .collect();
    let beta = vec![1.0; graph.edges().len()];
    BilpInstance::new(graph.num_nodes(), alpha, beta)
}
