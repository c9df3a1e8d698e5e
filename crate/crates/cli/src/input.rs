use std::fs;
use std::path::Path;
use std::str::FromStr;

use foel_core::graph::parse_graph_spec;
use foel_core::hamiltonian::{build_heisenberg, build_normalized_chain, build_spin1_beta_chain};
use foel_core::{ChainSpec, HalfInt, HilbertShape, RealOperator, SpinGraph};

use crate::cli::SystemSource;
use crate::Failure;

pub fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Failure::Usage(format!("{what}: cannot parse '{s}'"))))
        .collect()
}

pub fn parse_spins(text: &str) -> Result<Vec<HalfInt>, Failure> {
    let twice: Vec<i64> = parse_list(text, "--chain")?;
    if twice.is_empty() {
        return Err(Failure::Usage("--chain: no sites".into()));
    }
    if let Some(bad) = twice.iter().find(|&&t| t <= 0) {
        return Err(Failure::Usage(format!("--chain: twice-spin must be positive, got {bad}")));
    }
    Ok(twice.into_iter().map(HalfInt::from_twice).collect())
}

/// Couplings from `--J`, defaulting to all ones.
pub fn couplings(text: Option<&str>, count: usize) -> Result<Vec<f64>, Failure> {
    match text {
        None => Ok(vec![1.0; count]),
        Some(t) => {
            let js: Vec<f64> = parse_list(t, "--J")?;
            if js.len() != count {
                return Err(Failure::Usage(format!("--J: expected {count} couplings, got {}", js.len())));
            }
            Ok(js)
        }
    }
}

pub fn read_graph(path: &Path) -> Result<SpinGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let parsed = parse_graph_spec(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w:?}");
    }
    Ok(parsed.graph)
}

/// Physical system selected on the command line.
pub enum System {
    Chain { spins: Vec<HalfInt>, couplings: Vec<f64> },
    Graph(SpinGraph),
    Beta { beta: f64, len: usize },
}

impl System {
    pub fn from_source(src: &SystemSource, js: Option<&str>, len: Option<usize>) -> Result<Self, Failure> {
        if let Some(chain) = &src.chain {
            let spins = parse_spins(chain)?;
            let couplings = couplings(js, spins.len().saturating_sub(1))?;
            return Ok(System::Chain { spins, couplings });
        }
        if let Some(path) = &src.graph {
            if js.is_some() {
                return Err(Failure::Usage("--J applies to chains; graph couplings come from the file".into()));
            }
            return Ok(System::Graph(read_graph(path)?));
        }
        let beta = src.spin1_beta.expect("clap enforces one source");
        let len = len.ok_or_else(|| Failure::Usage("--spin1-beta needs --L".into()))?;
        Ok(System::Beta { beta, len })
    }

    pub fn spins(&self) -> Vec<HalfInt> {
        match self {
            System::Chain { spins, .. } => spins.clone(),
            System::Graph(g) => g.spins(),
            System::Beta { len, .. } => vec![HalfInt::ONE; *len],
        }
    }

    pub fn build(&self) -> Result<(RealOperator, HilbertShape), Failure> {
        let h = match self {
            System::Chain { spins, couplings } => {
                build_normalized_chain(&ChainSpec::new(spins.clone(), couplings.clone())?)?
            }
            System::Graph(g) => build_heisenberg(g)?,
            System::Beta { beta, len } => build_spin1_beta_chain(*len, *beta)?,
        };
        Ok((h, HilbertShape::from_spins(&self.spins())?))
    }
}
