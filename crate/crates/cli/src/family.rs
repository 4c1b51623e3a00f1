use std::fmt;
use std::str::FromStr;

use treembed_core::graph::{gen_grid, gen_power_law, gen_random, gen_slim, Graph, GraphError};

/// Generator family with its size parameters, written as
/// `grid:100x100`, `powerlaw:N,M`, `slim:N,M,D` or `random:N,M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Grid(Vec<usize>),
    PowerLaw { n: usize, m: usize },
    Slim { n: usize, m: usize, diameter: usize },
    Random { n: usize, m: usize },
}

impl Family {
    pub fn generate(&self, weighted: bool, seed: u64) -> Result<Graph, GraphError> {
        match self {
            Family::Grid(dims) => gen_grid(dims, weighted, seed),
            Family::PowerLaw { n, m } => gen_power_law(*n, *m, weighted, seed),
            Family::Slim { n, m, diameter } => gen_slim(*n, *m, *diameter, weighted, seed),
            Family::Random { n, m } => gen_random(*n, *m, weighted, seed),
        }
    }

    /// Same family scaled to `n` vertices with `density * n` edges. Grids
    /// become one-dimensional.
    pub fn resized(&self, n: usize, density: usize) -> Family {
        let m = n * density;
        match self {
            Family::Grid(_) => Family::Grid(vec![n]),
            Family::PowerLaw { .. } => Family::PowerLaw { n, m },
            Family::Slim { diameter, .. } => Family::Slim { n, m, diameter: *diameter },
            Family::Random { .. } => Family::Random { n, m },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Grid(dims) => {
                let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "grid:{}", dims.join("x"))
            }
            Family::PowerLaw { n, m } => write!(f, "powerlaw:{n},{m}"),
            Family::Slim { n, m, diameter } => write!(f, "slim:{n},{m},{diameter}"),
            Family::Random { n, m } => write!(f, "random:{n},{m}"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        let (name, params) = s.split_once(':').ok_or_else(|| format!("expected FAMILY:PARAMS, got {s:?}"))?;
        let nums = |sep: char, want: usize| -> Result<Vec<usize>, String> {
            let v = params
                .split(sep)
                .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if want > 0 && v.len() != want {
                return Err(format!("{name} takes {want} parameters, got {}", v.len()));
            }
            Ok(v)
        };
        match name {
            "grid" => Ok(Family::Grid(nums('x', 0)?)),
            "powerlaw" => nums(',', 2).map(|v| Family::PowerLaw { n: v[0], m: v[1] }),
            "slim" => nums(',', 3).map(|v| Family::Slim { n: v[0], m: v[1], diameter: v[2] }),
            "random" => nums(',', 2).map(|v| Family::Random { n: v[0], m: v[1] }),
            _ => Err(format!("unknown family {name:?} (grid, powerlaw, slim, random)")),
        }
    }
}
