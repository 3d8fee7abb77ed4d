//! Instance generators, file output and the command-line front end.

mod cli;

pub use cli::run_cli;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::{Edge, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Independent owners and edges.
    Random,
    /// Three equal agents; a perfect matching between agents 1 and 2.
    Example1,
    /// The 7-vertex path where a maximum-matching mechanism can be gamed.
    Figure1,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::Random => "random",
            GeneratorKind::Example1 => "example1",
            GeneratorKind::Figure1 => "figure1",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(GeneratorKind::Random),
            "example1" => Ok(GeneratorKind::Example1),
            "figure1" => Ok(GeneratorKind::Figure1),
            _ => Err(Error::InvalidSpec(format!("unknown generator kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub m: usize,
    /// Edge probability, random kind only.
    pub p: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn random(n: usize, m: usize, p: f64, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Random,
            n,
            m,
            p,
            seed,
        }
    }

    pub fn example1(n: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Example1,
            n,
            m: 3,
            p: 0.0,
            seed: 0,
        }
    }

    pub fn figure1() -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Figure1,
            n: 7,
            m: 2,
            p: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self.kind {
            GeneratorKind::Random => {
                if !(0.0..=1.0).contains(&self.p) {
                    return bad(format!("edge probability {} is outside [0, 1]", self.p));
                }
                if self.m == 0 || self.m > self.n {
                    return bad(format!("cannot give {} agents a vertex each out of {}", self.m, self.n));
                }
            }
            GeneratorKind::Example1 => {
                if self.m != 3 || self.n == 0 || !self.n.is_multiple_of(3) {
                    return bad(format!(
                        "example1 needs m = 3 and n a positive multiple of 3, got n = {}, m = {}",
                        self.n, self.m
                    ));
                }
            }
            GeneratorKind::Figure1 => {
                if (self.n, self.m) != (7, 2) {
                    return bad(format!(
                        "figure1 has n = 7 and m = 2, got n = {}, m = {}",
                        self.n, self.m
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Builds the instance described by `spec`; a pure function of `spec`.
pub fn gen_instance(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    match spec.kind {
        GeneratorKind::Random => {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
            let owners = loop {
                let owners: Vec<usize> = (0..spec.n).map(|_| rng.gen_range(1..=spec.m)).collect();
                let mut seen = vec![false; spec.m + 1];
                owners.iter().for_each(|&a| seen[a] = true);
                if seen[1..].iter().all(|&s| s) {
                    break owners;
                }
            };
            let mut edges = Vec::new();
            for a in 1..=spec.n {
                for b in a + 1..=spec.n {
                    if rng.gen_bool(spec.p) {
                        edges.push(Edge::new(a, b));
                    }
                }
            }
            Instance::new(spec.m, owners, edges)
        }
        GeneratorKind::Example1 => {
            let third = spec.n / 3;
            let owners = (0..spec.n).map(|v| v / third + 1).collect();
            let edges = (1..=third).map(|j| Edge::new(j, third + j)).collect();
            Instance::new(3, owners, edges)
        }
        GeneratorKind::Figure1 => Instance::new(
            2,
            vec![1, 2, 2, 2, 1, 1, 2],
            (1..7).map(|v| Edge::new(v, v + 1)).collect(),
        ),
    }
}

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}
