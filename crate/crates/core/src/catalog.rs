//! Standard constructions and group definition files.
//!
//! A group file is TOML, either
//!
//! ```toml
//! name = "F20"
//! degree = 5
//! generators = ["(2,3,4,5)", "(1,2,3,5,4)"]
//! ```
//!
//! or a construction, with `params` the integer parameters of the kind and
//! `factors` the construct strings of a direct product:
//!
//! ```toml
//! name = "D12"
//! construction = "dihedral"
//! params = [6]
//! ```
//!
//! Construct strings are `kind:p1,p2,..`; factors of a direct product are
//! joined by `*`, e.g. `cyclic:2*cyclic:6`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::group::{is_prime, FiniteGroup, GroupConfig};
use crate::perm::{Permutation, Point};
use crate::semidirect::AffineModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Cyclic(usize),
    /// Order `2n`, acting on `n` points.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    ElementaryAbelian {
        p: usize,
        k: usize,
    },
    Quaternion8,
    DirectProduct(Vec<Construction>),
    SemidirectVx {
        q: usize,
        p: usize,
        delta: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Generators { degree: usize, generators: Vec<String> },
    Construction(Construction),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub source: Source,
}

impl GroupSpec {
    pub fn construction(c: Construction) -> Self {
        GroupSpec {
            name: c.default_name(),
            source: Source::Construction(c),
        }
    }

    pub fn generators(name: impl Into<String>, degree: usize, generators: &[&str]) -> Self {
        GroupSpec {
            name: name.into(),
            source: Source::Generators {
                degree,
                generators: generators.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Construction {
    pub fn default_name(&self) -> String {
        match self {
            Construction::Cyclic(n) => format!("C{n}"),
            Construction::Dihedral(n) => format!("D{}", 2 * n),
            Construction::Symmetric(n) => format!("S{n}"),
            Construction::Alternating(n) => format!("A{n}"),
            Construction::ElementaryAbelian { p, k } => format!("C{p}^{k}"),
            Construction::Quaternion8 => "Q8".into(),
            Construction::DirectProduct(fs) => fs.iter().map(Construction::default_name).collect::<Vec<_>>().join("x"),
            Construction::SemidirectVx { q, p, delta } => format!("V({q},{p},{delta})"),
        }
    }

    /// Parses `kind:params`, or a `*`-separated direct product of those.
    pub fn parse(text: &str) -> Result<Construction> {
        let text = text.trim();
        if text.contains('*') {
            let factors = text.split('*').map(Construction::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Construction::DirectProduct(factors));
        }
        let (kind, params) = match text.split_once(':') {
            Some((k, p)) => (k.trim(), p.trim()),
            None => (text, ""),
        };
        let params: Vec<usize> = if params.is_empty() {
            Vec::new()
        } else {
            params
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::InvalidParams(format!("bad parameter {s:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        Construction::from_kind(kind, &params, &[])
    }

    fn from_kind(kind: &str, params: &[usize], factors: &[Construction]) -> Result<Construction> {
        let arity = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "{kind} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        Ok(match kind {
            "cyclic" => {
                arity(1)?;
                Construction::Cyclic(params[0])
            }
            "dihedral" => {
                arity(1)?;
                Construction::Dihedral(params[0])
            }
            "symmetric" => {
                arity(1)?;
                Construction::Symmetric(params[0])
            }
            "alternating" => {
                arity(1)?;
                Construction::Alternating(params[0])
            }
            "elementary_abelian" => {
                arity(2)?;
                Construction::ElementaryAbelian {
                    p: params[0],
                    k: params[1],
                }
            }
            "quaternion8" => {
                arity(0)?;
                Construction::Quaternion8
            }
            "semidirect_vx" => {
                arity(3)?;
                Construction::SemidirectVx {
                    q: params[0],
                    p: params[1],
                    delta: params[2],
                }
            }
            "direct_product" => {
                if factors.is_empty() {
                    return Err(Error::InvalidParams("direct_product needs factors".into()));
                }
                Construction::DirectProduct(factors.to_vec())
            }
            other => return Err(Error::InvalidParams(format!("unknown construction {other:?}"))),
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Cyclic(n) => write!(f, "cyclic:{n}"),
            Construction::Dihedral(n) => write!(f, "dihedral:{n}"),
            Construction::Symmetric(n) => write!(f, "symmetric:{n}"),
            Construction::Alternating(n) => write!(f, "alternating:{n}"),
            Construction::ElementaryAbelian { p, k } => write!(f, "elementary_abelian:{p},{k}"),
            Construction::Quaternion8 => write!(f, "quaternion8"),
            Construction::DirectProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            Construction::SemidirectVx { q, p, delta } => write!(f, "semidirect_vx:{q},{p},{delta}"),
        }
    }
}

fn cycle(points: impl IntoIterator<Item = usize>, degree: usize) -> Permutation {
    let points: Vec<usize> = points.into_iter().collect();
    let mut images: Vec<Point> = (0..degree as Point).collect();
    for (i, &a) in points.iter().enumerate() {
        images[a] = points[(i + 1) % points.len()] as Point;
    }
    Permutation::from_images(images).expect("cycle of distinct points")
}

/// Generators of the construction, all of one degree.
fn construction_generators(c: &Construction, config: &GroupConfig) -> Result<Vec<Permutation>> {
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(Error::InvalidParams(format!("{what} needs a positive parameter")))
        } else {
            Ok(())
        }
    };
    let gens = match *c {
        Construction::Cyclic(n) => {
            positive(n, "cyclic")?;
            vec![cycle(0..n, n)]
        }
        Construction::Dihedral(n) => {
            if n < 3 {
                return Err(Error::InvalidParams(format!("dihedral needs n >= 3, got {n}")));
            }
            let mut reflection: Vec<Point> = (0..n as Point).collect();
            reflection.reverse();
            vec![cycle(0..n, n), Permutation::from_images(reflection)?]
        }
        Construction::Symmetric(n) => {
            positive(n, "symmetric")?;
            if n < 3 {
                vec![cycle(0..n, n)]
            } else {
                vec![cycle([0, 1], n), cycle(0..n, n)]
            }
        }
        Construction::Alternating(n) => {
            positive(n, "alternating")?;
            if n < 3 {
                vec![Permutation::identity(n)]
            } else {
                (2..n).map(|k| cycle([0, 1, k], n)).collect()
            }
        }
        Construction::ElementaryAbelian { p, k } => {
            if !is_prime(p) {
                return Err(Error::InvalidParams(format!("{p} is not prime")));
            }
            if k == 0 {
                vec![Permutation::identity(1)]
            } else {
                (0..k).map(|i| cycle(i * p..(i + 1) * p, p * k)).collect()
            }
        }
        Construction::Quaternion8 => ["(1,2,5,6)(3,8,7,4)", "(1,3,5,7)(2,4,6,8)"]
            .iter()
            .map(|s| Permutation::parse_cycles(s, 8))
            .collect::<Result<_>>()?,
        Construction::DirectProduct(ref factors) => {
            if factors.is_empty() {
                return Err(Error::InvalidParams("direct product of no factors".into()));
            }
            let parts = factors
                .iter()
                .map(|f| construction_generators(f, config))
                .collect::<Result<Vec<_>>>()?;
            let degree: usize = parts.iter().map(|g| g[0].degree()).sum();
            if degree > config.max_degree {
                return Err(Error::DegreeCap {
                    degree,
                    cap: config.max_degree,
                });
            }
            let mut gens = Vec::new();
            let mut offset = 0;
            for part in &parts {
                let d = part[0].degree();
                for g in part {
                    let mut images: Vec<Point> = (0..degree as Point).collect();
                    for i in 0..d {
                        images[offset + i] = (offset + g.apply(i)) as Point;
                    }
                    gens.push(Permutation::from_images(images)?);
                }
                offset += d;
            }
            gens
        }
        Construction::SemidirectVx { q, p, delta } => {
            let model = AffineModel::new(q, p, delta)?;
            if model.points() > config.max_degree {
                return Err(Error::DegreeCap {
                    degree: model.points(),
                    cap: config.max_degree,
                });
            }
            model.generators()
        }
    };
    Ok(gens)
}

/// Builds the permutation group of a spec.
pub fn build(spec: &GroupSpec, config: &GroupConfig) -> Result<FiniteGroup> {
    match &spec.source {
        Source::Generators { degree, generators } => {
            if *degree == 0 {
                return Err(Error::InvalidParams("degree must be at least 1".into()));
            }
            let mut gens = generators
                .iter()
                .map(|s| Permutation::parse_cycles(s, *degree))
                .collect::<Result<Vec<_>>>()?;
            if gens.is_empty() {
                gens.push(Permutation::identity(*degree));
            }
            FiniteGroup::close(spec.name.clone(), &gens, config)
        }
        Source::Construction(c) => {
            let gens = construction_generators(c, config)?;
            FiniteGroup::close(spec.name.clone(), &gens, config)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupFile {
    name: Option<String>,
    degree: Option<usize>,
    generators: Option<Vec<Spanned<String>>>,
    construction: Option<Spanned<String>>,
    #[serde(default)]
    params: Vec<usize>,
    #[serde(default)]
    factors: Vec<Spanned<String>>,
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

/// Parses the text of a group file; `path` only labels errors.
pub fn parse_group_file(text: &str, path: &str) -> Result<GroupSpec> {
    let at = |offset: usize, message: String| {
        let (line, column) = line_column(text, offset);
        Error::File {
            path: path.to_string(),
            line,
            column,
            message,
        }
    };
    let raw: RawGroupFile = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        at(offset, e.message().to_string())
    })?;
    let name = raw.name.unwrap_or_else(|| {
        Path::new(path)
            .file_stem()
            .map_or_else(|| "G".into(), |s| s.to_string_lossy().into_owned())
    });
    match (raw.generators, raw.construction) {
        (Some(gens), None) => {
            let degree = raw.degree.ok_or_else(|| at(0, "generators need a degree".into()))?;
            for g in &gens {
                if let Err(Error::Parse { offset, message }) = Permutation::parse_cycles(g.get_ref(), degree) {
                    // skip the opening quote
                    return Err(at(g.span().start + 1 + offset, message));
                }
            }
            Ok(GroupSpec {
                name,
                source: Source::Generators {
                    degree,
                    generators: gens.into_iter().map(Spanned::into_inner).collect(),
                },
            })
        }
        (None, Some(kind)) => {
            let factors = raw
                .factors
                .iter()
                .map(|f| Construction::parse(f.get_ref()).map_err(|e| at(f.span().start, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let c = Construction::from_kind(kind.get_ref(), &raw.params, &factors)
                .map_err(|e| at(kind.span().start, e.to_string()))?;
            Ok(GroupSpec {
                name,
                source: Source::Construction(c),
            })
        }
        (Some(_), Some(kind)) => Err(at(
            kind.span().start,
            "give either generators or a construction, not both".into(),
        )),
        (None, None) => Err(at(0, "missing generators or construction".into())),
    }
}

pub fn load_group_file(path: impl AsRef<Path>) -> Result<GroupSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_group_file(&text, &path.display().to_string())
}
