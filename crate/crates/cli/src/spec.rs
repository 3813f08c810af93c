//! Knot specifications: catalog names, diagrams, and construction expressions.
//!
//! ```text
//! spec   := sum(spec, spec, ...) | tspin(spec, n) | spin(spec)
//!         | ribbon(n; w1, ..., wn) | braid(strands; l1, l2, ...)
//!         | twobridge(a1, a2, ...) | catalog-name
//! ```

use std::fmt;
use std::str::FromStr;

use knotgroup::certify::Construction;
use knotgroup::constructors::{
    connected_sum_all, ribbon_presentation, spin, twist_spin, BraidWord, Catalog, PlatWord,
};
use knotgroup::{Presentation, Word};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotSpec {
    Catalog(String),
    Braid { strands: usize, letters: Vec<i64> },
    TwoBridge(Vec<i64>),
    Sum(Vec<KnotSpec>),
    TwistSpin(Box<KnotSpec>, u32),
    Spin(Box<KnotSpec>),
    Ribbon(Vec<Word>),
}

/// A spec turned into a presentation, with what the report needs to know.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub presentation: Presentation,
    /// Top-level connected-sum summands, if the spec is a sum.
    pub summands: Vec<Presentation>,
    pub construction: Construction,
}

impl KnotSpec {
    /// Sums of classical knots are classical; twist spins and ribbon knots are not.
    pub fn is_classical(&self) -> bool {
        match self {
            KnotSpec::Catalog(_) | KnotSpec::Braid { .. } | KnotSpec::TwoBridge(_) => true,
            KnotSpec::Sum(parts) => parts.iter().all(KnotSpec::is_classical),
            _ => false,
        }
    }

    fn bridge(&self, catalog: &Catalog) -> Option<u32> {
        match self {
            KnotSpec::Catalog(name) => catalog.get(name).ok()?.bridge_number(),
            KnotSpec::TwoBridge(_) => Some(2),
            KnotSpec::Braid {
                strands: 1,
                letters,
            } if letters.is_empty() => Some(1),
            // Bridge number is additive minus one under connected sum.
            KnotSpec::Sum(parts) => {
                let bs = parts
                    .iter()
                    .map(|p| p.bridge(catalog))
                    .collect::<Option<Vec<u32>>>()?;
                Some(bs.iter().sum::<u32>() + 1 - bs.len() as u32)
            }
            _ => None,
        }
    }

    fn require_classical(&self, what: &str) -> Result<(), CliError> {
        if self.is_classical() {
            Ok(())
        } else {
            Err(CliError::Spec(format!(
                "{what} needs a classical knot, got `{self}`"
            )))
        }
    }

    pub fn resolve(&self, catalog: &Catalog) -> Result<Resolved, CliError> {
        let classical = |p: Presentation| Resolved {
            presentation: p,
            summands: Vec::new(),
            construction: Construction::Classical {
                bridge: self.bridge(catalog),
            },
        };
        Ok(match self {
            KnotSpec::Catalog(name) => classical(catalog.presentation(name)?),
            KnotSpec::Braid { strands, letters } => {
                classical(BraidWord::new(letters.clone(), *strands)?.wirtinger()?)
            }
            KnotSpec::TwoBridge(params) => classical(PlatWord::two_bridge(params)?.wirtinger()?),
            KnotSpec::Sum(parts) => {
                let resolved = parts
                    .iter()
                    .map(|p| p.resolve(catalog))
                    .collect::<Result<Vec<_>, _>>()?;
                let summands: Vec<Presentation> =
                    resolved.iter().map(|r| r.presentation.clone()).collect();
                let construction = if self.is_classical() {
                    Construction::Classical {
                        bridge: self.bridge(catalog),
                    }
                } else {
                    Construction::Sum {
                        summands: resolved.into_iter().map(|r| r.construction).collect(),
                    }
                };
                Resolved {
                    presentation: connected_sum_all(&summands)?,
                    summands,
                    construction,
                }
            }
            KnotSpec::TwistSpin(k, n) => {
                k.require_classical("tspin")?;
                let base = k.resolve(catalog)?;
                Resolved {
                    presentation: twist_spin(&base.presentation, *n),
                    summands: Vec::new(),
                    construction: Construction::TwistSpin {
                        n: *n,
                        bridge: k.bridge(catalog),
                    },
                }
            }
            KnotSpec::Spin(k) => {
                k.require_classical("spin")?;
                let base = k.resolve(catalog)?;
                Resolved {
                    presentation: spin(&base.presentation),
                    summands: Vec::new(),
                    construction: Construction::TwistSpin {
                        n: 0,
                        bridge: k.bridge(catalog),
                    },
                }
            }
            KnotSpec::Ribbon(ws) => Resolved {
                presentation: ribbon_presentation(ws.len(), ws)?,
                summands: Vec::new(),
                construction: Construction::Ribbon { fusions: ws.len() },
            },
        })
    }
}

impl fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(", ");
        match self {
            KnotSpec::Catalog(name) => f.write_str(name),
            KnotSpec::Braid { strands, letters } => {
                write!(
                    f,
                    "braid({strands}; {})",
                    join(letters.iter().map(i64::to_string).collect())
                )
            }
            KnotSpec::TwoBridge(ps) => write!(
                f,
                "twobridge({})",
                join(ps.iter().map(i64::to_string).collect())
            ),
            KnotSpec::Sum(parts) => write!(
                f,
                "sum({})",
                join(parts.iter().map(KnotSpec::to_string).collect())
            ),
            KnotSpec::TwistSpin(k, n) => write!(f, "tspin({k}, {n})"),
            KnotSpec::Spin(k) => write!(f, "spin({k})"),
            KnotSpec::Ribbon(ws) => {
                write!(
                    f,
                    "ribbon({}; {})",
                    ws.len(),
                    join(ws.iter().map(Word::to_string).collect())
                )
            }
        }
    }
}

impl FromStr for KnotSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> CliError {
        CliError::Spec(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        let out = &self.rest()[..len];
        self.pos += len;
        out
    }

    /// Raw text up to the next top-level `,`, `;` or `)`.
    fn atom(&mut self) -> Result<&'a str, CliError> {
        self.skip_ws();
        let len = self
            .rest()
            .find([',', ';', ')'])
            .unwrap_or(self.rest().len());
        let out = self.rest()[..len].trim();
        if out.is_empty() {
            return Err(self.error("expected a value"));
        }
        self.pos += len;
        Ok(out)
    }

    fn int<T: FromStr>(&mut self) -> Result<T, CliError> {
        let a = self.atom()?;
        a.parse()
            .map_err(|_| self.error(&format!("`{a}` is not an integer")))
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, CliError>,
    ) -> Result<Vec<T>, CliError> {
        let mut out = vec![item(self)?];
        while self.eat(',') {
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn spec(&mut self) -> Result<KnotSpec, CliError> {
        let start = self.pos;
        let name = self.ident();
        if name.is_empty() {
            return Err(self.error("expected a knot"));
        }
        let keyword = matches!(
            name,
            "sum" | "tspin" | "spin" | "ribbon" | "braid" | "twobridge"
        );
        if !keyword {
            // Catalog names may carry parameters, as in `T(2,5)`.
            self.skip_ws();
            if self.rest().starts_with('(') {
                let close = self
                    .rest()
                    .find(')')
                    .ok_or_else(|| self.error("unbalanced `(`"))?;
                self.pos += close + 1;
            }
            let text: String = self.src[start..self.pos]
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect();
            return Ok(KnotSpec::Catalog(text));
        }
        self.expect('(')?;
        let spec = match name {
            "sum" => {
                let parts = self.list(Self::spec)?;
                if parts.len() < 2 {
                    return Err(self.error("sum needs at least two summands"));
                }
                KnotSpec::Sum(parts)
            }
            "tspin" => {
                let k = self.spec()?;
                self.expect(',')?;
                KnotSpec::TwistSpin(Box::new(k), self.int()?)
            }
            "spin" => KnotSpec::Spin(Box::new(self.spec()?)),
            "ribbon" => {
                let n: usize = self.int()?;
                let ws = if self.eat(';') {
                    self.list(|p| {
                        let a = p.atom()?;
                        a.parse::<Word>().map_err(|e| p.error(&e.to_string()))
                    })?
                } else {
                    Vec::new()
                };
                if ws.len() != n {
                    return Err(self.error(&format!(
                        "ribbon({n}; ...) needs {n} conjugators, got {}",
                        ws.len()
                    )));
                }
                KnotSpec::Ribbon(ws)
            }
            "braid" => {
                let strands = self.int()?;
                let letters = if self.eat(';') {
                    self.list(Self::int)?
                } else {
                    Vec::new()
                };
                KnotSpec::Braid { strands, letters }
            }
            "twobridge" => KnotSpec::TwoBridge(self.list(Self::int)?),
            _ => unreachable!("keyword list"),
        };
        self.expect(')')?;
        Ok(spec)
    }
}
