use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use knotgroup::certify::{
    certify_nonabelian_quotient, free_product_word, invariant_report, lower_bound_afw_two,
    verify_freiheitssatz_instance, verify_fusion_bound, verify_nonadditivity, Budget, Certificate,
    CertificateCache, ReportOptions,
};
use knotgroup::constructors::{
    connected_sum, dihedral_product_group, twist_spin, Catalog, DihedralProduct,
};
use knotgroup::{Error, Word};

use crate::document::{
    Cell, GroupDocument, PresentationDoc, ReportBody, ReportDocument, Status, VerifyDocument,
    GROUP_SCHEMA,
};
use crate::error::CliError;
use crate::spec::KnotSpec;
use crate::{CacheAction, GlobalArgs, Theorem};

type Result<T> = std::result::Result<T, CliError>;

fn catalog(g: &GlobalArgs) -> Result<Catalog> {
    match &g.catalog {
        Some(path) => Ok(Catalog::from_json(&std::fs::read_to_string(path)?)?),
        None => Ok(Catalog::builtin()),
    }
}

fn budget(g: &GlobalArgs) -> Result<Budget> {
    let b = g.budget();
    b.validate()?;
    Ok(b)
}

fn emit<T: Serialize>(g: &GlobalArgs, doc: &T, human: impl FnOnce() -> String) -> Result<()> {
    let text = if g.json {
        serde_json::to_string_pretty(doc)? + "\n"
    } else {
        human()
    };
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Looks the operation up in the cache, computing and storing it on a miss.
fn cached<T: Serialize + serde::de::DeserializeOwned>(
    g: &GlobalArgs,
    operation: &str,
    presentation_hash: &str,
    budget: &Budget,
    compute: impl FnOnce() -> Result<(Vec<Certificate>, T)>,
) -> Result<(Vec<Certificate>, T)> {
    let cache = if g.no_cache {
        None
    } else {
        Some(CertificateCache::locate(g.cache_dir.as_deref())?)
    };
    if let Some(cache) = &cache {
        if let Ok(Some(entry)) = cache.get(operation, presentation_hash, budget) {
            if let Ok(value) = serde_json::from_value(entry.result) {
                return Ok((entry.certificates, value));
            }
        }
    }
    let (certs, value) = compute()?;
    if let Some(cache) = &cache {
        cache.put(
            operation,
            presentation_hash,
            budget,
            certs.clone(),
            serde_json::to_value(&value)?,
        )?;
    }
    Ok((certs, value))
}

pub fn group(g: &GlobalArgs, text: &str) -> Result<Status> {
    let spec: KnotSpec = text.parse()?;
    let p = spec.resolve(&catalog(g)?)?.presentation;
    let doc = GroupDocument {
        schema: GROUP_SCHEMA.into(),
        tool_version: knotgroup::TOOL_VERSION.into(),
        spec: spec.to_string(),
        presentation: PresentationDoc::new(&p),
    };
    emit(g, &doc, || format!("{spec}\n{p}\n"))?;
    Ok(Status::Certified)
}

pub fn invariants(g: &GlobalArgs, text: &str, c_max: usize) -> Result<Status> {
    let start = Instant::now();
    let budget = budget(g)?;
    let spec: KnotSpec = text.parse()?;
    let r = spec.resolve(&catalog(g)?)?;
    let p = &r.presentation;
    let operation = format!("invariants/c{c_max}/{spec}");
    let (certs, body) = cached(g, &operation, &p.hash(), &budget, || {
        let options = ReportOptions {
            summands: r.summands.clone(),
            c_max,
            construction: r.construction.clone(),
        };
        let report = invariant_report(p, &options, &budget)?;
        Ok((report.certificates.clone(), ReportBody::from(&report)))
    })?;
    let mut doc = ReportDocument::new(spec.to_string(), p, body, &certs, budget);
    doc.wall_time_secs = start.elapsed().as_secs_f64();
    emit(g, &doc, || human_report(&doc))?;
    Ok(doc.status)
}

fn human_report(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let s = &doc.presentation;
    out += &format!("spec          {}\n", doc.spec);
    out += &format!(
        "presentation  {} generators, {} relators (reduced: {} generators, {} relators)\n",
        s.generators, s.relators, s.reduced_generators, s.reduced_relators
    );
    let primes: Vec<String> = doc.coloring_primes.iter().map(u64::to_string).collect();
    out += &format!(
        "determinant   {} (coloring primes: {})\n\n",
        doc.determinant,
        if primes.is_empty() {
            "none".into()
        } else {
            primes.join(", ")
        }
    );
    out += &format!(
        "{:<10}{:>7}{:>7}{:>7}\n",
        "invariant", "lower", "upper", "value"
    );
    for b in &doc.report.invariants {
        let up = b
            .upper
            .as_ref()
            .map_or("-".to_string(), |u| u.value.to_string());
        let exact = b.exact().map_or("?".to_string(), |v| v.to_string());
        out += &format!(
            "{:<10}{:>7}{:>7}{:>7}\n",
            b.invariant.to_string(),
            b.lower.value,
            up,
            exact
        );
    }
    if !doc.report.annotations.is_empty() {
        out += "\n";
        for a in &doc.report.annotations {
            out += &format!(
                "{} {} {}   ({})\n",
                a.quantity, a.relation, a.value, a.reason
            );
        }
    }
    out += &format!(
        "\ncertificates  {}\nstatus        {:?}\n",
        doc.certificates.len(),
        doc.status
    );
    out
}

fn human_cells(doc: &VerifyDocument) -> String {
    let mut out = format!("verify {}\n", doc.theorem);
    for c in &doc.cells {
        let status = match c.status {
            Status::Certified => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Failed => "FAIL",
        };
        out += &format!("  {status:<13}{}", c.label);
        if let Some(d) = &c.detail {
            out += &format!("  [{d}]");
        }
        out += "\n";
    }
    let count = |s: Status| doc.cells.iter().filter(|c| c.status == s).count();
    out += &format!(
        "{} cells: {} pass, {} inconclusive, {} failed\n",
        doc.cells.len(),
        count(Status::Certified),
        count(Status::Inconclusive),
        count(Status::Failed)
    );
    out
}

fn cell(label: String, cert: Option<&Certificate>) -> Cell {
    Cell {
        label,
        status: if cert.is_some() {
            Status::Certified
        } else {
            Status::Inconclusive
        },
        certificate: cert.map(Certificate::digest),
        detail: None,
    }
}

pub fn verify(g: &GlobalArgs, theorem: Theorem) -> Result<Status> {
    let start = Instant::now();
    let budget = budget(g)?;
    let (name, params, _certs, cells) = match theorem {
        Theorem::Algadd {
            p1,
            p2,
            length,
            knots,
        } => {
            let length = length.unwrap_or(budget.max_word_length);
            let params = json!({ "p1": p1, "p2": p2, "length": length, "knots": knots });
            let hash = dihedral_product_group(p1, p2)?.hash();
            let knot_specs = knots
                .as_ref()
                .map(|ks| {
                    ks.iter()
                        .map(|k| k.parse::<KnotSpec>())
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let op = format!(
                "verify/algadd/{p1}/{p2}/{length}/{}",
                knot_specs.as_ref().map_or(String::new(), |ks| {
                    ks.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("#")
                })
            );
            let cat = catalog(g)?;
            let (certs, cells) = cached(g, &op, &hash, &budget, || {
                let dp = DihedralProduct::new(p1, p2)?;
                let words: Vec<Word> = dp
                    .alternating_words(length)
                    .iter()
                    .map(|w| free_product_word(w))
                    .collect();
                let results = words
                    .par_iter()
                    .map(|w| verify_freiheitssatz_instance(p1, p2, w, &budget))
                    .collect::<std::result::Result<Vec<_>, Error>>()?;
                let mut cells: Vec<Cell> = words
                    .iter()
                    .zip(&results)
                    .map(|(w, c)| cell(format!("g = {w}"), c.as_ref()))
                    .collect();
                let mut certs: Vec<Certificate> = results.into_iter().flatten().collect();
                if let Some(ks) = &knot_specs {
                    let a = ks[0].resolve(&cat)?.presentation;
                    let b = ks[1].resolve(&cat)?.presentation;
                    let c = lower_bound_afw_two(&a, &b, &budget.with_word_length(length));
                    cells.push(cell(
                        format!("a_fw >= 2 for sum({}, {})", ks[0], ks[1]),
                        c.as_ref(),
                    ));
                    certs.extend(c);
                }
                Ok((certs, cells))
            })?;
            ("algadd", params, certs, cells)
        }
        Theorem::Nonadd { knots, js, c_max } => {
            if knots.len() != js.len() {
                return Err(CliError::Params(format!(
                    "{} knots but {} twist indices",
                    knots.len(),
                    js.len()
                )));
            }
            let cat = catalog(g)?;
            let specs = knots
                .iter()
                .map(|k| k.parse::<KnotSpec>())
                .collect::<Result<Vec<_>>>()?;
            let mut ps = Vec::new();
            for (s, &j) in specs.iter().zip(&js) {
                if !s.is_classical() {
                    return Err(CliError::Params(format!("`{s}` is not a classical knot")));
                }
                ps.push(twist_spin(&s.resolve(&cat)?.presentation, j as u32));
            }
            let params = json!({ "knots": knots, "js": js, "c_max": c_max });
            let sum = ps
                .iter()
                .skip(1)
                .fold(ps[0].clone(), |acc, p| connected_sum(&acc, p));
            let labels: Vec<String> = specs
                .iter()
                .zip(&js)
                .map(|(s, j)| format!("tspin({s}, {j})"))
                .collect();
            let op = format!("verify/nonadd/c{c_max}/{}", labels.join("#"));
            let (certs, cells) = cached(g, &op, &sum.hash(), &budget, || {
                let na = verify_nonadditivity(&ps, &js, c_max, &budget)?;
                let mut cells = vec![
                    cell(format!("a_st <= {c_max} for the sum"), na.a_st.as_ref()),
                    cell(format!("a_fw <= {c_max} for the sum"), na.a_fw.as_ref()),
                ];
                let mut certs: Vec<Certificate> = na.a_st.into_iter().chain(na.a_fw).collect();
                for (label, p) in labels.iter().zip(&ps) {
                    let c = certify_nonabelian_quotient(p, &[], &budget);
                    cells.push(cell(
                        format!("{label} has a nonabelian quotient"),
                        c.as_ref(),
                    ));
                    certs.extend(c);
                }
                Ok((certs, cells))
            })?;
            ("nonadd", params, certs, cells)
        }
        Theorem::Fusion {
            n,
            seeds,
            seed,
            length,
        } => {
            let params = json!({ "n": n, "seeds": seeds, "seed": seed, "length": length });
            let mut certs = Vec::new();
            let mut cells = Vec::new();
            for s in seed..seed + seeds {
                let ws = random_conjugators(n, length, s);
                let label = format!(
                    "seed {s}: ribbon({n}; {})",
                    ws.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                let p = knotgroup::constructors::ribbon_presentation(n, &ws)?;
                let (cs, c): (Vec<Certificate>, Cell) =
                    cached(g, &format!("verify/fusion/{n}"), &p.hash(), &budget, || {
                        let cert = verify_fusion_bound(&ws, &budget)?;
                        let c = cell(label.clone(), cert.as_ref());
                        Ok((cert.into_iter().collect(), c))
                    })?;
                certs.extend(cs);
                cells.push(c);
            }
            ("fusion", params, certs, cells)
        }
        Theorem::Inequalities { specs } => {
            let cat = catalog(g)?;
            let specs = if specs.is_empty() {
                default_inequality_specs(&cat)
            } else {
                specs
            };
            let params = json!({ "specs": specs });
            let mut certs = Vec::new();
            let mut cells = Vec::new();
            for text in &specs {
                let spec: KnotSpec = text.parse()?;
                let r = spec.resolve(&cat)?;
                let options = ReportOptions {
                    summands: r.summands.clone(),
                    c_max: 2,
                    construction: r.construction.clone(),
                };
                match invariant_report(&r.presentation, &options, &budget) {
                    Ok(report) => {
                        let bounds: Vec<String> = report
                            .invariants
                            .iter()
                            .map(|b| {
                                let up =
                                    b.upper.as_ref().map_or("-".into(), |u| u.value.to_string());
                                format!("{} in [{}, {}]", b.invariant, b.lower.value, up)
                            })
                            .collect();
                        cells.push(Cell {
                            label: spec.to_string(),
                            status: Status::Certified,
                            certificate: None,
                            detail: Some(bounds.join(", ")),
                        });
                        certs.extend(report.certificates);
                    }
                    Err(e @ Error::ChainViolation(_)) => cells.push(Cell {
                        label: spec.to_string(),
                        status: Status::Failed,
                        certificate: None,
                        detail: Some(e.to_string()),
                    }),
                    Err(e) => return Err(e.into()),
                }
            }
            ("inequalities", params, certs, cells)
        }
    };
    let mut doc = VerifyDocument::new(name, params, cells, budget);
    doc.wall_time_secs = start.elapsed().as_secs_f64();
    emit(g, &doc, || human_cells(&doc))?;
    Ok(doc.status)
}

fn random_conjugators(n: usize, length: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Word::reduce(
                (0..length).map(|_| (rng.gen_range(0..=n), if rng.gen_bool(0.5) { 1 } else { -1 })),
            )
        })
        .collect()
}

fn default_inequality_specs(cat: &Catalog) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for k in cat.names() {
        out.push(k.to_string());
        out.extend((1..=3).map(|n| format!("tspin({k}, {n})")));
    }
    out.extend(
        [
            "sum(tspin(3_1, 2), tspin(5_1, 2))",
            "sum(tspin(3_1, 2), tspin(3_1, 3))",
            "sum(tspin(3_1, 2), tspin(3_1, 2))",
            "sum(tspin(3_1, 2), tspin(3_1, 2), tspin(3_1, 2))",
            "ribbon(2; 1, 1)",
        ]
        .map(String::from),
    );
    out
}

pub fn cache(g: &GlobalArgs, action: CacheAction) -> Result<Status> {
    let cache = CertificateCache::locate(g.cache_dir.as_deref())?;
    match action {
        CacheAction::List => {
            let entries = cache.list()?;
            let broken = entries.iter().any(|e| e.is_err());
            let doc: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| match e {
                    Ok(l) => serde_json::to_value(l).expect("serializable"),
                    Err((key, msg)) => json!({ "key": key, "error": msg }),
                })
                .collect();
            emit(g, &doc, || {
                let mut out = format!("cache {}\n", cache.dir().display());
                for e in &entries {
                    match e {
                        Ok(l) => {
                            out += &format!(
                                "  {}  {}  {} certificates\n",
                                &l.key[..16],
                                l.operation,
                                l.certificates
                            )
                        }
                        Err((key, msg)) => out += &format!("  {key}  unreadable: {msg}\n"),
                    }
                }
                out += &format!("{} entries\n", entries.len());
                out
            })?;
            Ok(if broken {
                Status::Failed
            } else {
                Status::Certified
            })
        }
        CacheAction::Gc { max_age } => {
            let removed = cache.gc(Duration::from_secs(max_age))?;
            emit(g, &json!({ "removed": removed }), || {
                format!("removed {removed} entries\n")
            })?;
            Ok(Status::Certified)
        }
        CacheAction::Verify => {
            let check = cache.verify()?;
            emit(g, &check, || {
                let mut out = format!("{} certificates checked\n", check.checked);
                for (key, msg) in &check.failures {
                    out += &format!("  {key}: {msg}\n");
                }
                out
            })?;
            Ok(if check.failures.is_empty() {
                Status::Certified
            } else {
                Status::Failed
            })
        }
    }
}
