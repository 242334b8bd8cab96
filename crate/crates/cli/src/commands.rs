use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use idemfact::dvd::factor_singular_dvd;
use idemfact::factorization::IdempotentFactorization;
use idemfact::field::factor_singular_field;
use idemfact::json::{matrix_to_json, FactorizationJson, MatrixJson, RingJson};
use idemfact::oracle::{singular_monoid, verify_factorization, MonoidSnapshot};
use idemfact::preorder::{
    factor_into_irreducibles, factor_into_quarks, irreducibles_of_degree, quarks, FiniteMonoid, PreorderView,
};
use idemfact::sample::MatrixSampler;
use idemfact::{Matrix, Ring, RingKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::args::{AnalyzeArgs, BatchArgs, Command, FactorArgs, RingArgs, VerifyArgs};
use crate::report::{digest, RunReport, Status};

/// Problems with the input; all map to exit status 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] idemfact::Error),
    #[error("{0}")]
    Usage(String),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Core(e.into())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, InputError> {
    fs::read(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn text(bytes: &[u8]) -> Result<&str, InputError> {
    std::str::from_utf8(bytes).map_err(|_| InputError::Usage("input is not UTF-8".into()))
}

pub fn run(command: &Command) -> RunReport {
    match command {
        Command::Factor(a) => cmd_factor(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Batch(a) => cmd_batch(a),
    }
}

fn ring_echo(ring: &RingArgs) -> Vec<String> {
    let mut v = Vec::new();
    if let Some(r) = ring.ring {
        v.push("--ring".into());
        v.push(format!("{:?}", RingKind::from(r)));
    }
    if let Some(p) = ring.p {
        v.push("--p".into());
        v.push(p.to_string());
    }
    v
}

fn ring_override(ring: &RingArgs) -> Option<RingJson> {
    ring.ring.map(|r| RingJson {
        kind: r.into(),
        p: ring.p,
    })
}

/// Field pipeline for `Q` and `F_p`, local pipeline for `Z_(p)`.
pub fn factor_matrix(a: &Matrix) -> idemfact::Result<IdempotentFactorization> {
    match a.ring().kind() {
        RingKind::Zp => factor_singular_dvd(a),
        RingKind::Q | RingKind::Fp => factor_singular_field(a),
    }
}

fn parse_matrix(bytes: &[u8], ring: Option<&RingJson>) -> Result<Matrix, InputError> {
    let mut value: serde_json::Value = serde_json::from_slice(bytes)?;
    if let (Some(r), Some(obj)) = (ring, value.as_object_mut()) {
        obj.insert("ring".into(), serde_json::to_value(r)?);
    }
    Ok(serde_json::from_value::<MatrixJson>(value)?.to_matrix()?)
}

fn factor_bytes(mut report: RunReport, bytes: &[u8], ring: Option<&RingJson>) -> RunReport {
    let fz = match parse_matrix(bytes, ring).and_then(|a| Ok(factor_matrix(&a)?)) {
        Ok(fz) => fz,
        Err(e) => return report.fail(Status::InvalidInput, e.to_string()),
    };
    let n = fz.target.n();
    report.output = Some(serde_json::to_value(FactorizationJson::from(&fz)).expect("factorizations serialize"));
    report.verified(verify_factorization(&fz.target, &fz.factors, n - 1, Some(fz.bound)))
}

pub fn cmd_factor(args: &FactorArgs) -> RunReport {
    let mut command = vec!["factor".into(), "--input".into(), args.input.display().to_string()];
    command.extend(ring_echo(&args.ring));
    let bytes = match read(&args.input) {
        Ok(b) => b,
        Err(e) => return RunReport::new(command, String::new()).fail(Status::InvalidInput, e.to_string()),
    };
    let report = RunReport::new(command, digest(&bytes));
    factor_bytes(report, &bytes, ring_override(&args.ring).as_ref())
}

pub fn cmd_verify(args: &VerifyArgs) -> RunReport {
    let command = vec!["verify".into(), "--input".into(), args.input.display().to_string()];
    let bytes = match read(&args.input) {
        Ok(b) => b,
        Err(e) => return RunReport::new(command, String::new()).fail(Status::InvalidInput, e.to_string()),
    };
    let report = RunReport::new(command, digest(&bytes));
    let parsed = serde_json::from_slice::<FactorizationJson>(&bytes)
        .map_err(InputError::from)
        .and_then(|f| Ok(f.to_factorization()?));
    match parsed {
        Ok(fz) => {
            let n = fz.target.n();
            report.verified(verify_factorization(
                &fz.target,
                &fz.factors,
                n.saturating_sub(1),
                Some(fz.bound),
            ))
        }
        Err(e) => report.fail(Status::InvalidInput, e.to_string()),
    }
}

/// Bound checks reported by `analyze`. Matrix-specific checks are absent
/// for an abstract Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisChecks {
    /// Degree-2 irreducible factorizations have length at most `2^(hgt-1)`.
    pub irreducible_bound: bool,
    /// Quark factorizations exist and have length at most `hgt`.
    pub quark_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quarks_are_coprimitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights_match_oracle: Option<bool>,
    /// Every height is at most `n - dim fix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<bool>,
    /// Some element needs exactly `n` idempotent factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharp: Option<bool>,
}

impl AnalysisChecks {
    fn failed(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let all = [
            ("irreducible_bound", Some(self.irreducible_bound)),
            ("quark_bound", Some(self.quark_bound)),
            ("quarks_are_coprimitive", self.quarks_are_coprimitive),
            ("heights_match_oracle", self.heights_match_oracle),
            ("height_bound", self.height_bound),
            ("sharp", self.sharp),
        ];
        for (name, v) in all {
            if v == Some(false) {
                out.push(name);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub monoid: String,
    pub size: usize,
    pub identity: usize,
    pub quarks: Vec<String>,
    pub irreducibles: Vec<String>,
    pub heights: Vec<usize>,
    /// Largest minimum number of non-identity idempotent factors.
    pub depth: usize,
    pub generated_by_idempotents: bool,
    pub checks: AnalysisChecks,
}

/// Minimum word lengths over the non-identity idempotents, by breadth-first
/// search with right multiplication.
pub fn idempotent_lengths(h: &FiniteMonoid) -> Vec<Option<usize>> {
    let id = h.identity();
    let gens: Vec<usize> = (0..h.size()).filter(|&e| e != id && h.mul(e, e) == e).collect();
    let mut dist = vec![None; h.size()];
    let mut queue = VecDeque::new();
    for &e in &gens {
        dist[e] = Some(1);
        queue.push_back(e);
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x].expect("queued elements have a distance");
        for &e in &gens {
            let y = h.mul(x, e);
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

fn length_checks(view: &PreorderView) -> (bool, bool) {
    let h = view.monoid();
    let mut irreducible = true;
    let mut quark = true;
    for x in view.non_units() {
        let hgt = view.height(x);
        irreducible &=
            factor_into_irreducibles(view, x, 2).is_ok_and(|f| h.product(&f) == x && f.len() <= 1 << (hgt - 1));
        quark &= factor_into_quarks(view, x, 2)
            .is_ok_and(|f| h.product(&f) == x && f.len() <= hgt && f.iter().all(|&q| view.is_quark(q)));
    }
    (irreducible, quark)
}

pub fn analyze(view: &PreorderView, name: String, snap: Option<&MonoidSnapshot>) -> Analysis {
    let h = view.monoid();
    let labels = |set: &mut dyn Iterator<Item = usize>| set.map(|i| h.label(i).to_string()).collect::<Vec<_>>();
    let quark_set = quarks(view);
    let (irreducible_bound, quark_bound) = length_checks(view);
    let lengths = idempotent_lengths(h);
    let depth = lengths.iter().flatten().copied().max().unwrap_or(0);
    let generated = view.non_units().all(|x| lengths[x].is_some());
    let mut checks = AnalysisChecks {
        irreducible_bound,
        quark_bound,
        quarks_are_coprimitive: None,
        heights_match_oracle: None,
        height_bound: None,
        sharp: None,
    };
    if let Some(s) = snap {
        let n = s.n();
        let coprimitive: Vec<usize> = (0..s.size())
            .filter(|&x| s.is_idempotent(x) && s.rank(x) + 1 == n)
            .collect();
        checks.quarks_are_coprimitive = Some(quark_set.ones().eq(coprimitive));
        checks.heights_match_oracle = Some(view.heights() == s.heights());
        checks.height_bound = Some((0..s.size()).all(|x| s.heights()[x] + s.to_matrix(x).fix_basis().rank() <= n));
        checks.sharp = Some(s.idempotent_depth().depth == n);
    }
    Analysis {
        monoid: name,
        size: h.size(),
        identity: h.identity(),
        quarks: labels(&mut quark_set.ones()),
        irreducibles: labels(&mut irreducibles_of_degree(view, 2).ones()),
        heights: view.heights().to_vec(),
        depth,
        generated_by_idempotents: generated,
        checks,
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> RunReport {
    let (command, digest_input, loaded) = match (&args.cayley, args.field, args.size) {
        (Some(path), _, _) => {
            let command = vec!["analyze".into(), "--cayley".into(), path.display().to_string()];
            match read(path) {
                Ok(bytes) => {
                    let loaded = text(&bytes)
                        .and_then(|t| Ok(FiniteMonoid::from_json(t)?))
                        .map(|m| (m, "cayley table".to_string(), None));
                    (command, bytes, loaded)
                }
                Err(e) => (command, Vec::new(), Err(e)),
            }
        }
        (None, Some(q), Some(n)) => {
            let command = vec![
                "analyze".into(),
                "--field".into(),
                q.to_string(),
                "--size".into(),
                n.to_string(),
            ];
            let loaded = singular_monoid(q, n)
                .map(|s| (s.monoid(), format!("M_{n}(F_{q})^#"), Some(s)))
                .map_err(InputError::from);
            (command, format!("field={q};size={n}").into_bytes(), loaded)
        }
        _ => {
            let err = InputError::Usage("analyze needs --field and --size, or --cayley".into());
            return RunReport::new(vec!["analyze".into()], String::new()).fail(Status::InvalidInput, err.to_string());
        }
    };
    let mut report = RunReport::new(command, digest(&digest_input));
    let (monoid, name, snap) = match loaded {
        Ok(x) => x,
        Err(e) => return report.fail(Status::InvalidInput, e.to_string()),
    };
    let view = PreorderView::new(monoid);
    let analysis = analyze(&view, name, snap.as_ref());
    let failed = analysis.checks.failed();
    report.output = Some(serde_json::to_value(&analysis).expect("analyses serialize"));
    failed.into_iter().fold(report, |r, name| {
        r.fail(Status::VerificationFailed, format!("check failed: {name}"))
    })
}

/// One entry of a batch run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    pub name: String,
    pub report: RunReport,
}

fn batch_inputs(args: &BatchArgs) -> Result<Vec<(String, Vec<u8>)>, InputError> {
    if let Some(dir) = &args.input {
        let entries = fs::read_dir(dir).map_err(|source| InputError::Read {
            path: dir.display().to_string(),
            source,
        })?;
        let mut paths = Vec::new();
        for entry in entries {
            let path = entry
                .map_err(|source| InputError::Read {
                    path: dir.display().to_string(),
                    source,
                })?
                .path();
            if path.extension().is_some_and(|e| e == "json") {
                paths.push(path);
            }
        }
        paths.sort();
        return paths
            .iter()
            .map(|p| Ok((p.file_name().unwrap().to_string_lossy().into_owned(), read(p)?)))
            .collect();
    }
    let count = args.generate.unwrap_or(0);
    let ring_json = ring_override(&args.ring).ok_or_else(|| InputError::Usage("--generate needs --ring".into()))?;
    let ring: Ring = ring_json.to_ring()?;
    if args.size == 0 {
        return Err(InputError::Usage("--size must be positive".into()));
    }
    let mut sampler = MatrixSampler::new(ring, args.seed);
    Ok((0..count)
        .map(|i| {
            (
                format!("random-{i:04}"),
                matrix_to_json(&sampler.singular(args.size)).into_bytes(),
            )
        })
        .collect())
}

/// `--jobs` only changes scheduling; it is left out of the echo so the
/// report does not depend on it.
pub fn cmd_batch(args: &BatchArgs) -> RunReport {
    let mut command: Vec<String> = vec!["batch".into()];
    match (&args.input, args.generate) {
        (Some(dir), _) => {
            command.extend(["--input".into(), dir.display().to_string()]);
            command.extend(ring_echo(&args.ring));
        }
        (None, count) => {
            command.extend([
                "--generate".into(),
                count.unwrap_or(0).to_string(),
                "--size".into(),
                args.size.to_string(),
            ]);
            command.extend(ring_echo(&args.ring));
            command.extend(["--seed".into(), args.seed.to_string()]);
        }
    }
    let inputs = match batch_inputs(args) {
        Ok(i) => i,
        Err(e) => return RunReport::new(command, String::new()).fail(Status::InvalidInput, e.to_string()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return RunReport::new(command, String::new()).fail(Status::InvalidInput, e.to_string()),
    };
    let ring = if args.input.is_some() {
        ring_override(&args.ring)
    } else {
        None
    };
    let items: Vec<BatchItem> = pool.install(|| {
        inputs
            .par_iter()
            .map(|(name, bytes)| {
                let item = RunReport::new(vec!["factor".into(), name.clone()], digest(bytes));
                BatchItem {
                    name: name.clone(),
                    report: factor_bytes(item, bytes, ring.as_ref()),
                }
            })
            .collect()
    });
    let joined: Vec<&str> = items.iter().map(|i| i.report.input_digest.as_str()).collect();
    let mut report = RunReport::new(command, digest(joined.join("\n").as_bytes()));
    for item in &items {
        for m in &item.report.messages {
            report = report.fail(item.report.status, format!("{}: {m}", item.name));
        }
    }
    report.output = Some(serde_json::json!({ "items": items }));
    report
}
