//! On-disk cache of correlator densities.
//!
//! One file per `(q, r, g, n)`, named `w_q{q}_r{r}_g{g}_n{n}.v{version}.qrc`:
//!
//! ```text
//! qrlab-correlator 1
//! q 1
//! r 1
//! g 0
//! n 3
//! pden 2 2 2
//! pair 0 1 2
//! term 0 0 1 -1/3
//! end
//! ```
//!
//! `pden` holds the exponents of `N z_i^N - 1`, each `pair i j e` a factor
//! `(z_i - z_j)^e`, and each `term` the exponents and coefficient of one
//! numerator monomial. Terms are sorted and coefficients reduced, so a parsed
//! file serializes back to the same bytes. Densities are exact rational
//! functions, so no truncation order enters the key.
//!
//! A file is trusted only after symmetry, the linear and quadratic loop
//! equations and the projection property hold for it.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use hurwitz_core::arith::{format_rational, parse_rational, rat};
use hurwitz_core::spectral::{check_linear_loop, check_projection, check_quadratic_loop, CorrelatorStore, GlobalRat, QPoly, SpectralCurve};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "qrlab-correlator";
const EXTENSION: &str = "qrc";

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub q: u32,
    pub r: u32,
    pub g: u32,
    pub n: usize,
    pub density: GlobalRat,
}

pub fn serialize(e: &Entry) -> String {
    let f = &e.density;
    let mut s = format!("{MAGIC} {FORMAT_VERSION}\nq {}\nr {}\ng {}\nn {}\n", e.q, e.r, e.g, e.n);
    s.push_str(&format!("pden {}\n", join(f.pden())));
    for (&(i, j), &k) in f.pairs() {
        s.push_str(&format!("pair {i} {j} {k}\n"));
    }
    for (exps, c) in f.num().terms() {
        s.push_str(&format!("term {} {}\n", join(exps), format_rational(c)));
    }
    s.push_str("end\n");
    s
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses a cache file, rejecting anything that would not serialize back to
/// the same text.
pub fn parse(text: &str) -> Result<Entry> {
    let mut lines = text.lines();
    let mut next = |what: &str| lines.next().ok_or_else(|| anyhow!("missing {what} line"));
    let header = next("header")?;
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| anyhow!("not a correlator file: {header:?}"))?;
    if version != FORMAT_VERSION {
        bail!("format version {version}, expected {FORMAT_VERSION}");
    }
    let mut field = |name: &str| -> Result<u64> {
        let line = next(name)?;
        let v = line.strip_prefix(name).and_then(|v| v.strip_prefix(' ')).ok_or_else(|| anyhow!("expected {name}, got {line:?}"))?;
        v.parse().with_context(|| format!("bad {name} value {v:?}"))
    };
    let (q, r, g, n) = (field("q")? as u32, field("r")? as u32, field("g")? as u32, field("n")? as usize);
    let numbers = |s: &str| -> Result<Vec<u32>> {
        s.split(' ').filter(|x| !x.is_empty()).map(|x| x.parse().with_context(|| format!("bad integer {x:?}"))).collect()
    };
    let pden_line = next("pden")?;
    let pden = numbers(pden_line.strip_prefix("pden").ok_or_else(|| anyhow!("expected pden, got {pden_line:?}"))?)?;
    if pden.len() != n {
        bail!("pden has {} entries, n = {n}", pden.len());
    }
    let mut pairs = BTreeMap::new();
    let mut num = QPoly::zero(n);
    let mut last: Option<Vec<u32>> = None;
    let mut ended = false;
    for line in lines.by_ref() {
        if line == "end" {
            ended = true;
            break;
        }
        if let Some(rest) = line.strip_prefix("pair ") {
            let v = numbers(rest)?;
            let [i, j, k] = v[..] else { bail!("bad pair line {line:?}") };
            if k == 0 || pairs.insert((i as usize, j as usize), k).is_some() || !num.is_zero() {
                bail!("bad pair line {line:?}");
            }
        } else if let Some(rest) = line.strip_prefix("term ") {
            let (exps, coeff) = rest.rsplit_once(' ').ok_or_else(|| anyhow!("bad term line {line:?}"))?;
            let exps = numbers(exps)?;
            let c = parse_rational(coeff).map_err(|e| anyhow!("{e}"))?;
            if exps.len() != n || format_rational(&c) != coeff || is_zero(&c) {
                bail!("bad term line {line:?}");
            }
            if last.as_ref().is_some_and(|l| *l >= exps) {
                bail!("terms out of order at {line:?}");
            }
            last = Some(exps.clone());
            num.add_term(exps, c);
        } else {
            bail!("unexpected line {line:?}");
        }
    }
    if !ended {
        bail!("missing end line");
    }
    if lines.next().is_some() {
        bail!("data after end line");
    }
    let density = GlobalRat::from_parts(num, pden, pairs).map_err(|e| anyhow!("{e}"))?;
    let entry = Entry { q, r, g, n, density };
    if serialize(&entry) != text {
        bail!("not in canonical form");
    }
    Ok(entry)
}

fn is_zero(c: &hurwitz_core::Rational) -> bool {
    *c == rat(0, 1)
}

/// Symmetry, the linear loop equation and the projection property of a
/// loaded density, checked on its own.
pub fn verify_entry(e: &Entry) -> Result<()> {
    if e.q == 0 || e.r == 0 || e.n == 0 || (e.g == 0 && e.n <= 2) {
        bail!("(g, n) = ({}, {}) with q = {}, r = {} is not a cached correlator", e.g, e.n, e.q, e.r);
    }
    let curve = SpectralCurve::new(e.q, e.r);
    if !e.density.is_symmetric(curve.n()) {
        bail!("not symmetric");
    }
    let mut store = CorrelatorStore::new(curve);
    store.replace(e.g, e.n, e.density.clone());
    let lle = check_linear_loop(&mut store, e.g, e.n).map_err(|err| anyhow!("{err}"))?;
    if !lle.passed() {
        bail!("linear loop equation fails");
    }
    if !check_projection(&mut store, e.g, e.n).map_err(|err| anyhow!("{err}"))? {
        bail!("projection property fails");
    }
    Ok(())
}

/// Outcome of checking one file.
#[derive(Debug)]
pub struct FileStatus {
    pub path: PathBuf,
    pub result: Result<Entry>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, q: u32, r: u32, g: u32, n: usize) -> PathBuf {
        self.dir.join(format!("w_q{q}_r{r}_g{g}_n{n}.v{FORMAT_VERSION}.{EXTENSION}"))
    }

    /// Every cache file in the directory, of any format version, sorted.
    pub fn files(&self) -> Result<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for item in fs::read_dir(&self.dir).with_context(|| format!("reading {}", self.dir.display()))? {
            let path = item?.path();
            let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
            if name.starts_with("w_q") && path.extension().is_some_and(|x| x == EXTENSION) {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Reads and verifies one file; the file name must match its contents.
    pub fn check_file(&self, path: &Path) -> Result<Entry> {
        let text = fs::read_to_string(path)?;
        let e = parse(&text)?;
        if self.path(e.q, e.r, e.g, e.n).file_name() != path.file_name() {
            bail!("contents are for q={} r={} g={} n={}", e.q, e.r, e.g, e.n);
        }
        verify_entry(&e)?;
        Ok(e)
    }

    pub fn verify(&self) -> Result<Vec<FileStatus>> {
        Ok(verify_files(self, self.files()?, &mut BTreeMap::new()))
    }

    /// Writes one entry through a temporary file renamed into place.
    pub fn save(&self, e: &Entry) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let path = self.path(e.q, e.r, e.g, e.n);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serialize(e).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|err| anyhow!("replacing {}: {}", path.display(), err.error))?;
        Ok(path)
    }

    /// Loads every valid cached density for the store's curve. Files that
    /// fail verification are skipped and returned with the reason.
    pub fn load_into(&self, store: &mut CorrelatorStore) -> Result<Vec<(PathBuf, String)>> {
        let curve = store.curve();
        let prefix = format!("w_q{}_r{}_", curve.q, curve.r);
        let suffix = format!(".v{FORMAT_VERSION}.{EXTENSION}");
        let files: Vec<PathBuf> = self
            .files()?
            .into_iter()
            .filter(|p| p.file_name().and_then(|s| s.to_str()).is_some_and(|n| n.starts_with(&prefix) && n.ends_with(&suffix)))
            .collect();
        let mut stores = BTreeMap::from([((curve.q, curve.r), std::mem::replace(store, CorrelatorStore::new(curve)))]);
        let statuses = verify_files(self, files, &mut stores);
        *store = stores.remove(&(curve.q, curve.r)).expect("inserted above");
        Ok(statuses.into_iter().filter_map(|s| s.result.err().map(|e| (s.path, format!("{e:#}")))).collect())
    }

    /// Writes every stable density of the store that is not on disk yet.
    pub fn save_from(&self, store: &CorrelatorStore) -> Result<usize> {
        let curve = store.curve();
        let mut written = 0;
        for ((g, n), f) in store.entries() {
            if g == 0 && n <= 2 || self.path(curve.q, curve.r, g, n).exists() {
                continue;
            }
            self.save(&Entry { q: curve.q, r: curve.r, g, n, density: f.clone() })?;
            written += 1;
        }
        Ok(written)
    }

    /// Removes every cache file and returns how many there were.
    pub fn clear(&self) -> Result<usize> {
        let files = self.files()?;
        for f in &files {
            fs::remove_file(f).with_context(|| format!("removing {}", f.display()))?;
        }
        Ok(files.len())
    }
}

/// Checks each file on its own, then runs the quadratic loop equation whose
/// top correlator is the cached one. The first stage is linear in the
/// density, so it cannot see a rescaled file; the quadratic equation can.
/// Files are taken in order of `2g - 2 + n`, so the lower correlators it
/// uses are either verified already or recomputed. Verified densities are
/// left in `stores`.
fn verify_files(
    cache: &Cache,
    files: Vec<PathBuf>,
    stores: &mut BTreeMap<(u32, u32), CorrelatorStore>,
) -> Vec<FileStatus> {
    let mut statuses: Vec<FileStatus> =
        files.into_iter().map(|path| FileStatus { result: cache.check_file(&path), path }).collect();
    let mut order: Vec<usize> = (0..statuses.len()).filter(|&i| statuses[i].result.is_ok()).collect();
    order.sort_by_key(|&i| {
        let e = statuses[i].result.as_ref().expect("filtered");
        (e.q, e.r, 2 * e.g as usize + e.n, e.g)
    });
    for i in order {
        let e = statuses[i].result.as_ref().expect("filtered");
        let (g, n) = (e.g, e.n);
        let store = stores.entry((e.q, e.r)).or_insert_with(|| CorrelatorStore::new(SpectralCurve::new(e.q, e.r)));
        store.replace(g, n, e.density.clone());
        let verdict = match check_quadratic_loop(store, g, n - 1) {
            Ok(rep) if rep.passed() => None,
            Ok(_) => Some(anyhow!("quadratic loop equation fails")),
            Err(err) => Some(anyhow!("{err}")),
        };
        if let Some(err) = verdict {
            store.forget(g, n);
            statuses[i].result = Err(err);
        }
    }
    statuses
}
