use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qsqrt::{fraction_string, parse_fraction, QSqrtValue};

/// Append-only store of exact central values, one file per field:
/// `<coeffs> <x> <y>` per line, the value being `x + y q^(-1/2)`.
#[derive(Debug)]
pub struct LValueCache {
    path: PathBuf,
    q: u32,
    values: HashMap<String, QSqrtValue>,
    pending: Vec<(String, QSqrtValue)>,
    rebuilt: bool,
}

impl LValueCache {
    pub fn file_name(q: u32) -> String {
        format!("lvalues_q{q}.txt")
    }

    /// Loads the cache for `q` under `dir`. A malformed file is discarded
    /// with a warning and rebuilt from scratch.
    pub fn open(dir: &Path, q: u32) -> Result<LValueCache> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(Self::file_name(q));
        let mut cache = LValueCache {
            path,
            q,
            values: HashMap::new(),
            pending: Vec::new(),
            rebuilt: false,
        };
        if !cache.path.exists() {
            return Ok(cache);
        }
        match cache.load() {
            Ok(values) => cache.values = values,
            Err(reason) => {
                log::warn!(
                    "L-value cache {} is corrupt ({reason}); rebuilding",
                    cache.path.display()
                );
                File::create(&cache.path).map_err(|e| Error::io(&cache.path, e))?;
                cache.rebuilt = true;
            }
        }
        Ok(cache)
    }

    fn load(&self) -> std::result::Result<HashMap<String, QSqrtValue>, String> {
        let file = File::open(&self.path).map_err(|e| e.to_string())?;
        let mut values = HashMap::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [coeffs, x, y] = fields[..] else {
                return Err(format!("line {}: expected 3 fields", n + 1));
            };
            if coeffs.split(',').any(|c| c.parse::<u32>().map_or(true, |c| c >= self.q)) {
                return Err(format!("line {}: bad coefficients {coeffs:?}", n + 1));
            }
            let value = QSqrtValue::new(
                self.q,
                parse_fraction(x).map_err(|e| format!("line {}: {e}", n + 1))?,
                parse_fraction(y).map_err(|e| format!("line {}: {e}", n + 1))?,
            );
            if let Some(old) = values.insert(coeffs.to_string(), value.clone()) {
                if old != value {
                    return Err(format!("line {}: conflicting value for {coeffs}", n + 1));
                }
            }
        }
        Ok(values)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Whether a corrupt file was discarded on open.
    pub fn was_rebuilt(&self) -> bool {
        self.rebuilt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, p: &Poly) -> Option<&QSqrtValue> {
        self.values.get(&p.to_coeff_string())
    }

    pub fn insert(&mut self, p: &Poly, value: QSqrtValue) {
        let key = p.to_coeff_string();
        if !self.values.contains_key(&key) {
            self.pending.push((key.clone(), value.clone()));
            self.values.insert(key, value);
        }
    }

    /// Appends every value inserted since the last flush.
    pub fn flush(&mut self) -> Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        let mut out = BufWriter::new(file);
        for (key, v) in self.pending.drain(..) {
            writeln!(
                out,
                "{key} {} {}",
                fraction_string(v.rational_part()),
                fraction_string(v.sqrt_part())
            )
            .map_err(|e| Error::io(&self.path, e))?;
        }
        out.flush().map_err(|e| Error::io(&self.path, e))
    }
}
