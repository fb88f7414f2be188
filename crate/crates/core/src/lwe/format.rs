//! Line-oriented text serialization of batches and challenges.
//!
//! A batch looks like
//!
//! ```text
//! lwe-batch v1 n=2 m=3 q=8 F=64 noise=gaussian:0.05 first_errorless=0 transparent=1 provenance=lwe
//! 3 5 2b0c9a0e4f5d1e00 e=0.0123
//! ...
//! secret 1 7
//! ```
//!
//! with one line per sample: `n` residues, then `b` as a zero-padded hex
//! fraction of `ceil(F/4)` digits, then (transparent batches only) the error.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};

use super::batch::{LweSample, SampleBatch, Transparent};
use super::extlwe::{ExtLweChallenge, ExtLweTransparent};
use super::params::{LweParams, NoiseSpec};
use crate::arith::TorusElem;
use crate::error::{Error, Result};

const BATCH_MAGIC: &str = "lwe-batch";
const CHALLENGE_MAGIC: &str = "extlwe";

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_batch(batch: &SampleBatch) -> String {
    let p = &batch.params;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{BATCH_MAGIC} v1 n={} m={} q={} F={} noise={} first_errorless={} transparent={} provenance={}",
        p.n,
        batch.samples.len(),
        p.q,
        p.bits,
        p.noise,
        batch.first_errorless as u8,
        batch.transparent.is_some() as u8,
        if batch.provenance.is_empty() {
            "-".to_string()
        } else {
            batch.provenance.join(",")
        },
    );
    for (i, s) in batch.samples.iter().enumerate() {
        let _ = write!(out, "{} {}", join(&s.a), s.b.to_hex());
        if let Some(t) = &batch.transparent {
            let _ = write!(out, " e={:?}", t.noise[i]);
        }
        out.push('\n');
    }
    if let Some(t) = &batch.transparent {
        let _ = writeln!(out, "secret {}", join(&t.secret));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header_fields<'a>(line: &'a str, magic: &str) -> Result<HashMap<&'a str, &'a str>> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some(magic) || toks.next() != Some("v1") {
        return Err(parse_err(1, format!("expected header starting with `{magic} v1`")));
    }
    toks.map(|t| {
        t.split_once('=')
            .ok_or_else(|| parse_err(1, format!("header token {t:?} is not key=value")))
    })
    .collect()
}

fn field<'a>(h: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str> {
    h.get(key)
        .copied()
        .ok_or_else(|| parse_err(1, format!("header is missing `{key}`")))
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| parse_err(line, format!("bad {what} {s:?}: {e}")))
}

pub fn read_batch(text: &str) -> Result<SampleBatch> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let h = header_fields(header, BATCH_MAGIC)?;
    let n: usize = parse_num(field(&h, "n")?, 1, "n")?;
    let m: usize = parse_num(field(&h, "m")?, 1, "m")?;
    let q: BigUint = parse_num(field(&h, "q")?, 1, "q")?;
    let bits: u32 = parse_num(field(&h, "F")?, 1, "F")?;
    let noise: NoiseSpec = field(&h, "noise")?
        .parse()
        .map_err(|e: Error| parse_err(1, e.to_string()))?;
    let first_errorless = field(&h, "first_errorless")? == "1";
    let transparent = field(&h, "transparent")? == "1";
    let provenance = match field(&h, "provenance")? {
        "-" => Vec::new(),
        p => p.split(',').map(str::to_string).collect(),
    };
    let params = LweParams::with_precision(n, m, q.clone(), noise, bits).map_err(|e| parse_err(1, e.to_string()))?;

    let mut samples = Vec::with_capacity(m);
    let mut noise_vals = Vec::new();
    let mut secret = None;
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks[0] == "secret" {
            let s = toks[1..]
                .iter()
                .map(|t| parse_num::<BigInt>(t, ln, "secret entry"))
                .collect::<Result<Vec<_>>>()?;
            if s.len() != n {
                return Err(parse_err(ln, format!("secret has {} entries, expected {n}", s.len())));
            }
            secret = Some(s);
            continue;
        }
        let expected = n + 1 + transparent as usize;
        if toks.len() != expected {
            return Err(parse_err(
                ln,
                format!("expected {expected} fields, found {}", toks.len()),
            ));
        }
        let a = toks[..n]
            .iter()
            .map(|t| {
                let v: BigUint = parse_num(t, ln, "residue")?;
                if v >= q {
                    return Err(parse_err(ln, format!("residue {v} is not below q = {q}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let hex = toks[n];
        if hex.len() != bits.div_ceil(4) as usize {
            return Err(parse_err(ln, format!("b must have {} hex digits", bits.div_ceil(4))));
        }
        let b = TorusElem::from_hex(hex, bits).map_err(|e| parse_err(ln, e.to_string()))?;
        if transparent {
            let e = toks[n + 1]
                .strip_prefix("e=")
                .ok_or_else(|| parse_err(ln, "transparent sample must end with e=<value>"))?;
            noise_vals.push(parse_num::<f64>(e, ln, "noise")?);
        }
        samples.push(LweSample { a, b });
    }
    if samples.len() != m {
        return Err(parse_err(
            1,
            format!("header says m={m} but {} samples follow", samples.len()),
        ));
    }
    let transparent = if transparent {
        let secret = secret.ok_or_else(|| parse_err(1, "transparent batch has no secret line"))?;
        Some(Transparent {
            secret,
            noise: noise_vals,
        })
    } else {
        None
    };
    Ok(SampleBatch {
        params,
        samples,
        first_errorless,
        transparent,
        provenance,
    })
}

/// Challenge format: header `extlwe v1 n= m= q= t= z=...`, then `a` rows,
/// `b` rows, one `hint` line, and for transparent challenges `s`/`e` rows.
pub fn write_challenge(ch: &ExtLweChallenge) -> String {
    let mut out = String::new();
    let z: Vec<String> = ch.z.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "{CHALLENGE_MAGIC} v1 n={} m={} q={} t={} z={} transparent={}",
        ch.n,
        ch.m,
        ch.q,
        ch.t(),
        z.join(","),
        ch.transparent.is_some() as u8
    );
    for row in &ch.a {
        let _ = writeln!(out, "a {}", join(row));
    }
    for b in &ch.responses {
        let _ = writeln!(out, "b {}", join(b));
    }
    let _ = writeln!(out, "hint {}", join(&ch.hints));
    if let Some(t) = &ch.transparent {
        for s in &t.secrets {
            let _ = writeln!(out, "s {}", join(s));
        }
        for e in &t.noise {
            let _ = writeln!(out, "e {}", join(e));
        }
    }
    out
}

pub fn read_challenge(text: &str) -> Result<ExtLweChallenge> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let h = header_fields(header, CHALLENGE_MAGIC)?;
    let n: usize = parse_num(field(&h, "n")?, 1, "n")?;
    let m: usize = parse_num(field(&h, "m")?, 1, "m")?;
    let q: BigUint = parse_num(field(&h, "q")?, 1, "q")?;
    let t: usize = parse_num(field(&h, "t")?, 1, "t")?;
    let z = field(&h, "z")?
        .split(',')
        .map(|x| parse_num::<i64>(x, 1, "z entry"))
        .collect::<Result<Vec<_>>>()?;
    let transparent = field(&h, "transparent")? == "1";
    let mut rows: HashMap<&str, Vec<(usize, Vec<&str>)>> = HashMap::new();
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        if let Some(tag) = toks.next() {
            rows.entry(tag).or_default().push((ln, toks.collect()));
        }
    }
    let take = |tag: &str, count: usize, width: usize| -> Result<Vec<(usize, Vec<&str>)>> {
        let r = rows.get(tag).cloned().unwrap_or_default();
        if r.len() != count {
            return Err(parse_err(
                1,
                format!("expected {count} `{tag}` lines, found {}", r.len()),
            ));
        }
        for (ln, toks) in &r {
            if toks.len() != width {
                return Err(parse_err(
                    *ln,
                    format!("expected {width} entries, found {}", toks.len()),
                ));
            }
        }
        Ok(r)
    };
    let residues = |r: Vec<(usize, Vec<&str>)>| -> Result<Vec<Vec<BigUint>>> {
        r.into_iter()
            .map(|(ln, toks)| toks.iter().map(|x| parse_num::<BigUint>(x, ln, "residue")).collect())
            .collect()
    };
    let ints = |r: Vec<(usize, Vec<&str>)>| -> Result<Vec<Vec<BigInt>>> {
        r.into_iter()
            .map(|(ln, toks)| toks.iter().map(|x| parse_num::<BigInt>(x, ln, "integer")).collect())
            .collect()
    };
    if z.len() != m {
        return Err(parse_err(1, format!("z has {} entries, expected {m}", z.len())));
    }
    let a = residues(take("a", n, m)?)?;
    let responses = residues(take("b", t, m)?)?;
    let hints = ints(take("hint", 1, t)?)?.pop().unwrap_or_default();
    let transparent = if transparent {
        Some(ExtLweTransparent {
            secrets: ints(take("s", t, n)?)?,
            noise: ints(take("e", t, m)?)?,
        })
    } else {
        None
    };
    Ok(ExtLweChallenge {
        n,
        m,
        q,
        a,
        responses,
        hints,
        z,
        transparent,
    })
}
