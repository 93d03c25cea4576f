//! Line-oriented network files.
//!
//! ```text
//! sigmanet-rnn 1
//! cells <K>
//! h0 <i> <q>
//! in <i> <x0|x1|bias|x2> <q>
//! res <i> <j> <q>
//! out <0|1> <j> <q>
//! bias_stream <stream>       # analog bias of cell 0
//! evolving_bias <stream>     # time-varying bias of cell 0
//! prob_stream <stream>       # probability of the stochastic line
//! ```
//!
//! Absent entries are zero. Writing is canonical, so equal networks
//! serialize to identical bytes.

use std::fmt::Write as _;

use num_traits::Zero;

use super::RnnConfig;
use crate::encodings::{parse_rational, BitStream, Rational};
use crate::error::{Error, Result};

const MAGIC: &str = "sigmanet-rnn 1";

#[derive(Clone, Debug)]
pub struct NetworkFile {
    pub cfg: RnnConfig,
    /// Weights of the stochastic input line, one per cell.
    pub x2: Option<Vec<Rational>>,
    pub bias_stream: Option<BitStream>,
    pub evolving_bias: Option<BitStream>,
    pub prob_stream: Option<BitStream>,
}

impl NetworkFile {
    pub fn plain(cfg: RnnConfig) -> Self {
        NetworkFile {
            cfg,
            x2: None,
            bias_stream: None,
            evolving_bias: None,
            prob_stream: None,
        }
    }

    pub fn to_text(&self) -> String {
        let cfg = &self.cfg;
        let mut s = String::new();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "cells {}", cfg.k).unwrap();
        for (i, v) in cfg.h0.iter().enumerate() {
            if !v.is_zero() {
                writeln!(s, "h0 {i} {v}").unwrap();
            }
        }
        for (i, row) in cfg.w_in.iter().enumerate() {
            for (name, v) in ["x0", "x1", "bias"].iter().zip(row.iter()) {
                if !v.is_zero() {
                    writeln!(s, "in {i} {name} {v}").unwrap();
                }
            }
            if let Some(col) = &self.x2 {
                if !col[i].is_zero() {
                    writeln!(s, "in {i} x2 {}", col[i]).unwrap();
                }
            }
        }
        for (i, row) in cfg.w_res.iter().enumerate() {
            for (j, v) in row {
                writeln!(s, "res {i} {j} {v}").unwrap();
            }
        }
        for (r, row) in cfg.w_out.iter().enumerate() {
            for (j, v) in row {
                writeln!(s, "out {r} {j} {v}").unwrap();
            }
        }
        for (key, stream) in [
            ("bias_stream", &self.bias_stream),
            ("evolving_bias", &self.evolving_bias),
            ("prob_stream", &self.prob_stream),
        ] {
            if let Some(st) = stream {
                writeln!(s, "{key} {st}").unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, l)) if l == MAGIC => {}
            Some((n, _)) => return Err(Error::parse(n, format!("expected header {MAGIC:?}"))),
            None => return Err(Error::parse(1, "empty network file")),
        }
        let mut file: Option<NetworkFile> = None;
        for (n, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |m: &str| Error::parse(n, m.to_string());
            let idx = |t: &str, k: usize| -> Result<usize> {
                let i: usize = t.parse().map_err(|_| err("bad index"))?;
                if i >= k {
                    return Err(err("index out of range"));
                }
                Ok(i)
            };
            let q = |t: &str| parse_rational(t).map_err(|e| Error::parse(n, e.to_string()));
            if toks[0] == "cells" {
                if file.is_some() || toks.len() != 2 {
                    return Err(err("cells must appear once, before any entry"));
                }
                let k: usize = toks[1].parse().map_err(|_| err("bad cell count"))?;
                file = Some(NetworkFile::plain(RnnConfig::zeros(k)));
                continue;
            }
            let f = file
                .as_mut()
                .ok_or_else(|| err("entry before cells line"))?;
            let k = f.cfg.k;
            let stream = |t: &[&str]| -> Result<BitStream> {
                if t.len() != 2 {
                    return Err(err("expected one stream literal"));
                }
                t[1].parse()
                    .map_err(|e: Error| Error::parse(n, e.to_string()))
            };
            match (toks[0], toks.len()) {
                ("h0", 3) => f.cfg.h0[idx(toks[1], k)?] = q(toks[2])?,
                ("in", 4) => {
                    let i = idx(toks[1], k)?;
                    let v = q(toks[3])?;
                    match toks[2] {
                        "x0" => f.cfg.w_in[i][0] = v,
                        "x1" => f.cfg.w_in[i][1] = v,
                        "bias" => f.cfg.w_in[i][2] = v,
                        "x2" => f.x2.get_or_insert_with(|| vec![Rational::zero(); k])[i] = v,
                        _ => return Err(err("unknown input column")),
                    }
                }
                ("res", 4) => {
                    let (i, j) = (idx(toks[1], k)?, idx(toks[2], k)?);
                    f.cfg.add_res(i, j, q(toks[3])?);
                }
                ("out", 4) => {
                    let r = idx(toks[1], 2)?;
                    f.cfg.add_out(r, idx(toks[2], k)?, q(toks[3])?);
                }
                ("bias_stream", _) => f.bias_stream = Some(stream(&toks)?),
                ("evolving_bias", _) => f.evolving_bias = Some(stream(&toks)?),
                ("prob_stream", _) => f.prob_stream = Some(stream(&toks)?),
                _ => return Err(err("unrecognized line")),
            }
        }
        let f = file.ok_or_else(|| Error::parse(1, "missing cells line"))?;
        f.cfg.validate()?;
        Ok(f)
    }
}
