// SPDX-License-Identifier: Apache-2.0

//! Plain-text model files.
//!
//! ```text
//! tsm v1 n=2 N=100 T=2 s=3
//! + 1,2
//! + ~1,~2
//! - 1,~2
//! - ~1,2
//! ```
//!
//! Positive monomials come first, then negative ones, each in index order;
//! literals are sorted by variable with the plain literal before its
//! negation. `{}` is the empty monomial. On input, `−` (U+2212) is accepted
//! as a synonym for `-`.

use std::fs;
use std::path::Path;

use super::model::{Hyperparams, Literal, Monomial, TsmModel};
use crate::error::{Error, Result};

const WHAT: &str = "model file";

pub fn model_to_string(model: &TsmModel) -> String {
    let h = &model.hyperparams;
    let mut out = format!(
        "tsm v1 n={} N={} T={} s={}\n",
        model.n_vars(),
        h.states,
        h.margin,
        h.specificity
    );
    for (tag, ms) in [('+', model.positive()), ('-', model.negative())] {
        for m in ms {
            out.push(tag);
            out.push(' ');
            out.push_str(&m.to_string());
            out.push('\n');
        }
    }
    out
}

fn header_field<'a>(line: usize, tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::parse(WHAT, line, format!("expected `{key}=<value>` in header")))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(WHAT, line, format!("bad value `{v}` for {key}")))
}

fn parse_literal(line: usize, tok: &str, n_vars: usize) -> Result<Literal> {
    let (negated, digits) = match tok.strip_prefix('~') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let var: u32 = digits
        .parse()
        .map_err(|_| Error::parse(WHAT, line, format!("bad literal `{tok}`")))?;
    if var == 0 || var as usize > n_vars {
        return Err(Error::parse(
            WHAT,
            line,
            format!("literal `{tok}` outside input dimension {n_vars}"),
        ));
    }
    Ok(Literal { var, negated })
}

pub fn model_from_str(text: &str) -> Result<TsmModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(WHAT, 1, "empty file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("tsm") || toks.next() != Some("v1") {
        return Err(Error::parse(WHAT, hl, "header must start with `tsm v1`"));
    }
    let n_vars: usize = parse_num(hl, "n", header_field(hl, toks.next(), "n")?)?;
    let states: u32 = parse_num(hl, "N", header_field(hl, toks.next(), "N")?)?;
    let margin: u32 = parse_num(hl, "T", header_field(hl, toks.next(), "T")?)?;
    let specificity: f64 = parse_num(hl, "s", header_field(hl, toks.next(), "s")?)?;
    if let Some(extra) = toks.next() {
        return Err(Error::parse(WHAT, hl, format!("unexpected header field `{extra}`")));
    }

    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut chars = line.chars();
        let tag = chars.next().expect("non-empty");
        let body = chars.as_str().trim();
        let target = match tag {
            '+' => &mut positive,
            '-' | '\u{2212}' => &mut negative,
            _ => return Err(Error::parse(WHAT, ln, format!("unknown polarity tag `{tag}`"))),
        };
        if body.is_empty() {
            return Err(Error::parse(WHAT, ln, "missing literals (use `{}` for empty)"));
        }
        let monomial = if body == "{}" {
            Monomial::empty()
        } else {
            let lits = body
                .split(',')
                .map(|t| parse_literal(ln, t.trim(), n_vars))
                .collect::<Result<Vec<_>>>()?;
            Monomial::new(lits)
        };
        target.push(monomial);
    }
    TsmModel::new(
        n_vars,
        positive,
        negative,
        Hyperparams {
            states,
            margin,
            specificity,
        },
    )
    .map_err(|e| Error::parse(WHAT, hl, e.to_string()))
}

pub fn save_model(model: &TsmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TsmModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::model::fixtures::{empty_model, xor_model};

    #[test]
    fn xor_text() {
        let text = model_to_string(&xor_model());
        assert_eq!(
            text,
            "tsm v1 n=2 N=100 T=15 s=3.9\n+ 1,2\n+ ~1,~2\n- 1,~2\n- ~1,2\n"
        );
        assert_eq!(model_from_str(&text).unwrap(), xor_model());
    }

    #[test]
    fn empty_monomials_round_trip() {
        let m = empty_model(4, 3);
        let text = model_to_string(&m);
        assert!(text.contains("+ {}\n"));
        assert_eq!(model_from_str(&text).unwrap(), m);
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("tsmv-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("xor.tsm");
        save_model(&xor_model(), &p).unwrap();
        assert_eq!(load_model(&p).unwrap(), xor_model());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unicode_minus_accepted() {
        let m = model_from_str("tsm v1 n=1 N=2 T=1 s=2\n+ 1\n\u{2212} ~1\n").unwrap();
        assert_eq!(m.negative()[0], Monomial::new([Literal::neg(1)]));
    }

    #[test]
    fn out_of_range_literal_reports_line() {
        let err = model_from_str("tsm v1 n=2 N=2 T=1 s=2\n+ 1\n- 3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "tsm v2 n=2 N=2 T=1 s=2\n",
            "tsm v1 n=2 N=2 T=1\n+ 1\n- 2\n",
            "tsm v1 n=2 N=2 T=1 s=2\n* 1\n- 2\n",
            "tsm v1 n=2 N=2 T=1 s=2\n+ x\n- 2\n",
            "tsm v1 n=2 N=2 T=1 s=2\n+ 1\n",
            "tsm v1 n=2 N=2 T=1 s=2\n+\n- 1\n",
        ] {
            assert!(model_from_str(bad).is_err(), "accepted {bad:?}");
        }
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(seed in proptest::prelude::any::<u64>(), n in 1usize..12, half in 1usize..6) {
            let m = crate::tm::model::fixtures::random_model(&mut crate::rng::SplitMix64::new(seed), n, half);
            proptest::prop_assert_eq!(model_from_str(&model_to_string(&m)).unwrap(), m);
        }
    }
}
