//! Reading maps, words and polynomials from flags.

use std::fs;

use leadrel_core::{AutWord, PolyMap, Polynomial, WeightVector};

use crate::Failure;

/// The flag value, or the contents of the file when it starts with `@`.
pub fn read_arg(value: &str) -> Result<String, Failure> {
    match value.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

/// Largest `k` such that `x<k>` appears in the text.
fn max_variable(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    for (i, b) in bytes.iter().enumerate() {
        if *b == b'x' {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

/// Number of variables a word refers to: the largest variable or index
/// mentioned, or the affine shift length.
pub fn infer_word_nvars(text: &str) -> usize {
    let mut n = 1;
    for item in text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        let mut parts = item.split_whitespace();
        match parts.next() {
            Some("T") => n = parts.filter_map(|p| p.parse().ok()).fold(n, usize::max),
            Some("E") => {
                let idx = parts.next().and_then(|p| p.parse().ok()).unwrap_or(1);
                n = n.max(idx).max(max_variable(item));
            }
            Some("A") => {
                if let Some((_, shift)) = item.split_once('|') {
                    n = n.max(shift.split_whitespace().count());
                }
            }
            _ => {}
        }
    }
    n
}

pub fn parse_word(value: &str, nvars: Option<usize>) -> Result<AutWord, Failure> {
    let text = read_arg(value)?;
    let n = nvars.unwrap_or_else(|| infer_word_nvars(&text));
    Ok(AutWord::parse(&text, n)?)
}

pub fn parse_map(value: &str) -> Result<PolyMap, Failure> {
    Ok(PolyMap::parse_inferred(&read_arg(value)?)?)
}

pub fn parse_relation(value: &str, nvars: usize) -> Result<Polynomial, Failure> {
    Ok(leadrel_core::parse_poly(read_arg(value)?.trim(), nvars)?)
}

/// Weights from `--weights`, standard when absent.
pub fn weights(value: Option<&str>, n: usize) -> Result<WeightVector, Failure> {
    let Some(value) = value else {
        return Ok(WeightVector::standard(n));
    };
    let w: WeightVector = value.parse()?;
    if w.len() != n {
        return Err(Failure::Usage(format!("{} weights given for {n} variables", w.len())));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_variable_count() {
        assert_eq!(infer_word_nvars("E 1 x2^2"), 2);
        assert_eq!(infer_word_nvars("T 1 3; E 1 x2"), 3);
        assert_eq!(infer_word_nvars("A 1 0 0 1 | 0 0"), 2);
        assert_eq!(infer_word_nvars("E 2 x1*x10"), 10);
    }
}
