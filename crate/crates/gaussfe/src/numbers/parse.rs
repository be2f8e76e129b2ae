//! Text forms: `p/q`, integers, `(a+b*sqrt(d))/c`, and decimal literals
//! with an optional `@P` precision suffix.

use rug::{Integer, Rational};

use super::{BigFloat, ExactReal};
use crate::error::{Error, Result};

pub fn parse_exact(input: &str, default_prec: u32) -> Result<ExactReal> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    if s.contains("sqrt(") {
        return parse_quadratic(&s);
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = int(p)?;
        let q = int(q)?;
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        return Ok(ExactReal::Rational(Rational::from((p, q))));
    }
    if let Ok(n) = s.parse::<Integer>() {
        return Ok(ExactReal::Rational(Rational::from(n)));
    }
    let (lit, prec) = match s.split_once('@') {
        Some((l, p)) => {
            let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad precision in {input:?}")))?;
            (l, p)
        }
        None => (s.as_str(), default_prec),
    };
    if !lit.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-')) {
        return Err(Error::Parse(format!("unrecognized number {input:?}")));
    }
    let f = BigFloat::parse(lit, prec)?;
    if !f.is_finite() {
        return Err(Error::Parse(format!("non-finite value {input:?}")));
    }
    Ok(ExactReal::Float(f))
}

fn int(s: &str) -> Result<Integer> {
    s.parse::<Integer>().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

/// `(a±b*sqrt(d))/c`; `b*` and `/c` may be omitted.
fn parse_quadratic(s: &str) -> Result<ExactReal> {
    let bad = || Error::Parse(format!("bad quadratic form {s:?}"));
    let (body, c) = match s.rsplit_once(")/") {
        Some((b, c)) => (format!("{b})"), int(c)?),
        None => (s.to_string(), Integer::from(1)),
    };
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(&body);
    let at = body.find("sqrt(").ok_or_else(bad)?;
    let head = &body[..at];
    let radicand = body[at + 5..].strip_suffix(')').ok_or_else(bad)?;
    let d = int(radicand)?;
    let head = head.strip_suffix('*').unwrap_or(head);
    // split head into a and a signed b at the last sign that is not leading
    let split = head.char_indices().filter(|&(i, ch)| i > 0 && (ch == '+' || ch == '-')).map(|(i, _)| i).next_back();
    let (a, bs) = match split {
        Some(i) => (int(&head[..i])?, &head[i..]),
        None => (Integer::new(), head),
    };
    let b = match bs {
        "" | "+" => Integer::from(1),
        "-" => Integer::from(-1),
        other => int(other.strip_prefix('+').unwrap_or(other))?,
    };
    ExactReal::quadratic_big(a, b, d, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_exact("2/5", 128).unwrap(), ExactReal::ratio(2, 5));
        assert_eq!(parse_exact("-3", 128).unwrap(), ExactReal::int(-3));
        assert_eq!(parse_exact("(-1+1*sqrt(5))/2", 128).unwrap(), ExactReal::golden());
        assert_eq!(parse_exact("(-1+sqrt(2))", 128).unwrap(), ExactReal::silver());
        assert_eq!(parse_exact("(1-1*sqrt(5))/2", 128).unwrap().to_string(), "(1-1*sqrt(5))/2");
        let f = parse_exact("0.1@200", 128).unwrap();
        assert_eq!(f.float_prec(), Some(200));
        assert!(parse_exact("abc", 128).is_err());
        assert!(parse_exact("1/0", 128).is_err());
    }

    #[test]
    fn quadratic_round_trip() {
        for s in ["(-1+1*sqrt(5))/2", "(3-7*sqrt(13))/4", "(0+2*sqrt(3))/5"] {
            let x = parse_exact(s, 128).unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(parse_exact(&x.to_string(), 128).unwrap(), x);
        }
    }
}
