//! Numeric token parsing, including exponent tick labels drawn as "10"
//! followed by a raised, smaller exponent.

use crate::OcrToken;

/// Parses a plain decimal, tolerating a leading currency symbol, a trailing
/// percent sign and well-formed thousands separators.
pub fn parse_plain_number(text: &str) -> Option<f64> {
    let mut s = text.trim();
    let mut negative = false;
    if let Some(rest) = s.strip_prefix('-') {
        negative = true;
        s = rest;
    }
    s = s.trim_start_matches(['$', '€', '£', '¥']);
    if !negative {
        if let Some(rest) = s.strip_prefix('-') {
            negative = true;
            s = rest;
        }
    }
    s = s.strip_suffix('%').unwrap_or(s);
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    let int: String = if int.contains(',') {
        let groups: Vec<&str> = int.split(',').collect();
        let ok = (1..=3).contains(&groups[0].len()) && groups[1..].iter().all(|g| g.len() == 3);
        if !ok {
            return None;
        }
        groups.concat()
    } else {
        int.to_string()
    };
    let digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !digits(&int) || frac.is_some_and(|f| f.is_empty() || !digits(f)) || (int.is_empty() && frac.is_none()) {
        return None;
    }
    let body = match frac {
        Some(f) => format!("{}.{f}", if int.is_empty() { "0" } else { &int }),
        None => int,
    };
    let v: f64 = body.parse().ok()?;
    Some(if negative { -v } else { v })
}

fn parse_exponent(text: &str) -> Option<i32> {
    let t = text.trim();
    let body = t.strip_prefix('-').unwrap_or(t);
    if body.is_empty() || body.len() > 3 || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Whether `cand` sits as a superscript of `mantissa`: both horizontal,
/// `cand` starts at the mantissa's right edge, its top is above the
/// mantissa's vertical centre, its height is at most 0.8 of the mantissa's,
/// and its bottom is clear of the mantissa baseline (so a small digit
/// resting on the same baseline is not taken for an exponent).
pub fn is_superscript_of(mantissa: &OcrToken, cand: &OcrToken) -> bool {
    if !mantissa.is_horizontal() || !cand.is_horizontal() {
        return false;
    }
    let m = mantissa.bbox();
    let c = cand.bbox();
    let hm = m[3] - m[1];
    let hc = c[3] - c[1];
    let mid = (m[1] + m[3]) / 2.0;
    c[0] >= m[2] - 0.25 * hm
        && c[0] <= m[2] + 0.5 * hm
        && c[1] < mid
        && hc <= 0.8 * hm
        && c[3] <= m[3] - 0.25 * hm
        && c[3] >= m[1] - hc
}

/// Value of `token`, reading `next` as an exponent when `token` is "10" and
/// `next` is a raised integer. `None` means the token is a label.
pub fn parse_numeric_token(token: &OcrToken, next: Option<&OcrToken>) -> Option<f64> {
    if token.text.trim() == "10" {
        if let Some(e) = next.filter(|n| is_superscript_of(token, n)).and_then(|n| parse_exponent(&n.text)) {
            return Some(10f64.powi(e));
        }
    }
    parse_plain_number(&token.text)
}

/// A number read from one token or a mantissa/exponent pair.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericToken {
    pub value: f64,
    /// Union of the contributing token boxes.
    pub bbox: [f64; 4],
    /// Horizontal centre of the union and vertical centre of the mantissa;
    /// the point a tick label is centred on.
    pub anchor: [f64; 2],
    /// Height of the (mantissa) token.
    pub height: f64,
    pub indices: Vec<usize>,
    pub exponent: bool,
}

/// All numeric readings in `tokens`. Exponent tokens are consumed by their
/// mantissa and not reported on their own.
pub fn numeric_tokens(tokens: &[OcrToken]) -> Vec<NumericToken> {
    let mut partner: Vec<Option<usize>> = vec![None; tokens.len()];
    let mut consumed = vec![false; tokens.len()];
    for (i, t) in tokens.iter().enumerate() {
        if t.text.trim() != "10" {
            continue;
        }
        let best = tokens
            .iter()
            .enumerate()
            .filter(|&(j, c)| j != i && !consumed[j] && is_superscript_of(t, c) && parse_exponent(&c.text).is_some())
            .min_by(|a, b| a.1.bbox()[0].total_cmp(&b.1.bbox()[0]));
        if let Some((j, _)) = best {
            partner[i] = Some(j);
            consumed[j] = true;
        }
    }
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if consumed[i] {
            continue;
        }
        let next = partner[i].map(|j| &tokens[j]);
        let Some(value) = parse_numeric_token(t, next) else { continue };
        let mb = t.bbox();
        let mut bbox = mb;
        let mut indices = vec![i];
        if let Some(j) = partner[i] {
            let c = tokens[j].bbox();
            bbox = [bbox[0].min(c[0]), bbox[1].min(c[1]), bbox[2].max(c[2]), bbox[3].max(c[3])];
            indices.push(j);
        }
        out.push(NumericToken {
            value,
            bbox,
            anchor: [(bbox[0] + bbox[2]) / 2.0, (mb[1] + mb[3]) / 2.0],
            height: t.text_height(),
            indices,
            exponent: partner[i].is_some(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_numbers() {
        assert_eq!(parse_plain_number("42.5"), Some(42.5));
        assert_eq!(parse_plain_number("abc"), None);
        assert_eq!(parse_plain_number("1,234,567"), Some(1_234_567.0));
        assert_eq!(parse_plain_number("$1,200.50"), Some(1200.5));
        assert_eq!(parse_plain_number("-$3"), Some(-3.0));
        assert_eq!(parse_plain_number("15%"), Some(15.0));
        assert_eq!(parse_plain_number(".5"), Some(0.5));
        for bad in ["", "-", "1,23", "12,3456", "1.2.3", "4a", "1e5", "$", "10."] {
            assert_eq!(parse_plain_number(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn raised_exponent() {
        let m = OcrToken::axis_aligned("10", [100.0, 100.0, 124.0, 112.0]);
        let e = OcrToken::axis_aligned("4", [125.0, 97.0, 132.0, 104.0]);
        assert_eq!(parse_numeric_token(&m, Some(&e)), Some(10_000.0));
        let found = numeric_tokens(&[e.clone(), m.clone()]);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].value, 10_000.0);
        assert_eq!(found[0].anchor[1], 106.0);
    }

    #[test]
    fn baseline_aligned_digit_is_not_an_exponent() {
        let m = OcrToken::axis_aligned("10", [100.0, 100.0, 124.0, 112.0]);
        for (h, gap) in [(12.0, 10.0), (7.0, 1.0), (9.0, 1.0), (9.6, 0.0)] {
            let d = OcrToken::axis_aligned("4", [124.0 + gap, 112.0 - h, 124.0 + gap + h * 0.6, 112.0]);
            assert_eq!(parse_numeric_token(&m, Some(&d)), Some(10.0));
            let found = numeric_tokens(&[m.clone(), d]);
            assert_eq!(found.iter().map(|n| n.value).collect::<Vec<_>>(), vec![10.0, 4.0]);
        }
    }
}
