//! Label normalization and Levenshtein similarity.

use std::borrow::Cow;

/// Trims, collapses internal whitespace runs to one space and lowercases.
pub fn normalize_label(s: &str) -> String {
    normalized(s).into_owned()
}

fn normalized(s: &str) -> Cow<'_, str> {
    let clean = !s.starts_with(char::is_whitespace)
        && !s.ends_with(char::is_whitespace)
        && !s.contains(|c: char| c.is_uppercase() || (c.is_whitespace() && c != ' '))
        && !s.contains("  ");
    if clean {
        Cow::Borrowed(s)
    } else {
        Cow::Owned(s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase())
    }
}

/// `(|s| + |t| - L(s, t)) / (|s| + |t|)` over normalized labels, counted in
/// chars. Two empty labels are identical (1.0).
pub fn levenshtein_ratio(s: &str, t: &str) -> f64 {
    let (s, t) = (normalized(s), normalized(t));
    let total = s.chars().count() + t.chars().count();
    if total == 0 {
        return 1.0;
    }
    (total - strsim::levenshtein(&s, &t)) as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(levenshtein_ratio("abc", "abc"), 1.0);
        assert!((levenshtein_ratio("abc", "abd") - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(levenshtein_ratio("", "abc"), 0.0);
        assert_eq!(levenshtein_ratio("", ""), 1.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_label("  North \t  America "), "north america");
        assert_eq!(levenshtein_ratio("Team  A", "team a"), 1.0);
        assert!((levenshtein_ratio("cats", "cat") - 6.0 / 7.0).abs() < 1e-15);
    }
}
