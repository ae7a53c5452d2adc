/// Absolute IRI check: `scheme ":" rest`, with no whitespace or characters
/// N-Triples forbids inside `<...>`.
pub fn is_absolute_iri(text: &str) -> bool {
    let Some(colon) = text.find(':') else {
        return false;
    };
    let scheme = &text[..colon];
    let mut sc = scheme.chars();
    match sc.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    if !sc.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return false;
    }
    !text.chars().any(|c| c.is_control() || c.is_whitespace() || "<>\"{}|^`\\".contains(c))
}

/// Percent-encodes every byte outside `A-Za-z0-9-._~` (UTF-8 bytes encoded individually).
pub fn percent_encode_iri_safe(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for b in value.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

/// Lowercase, ASCII-alphanumeric slug with single dashes ("Health and wellbeing" -> "health-and-wellbeing").
pub fn slug(text: &str) -> String {
    let mut out = String::new();
    let mut dash = false;
    for c in text.chars() {
        if c.is_ascii_alphanumeric() {
            if dash && !out.is_empty() {
                out.push('-');
            }
            dash = false;
            out.push(c.to_ascii_lowercase());
        } else {
            dash = true;
        }
    }
    out
}
