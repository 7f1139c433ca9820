//! Rule-based sentence splitting.
//!
//! A boundary falls after `.`, `!` or `?` (plus any run of further
//! terminators and closing quotes/brackets) when followed by whitespace and
//! then an uppercase letter, an opening quote/bracket, or a digit. A period
//! ending one of a few known abbreviations is never a boundary.

const ABBREVIATIONS: &[&str] = &[
    "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "Sr.", "Jr.", "St.", "Mt.", "Gen.", "Gov.", "Sen.",
    "Rep.", "Lt.", "Col.", "Sgt.", "Capt.", "Rev.", "U.S.", "U.K.", "U.N.", "E.U.", "e.g.", "i.e.",
    "vs.", "Jan.", "Feb.", "Aug.", "Sept.", "Oct.", "Nov.", "Dec.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '\u{201D}' | '\u{2019}' | ')' | ']')
}

fn opens_sentence(c: char) -> bool {
    c.is_uppercase()
        || c.is_ascii_digit()
        || matches!(c, '"' | '\'' | '\u{201C}' | '\u{2018}' | '(' | '[')
}

fn ends_with_abbreviation(before: &str) -> bool {
    let word = before
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or("")
        .trim_start_matches(['(', '"', '\'', '\u{201C}', '\u{2018}']);
    ABBREVIATIONS.contains(&word)
}

/// Splits `text` into trimmed, non-empty sentences.
pub fn segment_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminator(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = k > j
            && k < chars.len()
            && opens_sentence(chars[k].1)
            && !(c == '.' && ends_with_abbreviation(&text[start..pos + 1]));
        if boundary {
            let end = chars[j].0;
            push_trimmed(&mut out, &text[start..end]);
            start = chars[k].0;
            i = k;
        } else {
            i = j;
        }
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_owned());
    }
}
