//! Snowball English (Porter2) stemmer.
//!
//! Operates on lowercase ASCII tokens; words shorter than three characters
//! and non-ASCII tokens are returned unchanged. The implementation follows
//! the published algorithm: exceptional forms, prelude y-marking, R1/R2
//! region marking, suffix steps 0 through 5, postlude.

/// Fixed whole-word rewrites applied before anything else.
const EXCEPTION1: &[(&str, &str)] = &[
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
];

/// Whole-word forms that stop processing right after step 1a.
const EXCEPTION2: &[&str] = &[
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed",
];

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn has_vowel(w: &[u8]) -> bool {
    w.iter().copied().any(is_vowel)
}

fn is_double(a: u8, b: u8) -> bool {
    a == b && matches!(a, b'b' | b'd' | b'f' | b'g' | b'm' | b'n' | b'p' | b'r' | b't')
}

fn valid_li_ending(b: u8) -> bool {
    matches!(
        b,
        b'c' | b'd' | b'e' | b'g' | b'h' | b'k' | b'm' | b'n' | b'r' | b't'
    )
}

/// True when `w` ends in a short syllable: either non-vowel, vowel,
/// non-vowel-other-than-wxY, or a word-initial vowel followed by a
/// non-vowel.
fn ends_short_syllable(w: &[u8]) -> bool {
    let n = w.len();
    if n >= 3 {
        let (a, b, c) = (w[n - 3], w[n - 2], w[n - 1]);
        if !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, b'w' | b'x' | b'Y') {
            return true;
        }
    }
    n == 2 && is_vowel(w[0]) && !is_vowel(w[1])
}

/// Compute R1 and R2 start offsets. R1 begins after the first non-vowel
/// that follows a vowel, except for the gener/commun/arsen prefixes; R2
/// applies the same rule within R1.
fn mark_regions(w: &[u8]) -> (usize, usize) {
    let p1 = region_exception(w).unwrap_or_else(|| region_after(w, 0));
    let p2 = region_after(w, p1);
    (p1, p2)
}

fn region_exception(w: &[u8]) -> Option<usize> {
    for prefix in [&b"gener"[..], &b"commun"[..], &b"arsen"[..]] {
        if w.starts_with(prefix) {
            return Some(prefix.len());
        }
    }
    None
}

fn region_after(w: &[u8], from: usize) -> usize {
    let mut i = from;
    while i < w.len() && !is_vowel(w[i]) {
        i += 1;
    }
    while i < w.len() && is_vowel(w[i]) {
        i += 1;
    }
    if i < w.len() {
        i + 1
    } else {
        w.len()
    }
}

/// Stem one token. The input is expected to be lowercase; tokens that are
/// not pure ASCII are returned unchanged.
pub fn stem(word: &str) -> String {
    if !word.is_ascii() {
        return word.to_string();
    }
    for (from, to) in EXCEPTION1 {
        if word == *from {
            return (*to).to_string();
        }
    }
    if word.len() < 3 {
        return word.to_string();
    }

    let mut w: Vec<u8> = word.as_bytes().to_vec();

    // Prelude: drop a leading apostrophe, mark consonant-y as Y.
    if w[0] == b'\'' {
        w.remove(0);
    }
    if !w.is_empty() && w[0] == b'y' {
        w[0] = b'Y';
    }
    for i in 1..w.len() {
        if w[i] == b'y' && is_vowel(w[i - 1]) {
            w[i] = b'Y';
        }
    }

    let (p1, p2) = mark_regions(&w);

    step0(&mut w);
    step1a(&mut w);

    if !EXCEPTION2.contains(&std::str::from_utf8(&w).unwrap_or("")) {
        step1b(&mut w, p1);
        step1c(&mut w);
        step2(&mut w, p1);
        step3(&mut w, p1, p2);
        step4(&mut w, p2);
        step5(&mut w, p1, p2);
    }

    for b in &mut w {
        if *b == b'Y' {
            *b = b'y';
        }
    }
    String::from_utf8(w).expect("stemmer buffer is ASCII")
}

/// Remove the longest of `'s'`, `'s`, `'`.
fn step0(w: &mut Vec<u8>) {
    for suffix in [&b"'s'"[..], &b"'s"[..], &b"'"[..]] {
        if w.ends_with(suffix) {
            w.truncate(w.len() - suffix.len());
            return;
        }
    }
}

fn step1a(w: &mut Vec<u8>) {
    if w.ends_with(b"sses") {
        w.truncate(w.len() - 2);
    } else if w.ends_with(b"ied") || w.ends_with(b"ies") {
        // Replace by i when more than one letter precedes, else by ie.
        if w.len() > 4 {
            w.truncate(w.len() - 2);
        } else {
            w.truncate(w.len() - 1);
        }
    } else if w.ends_with(b"us") || w.ends_with(b"ss") {
        // keep
    } else if w.ends_with(b"s") && w.len() >= 2 && has_vowel(&w[..w.len() - 2]) {
        w.pop();
    }
}

fn step1b(w: &mut Vec<u8>, p1: usize) {
    for suffix in [&b"eedly"[..], &b"eed"[..]] {
        if w.ends_with(suffix) {
            if w.len() - suffix.len() >= p1 {
                w.truncate(w.len() - suffix.len());
                w.extend_from_slice(b"ee");
            }
            return;
        }
    }
    for suffix in [&b"ingly"[..], &b"edly"[..], &b"ing"[..], &b"ed"[..]] {
        if w.ends_with(suffix) {
            let stem_len = w.len() - suffix.len();
            if !has_vowel(&w[..stem_len]) {
                return;
            }
            w.truncate(stem_len);
            if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
                w.push(b'e');
            } else if w.len() >= 2 && is_double(w[w.len() - 2], w[w.len() - 1]) {
                w.pop();
            } else if p1 == w.len() && ends_short_syllable(w) {
                w.push(b'e');
            }
            return;
        }
    }
}

fn step1c(w: &mut [u8]) {
    let n = w.len();
    if n >= 3 && matches!(w[n - 1], b'y' | b'Y') && !is_vowel(w[n - 2]) {
        w[n - 1] = b'i';
    }
}

/// Suffix table entries: (suffix, replacement). Longest match wins; the
/// match must start inside R1 or the whole step is a no-op.
const STEP2: &[(&[u8], &[u8])] = &[
    (b"ization", b"ize"),
    (b"ational", b"ate"),
    (b"fulness", b"ful"),
    (b"ousness", b"ous"),
    (b"iveness", b"ive"),
    (b"tional", b"tion"),
    (b"biliti", b"ble"),
    (b"lessli", b"less"),
    (b"entli", b"ent"),
    (b"ation", b"ate"),
    (b"alism", b"al"),
    (b"aliti", b"al"),
    (b"ousli", b"ous"),
    (b"iviti", b"ive"),
    (b"fulli", b"ful"),
    (b"enci", b"ence"),
    (b"anci", b"ance"),
    (b"abli", b"able"),
    (b"izer", b"ize"),
    (b"ator", b"ate"),
    (b"alli", b"al"),
    (b"bli", b"ble"),
    (b"ogi", b"og"),
    (b"li", b""),
];

fn step2(w: &mut Vec<u8>, p1: usize) {
    for (suffix, replacement) in STEP2 {
        if !w.ends_with(suffix) {
            continue;
        }
        let start = w.len() - suffix.len();
        if start < p1 {
            return;
        }
        match *suffix {
            b"ogi" => {
                if start >= 1 && w[start - 1] == b'l' {
                    w.truncate(start);
                    w.extend_from_slice(b"og");
                }
            }
            b"li" => {
                if start >= 1 && valid_li_ending(w[start - 1]) {
                    w.truncate(start);
                }
            }
            _ => {
                w.truncate(start);
                w.extend_from_slice(replacement);
            }
        }
        return;
    }
}

const STEP3: &[(&[u8], &[u8])] = &[
    (b"ational", b"ate"),
    (b"tional", b"tion"),
    (b"alize", b"al"),
    (b"icate", b"ic"),
    (b"iciti", b"ic"),
    (b"ative", b""),
    (b"ical", b"ic"),
    (b"ness", b""),
    (b"ful", b""),
];

fn step3(w: &mut Vec<u8>, p1: usize, p2: usize) {
    for (suffix, replacement) in STEP3 {
        if !w.ends_with(suffix) {
            continue;
        }
        let start = w.len() - suffix.len();
        if start < p1 {
            return;
        }
        if *suffix == b"ative" && start < p2 {
            return;
        }
        w.truncate(start);
        w.extend_from_slice(replacement);
        return;
    }
}

const STEP4: &[&[u8]] = &[
    b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ant", b"ent", b"ism", b"ate", b"iti",
    b"ous", b"ive", b"ize", b"ion", b"al", b"er", b"ic",
];

fn step4(w: &mut Vec<u8>, p2: usize) {
    for suffix in STEP4 {
        if !w.ends_with(suffix) {
            continue;
        }
        let start = w.len() - suffix.len();
        if start < p2 {
            return;
        }
        if *suffix == b"ion" && !(start >= 1 && matches!(w[start - 1], b's' | b't')) {
            return;
        }
        w.truncate(start);
        return;
    }
}

fn step5(w: &mut Vec<u8>, p1: usize, p2: usize) {
    let n = w.len();
    if n == 0 {
        return;
    }
    if w[n - 1] == b'e' {
        let start = n - 1;
        if start >= p2 || (start >= p1 && !ends_short_syllable(&w[..start])) {
            w.pop();
        }
    } else if w[n - 1] == b'l' && n - 1 >= p2 && n >= 2 && w[n - 2] == b'l' {
        w.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_fixed_points() {
        assert_eq!(stem("flowers"), "flower");
        assert_eq!(stem("running"), "run");
        assert_eq!(stem("a"), "a");
    }

    #[test]
    fn exceptional_forms() {
        assert_eq!(stem("skies"), "sky");
        assert_eq!(stem("dying"), "die");
        assert_eq!(stem("news"), "news");
        assert_eq!(stem("early"), "earli");
        assert_eq!(stem("proceed"), "proceed");
        assert_eq!(stem("herring"), "herring");
    }

    #[test]
    fn region_prefix_exceptions() {
        assert_eq!(stem("generate"), "generat");
        assert_eq!(stem("communication"), "communic");
        assert_eq!(stem("arsenic"), "arsenic");
    }

    #[test]
    fn short_syllable_e_restore() {
        assert_eq!(stem("hoping"), "hope");
        assert_eq!(stem("hopping"), "hop");
        assert_eq!(stem("owing"), "owe");
    }

    #[test]
    fn consonant_y() {
        assert_eq!(stem("flying"), "fli");
        assert_eq!(stem("day"), "day");
        assert_eq!(stem("cry"), "cri");
        assert_eq!(stem("by"), "by");
    }

    #[test]
    fn apostrophes() {
        assert_eq!(stem("dog's"), "dog");
        assert_eq!(stem("dogs'"), "dog");
    }

    #[test]
    fn non_ascii_passthrough() {
        assert_eq!(stem("café"), "café");
    }
}
