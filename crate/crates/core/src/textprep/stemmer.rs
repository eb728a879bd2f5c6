//! Porter2 ("Snowball English") stemmer.
//!
//! Implements the published algorithm: prelude (apostrophe trim, y/Y
//! marking), R1/R2 regions with the gener/commun/arsen exception, steps 0
//! through 5, and both exception word lists. Tokens containing anything
//! other than ASCII letters and apostrophes are returned unchanged.

const VOWELS: &[u8] = b"aeiouy";
const DOUBLES: [&[u8]; 9] = [b"bb", b"dd", b"ff", b"gg", b"mm", b"nn", b"pp", b"rr", b"tt"];
const LI_ENDINGS: &[u8] = b"cdeghkmnrt";

fn is_vowel(c: u8) -> bool {
    VOWELS.contains(&c)
}

struct Word {
    b: Vec<u8>,
    r1: usize,
    r2: usize,
}

impl Word {
    fn ends_with(&self, suffix: &[u8]) -> bool {
        self.b.ends_with(suffix)
    }

    /// Does the suffix of this length start at or after R1?
    fn in_r1(&self, suffix_len: usize) -> bool {
        self.b.len() >= suffix_len && self.b.len() - suffix_len >= self.r1
    }

    fn in_r2(&self, suffix_len: usize) -> bool {
        self.b.len() >= suffix_len && self.b.len() - suffix_len >= self.r2
    }

    fn truncate(&mut self, new_len: usize) {
        self.b.truncate(new_len);
    }

    fn replace_suffix(&mut self, suffix_len: usize, replacement: &[u8]) {
        let keep = self.b.len() - suffix_len;
        self.b.truncate(keep);
        self.b.extend_from_slice(replacement);
    }

    /// True when `b[..len]` contains a vowel.
    fn has_vowel_before(&self, len: usize) -> bool {
        self.b[..len].iter().any(|&c| is_vowel(c))
    }

    /// Short-syllable test at the end of `b[..len]`: either a
    /// non-vowel/vowel/non-vowel(not w, x, Y) triple ending there, or the
    /// whole prefix is exactly vowel + non-vowel at the word start.
    fn ends_in_short_syllable(&self, len: usize) -> bool {
        if len == 2 {
            return is_vowel(self.b[0]) && !is_vowel(self.b[1]);
        }
        if len >= 3 {
            let c0 = self.b[len - 3];
            let c1 = self.b[len - 2];
            let c2 = self.b[len - 1];
            return !is_vowel(c0)
                && is_vowel(c1)
                && !is_vowel(c2)
                && c2 != b'w'
                && c2 != b'x'
                && c2 != b'Y';
        }
        false
    }

    /// A word is short when it ends in a short syllable and R1 is empty.
    fn is_short(&self) -> bool {
        self.r1 >= self.b.len() && self.ends_in_short_syllable(self.b.len())
    }
}

fn exception_stem(word: &[u8]) -> Option<&'static str> {
    let table: [(&[u8], &str); 18] = [
        (b"skis", "ski"),
        (b"skies", "sky"),
        (b"dying", "die"),
        (b"lying", "lie"),
        (b"tying", "tie"),
        (b"idly", "idl"),
        (b"gently", "gentl"),
        (b"ugly", "ugli"),
        (b"early", "earli"),
        (b"only", "onli"),
        (b"singly", "singl"),
        (b"sky", "sky"),
        (b"news", "news"),
        (b"howe", "howe"),
        (b"atlas", "atlas"),
        (b"cosmos", "cosmos"),
        (b"bias", "bias"),
        (b"andes", "andes"),
    ];
    table
        .iter()
        .find(|(w, _)| *w == word)
        .map(|&(_, stem)| stem)
}

fn exception_after_1a(word: &[u8]) -> bool {
    matches!(
        word,
        b"inning" | b"outing" | b"canning" | b"herring" | b"earring" | b"proceed" | b"exceed"
            | b"succeed"
    )
}

fn compute_regions(b: &[u8]) -> (usize, usize) {
    let r1 = if b.starts_with(b"gener") || b.starts_with(b"arsen") {
        5
    } else if b.starts_with(b"commun") {
        6
    } else {
        region_after_first_nonvowel(b, 0)
    };
    let r2 = region_after_first_nonvowel(b, r1);
    (r1, r2)
}

/// Index just past the first non-vowel that follows a vowel, scanning from
/// `start`; the word length when there is none.
fn region_after_first_nonvowel(b: &[u8], start: usize) -> usize {
    let mut seen_vowel = false;
    for i in start..b.len() {
        if is_vowel(b[i]) {
            seen_vowel = true;
        } else if seen_vowel {
            return i + 1;
        }
    }
    b.len()
}

fn step0(w: &mut Word) {
    for suffix in [b"'s'".as_slice(), b"'s".as_slice(), b"'".as_slice()] {
        if w.ends_with(suffix) {
            w.truncate(w.b.len() - suffix.len());
            return;
        }
    }
}

fn step1a(w: &mut Word) {
    if w.ends_with(b"sses") {
        w.replace_suffix(4, b"ss");
    } else if w.ends_with(b"ied") || w.ends_with(b"ies") {
        if w.b.len() > 4 {
            w.replace_suffix(3, b"i");
        } else {
            w.replace_suffix(3, b"ie");
        }
    } else if w.ends_with(b"us") || w.ends_with(b"ss") {
        // leave as is
    } else if w.ends_with(b"s") {
        // delete if a vowel occurs before the character preceding the s
        if w.b.len() >= 3 && w.has_vowel_before(w.b.len() - 2) {
            w.truncate(w.b.len() - 1);
        }
    }
}

fn step1b(w: &mut Word) {
    if w.ends_with(b"eedly") {
        if w.in_r1(5) {
            w.replace_suffix(5, b"ee");
        }
        return;
    }
    if w.ends_with(b"eed") {
        if w.in_r1(3) {
            w.replace_suffix(3, b"ee");
        }
        return;
    }
    let suffix_len = if w.ends_with(b"ingly") || w.ends_with(b"edly") {
        if w.ends_with(b"ingly") {
            5
        } else {
            4
        }
    } else if w.ends_with(b"ing") {
        3
    } else if w.ends_with(b"ed") {
        2
    } else {
        return;
    };
    let stem_len = w.b.len() - suffix_len;
    if !w.has_vowel_before(stem_len) {
        return;
    }
    w.truncate(stem_len);
    if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
        w.b.push(b'e');
    } else if DOUBLES.iter().any(|d| w.ends_with(d)) {
        w.truncate(w.b.len() - 1);
    } else if w.is_short() {
        w.b.push(b'e');
    }
}

fn step1c(w: &mut Word) {
    let n = w.b.len();
    if n >= 3 {
        let last = w.b[n - 1];
        if (last == b'y' || last == b'Y') && !is_vowel(w.b[n - 2]) {
            w.b[n - 1] = b'i';
        }
    }
}

fn step2(w: &mut Word) {
    // Longest matching suffix wins; the action applies only when the
    // suffix lies in R1.
    const RULES: [(&[u8], &[u8]); 24] = [
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
    for (suffix, replacement) in RULES {
        if w.ends_with(suffix) {
            if w.in_r1(suffix.len()) {
                if suffix == b"ogi" {
                    if w.b.len() > 3 && w.b[w.b.len() - 4] == b'l' {
                        w.replace_suffix(3, replacement);
                    }
                } else if suffix == b"li" {
                    if w.b.len() > 2 && LI_ENDINGS.contains(&w.b[w.b.len() - 3]) {
                        w.truncate(w.b.len() - 2);
                    }
                } else {
                    w.replace_suffix(suffix.len(), replacement);
                }
            }
            return;
        }
    }
}

fn step3(w: &mut Word) {
    const RULES: [(&[u8], &[u8]); 8] = [
        (b"ational", b"ate"),
        (b"tional", b"tion"),
        (b"alize", b"al"),
        (b"icate", b"ic"),
        (b"iciti", b"ic"),
        (b"ative", b""),
        (b"ical", b"ic"),
        (b"ful", b""),
    ];
    for (suffix, replacement) in RULES {
        if w.ends_with(suffix) {
            if w.in_r1(suffix.len()) {
                if suffix == b"ative" {
                    if w.in_r2(5) {
                        w.truncate(w.b.len() - 5);
                    }
                } else {
                    w.replace_suffix(suffix.len(), replacement);
                }
            }
            return;
        }
    }
    if w.ends_with(b"ness") && w.in_r1(4) {
        w.truncate(w.b.len() - 4);
    }
}

fn step4(w: &mut Word) {
    const SUFFIXES: [&[u8]; 17] = [
        b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ant", b"ent", b"ism", b"ate",
        b"iti", b"ous", b"ive", b"ize", b"al", b"er", b"ic",
    ];
    if w.ends_with(b"ement") {
        if w.in_r2(5) {
            w.truncate(w.b.len() - 5);
        }
        return;
    }
    if w.ends_with(b"ment") {
        if w.in_r2(4) {
            w.truncate(w.b.len() - 4);
        }
        return;
    }
    if w.ends_with(b"ent") {
        if w.in_r2(3) {
            w.truncate(w.b.len() - 3);
        }
        return;
    }
    if w.ends_with(b"ion") {
        if w.in_r2(3) {
            let n = w.b.len();
            if n >= 4 && (w.b[n - 4] == b's' || w.b[n - 4] == b't') {
                w.truncate(n - 3);
            }
        }
        return;
    }
    for suffix in SUFFIXES {
        if w.ends_with(suffix) {
            if w.in_r2(suffix.len()) {
                w.truncate(w.b.len() - suffix.len());
            }
            return;
        }
    }
}

fn step5(w: &mut Word) {
    let n = w.b.len();
    if n == 0 {
        return;
    }
    if w.b[n - 1] == b'e' {
        if w.in_r2(1) || (w.in_r1(1) && !w.ends_in_short_syllable(n - 1)) {
            w.truncate(n - 1);
        }
        return;
    }
    if w.b[n - 1] == b'l' && w.in_r2(1) && n >= 2 && w.b[n - 2] == b'l' {
        w.truncate(n - 1);
    }
}

/// Stem a lowercase English token.
pub fn stem(token: &str) -> String {
    if !token
        .bytes()
        .all(|c| c.is_ascii_lowercase() || c == b'\'')
    {
        return token.to_string();
    }
    let mut b: Vec<u8> = token.bytes().collect();

    // Words of two letters or less are left as they are.
    if b.len() <= 2 {
        return token.to_string();
    }
    if let Some(stem) = exception_stem(&b) {
        return stem.to_string();
    }
    // Prelude: drop a leading apostrophe.
    if b.first() == Some(&b'\'') {
        b.remove(0);
    }
    // Mark consonant-y: at the start or after a vowel.
    if b[0] == b'y' {
        b[0] = b'Y';
    }
    for i in 1..b.len() {
        if b[i] == b'y' && is_vowel(b[i - 1]) {
            b[i] = b'Y';
        }
    }

    let (r1, r2) = compute_regions(&b);
    let mut w = Word { b, r1, r2 };

    step0(&mut w);
    step1a(&mut w);
    if exception_after_1a(&w.b) {
        return String::from_utf8(w.b).unwrap();
    }
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5(&mut w);

    for c in &mut w.b {
        if *c == b'Y' {
            *c = b'y';
        }
    }
    String::from_utf8(w.b).unwrap()
}
