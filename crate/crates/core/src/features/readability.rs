use super::lexicon::Lexicons;
use crate::text_prep::TaggedSentence;

pub const NAMES: [&str; 13] = [
    "flesch_reading_ease",
    "flesch_kincaid_grade",
    "gunning_fog",
    "smog",
    "automated_readability",
    "coleman_liau",
    "lix",
    "rix",
    "dale_chall",
    "syllables_per_word",
    "polysyllable_proportion",
    "linsear_write",
    "forcast",
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable count with a silent trailing `e`; never below 1.
///
/// A final consonant + "le" keeps its `e` group ("apple" has two syllables).
pub fn syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    let mut groups = 0usize;
    let mut previous_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !previous_vowel {
            groups += 1;
        }
        previous_vowel = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2]) {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

pub fn extract_readability(essay: &[TaggedSentence]) -> [f64; 13] {
    extract_with(essay, Lexicons::bundled())
}

pub(crate) fn extract_with(essay: &[TaggedSentence], lex: &Lexicons) -> [f64; 13] {
    let sentences = essay.iter().filter(|s| s.words().next().is_some()).count();
    let words: Vec<&str> = essay
        .iter()
        .flat_map(|s| s.words())
        .map(|t| t.surface.as_str())
        .collect();
    if words.is_empty() || sentences == 0 {
        return [0.0; 13];
    }

    let w = words.len() as f64;
    let s = sentences as f64;
    let mut syl_total = 0usize;
    let mut poly = 0usize;
    let mut mono = 0usize;
    let mut letters = 0usize;
    let mut long = 0usize;
    let mut difficult = 0usize;
    for word in &words {
        let syl = syllables(word);
        syl_total += syl;
        if syl >= 3 {
            poly += 1;
        }
        if syl == 1 {
            mono += 1;
        }
        let n = word.chars().filter(|c| c.is_alphanumeric()).count();
        letters += n;
        if n > 6 {
            long += 1;
        }
        if !lex.is_easy(&word.to_lowercase()) {
            difficult += 1;
        }
    }
    let syl_total = syl_total as f64;
    let (poly, mono) = (poly as f64, mono as f64);
    let letters = letters as f64;
    let long = long as f64;

    let words_per_sentence = w / s;
    let syllables_per_word = syl_total / w;
    let fre = 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word;
    let fkgl = 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59;
    let fog = 0.4 * (words_per_sentence + 100.0 * poly / w);
    let smog = 1.0430 * (poly * 30.0 / s).sqrt() + 3.1291;
    let ari = 4.71 * letters / w + 0.5 * words_per_sentence - 21.43;
    let cli = 0.0588 * (100.0 * letters / w) - 0.296 * (100.0 * s / w) - 15.8;
    let lix = words_per_sentence + 100.0 * long / w;
    let rix = long / s;
    let difficult_pct = 100.0 * difficult as f64 / w;
    let mut dale_chall = 0.1579 * difficult_pct + 0.0496 * words_per_sentence;
    if difficult_pct > 5.0 {
        dale_chall += 3.6365;
    }
    let r = ((w - poly) + 3.0 * poly) / s;
    let linsear = if r > 20.0 { r / 2.0 } else { (r - 2.0) / 2.0 };
    let forcast = 20.0 - (mono / w * 150.0) / 10.0;

    [
        fre,
        fkgl,
        fog,
        smog,
        ari,
        cli,
        lix,
        rix,
        dale_chall,
        syllables_per_word,
        poly / w,
        linsear,
        forcast,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::test_support::essay;

    #[test]
    fn syllable_heuristic() {
        assert_eq!(syllables("apple"), 2);
        assert_eq!(syllables("make"), 1);
        assert_eq!(syllables("the"), 1);
        assert_eq!(syllables("see"), 1);
        assert_eq!(syllables("beautiful"), 3);
        assert_eq!(syllables("rhythm"), 1);
        assert_eq!(syllables("1999"), 1);
        assert_eq!(syllables("table"), 2);
        assert_eq!(syllables("computer"), 3);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(extract_readability(&[]), [0.0; 13]);
        assert_eq!(extract_readability(&essay("... !")), [0.0; 13]);
    }

    #[test]
    fn flesch_on_three_words() {
        let f = extract_readability(&essay("The cat sat."));
        // 206.835 - 1.015 * 3 - 84.6 * 1
        assert!((f[0] - 119.19).abs() < 1e-9, "{}", f[0]);
        assert!((f[1] - (0.39 * 3.0 + 11.8 - 15.59)).abs() < 1e-12);
        assert_eq!(f[9], 1.0);
        assert_eq!(f[10], 0.0);
        assert!((f[12] - 5.0).abs() < 1e-12);
    }
}
