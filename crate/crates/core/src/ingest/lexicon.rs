//! Closed-class word lists and a small rule-based lemmatizer for the
//! controlled authoring grammar.

use crate::domain::singularize;

pub const DETERMINERS: &[&str] = &[
    "a", "an", "the", "some", "any", "this", "that", "these", "those", "every", "each", "no", "all", "many", "several",
    "few", "another", "other", "much",
];
pub const POSSESSIVES: &[&str] = &["his", "her", "its", "their", "my", "your", "our"];
pub const SUBJECT_PRONOUNS: &[&str] = &["he", "she", "it", "they", "i", "we", "you"];
pub const OBJECT_PRONOUNS: &[&str] = &["him", "her", "it", "them", "me", "us", "you", "himself", "herself", "itself"];
pub const PREPOSITIONS: &[&str] = &[
    "to",
    "in",
    "at",
    "on",
    "of",
    "for",
    "with",
    "from",
    "by",
    "about",
    "into",
    "onto",
    "as",
    "including",
    "near",
    "under",
    "over",
    "through",
    "during",
    "after",
    "before",
    "around",
    "without",
    "behind",
    "between",
    "across",
    "along",
    "toward",
    "towards",
    "against",
    "among",
    "inside",
    "outside",
    "beside",
    "upon",
    "within",
    "like",
];
/// Prepositions that attach to the preceding nominal or adjective.
pub const NOMINAL_PREPOSITIONS: &[&str] = &["as", "including", "of", "like"];
pub const MODALS: &[&str] =
    &["can", "could", "will", "would", "shall", "should", "may", "might", "must", "do", "does", "did", "ca", "wo"];
pub const BE_FORMS: &[&str] = &["is", "are", "am", "was", "were", "be", "been", "being"];
pub const NEGATIONS: &[&str] = &["not", "n't", "never"];
pub const COORDINATORS: &[&str] = &["and", "or", "but"];
pub const SUBORDINATORS: &[&str] = &["because", "while", "although", "though", "since", "unless"];
pub const PARTICLES: &[&str] = &["out", "up", "down", "off", "away", "back"];
/// Verbs that take a `to`-infinitive complement.
pub const CATENATIVE: &[&str] = &[
    "like", "want", "love", "hate", "need", "wish", "hope", "plan", "prefer", "intend", "decide", "try", "learn",
    "enjoy",
];
/// Verbs that take an adjectival complement.
pub const COPULAR: &[&str] =
    &["be", "feel", "get", "become", "seem", "look", "remain", "stay", "grow", "turn", "appear", "sound", "keep"];
/// Verbs whose bare-infinitive complement follows the object ("sees the team lose").
pub const PERCEPTION: &[&str] = &["see", "watch", "hear", "let", "make", "help", "notice"];

pub const ADVERBS: &[&str] = &[
    "then",
    "often",
    "always",
    "sometimes",
    "usually",
    "possibly",
    "probably",
    "definitely",
    "certainly",
    "maybe",
    "perhaps",
    "really",
    "very",
    "extremely",
    "slightly",
    "moderately",
    "more",
    "less",
    "most",
    "least",
    "quite",
    "so",
    "too",
    "also",
    "rather",
    "somewhat",
    "highly",
    "fairly",
    "again",
    "now",
    "still",
    "already",
    "just",
    "only",
    "even",
    "rarely",
    "frequently",
    "immediately",
    "afterwards",
    "much",
];
const LY_NOUNS: &[&str] = &[
    "family", "belly", "jelly", "holly", "bully", "ally", "rally", "reply", "supply", "fly", "lily", "only", "daily",
    "early", "holy", "silly", "ugly", "lovely", "friendly", "lonely", "curly", "jolly", "sly",
];

pub const ADJECTIVES: &[&str] = &[
    "different",
    "aware",
    "tired",
    "hungry",
    "thirsty",
    "angry",
    "happy",
    "sad",
    "knowledgeable",
    "favorite",
    "favourite",
    "blind",
    "new",
    "old",
    "good",
    "bad",
    "big",
    "small",
    "little",
    "proud",
    "scared",
    "afraid",
    "cheerful",
    "gloomy",
    "calm",
    "sleepy",
    "bored",
    "excited",
    "nervous",
    "lonely",
    "full",
    "empty",
    "clean",
    "dirty",
    "sick",
    "healthy",
    "rich",
    "poor",
    "hot",
    "cold",
    "warm",
    "wet",
    "dry",
    "busy",
    "free",
    "safe",
    "ready",
    "quiet",
    "loud",
    "strong",
    "weak",
    "fresh",
    "delicious",
    "various",
    "same",
    "local",
    "nearby",
    "wild",
    "young",
    "kind",
    "curious",
    "jealous",
    "upset",
    "furious",
    "glad",
    "joyful",
    "disgusted",
    "surprised",
    "fearful",
    "unhappy",
    "content",
    "satisfied",
    "relaxed",
    "anxious",
    "worried",
    "awake",
    "asleep",
    "alive",
    "late",
    "hard",
    "easy",
    "loyal",
    "famous",
    "friendly",
    "mad",
    "grumpy",
    "fit",
    "smart",
    "clever",
    "wise",
    "brave",
    "shy",
    "lazy",
    "sure",
    "certain",
    "interesting",
    "boring",
    "annoyed",
    "ashamed",
    "embarrassed",
    "lost",
    "late",
    "fun",
    "great",
    "nice",
    "long",
    "short",
    "open",
    "closed",
    "favourite",
    "strange",
    "important",
    "hurt",
    "injured",
    "dizzy",
    "sore",
    "cozy",
    "comfortable",
];
const ADJ_SUFFIXES: &[&str] = &["ful", "ous", "ive", "able", "ible", "less", "ish"];

/// Base forms of frequent verbs, used to recognise verbs outside the verb slot.
pub const VERB_BASES: &[&str] = &[
    "go", "eat", "drink", "sleep", "read", "bring", "play", "ride", "run", "walk", "swim", "climb", "race", "fly",
    "sing", "dance", "cook", "buy", "sell", "feed", "help", "see", "watch", "hear", "lose", "win", "fail", "pass",
    "study", "learn", "teach", "write", "draw", "paint", "build", "make", "take", "give", "get", "have", "do", "be",
    "feel", "become", "stand", "sit", "visit", "meet", "talk", "speak", "say", "tell", "call", "open", "close",
    "clean", "wash", "fix", "use", "need", "want", "like", "love", "hate", "try", "focus", "engage", "own", "possess",
    "carry", "hold", "keep", "leave", "arrive", "come", "return", "bark", "fetch", "chase", "guard", "guide", "catch",
    "throw", "jump", "rest", "relax", "work", "earn", "spend", "save", "pay", "wait", "listen", "look", "smell",
    "taste", "touch", "find", "search", "hide", "explore", "travel", "drive", "cry", "laugh", "smile", "shout",
    "scream", "hug", "kiss", "greet", "thank", "serve", "order", "prepare", "collect", "gather", "grow", "plant",
    "water", "pet", "brush", "groom", "bite", "steal", "borrow", "lend", "share", "bake", "fish", "hunt", "nest",
    "lay", "sniff", "dig", "wag", "practice", "exercise", "train", "compete", "score", "finish", "start", "begin",
    "stop", "answer", "ask", "solve", "think", "know", "remember", "forget", "believe", "hope", "wish", "decide",
    "choose", "pick", "drop", "lift", "push", "pull", "kick", "hit", "break", "repair", "wear", "sew", "knit",
];

/// `(inflected, base)` pairs the suffix rules get wrong.
const IRREGULAR_VERBS: &[(&str, &str)] = &[
    ("is", "be"),
    ("are", "be"),
    ("am", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("goes", "go"),
    ("went", "go"),
    ("gone", "go"),
    ("got", "get"),
    ("gotten", "get"),
    ("made", "make"),
    ("took", "take"),
    ("taken", "take"),
    ("saw", "see"),
    ("seen", "see"),
    ("seeing", "see"),
    ("brought", "bring"),
    ("felt", "feel"),
    ("became", "become"),
    ("ate", "eat"),
    ("eaten", "eat"),
    ("drank", "drink"),
    ("drunk", "drink"),
    ("rode", "ride"),
    ("ridden", "ride"),
    ("ran", "run"),
    ("sat", "sit"),
    ("stood", "stand"),
    ("bought", "buy"),
    ("thought", "think"),
    ("found", "find"),
    ("gave", "give"),
    ("given", "give"),
    ("came", "come"),
    ("knew", "know"),
    ("known", "know"),
    ("said", "say"),
    ("told", "tell"),
    ("left", "leave"),
    ("met", "meet"),
    ("slept", "sleep"),
    ("swam", "swim"),
    ("sang", "sing"),
    ("won", "win"),
    ("lost", "lose"),
    ("fell", "fall"),
    ("flew", "fly"),
    ("flies", "fly"),
    ("wrote", "write"),
    ("written", "write"),
    ("spoke", "speak"),
    ("taught", "teach"),
    ("caught", "catch"),
    ("paid", "pay"),
    ("held", "hold"),
    ("kept", "keep"),
    ("began", "begin"),
    ("built", "build"),
    ("sent", "send"),
    ("spent", "spend"),
    ("wore", "wear"),
    ("heard", "hear"),
    ("fed", "feed"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("ca", "can"),
    ("wo", "will"),
    ("n't", "not"),
    ("taking", "take"),
    ("making", "make"),
    ("having", "have"),
    ("giving", "give"),
    ("leaving", "leave"),
    ("loving", "love"),
    ("living", "live"),
];

const E_FINAL_STEMS: &[&str] = &[
    "rid", "rac", "mak", "tak", "hav", "com", "lik", "us", "bak", "shar", "skat", "danc", "serv", "sav", "driv",
    "writ", "chas", "smil", "argu", "practic", "prepar", "explor", "exercis", "receiv", "welcom", "hop", "choos",
    "los", "clos", "us", "scor", "ador", "car", "dar", "stor", "tast", "guid",
];

pub fn is_in(list: &[&str], word: &str) -> bool {
    list.contains(&word)
}

pub fn is_adverb(word: &str) -> bool {
    is_in(ADVERBS, word) || (word.len() > 4 && word.ends_with("ly") && !is_in(LY_NOUNS, word))
}

pub fn is_adjective(word: &str) -> bool {
    is_in(ADJECTIVES, word) || (word.len() > 5 && ADJ_SUFFIXES.iter().any(|s| word.ends_with(s)))
}

pub fn is_function_word(word: &str) -> bool {
    is_in(DETERMINERS, word)
        || is_in(POSSESSIVES, word)
        || is_in(SUBJECT_PRONOUNS, word)
        || is_in(OBJECT_PRONOUNS, word)
        || is_in(PREPOSITIONS, word)
        || is_in(MODALS, word)
        || is_in(BE_FORMS, word)
        || is_in(NEGATIONS, word)
        || is_in(COORDINATORS, word)
        || is_in(SUBORDINATORS, word)
}

/// Whether `word` is an inflected or base form of a known verb.
pub fn is_known_verb(word: &str) -> bool {
    IRREGULAR_VERBS.iter().any(|(w, _)| *w == word) || is_in(VERB_BASES, &verb_lemma(word))
}

fn strip_doubled(stem: &str) -> Option<String> {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !matches!(b[n - 1], b'l' | b's' | b'z' | b'e' | b'o') {
        let c = b[n - 1];
        if !matches!(c, b'a' | b'i' | b'u') {
            return Some(stem[..n - 1].to_string());
        }
    }
    None
}

fn restore_e(stem: &str) -> String {
    if E_FINAL_STEMS.contains(&stem) || stem.ends_with('v') || (stem.len() >= 5 && stem.ends_with("at")) {
        return format!("{stem}e");
    }
    stem.to_string()
}

/// Lemma of a verb form.
pub fn verb_lemma(word: &str) -> String {
    let w = word.to_lowercase();
    if let Some((_, base)) = IRREGULAR_VERBS.iter().find(|(f, _)| *f == w) {
        return base.to_string();
    }
    if is_in(VERB_BASES, &w) {
        return w;
    }
    if let Some(stem) = w.strip_suffix("ing").filter(|s| s.len() >= 2) {
        if is_in(VERB_BASES, stem) {
            return stem.to_string();
        }
        if let Some(s) = strip_doubled(stem) {
            return s;
        }
        return restore_e(stem);
    }
    if let Some(stem) = w.strip_suffix("ied").filter(|s| s.len() >= 2) {
        return format!("{stem}y");
    }
    if let Some(stem) = w.strip_suffix("ed").filter(|s| s.len() >= 2) {
        if is_in(VERB_BASES, stem) {
            return stem.to_string();
        }
        if let Some(base) = w.strip_suffix('d').filter(|b| is_in(VERB_BASES, b)) {
            return base.to_string();
        }
        if let Some(s) = strip_doubled(stem) {
            return s;
        }
        return restore_e(stem);
    }
    if let Some(stem) = w.strip_suffix("ies").filter(|s| s.len() >= 2) {
        return format!("{stem}y");
    }
    if let Some(stem) = w.strip_suffix("es") {
        if is_in(VERB_BASES, stem) || ["sh", "ch", "x", "z", "ss", "o"].iter().any(|s| stem.ends_with(s)) {
            return stem.to_string();
        }
    }
    if w.len() > 3 && w.ends_with('s') && !w.ends_with("ss") {
        return w[..w.len() - 1].to_string();
    }
    w
}

/// Lemma of a noun form.
pub fn noun_lemma(word: &str) -> String {
    singularize(&word.to_lowercase())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verb_lemmas() {
        for (form, lemma) in [
            ("goes", "go"),
            ("riding", "ride"),
            ("racing", "race"),
            ("climbing", "climb"),
            ("running", "run"),
            ("falling", "fall"),
            ("brings", "bring"),
            ("reads", "read"),
            ("fails", "fail"),
            ("feels", "feel"),
            ("has", "have"),
            ("plays", "play"),
            ("watches", "watch"),
            ("uses", "use"),
            ("focuses", "focus"),
            ("focusing", "focus"),
            ("cries", "cry"),
            ("liked", "like"),
            ("stopped", "stop"),
            ("helps", "help"),
            ("sleeps", "sleep"),
            ("eating", "eat"),
            ("visiting", "visit"),
            ("celebrating", "celebrate"),
        ] {
            assert_eq!(verb_lemma(form), lemma, "{form}");
        }
    }

    #[test]
    fn word_classes() {
        assert!(is_adjective("knowledgeable"));
        assert!(is_adjective("aware"));
        assert!(!is_adjective("station"));
        assert!(is_adverb("extremely"));
        assert!(!is_adverb("family"));
        assert!(is_known_verb("reads"));
        assert!(!is_known_verb("station"));
    }
}
