//! Independent reference implementations shared by the integration and
//! acceptance tests. Everything here is written for clarity, not speed, and
//! deliberately avoids calling the library code it is checking.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use secondlang::config::{Mode, Settings, SimilarityMap};
use secondlang::decision::{LanguagePredictor, WordChecker};
use secondlang::LanguageCode;

pub fn code(s: &str) -> LanguageCode {
    s.parse().unwrap()
}

// ---------------------------------------------------------------------------
// Decision stubs and the naive transcription of the algorithm
// ---------------------------------------------------------------------------

/// Predicts the same label for every sentence.
#[derive(Debug, Clone)]
pub struct FixedPredictor(pub LanguageCode);

impl LanguagePredictor for FixedPredictor {
    fn predict_language(&self, _: &str) -> LanguageCode {
        self.0.clone()
    }
}

/// Accepts exactly the listed words, with the lowercase retry that real
/// lexicons perform.
#[derive(Debug, Clone, Default)]
pub struct WordList(pub HashSet<String>);

impl WordChecker for WordList {
    fn check(&self, word: &str) -> bool {
        self.0.contains(word) || self.0.contains(&word.to_lowercase())
    }
}

fn naive_is_letter_token(token: &str) -> bool {
    let mut any = false;
    for c in token.chars() {
        if !c.is_alphabetic() {
            return false;
        }
        any = true;
    }
    any
}

fn naive_tokens(sentence: &str) -> Vec<String> {
    let mut kept = Vec::new();
    for raw in sentence.split_whitespace() {
        // remove_non_alphabetic: peel non-letters off both ends
        let chars: Vec<char> = raw.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && !chars[start].is_alphabetic() {
            start += 1;
        }
        while end > start && !chars[end - 1].is_alphabetic() {
            end -= 1;
        }
        let token: String = chars[start..end].iter().collect();
        if !naive_is_letter_token(&token) {
            continue;
        }
        // remove_uppercased: acronyms such as "NASA", but not "I" or "A"
        let letters = token.chars().count();
        let upper = token.chars().filter(|c| c.is_uppercase()).count();
        if letters >= 2 && upper == letters {
            continue;
        }
        kept.push(token);
    }
    kept
}

/// Line-by-line transcription of the published pseudocode. The one change
/// is that `best_error_rate` starts above any possible rate so that it really
/// tracks the minimum (initialised to 0 it could never be updated).
pub fn naive_get_language(
    target: &LanguageCode,
    sentence: &str,
    strategy: Mode,
    similar: &SimilarityMap,
    settings: &Settings,
    fasttext: &dyn LanguagePredictor,
    hunspell: &HashMap<LanguageCode, WordList>,
) -> LanguageCode {
    // similar_langs <- SimilarLanguages(target) ∪ {target}
    let mut similar_langs: Vec<LanguageCode> = Vec::new();
    if let Some(list) = similar.get(target) {
        for l in list {
            similar_langs.push(l.clone());
        }
    }
    if !similar_langs.contains(target) {
        similar_langs.push(target.clone());
    }
    let pred_ft = fasttext.predict_language(&sentence.to_lowercase());
    if similar_langs.len() == 1 {
        return pred_ft;
    }
    if !similar_langs.contains(&pred_ft) {
        return pred_ft;
    }

    let mut candidate_langs: Vec<(LanguageCode, f64)> = Vec::new();
    let mut best_error_rate = f64::MAX;
    for sim_lang in &similar_langs {
        let relevant_tokens = naive_tokens(sentence);
        let lexicon = &hunspell[sim_lang];
        let correct_tokens: Vec<&String> = relevant_tokens
            .iter()
            .filter(|t| lexicon.check(t))
            .collect();
        let error_rate = if relevant_tokens.is_empty() {
            1.0
        } else {
            1.0 - (correct_tokens.len() as f64 / relevant_tokens.len() as f64)
        };
        if error_rate <= settings.error_threshold {
            candidate_langs.push((sim_lang.clone(), error_rate));
            if error_rate < best_error_rate {
                best_error_rate = error_rate;
            }
        }
    }

    // candidates_with_lowest_error_rate(candidate_langs)
    let mut refined_candidates: Vec<LanguageCode> = Vec::new();
    for (lang, rate) in &candidate_langs {
        let lowest = candidate_langs.iter().all(|(_, other)| rate <= other);
        if lowest {
            refined_candidates.push(lang.clone());
        }
    }

    let unknown_lang = settings.unknown_code.clone();
    if refined_candidates.len() == 1 {
        refined_candidates[0].clone()
    } else if refined_candidates.len() > 1 {
        match strategy {
            Mode::Aggressive => {
                if refined_candidates.contains(target) {
                    target.clone()
                } else if refined_candidates.contains(&pred_ft) {
                    pred_ft
                } else {
                    refined_candidates[0].clone()
                }
            }
            Mode::Conservative => {
                if refined_candidates.contains(target) && best_error_rate == 0.0 {
                    target.clone()
                } else {
                    unknown_lang
                }
            }
        }
    } else {
        match strategy {
            Mode::Aggressive => pred_ft,
            Mode::Conservative => unknown_lang,
        }
    }
}

/// A random configuration plus one sentence to identify.
#[derive(Debug, Clone)]
pub struct DecisionCase {
    pub similar: SimilarityMap,
    pub settings: Settings,
    pub predictor: FixedPredictor,
    pub lexicons: HashMap<LanguageCode, WordList>,
    pub target: LanguageCode,
    pub sentence: String,
}

impl DecisionCase {
    /// Languages the target's lookup spell-checks, independently computed.
    pub fn similar_langs(&self) -> Vec<LanguageCode> {
        let mut langs: Vec<LanguageCode> = self.similar.get(&self.target).unwrap_or(&[]).to_vec();
        if !langs.contains(&self.target) {
            langs.push(self.target.clone());
        }
        langs
    }
}

const POOL: [&str; 8] = ["aa", "bb", "cc", "dd", "ee", "ff", "gg", "hh"];
const VOCAB: [&str; 10] = [
    "sol", "mar", "casa", "perro", "gato", "luz", "rio", "pan", "vino", "flor",
];
const THRESHOLDS: [f64; 7] = [0.0, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 1.0];

/// Generates a case over 2–5 configured languages with small overlapping
/// vocabularies, so ties, empty candidate sets and gate exits all occur.
pub fn random_case<R: Rng>(rng: &mut R) -> DecisionCase {
    let n = rng.random_range(2..=5);
    let mut pool: Vec<&str> = POOL.to_vec();
    pool.shuffle(rng);
    let langs: Vec<LanguageCode> = pool[..n].iter().map(|s| code(s)).collect();
    let outsider = code(pool[n]);

    let mut similar = SimilarityMap::new();
    for (i, key) in langs.iter().enumerate() {
        // some keys are left unconfigured so the single-language gate fires
        if i > 0 && rng.random_bool(0.2) {
            continue;
        }
        let mut list: Vec<LanguageCode> = langs
            .iter()
            .filter(|l| *l != key && rng.random_bool(0.7))
            .cloned()
            .collect();
        if rng.random_bool(0.5) {
            let at = rng.random_range(0..=list.len());
            list.insert(at, key.clone());
        }
        similar.insert(key.clone(), list).unwrap();
    }

    let mut lexicons = HashMap::new();
    for lang in &langs {
        let words = VOCAB
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .map(|w| w.to_string())
            .collect();
        lexicons.insert(lang.clone(), WordList(words));
    }

    let target = langs.choose(rng).unwrap().clone();
    let prediction = if rng.random_bool(0.15) {
        outsider
    } else {
        langs.choose(rng).unwrap().clone()
    };

    let len = rng.random_range(0..=5);
    let mut tokens = Vec::with_capacity(len);
    for _ in 0..len {
        let word = *VOCAB.choose(rng).unwrap();
        let token = match rng.random_range(0..10) {
            0 => word.to_uppercase(),
            1 => {
                let mut c = word.chars();
                let first = c.next().unwrap().to_uppercase().collect::<String>();
                first + c.as_str()
            }
            2 => format!("{word},"),
            3 => format!("¿{word}?"),
            4 => "1234".to_string(),
            5 => format!("{word}-{word}"),
            6 => "xyzzy".to_string(),
            _ => word.to_string(),
        };
        tokens.push(token);
    }

    let settings = Settings {
        error_threshold: *THRESHOLDS.choose(rng).unwrap(),
        ..Settings::default()
    };

    DecisionCase {
        similar,
        settings,
        predictor: FixedPredictor(prediction),
        lexicons,
        target,
        sentence: tokens.join(" "),
    }
}

// ---------------------------------------------------------------------------
// Spell checking: random lexicons and forward expansion
// ---------------------------------------------------------------------------

pub const ALPHABET: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'o'];

#[derive(Debug, Clone)]
pub enum Elem {
    Any,
    Lit(char),
    In(Vec<char>),
    NotIn(Vec<char>),
}

impl Elem {
    fn matches(&self, c: char) -> bool {
        match self {
            Elem::Any => true,
            Elem::Lit(l) => *l == c,
            Elem::In(set) => set.contains(&c),
            Elem::NotIn(set) => !set.contains(&c),
        }
    }

    fn render(&self) -> String {
        match self {
            Elem::Any => ".".into(),
            Elem::Lit(c) => c.to_string(),
            Elem::In(set) => format!("[{}]", set.iter().collect::<String>()),
            Elem::NotIn(set) => format!("[^{}]", set.iter().collect::<String>()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefRule {
    pub prefix: bool,
    pub flag: char,
    pub cross: bool,
    pub strip: String,
    pub append: String,
    pub condition: Vec<Elem>,
}

impl RefRule {
    fn condition_holds(&self, root: &[char]) -> bool {
        let n = self.condition.len();
        if root.len() < n {
            return false;
        }
        let window = if self.prefix {
            &root[..n]
        } else {
            &root[root.len() - n..]
        };
        window
            .iter()
            .zip(&self.condition)
            .all(|(c, e)| e.matches(*c))
    }

    /// Forward application: the surface form, if this rule may attach.
    /// The root must keep at least one character after stripping.
    pub fn apply(&self, root: &str) -> Option<String> {
        let chars: Vec<char> = root.chars().collect();
        let strip: Vec<char> = self.strip.chars().collect();
        if chars.len() <= strip.len() || !self.condition_holds(&chars) {
            return None;
        }
        if self.prefix {
            if chars[..strip.len()] != strip[..] {
                return None;
            }
            let rest: String = chars[strip.len()..].iter().collect();
            Some(format!("{}{rest}", self.append))
        } else {
            if chars[chars.len() - strip.len()..] != strip[..] {
                return None;
            }
            let stem: String = chars[..chars.len() - strip.len()].iter().collect();
            Some(format!("{stem}{}", self.append))
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefLexicon {
    pub rules: Vec<RefRule>,
    pub roots: Vec<(String, BTreeSet<char>)>,
}

fn random_word<R: Rng>(rng: &mut R, min: usize, max: usize) -> String {
    let len = rng.random_range(min..=max);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn random_elem<R: Rng>(rng: &mut R) -> Elem {
    let mut set: Vec<char> = ALPHABET.choose_multiple(rng, 2).copied().collect();
    set.sort_unstable();
    match rng.random_range(0..4) {
        0 => Elem::Any,
        1 => Elem::Lit(*ALPHABET.choose(rng).unwrap()),
        2 => Elem::In(set),
        _ => Elem::NotIn(set),
    }
}

impl RefLexicon {
    /// Up to 20 roots and up to 5 rules spread over a few flags.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let flags = ['A', 'B', 'C', 'D'];
        let mut rules = Vec::new();
        let rule_count = rng.random_range(2..=5);
        let mut kinds: HashMap<char, (bool, bool)> = HashMap::new();
        for _ in 0..rule_count {
            let flag = *flags.choose(rng).unwrap();
            // all rules under one flag share kind and cross-product setting
            let (prefix, cross) = *kinds
                .entry(flag)
                .or_insert_with(|| (rng.random_bool(0.5), rng.random_bool(0.6)));
            let strip = if rng.random_bool(0.4) {
                random_word(rng, 1, 1)
            } else {
                String::new()
            };
            let append = if rng.random_bool(0.1) {
                String::new()
            } else {
                random_word(rng, 1, 3)
            };
            let mut condition: Vec<Elem> = (0..rng.random_range(0..=2))
                .map(|_| random_elem(rng))
                .collect();
            // the strip string must be consistent with the condition edge
            if !strip.is_empty() {
                let lit = Elem::Lit(strip.chars().next().unwrap());
                if prefix {
                    condition.insert(0, lit);
                } else {
                    condition.push(lit);
                }
            }
            rules.push(RefRule {
                prefix,
                flag,
                cross,
                strip,
                append,
                condition,
            });
        }
        let used: Vec<char> = {
            let mut f: Vec<char> = kinds.keys().copied().collect();
            f.sort_unstable();
            f
        };
        let mut roots: Vec<(String, BTreeSet<char>)> = Vec::new();
        for _ in 0..rng.random_range(3..=20) {
            let word = random_word(rng, 2, 5);
            if roots.iter().any(|(w, _)| *w == word) {
                continue;
            }
            let flags = used
                .iter()
                .filter(|_| rng.random_bool(0.6))
                .copied()
                .collect();
            roots.push((word, flags));
        }
        RefLexicon { rules, roots }
    }

    pub fn aff_text(&self) -> String {
        let mut out = String::from("SET UTF-8\nFLAG UTF-8\n");
        let mut flags: Vec<char> = self.rules.iter().map(|r| r.flag).collect();
        flags.sort_unstable();
        flags.dedup();
        for flag in flags {
            let group: Vec<&RefRule> = self.rules.iter().filter(|r| r.flag == flag).collect();
            let kind = if group[0].prefix { "PFX" } else { "SFX" };
            let cross = if group[0].cross { 'Y' } else { 'N' };
            out += &format!("{kind} {flag} {cross} {}\n", group.len());
            for r in group {
                let zero = |s: &str| {
                    if s.is_empty() {
                        "0".to_string()
                    } else {
                        s.to_string()
                    }
                };
                let cond: String = if r.condition.is_empty() {
                    ".".into()
                } else {
                    r.condition.iter().map(Elem::render).collect()
                };
                out += &format!(
                    "{kind} {flag} {} {} {cond}\n",
                    zero(&r.strip),
                    zero(&r.append)
                );
            }
        }
        out
    }

    pub fn dic_text(&self) -> String {
        let mut out = format!("{}\n", self.roots.len());
        for (word, flags) in &self.roots {
            if flags.is_empty() {
                out += &format!("{word}\n");
            } else {
                out += &format!("{word}/{}\n", flags.iter().collect::<String>());
            }
        }
        out
    }

    /// Every surface form: roots, root+suffix, prefix+root and, when both
    /// rules allow it, prefix+root+suffix.
    pub fn expand(&self) -> BTreeSet<String> {
        let mut forms = BTreeSet::new();
        for (root, flags) in &self.roots {
            forms.insert(root.clone());
            let mine: Vec<&RefRule> = self
                .rules
                .iter()
                .filter(|r| flags.contains(&r.flag))
                .collect();
            for r in &mine {
                if let Some(form) = r.apply(root) {
                    forms.insert(form);
                }
            }
            for sfx in mine.iter().filter(|r| !r.prefix && r.cross) {
                for pfx in mine.iter().filter(|r| r.prefix && r.cross) {
                    if let Some(form) = cross_form(root, pfx, sfx) {
                        forms.insert(form);
                    }
                }
            }
        }
        forms
    }
}

/// Prefix and suffix on the same root. Both conditions are judged on the
/// bare root, and the strips may not overlap.
fn cross_form(root: &str, pfx: &RefRule, sfx: &RefRule) -> Option<String> {
    let chars: Vec<char> = root.chars().collect();
    let ps = pfx.strip.chars().count();
    let ss = sfx.strip.chars().count();
    if chars.len() <= ps + ss {
        return None;
    }
    pfx.apply(root)?;
    sfx.apply(root)?;
    let core: String = chars[ps..chars.len() - ss].iter().collect();
    Some(format!("{}{core}{}", pfx.append, sfx.append))
}

/// A random single-character insertion, deletion or substitution.
pub fn mutate<R: Rng>(rng: &mut R, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    match rng.random_range(0..3) {
        0 => {
            let at = rng.random_range(0..=chars.len());
            chars.insert(at, *ALPHABET.choose(rng).unwrap());
        }
        1 if chars.len() > 1 => {
            chars.remove(rng.random_range(0..chars.len()));
        }
        _ => {
            let at = rng.random_range(0..chars.len());
            chars[at] = *ALPHABET.choose(rng).unwrap();
        }
    }
    chars.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Evaluation arithmetic
// ---------------------------------------------------------------------------

/// Per-label (precision, recall, F1) by direct counting over the pairs,
/// with F1 as the harmonic mean of precision and recall.
pub fn recount(
    gold: &[LanguageCode],
    predicted: &[LanguageCode],
) -> std::collections::BTreeMap<LanguageCode, (f64, f64, f64)> {
    let labels: BTreeSet<&LanguageCode> = gold.iter().collect();
    let mut out = std::collections::BTreeMap::new();
    for label in labels {
        let pairs = || gold.iter().zip(predicted);
        let tp = pairs().filter(|(g, p)| *g == label && *p == label).count() as f64;
        let fp = pairs().filter(|(g, p)| *g != label && *p == label).count() as f64;
        let fn_ = pairs().filter(|(g, p)| *g == label && *p != label).count() as f64;
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        out.insert(label.clone(), (precision, recall, f1));
    }
    out
}

/// Random gold labels with a noisy identifier's predictions.
pub fn random_predictions<R: Rng>(rng: &mut R) -> (Vec<LanguageCode>, Vec<LanguageCode>) {
    let labels: Vec<LanguageCode> = POOL[..rng.random_range(1..=5)]
        .iter()
        .map(|s| code(s))
        .collect();
    let extra: Vec<LanguageCode> = ["unk", "zz"].iter().map(|s| code(s)).collect();
    let n = rng.random_range(1..200);
    let mut gold = Vec::with_capacity(n);
    let mut predicted = Vec::with_capacity(n);
    for _ in 0..n {
        let g = labels.choose(rng).unwrap().clone();
        let p = match rng.random_range(0..10) {
            0..=5 => g.clone(),
            6..=8 => labels.choose(rng).unwrap().clone(),
            _ => extra.choose(rng).unwrap().clone(),
        };
        gold.push(g);
        predicted.push(p);
    }
    (gold, predicted)
}

// ---------------------------------------------------------------------------
// Suites shared by the integration tests and the acceptance run
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct DecisionStats {
    pub cases: usize,
    pub agreeing: usize,
    pub first_disagreement: Option<String>,
    pub aggressive_unknown: usize,
    pub conservative_outside: usize,
    /// gate exits, spell-checked, abstentions, prediction overridden
    pub branches: [usize; 4],
}

/// Runs `n` random cases through both the library and the naive
/// transcription, in both modes, and tallies agreement and mode contracts.
pub fn decision_suite(seed: u64, n: usize) -> DecisionStats {
    use rand::SeedableRng;
    use secondlang::decision::get_language;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut stats = DecisionStats::default();
    for i in 0..n {
        let case = random_case(&mut rng);
        let langs = case.similar_langs();
        let unknown = &case.settings.unknown_code;
        let mut agree = true;
        for mode in [Mode::Aggressive, Mode::Conservative] {
            let expected = naive_get_language(
                &case.target,
                &case.sentence,
                mode,
                &case.similar,
                &case.settings,
                &case.predictor,
                &case.lexicons,
            );
            let got = get_language(
                &case.target,
                &case.sentence,
                mode,
                &case.similar,
                &case.settings,
                &case.predictor,
                &case.lexicons,
            )
            .expect("every case configures all lexicons");
            if got.language != expected {
                agree = false;
                stats.first_disagreement.get_or_insert_with(|| {
                    format!(
                        "case {i} {mode}: got {} expected {expected}: {case:?}",
                        got.language
                    )
                });
            }
            let is_unknown = &got.language == unknown;
            match mode {
                Mode::Aggressive => stats.aggressive_unknown += usize::from(is_unknown),
                Mode::Conservative => {
                    let allowed = langs.contains(&got.language)
                        || got.language == got.primary_prediction
                        || is_unknown;
                    stats.conservative_outside += usize::from(!allowed);
                }
            }
            stats.branches[0] += usize::from(!got.refined);
            stats.branches[1] += usize::from(got.refined);
            stats.branches[2] += usize::from(is_unknown);
            stats.branches[3] += usize::from(got.refined && got.language != got.primary_prediction);
        }
        stats.cases += 1;
        stats.agreeing += usize::from(agree);
    }
    stats
}

/// Checks one random lexicon against its forward expansion: every form
/// must be accepted and `mutations` edit-distance-1 non-forms rejected.
/// Returns the number of forms checked.
pub fn spell_round<R: Rng>(rng: &mut R, mutations: usize) -> Result<usize, String> {
    use rand::seq::IteratorRandom;

    let reference = RefLexicon::random(rng);
    let aff = reference.aff_text();
    let dic = reference.dic_text();
    let lexicon = secondlang::SpellLexicon::parse(&aff, &dic).map_err(|e| e.to_string())?;
    if !lexicon.warnings().is_empty() {
        return Err(format!("unexpected warnings {:?}", lexicon.warnings()));
    }
    let forms = reference.expand();
    for form in &forms {
        if !lexicon.check(form) {
            return Err(format!("`{form}` rejected\n{aff}\n{dic}"));
        }
    }
    let mut rejected = 0;
    let mut attempts = 0;
    while rejected < mutations {
        attempts += 1;
        if attempts > 100 * mutations {
            return Err("too few mutations outside the form set".into());
        }
        let base = forms.iter().choose(rng).unwrap();
        let candidate = mutate(rng, base);
        if forms.contains(&candidate) {
            continue;
        }
        if lexicon.check(&candidate) {
            return Err(format!("`{candidate}` accepted\n{aff}\n{dic}"));
        }
        rejected += 1;
    }
    Ok(forms.len())
}

fn with_weight(
    model: &secondlang::NgramModel,
    input: bool,
    i: usize,
    value: f32,
) -> secondlang::NgramModel {
    let mut inw = model.input_weights().to_vec();
    let mut outw = model.output_weights().to_vec();
    if input {
        inw[i] = value;
    } else {
        outw[i] = value;
    }
    let (n_min, n_max) = model.ngram_range();
    secondlang::NgramModel::from_parts(
        model.labels().to_vec(),
        n_min,
        n_max,
        model.buckets(),
        model.dim(),
        model.hash_seed(),
        inw,
        outw,
    )
    .unwrap()
}

/// Compares analytic gradients with central differences (step `h`) on
/// random 2-label, 4-bucket, dim-2 models. Returns the largest relative
/// error and how many parameters were compared.
pub fn gradient_check(seed: u64, trials: usize, h: f32) -> (f64, usize) {
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<LanguageCode> = vec![code("aa"), code("bb")];
    let (buckets, dim) = (4u32, 2usize);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..trials {
        let input = (0..buckets as usize * dim)
            .map(|_| rng.random_range(-1.0f32..1.0))
            .collect();
        let output = (0..labels.len() * dim)
            .map(|_| rng.random_range(-1.0f32..1.0))
            .collect();
        let model = secondlang::NgramModel::from_parts(
            labels.clone(),
            1,
            3,
            buckets,
            dim,
            0,
            input,
            output,
        )
        .unwrap();
        let bag: Vec<u32> = (0..rng.random_range(1..6))
            .map(|_| rng.random_range(0..buckets))
            .collect();
        let label = rng.random_range(0..labels.len());
        let (_, grad) = model.loss_and_gradient(&bag, label);
        let sizes = [
            (true, model.input_weights().len()),
            (false, model.output_weights().len()),
        ];
        for (input, count) in sizes {
            for i in 0..count {
                let w = if input {
                    model.input_weights()[i]
                } else {
                    model.output_weights()[i]
                };
                let (plus, minus) = (w + h, w - h);
                let lp = with_weight(&model, input, i, plus)
                    .loss_and_gradient(&bag, label)
                    .0;
                let lm = with_weight(&model, input, i, minus)
                    .loss_and_gradient(&bag, label)
                    .0;
                // divide by the step actually taken after f32 rounding
                let numeric = (lp - lm) / (plus as f64 - minus as f64);
                let analytic = if input { grad.input[i] } else { grad.output[i] };
                let scale = numeric.abs().max(analytic.abs());
                let err = if scale < 1e-6 {
                    // untouched bucket: both should be zero
                    (numeric - analytic).abs()
                } else {
                    (numeric - analytic).abs() / scale
                };
                worst = worst.max(err);
                compared += 1;
            }
        }
    }
    (worst, compared)
}
