//! The two-step decision: n-gram prediction, then spell-check refinement
//! among the target's confusable languages.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{self, Config, ConfigError, Mode, Settings, SimilarityMap};
use crate::lang::LanguageCode;
use crate::ngram::{ModelError, NgramModel};
use crate::spell::{SpellError, SpellLexicon};

/// File name of the classifier inside a configuration directory.
pub const MODEL_FILE: &str = "model.nglm";

/// First-step language predictor.
pub trait LanguagePredictor: Send + Sync {
    fn predict_language(&self, text: &str) -> LanguageCode;
}

impl LanguagePredictor for NgramModel {
    fn predict_language(&self, text: &str) -> LanguageCode {
        self.labels()[self.predict_index(text)].clone()
    }
}

impl<P: LanguagePredictor + ?Sized> LanguagePredictor for Arc<P> {
    fn predict_language(&self, text: &str) -> LanguageCode {
        (**self).predict_language(text)
    }
}

/// Word-correctness oracle for one language.
pub trait WordChecker: Send + Sync {
    fn check(&self, word: &str) -> bool;
}

impl WordChecker for SpellLexicon {
    fn check(&self, word: &str) -> bool {
        SpellLexicon::check(self, word)
    }
}

/// Lookup of a language's word checker.
pub trait LexiconSource {
    type Checker: WordChecker + ?Sized;

    fn lexicon(&self, lang: &LanguageCode) -> Option<&Self::Checker>;
}

impl<C: WordChecker> LexiconSource for HashMap<LanguageCode, C> {
    type Checker = C;

    fn lexicon(&self, lang: &LanguageCode) -> Option<&C> {
        self.get(lang)
    }
}

impl<C: WordChecker + ?Sized> LexiconSource for HashMap<LanguageCode, Arc<C>> {
    type Checker = C;

    fn lexicon(&self, lang: &LanguageCode) -> Option<&C> {
        self.get(lang).map(|c| &**c)
    }
}

#[derive(Debug, Error)]
pub enum DecisionError {
    #[error("no dictionary loaded for language `{0}`")]
    MissingLexicon(LanguageCode),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("model {}: {source}", path.display())]
    Model {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error("dictionary for `{language}`: {source}")]
    Dictionary {
        language: LanguageCode,
        #[source]
        source: SpellError,
    },
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

impl EngineError {
    /// True when a model or dictionary is absent, as opposed to malformed
    /// configuration.
    pub fn is_missing_resource(&self) -> bool {
        match self {
            EngineError::Config(e) => e.is_missing_resource(),
            EngineError::Model { source, .. } => {
                matches!(source, ModelError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
            }
            EngineError::Dictionary { source, .. } => matches!(source, SpellError::Io { .. }),
            EngineError::Decision(DecisionError::MissingLexicon(_)) => true,
        }
    }
}

/// Outcome of [`get_language`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Chosen language, or the unknown sentinel.
    pub language: LanguageCode,
    /// The n-gram classifier's label for the lowercased sentence.
    pub primary_prediction: LanguageCode,
    /// Error rate of every spell-checked language, in configured order.
    /// Empty when spell checking did not run.
    pub error_rates: Vec<(LanguageCode, f64)>,
    /// Whether spell checking ran.
    pub refined: bool,
}

impl Verdict {
    fn primary(prediction: LanguageCode) -> Self {
        Verdict {
            language: prediction.clone(),
            primary_prediction: prediction,
            error_rates: Vec::new(),
            refined: false,
        }
    }

    pub fn error_rate(&self, lang: &LanguageCode) -> Option<f64> {
        self.error_rates
            .iter()
            .find(|(l, _)| l == lang)
            .map(|(_, r)| *r)
    }
}

fn is_all_caps(token: &str) -> bool {
    token.chars().nth(1).is_some() && token.chars().all(char::is_uppercase)
}

/// Tokens worth spell-checking.
///
/// Splits on whitespace, trims non-letters from both ends and drops tokens
/// that end up empty, still contain a non-letter, or are fully uppercase
/// with at least two letters. Case is preserved.
pub fn relevant_tokens(sentence: &str) -> Vec<&str> {
    sentence
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphabetic()))
        .filter(|t| !t.is_empty() && t.chars().all(char::is_alphabetic) && !is_all_caps(t))
        .collect()
}

/// `1 - correct / total`; an empty token list counts as fully wrong.
pub fn error_rate<C: WordChecker + ?Sized>(tokens: &[&str], lexicon: &C) -> f64 {
    if tokens.is_empty() {
        return 1.0;
    }
    let correct = tokens.iter().filter(|t| lexicon.check(t)).count();
    1.0 - correct as f64 / tokens.len() as f64
}

/// Identifies the language of `sentence` given the language a previous
/// identifier claimed for it.
///
/// 1. Predict on the lowercased sentence.
/// 2. Unless the target has confusable languages and the prediction is one
///    of them (or the target), return the prediction.
/// 3. Spell-check against every confusable language; languages within the
///    error threshold are candidates, and those with the lowest rate are the
///    refined candidates.
/// 4. One refined candidate wins outright. Ties go to the target, then to the
///    prediction, then to the first in configured order (aggressive), or to
///    the target only on an error-free sentence (conservative). With no
///    candidates, aggressive falls back to the prediction and conservative
///    abstains.
pub fn get_language<P, L>(
    target: &LanguageCode,
    sentence: &str,
    mode: Mode,
    similar: &SimilarityMap,
    settings: &Settings,
    predictor: &P,
    lexicons: &L,
) -> Result<Verdict, DecisionError>
where
    P: LanguagePredictor + ?Sized,
    L: LexiconSource + ?Sized,
{
    let langs = similar.similar_languages(target);
    let prediction = predictor.predict_language(&sentence.to_lowercase());
    if langs.len() == 1 || !langs.contains(&prediction) {
        return Ok(Verdict::primary(prediction));
    }

    let tokens = relevant_tokens(sentence);
    let mut rates = Vec::with_capacity(langs.len());
    for lang in langs {
        let lexicon = lexicons
            .lexicon(&lang)
            .ok_or_else(|| DecisionError::MissingLexicon(lang.clone()))?;
        let rate = error_rate(&tokens, lexicon);
        rates.push((lang, rate));
    }

    let within = |rate: f64| rate <= settings.error_threshold;
    let best = rates
        .iter()
        .map(|(_, r)| *r)
        .filter(|r| within(*r))
        .fold(f64::INFINITY, f64::min);
    let refined: Vec<&LanguageCode> = rates
        .iter()
        .filter(|(_, r)| within(*r) && *r == best)
        .map(|(l, _)| l)
        .collect();

    let unknown = || settings.unknown_code.clone();
    let language = match (refined.as_slice(), mode) {
        ([], Mode::Aggressive) => prediction.clone(),
        ([], Mode::Conservative) => unknown(),
        ([only], _) => (*only).clone(),
        (many, Mode::Aggressive) => {
            if many.contains(&target) {
                target.clone()
            } else if many.contains(&&prediction) {
                prediction.clone()
            } else {
                many[0].clone()
            }
        }
        (many, Mode::Conservative) => {
            if many.contains(&target) && best == 0.0 {
                target.clone()
            } else {
                unknown()
            }
        }
    };

    Ok(Verdict {
        language,
        primary_prediction: prediction,
        error_rates: rates,
        refined: true,
    })
}

/// A loaded predictor, similarity map and dictionaries. Immutable and
/// cheap to clone; share it across threads freely.
#[derive(Debug)]
pub struct Engine<P: ?Sized = NgramModel, C: ?Sized = SpellLexicon> {
    similar: Arc<SimilarityMap>,
    settings: Settings,
    predictor: Arc<P>,
    lexicons: Arc<HashMap<LanguageCode, Arc<C>>>,
}

impl<P: ?Sized, C: ?Sized> Clone for Engine<P, C> {
    fn clone(&self) -> Self {
        Engine {
            similar: Arc::clone(&self.similar),
            settings: self.settings.clone(),
            predictor: Arc::clone(&self.predictor),
            lexicons: Arc::clone(&self.lexicons),
        }
    }
}

impl<P, C> Engine<P, C>
where
    P: LanguagePredictor + ?Sized,
    C: WordChecker + ?Sized,
{
    pub fn new(
        similar: SimilarityMap,
        settings: Settings,
        predictor: Arc<P>,
        lexicons: HashMap<LanguageCode, Arc<C>>,
    ) -> Self {
        Engine {
            similar: Arc::new(similar),
            settings,
            predictor,
            lexicons: Arc::new(lexicons),
        }
    }

    pub fn similar(&self) -> &SimilarityMap {
        &self.similar
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn predictor(&self) -> &P {
        &self.predictor
    }

    pub fn lexicon(&self, lang: &LanguageCode) -> Option<&C> {
        self.lexicons.get(lang).map(|c| &**c)
    }

    /// Same engine with a different error threshold.
    pub fn with_error_threshold(&self, threshold: f64) -> Self {
        let mut engine = self.clone();
        engine.settings.error_threshold = threshold;
        engine
    }

    /// Checks that every language spell-checked for `target` has a lexicon.
    pub fn validate_target(&self, target: &LanguageCode) -> Result<(), DecisionError> {
        let langs = self.similar.similar_languages(target);
        if langs.len() == 1 {
            return Ok(());
        }
        match langs.iter().find(|l| !self.lexicons.contains_key(*l)) {
            Some(missing) => Err(DecisionError::MissingLexicon(missing.clone())),
            None => Ok(()),
        }
    }

    pub fn get_language(
        &self,
        target: &LanguageCode,
        sentence: &str,
        mode: Mode,
    ) -> Result<Verdict, DecisionError> {
        get_language(
            target,
            sentence,
            mode,
            &self.similar,
            &self.settings,
            &*self.predictor,
            &*self.lexicons,
        )
    }
}

impl Engine<NgramModel, SpellLexicon> {
    /// Loads configuration, `model.nglm` and every configured dictionary
    /// from `dir`.
    pub fn from_config_dir(dir: &Path) -> Result<Self, EngineError> {
        let config = config::load_config(dir)?;
        let model = dir.join(MODEL_FILE);
        Self::load(&config, &model, None)
    }

    /// Builds an engine from a loaded configuration. With `languages`, only
    /// those dictionaries are read; otherwise every language in the
    /// similarity map is.
    pub fn load(
        config: &Config,
        model_path: &Path,
        languages: Option<&[LanguageCode]>,
    ) -> Result<Self, EngineError> {
        let model = NgramModel::load(model_path).map_err(|source| EngineError::Model {
            path: model_path.to_path_buf(),
            source,
        })?;
        let langs = match languages {
            Some(l) => l.to_vec(),
            None => config.similar.languages(),
        };
        let lexicons = load_lexicons(&config.registry, &langs)?;
        Ok(Engine::new(
            config.similar.clone(),
            config.settings.clone(),
            Arc::new(model),
            lexicons,
        ))
    }
}

/// Reads the dictionaries for `langs`; languages sharing a dictionary share
/// one parsed lexicon.
pub fn load_lexicons(
    registry: &config::DictionaryRegistry,
    langs: &[LanguageCode],
) -> Result<HashMap<LanguageCode, Arc<SpellLexicon>>, EngineError> {
    let mut by_path: HashMap<PathBuf, Arc<SpellLexicon>> = HashMap::new();
    let mut out = HashMap::new();
    for lang in langs {
        let (aff, dic) = registry.check_available(lang)?;
        let lexicon = match by_path.get(&aff) {
            Some(l) => Arc::clone(l),
            None => {
                let l = SpellLexicon::from_files(&aff, &dic).map_err(|source| {
                    EngineError::Dictionary {
                        language: lang.clone(),
                        source,
                    }
                })?;
                let l = Arc::new(l);
                by_path.insert(aff, Arc::clone(&l));
                l
            }
        };
        out.insert(lang.clone(), lexicon);
    }
    Ok(out)
}
