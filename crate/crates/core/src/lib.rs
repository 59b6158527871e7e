//! Second-opinion language identification.
//!
//! A fast hashed character n-gram classifier produces a first prediction for a
//! sentence. When that prediction falls among the languages configured as
//! confusable with a targeted language, every confusable language's affix
//! dictionary spell-checks the sentence and the language with the fewest
//! spelling errors wins.
//!
//! ```no_run
//! use secondlang::{Engine, LanguageCode, Mode};
//!
//! let engine = Engine::from_config_dir("fixtures/demo".as_ref()).unwrap();
//! let en: LanguageCode = "en".parse().unwrap();
//! let verdict = engine.get_language(&en, "Hola, mundo", Mode::Conservative).unwrap();
//! assert_eq!(verdict.language.as_str(), "es");
//! ```

pub mod bench;
pub mod config;
pub mod decision;
pub mod lang;
pub mod ngram;
pub mod spell;

pub use bench::{EvalReport, GoldSet};
pub use config::{DictionaryRegistry, Mode, Settings, SimilarityMap};
pub use decision::{Engine, LanguagePredictor, Verdict, WordChecker};
pub use lang::LanguageCode;
pub use ngram::{NgramModel, Prediction, TrainParams};
pub use spell::SpellLexicon;
