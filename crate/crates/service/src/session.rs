//! Authoring sessions: a bundle built up from submissions and suggestion
//! decisions, persisted as an event log that replays to the same bundle.
//!
//! A persisted session is one directory:
//!
//! ```text
//! <root>/<id>/config.json    configuration the session was created with
//! <root>/<id>/events.jsonl   one submission or decision per line
//! <root>/<id>/bundle.json    canonical bundle after the last event
//! ```

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use nl2domain::codegen::{emit_pddl, emit_sexpr, CodegenError};
use nl2domain::config::Config;
use nl2domain::domain::{from_canonical_json, to_canonical_json, validate_bundle, Diagnostic, DomainBundle, Slug};
use nl2domain::pipeline::{Category, Classification, Compiler, PipelineError, Report};
use nl2domain::suggest::{ConceptNetClient, Decision, Status, SuggestError, Suggestion, SuggestionLog};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("no session {0:?}")]
    NotFound(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Suggest(#[from] SuggestError),
    #[error(transparent)]
    Codegen(#[from] CodegenError),
    #[error("unknown code target {0:?}; expected sexpr or pddl")]
    Target(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("session {id} is damaged: {message}")]
    Corrupt { id: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SessionError + '_ {
    move |source| SessionError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Sexpr,
    Pddl,
}

impl std::str::FromStr for Target {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sexpr" => Ok(Target::Sexpr),
            "pddl" => Ok(Target::Pddl),
            other => Err(SessionError::Target(other.to_string())),
        }
    }
}

pub fn emit(bundle: &DomainBundle, target: Target) -> Result<String, CodegenError> {
    match target {
        Target::Sexpr => emit_sexpr(bundle),
        Target::Pddl => emit_pddl(bundle),
    }
}

/// One line of `events.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Submit {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conllu: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        category: Option<Category>,
    },
    /// The decided suggestion is stored whole so replay does not depend on
    /// ConceptNet answering the same way again.
    Decide { suggestion: Suggestion, decision: Decision },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub text: String,
    pub classification: Classification,
    pub failed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubmitResponse {
    pub report: Report,
    pub pending: Vec<Suggestion>,
    /// Set when suggestions could not be refreshed (e.g. ConceptNet down).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecisionResponse {
    pub suggestion: Suggestion,
    pub diagnostics: Vec<Diagnostic>,
    pub pending: Vec<Suggestion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionSummary {
    pub id: String,
    pub revision: usize,
    pub transcript: Vec<TranscriptEntry>,
    pub config: Config,
}

/// Loaded compiler and ConceptNet client for one configuration.
#[derive(Clone)]
pub struct Engine {
    pub compiler: Arc<Compiler>,
    pub client: Arc<dyn ConceptNetClient>,
}

impl Engine {
    pub fn new(config: Config) -> Result<Self, SessionError> {
        let compiler = Compiler::from_config(config)?;
        let client: Arc<dyn ConceptNetClient> = Arc::from(compiler.conceptnet_client()?);
        Ok(Engine { compiler: Arc::new(compiler), client })
    }
}

pub struct Session {
    pub id: String,
    pub bundle: DomainBundle,
    pub transcript: Vec<TranscriptEntry>,
    pub suggestions: SuggestionLog,
    events: Vec<Event>,
    engine: Engine,
}

impl Session {
    pub fn new(id: String, engine: Engine) -> Self {
        let bundle = engine.compiler.new_bundle();
        let mut s = Session {
            id,
            bundle,
            transcript: Vec::new(),
            suggestions: SuggestionLog::default(),
            events: Vec::new(),
            engine,
        };
        // a fresh bundle has nothing to suggest; errors are impossible here
        let _ = s.refresh();
        s
    }

    pub fn config(&self) -> &Config {
        &self.engine.compiler.config
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            id: self.id.clone(),
            revision: self.events.len(),
            transcript: self.transcript.clone(),
            config: self.config().clone(),
        }
    }

    fn refresh(&mut self) -> Option<String> {
        match self.engine.compiler.suggestions(&self.bundle, Some(self.engine.client.as_ref())) {
            Ok(fresh) => {
                self.suggestions.refresh(fresh);
                None
            }
            Err(e) => Some(e.to_string()),
        }
    }

    /// Runs text through the pipeline. Returns the event to persist when
    /// anything was attempted.
    pub fn submit(
        &mut self,
        text: &str,
        conllu: Option<&str>,
        category: Option<Category>,
    ) -> (SubmitResponse, Option<Event>) {
        let report = self.engine.compiler.submit(&mut self.bundle, text, category, conllu);
        let event = if report.errors.is_empty() && !report.sentences.is_empty() {
            self.transcript.extend(report.sentences.iter().map(|s| TranscriptEntry {
                text: s.text.clone(),
                classification: s.classification,
                failed: s.failed(),
            }));
            let e = Event::Submit { text: text.to_string(), conllu: conllu.map(str::to_string), category };
            self.events.push(e.clone());
            Some(e)
        } else {
            None
        };
        let suggestion_error = self.refresh();
        (SubmitResponse { report, pending: self.suggestions.pending(), suggestion_error }, event)
    }

    pub fn decide(&mut self, id: &str, decision: Decision) -> Result<(DecisionResponse, Event), SessionError> {
        let suggestion = self.suggestions.decide(id, decision, &mut self.bundle)?.clone();
        let event =
            Event::Decide { suggestion: Suggestion { status: Status::Pending, ..suggestion.clone() }, decision };
        self.events.push(event.clone());
        let suggestion_error = self.refresh();
        let response = DecisionResponse {
            suggestion,
            diagnostics: validate_bundle(&self.bundle),
            pending: self.suggestions.pending(),
            suggestion_error,
        };
        Ok((response, event))
    }

    pub fn code(&self, target: Target) -> Result<String, SessionError> {
        Ok(emit(&self.bundle, target)?)
    }

    /// Words of the domain that spell-checking must not flag.
    pub fn vocabulary(&self) -> Vec<String> {
        let b = &self.bundle;
        let mut slugs: Vec<&Slug> = b.objects.keys().collect();
        slugs.extend(b.objects.values().filter_map(|o| o.type_tag.as_ref()));
        slugs.extend(b.states.keys().map(|k| k.as_slug()));
        slugs.extend(b.states.values().flat_map(|s| s.domain()));
        slugs.extend(b.affordances.iter().map(|a| &a.name));
        let mut out: Vec<String> = Vec::new();
        for s in slugs {
            out.push(s.as_str().to_string());
            out.extend(s.words().map(str::to_string));
        }
        for s in b.states.values() {
            out.extend(s.phrase_words());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Rebuilds the session from `events` on an empty bundle.
    pub fn replay(id: String, engine: Engine, events: Vec<Event>) -> Result<Self, SessionError> {
        let mut s = Session::new(id, engine);
        for event in events {
            match &event {
                Event::Submit { text, conllu, category } => {
                    let (response, _) = s.submit(text, conllu.as_deref(), *category);
                    if !response.report.errors.is_empty() {
                        return Err(SessionError::Corrupt {
                            id: s.id.clone(),
                            message: format!("replayed submission was refused: {}", response.report.errors.join("; ")),
                        });
                    }
                }
                Event::Decide { suggestion, decision } => {
                    s.suggestions.replay(suggestion.clone(), *decision, &mut s.bundle)?;
                    s.events.push(event.clone());
                    let _ = s.refresh();
                }
            }
        }
        Ok(s)
    }
}

/// Live sessions, optionally backed by a directory. Mutations of one
/// session are serialized by its mutex; sessions are independent.
pub struct SessionStore {
    root: Option<PathBuf>,
    base: Config,
    engines: Mutex<HashMap<String, Engine>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn new(base: Config, root: Option<PathBuf>) -> Result<Self, SessionError> {
        if let Some(r) = &root {
            fs::create_dir_all(r).map_err(io_err(r))?;
        }
        let store = SessionStore { root, base, engines: Mutex::default(), sessions: Mutex::default() };
        // fail at startup, not at the first request, when the base config is broken
        store.engine(&store.base.clone())?;
        Ok(store)
    }

    pub fn base_config(&self) -> &Config {
        &self.base
    }

    /// The base configuration with the fields of `overrides` (a JSON
    /// object) replaced.
    pub fn merged_config(&self, overrides: Option<&serde_json::Value>) -> Result<Config, SessionError> {
        let Some(overrides) = overrides else { return Ok(self.base.clone()) };
        let mut value = serde_json::to_value(&self.base).expect("config serializes");
        match (value.as_object_mut(), overrides.as_object()) {
            (Some(base), Some(over)) => {
                for (k, v) in over {
                    base.insert(k.clone(), v.clone());
                }
            }
            _ => return Err(SessionError::Config("configuration must be a JSON object".into())),
        }
        let config: Config = serde_json::from_value(value).map_err(|e| SessionError::Config(e.to_string()))?;
        config.check().map_err(|e| SessionError::Config(e.to_string()))?;
        Ok(config)
    }

    fn engine(&self, config: &Config) -> Result<Engine, SessionError> {
        let key = serde_json::to_string(config).expect("config serializes");
        if let Some(e) = self.engines.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let engine = Engine::new(config.clone())?;
        self.engines.lock().unwrap().insert(key, engine.clone());
        Ok(engine)
    }

    pub fn create(&self, config: Config) -> Result<String, SessionError> {
        let engine = self.engine(&config)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), engine);
        if let Some(dir) = self.session_dir(&id) {
            fs::create_dir_all(&dir).map_err(io_err(&dir))?;
            let path = dir.join("config.json");
            let text = serde_json::to_string_pretty(&config).expect("config serializes");
            fs::write(&path, text).map_err(io_err(&path))?;
            fs::write(dir.join("events.jsonl"), "").map_err(io_err(&dir))?;
            write_bundle(&dir, &session.bundle)?;
        }
        self.sessions.lock().unwrap().insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    fn session_dir(&self, id: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(id))
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        if let Some(s) = self.sessions.lock().unwrap().get(id) {
            return Ok(s.clone());
        }
        let valid = !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-');
        let dir = match self.session_dir(id) {
            Some(d) if valid && d.is_dir() => d,
            _ => return Err(SessionError::NotFound(id.to_string())),
        };
        let session = Arc::new(Mutex::new(self.load(id, &dir)?));
        let mut map = self.sessions.lock().unwrap();
        Ok(map.entry(id.to_string()).or_insert(session).clone())
    }

    /// Replays a persisted session and checks it against its saved bundle.
    fn load(&self, id: &str, dir: &Path) -> Result<Session, SessionError> {
        let corrupt = |message: String| SessionError::Corrupt { id: id.to_string(), message };
        let path = dir.join("config.json");
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let config: Config = serde_json::from_str(&text).map_err(|e| corrupt(format!("config.json: {e}")))?;
        let events = read_events(dir).map_err(|e| match e {
            SessionError::Config(m) => corrupt(m),
            other => other,
        })?;
        let session = Session::replay(id.to_string(), self.engine(&config)?, events)?;
        let path = dir.join("bundle.json");
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let saved = from_canonical_json(&text).map_err(|e| corrupt(format!("bundle.json: {e}")))?;
        if saved != session.bundle {
            return Err(corrupt("replaying events.jsonl does not reproduce bundle.json".into()));
        }
        Ok(session)
    }

    /// Appends `event` to the session's log and rewrites its bundle.
    pub fn persist(&self, session: &Session, event: &Event) -> Result<(), SessionError> {
        let Some(dir) = self.session_dir(&session.id) else { return Ok(()) };
        let path = dir.join("events.jsonl");
        let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(io_err(&path))?;
        let mut line = serde_json::to_string(event).expect("event serializes");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(io_err(&path))?;
        write_bundle(&dir, &session.bundle)
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.lock().unwrap().keys().cloned().collect();
        if let Some(root) = &self.root {
            if let Ok(entries) = fs::read_dir(root) {
                ids.extend(
                    entries.flatten().filter(|e| e.path().is_dir()).filter_map(|e| e.file_name().into_string().ok()),
                );
            }
        }
        ids.sort();
        ids.dedup();
        ids
    }
}

fn write_bundle(dir: &Path, bundle: &DomainBundle) -> Result<(), SessionError> {
    // write then rename so a crash never leaves a half-written bundle
    let tmp = dir.join("bundle.json.tmp");
    fs::write(&tmp, to_canonical_json(bundle)).map_err(io_err(&tmp))?;
    let path = dir.join("bundle.json");
    fs::rename(&tmp, &path).map_err(io_err(&path))
}

pub fn read_events(dir: &Path) -> Result<Vec<Event>, SessionError> {
    let path = dir.join("events.jsonl");
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| SessionError::Config(format!("events.jsonl line {}: {e}", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> Engine {
        Engine::new(Config::default()).unwrap()
    }

    #[test]
    fn empty_submission_records_nothing() {
        let mut s = Session::new("a".into(), engine());
        let (r, event) = s.submit("   ", None, None);
        assert!(r.report.sentences.is_empty());
        assert!(event.is_none());
        assert!(s.events().is_empty());
    }

    #[test]
    fn replay_reproduces_bundle_and_decisions() {
        let mut s = Session::new("a".into(), engine());
        s.submit("Max is a dog. Max eats food only if he is hungry after which he feels happy.", None, None);
        let pending = s.suggestions.pending();
        let capability = pending.iter().find(|p| p.id.starts_with("capability:max:")).unwrap().id.clone();
        s.decide(&capability, Decision::Accept).unwrap();
        let other = s.suggestions.pending()[0].id.clone();
        s.decide(&other, Decision::Reject).unwrap();
        let again = Session::replay("a".into(), engine(), s.events().to_vec()).unwrap();
        assert_eq!(again.bundle, s.bundle);
        assert_eq!(again.transcript, s.transcript);
        assert_eq!(again.suggestions, s.suggestions);
        assert_eq!(again.suggestions.get(&other).unwrap().status, Status::Rejected);
    }

    #[test]
    fn vocabulary_covers_slugs_and_words() {
        let mut s = Session::new("a".into(), engine());
        s.submit("Max can go to different places such as restaurants and parks.", None, None);
        let v = s.vocabulary();
        for w in ["max", "max_go", "go", "restaurant", "park"] {
            assert!(v.iter().any(|x| x == w), "{w}");
        }
    }

    #[test]
    fn config_overrides_merge_over_base() {
        let store = SessionStore::new(Config::default(), None).unwrap();
        let c = store.merged_config(Some(&serde_json::json!({"matcher_threshold": 0.9}))).unwrap();
        assert_eq!(c.matcher_threshold, 0.9);
        assert_eq!(c.min_pre, 1);
        assert!(store.merged_config(Some(&serde_json::json!({"nope": 1}))).is_err());
        assert!(store.merged_config(Some(&serde_json::json!([1]))).is_err());
    }
}
