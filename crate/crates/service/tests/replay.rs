//! Any sequence of submissions and decisions replays to the same session.

use std::sync::OnceLock;

use nl2domain::config::Config;
use nl2domain::domain::{from_canonical_json, to_canonical_json};
use nl2domain::suggest::Decision;
use nl2domain_service::session::{read_events, Engine, Session, SessionStore};
use proptest::prelude::*;

const SENTENCES: [&str; 10] = [
    "Max is a dog.",
    "Rio is a bird.",
    "Max can go to different places such as restaurants and parks.",
    "Max would like to drink some juice.",
    "Max goes to the library only if he has an exam after which he feels more knowledgeable.",
    "Max will get extremely angry whenever he fails his exams.",
    "Max eats food only if he is hungry after which he feels happy.",
    "Max can stand at the bus station.",
    "Max brings the book and then he reads it.",
    "Max goes to the libary.",
];

#[derive(Debug, Clone)]
enum Step {
    Submit(usize),
    /// Decide the n-th pending suggestion, if there is one.
    Decide(usize, bool),
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0..SENTENCES.len()).prop_map(Step::Submit),
        (0usize..6, any::<bool>()).prop_map(|(n, a)| Step::Decide(n, a)),
    ]
}

fn engine() -> Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(Config::default()).unwrap()).clone()
}

fn run(session: &mut Session, steps: &[Step], store: Option<&SessionStore>) {
    for s in steps {
        let event = match *s {
            Step::Submit(i) => session.submit(SENTENCES[i], None, None).1,
            Step::Decide(n, accept) => {
                let pending = session.suggestions.pending();
                let Some(p) = pending.get(n) else { continue };
                let decision = if accept { Decision::Accept } else { Decision::Reject };
                // an accept the bundle refuses is a legitimate outcome too
                session.decide(&p.id, decision).ok().map(|(_, e)| e)
            }
        };
        if let (Some(store), Some(event)) = (store, event) {
            store.persist(session, &event).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn replay_equals_live_session(steps in prop::collection::vec(step(), 1..10)) {
        let mut live = Session::new("s".into(), engine());
        run(&mut live, &steps, None);
        let again = Session::replay("s".into(), engine(), live.events().to_vec()).unwrap();
        prop_assert_eq!(to_canonical_json(&again.bundle), to_canonical_json(&live.bundle));
        prop_assert_eq!(&again.transcript, &live.transcript);
        prop_assert_eq!(&again.suggestions, &live.suggestions);
    }
}

#[test]
fn disk_log_replays_to_saved_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::new(Config::default(), Some(dir.path().to_path_buf())).unwrap();
    let id = store.create(Config::default()).unwrap();
    let steps = [Step::Submit(0), Step::Decide(0, true), Step::Submit(4), Step::Decide(1, false), Step::Submit(5)];
    {
        let session = store.get(&id).unwrap();
        let mut session = session.lock().unwrap();
        run(&mut session, &steps, Some(&store));
    }
    let session_dir = dir.path().join(&id);
    let events = read_events(&session_dir).unwrap();
    assert_eq!(events.len(), 5);
    let replayed = Session::replay(id.clone(), engine(), events).unwrap();
    let saved = std::fs::read_to_string(session_dir.join("bundle.json")).unwrap();
    assert_eq!(replayed.bundle, from_canonical_json(&saved).unwrap());
    assert_eq!(to_canonical_json(&replayed.bundle), saved);
}
