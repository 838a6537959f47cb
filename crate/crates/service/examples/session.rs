//! An authoring session persisted to disk and reloaded by replaying its
//! event log.
//!
//! cargo run -p nl2domain-service --example session

use nl2domain::config::Config;
use nl2domain::suggest::Decision;
use nl2domain_service::session::{SessionStore, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("nl2domain-example-{}", std::process::id()));
    let store = SessionStore::new(Config::default(), Some(dir.clone()))?;
    let id = store.create(Config::default())?;
    {
        let session = store.get(&id)?;
        let mut s = session.lock().unwrap();
        let (response, event) =
            s.submit("Max is a dog. Max can go to different places such as restaurants and parks.", None, None);
        store.persist(&s, &event.expect("text was submitted"))?;
        println!("{} suggestions pending", response.pending.len());
        let (_, event) = s.decide("capability:max:bark", Decision::Accept)?;
        store.persist(&s, &event)?;
    }

    // a second store over the same directory rebuilds the session
    let reopened = SessionStore::new(Config::default(), Some(dir.clone()))?;
    let session = reopened.get(&id)?;
    print!("{}", session.lock().unwrap().code(Target::Sexpr)?);
    std::fs::remove_dir_all(dir)?;
    Ok(())
}
