//! Name-keyed registries of interchangeable strategies.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{name}` (available: {available})")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
    pub available: String,
}

pub struct Entry<T: ?Sized> {
    pub name: &'static str,
    pub summary: &'static str,
    pub strategy: Arc<T>,
}

/// Strategies registered under unique names, kept in registration order.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<Entry<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: Vec::new() }
    }

    /// Registers `strategy`; a later registration under the same name
    /// replaces the earlier one.
    pub fn register(&mut self, name: &'static str, summary: &'static str, strategy: Arc<T>) -> &mut Self {
        self.entries.retain(|e| e.name != name);
        self.entries.push(Entry { name, summary, strategy });
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, UnknownName> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| Arc::clone(&e.strategy))
            .ok_or_else(|| UnknownName {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn entries(&self) -> &[Entry<T>] {
        &self.entries
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("kind", &self.kind).field("names", &self.names()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greet: Send + Sync {
        fn hi(&self) -> String;
    }
    struct En;
    impl Greet for En {
        fn hi(&self) -> String {
            "hello".into()
        }
    }
    struct Fr;
    impl Greet for Fr {
        fn hi(&self) -> String {
            "salut".into()
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut r: Registry<dyn Greet> = Registry::new("greeter");
        r.register("en", "english", Arc::new(En));
        r.register("fr", "french", Arc::new(Fr));
        assert_eq!(r.get("fr").unwrap().hi(), "salut");
        assert_eq!(r.names(), vec!["en", "fr"]);
        r.register("en", "replaced", Arc::new(Fr));
        assert_eq!(r.get("en").unwrap().hi(), "salut");
        let err = r.get("de").err().unwrap();
        assert_eq!(err.available, "fr, en");
    }
}
