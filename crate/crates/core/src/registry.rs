//! Name-keyed registry of boxed strategy objects.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Anything that can live in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Ordered map from strategy name to implementation.
pub struct Registry<T: ?Sized + Named> {
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a strategy; a later registration under the same name replaces
    /// the earlier one.
    pub fn register(&mut self, item: Box<T>) -> &mut Self {
        self.entries.insert(item.name(), item);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    #[test]
    fn lookup_and_unknown_names() {
        let mut r: Registry<dyn Greeter> = Registry::new();
        r.register(Box::new(Hello));
        assert_eq!(r.get("hello").unwrap().greet(), "hello");
        let err = r.get("bye").err().unwrap().to_string();
        assert!(err.contains("bye") && err.contains("hello"), "{err}");
        assert_eq!(r.names(), vec!["hello"]);
    }
}
