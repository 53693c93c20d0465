//! Word, action, object, name and image inventories backing the scheme
//! generators.
//!
//! Only the *counts* enter any usability or security computation (a 20,000
//! word dictionary, 140 actions, 140 objects); the shipped contents are
//! arbitrary labels. The built-in lists are embedded in the binary; set the
//! `REHEARSAL_LAB_DATA` environment variable to a directory containing
//! `words.txt`, `actions.txt`, `objects.txt`, `names.txt` and `images.txt`
//! (one entry per line) to substitute your own.

use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Directory-override environment variable consulted by [`Inventories::load`].
pub const DATA_DIR_ENV: &str = "REHEARSAL_LAB_DATA";

/// Number of opaque derivation rules used by the suffix-rule baseline scheme.
pub const DERIVATION_RULE_COUNT: usize = 50;

/// An ordered list of distinct words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    words: Vec<String>,
}

impl Dictionary {
    pub fn new(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParam("dictionary may not be empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for w in &words {
            if !seen.insert(w.as_str()) {
                return Err(Error::InvalidParam(format!("dictionary repeats word {w:?}")));
            }
        }
        Ok(Dictionary { words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

/// Every inventory the generators draw from.
#[derive(Debug, Clone)]
pub struct Inventories {
    pub dictionary: Dictionary,
    pub actions: Vec<String>,
    pub objects: Vec<String>,
    pub names: Vec<String>,
    pub images: Vec<String>,
}

fn parse_lines(text: &str, what: &str) -> Result<Vec<String>> {
    let items: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect();
    if items.is_empty() {
        return Err(Error::Parse(format!("{what} list is empty")));
    }
    let mut seen = std::collections::HashSet::new();
    for item in &items {
        if !seen.insert(item.as_str()) {
            return Err(Error::Parse(format!("{what} list repeats {item:?}")));
        }
    }
    Ok(items)
}

impl Inventories {
    /// The embedded default inventories (20,000 words; 140 actions; 140
    /// objects; 100 names; 100 images).
    pub fn builtin() -> &'static Inventories {
        static BUILTIN: OnceLock<Inventories> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Inventories::from_texts(
                include_str!("../data/words.txt"),
                include_str!("../data/actions.txt"),
                include_str!("../data/objects.txt"),
                include_str!("../data/names.txt"),
                include_str!("../data/images.txt"),
            )
            .expect("embedded inventories are well-formed")
        })
    }

    /// Loads from the `REHEARSAL_LAB_DATA` directory when set, otherwise
    /// returns a copy of the built-in inventories.
    pub fn load() -> Result<Inventories> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Inventories::from_dir(Path::new(&dir)),
            None => Ok(Inventories::builtin().clone()),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Inventories> {
        let read = |name: &str| -> Result<String> {
            std::fs::read_to_string(dir.join(name)).map_err(|e| {
                Error::Parse(format!("cannot read {}: {e}", dir.join(name).display()))
            })
        };
        Inventories::from_texts(
            &read("words.txt")?,
            &read("actions.txt")?,
            &read("objects.txt")?,
            &read("names.txt")?,
            &read("images.txt")?,
        )
    }

    pub fn from_texts(
        words: &str,
        actions: &str,
        objects: &str,
        names: &str,
        images: &str,
    ) -> Result<Inventories> {
        Ok(Inventories {
            dictionary: Dictionary::new(parse_lines(words, "word")?)?,
            actions: parse_lines(actions, "action")?,
            objects: parse_lines(objects, "object")?,
            names: parse_lines(names, "name")?,
            images: parse_lines(images, "image")?,
        })
    }

    /// Tiny synthetic inventories for toy-scale tests and the game oracle.
    pub fn toy(action_count: usize, object_count: usize, universe: usize) -> Inventories {
        let label = |prefix: &str, k: usize| -> Vec<String> {
            (0..k).map(|i| format!("{prefix}{i}")).collect()
        };
        Inventories {
            dictionary: Dictionary::new(label("word", 16)).unwrap(),
            actions: label("act", action_count),
            objects: label("obj", object_count),
            names: label("person", universe),
            images: label("image", universe),
        }
    }
}
