use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use thiserror::Error;

use crate::kernel::LogicId;

use super::Reference;

/// Extensions tried, in order, when a reference names a file without one.
const EXTENSIONS: [(&str, LogicId); 6] = [
    ("omn", LogicId::SimpleDl),
    ("owl", LogicId::SimpleDl),
    ("p", LogicId::Fol),
    ("fof", LogicId::Fol),
    ("tptp", LogicId::Fol),
    ("prop", LogicId::Prop),
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolveError {
    #[error("no repository prefix covers `{0}`")]
    UnresolvedIri(String),
    #[error("repository prefix `{0}` is mapped more than once")]
    AmbiguousPrefix(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("`{0}` is a DOL document; nested documents cannot be referenced")]
    NestedDocument(String),
    #[error("cannot tell the logic of `{0}`; give it a known extension or set default_logic")]
    UnknownFormat(String),
    #[error("invalid repository configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepoEntry {
    pub prefix: String,
    pub dir: PathBuf,
    pub default_logic: Option<LogicId>,
}

/// Maps IRI prefixes to directories. Loaded from `repo.json`:
///
/// ```json
/// { "default_logic": "SimpleDL",
///   "https://example.org/repo/": "fixtures",
///   "http://www.ifomis.org/bfo/": { "path": "bfo", "default_logic": "SimpleDL" } }
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepoConfig {
    pub root: PathBuf,
    pub entries: Vec<RepoEntry>,
    /// Logic for files whose extension says nothing, when the entry has none.
    pub default_logic: Option<LogicId>,
}

/// JSON object kept as an ordered list of pairs so that duplicate keys are
/// visible.
struct Pairs(Vec<(String, serde_json::Value)>);

impl<'de> Deserialize<'de> for Pairs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Pairs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping IRI prefixes to directories")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Pairs, A::Error> {
                let mut out = Vec::new();
                while let Some(kv) = map.next_entry()? {
                    out.push(kv);
                }
                Ok(Pairs(out))
            }
        }
        d.deserialize_map(V)
    }
}

fn logic_value(v: &serde_json::Value) -> Result<LogicId, ResolveError> {
    v.as_str()
        .and_then(LogicId::from_name)
        .ok_or_else(|| ResolveError::Config(format!("unknown logic {v}")))
}

impl RepoConfig {
    pub fn empty(root: impl Into<PathBuf>) -> Self {
        RepoConfig { root: root.into(), ..Default::default() }
    }

    /// Parses `repo.json` contents; relative directories are taken relative to `root`.
    pub fn from_json(text: &str, root: impl Into<PathBuf>) -> Result<Self, ResolveError> {
        let Pairs(pairs) = serde_json::from_str(text).map_err(|e| ResolveError::Config(e.to_string()))?;
        let mut cfg = RepoConfig::empty(root);
        for (key, value) in pairs {
            if key == "default_logic" {
                cfg.default_logic = Some(logic_value(&value)?);
                continue;
            }
            if cfg.entries.iter().any(|e| e.prefix == key) {
                return Err(ResolveError::AmbiguousPrefix(key));
            }
            let (dir, default_logic) = match &value {
                serde_json::Value::String(s) => (s.clone(), None),
                serde_json::Value::Object(o) => {
                    let dir = o
                        .get("path")
                        .and_then(|p| p.as_str())
                        .ok_or_else(|| ResolveError::Config(format!("entry `{key}` needs a \"path\"")))?;
                    let logic = o.get("default_logic").map(logic_value).transpose()?;
                    (dir.to_string(), logic)
                }
                other => return Err(ResolveError::Config(format!("entry `{key}` has invalid value {other}"))),
            };
            cfg.entries.push(RepoEntry { prefix: key, dir: PathBuf::from(dir), default_logic });
        }
        Ok(cfg)
    }

    /// Loads `dir/repo.json`, or an empty configuration rooted at `dir` if there is none.
    pub fn load(dir: &Path) -> Result<Self, ResolveError> {
        let path = dir.join("repo.json");
        match fs::read_to_string(&path) {
            Ok(text) => RepoConfig::from_json(&text, dir),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(RepoConfig::empty(dir)),
            Err(e) => Err(ResolveError::Io { path: path.display().to_string(), message: e.to_string() }),
        }
    }

    /// The entry with the longest prefix of `iri`.
    pub fn lookup(&self, iri: &str) -> Result<&RepoEntry, ResolveError> {
        let mut best: Option<&RepoEntry> = None;
        for e in self.entries.iter().filter(|e| iri.starts_with(&e.prefix)) {
            match best {
                Some(b) if b.prefix.len() > e.prefix.len() => {}
                Some(b) if b.prefix.len() == e.prefix.len() => {
                    return Err(ResolveError::AmbiguousPrefix(e.prefix.clone()))
                }
                _ => best = Some(e),
            }
        }
        best.ok_or_else(|| ResolveError::UnresolvedIri(iri.to_string()))
    }
}

/// The contents of a referenced ontology file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    pub iri: String,
    pub path: PathBuf,
    pub text: String,
    pub logic: LogicId,
    /// The matched repository prefix; used as the origin of the file's symbols.
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolved {
    /// A definition of the same document.
    Local(String),
    File(Source),
}

fn logic_of_extension(path: &Path) -> Option<LogicId> {
    let ext = path.extension()?.to_str()?;
    EXTENSIONS.iter().find(|(e, _)| *e == ext).map(|(_, l)| *l)
}

/// Resolves a reference. Local names defined in the document win; other
/// references are looked up in the repository.
pub fn resolve_reference(
    reference: &Reference,
    is_local: impl Fn(&str) -> bool,
    repo: &RepoConfig,
) -> Result<Resolved, ResolveError> {
    let iri = match reference {
        Reference::Name(n) if is_local(n) => return Ok(Resolved::Local(n.clone())),
        Reference::Name(n) => return Err(ResolveError::UnresolvedIri(n.clone())),
        Reference::Iri(i) => i,
    };
    let entry = repo.lookup(iri)?;
    let dir = repo.root.join(&entry.dir);
    let rest = &iri[entry.prefix.len()..];
    let exact = dir.join(rest);
    if exact.extension().is_some_and(|e| e == "dol") {
        return Err(ResolveError::NestedDocument(iri.clone()));
    }
    let path = if exact.is_file() {
        exact
    } else {
        EXTENSIONS
            .iter()
            .map(|(e, _)| dir.join(format!("{rest}.{e}")))
            .find(|p| p.is_file())
            .ok_or_else(|| ResolveError::Io {
                path: exact.display().to_string(),
                message: "no such file".into(),
            })?
    };
    let logic = logic_of_extension(&path)
        .or(entry.default_logic)
        .or(repo.default_logic)
        .ok_or_else(|| ResolveError::UnknownFormat(iri.clone()))?;
    let text = fs::read_to_string(&path)
        .map_err(|e| ResolveError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(Resolved::File(Source { iri: iri.clone(), path, text, logic, origin: entry.prefix.clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repo() -> (tempfile::TempDir, RepoConfig) {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("fixtures/deep")).unwrap();
        fs::write(dir.path().join("fixtures/familyRelations.omn"), "Class: A").unwrap();
        fs::write(dir.path().join("fixtures/deep/x.p"), "fof(a, axiom, p).").unwrap();
        fs::write(dir.path().join("fixtures/1.1"), "Class: B").unwrap();
        fs::write(dir.path().join("fixtures/doc.dol"), "").unwrap();
        let cfg = RepoConfig::from_json(
            r#"{ "https://example.org/repo/": "fixtures",
                 "https://example.org/repo/deep/": { "path": "fixtures/deep" } }"#,
            dir.path(),
        )
        .unwrap();
        (dir, cfg)
    }

    fn file(r: Result<Resolved, ResolveError>) -> Source {
        match r.unwrap() {
            Resolved::File(s) => s,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resolves_with_extension_probe() {
        let (_d, cfg) = repo();
        let iri = Reference::Iri("https://example.org/repo/familyRelations".into());
        let s = file(resolve_reference(&iri, |_| false, &cfg));
        assert_eq!(s.logic, LogicId::SimpleDl);
        assert_eq!(s.text, "Class: A");
        assert_eq!(s.origin, "https://example.org/repo/");
    }

    #[test]
    fn longest_prefix_wins() {
        let (_d, cfg) = repo();
        let s = file(resolve_reference(&Reference::Iri("https://example.org/repo/deep/x".into()), |_| false, &cfg));
        assert_eq!(s.logic, LogicId::Fol);
        assert_eq!(s.origin, "https://example.org/repo/deep/");
    }

    #[test]
    fn local_names_and_failures() {
        let (_d, cfg) = repo();
        assert_eq!(
            resolve_reference(&Reference::Name("scenario".into()), |n| n == "scenario", &cfg).unwrap(),
            Resolved::Local("scenario".into())
        );
        assert!(matches!(
            resolve_reference(&Reference::Iri("http://elsewhere/x".into()), |_| false, &cfg),
            Err(ResolveError::UnresolvedIri(_))
        ));
        assert!(matches!(
            resolve_reference(&Reference::Iri("https://example.org/repo/1.1".into()), |_| false, &cfg),
            Err(ResolveError::UnknownFormat(_))
        ));
        assert!(matches!(
            resolve_reference(&Reference::Iri("https://example.org/repo/doc.dol".into()), |_| false, &cfg),
            Err(ResolveError::NestedDocument(_))
        ));
    }

    #[test]
    fn default_logic_applies_to_bare_files() {
        let (d, mut cfg) = repo();
        cfg.default_logic = Some(LogicId::SimpleDl);
        let s = file(resolve_reference(&Reference::Iri("https://example.org/repo/1.1".into()), |_| false, &cfg));
        assert_eq!(s.text, "Class: B");
        drop(d);
    }

    #[test]
    fn duplicate_keys_are_ambiguous() {
        let e = RepoConfig::from_json(r#"{ "http://a/": "x", "http://a/": "y" }"#, ".").unwrap_err();
        assert_eq!(e, ResolveError::AmbiguousPrefix("http://a/".into()));
    }
}
