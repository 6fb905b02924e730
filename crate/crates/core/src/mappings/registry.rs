use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::kernel::LogicId;

use super::{
    Accuracy, Direction, DlToFol, FolToProp, LogicMapping, MappingError, MappingMeta, PropToFol,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Category {
    OntologyLanguage,
    Logic,
    Serialization,
    Mapping,
}

impl Category {
    pub const ALL: [Category; 4] =
        [Category::OntologyLanguage, Category::Logic, Category::Serialization, Category::Mapping];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::OntologyLanguage => "OntologyLanguage",
            Category::Logic => "Logic",
            Category::Serialization => "Serialization",
            Category::Mapping => "Mapping",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub category: Category,
    pub id: String,
    pub attributes: BTreeMap<String, String>,
}

impl RegistryEntry {
    fn new(category: Category, id: &str, attributes: &[(&str, &str)]) -> Self {
        RegistryEntry {
            category,
            id: id.to_string(),
            attributes: attributes.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

/// One listing line: `category id source->target flags` for mappings,
/// `category id key=value ...` otherwise.
impl fmt::Display for RegistryEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.category, self.id)?;
        if self.category == Category::Mapping {
            let get = |k: &str| self.attributes.get(k).map(String::as_str).unwrap_or("");
            write!(f, " {}->{} {}", get("source"), get("target"), get("flags"))
        } else {
            for (k, v) in &self.attributes {
                write!(f, " {k}={v}")?;
            }
            Ok(())
        }
    }
}

/// The fixed registry of built-in logics and mappings.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    mappings: Vec<Arc<dyn LogicMapping>>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::builtin()
    }
}

impl Registry {
    pub fn builtin() -> Self {
        use Category::*;
        let mut mappings: Vec<Arc<dyn LogicMapping>> = vec![
            Arc::new(DlToFol::default()),
            Arc::new(FolToProp::default()),
            Arc::new(PropToFol::default()),
        ];
        mappings.sort_by(|a, b| a.id().cmp(b.id()));
        let mut entries = vec![
            RegistryEntry::new(OntologyLanguage, "OWL", &[("logic", "SimpleDL")]),
            RegistryEntry::new(OntologyLanguage, "PropText", &[("logic", "Prop")]),
            RegistryEntry::new(OntologyLanguage, "TPTP", &[("logic", "FOL")]),
            RegistryEntry::new(Logic, "FOL", &[("supports", "TPTP")]),
            RegistryEntry::new(Logic, "Prop", &[("supports", "PropText")]),
            RegistryEntry::new(Logic, "SimpleDL", &[("supports", "OWL")]),
            RegistryEntry::new(Serialization, "FOF", &[("serialization-of", "TPTP")]),
            RegistryEntry::new(Serialization, "Manchester", &[("serialization-of", "OWL")]),
            RegistryEntry::new(Serialization, "PropInfix", &[("serialization-of", "PropText")]),
        ];
        for m in &mappings {
            let meta = m.meta();
            let mut e = RegistryEntry::new(Mapping, &meta.id, &[]);
            e.attributes.insert("source".into(), meta.source.to_string());
            e.attributes.insert("target".into(), meta.target.to_string());
            e.attributes.insert("flags".into(), meta.flags());
            entries.push(e);
        }
        Registry { entries, mappings }
    }

    /// Entries of one category, ordered by id.
    pub fn list(&self, category: Category) -> Vec<&RegistryEntry> {
        let mut out: Vec<_> = self.entries.iter().filter(|e| e.category == category).collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn mappings(&self) -> &[Arc<dyn LogicMapping>] {
        &self.mappings
    }

    pub fn mapping(&self, id: &str) -> Option<&Arc<dyn LogicMapping>> {
        self.mappings.iter().find(|m| m.id() == id)
    }

    /// Breadth-first search over edges accepted by `edge`. Neighbours are
    /// visited in id order, so the first path found to each logic is the
    /// lexicographically least among the shortest ones.
    fn bfs(
        &self,
        from: LogicId,
        edge: impl Fn(&MappingMeta) -> bool,
    ) -> BTreeMap<LogicId, Vec<Arc<dyn LogicMapping>>> {
        let mut paths: BTreeMap<LogicId, Vec<Arc<dyn LogicMapping>>> = BTreeMap::new();
        paths.insert(from, Vec::new());
        let mut queue = VecDeque::from([from]);
        while let Some(at) = queue.pop_front() {
            let here = paths[&at].clone();
            for m in &self.mappings {
                let meta = m.meta();
                if meta.source != at || !edge(meta) || paths.contains_key(&meta.target) {
                    continue;
                }
                let mut p = here.clone();
                p.push(Arc::clone(m));
                paths.insert(meta.target, p);
                queue.push_back(meta.target);
            }
        }
        paths
    }

    pub fn find_path(
        &self,
        from: LogicId,
        to: LogicId,
        required: Option<Accuracy>,
    ) -> Result<Vec<Arc<dyn LogicMapping>>, MappingError> {
        self.bfs(from, |m| m.satisfies(required))
            .remove(&to)
            .ok_or(MappingError::NoPath { from, to })
    }

    /// A logic reachable from both `a` and `b` along translations, with the
    /// least total path length.
    #[allow(clippy::type_complexity)]
    pub fn common_target(
        &self,
        a: LogicId,
        b: LogicId,
    ) -> Result<(LogicId, Vec<Arc<dyn LogicMapping>>, Vec<Arc<dyn LogicMapping>>), MappingError> {
        let translation = |m: &MappingMeta| m.direction == Direction::Translation;
        let mut from_a = self.bfs(a, translation);
        let mut from_b = self.bfs(b, translation);
        let shared: BTreeSet<LogicId> =
            from_a.keys().filter(|l| from_b.contains_key(l)).copied().collect();
        let best = shared
            .into_iter()
            .min_by_key(|l| (from_a[l].len() + from_b[l].len(), l.as_str()))
            .ok_or(MappingError::NoCommonTarget(a, b))?;
        Ok((best, from_a.remove(&best).unwrap_or_default(), from_b.remove(&best).unwrap_or_default()))
    }
}
