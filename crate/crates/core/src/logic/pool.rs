// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::formula::Var;

/// Allocates variables by role tag. The same tag always yields the same
/// variable, and ids are handed out in first-request order, so identical
/// construction sequences produce identical numbering.
#[derive(Debug, Clone, Default)]
pub struct VarPool {
    by_tag: HashMap<String, Var>,
    names: Vec<String>,
}

impl VarPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, tag: impl AsRef<str>) -> Var {
        let tag = tag.as_ref();
        if let Some(&v) = self.by_tag.get(tag) {
            return v;
        }
        self.insert(tag.to_owned())
    }

    /// A never-before-seen variable named `<prefix>#<id>`.
    pub fn fresh(&mut self, prefix: &str) -> Var {
        let id = self.names.len() + 1;
        self.insert(format!("{prefix}#{id}"))
    }

    fn insert(&mut self, tag: String) -> Var {
        let v = Var(self.names.len() as u32 + 1);
        self.by_tag.insert(tag.clone(), v);
        self.names.push(tag);
        v
    }

    pub fn lookup(&self, tag: &str) -> Option<Var> {
        self.by_tag.get(tag).copied()
    }

    pub fn name(&self, v: Var) -> Option<&str> {
        self.names.get(v.0 as usize - 1).map(String::as_str)
    }

    pub fn len(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `(tag, var)` pairs in id order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, Var)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), Var(i as u32 + 1)))
    }
}
