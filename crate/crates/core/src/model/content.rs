use std::collections::{BTreeMap, HashSet};

use super::{is_valid_name, ContentId, ContentRec, Draft, MemberId, Network, NetworkSnapshot};
use crate::error::ModelError;

impl Network {
    pub fn root_of(&self, owner: MemberId) -> Option<ContentId> {
        self.members.get(&owner).map(|m| m.root)
    }

    pub fn content_name(&self, id: ContentId) -> Option<&str> {
        self.contents.get(&id).map(|c| c.name.as_str())
    }

    pub fn content_parent(&self, id: ContentId) -> Option<ContentId> {
        self.contents.get(&id).and_then(|c| c.parent)
    }

    /// Children in name order.
    pub fn content_children(&self, id: ContentId) -> impl Iterator<Item = ContentId> + '_ {
        self.contents
            .get(&id)
            .into_iter()
            .flat_map(|c| c.children.values().copied())
    }

    pub fn content_owner(&self, id: ContentId) -> Result<MemberId, ModelError> {
        self.contents
            .get(&id)
            .map(|c| c.owner)
            .ok_or(ModelError::UnknownContent(id.0))
    }

    /// The chain from `id` up to the root, `id` first.
    pub fn content_ancestors(&self, id: ContentId) -> Vec<ContentId> {
        let mut chain = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            let Some(rec) = self.contents.get(&c) else {
                break;
            };
            chain.push(c);
            cur = rec.parent;
        }
        chain
    }

    /// True if `node` lies in the subtree rooted at `top` (inclusive).
    pub fn content_covers(&self, top: ContentId, node: ContentId) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == top {
                return true;
            }
            cur = self.content_parent(c);
        }
        false
    }

    pub fn content_depth(&self, id: ContentId) -> usize {
        self.content_ancestors(id).len().saturating_sub(1)
    }

    /// "/Everything/PersonalInfo/Phone" style path.
    pub fn content_path(&self, id: ContentId) -> Option<String> {
        if !self.contents.contains_key(&id) {
            return None;
        }
        let mut chain = self.content_ancestors(id);
        chain.reverse();
        let mut path = String::new();
        for c in chain {
            path.push('/');
            path.push_str(&self.contents[&c].name);
        }
        Some(path)
    }

    /// The subtree rooted at `id` in pre-order, children by name.
    pub fn content_subtree(&self, id: ContentId) -> Vec<ContentId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            let Some(rec) = self.contents.get(&c) else {
                continue;
            };
            out.push(c);
            stack.extend(rec.children.values().rev().copied());
        }
        out
    }

    /// Every node of an owner's tree in pre-order.
    pub fn contents_of(&self, owner: MemberId) -> Vec<ContentId> {
        self.root_of(owner)
            .map(|r| self.content_subtree(r))
            .unwrap_or_default()
    }

    /// Resolves "/Root/Child/..." in `owner`'s tree.
    pub fn resolve_path(&self, owner: MemberId, path: &str) -> Result<ContentId, ModelError> {
        let owner_name = self.require_member(owner)?;
        let unknown = || ModelError::UnknownPath {
            owner: owner_name.to_string(),
            path: path.to_string(),
        };
        let rest = path.strip_prefix('/').ok_or_else(unknown)?;
        let mut segments = rest.split('/');
        let root = self.root_of(owner).expect("member has a root");
        if segments.next() != self.content_name(root) {
            return Err(unknown());
        }
        let mut cur = root;
        for seg in segments {
            cur = *self.contents[&cur].children.get(seg).ok_or_else(unknown)?;
        }
        Ok(cur)
    }
}

impl Draft {
    pub fn add_content(
        &mut self,
        owner: MemberId,
        parent: ContentId,
        name: &str,
    ) -> Result<ContentId, ModelError> {
        let owner_name = self.require_member(owner)?.to_string();
        if self.content_owner(parent)? != owner {
            return Err(ModelError::ForeignContent {
                owner: owner_name,
                path: self.content_path(parent).unwrap_or_default(),
            });
        }
        if !is_valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if self.contents[&parent].children.contains_key(name) {
            return Err(ModelError::DuplicateSiblingName {
                parent: self.content_path(parent).unwrap_or_default(),
                name: name.to_string(),
            });
        }
        let net = self.net_mut();
        let id = ContentId(net.next_content);
        net.next_content += 1;
        net.contents.insert(
            id,
            ContentRec {
                owner,
                name: name.to_string(),
                parent: Some(parent),
                children: BTreeMap::new(),
            },
        );
        net.contents
            .get_mut(&parent)
            .expect("checked")
            .children
            .insert(name.to_string(), id);
        Ok(id)
    }

    /// Removes a node and its whole subtree, along with every assignment
    /// that targets a removed node.
    pub fn remove_content(&mut self, owner: MemberId, node: ContentId) -> Result<(), ModelError> {
        let owner_name = self.require_member(owner)?.to_string();
        if self.content_owner(node)? != owner {
            return Err(ModelError::ForeignContent {
                owner: owner_name,
                path: self.content_path(node).unwrap_or_default(),
            });
        }
        let Some(parent) = self.content_parent(node) else {
            return Err(ModelError::CannotRemoveRoot(owner_name));
        };
        let doomed: HashSet<ContentId> = self.content_subtree(node).into_iter().collect();
        let name = self.contents[&node].name.clone();
        let net = self.net_mut();
        net.contents
            .get_mut(&parent)
            .expect("checked")
            .children
            .remove(&name);
        net.contents.retain(|id, _| !doomed.contains(id));
        net.assignments.retain(|k, _| !doomed.contains(&k.content));
        Ok(())
    }
}

impl NetworkSnapshot {
    pub fn add_content(
        &self,
        owner: MemberId,
        parent: ContentId,
        name: &str,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.add_content(owner, parent, name).map(|_| ()))
    }

    pub fn remove_content(
        &self,
        owner: MemberId,
        node: ContentId,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.remove_content(owner, node))
    }
}
