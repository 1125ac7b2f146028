use std::collections::{BTreeSet, VecDeque};

use super::{Draft, GroupId, GroupRec, Hierarchy, MemberId, Network, NetworkSnapshot};
use crate::error::ModelError;
use crate::store::Subject;

impl Network {
    /// Children of every group, derived from parent links (implicit `all`
    /// edges included).
    pub fn group_children(&self) -> Vec<Vec<GroupId>> {
        let mut children = vec![Vec::new(); self.group_index_bound()];
        for g in self.groups() {
            for p in self.group_parents(g) {
                children[p.index()].push(g);
            }
        }
        children
    }

    /// True if `ancestor` is `group` or reachable from it through parent
    /// links.
    pub fn is_ancestor_or_self(&self, ancestor: GroupId, group: GroupId) -> bool {
        let mut seen = vec![false; self.group_index_bound()];
        let mut stack = vec![group];
        while let Some(g) = stack.pop() {
            if g == ancestor {
                return true;
            }
            if std::mem::replace(&mut seen[g.index()], true) {
                continue;
            }
            stack.extend(self.group_parents(g));
        }
        false
    }

    /// Every member of `group` or of any transitive subgroup. For `all` this
    /// is every member.
    pub fn member_closure(&self, group: GroupId) -> Result<BTreeSet<MemberId>, ModelError> {
        self.require_group(group)?;
        if group == GroupId::ALL {
            return Ok(self.members().collect());
        }
        let children = self.group_children();
        let mut inside = vec![false; self.group_index_bound()];
        let mut queue = VecDeque::from([group]);
        inside[group.index()] = true;
        while let Some(g) = queue.pop_front() {
            for &c in &children[g.index()] {
                if !std::mem::replace(&mut inside[c.index()], true) {
                    queue.push_back(c);
                }
            }
        }
        Ok(self
            .members
            .iter()
            .filter(|(_, m)| m.groups.iter().any(|g| inside[g.index()]))
            .map(|(&id, _)| id)
            .collect())
    }

    fn check_edge(&self, child: GroupId, parent: GroupId) -> Result<(), ModelError> {
        let child_name = self.require_group(child)?;
        let parent_name = self.require_group(parent)?;
        let names = || (child_name.to_string(), parent_name.to_string());
        if self.group_hierarchy(child) != self.group_hierarchy(parent) {
            let (child, parent) = names();
            return Err(ModelError::CrossHierarchy { child, parent });
        }
        if child == GroupId::ALL || self.is_ancestor_or_self(child, parent) {
            let (child, parent) = names();
            return Err(ModelError::CycleDetected { child, parent });
        }
        Ok(())
    }
}

impl Draft {
    /// Creates a group. With `owner` set the group joins that member's
    /// private hierarchy; otherwise it is a system group, placed under `all`
    /// when `parents` is empty.
    pub fn add_group(
        &mut self,
        name: &str,
        parents: &[GroupId],
        owner: Option<MemberId>,
    ) -> Result<GroupId, ModelError> {
        self.check_fresh_name(name)?;
        let hierarchy = match owner {
            Some(m) => {
                self.require_member(m)?;
                Hierarchy::User(m)
            }
            None => Hierarchy::System,
        };
        for &p in parents {
            let parent_name = self.require_group(p)?;
            if self.group_hierarchy(p) != Some(hierarchy) {
                return Err(ModelError::CrossHierarchy {
                    child: name.to_string(),
                    parent: parent_name.to_string(),
                });
            }
        }
        let net = self.net_mut();
        let id = GroupId(net.next_group);
        net.next_group += 1;
        net.groups.insert(
            id,
            GroupRec {
                name: name.to_string(),
                hierarchy,
                parents: parents.iter().copied().collect(),
            },
        );
        net.group_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds `child < parent`. Re-adding an existing edge is a no-op.
    pub fn add_subgroup_edge(&mut self, child: GroupId, parent: GroupId) -> Result<(), ModelError> {
        if self
            .declared_parents(child)
            .is_some_and(|ps| ps.contains(&parent))
        {
            return Ok(());
        }
        self.check_edge(child, parent)?;
        self.net_mut()
            .groups
            .get_mut(&child)
            .expect("checked")
            .parents
            .insert(parent);
        Ok(())
    }

    /// Removes a declared edge. A system group left without parents falls
    /// back under `all`.
    pub fn remove_subgroup_edge(
        &mut self,
        child: GroupId,
        parent: GroupId,
    ) -> Result<(), ModelError> {
        let child_name = self.require_group(child)?.to_string();
        let parent_name = self.require_group(parent)?.to_string();
        let rec = self.net_mut().groups.get_mut(&child).expect("checked");
        if !rec.parents.remove(&parent) {
            return Err(ModelError::UnknownGroup(format!(
                "{child_name} < {parent_name}"
            )));
        }
        Ok(())
    }

    /// Deletes a group together with its memberships, its edges, and every
    /// assignment whose subject it is.
    pub fn delete_group(&mut self, group: GroupId) -> Result<(), ModelError> {
        self.require_group(group)?;
        if group == GroupId::ALL {
            return Err(ModelError::CannotModifyAll);
        }
        let net = self.net_mut();
        let rec = net.groups.remove(&group).expect("checked");
        net.group_names.remove(&rec.name);
        for g in net.groups.values_mut() {
            g.parents.remove(&group);
        }
        for m in net.members.values_mut() {
            m.groups.remove(&group);
        }
        net.assignments
            .retain(|k, _| k.subject != Subject::Group(group));
        Ok(())
    }

    pub fn set_membership(
        &mut self,
        member: MemberId,
        group: GroupId,
        present: bool,
    ) -> Result<(), ModelError> {
        self.require_member(member)?;
        self.require_group(group)?;
        if group == GroupId::ALL {
            return Err(ModelError::CannotModifyAll);
        }
        let rec = self.net_mut().members.get_mut(&member).expect("checked");
        if present {
            rec.groups.insert(group);
        } else {
            rec.groups.remove(&group);
        }
        Ok(())
    }
}

impl NetworkSnapshot {
    pub fn add_group(
        &self,
        name: &str,
        parents: &[GroupId],
        owner: Option<MemberId>,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.add_group(name, parents, owner).map(|_| ()))
    }

    pub fn add_subgroup_edge(
        &self,
        child: GroupId,
        parent: GroupId,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.add_subgroup_edge(child, parent))
    }

    pub fn remove_subgroup_edge(
        &self,
        child: GroupId,
        parent: GroupId,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.remove_subgroup_edge(child, parent))
    }

    pub fn delete_group(&self, group: GroupId) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.delete_group(group))
    }

    pub fn set_membership(
        &self,
        member: MemberId,
        group: GroupId,
        present: bool,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.set_membership(member, group, present))
    }
}
