use super::{check_query, combine, viewer_parents, PathNode, PathVerdict, ResolutionTrace, Winner};
use crate::error::ModelError;
use crate::model::{ContentId, MemberId, Network};
use crate::store::{Assignment, Subject};

/// Every simple derivation path ending at `viewer` that is relevant to
/// `owner`'s content, root first. Exponential in the worst case.
pub fn derivation_paths(net: &Network, viewer: MemberId, owner: MemberId) -> Vec<Vec<PathNode>> {
    let mut out = Vec::new();
    // partial paths are built viewer-first and reversed when complete
    let mut stack: Vec<Vec<PathNode>> = viewer_parents(net, viewer, owner)
        .into_iter()
        .map(|g| vec![PathNode::Member(viewer), PathNode::Group(g)])
        .collect();
    while let Some(partial) = stack.pop() {
        let PathNode::Group(top) = *partial.last().expect("non-empty") else {
            unreachable!("only groups are extended")
        };
        let parents = net.group_parents(top);
        if parents.is_empty() {
            let mut path = partial;
            path.reverse();
            out.push(path);
            continue;
        }
        for p in parents {
            let mut next = partial.clone();
            next.push(PathNode::Group(p));
            stack.push(next);
        }
    }
    out
}

fn subject_node(subject: Subject) -> PathNode {
    match subject {
        Subject::Group(g) => PathNode::Group(g),
        Subject::Member(m) => PathNode::Member(m),
    }
}

/// The winning assignment on one path: latest subject on the path, then
/// deepest covering content node.
fn path_winner<'a>(
    net: &Network,
    path: &[PathNode],
    content: ContentId,
    candidates: &[&'a Assignment],
) -> Option<&'a Assignment> {
    candidates
        .iter()
        .copied()
        .filter_map(|a| {
            let pos = path.iter().position(|&n| n == subject_node(a.subject))?;
            net.content_covers(a.content, content)
                .then(|| (pos, net.content_depth(a.content), a))
        })
        .max_by_key(|&(pos, depth, _)| (pos, depth))
        .map(|(_, _, a)| a)
}

fn node_name(net: &Network, n: PathNode) -> &str {
    match n {
        PathNode::Group(g) => net.group_name(g).unwrap_or("?"),
        PathNode::Member(m) => net.member_name(m).unwrap_or("?"),
    }
}

/// Reference resolver: enumerates every derivation path and applies the
/// overriding and combination rules to each one literally.
pub fn resolve_by_paths(
    net: &Network,
    viewer: MemberId,
    owner: MemberId,
    content: ContentId,
) -> Result<ResolutionTrace, ModelError> {
    check_query(net, viewer, owner, content)?;
    if viewer == owner {
        return Ok(ResolutionTrace::bypass(viewer, content));
    }
    let candidates: Vec<&Assignment> = net.assignments_of(owner).collect();
    let mut paths: Vec<PathVerdict> = derivation_paths(net, viewer, owner)
        .into_iter()
        .map(|path| {
            let winner = path_winner(net, &path, content, &candidates).map(|a| Winner {
                assignment: *a,
                protocol: net.effective_protocol(a),
            });
            PathVerdict { path, winner }
        })
        .collect();
    paths.sort_by_cached_key(|p| {
        p.path
            .iter()
            .map(|&n| node_name(net, n).to_string())
            .collect::<Vec<_>>()
    });
    let mut winners: Vec<Winner> = paths.iter().filter_map(|p| p.winner).collect();
    winners.sort_by_key(|w| w.assignment.key());
    winners.dedup();
    let (combination, verdict) = combine(&winners);
    Ok(ResolutionTrace {
        viewer,
        owner,
        content,
        paths,
        winners,
        combination,
        verdict,
    })
}

/// Full trace with every path retained.
pub fn explain(
    net: &Network,
    viewer: MemberId,
    owner: MemberId,
    content: ContentId,
) -> Result<ResolutionTrace, ModelError> {
    resolve_by_paths(net, viewer, owner, content)
}
