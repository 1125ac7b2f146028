use std::fmt::Write;

use crate::evolution::VisibilityDiff;
use crate::lang::Answer;
use crate::model::Network;
use crate::resolve::{PathNode, ResolutionTrace};
use crate::store::Mode;

/// Terminal styling; only the verdict words are coloured.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn verdict(self, m: Mode) -> String {
        let word = match m {
            Mode::Visible => "VISIBLE",
            Mode::Invisible => "INVISIBLE",
        };
        if !self.color {
            return word.to_string();
        }
        let code = match m {
            Mode::Visible => 32,
            Mode::Invisible => 31,
        };
        format!("\x1b[1;{code}m{word}\x1b[0m")
    }
}

fn name_of(net: &Network, n: PathNode) -> &str {
    match n {
        PathNode::Group(g) => net.group_name(g).unwrap_or("?"),
        PathNode::Member(m) => net.member_name(m).unwrap_or("?"),
    }
}

fn member(net: &Network, m: crate::model::MemberId) -> &str {
    net.member_name(m).unwrap_or("?")
}

fn path(net: &Network, c: crate::model::ContentId) -> String {
    net.content_path(c).unwrap_or_default()
}

pub fn render_answer(net: &Network, answer: &Answer, machine: bool, style: Style) -> String {
    let mut out = String::new();
    match answer {
        Answer::Verdict(t) => {
            if machine {
                let _ = writeln!(
                    out,
                    "query=can viewer={} owner={} path={} verdict={}",
                    member(net, t.viewer),
                    member(net, t.owner),
                    path(net, t.content),
                    t.verdict
                );
            } else {
                let _ = writeln!(out, "{}", style.verdict(t.verdict));
            }
        }
        Answer::VisibleSet {
            viewer,
            owner,
            contents,
        } => {
            let mut paths: Vec<String> = contents.iter().map(|&c| path(net, c)).collect();
            paths.sort();
            if machine {
                for p in &paths {
                    let _ = writeln!(
                        out,
                        "query=show viewer={} owner={} path={p} verdict=visible",
                        member(net, *viewer),
                        member(net, *owner)
                    );
                }
            } else if paths.is_empty() {
                out.push_str("(none)\n");
            } else {
                for p in &paths {
                    let _ = writeln!(out, "{p}");
                }
            }
        }
        Answer::Audience {
            owner,
            content,
            members,
        } => {
            let mut names: Vec<&str> = members.iter().map(|&m| member(net, m)).collect();
            names.sort();
            for n in names {
                if machine {
                    let _ = writeln!(
                        out,
                        "query=audience viewer={n} owner={} path={} verdict=visible",
                        member(net, *owner),
                        path(net, *content)
                    );
                } else {
                    let _ = writeln!(out, "{n}");
                }
            }
        }
        Answer::Explain(t) => render_explain(&mut out, net, t, machine, style),
        Answer::Diff(d) => out.push_str(&render_diff(d, machine)),
    }
    out
}

fn render_explain(
    out: &mut String,
    net: &Network,
    t: &ResolutionTrace,
    machine: bool,
    style: Style,
) {
    let viewer = member(net, t.viewer);
    let owner = member(net, t.owner);
    let target = path(net, t.content);
    if machine {
        for p in &t.paths {
            let derivation: Vec<&str> = p.path.iter().map(|&n| name_of(net, n)).collect();
            let _ = write!(
                out,
                "query=explain viewer={viewer} owner={owner} path={target} derivation={} verdict={}",
                derivation.join(">"),
                p.mode().as_str()
            );
            match p.winner {
                Some(w) => {
                    let _ = writeln!(
                        out,
                        " winner_subject={} winner_content={} protocol={}",
                        net.subject_name(w.assignment.subject),
                        path(net, w.assignment.content),
                        w.protocol
                    );
                }
                None => {
                    let _ = writeln!(out, " winner_subject=- winner_content=- protocol=-");
                }
            }
        }
        let _ = writeln!(
            out,
            "query=explain viewer={viewer} owner={owner} path={target} combination={} verdict={}",
            t.combination.as_str(),
            t.verdict
        );
        return;
    }
    let _ = writeln!(out, "{viewer} sees {owner}:{target}?");
    if t.owner_bypass() {
        out.push_str("  owner bypass\n");
    }
    for p in &t.paths {
        let derivation: Vec<&str> = p.path.iter().map(|&n| name_of(net, n)).collect();
        let _ = write!(out, "  {}: {}", derivation.join(" > "), p.mode().as_str());
        if let Some(w) = p.winner {
            let _ = write!(
                out,
                " by {}:{} ({})",
                net.subject_name(w.assignment.subject),
                path(net, w.assignment.content),
                w.protocol
            );
        }
        out.push('\n');
    }
    let _ = writeln!(out, "combination: {}", t.combination.as_str());
    let _ = writeln!(out, "{}", style.verdict(t.verdict));
}

pub fn render_diff(d: &VisibilityDiff, machine: bool) -> String {
    let mut out = String::new();
    if machine {
        for e in &d.entries {
            let _ = writeln!(
                out,
                "query=diff owner={} viewer={} path={} old={} new={}",
                d.owner,
                e.viewer,
                e.path,
                e.old_label(),
                e.new_label()
            );
        }
    } else if d.entries.is_empty() {
        out.push_str("no changes\n");
    } else {
        for e in &d.entries {
            let _ = writeln!(out, "{e}");
        }
    }
    out
}
