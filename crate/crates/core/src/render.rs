//! Graphviz DOT output with fixed node positions (`pos="x,y!"`, to be laid
//! out by `neato -n` or any engine honoring pinned nodes).

use std::fmt::Write as _;

use crate::automata::Transducer;
use crate::closure::ClosureMachine;
use crate::error::Result;
use crate::layout::{circular_positions, cone_positions, layered_positions, Layout, Point, RenderSpec};
use crate::sequential::SequentialTransducer;
use crate::synchronized::SuffixSeq;
use crate::word::{display_digits, format_digits, Digit};

struct Node {
    id: String,
    label: String,
    pos: Point,
    accepting: bool,
}

struct Edge {
    from: String,
    to: String,
    label: Option<String>,
    dashed: bool,
}

#[derive(Default)]
struct Graph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    /// Invisible helper nodes: initial arrow sources and terminal points.
    points: Vec<(String, Point, bool)>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl Graph {
    fn initial_arrow(&mut self, node: usize) {
        let (x, y) = self.nodes[node].pos;
        let id = format!("init{node}");
        self.points.push((id.clone(), (x + 0.9, y + 0.9), false));
        let to = self.nodes[node].id.clone();
        self.edges.push(Edge {
            from: id,
            to,
            label: None,
            dashed: false,
        });
    }

    fn terminal_arrow(&mut self, node: usize, word: Option<String>) {
        let (x, y) = self.nodes[node].pos;
        let norm = (x * x + y * y).sqrt();
        let (dx, dy) = if norm < 1e-9 { (0.0, -0.8) } else { (0.8 * x / norm, 0.8 * y / norm) };
        let id = format!("t{node}");
        self.points.push((id.clone(), (x + dx, y + dy), true));
        let from = self.nodes[node].id.clone();
        self.edges.push(Edge {
            from,
            to: id,
            label: word,
            dashed: false,
        });
    }

    fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", quote(name));
        let _ = writeln!(out, "  graph [layout=neato, splines=true, overlap=true];");
        let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
        let _ = writeln!(out, "  edge [fontsize=9];");
        for n in &self.nodes {
            let shape = if n.accepting { ", shape=doublecircle" } else { "" };
            let _ = writeln!(
                out,
                "  {} [label={}{}, pos=\"{:.3},{:.3}!\"];",
                n.id,
                quote(&n.label),
                shape,
                n.pos.0,
                n.pos.1
            );
        }
        for (id, (x, y), visible) in &self.points {
            let style = if *visible { "shape=point" } else { "shape=point, style=invis" };
            let _ = writeln!(out, "  {id} [{style}, pos=\"{x:.3},{y:.3}!\"];");
        }
        for e in &self.edges {
            let mut attrs = Vec::new();
            if let Some(l) = &e.label {
                attrs.push(format!("label={}", quote(l)));
            }
            if e.dashed {
                attrs.push("style=dashed".to_owned());
            }
            if attrs.is_empty() {
                let _ = writeln!(out, "  {} -> {};", e.from, e.to);
            } else {
                let _ = writeln!(out, "  {} -> {} [{}];", e.from, e.to, attrs.join(", "));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn positions(count: usize, roots: &[usize], successors: &[Vec<usize>], spec: &RenderSpec) -> Vec<Point> {
    match spec.layout {
        Layout::Circular | Layout::Cone => circular_positions(count, spec.radius_scale),
        Layout::Layered => layered_positions(count, roots, successors, spec.radius_scale),
    }
}

fn letter(c: Option<Digit>, base: u32) -> String {
    match c {
        Some(c) => format_digits(&[c], base),
        None => "ε".to_owned(),
    }
}

fn word_label(w: &[Digit], base: u32) -> Option<String> {
    (!w.is_empty()).then(|| format_digits(w, base))
}

pub fn render_sequential(m: &SequentialTransducer, spec: &RenderSpec) -> String {
    let n = m.num_states();
    let mut succ = vec![Vec::new(); n];
    for (p, _, _, q) in m.transitions() {
        succ[p.0].push(q.0);
    }
    let pos = positions(n, &[m.initial().0], &succ, spec);
    let mut g = Graph::default();
    for q in m.states() {
        g.nodes.push(Node {
            id: format!("n{}", q.0),
            label: m.name(q).to_owned(),
            pos: pos[q.0],
            accepting: false,
        });
    }
    g.initial_arrow(m.initial().0);
    for (p, c, out, q) in m.transitions() {
        g.edges.push(Edge {
            from: format!("n{}", p.0),
            to: format!("n{}", q.0),
            label: Some(format!(
                "{}/{}",
                format_digits(&[c], m.input_base()),
                display_digits(out, m.output_base())
            )),
            dashed: false,
        });
    }
    if spec.show_terminal {
        for q in m.states() {
            if let Some(w) = m.terminal(q) {
                g.terminal_arrow(q.0, word_label(w, m.output_base()));
            }
        }
    }
    g.to_dot("sequential")
}

pub fn render_suffix(m: &SuffixSeq, spec: &RenderSpec) -> String {
    let n = m.num_states();
    let mut succ = vec![Vec::new(); n];
    for (p, _, _, q) in m.transitions() {
        succ[p.0].push(q.0);
    }
    let pos = positions(n, &[m.initial().0], &succ, spec);
    let mut g = Graph::default();
    for q in m.states() {
        g.nodes.push(Node {
            id: format!("n{}", q.0),
            label: m.name(q).to_owned(),
            pos: pos[q.0],
            accepting: m.is_final(q),
        });
    }
    g.initial_arrow(m.initial().0);
    for (p, c, out, q) in m.transitions() {
        g.edges.push(Edge {
            from: format!("n{}", p.0),
            to: format!("n{}", q.0),
            label: Some(format!(
                "{}/{}",
                format_digits(&[c], m.input_base()),
                letter(out, m.output_base())
            )),
            dashed: false,
        });
    }
    g.to_dot("suffix")
}

pub fn render_transducer(t: &Transducer, spec: &RenderSpec) -> String {
    let n = t.num_states();
    let mut succ = vec![Vec::new(); n];
    for tr in t.transitions() {
        succ[tr.source.0].push(tr.target.0);
    }
    let roots: Vec<usize> = t.initial().iter().map(|q| q.0).collect();
    let pos = positions(n, &roots, &succ, spec);
    let mut g = Graph::default();
    for q in t.states() {
        g.nodes.push(Node {
            id: format!("n{}", q.0),
            label: t.name(q).to_owned(),
            pos: pos[q.0],
            accepting: t.finals().contains(&q),
        });
    }
    for r in roots {
        g.initial_arrow(r);
    }
    for tr in t.transitions() {
        g.edges.push(Edge {
            from: format!("n{}", tr.source.0),
            to: format!("n{}", tr.target.0),
            label: Some(format!(
                "{}/{}",
                letter(tr.input, t.input_base()),
                letter(tr.output, t.output_base())
            )),
            dashed: false,
        });
    }
    g.to_dot("transducer")
}

/// Sections `0..=max_n` of the closure machine on stacked circles, with the
/// terminal arrows drawn from each section into the one below it (dashed).
pub fn render_cone(m: &ClosureMachine, max_n: usize, spec: &RenderSpec, limit: usize) -> Result<String> {
    let sections = (0..=max_n)
        .map(|n| m.section_export(n, limit))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = sections.iter().map(|s| s.machine.num_states()).collect();
    let pos = cone_positions(&sizes, spec.radius_scale);
    let id = |n: usize, k: usize| format!("s{n}_{k}");
    let mut g = Graph::default();
    let base = m.base();
    for s in &sections {
        let pm = s.machine.machine();
        for q in pm.states() {
            g.nodes.push(Node {
                id: id(s.n, q.0),
                label: pm.name(q).to_owned(),
                pos: pos[s.n][q.0],
                accepting: false,
            });
        }
        let first = g.nodes.len() - pm.num_states();
        g.initial_arrow(first);
        for (p, c, out, q) in pm.transitions() {
            g.edges.push(Edge {
                from: id(s.n, p.0),
                to: id(s.n, q.0),
                label: Some(format!("{}/{}", format_digits(&[c], base), display_digits(out, base))),
                dashed: false,
            });
        }
        if spec.show_terminal {
            for e in &s.cross {
                g.edges.push(Edge {
                    from: id(s.n, e.source.0),
                    to: id(s.n - 1, e.target.0),
                    label: e.label.map(|c| format_digits(&[c], base)),
                    dashed: true,
                });
            }
        }
    }
    Ok(g.to_dot("closure"))
}

/// Number of `nK -> nL` arrows between state nodes in a rendered graph.
pub fn count_state_edges(dot: &str) -> usize {
    dot.lines()
        .filter(|l| {
            let l = l.trim_start();
            let mut parts = l.split(" -> ");
            match (parts.next(), parts.next()) {
                (Some(a), Some(b)) => {
                    let is_state = |s: &str| {
                        let s = s.split([' ', ';']).next().unwrap_or("");
                        (s.starts_with('n') && s[1..].chars().all(|c| c.is_ascii_digit()) && s.len() > 1)
                            || (s.starts_with('s') && s.contains('_'))
                    };
                    is_state(a) && is_state(b)
                }
                _ => false,
            }
        })
        .count()
}
