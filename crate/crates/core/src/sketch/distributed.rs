//! Distributed k-sketches: a convergecast builds `S_3(v)` bottom-up (and the
//! reduced sketches `S_2(v ∖ c)` on the way), downcasts spread them to the
//! subtrees, and one exchange hands every node's ancestor sketches to its
//! non-tree neighbors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, VertexSet};
use crate::runtime::{BitReader, BitWriter, Framing, Network, SimulatorConfig, Widths};
use crate::sketch::{reference_sketch, Builder, Sketch};
use crate::small::eta::{compute_eta, eta_reference, NodeState};
use crate::tree::broadcast::{downcast, Own};
use crate::tree::convergecast::{Combine, Upcast};
use crate::tree::exchange::exchange;
use crate::tree::BfsInfo;

/// Truncation parameter of the full sketches.
pub const K_FULL: usize = 3;
/// Truncation parameter of the reduced sketches.
pub const K_REDUCED: usize = 2;

/// Sketch knowledge of one node after all sketch phases.
#[derive(Debug, Clone, Default)]
pub struct SketchTables {
    /// `S_3(α(a,l))` for `l = 0..=level`.
    pub ancestors: Vec<Sketch>,
    /// `S_2(α(a,j) ∖ α(a,j+1))` for `j = 0..level`.
    pub reduced_chain: Vec<Sketch>,
    /// `S_2(a ∖ c)` for each child `c`, computed locally.
    pub reduced_children: BTreeMap<NodeId, Sketch>,
    /// Ancestor sketches received from each non-tree neighbor, root first.
    pub neighbors: BTreeMap<NodeId, Vec<Sketch>>,
}

impl SketchTables {
    pub fn own(&self) -> &Sketch {
        self.ancestors.last().expect("own sketch")
    }
}

/// `R(a)` with a's own `γ` contributions: the spine `ρ(a)` and the paths to
/// non-tree neighbors outside `desc(a)`.
pub fn local_builder(s: &NodeState) -> Builder {
    let l = s.level();
    let mut b = Builder::new(&s.view.ancestors, &s.eta_anc);
    for (u, &h) in s.view.ancestors.iter().zip(&s.h_own) {
        b.add_gamma(*u, h);
    }
    for &y in &s.nontree {
        let path = &s.nbr_anc[&y];
        if path.get(l) == Some(&s.id()) {
            continue; // y is inside desc(a)
        }
        b.add_path(path, &s.nbr_eta[&y]);
        for (i, &u) in path.iter().enumerate() {
            if s.view.ancestors.get(i) != Some(&u) {
                b.add_gamma(u, 1);
            }
        }
    }
    b
}

/// `S_2(α(x,l) ∖ x)` from the downcast chain.
pub fn reduced_above(s: &NodeState, chain: &[Sketch], l: usize) -> Sketch {
    let mut b = Builder::new(&s.view.ancestors[..=l], &s.eta_anc[..=l]);
    for part in &chain[l..] {
        b.add_sketch(part);
    }
    b.finish(K_REDUCED)
}

/// `S_2(α(x,l) ∖ x)` for every `l < level(x)`, deepest first merged upward:
/// each step folds the previous result into the next chain entry the same
/// way the convergecast folds child sketches.
pub fn reduced_above_all(s: &NodeState, chain: &[Sketch]) -> Vec<Sketch> {
    let mut out: Vec<Sketch> = Vec::with_capacity(chain.len());
    let mut below: Option<Sketch> = None;
    for l in (0..chain.len()).rev() {
        let mut b = Builder::new(&s.view.ancestors[..=l], &s.eta_anc[..=l]);
        b.add_sketch(&chain[l]);
        if let Some(prev) = &below {
            b.add_sketch(prev);
        }
        let r = b.finish(K_REDUCED);
        below = Some(r.clone());
        out.push(r);
    }
    out.reverse();
    out
}

fn decode_list(bits: &crate::runtime::BitsRef, w: Widths, sources: &[NodeId], k: usize) -> Result<Vec<Sketch>> {
    let mut r = BitReader::new(bits);
    let out = sources.iter().map(|&src| Sketch::decode(&mut r, w, src, k)).collect::<Result<Vec<_>>>()?;
    if r.remaining() != 0 {
        return Err(Error::Protocol("sketch list: trailing bits".into()));
    }
    Ok(out)
}

/// Runs the sketch phases and returns every node's tables.
pub fn compute_sketches(net: &mut Network<'_>, tree: &BfsInfo, states: &[NodeState]) -> Result<Vec<SketchTables>> {
    let w = net.widths();
    let framing = Framing::words(w.wb);
    type Local = (Sketch, BTreeMap<NodeId, Sketch>);
    let programs = states
        .iter()
        .map(|s| {
            let view = s.view.clone();
            let s = s.clone();
            let combine: Combine<Local> = Box::new(move |kids| {
                let kids = kids
                    .into_iter()
                    .map(|(c, bits)| Ok((c, Sketch::from_bits(&bits, w, c, K_FULL)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let mut full = local_builder(&s);
                for sk in kids.values() {
                    full.add_sketch(sk);
                }
                let own = full.finish(K_FULL);
                let mut reduced = BTreeMap::new();
                for &c in kids.keys() {
                    let mut b = local_builder(&s);
                    for (_, sk) in kids.iter().filter(|(&d, _)| d != c) {
                        b.add_sketch(sk);
                    }
                    reduced.insert(c, b.finish(K_REDUCED));
                }
                Ok((own.to_bits(w)?, (own, reduced)))
            });
            Upcast::new(&view, framing, combine)
        })
        .collect();
    let locals: Vec<Local> = net.run("convergecast:sketch", programs)?;

    let own_reduced = locals
        .iter()
        .zip(&tree.nodes)
        .map(|((_, red), v)| Ok(Own::PerChild(v.children.iter().map(|c| red[c].to_bits(w)).collect::<Result<_>>()?)))
        .collect::<Result<Vec<_>>>()?;
    let chains = downcast(net, &tree.nodes, "broadcast2:reduced", framing, own_reduced)?;
    let own_full = locals.iter().map(|(s, _)| s.to_bits(w).map(Own::Same)).collect::<Result<Vec<_>>>()?;
    let fulls = downcast(net, &tree.nodes, "broadcast2:sketch", framing, own_full)?;

    let mut tables: Vec<SketchTables> = Vec::with_capacity(states.len());
    for ((s, (own, red)), (chain, full)) in states.iter().zip(locals).zip(chains.into_iter().zip(fulls)) {
        let anc = &s.view.ancestors;
        let mut ancestors = full
            .iter()
            .zip(anc)
            .map(|(b, &src)| Sketch::from_bits(b, w, src, K_FULL))
            .collect::<Result<Vec<_>>>()?;
        ancestors.push(own);
        let reduced_chain = chain
            .iter()
            .enumerate()
            .map(|(j, b)| Sketch::from_bits(b, w, anc[j], K_REDUCED))
            .collect::<Result<Vec<_>>>()?;
        tables.push(SketchTables { ancestors, reduced_chain, reduced_children: red, neighbors: BTreeMap::new() });
    }

    let send = states
        .iter()
        .zip(&tables)
        .map(|(s, t)| {
            let mut out = BitWriter::new();
            for sk in &t.ancestors {
                sk.encode(&mut out, w);
            }
            let rec = out.finish()?;
            Ok(s.nontree.iter().map(|&b| (b, rec.clone())).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let expect = states.iter().map(|s| s.nontree.clone()).collect();
    let got = exchange(net, "exchange:sketch", send, expect)?;
    for ((s, t), recs) in states.iter().zip(&mut tables).zip(got) {
        for (b, bits) in recs {
            t.neighbors.insert(b, decode_list(&bits, w, &s.nbr_anc[&b], K_FULL)?);
        }
    }
    Ok(tables)
}

/// Comparison of every distributed sketch with its centralized reference.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SketchAudit {
    /// Sketches compared: `S_3(v)` per node plus `S_2(v ∖ x)` per child and
    /// per ancestor pair.
    pub compared: usize,
    pub mismatches: Vec<String>,
    /// Largest wire size seen, in bits.
    pub max_bits: usize,
    /// Largest `bits / (2^k · Depth · ⌈log₂ n⌉)` over all sketches.
    pub max_bit_ratio: f64,
}

/// `⌈log₂ n⌉`, at least 1.
pub fn log2_ceil(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// Runs the sketch phases under the BFS tree from `root` and checks every
/// `S_3(v)`, every `S_2(v ∖ c)` for children `c` and every `S_2(v ∖ x)` for
/// descendants `x` against [`reference_sketch`].
pub fn audit_sketches(g: &Graph, root: NodeId, sim: &SimulatorConfig) -> Result<SketchAudit> {
    let t = BfsInfo::centralized(g, root);
    let mut net = Network::new(g, sim.clone())?;
    let s = compute_eta(&mut net, &t)?;
    let tables = compute_sketches(&mut net, &t, &s)?;
    let eta = eta_reference(g, &t)?;
    let w = net.widths();
    let mut audit = SketchAudit::default();
    let scale = |k: usize| ((1usize << k) * t.depth.max(1) * log2_ceil(g.n())) as f64;
    let compare = |audit: &mut SketchAudit, got: &Sketch, want: &Sketch, what: String| {
        audit.compared += 1;
        if got != want {
            audit.mismatches.push(what);
        }
        let bits = got.bit_len(w);
        audit.max_bits = audit.max_bits.max(bits);
        audit.max_bit_ratio = audit.max_bit_ratio.max(bits as f64 / scale(got.k));
    };
    for v in 0..g.n() {
        let want = reference_sketch(g, &t, &eta, v, &t.desc(v), K_FULL)?;
        compare(&mut audit, tables[v].own(), &want, format!("S3({v}) root {root}"));
        for &c in t.children(v) {
            let x: VertexSet = t.desc(v).xor(&t.desc(c));
            let want = reference_sketch(g, &t, &eta, v, &x, K_REDUCED)?;
            compare(&mut audit, &tables[v].reduced_children[&c], &want, format!("S2({v}∖{c}) root {root}"));
        }
        let above = reduced_above_all(&s[v], &tables[v].reduced_chain);
        for (l, got) in above.iter().enumerate() {
            let a = t.alpha(v, l);
            let x = t.desc(a).xor(&t.desc(v));
            let want = reference_sketch(g, &t, &eta, a, &x, K_REDUCED)?;
            compare(&mut audit, got, &want, format!("S2({a}∖{v}) root {root}"));
        }
    }
    Ok(audit)
}
