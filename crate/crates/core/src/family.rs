//! Named poset families.

use crate::error::{Error, Result};
use crate::poset::Poset;

pub const FAMILY_NAMES: [&str; 6] = ["chain", "dandelion", "corolla", "pseudo_circle", "antichain", "tree"];

fn bad(family: &str, message: impl Into<String>) -> Error {
    Error::BadParams {
        family: family.to_string(),
        message: message.into(),
    }
}

fn one_param(family: &str, params: &[usize]) -> Result<usize> {
    match params {
        [n] => Ok(*n),
        _ => Err(bad(family, format!("expected one integer, got {}", params.len()))),
    }
}

fn numbered(m: usize) -> Vec<String> {
    (0..m).map(|i| i.to_string()).collect()
}

/// Builds a family member:
///
/// * `chain n`: `0 < 1 < ... < n`;
/// * `dandelion n`: `0 < 1 < j` for `j = 2..=n+1`;
/// * `corolla n`: a root `0` below leaves `1..=n`;
/// * `pseudo_circle`: `a, b < c, d`;
/// * `antichain m`: `m` unrelated elements;
/// * `tree a1 b1 a2 b2 ...`: covers `a_i < b_i` forming a tree.
pub fn family(name: &str, params: &[usize]) -> Result<Poset> {
    match name {
        "chain" => Ok(Poset::chain(one_param(name, params)?)),
        "dandelion" => {
            let n = one_param(name, params)?;
            if n == 0 {
                return Err(bad(name, "needs at least one petal"));
            }
            let mut rel = vec![(0, 1)];
            rel.extend((2..=n + 1).map(|j| (1, j)));
            Poset::from_relations(numbered(n + 2), &rel)
        }
        "corolla" => {
            let n = one_param(name, params)?;
            if n == 0 {
                return Err(bad(name, "needs at least one leaf"));
            }
            let rel: Vec<_> = (1..=n).map(|j| (0, j)).collect();
            Poset::from_relations(numbered(n + 1), &rel)
        }
        "pseudo_circle" => {
            if !params.is_empty() {
                return Err(bad(name, "takes no parameters"));
            }
            let names = ["a", "b", "c", "d"].map(String::from).to_vec();
            Poset::from_relations(names, &[(0, 2), (0, 3), (1, 2), (1, 3)])
        }
        "antichain" => {
            let m = one_param(name, params)?;
            if m == 0 {
                return Err(bad(name, "needs at least one element"));
            }
            Ok(Poset::antichain(m))
        }
        "tree" => tree(params),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// Elements are the integers mentioned, in increasing order.
fn tree(params: &[usize]) -> Result<Poset> {
    if params.is_empty() || !params.len().is_multiple_of(2) {
        return Err(bad("tree", "expects a nonempty list of cover pairs `a b`"));
    }
    let mut labels: Vec<usize> = params.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let pos = |x: usize| labels.binary_search(&x).expect("label collected above");
    let edges: Vec<(usize, usize)> = params.chunks(2).map(|p| (pos(p[0]), pos(p[1]))).collect();
    if edges.iter().any(|(a, b)| a == b) {
        return Err(bad("tree", "a cover pair repeats an element"));
    }
    if edges.len() + 1 != labels.len() {
        return Err(bad(
            "tree",
            format!("{} pairs on {} elements cannot form a tree", edges.len(), labels.len()),
        ));
    }
    // With |E| = |V| - 1, connected is equivalent to acyclic.
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return Err(bad("tree", "the cover pairs contain a cycle"));
        }
        parent[ra] = rb;
    }
    let names = labels.iter().map(|x| x.to_string()).collect();
    Poset::from_relations(names, &edges)
}

/// Parses `"name p1 p2 ..."`.
pub fn parse_family(spec: &str) -> Result<Poset> {
    let mut words = spec.split_whitespace();
    let name = words.next().ok_or_else(|| Error::UnknownFamily(String::new()))?;
    let params = words
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| bad(name, format!("`{w}` is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    family(name, &params)
}
