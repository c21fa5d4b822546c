//! Cayley graph loader: explicit multiplication table plus generator set.
//!
//! File format, whitespace-delimited: first `n k`, then an n-by-n
//! multiplication table of element indices (`table[a][b] = a*b`), then k
//! generator indices. The loader verifies the group axioms on the table
//! (identity, associativity, inverses) and that the generator set is
//! inverse-closed and identity-free, so the resulting graph is simple and
//! undirected. Vertices are group elements in table order.

use super::FiniteGraph;
use crate::error::{Error, Result};

pub(super) fn load(path: &str, spec: &str) -> Result<FiniteGraph> {
    let text = std::fs::read_to_string(path)?;
    let fail = |msg: String| Error::GroupTable { path: path.to_string(), msg };

    let mut tokens = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| fail(format!("expected an integer token, found '{t}'")))
    });
    let mut next = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| fail(format!("unexpected end of file, expected {what}")))?
    };

    let n = next("element count n")?;
    let k = next("generator count k")?;
    if n == 0 || k == 0 {
        return Err(fail("need n >= 1 elements and k >= 1 generators".into()));
    }
    if n > 1024 {
        return Err(fail(format!("table too large ({n} elements, limit 1024)")));
    }

    let mut table = vec![0usize; n * n];
    for entry in table.iter_mut() {
        let x = next("a table entry")?;
        if x >= n {
            return Err(fail(format!("table entry {x} out of range 0..{n}")));
        }
        *entry = x;
    }
    let mut gens = Vec::with_capacity(k);
    for _ in 0..k {
        let g = next("a generator index")?;
        if g >= n {
            return Err(fail(format!("generator {g} out of range 0..{n}")));
        }
        if gens.contains(&g) {
            return Err(fail(format!("duplicate generator {g}")));
        }
        gens.push(g);
    }
    if tokens.next().is_some() {
        return Err(fail("trailing tokens after the generator list".into()));
    }

    let mul = |a: usize, b: usize| table[a * n + b];

    // Identity: some e with e*x = x*e = x for all x.
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
        .ok_or_else(|| fail("no identity element".into()))?;

    // Associativity, O(n^3); the size cap above keeps this feasible.
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            for c in 0..n {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return Err(fail(format!(
                        "not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
    }

    // Inverses: every row must hit the identity.
    let inverse = |a: usize| (0..n).find(|&b| mul(a, b) == identity && mul(b, a) == identity);
    for a in 0..n {
        if inverse(a).is_none() {
            return Err(fail(format!("element {a} has no inverse")));
        }
    }

    for &g in &gens {
        if g == identity {
            return Err(fail("generator set contains the identity (self-loop)".into()));
        }
        let inv = inverse(g).expect("inverses verified above");
        if !gens.contains(&inv) {
            return Err(fail(format!(
                "generator set not closed under inverse: {g}^-1 = {inv} missing"
            )));
        }
    }

    // a*g1 = a*g2 forces g1 = g2 by cancellation, so pairs never repeat
    // across generators; an unordered pair repeats only via g and g^-1,
    // which the min-max dedup below collapses.
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for a in 0..n {
        for &g in &gens {
            let b = mul(a, g);
            let pair = (a.min(b) as u32, a.max(b) as u32);
            if seen.insert(pair) {
                edges.push(pair);
            }
        }
    }
    FiniteGraph::from_parts(n as u32, edges, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> (tempfile::TempDir, String) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.cayley");
        std::fs::write(&path, content).unwrap();
        let path_str = path.to_str().unwrap().to_string();
        (dir, path_str)
    }

    fn z4_table(gens: &str) -> String {
        format!(
            "4 {}\n\
             0 1 2 3\n\
             1 2 3 0\n\
             2 3 0 1\n\
             3 0 1 2\n\
             {gens}\n",
            gens.split_whitespace().count(),
        )
    }

    #[test]
    fn z4_with_symmetric_generators_is_cycle() {
        let (_dir, path) = write_temp(&z4_table("1 3"));
        let g = load(&path, "cayley:test").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(), 2);
    }

    #[test]
    fn non_symmetric_generators_rejected() {
        let (_dir, path) = write_temp(&z4_table("1"));
        let err = load(&path, "cayley:test").unwrap_err();
        assert!(err.to_string().contains("not closed under inverse"));
    }

    #[test]
    fn identity_generator_rejected() {
        let (_dir, path) = write_temp(&z4_table("0 1 3"));
        let err = load(&path, "cayley:test").unwrap_err();
        assert!(err.to_string().contains("identity"));
    }

    #[test]
    fn non_associative_table_rejected() {
        // Swap one entry of the Z4 table to break associativity.
        let text = "4 2\n\
                    0 1 2 3\n\
                    1 2 3 0\n\
                    2 3 1 0\n\
                    3 0 1 2\n\
                    1 3\n";
        let (_dir, path) = write_temp(text);
        let err = load(&path, "cayley:test").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("associative") || msg.contains("inverse") || msg.contains("identity"),
            "unexpected message: {msg}"
        );
    }

    #[test]
    fn involution_generator_gives_simple_graph() {
        // Z4 with generators {1, 2, 3}: 2 is an involution, degree is 3.
        let (_dir, path) = write_temp(&z4_table("1 2 3"));
        let g = load(&path, "cayley:test").unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.edge_count(), 6);
    }
}
