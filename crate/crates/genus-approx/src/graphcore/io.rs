use std::io::{BufRead, Write};

use super::{Graph, GraphError, Vertex};

/// Parses the plain-text edge-list format.
///
/// One `u v` pair per line; `#` starts a comment. A line holding a single id
/// declares an isolated vertex. Repeated edges are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| GraphError::Parse {
                    line: idx + 1,
                    msg: format!("invalid vertex id {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        match ids.as_slice() {
            [v] => g.add_vertex(Vertex(*v)),
            [u, v] => {
                if u == v {
                    return Err(GraphError::Parse {
                        line: idx + 1,
                        msg: format!("self-loop at vertex {u}"),
                    });
                }
                g.add_edge(Vertex(*u), Vertex(*v))?;
            }
            _ => {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("expected `u v`, found {} tokens", ids.len()),
                })
            }
        }
    }
    Ok(g)
}

pub fn read_edge_list<R: BufRead>(mut reader: R) -> Result<Graph, GraphError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_edge_list(&text)
}

/// Writes sorted edges, then isolated vertices on lines of their own.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<(), GraphError> {
    for e in g.edges() {
        let (u, v) = e.ends();
        writeln!(out, "{u} {v}")?;
    }
    for v in g.vertices().filter(|&v| g.degree(v) == 0) {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_duplicates_and_isolated() {
        let g = parse_edge_list("# header\n0 1\n1 0 # again\n\n2 1\n7\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(Vertex(7)), 0);
    }

    #[test]
    fn rejects_loops_and_garbage() {
        assert!(matches!(
            parse_edge_list("3 3"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(parse_edge_list("0 x").is_err());
        assert!(parse_edge_list("0 1 2").is_err());
    }

    #[test]
    fn writer_round_trips() {
        let g = parse_edge_list("5 2\n2 9\n4\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "2 5\n2 9\n4\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }
}
