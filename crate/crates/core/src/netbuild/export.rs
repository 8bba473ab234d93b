//! Graph exchange exports: node/edge CSV lists and DOT, for external
//! layout and visualization tools.

use std::io::{self, Write};

use super::{AuthorGraph, BipartiteAssignmentGraph};

fn label_str(label: Option<crate::categorizer::AuthorCategory>) -> &'static str {
    label.map(|c| c.as_str()).unwrap_or("")
}

/// `nodes.csv`: `id,category`, one row per node in sorted id order.
pub fn write_nodes_csv<W: Write>(graph: &AuthorGraph, mut w: W) -> io::Result<()> {
    writeln!(w, "id,category")?;
    for (i, node) in graph.nodes().iter().enumerate() {
        writeln!(w, "{},{}", node, label_str(graph.label(i)))?;
    }
    Ok(())
}

/// `edges.csv`: `src,dst,weight,directed` in canonical edge order.
pub fn write_edges_csv<W: Write>(graph: &AuthorGraph, mut w: W) -> io::Result<()> {
    writeln!(w, "src,dst,weight,directed")?;
    let directed = graph.directed();
    for (a, b, weight) in graph.edges() {
        writeln!(
            w,
            "{},{},{},{}",
            graph.author(a),
            graph.author(b),
            weight,
            directed
        )?;
    }
    Ok(())
}

/// DOT export with the category attached as a node attribute.
pub fn write_dot<W: Write>(graph: &AuthorGraph, name: &str, mut w: W) -> io::Result<()> {
    let (keyword, arrow) = if graph.directed() {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    writeln!(w, "{keyword} {name} {{")?;
    for (i, node) in graph.nodes().iter().enumerate() {
        writeln!(w, "  \"{}\" [category=\"{}\"];", node, label_str(graph.label(i)))?;
    }
    for (a, b, weight) in graph.edges() {
        writeln!(
            w,
            "  \"{}\" {arrow} \"{}\" [weight={weight}];",
            graph.author(a),
            graph.author(b)
        )?;
    }
    writeln!(w, "}}")
}

impl BipartiteAssignmentGraph {
    /// `nodes.csv` with the left side labeled by its role.
    pub fn write_nodes_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "id,category")?;
        for actor in &self.actors {
            writeln!(w, "{},{}", actor, self.role)?;
        }
        for (author, &label) in self.authors.iter().zip(&self.author_labels) {
            writeln!(w, "{},{}", author, label_str(label))?;
        }
        Ok(())
    }

    /// `edges.csv`: directed actor -> author edges, weight 1.
    pub fn write_edges_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "src,dst,weight,directed")?;
        for &(actor, author) in &self.edges {
            writeln!(w, "{},{},1,true", self.actors[actor], self.authors[author])?;
        }
        Ok(())
    }

    pub fn write_dot<W: Write>(&self, name: &str, mut w: W) -> io::Result<()> {
        writeln!(w, "digraph {name} {{")?;
        for actor in &self.actors {
            writeln!(w, "  \"{}\" [side=\"{}\"];", actor, self.role)?;
        }
        for (author, &label) in self.authors.iter().zip(&self.author_labels) {
            writeln!(
                w,
                "  \"{}\" [side=\"author\" category=\"{}\"];",
                author,
                label_str(label)
            )?;
        }
        for &(actor, author) in &self.edges {
            writeln!(
                w,
                "  \"{}\" -> \"{}\";",
                self.actors[actor], self.authors[author]
            )?;
        }
        writeln!(w, "}}")
    }
}
