//! Built-in sample inputs shared by tests, the acceptance run and the CLI self-test.

use std::collections::HashMap;

use crate::graphalg::{parse_graph, GraphError, GraphOfLieAlgebras};
use crate::scalars::FieldSpec;

/// A graph file together with the presentation files it refers to.
pub struct GraphSource {
    pub name: &'static str,
    pub graph: &'static str,
    pub files: &'static [(&'static str, &'static str)],
}

impl GraphSource {
    pub fn build(&self, field: FieldSpec) -> Result<GraphOfLieAlgebras, GraphError> {
        let files: HashMap<&str, &str> = self.files.iter().copied().collect();
        parse_graph(self.graph, |p| files.get(p).map(|s| s.to_string()).ok_or_else(|| "no such file".into()), Some(field))
    }
}

pub const FREE_PRODUCT: GraphSource = GraphSource {
    name: "free-product",
    graph: "vertex u u.lie\nvertex w w.lie\nedge e u w forest zero.lie\nmap sigma e z->0\nmap tau e z->0\n",
    files: &[
        ("u.lie", "gen a weight 1\ngen b weight 2\nrel [a,[a,b]]\n"),
        ("w.lie", "gen c weight 3\n"),
        ("zero.lie", "gen z weight 1\nrel z\n"),
    ],
};

pub const PROPER_AMALGAM: GraphSource = GraphSource {
    name: "proper-amalgam",
    graph: "vertex u u.lie\nvertex w w.lie\nedge e u w forest e.lie\nmap sigma e e->b\nmap tau e e->d\n",
    files: &[
        ("u.lie", "gen a weight 1\ngen b weight 3\n"),
        ("w.lie", "gen c weight 2\ngen d weight 3\nrel [c,[c,d]]\n"),
        ("e.lie", "gen e weight 3\n"),
    ],
};

/// Both sides equal to the edge algebra; the amalgam collapses onto it.
pub const DIAGONAL_AMALGAM: GraphSource = GraphSource {
    name: "diagonal-amalgam",
    graph: "vertex u u.lie\nvertex w w.lie\nedge e u w forest e.lie\n\
            map sigma e p->a\nmap sigma e q->b\nmap tau e p->x\nmap tau e q->y\n",
    files: &[
        ("u.lie", "gen a weight 1\ngen b weight 2\nrel [a,[a,b]]\n"),
        ("w.lie", "gen x weight 1\ngen y weight 2\nrel [x,[x,y]]\n"),
        ("e.lie", "gen p weight 1\ngen q weight 2\nrel [p,[p,q]]\n"),
    ],
};

pub const HNN_DERIVATION: GraphSource = GraphSource {
    name: "hnn-derivation",
    graph: "vertex u u.lie\nedge h u u e.lie\nmap sigma h z->b\nder h z->[a,[a,b]] stable-weight 2\n",
    files: &[("u.lie", "gen a weight 1\ngen b weight 2\n"), ("e.lie", "gen z weight 2\n")],
};

/// `<a, t | [t, a]>`.
pub const HNN_ABELIAN: GraphSource = GraphSource {
    name: "hnn-abelian",
    graph: "vertex u u.lie\nedge t u u e.lie\nmap sigma t z->a\nder t z->0 stable-weight 1\n",
    files: &[("u.lie", "gen a weight 1\n"), ("e.lie", "gen z weight 1\n")],
};

/// Ascending extension of a free algebra: the associated subalgebra is everything.
pub const HNN_ASCENDING: GraphSource = GraphSource {
    name: "hnn-ascending",
    graph: "vertex u u.lie\nedge t u u e.lie\nmap sigma t p->a\nmap sigma t q->b\n\
            der t p->[a,b] stable-weight 2\nder t q->[a,[a,b]] stable-weight 2\n",
    files: &[("u.lie", "gen a weight 1\ngen b weight 2\n"), ("e.lie", "gen p weight 1\ngen q weight 2\n")],
};

/// Two vertices joined by a forest edge, with a loop at the first.
pub const LOOP_AND_TREE: GraphSource = GraphSource {
    name: "loop-and-tree",
    graph: "vertex u u.lie\nvertex w w.lie\nedge f u w forest f.lie\nmap sigma f e->b\nmap tau f e->c\n\
            edge g u u g.lie\nmap sigma g y->a\nder g y->[a,b] stable-weight 3\n",
    files: &[
        ("u.lie", "gen a weight 1\ngen b weight 3\n"),
        ("w.lie", "gen c weight 3\n"),
        ("f.lie", "gen e weight 3\n"),
        ("g.lie", "gen y weight 1\n"),
    ],
};

/// A 4-cycle with one diagonal; the forest is a path.
pub const SQUARE_WITH_DIAGONAL: GraphSource = GraphSource {
    name: "square-with-diagonal",
    graph: "vertex v1 v1.lie\nvertex v2 v2.lie\nvertex v3 v3.lie\nvertex v4 v4.lie\n\
            edge f12 v1 v2 forest one.lie\nmap sigma f12 e->a\nmap tau f12 e->a\n\
            edge f23 v2 v3 forest one.lie\nmap sigma f23 e->a\nmap tau f23 e->a\n\
            edge f34 v3 v4 forest one.lie\nmap sigma f34 e->a\nmap tau f34 e->a\n\
            edge g41 v4 v1 one.lie\nmap sigma g41 e->a\nder g41 e->[a,b] stable-weight 3\n\
            edge g13 v1 v3 one.lie\nmap sigma g13 e->a\nder g13 e->c stable-weight 3\n",
    files: &[
        ("v1.lie", "gen a weight 1\ngen b weight 3\n"),
        ("v2.lie", "gen a weight 1\n"),
        ("v3.lie", "gen a weight 1\ngen c weight 4\n"),
        ("v4.lie", "gen a weight 1\n"),
        ("one.lie", "gen e weight 1\n"),
    ],
};

/// Graphs checked against the exact sequence of induced modules.
pub const GRAPHS: &[GraphSource] = &[FREE_PRODUCT, PROPER_AMALGAM, HNN_DERIVATION, LOOP_AND_TREE, SQUARE_WITH_DIAGONAL];

/// Single-edge amalgams and single-loop extensions.
pub const AMALGAM_BASE_CASES: &[GraphSource] = &[FREE_PRODUCT, PROPER_AMALGAM, DIAGONAL_AMALGAM];
pub const HNN_BASE_CASES: &[GraphSource] = &[HNN_DERIVATION, HNN_ABELIAN, HNN_ASCENDING];

/// One-relator presentations used for the HNN tower checks.
pub const ONE_RELATOR: &[(&str, &str)] = &[
    ("abelian", "gen x weight 1\ngen y weight 1\nrel [x,y]\n"),
    ("engel", "gen x weight 1\ngen y weight 1\nrel [x,[x,y]]\n"),
    ("second-engel", "gen x weight 1\ngen y weight 1\nrel [y,[x,y]]\n"),
    ("mixed-weight", "gen x weight 1\ngen y weight 2\nrel [x,[x,y]]\n"),
    ("weight-four", "gen x weight 1\ngen y weight 1\nrel [x,[x,[x,y]]] + [y,[x,[x,y]]]\n"),
    ("three-generators", "gen x weight 1\ngen y weight 1\ngen z weight 2\nrel [x,y] - z\n"),
];

/// Graphs for the right-angled Artin checks, in the `vertices`/`edge` format.
pub const RAAG_GRAPHS: &[(&str, &str)] = &[
    ("edgeless-pair", "vertices a b\n"),
    ("edge", "vertices a b\nedge a b\n"),
    ("path-3", "vertices a b c\nedge a b\nedge b c\n"),
    ("triangle", "vertices a b c\nedge a b\nedge b c\nedge a c\n"),
    ("square", "vertices a b c d\nedge a b\nedge b c\nedge c d\nedge d a\n"),
    ("path-4", "vertices a b c d\nedge a b\nedge b c\nedge c d\n"),
    ("diamond", "vertices a b c d\nedge a b\nedge a c\nedge b c\nedge b d\nedge c d\n"),
    ("paw", "vertices a b c d\nedge a b\nedge b c\nedge a c\nedge c d\n"),
    ("complete-4", "vertices a b c d\nedge a b\nedge a c\nedge a d\nedge b c\nedge b d\nedge c d\n"),
    ("complete-5-minus-edge", "vertices a b c d e\nedge a b\nedge a c\nedge a d\nedge a e\nedge b c\nedge b d\nedge b e\nedge c d\nedge c e\n"),
];
