//! Lattice geometry, string paths and region partitions.
//!
//! Square lattice: qubits live on edges. Edge `(x, y, o)` has index
//! `2(y·Lx + x) + o`, with `o = 0` for the horizontal edge from vertex
//! `(x, y)` to `(x+1, y)` and `o = 1` for the vertical edge to `(x, y+1)`.
//! Plaquette `(x, y)` has lower-left corner `(x, y)`. Positions are handled in
//! doubled coordinates so edge midpoints are integers.
//!
//! Cylinders are periodic in x and open in y. A square cylinder keeps the
//! index formula: the vertical edges of the top row dangle.
//!
//! Honeycomb: qubits live on vertices, two per cell, site `(x, y, s)` has
//! index `2(y·Lx + x) + s` (`s = 0` for sublattice A, `1` for B). Bonds are
//! x-type `A(x,y)–B(x,y)`, y-type `B(x,y)–A(x+1,y)` and z-type
//! `B(x,y)–A(x,y+1)`. Hexagon `(x, y)` visits `B(x,y) A(x+1,y) B(x+1,y)
//! A(x+1,y+1) B(x,y+1) A(x,y+1)`. A honeycomb cylinder with `Ly` hexagon
//! rows has `Ly+1` site rows; an open patch keeps only sites on its hexagons.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    SquareEdges,
    HoneycombVertices,
    TriangularVertices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Torus,
    Cylinder,
    Open,
}

/// Serializable lattice description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    pub boundary: Boundary,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    spec: LatticeSpec,
    n: usize,
    // honeycomb and triangular site coordinates, indexed by qubit
    sites: Vec<(i64, i64, u8)>,
    site_index: HashMap<(i64, i64, u8), usize>,
}

/// Pauli letters of a honeycomb plaquette term, in hexagon visiting order.
pub const HEXAGON_LETTERS: [char; 6] = ['X', 'Z', 'Y', 'X', 'Z', 'Y'];

impl Lattice {
    pub fn build(kind: LatticeKind, lx: usize, ly: usize, boundary: Boundary) -> Result<Self, Error> {
        Self::from_spec(LatticeSpec { kind, lx, ly, boundary })
    }

    pub fn from_spec(spec: LatticeSpec) -> Result<Self, Error> {
        let LatticeSpec { kind, lx, ly, boundary } = spec;
        if lx == 0 || ly == 0 {
            return Err(Error::Geometry(format!("lattice dimensions must be positive, got {lx}x{ly}")));
        }
        let mut lat = Lattice { spec, n: 0, sites: Vec::new(), site_index: HashMap::new() };
        match (kind, boundary) {
            (LatticeKind::SquareEdges, Boundary::Torus | Boundary::Cylinder) => {
                lat.n = 2 * lx * ly;
            }
            (LatticeKind::HoneycombVertices, Boundary::Torus | Boundary::Cylinder) => {
                let rows = if boundary == Boundary::Torus { ly } else { ly + 1 };
                for y in 0..rows as i64 {
                    for x in 0..lx as i64 {
                        lat.push_site((x, y, 0));
                        lat.push_site((x, y, 1));
                    }
                }
            }
            (LatticeKind::HoneycombVertices, Boundary::Open) => {
                let mut set = BTreeSet::new();
                for y in 0..ly as i64 {
                    for x in 0..lx as i64 {
                        for s in hexagon_sites(x, y) {
                            set.insert((s.1, s.0, s.2));
                        }
                    }
                }
                for (y, x, s) in set {
                    lat.push_site((x, y, s));
                }
            }
            (LatticeKind::TriangularVertices, Boundary::Torus | Boundary::Open) => {
                for y in 0..ly as i64 {
                    for x in 0..lx as i64 {
                        lat.push_site((x, y, 0));
                    }
                }
            }
            _ => {
                return Err(Error::UnsupportedLattice(format!("{kind:?} with {boundary:?} boundary")));
            }
        }
        Ok(lat)
    }

    fn push_site(&mut self, s: (i64, i64, u8)) {
        self.site_index.insert(s, self.sites.len());
        self.sites.push(s);
        self.n = self.sites.len();
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn kind(&self) -> LatticeKind {
        self.spec.kind
    }

    pub fn boundary(&self) -> Boundary {
        self.spec.boundary
    }

    pub fn lx(&self) -> usize {
        self.spec.lx
    }

    pub fn ly(&self) -> usize {
        self.spec.ly
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn is_square(&self) -> bool {
        self.spec.kind == LatticeKind::SquareEdges
    }

    fn require_square(&self) -> Result<(), Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::UnsupportedLattice(format!("{:?} where square-edges is required", self.spec.kind)))
        }
    }

    fn wrap_x(&self, x: i64) -> i64 {
        x.rem_euclid(self.spec.lx as i64)
    }

    /// Wrapped vertex row, or `None` off an open edge.
    fn wrap_y(&self, y: i64) -> Option<i64> {
        let ly = self.spec.ly as i64;
        match self.spec.boundary {
            Boundary::Torus => Some(y.rem_euclid(ly)),
            _ => (0..ly).contains(&y).then_some(y),
        }
    }

    // ---- square lattice -------------------------------------------------

    /// Horizontal edge from `(x, y)` to `(x+1, y)`.
    pub fn h(&self, x: i64, y: i64) -> Option<usize> {
        let y = self.wrap_y(y)?;
        Some(2 * (y as usize * self.spec.lx + self.wrap_x(x) as usize))
    }

    /// Vertical edge from `(x, y)` to `(x, y+1)`.
    pub fn v(&self, x: i64, y: i64) -> Option<usize> {
        let y = self.wrap_y(y)?;
        Some(2 * (y as usize * self.spec.lx + self.wrap_x(x) as usize) + 1)
    }

    /// `(x, y, orientation)` of a square-lattice edge.
    pub fn edge_coords(&self, e: usize) -> (i64, i64, u8) {
        let c = e / 2;
        ((c % self.spec.lx) as i64, (c / self.spec.lx) as i64, (e % 2) as u8)
    }

    /// Edge midpoint in doubled coordinates.
    pub fn midpoint2(&self, e: usize) -> (i64, i64) {
        let (x, y, o) = self.edge_coords(e);
        if o == 0 { (2 * x + 1, 2 * y) } else { (2 * x, 2 * y + 1) }
    }

    /// Endpoints of a square-lattice edge (unwrapped second endpoint).
    pub fn edge_vertices(&self, e: usize) -> [(i64, i64); 2] {
        let (x, y, o) = self.edge_coords(e);
        if o == 0 { [(x, y), (x + 1, y)] } else { [(x, y), (x, y + 1)] }
    }

    pub fn vertex_exists(&self, _x: i64, y: i64) -> bool {
        self.wrap_y(y).is_some()
    }

    /// Edges incident to vertex `(x, y)`.
    pub fn star(&self, x: i64, y: i64) -> Vec<usize> {
        let mut s: Vec<usize> = [self.h(x, y), self.h(x - 1, y), self.v(x, y), self.v(x, y - 1)]
            .into_iter()
            .flatten()
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Edges of plaquette `(x, y)` if all four exist.
    pub fn plaquette(&self, x: i64, y: i64) -> Option<Vec<usize>> {
        self.wrap_y(y + 1)?;
        let mut e = vec![self.h(x, y)?, self.v(x + 1, y)?, self.h(x, y + 1)?, self.v(x, y)?];
        e.sort_unstable();
        e.dedup();
        Some(e)
    }

    /// All vertex coordinates.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for y in 0..self.spec.ly as i64 {
            for x in 0..self.spec.lx as i64 {
                out.push((x, y));
            }
        }
        out
    }

    /// Lower-left corners of all complete plaquettes.
    pub fn plaquettes(&self) -> Vec<(i64, i64)> {
        self.vertices().into_iter().filter(|&(x, y)| self.plaquette(x, y).is_some()).collect()
    }

    /// The shifted partner `e + δ`, `δ = (-1/2, 1/2)`:
    /// `h(x,y) ↦ v(x,y)` and `v(x,y) ↦ h(x-1,y+1)`.
    pub fn delta(&self, e: usize) -> Option<usize> {
        let (x, y, o) = self.edge_coords(e);
        if o == 0 { self.v(x, y) } else { self.h(x - 1, y + 1) }
    }

    /// Unit step from `a` to `b` respecting periodicity, if they are neighbours.
    fn unit_step(&self, a: (i64, i64), b: (i64, i64)) -> Option<(i64, i64)> {
        self.wrap_y(a.1)?;
        self.wrap_y(b.1)?;
        let (dx, dy) = self.offset2((2 * b.0, 2 * b.1), (2 * a.0, 2 * a.1));
        match (dx / 2, dy / 2) {
            s @ ((1 | -1, 0) | (0, 1 | -1)) => Some(s),
            _ => None,
        }
    }

    /// Edge joining two neighbouring vertices.
    pub fn edge_between(&self, a: (i64, i64), b: (i64, i64)) -> Option<usize> {
        match self.unit_step(a, b)? {
            (1, 0) => self.h(a.0, a.1),
            (-1, 0) => self.h(b.0, b.1),
            (0, 1) => self.v(a.0, a.1),
            _ => self.v(b.0, b.1),
        }
    }

    /// Edge shared by two neighbouring plaquettes (crossed by a dual link).
    pub fn dual_edge_between(&self, p: (i64, i64), q: (i64, i64)) -> Option<usize> {
        self.plaquette(p.0, p.1)?;
        self.plaquette(q.0, q.1)?;
        match self.unit_step(p, q)? {
            (1, 0) => self.v(q.0, q.1),
            (-1, 0) => self.v(p.0, p.1),
            (0, 1) => self.h(q.0, q.1),
            _ => self.h(p.0, p.1),
        }
    }

    // ---- honeycomb / triangular ----------------------------------------

    /// Honeycomb or triangular site index.
    pub fn site(&self, x: i64, y: i64, sub: u8) -> Option<usize> {
        let key = match (self.spec.kind, self.spec.boundary) {
            (LatticeKind::SquareEdges, _) => return None,
            (_, Boundary::Torus) => (self.wrap_x(x), y.rem_euclid(self.rows() as i64), sub),
            (LatticeKind::HoneycombVertices, Boundary::Cylinder) => (self.wrap_x(x), y, sub),
            _ => (x, y, sub),
        };
        self.site_index.get(&key).copied()
    }

    pub fn site_coords(&self, q: usize) -> (i64, i64, u8) {
        self.sites[q]
    }

    fn rows(&self) -> usize {
        match (self.spec.kind, self.spec.boundary) {
            (LatticeKind::HoneycombVertices, Boundary::Cylinder) => self.spec.ly + 1,
            _ => self.spec.ly,
        }
    }

    /// Site-row index for honeycomb qubits.
    pub fn site_row(&self, q: usize) -> i64 {
        self.sites[q].1
    }

    /// Hexagons as six qubit indices in visiting order (see module docs).
    pub fn hexagons(&self) -> Result<Vec<[usize; 6]>, Error> {
        if self.spec.kind != LatticeKind::HoneycombVertices {
            return Err(Error::UnsupportedLattice("hexagons need a honeycomb lattice".into()));
        }
        let mut out = Vec::new();
        for y in 0..self.spec.ly as i64 {
            for x in 0..self.spec.lx as i64 {
                let s = hexagon_sites(x, y);
                let mut idx = [0usize; 6];
                for (k, &(sx, sy, sub)) in s.iter().enumerate() {
                    idx[k] = self
                        .site(sx, sy, sub)
                        .ok_or_else(|| Error::Geometry(format!("hexagon ({x},{y}) leaves the lattice")))?;
                }
                out.push(idx);
            }
        }
        Ok(out)
    }

    /// Qubits adjacent to `q`: edges sharing a vertex on the square lattice,
    /// bonded sites on the honeycomb and triangular lattices.
    pub fn qubit_neighbors(&self, q: usize) -> Vec<usize> {
        let mut out = Vec::new();
        match self.spec.kind {
            LatticeKind::SquareEdges => {
                for (x, y) in self.edge_vertices(q) {
                    if self.vertex_exists(x, y) {
                        out.extend(self.star(x, y).into_iter().filter(|&e| e != q));
                    }
                }
            }
            LatticeKind::HoneycombVertices => {
                let (x, y, s) = self.sites[q];
                let cand = if s == 0 {
                    [(x, y, 1), (x - 1, y, 1), (x, y - 1, 1)]
                } else {
                    [(x, y, 0), (x + 1, y, 0), (x, y + 1, 0)]
                };
                out.extend(cand.iter().filter_map(|&(a, b, c)| self.site(a, b, c)));
            }
            LatticeKind::TriangularVertices => {
                let (x, y, _) = self.sites[q];
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                    out.extend(self.site(x + dx, y + dy, 0));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&p| p != q);
        out
    }

    /// Number of connected components of `region` under [`Lattice::qubit_neighbors`].
    pub fn components(&self, region: &[usize]) -> usize {
        let inside: BTreeSet<usize> = region.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for &s in &inside {
            if !seen.insert(s) {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([s]);
            while let Some(q) = queue.pop_front() {
                for p in self.qubit_neighbors(q) {
                    if inside.contains(&p) && seen.insert(p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        count
    }

    /// Doubled-coordinate offset from `origin`, wrapped into `(-L, L]` on periodic axes.
    fn offset2(&self, p: (i64, i64), origin: (i64, i64)) -> (i64, i64) {
        let wrap = |d: i64, l: i64| {
            let p = 2 * l;
            let mut d = d.rem_euclid(p);
            if d > l {
                d -= p;
            }
            d
        };
        let dx = wrap(p.0 - origin.0, self.spec.lx as i64);
        let dy = if self.spec.boundary == Boundary::Torus {
            wrap(p.1 - origin.1, self.spec.ly as i64)
        } else {
            p.1 - origin.1
        };
        (dx, dy)
    }

    /// Square-lattice edges whose midpoints lie within Chebyshev distance
    /// `radius` of vertex `center` (a disc around a crossing point).
    pub fn disc_around_vertex(&self, center: (i64, i64), radius: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&e| {
                let (dx, dy) = self.offset2(self.midpoint2(e), (2 * center.0, 2 * center.1));
                dx.abs().max(dy.abs()) <= 2 * radius as i64
            })
            .collect()
    }
}

fn hexagon_sites(x: i64, y: i64) -> [(i64, i64, u8); 6] {
    [(x, y, 1), (x + 1, y, 0), (x + 1, y, 1), (x + 1, y + 1, 0), (x, y + 1, 1), (x, y + 1, 0)]
}

// ---- paths --------------------------------------------------------------

/// Direct paths walk vertices; dual paths walk plaquettes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    Direct,
    Dual,
}

/// One step of a path: the edge used (direct) or crossed (dual), and whether
/// it is traversed towards increasing coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub qubit: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub kind: PathKind,
    /// Visited vertices (direct) or plaquette corners (dual), wrapped.
    pub nodes: Vec<(i64, i64)>,
    pub links: Vec<Link>,
    pub closed: bool,
}

impl Path {
    #[must_use]
    pub fn empty(kind: PathKind) -> Self {
        Path { kind, nodes: Vec::new(), links: Vec::new(), closed: false }
    }

    /// Path through consecutive neighbouring nodes; closed iff first == last.
    pub fn from_nodes(lat: &Lattice, kind: PathKind, nodes: &[(i64, i64)]) -> Result<Self, Error> {
        lat.require_square()?;
        let norm = |p: (i64, i64)| -> Result<(i64, i64), Error> {
            let y = lat.wrap_y(p.1).ok_or_else(|| Error::Geometry(format!("node {p:?} is off the lattice")))?;
            Ok((lat.wrap_x(p.0), y))
        };
        let nodes: Vec<(i64, i64)> = nodes.iter().map(|&p| norm(p)).collect::<Result<_, _>>()?;
        let mut links = Vec::new();
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            let q = match kind {
                PathKind::Direct => lat.edge_between(a, b),
                PathKind::Dual => lat.dual_edge_between(a, b),
            }
            .ok_or_else(|| Error::Geometry(format!("{a:?} and {b:?} are not neighbours")))?;
            let forward = step_forward(lat, a, b);
            links.push(Link { qubit: q, forward });
        }
        let closed = nodes.len() > 1 && nodes.first() == nodes.last();
        Ok(Path { kind, nodes, links, closed })
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.links.iter().map(|l| l.qubit).collect()
    }

    pub fn start(&self) -> Option<(i64, i64)> {
        self.nodes.first().copied()
    }

    pub fn end(&self) -> Option<(i64, i64)> {
        self.nodes.last().copied()
    }

    /// Distinct nodes (a closed path's repeated endpoint counted once).
    pub fn distinct_nodes(&self) -> BTreeSet<(i64, i64)> {
        self.nodes.iter().copied().collect()
    }
}

fn step_forward(lat: &Lattice, a: (i64, i64), b: (i64, i64)) -> bool {
    matches!(lat.unit_step(a, b), Some((1, 0) | (0, 1)))
}

/// Number of transversal intersections between two paths: shared nodes for
/// paths on the same lattice, shared edges for a direct/dual pair.
pub fn crossing_points(a: &Path, b: &Path) -> Vec<Crossing> {
    if a.kind == b.kind {
        a.distinct_nodes().intersection(&b.distinct_nodes()).map(|&p| Crossing::Node(p)).collect()
    } else {
        let qa: BTreeSet<usize> = a.qubits().into_iter().collect();
        let qb: BTreeSet<usize> = b.qubits().into_iter().collect();
        qa.intersection(&qb).map(|&q| Crossing::Edge(q)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Node((i64, i64)),
    Edge(usize),
}

/// Requests understood by [`standard_paths`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "request")]
pub enum PathRequest {
    /// Non-contractible loop along row `at`.
    HorizontalLoop { at: i64, kind: PathKind },
    /// Non-contractible loop along column `at`.
    VerticalLoop { at: i64, kind: PathKind },
    /// Open string, first along x then along y.
    OpenString { from: (i64, i64), to: (i64, i64), kind: PathKind },
    /// Horizontal and vertical loops through `center`, crossing once.
    CrossingPair { center: (i64, i64), first: PathKind, second: PathKind },
    /// Hopping paths `q→p`, `r→p`, `p→s` with `q, r, s` at distance `arm`
    /// east, north and west of `p`.
    Statistics { center: (i64, i64), arm: i64, kind: PathKind },
    /// Closed rectangle around plaquette `center` at Chebyshev `radius`.
    Rectangle { center: (i64, i64), radius: i64, kind: PathKind },
    /// Closed counterclockwise rectangle with corner nodes `lower` and `upper`.
    Box { lower: (i64, i64), upper: (i64, i64), kind: PathKind },
}

/// Build the paths for a request; see [`PathRequest`] for the layouts.
pub fn standard_paths(lat: &Lattice, req: PathRequest) -> Result<Vec<Path>, Error> {
    lat.require_square()?;
    let lx = lat.lx() as i64;
    let ly = lat.ly() as i64;
    let torus = lat.boundary() == Boundary::Torus;
    match req {
        PathRequest::HorizontalLoop { at, kind } => {
            let nodes: Vec<_> = (0..=lx).map(|x| (x, at)).collect();
            Ok(vec![Path::from_nodes(lat, kind, &nodes)?])
        }
        PathRequest::VerticalLoop { at, kind } => {
            if !torus {
                return Err(Error::Geometry("vertical loops need a torus".into()));
            }
            let nodes: Vec<_> = (0..=ly).map(|y| (at, y)).collect();
            Ok(vec![Path::from_nodes(lat, kind, &nodes)?])
        }
        PathRequest::OpenString { from, to, kind } => {
            let mut nodes = vec![from];
            let mut cur = from;
            while cur.0 != to.0 {
                cur.0 += (to.0 - cur.0).signum();
                nodes.push(cur);
            }
            while cur.1 != to.1 {
                cur.1 += (to.1 - cur.1).signum();
                nodes.push(cur);
            }
            Ok(vec![Path::from_nodes(lat, kind, &nodes)?])
        }
        PathRequest::CrossingPair { center, first, second } => {
            if !torus || lx < 3 || ly < 3 {
                return Err(Error::Geometry("crossing pair needs a torus of size at least 3x3".into()));
            }
            let a = standard_paths(lat, PathRequest::HorizontalLoop { at: center.1, kind: first })?.remove(0);
            let b = standard_paths(lat, PathRequest::VerticalLoop { at: center.0, kind: second })?.remove(0);
            let n = crossing_points(&a, &b).len();
            if n != 1 {
                return Err(Error::Geometry(format!("crossing pair intersects {n} times")));
            }
            Ok(vec![a, b])
        }
        PathRequest::Statistics { center: p, arm, kind } => {
            if arm < 1 || 2 * arm + 1 > lx || arm + 1 > ly {
                return Err(Error::Geometry(format!("statistics layout with arm {arm} does not fit {lx}x{ly}")));
            }
            let line = |d: (i64, i64)| -> Vec<(i64, i64)> { (0..=arm).map(|i| (p.0 + d.0 * i, p.1 + d.1 * i)).collect() };
            let mut q_to_p = line((1, 0));
            q_to_p.reverse();
            let mut r_to_p = line((0, 1));
            r_to_p.reverse();
            let p_to_s = line((-1, 0));
            Ok(vec![
                Path::from_nodes(lat, kind, &q_to_p)?,
                Path::from_nodes(lat, kind, &r_to_p)?,
                Path::from_nodes(lat, kind, &p_to_s)?,
            ])
        }
        PathRequest::Rectangle { center, radius, kind } => {
            if radius < 0 {
                return Err(Error::Geometry("negative radius".into()));
            }
            // direct: vertices around plaquette `center`; dual: plaquettes around vertex `center`
            let (x0, y0, x1, y1) = match kind {
                PathKind::Direct => (center.0 - radius, center.1 - radius, center.0 + 1 + radius, center.1 + 1 + radius),
                PathKind::Dual => (center.0 - 1 - radius, center.1 - 1 - radius, center.0 + radius, center.1 + radius),
            };
            standard_paths(lat, PathRequest::Box { lower: (x0, y0), upper: (x1, y1), kind })
        }
        PathRequest::Box { lower: (x0, y0), upper: (x1, y1), kind } => {
            if x1 <= x0 || y1 <= y0 {
                return Err(Error::Geometry("box corners out of order".into()));
            }
            if x1 - x0 >= lx || (torus && y1 - y0 >= ly) {
                return Err(Error::Geometry(format!("box {:?} to {:?} does not fit", (x0, y0), (x1, y1))));
            }
            let mut nodes = Vec::new();
            for x in x0..x1 {
                nodes.push((x, y0));
            }
            for y in y0..y1 {
                nodes.push((x1, y));
            }
            for x in (x0 + 1..=x1).rev() {
                nodes.push((x, y1));
            }
            for y in (y0 + 1..=y1).rev() {
                nodes.push((x0, y));
            }
            nodes.push((x0, y0));
            Ok(vec![Path::from_nodes(lat, kind, &nodes)?])
        }
    }
}

// ---- partitions ---------------------------------------------------------

/// Disjoint regions `A`, `B`, `C`; every other qubit belongs to `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, mut a: Vec<usize>, mut b: Vec<usize>, mut c: Vec<usize>) -> Result<Self, Error> {
        let mut seen = vec![false; n];
        for r in [&mut a, &mut b, &mut c] {
            r.sort_unstable();
            r.dedup();
            for &q in r.iter() {
                if q >= n {
                    return Err(Error::QubitOutOfRange { qubit: q, n });
                }
                if seen[q] {
                    return Err(Error::Geometry(format!("qubit {q} lies in two regions")));
                }
                seen[q] = true;
            }
        }
        Ok(Self { n, a, b, c })
    }

    pub fn ab(&self) -> Vec<usize> {
        union(&[&self.a, &self.b])
    }

    pub fn bc(&self) -> Vec<usize> {
        union(&[&self.b, &self.c])
    }

    pub fn abc(&self) -> Vec<usize> {
        union(&[&self.a, &self.b, &self.c])
    }

    /// Qubits outside `A ∪ B ∪ C`.
    pub fn e(&self) -> Vec<usize> {
        let abc: BTreeSet<usize> = self.abc().into_iter().collect();
        (0..self.n).filter(|q| !abc.contains(q)).collect()
    }
}

fn union(rs: &[&Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = rs.iter().flat_map(|r| r.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Partition schemes. Radii are measured in lattice spacings from the centre
/// of plaquette `center` using the Chebyshev norm on edge midpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "scheme")]
pub enum PartitionScheme {
    /// Annulus `inner ≤ r < outer` split into left arc `A`, right arc `C`
    /// and top/bottom arcs `B`. `strict` enforces `inner ≥ 1`,
    /// `outer - inner ≥ 1` and that the annulus does not wrap the torus.
    LevinWen { center: (i64, i64), inner: usize, outer: usize, #[serde(default = "yes")] strict: bool },
    /// Disc `A` (`r < radius`), annulus `B` of width `d`, annulus `C` of
    /// width `c_width` beyond it.
    Markov { center: (i64, i64), radius: usize, d: usize, c_width: usize },
    /// Cut between vertex row `row` and the vertical edges above it.
    /// `A` is the lower side, `B` the upper side.
    CylinderCut1 { row: i64 },
    /// Cut just below vertex row `row`. `A` lower, `B` upper.
    CylinderCut2 { row: i64 },
}

fn yes() -> bool {
    true
}

/// Build the regions of a partition scheme on a lattice.
pub fn partition(lat: &Lattice, scheme: PartitionScheme) -> Result<Partition, Error> {
    match scheme {
        PartitionScheme::LevinWen { center, inner, outer, strict } => levin_wen(lat, center, inner, outer, strict),
        PartitionScheme::Markov { center, radius, d, c_width } => markov(lat, center, radius, d, c_width),
        PartitionScheme::CylinderCut1 { row } => cylinder_cut(lat, row, true),
        PartitionScheme::CylinderCut2 { row } => cylinder_cut(lat, row, false),
    }
}

fn plaquette_centre2(center: (i64, i64)) -> (i64, i64) {
    (2 * center.0 + 1, 2 * center.1 + 1)
}

fn levin_wen(lat: &Lattice, center: (i64, i64), inner: usize, outer: usize, strict: bool) -> Result<Partition, Error> {
    lat.require_square()?;
    if lat.boundary() != Boundary::Torus {
        return Err(Error::UnsupportedLattice("levin-wen partition needs a torus".into()));
    }
    if outer <= inner {
        return Err(Error::Geometry(format!("outer radius {outer} must exceed inner radius {inner}")));
    }
    if strict {
        if inner < 1 {
            return Err(Error::Geometry("inner radius must be at least 1".into()));
        }
        let need = 2 * outer + 1;
        if lat.lx() < need || lat.ly() < need {
            return Err(Error::Geometry(format!(
                "annulus with outer radius {outer} needs a torus of at least {need}x{need}"
            )));
        }
    }
    let (i2, o2) = (2 * inner as i64, 2 * outer as i64);
    let origin = plaquette_centre2(center);
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for e in 0..lat.n() {
        let (dx, dy) = lat.offset2(lat.midpoint2(e), origin);
        let r = dx.abs().max(dy.abs());
        if r < i2 || r >= o2 {
            continue;
        }
        if dx <= -i2 {
            a.push(e);
        } else if dx >= i2 {
            c.push(e);
        } else {
            b.push(e);
        }
    }
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::Geometry("levin-wen regions do not fit".into()));
    }
    Partition::new(lat.n(), a, b, c)
}

fn markov(lat: &Lattice, center: (i64, i64), radius: usize, d: usize, cw: usize) -> Result<Partition, Error> {
    lat.require_square()?;
    if lat.boundary() != Boundary::Torus {
        return Err(Error::UnsupportedLattice("markov partition needs a torus".into()));
    }
    if radius == 0 || d == 0 || cw == 0 {
        return Err(Error::Geometry("markov radius, d and c_width must be positive".into()));
    }
    let reach = 2 * (radius + d + cw);
    if lat.lx() < reach || lat.ly() < reach {
        return Err(Error::Geometry(format!("markov regions need a torus of at least {reach}x{reach}")));
    }
    let origin = plaquette_centre2(center);
    let (r2, b2, c2) = (2 * radius as i64, 2 * (radius + d) as i64, reach as i64);
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for e in 0..lat.n() {
        let (dx, dy) = lat.offset2(lat.midpoint2(e), origin);
        let r = dx.abs().max(dy.abs());
        if r < r2 {
            a.push(e);
        } else if r < b2 {
            b.push(e);
        } else if r < c2 {
            c.push(e);
        }
    }
    Partition::new(lat.n(), a, b, c)
}

fn cylinder_cut(lat: &Lattice, row: i64, first: bool) -> Result<Partition, Error> {
    if lat.boundary() != Boundary::Cylinder {
        return Err(Error::UnsupportedLattice("cylinder cuts need a cylinder".into()));
    }
    let lower: Vec<usize> = match lat.kind() {
        LatticeKind::SquareEdges => {
            let cut = if first { 2 * row + 1 } else { 2 * row };
            (0..lat.n()).filter(|&e| lat.midpoint2(e).1 < cut).collect()
        }
        LatticeKind::HoneycombVertices => (0..lat.n())
            .filter(|&q| {
                let (_, y, s) = lat.site_coords(q);
                y <= row || (first && y == row + 1 && s == 0)
            })
            .collect(),
        LatticeKind::TriangularVertices => {
            return Err(Error::UnsupportedLattice("cylinder cuts on triangular lattice".into()));
        }
    };
    let upper: Vec<usize> = {
        let low: BTreeSet<usize> = lower.iter().copied().collect();
        (0..lat.n()).filter(|q| !low.contains(q)).collect()
    };
    if lower.is_empty() || upper.is_empty() {
        return Err(Error::Geometry(format!("cut at row {row} leaves an empty side")));
    }
    Partition::new(lat.n(), lower, upper, Vec::new())
}

/// Minimum vertex-graph distance between the edge sets `a` and `b` on a
/// square lattice.
pub fn edge_set_distance(lat: &Lattice, a: &[usize], b: &[usize]) -> Option<usize> {
    let verts = |es: &[usize]| -> BTreeSet<(i64, i64)> {
        es.iter()
            .flat_map(|&e| lat.edge_vertices(e))
            .map(|(x, y)| (lat.wrap_x(x), lat.wrap_y(y).unwrap_or(y)))
            .collect()
    };
    let src = verts(a);
    let dst = verts(b);
    let mut dist: HashMap<(i64, i64), usize> = src.iter().map(|&v| (v, 0)).collect();
    let mut queue: VecDeque<(i64, i64)> = src.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dst.contains(&v) {
            return Some(dv);
        }
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let w = (v.0 + dx, v.1 + dy);
            let Some(wy) = lat.wrap_y(w.1) else { continue };
            let w = (lat.wrap_x(w.0), wy);
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(dv + 1);
                queue.push_back(w);
            }
        }
    }
    None
}
