//! Iterated barycentric subdivision of a triangle.
//!
//! Level `n` of a [`SimplicialComplex`] is the `n`-fold barycentric subdivision
//! `T_n` of the base triangle `[p0, p1, p2]`. Every level keeps the vertex ids of
//! the previous level, appends the barycenters of the previous level's edges (in
//! edge order) and then of its triangles (in triangle order). Edges and
//! triangles are stored as sorted vertex tuples in lexicographic order, so the
//! numbering is a pure function of the level.
//!
//! From level 1 on the complex is embedded as a regular hexagon: the six points
//! `p0, p0', p1, p1', p2, p2'` (where `pk' = b([pk, pk+1])`) sit at angles
//! `0°, 60°, …, 300°` on the unit circle and the center `p'` at the origin.
//! Deeper vertices are averages of their parents. Coordinates are exact
//! rationals; the `y` component is stored divided by `√3`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub const DEFAULT_LEVEL_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dim {
    Vertex,
    Edge,
    Triangle,
}

impl Dim {
    fn name(self) -> &'static str {
        match self {
            Dim::Vertex => "vertex",
            Dim::Edge => "edge",
            Dim::Triangle => "triangle",
        }
    }
}

/// Canonical identity of a simplex of `T_level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplexId {
    pub level: usize,
    pub dim: Dim,
    pub index: u32,
}

impl SimplexId {
    pub fn vertex(level: usize, index: u32) -> Self {
        Self { level, dim: Dim::Vertex, index }
    }

    pub fn edge(level: usize, index: u32) -> Self {
        Self { level, dim: Dim::Edge, index }
    }

    pub fn triangle(level: usize, index: u32) -> Self {
        Self { level, dim: Dim::Triangle, index }
    }
}

impl fmt::Display for SimplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]@{}", self.dim.name(), self.index, self.level)
    }
}

/// A point of the plane with `y` measured in units of `√3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    fn from_ints(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(Rational::new(xn, xd), Rational::new(yn, yd))
    }

    pub fn midpoint(a: Point, b: Point) -> Point {
        let half = Rational::new(1, 2);
        Point::new((a.x + b.x) * half, (a.y + b.y) * half)
    }

    pub fn centroid(a: Point, b: Point, c: Point) -> Point {
        let third = Rational::new(1, 3);
        Point::new((a.x + b.x + c.x) * third, (a.y + b.y + c.y) * third)
    }

    /// Squared Euclidean distance (the stored `y` is rescaled by `√3`).
    pub fn dist2(a: Point, b: Point) -> Rational {
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        dx * dx + Rational::from_integer(3) * dy * dy
    }

    /// Exact test for membership in the closed segment `[p, q]`.
    pub fn on_segment(self, p: Point, q: Point) -> bool {
        let (ux, uy) = (q.x - p.x, q.y - p.y);
        let (wx, wy) = (self.x - p.x, self.y - p.y);
        // the common √3 factor of the cross product drops out
        if ux * wy - uy * wx != Rational::from_integer(0) {
            return false;
        }
        let three = Rational::from_integer(3);
        let dot = ux * wx + three * uy * wy;
        let len2 = ux * ux + three * uy * uy;
        dot >= Rational::from_integer(0) && dot <= len2
    }

    pub fn to_f64(self) -> (f64, f64) {
        let x = *self.x.numer() as f64 / *self.x.denom() as f64;
        let y = *self.y.numer() as f64 / *self.y.denom() as f64;
        (x, y * 3f64.sqrt())
    }
}

/// Named points of `T_1`, relative to an ordered triangle `(c0, c1, c2)`.
///
/// `Mid(k)` is the barycenter of the side `[ck, ck+1]`; `Center` the barycenter
/// of the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HexPoint {
    Corner(u8),
    Mid(u8),
    Center,
}

impl HexPoint {
    /// Position `j` on the hexagon boundary, counterclockwise from `p0`.
    pub fn boundary(j: usize) -> HexPoint {
        let j = j % 6;
        if j.is_multiple_of(2) {
            HexPoint::Corner((j / 2) as u8)
        } else {
            HexPoint::Mid((j / 2) as u8)
        }
    }

    pub fn boundary_position(self) -> Option<usize> {
        match self {
            HexPoint::Corner(k) => Some(2 * k as usize),
            HexPoint::Mid(k) => Some(2 * k as usize + 1),
            HexPoint::Center => None,
        }
    }
}

/// Corner images of the contraction `F_i` on `T_0`.
pub fn contraction_corners(i: u8) -> [HexPoint; 3] {
    [
        HexPoint::Center,
        HexPoint::Corner(i.div_ceil(2) % 3),
        HexPoint::Mid(i / 2),
    ]
}

/// A dihedral symmetry of the hexagon acting on boundary positions `0..6`
/// (counterclockwise from `p0`) and fixing the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HexSymmetry {
    pub reflect: bool,
    pub shift: u8,
}

impl HexSymmetry {
    pub const IDENTITY: HexSymmetry = HexSymmetry { reflect: false, shift: 0 };
    /// Rotation by 120°.
    pub const ROTATION: HexSymmetry = HexSymmetry { reflect: false, shift: 2 };
    /// Rotation by 180°.
    pub const HALF_TURN: HexSymmetry = HexSymmetry { reflect: false, shift: 3 };
    /// Reflection in the horizontal axis: fixes `p0`, swaps `p1` and `p2`.
    pub const FLIP: HexSymmetry = HexSymmetry { reflect: true, shift: 0 };
    /// Reflection in the line through `p0'` and `p2`.
    pub const DIAGONAL: HexSymmetry = HexSymmetry { reflect: true, shift: 2 };
    /// Reflection in the vertical axis: swaps `p0` with `p1'`, `p0'` with `p1`, `p2` with `p2'`.
    pub const VERTICAL: HexSymmetry = HexSymmetry { reflect: true, shift: 3 };
    /// Reflection in the line through `p2'` and `p1`.
    pub const ANTI_DIAGONAL: HexSymmetry = HexSymmetry { reflect: true, shift: 5 };

    pub fn position(self, j: usize) -> usize {
        let s = self.shift as usize;
        if self.reflect {
            (s + 6 - j % 6) % 6
        } else {
            (j + s) % 6
        }
    }

    pub fn apply(self, p: HexPoint) -> HexPoint {
        match p.boundary_position() {
            Some(j) => HexPoint::boundary(self.position(j)),
            None => HexPoint::Center,
        }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: HexSymmetry) -> HexSymmetry {
        let image0 = self.position(other.position(0));
        let reflect = self.reflect != other.reflect;
        HexSymmetry { reflect, shift: image0 as u8 }
    }
}

/// A word `w1 w2 … wm` over `{0, …, 5}` naming the map `F_w = F_w1 ∘ … ∘ F_wm`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellWord(Vec<u8>);

impl CellWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l > 5) {
            return Err(Error::InvalidWord(bad));
        }
        Ok(Self(letters))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All words of length `m` in lexicographic order.
    pub fn all(m: usize) -> impl Iterator<Item = CellWord> {
        let count = 6usize.pow(m as u32);
        (0..count).map(move |mut k| {
            let mut letters = vec![0u8; m];
            for slot in letters.iter_mut().rev() {
                *slot = (k % 6) as u8;
                k /= 6;
            }
            CellWord(letters)
        })
    }
}

/// Hexagon sides a simplex lies in, as a bitmask over `0..6`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SideSet(u8);

impl SideSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn single(side: u8) -> Self {
        Self(1 << side)
    }

    pub fn contains(self, side: u8) -> bool {
        self.0 & (1 << side) != 0
    }

    pub fn insert(&mut self, side: u8) {
        self.0 |= 1 << side;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..6u8).filter(move |&s| self.contains(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Inherited(u32),
    EdgeBarycenter(u32),
    TriangleBarycenter(u32),
}

/// The previous-level simplex whose realization contains an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeParent {
    Edge(u32),
    Triangle(u32),
}

#[derive(Clone, Debug)]
pub struct Level {
    vertices: Vec<Point>,
    edges: Vec<[u32; 2]>,
    triangles: Vec<[u32; 3]>,
    /// Edge indices of the sides `[a,b]`, `[a,c]`, `[b,c]` of each sorted triangle `[a,b,c]`.
    triangle_sides: Vec<[u32; 3]>,
    edge_triangle_count: Vec<u8>,
    vertex_origin: Vec<VertexOrigin>,
    edge_parent: Vec<EdgeParent>,
    triangle_parent: Vec<u32>,
    edge_side: Vec<Option<u8>>,
    vertex_sides: Vec<SideSet>,
}

impl Level {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertex_count(), self.edge_count(), self.triangle_count())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn coordinates(&self) -> &[Point] {
        &self.vertices
    }

    pub fn point(&self, v: u32) -> Point {
        self.vertices[v as usize]
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn edge(&self, e: u32) -> [u32; 2] {
        self.edges[e as usize]
    }

    pub fn triangle(&self, t: u32) -> [u32; 3] {
        self.triangles[t as usize]
    }

    pub fn triangle_sides(&self, t: u32) -> [u32; 3] {
        self.triangle_sides[t as usize]
    }

    /// Number of triangles having `e` as a side (1 on the hexagon boundary, 2 inside).
    pub fn edge_triangle_count(&self, e: u32) -> u8 {
        self.edge_triangle_count[e as usize]
    }

    pub fn vertex_origin(&self, v: u32) -> Option<VertexOrigin> {
        self.vertex_origin.get(v as usize).copied()
    }

    pub fn edge_parent(&self, e: u32) -> Option<EdgeParent> {
        self.edge_parent.get(e as usize).copied()
    }

    pub fn triangle_parent(&self, t: u32) -> Option<u32> {
        self.triangle_parent.get(t as usize).copied()
    }

    /// Hexagon side containing the edge, if any (levels ≥ 1).
    pub fn edge_side(&self, e: u32) -> Option<u8> {
        self.edge_side[e as usize]
    }

    pub fn vertex_sides(&self, v: u32) -> SideSet {
        self.vertex_sides[v as usize]
    }

    pub fn find_edge(&self, a: u32, b: u32) -> Option<u32> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.edges.binary_search(&key).ok().map(|i| i as u32)
    }

    pub fn find_triangle(&self, a: u32, b: u32, c: u32) -> Option<u32> {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.triangles.binary_search(&key).ok().map(|i| i as u32)
    }

    /// Common vertex of two distinct edges, if they share one.
    pub fn shared_vertex(&self, e: u32, f: u32) -> Option<u32> {
        let [a, b] = self.edge(e);
        let other = self.edge(f);
        [a, b].into_iter().find(|v| other.contains(v))
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    levels: Vec<Level>,
    cap: usize,
}

impl SimplicialComplex {
    /// The base triangle `T_0` with the default level cap.
    pub fn base() -> Self {
        Self::with_cap(DEFAULT_LEVEL_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        let vertices = vec![
            Point::from_ints(1, 1, 0, 1),
            Point::from_ints(-1, 2, 1, 2),
            Point::from_ints(-1, 2, -1, 2),
        ];
        let level = Level {
            vertices,
            edges: vec![[0, 1], [0, 2], [1, 2]],
            triangles: vec![[0, 1, 2]],
            triangle_sides: vec![[0, 1, 2]],
            edge_triangle_count: vec![1, 1, 1],
            vertex_origin: Vec::new(),
            edge_parent: Vec::new(),
            triangle_parent: Vec::new(),
            edge_side: vec![None; 3],
            vertex_sides: vec![SideSet::empty(); 3],
        };
        Self { levels: vec![level], cap }
    }

    /// Builds levels `0..=n`.
    pub fn build(n: usize) -> Result<Self> {
        Self::build_with_cap(n, DEFAULT_LEVEL_CAP)
    }

    pub fn build_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::Capacity { level: n, cap });
        }
        let mut c = Self::with_cap(cap);
        while c.top_level() < n {
            c.subdivide()?;
        }
        Ok(c)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&Level> {
        self.levels.get(n).ok_or(Error::MissingLevel { level: n, built: self.top_level() })
    }

    /// Ensures levels up to `n` exist.
    pub fn ensure_level(&mut self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::Capacity { level: n, cap: self.cap });
        }
        while self.top_level() < n {
            self.subdivide()?;
        }
        Ok(())
    }

    /// Appends the barycentric subdivision of the top level.
    pub fn subdivide(&mut self) -> Result<()> {
        let n = self.top_level();
        if n + 1 > self.cap {
            return Err(Error::Capacity { level: n + 1, cap: self.cap });
        }
        let next = subdivide_level(&self.levels[n], n == 0);
        self.levels.push(next);
        Ok(())
    }

    /// Vertex of `T_{k+1}` named by `p` relative to the ordered level-`k` triangle `corners`.
    pub fn refine_point(&self, k: usize, corners: [u32; 3], p: HexPoint) -> Result<u32> {
        let level = self.level(k)?;
        self.level(k + 1)?;
        let v = level.vertex_count() as u32;
        let e = level.edge_count() as u32;
        match p {
            HexPoint::Corner(i) => Ok(corners[i as usize]),
            HexPoint::Mid(i) => {
                let (a, b) = (corners[i as usize], corners[(i as usize + 1) % 3]);
                let edge = level
                    .find_edge(a, b)
                    .ok_or(Error::NotSimplicial { level: k, dim: "edge", index: i as usize })?;
                Ok(v + edge)
            }
            HexPoint::Center => {
                let t = level
                    .find_triangle(corners[0], corners[1], corners[2])
                    .ok_or(Error::NotSimplicial { level: k, dim: "triangle", index: 0 })?;
                Ok(v + e + t)
            }
        }
    }

    /// Level-1 vertex id of a hexagon point of the base triangle.
    pub fn hex_vertex(&self, p: HexPoint) -> Result<u32> {
        self.refine_point(0, [0, 1, 2], p)
    }

    /// Extends a simplicial map `T_dom → T_tgt` to `T_{dom+1} → T_{tgt+1}` by
    /// commuting with barycenters.
    pub fn lift_vertex_map(&self, dom: usize, tgt: usize, map: &[u32]) -> Result<Vec<u32>> {
        let d = self.level(dom)?;
        let t = self.level(tgt)?;
        let d_next = self.level(dom + 1)?;
        self.level(tgt + 1)?;
        if map.len() != d.vertex_count() {
            return Err(Error::SizeMismatch { expected: d.vertex_count(), got: map.len() });
        }
        let tv = t.vertex_count() as u32;
        let te = t.edge_count() as u32;
        let mut out = Vec::with_capacity(d_next.vertex_count());
        for v in 0..d_next.vertex_count() as u32 {
            let image = match d_next.vertex_origin[v as usize] {
                VertexOrigin::Inherited(u) => map[u as usize],
                VertexOrigin::EdgeBarycenter(e) => {
                    let [a, b] = d.edge(e);
                    let img = t.find_edge(map[a as usize], map[b as usize]).ok_or(
                        Error::NotSimplicial { level: dom, dim: "edge", index: e as usize },
                    )?;
                    tv + img
                }
                VertexOrigin::TriangleBarycenter(f) => {
                    let [a, b, c] = d.triangle(f);
                    let img = t
                        .find_triangle(map[a as usize], map[b as usize], map[c as usize])
                        .ok_or(Error::NotSimplicial {
                            level: dom,
                            dim: "triangle",
                            index: f as usize,
                        })?;
                    tv + te + img
                }
            };
            out.push(image);
        }
        Ok(out)
    }

    /// Vertex permutation of `T_n` (`n ≥ 1`) induced by a hexagon symmetry.
    pub fn symmetry_map(&self, sym: HexSymmetry, n: usize) -> Result<Vec<u32>> {
        if n == 0 {
            return Err(Error::DegenerateLevel);
        }
        self.level(n)?;
        let l1 = self.level(1)?;
        let mut map = vec![0u32; l1.vertex_count()];
        for j in 0..6 {
            let from = self.hex_vertex(HexPoint::boundary(j))?;
            map[from as usize] = self.hex_vertex(sym.apply(HexPoint::boundary(j)))?;
        }
        let center = self.hex_vertex(HexPoint::Center)? as usize;
        map[center] = center as u32;
        for k in 1..n {
            map = self.lift_vertex_map(k, k, &map)?;
        }
        Ok(map)
    }

    /// Vertex map `T_depth → T_{m+depth}` of the simplicial isomorphism sending
    /// `p0, p1, p2` to the ordered corners of a level-`m` triangle.
    pub fn cell_map(&self, m: usize, corners: [u32; 3], depth: usize) -> Result<Vec<u32>> {
        let mut map = corners.to_vec();
        for k in 0..depth {
            map = self.lift_vertex_map(k, m + k, &map)?;
        }
        Ok(map)
    }

    /// Ordered corners `F_w(p0), F_w(p1), F_w(p2)` at level `|w|`.
    pub fn word_corners(&self, w: &CellWord) -> Result<[u32; 3]> {
        let mut corners = [0, 1, 2];
        for (k, &letter) in w.letters().iter().enumerate() {
            let pattern = contraction_corners(letter);
            let mut next = [0; 3];
            for (slot, p) in next.iter_mut().zip(pattern) {
                *slot = self.refine_point(k, corners, p)?;
            }
            corners = next;
        }
        Ok(corners)
    }

    /// Image of the level-`n` simplex `s` under `F_w`, a level-`n+|w|` simplex.
    pub fn apply_map(&self, w: &CellWord, s: SimplexId) -> Result<SimplexId> {
        let m = w.len();
        let target = s.level + m;
        self.level(target)?;
        let corners = self.word_corners(w)?;
        let map = self.cell_map(m, corners, s.level)?;
        map_simplex(self.level(s.level)?, self.level(target)?, target, &map, s)
    }

    /// The contraction `F_i` as a vertex map `T_n → T_{n+1}`.
    pub fn contraction_map(&self, i: u8, n: usize) -> Result<Vec<u32>> {
        if i > 5 {
            return Err(Error::InvalidWord(i));
        }
        let corners = self.word_corners(&CellWord(vec![i]))?;
        self.cell_map(1, corners, n)
    }

    /// Index `i` of the level-1 cell `F_i(T_0)` containing each level-`n` triangle.
    pub fn level1_cell_of_triangles(&self, n: usize) -> Result<Vec<u8>> {
        let l1 = self.level(1)?;
        let mut letter_of = vec![0u8; l1.triangle_count()];
        for i in 0..6u8 {
            let [a, b, c] = self.word_corners(&CellWord(vec![i]))?;
            let t = l1.find_triangle(a, b, c).expect("level-1 cell");
            letter_of[t as usize] = i;
        }
        let mut cells: Vec<u8> = letter_of;
        for k in 2..=n {
            let level = self.level(k)?;
            cells = level.triangle_parent.iter().map(|&p| cells[p as usize]).collect();
        }
        if n == 0 {
            return Err(Error::DegenerateLevel);
        }
        Ok(cells)
    }

    /// Hexagon sides containing the realization of `s`.
    ///
    /// Decided from edge ancestry: a level-`n` edge lies in side `i` iff its chain
    /// of parent edges reaches the level-1 edge forming side `i`.
    pub fn boundary_membership(&self, s: SimplexId) -> Result<SideSet> {
        if s.level == 0 {
            return Err(Error::DegenerateLevel);
        }
        let level = self.level(s.level)?;
        Ok(match s.dim {
            Dim::Vertex => level.vertex_sides(s.index),
            Dim::Edge => level.edge_side(s.index).map(SideSet::single).unwrap_or_default(),
            Dim::Triangle => SideSet::empty(),
        })
    }

    pub fn to_json_value(&self, n: usize) -> Result<ComplexJson> {
        let level = self.level(n)?;
        let vertices = level
            .vertices
            .iter()
            .map(|p| [*p.x.numer(), *p.x.denom(), *p.y.numer(), *p.y.denom()])
            .collect();
        let mut edge_bary = Vec::new();
        let mut tri_bary = Vec::new();
        for (v, origin) in level.vertex_origin.iter().enumerate() {
            match *origin {
                VertexOrigin::Inherited(_) => {}
                VertexOrigin::EdgeBarycenter(e) => edge_bary.push([v as u32, e]),
                VertexOrigin::TriangleBarycenter(t) => tri_bary.push([v as u32, t]),
            }
        }
        Ok(ComplexJson {
            level: n,
            vertices,
            edges: level.edges.clone(),
            triangles: level.triangles.clone(),
            barycenters: BarycenterJson { edges: edge_bary, triangles: tri_bary },
        })
    }

    pub fn to_json(&self, n: usize) -> Result<String> {
        Ok(serde_json::to_string(&self.to_json_value(n)?)?)
    }
}

/// JSON form of one level. `vertices` rows are `[x_num, x_den, y_num, y_den]`
/// with `y` in units of `√3`; barycenter rows are `[vertex, parent simplex]`
/// against the previous level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub level: usize,
    pub vertices: Vec<[i64; 4]>,
    pub edges: Vec<[u32; 2]>,
    pub triangles: Vec<[u32; 3]>,
    pub barycenters: BarycenterJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarycenterJson {
    pub edges: Vec<[u32; 2]>,
    pub triangles: Vec<[u32; 2]>,
}

pub(crate) fn map_simplex(
    from: &Level,
    to: &Level,
    target: usize,
    map: &[u32],
    s: SimplexId,
) -> Result<SimplexId> {
    let level = s.level;
    let not_simplicial = || Error::NotSimplicial { level, dim: s.dim.name(), index: s.index as usize };
    match s.dim {
        Dim::Vertex => {
            let v = *map.get(s.index as usize).ok_or_else(not_simplicial)?;
            Ok(SimplexId::vertex(target, v))
        }
        Dim::Edge => {
            let [a, b] = from.edge(s.index);
            let e = to.find_edge(map[a as usize], map[b as usize]).ok_or_else(not_simplicial)?;
            Ok(SimplexId::edge(target, e))
        }
        Dim::Triangle => {
            let [a, b, c] = from.triangle(s.index);
            let t = to
                .find_triangle(map[a as usize], map[b as usize], map[c as usize])
                .ok_or_else(not_simplicial)?;
            Ok(SimplexId::triangle(target, t))
        }
    }
}

fn subdivide_level(level: &Level, from_base: bool) -> Level {
    let nv = level.vertex_count() as u32;
    let ne = level.edge_count() as u32;
    let nt = level.triangle_count() as u32;

    let mut vertices = level.vertices.clone();
    let mut vertex_origin: Vec<VertexOrigin> = (0..nv).map(VertexOrigin::Inherited).collect();
    for (e, &[a, b]) in level.edges.iter().enumerate() {
        vertices.push(Point::midpoint(level.point(a), level.point(b)));
        vertex_origin.push(VertexOrigin::EdgeBarycenter(e as u32));
    }
    for (t, &[a, b, c]) in level.triangles.iter().enumerate() {
        vertices.push(Point::centroid(level.point(a), level.point(b), level.point(c)));
        vertex_origin.push(VertexOrigin::TriangleBarycenter(t as u32));
    }
    if from_base {
        // hexagonal placement of the side barycenters p0', p1', p2'
        let hex = [
            Point::from_ints(1, 2, 1, 2),
            Point::from_ints(-1, 1, 0, 1),
            Point::from_ints(1, 2, -1, 2),
        ];
        for (k, p) in hex.into_iter().enumerate() {
            let e = level.find_edge(k as u32, ((k + 1) % 3) as u32).expect("base side");
            vertices[(nv + e) as usize] = p;
        }
    }

    let mut edges: Vec<([u32; 2], EdgeParent)> = Vec::with_capacity((2 * ne + 6 * nt) as usize);
    for (e, &[a, b]) in level.edges.iter().enumerate() {
        let m = nv + e as u32;
        edges.push(([a, m], EdgeParent::Edge(e as u32)));
        edges.push(([b, m], EdgeParent::Edge(e as u32)));
    }
    let mut triangles: Vec<([u32; 3], u32)> = Vec::with_capacity(6 * nt as usize);
    for (t, &[a, b, c]) in level.triangles.iter().enumerate() {
        let t = t as u32;
        let center = nv + ne + t;
        for q in [a, b, c] {
            edges.push(([q, center], EdgeParent::Triangle(t)));
        }
        let sides = level.triangle_sides[t as usize];
        for s in sides {
            let mid = nv + s;
            edges.push(([mid, center], EdgeParent::Triangle(t)));
            for q in level.edge(s) {
                triangles.push(([q, mid, center], t));
            }
        }
    }
    edges.sort_unstable_by_key(|(k, _)| *k);
    triangles.sort_unstable_by_key(|(k, _)| *k);
    debug_assert!(edges.windows(2).all(|w| w[0].0 != w[1].0));

    let (edges, edge_parent): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
    let (triangles, triangle_parent): (Vec<_>, Vec<_>) = triangles.into_iter().unzip();

    let mut next = Level {
        vertices,
        edges,
        triangles,
        triangle_sides: Vec::new(),
        edge_triangle_count: Vec::new(),
        vertex_origin,
        edge_parent,
        triangle_parent,
        edge_side: Vec::new(),
        vertex_sides: Vec::new(),
    };

    let mut sides = Vec::with_capacity(next.triangles.len());
    let mut count = vec![0u8; next.edges.len()];
    for &[a, b, c] in &next.triangles {
        let s = [
            next.find_edge(a, b).expect("side ab"),
            next.find_edge(a, c).expect("side ac"),
            next.find_edge(b, c).expect("side bc"),
        ];
        for e in s {
            count[e as usize] += 1;
        }
        sides.push(s);
    }
    next.triangle_sides = sides;
    next.edge_triangle_count = count;

    next.edge_side = if from_base {
        // side i is the level-1 edge between hexagon positions i and i+1
        let mut edge_side = vec![None; next.edges.len()];
        let position = |j: usize| -> u32 {
            match HexPoint::boundary(j) {
                HexPoint::Corner(k) => k as u32,
                HexPoint::Mid(k) => {
                    nv + level.find_edge(k as u32, ((k + 1) % 3) as u32).expect("base side")
                }
                HexPoint::Center => unreachable!(),
            }
        };
        for i in 0..6 {
            let e = next.find_edge(position(i), position(i + 1)).expect("hexagon side");
            edge_side[e as usize] = Some(i as u8);
        }
        edge_side
    } else {
        next.edge_parent
            .iter()
            .map(|p| match *p {
                EdgeParent::Edge(e) => level.edge_side[e as usize],
                EdgeParent::Triangle(_) => None,
            })
            .collect()
    };

    let mut vertex_sides = vec![SideSet::empty(); next.vertices.len()];
    for (e, side) in next.edge_side.iter().enumerate() {
        if let Some(s) = *side {
            for v in next.edges[e] {
                vertex_sides[v as usize].insert(s);
            }
        }
    }
    next.vertex_sides = vertex_sides;
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_counts() {
        let c = SimplicialComplex::base();
        let l = c.level(0).unwrap();
        assert_eq!(l.counts(), (3, 3, 1));
        assert_eq!(l.euler_characteristic(), 1);
        assert_eq!(l.edges(), &[[0, 1], [0, 2], [1, 2]]);
    }

    #[test]
    fn first_subdivisions() {
        let c = SimplicialComplex::build(2).unwrap();
        assert_eq!(c.level(1).unwrap().counts(), (7, 12, 6));
        assert_eq!(c.level(2).unwrap().counts(), (25, 60, 36));
    }

    #[test]
    fn counts_follow_recurrence() {
        let c = SimplicialComplex::build(5).unwrap();
        for n in 0..5 {
            let (v, e, f) = c.level(n).unwrap().counts();
            let (v1, e1, f1) = c.level(n + 1).unwrap().counts();
            assert_eq!(f1, 6 * f);
            assert_eq!(e1, 2 * e + 6 * f);
            assert_eq!(v1, v + e + f);
            assert_eq!(c.level(n + 1).unwrap().euler_characteristic(), 1);
            assert_eq!(f, 6usize.pow(n as u32));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let mut c = SimplicialComplex::build_with_cap(2, 2).unwrap();
        assert!(matches!(c.subdivide(), Err(Error::Capacity { level: 3, cap: 2 })));
        assert!(matches!(SimplicialComplex::build(9), Err(Error::Capacity { .. })));
    }

    #[test]
    fn triangle_sides_are_edges() {
        let c = SimplicialComplex::build(3).unwrap();
        for n in 0..=3 {
            let l = c.level(n).unwrap();
            for t in 0..l.triangle_count() as u32 {
                let [a, b, cc] = l.triangle(t);
                let [s0, s1, s2] = l.triangle_sides(t);
                assert_eq!(l.edge(s0), [a, b]);
                assert_eq!(l.edge(s1), [a, cc]);
                assert_eq!(l.edge(s2), [b, cc]);
            }
        }
    }

    #[test]
    fn contraction_zero_sends_p0_to_center() {
        let c = SimplicialComplex::build(1).unwrap();
        let w = CellWord::new(vec![0]).unwrap();
        let img = c.apply_map(&w, SimplexId::vertex(0, 0)).unwrap();
        assert_eq!(img, SimplexId::vertex(1, c.hex_vertex(HexPoint::Center).unwrap()));
        assert_eq!(img.index, 6);
    }

    #[test]
    fn empty_word_is_identity() {
        let c = SimplicialComplex::build(2).unwrap();
        let l = c.level(2).unwrap();
        for t in 0..l.triangle_count() as u32 {
            let s = SimplexId::triangle(2, t);
            assert_eq!(c.apply_map(&CellWord::empty(), s).unwrap(), s);
        }
    }

    #[test]
    fn six_cells_partition_level_one() {
        let c = SimplicialComplex::build(1).unwrap();
        let mut seen: Vec<u32> = (0..6u8)
            .map(|i| {
                let w = CellWord::new(vec![i]).unwrap();
                c.apply_map(&w, SimplexId::triangle(0, 0)).unwrap().index
            })
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn missing_level_is_reported() {
        let c = SimplicialComplex::build(1).unwrap();
        let w = CellWord::new(vec![1, 2]).unwrap();
        assert!(matches!(
            c.apply_map(&w, SimplexId::vertex(0, 0)),
            Err(Error::MissingLevel { level: 2, .. })
        ));
        assert!(CellWord::new(vec![6]).is_err());
    }

    #[test]
    fn corner_and_center_membership() {
        let c = SimplicialComplex::build(3).unwrap();
        for n in 1..=3 {
            let p0 = c.boundary_membership(SimplexId::vertex(n, 0)).unwrap();
            assert_eq!(p0.iter().collect::<Vec<_>>(), vec![0, 5]);
            let center = c.hex_vertex(HexPoint::Center).unwrap();
            assert!(c.boundary_membership(SimplexId::vertex(n, center)).unwrap().is_empty());
        }
        assert!(matches!(
            c.boundary_membership(SimplexId::vertex(0, 0)),
            Err(Error::DegenerateLevel)
        ));
    }

    #[test]
    fn hexagon_coordinates() {
        let c = SimplicialComplex::build(1).unwrap();
        let l = c.level(1).unwrap();
        let origin = Point::from_ints(0, 1, 0, 1);
        for j in 0..6 {
            let v = c.hex_vertex(HexPoint::boundary(j)).unwrap();
            assert_eq!(Point::dist2(l.point(v), origin), Rational::from_integer(1));
        }
        assert_eq!(l.point(c.hex_vertex(HexPoint::Center).unwrap()), origin);
    }

    #[test]
    fn symmetries_compose_as_dihedral_group() {
        let v = HexSymmetry::VERTICAL;
        let f = HexSymmetry::FLIP;
        assert_eq!(v.compose(f), HexSymmetry::HALF_TURN);
        assert_eq!(v.compose(v), HexSymmetry::IDENTITY);
        let r = HexSymmetry::ROTATION;
        assert_eq!(r.compose(r).compose(r), HexSymmetry::IDENTITY);
        assert_eq!(f.apply(HexPoint::Corner(1)), HexPoint::Corner(2));
        assert_eq!(v.apply(HexPoint::Corner(0)), HexPoint::Mid(1));
    }

    #[test]
    fn symmetry_maps_are_automorphisms() {
        let c = SimplicialComplex::build(3).unwrap();
        let l = c.level(3).unwrap();
        for sym in [HexSymmetry::VERTICAL, HexSymmetry::DIAGONAL, HexSymmetry::ROTATION] {
            let map = c.symmetry_map(sym, 3).unwrap();
            let mut images: Vec<_> = map.clone();
            images.sort_unstable();
            assert_eq!(images, (0..l.vertex_count() as u32).collect::<Vec<_>>());
            for &[a, b, cc] in l.triangles() {
                assert!(l.find_triangle(map[a as usize], map[b as usize], map[cc as usize]).is_some());
            }
        }
    }

    #[test]
    fn words_enumerate_lexicographically() {
        let words: Vec<_> = CellWord::all(2).collect();
        assert_eq!(words.len(), 36);
        assert_eq!(words[7].letters(), &[1, 1]);
    }
}
