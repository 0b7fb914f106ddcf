//! Integer plane geometry: convex hulls, lattice points of lattice polygons and small exact
//! linear algebra over the integers.
pub type Point = [i64; 2];

/// Twice the signed area of the triangle `o, a, b`; positive when anticlockwise.
pub fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the convex hull, anticlockwise and without collinear points, starting from the
/// vertex of least y coordinate (largest x among ties).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = (0..lower.len())
        .min_by_key(|&k| (lower[k][1], -lower[k][0]))
        .expect("nonempty hull");
    lower.rotate_left(start);
    lower
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Vertex,
    Boundary,
    Interior,
    Outside,
}

/// Locates `p` relative to an anticlockwise convex polygon with at least three vertices.
pub fn locate(hull: &[Point], p: Point) -> Location {
    if hull.contains(&p) {
        return Location::Vertex;
    }
    let n = hull.len();
    let mut on_edge = false;
    for k in 0..n {
        let c = cross(hull[k], hull[(k + 1) % n], p);
        if c < 0 {
            return Location::Outside;
        }
        if c == 0 {
            on_edge = true;
        }
    }
    if on_edge {
        Location::Boundary
    } else {
        Location::Interior
    }
}

/// Interior lattice points and boundary lattice points that are not vertices, both sorted.
pub fn lattice_points(hull: &[Point]) -> (Vec<Point>, Vec<Point>) {
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    if hull.len() < 3 {
        return (interior, boundary);
    }
    let (x0, x1) = (hull.iter().map(|p| p[0]).min().unwrap(), hull.iter().map(|p| p[0]).max().unwrap());
    let (y0, y1) = (hull.iter().map(|p| p[1]).min().unwrap(), hull.iter().map(|p| p[1]).max().unwrap());
    for x in x0..=x1 {
        for y in y0..=y1 {
            match locate(hull, [x, y]) {
                Location::Interior => interior.push([x, y]),
                Location::Boundary => boundary.push([x, y]),
                _ => {}
            }
        }
    }
    (interior, boundary)
}

/// Twice the area of an anticlockwise polygon.
pub fn twice_area(polygon: &[Point]) -> i64 {
    let n = polygon.len();
    (0..n)
        .map(|k| {
            let (a, b) = (polygon[k], polygon[(k + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum()
}

pub fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solves `x * m = b` for a row vector `x` when `m` has determinant `+-1`.
pub fn solve_unimodular(m: [[i64; 3]; 3], b: [i64; 3]) -> Option<[i64; 3]> {
    let d = det3(m);
    if d.abs() != 1 {
        return None;
    }
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&k| k != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&k| k != c).collect();
        let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let mut x = [0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = (0..3).map(|j| b[j] * cof(i, j)).sum::<i64>() * d;
    }
    Some(x)
}
