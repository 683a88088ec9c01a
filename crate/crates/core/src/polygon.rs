//! Exact convex polygon operations in projected coordinates.

use num_traits::{Signed, Zero};

use crate::exact::{ratio, Q, SimplexPoint};
use crate::geometry::Line;

fn cross(o: &SimplexPoint, a: &SimplexPoint, b: &SimplexPoint) -> Q {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Strict convex hull (no collinear vertices), counterclockwise, starting at
/// the lowest-x, lowest-y point. One or two points come back as they are.
pub fn convex_hull(points: &[SimplexPoint]) -> Vec<SimplexPoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<SimplexPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<SimplexPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area (positive for counterclockwise).
pub fn signed_area2(poly: &[SimplexPoint]) -> Q {
    let n = poly.len();
    if n < 3 {
        return Q::zero();
    }
    (0..n)
        .map(|i| {
            let (p, r) = (&poly[i], &poly[(i + 1) % n]);
            &p.x * &r.y - &r.x * &p.y
        })
        .fold(Q::zero(), |acc, t| acc + t)
}

pub fn area(poly: &[SimplexPoint]) -> Q {
    signed_area2(poly).abs() * ratio(1, 2)
}

/// Area centroid; the vertex mean for degenerate (zero-area) input.
pub fn centroid(poly: &[SimplexPoint]) -> SimplexPoint {
    let a2 = signed_area2(poly);
    let n = poly.len();
    if a2.is_zero() {
        let k = Q::from_integer((n as i64).into());
        let sx = poly.iter().fold(Q::zero(), |acc, p| acc + &p.x);
        let sy = poly.iter().fold(Q::zero(), |acc, p| acc + &p.y);
        return SimplexPoint::new(sx / &k, sy / k);
    }
    let mut cx = Q::zero();
    let mut cy = Q::zero();
    for i in 0..n {
        let (p, r) = (&poly[i], &poly[(i + 1) % n]);
        let c = &p.x * &r.y - &r.x * &p.y;
        cx += (&p.x + &r.x) * &c;
        cy += (&p.y + &r.y) * &c;
    }
    let den = a2 * Q::from_integer(3.into());
    SimplexPoint::new(cx / &den, cy / den)
}

/// Every vertex turns strictly left.
pub fn is_strictly_convex(poly: &[SimplexPoint]) -> bool {
    let n = poly.len();
    n >= 3
        && (0..n).all(|i| cross(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]).is_positive())
}

/// Point inside or on the boundary of a counterclockwise convex polygon.
pub fn contains(poly: &[SimplexPoint], p: &SimplexPoint) -> bool {
    let n = poly.len();
    (0..n).all(|i| !cross(&poly[i], &poly[(i + 1) % n], p).is_negative())
}

/// Keeps the part of `poly` where `line.eval <= 0`.
pub fn clip(poly: &[SimplexPoint], line: &Line) -> Vec<SimplexPoint> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, r) = (&poly[i], &poly[(i + 1) % n]);
        let fp = line.eval(p);
        let fr = line.eval(r);
        if !fp.is_positive() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fr.is_positive()) || (fp.is_positive() && fr.is_negative()) {
            let t = &fp / (&fp - &fr);
            out.push(SimplexPoint::new(
                &p.x + (&r.x - &p.x) * &t,
                &p.y + (&r.y - &p.y) * &t,
            ));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Line through `p` and `r` oriented so the left side is negative.
fn edge_line(p: &SimplexPoint, r: &SimplexPoint) -> Line {
    // Left of p→r has positive cross, so negate it.
    let a = &r.y - &p.y;
    let b = &p.x - &r.x;
    let c = -(&a * &p.x + &b * &p.y);
    Line::new(a, b, c)
}

/// Intersection of two counterclockwise convex polygons.
pub fn intersect_convex(p: &[SimplexPoint], other: &[SimplexPoint]) -> Vec<SimplexPoint> {
    let mut out = p.to_vec();
    let n = other.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        out = clip(&out, &edge_line(&other[i], &other[(i + 1) % n]));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contact {
    /// The polygons share a boundary segment of positive length.
    Edge(SimplexPoint, SimplexPoint),
    /// They touch in a single point only.
    Point(SimplexPoint),
}

fn on_segment(p: &SimplexPoint, a: &SimplexPoint, b: &SimplexPoint) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// How two interior-disjoint convex polygons touch, if at all.
pub fn contact(p: &[SimplexPoint], other: &[SimplexPoint]) -> Option<Contact> {
    let mut shared: Vec<SimplexPoint> = Vec::new();
    let mut add = |s: &SimplexPoint| {
        if !shared.contains(s) {
            shared.push(s.clone());
        }
    };
    let (np, no) = (p.len(), other.len());
    for i in 0..np {
        for k in 0..no {
            let (a, b) = (&p[i], &p[(i + 1) % np]);
            let (c, d) = (&other[k], &other[(k + 1) % no]);
            for (s, e0, e1) in [(a, c, d), (b, c, d), (c, a, b), (d, a, b)] {
                if on_segment(s, e0, e1) {
                    add(s);
                }
            }
        }
    }
    match shared.len() {
        0 => None,
        1 => Some(Contact::Point(shared.pop().unwrap())),
        _ => {
            shared.sort();
            let last = shared.pop().unwrap();
            let first = shared.swap_remove(0);
            Some(Contact::Edge(first, last))
        }
    }
}
