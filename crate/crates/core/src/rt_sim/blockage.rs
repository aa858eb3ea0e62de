//! Link blockage tests against a scene mesh.

use super::{ray_triangle_intersect, Building, Ray, Scene, Triangle, Vec3};
use crate::geometry::FresnelSpec;

/// Whether any building surface crosses the open segment `tx -> rx`.
pub fn los_blocked_geometric(scene: &Scene, tx: Vec3, rx: Vec3) -> bool {
    let delta = rx - tx;
    let len = delta.norm();
    let Ok(ray) = Ray::new(tx, delta) else {
        return false;
    };
    scene.buildings().iter().enumerate().any(|(i, b)| {
        segment_hits_box(tx, delta, b)
            && scene
                .building_triangles(i)
                .iter()
                .any(|t| ray_triangle_intersect(&ray, t).is_some_and(|h| h.s < len))
    })
}

/// Whether any building surface enters the first-order Fresnel ellipsoid of
/// the link (foci at the terminals, semi-axes from the slant length).
///
/// The ellipsoid is mapped affinely onto the unit sphere; triangles stay
/// triangles under that map, so each one only needs its closest point to
/// the origin.
pub fn los_blocked_fresnel(scene: &Scene, tx: Vec3, rx: Vec3, spec: &FresnelSpec) -> bool {
    let delta = rx - tx;
    let len = delta.norm();
    if spec.n_lambda() == 0.0 || len == 0.0 {
        return los_blocked_geometric(scene, tx, rx);
    }
    let ell = Ellipsoid::new(tx, rx, spec.n_lambda());
    let (lo, hi) = ell.bounds();
    scene.buildings().iter().enumerate().any(|(i, b)| {
        boxes_overlap(lo, hi, b.min_corner(), b.max_corner())
            && scene.building_triangles(i).iter().any(|t| ell.touches(t))
    })
}

struct Ellipsoid {
    center: Vec3,
    axis: Vec3,
    b1: Vec3,
    b2: Vec3,
    major: f64,
    minor: f64,
}

impl Ellipsoid {
    fn new(tx: Vec3, rx: Vec3, n_lambda: f64) -> Self {
        let delta = rx - tx;
        let len = delta.norm();
        let axis = delta / len;
        // Any unit vector not parallel to the axis seeds the basis.
        let seed = if axis.z.abs() < 0.9 { Vec3::z() } else { Vec3::x() };
        let b1 = axis.cross(&seed).normalize();
        let b2 = axis.cross(&b1);
        let minor = (n_lambda * len).sqrt() / 2.0;
        Self {
            center: (tx + rx) / 2.0,
            axis,
            b1,
            b2,
            major: (n_lambda * len / 4.0 + len * len / 4.0).sqrt(),
            minor,
        }
    }

    fn to_unit(&self, p: Vec3) -> Vec3 {
        let r = p - self.center;
        Vec3::new(
            r.dot(&self.axis) / self.major,
            r.dot(&self.b1) / self.minor,
            r.dot(&self.b2) / self.minor,
        )
    }

    fn bounds(&self) -> (Vec3, Vec3) {
        let half = Vec3::from_fn(|i, _| {
            let a = self.axis[i];
            (self.major * self.major * a * a + self.minor * self.minor * (1.0 - a * a)).sqrt()
        });
        let pad = Vec3::repeat(1e-9 * (1.0 + self.major));
        (self.center - half - pad, self.center + half + pad)
    }

    fn touches(&self, t: &Triangle) -> bool {
        let (a, b, c) = (self.to_unit(t.v0), self.to_unit(t.v1), self.to_unit(t.v2));
        closest_point_to_origin(a, b, c).norm_squared() <= 1.0
    }
}

/// Closest point of triangle `abc` to the origin (Voronoi-region walk).
fn closest_point_to_origin(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = -a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = -b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = -c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

fn boxes_overlap(lo: Vec3, hi: Vec3, blo: Vec3, bhi: Vec3) -> bool {
    (0..3).all(|i| lo[i] <= bhi[i] && blo[i] <= hi[i])
}

/// Slab test of `origin + t delta`, `t in [0, 1]`, against a padded box.
fn segment_hits_box(origin: Vec3, delta: Vec3, b: &Building) -> bool {
    let pad = 1e-9 * (1.0 + b.width + b.height);
    let lo = b.min_corner() - Vec3::repeat(pad);
    let hi = b.max_corner() + Vec3::repeat(pad);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for i in 0..3 {
        if delta[i] == 0.0 {
            if origin[i] < lo[i] || origin[i] > hi[i] {
                return false;
            }
            continue;
        }
        let inv = 1.0 / delta[i];
        let (mut a, mut c) = ((lo[i] - origin[i]) * inv, (hi[i] - origin[i]) * inv);
        if a > c {
            std::mem::swap(&mut a, &mut c);
        }
        t0 = t0.max(a);
        t1 = t1.min(c);
        if t0 > t1 {
            return false;
        }
    }
    true
}
