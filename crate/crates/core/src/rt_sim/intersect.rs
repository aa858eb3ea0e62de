use super::Vec3;
use crate::{Error, Result};

/// Determinants at or below this magnitude are treated as a ray parallel
/// to the triangle plane.
pub const DET_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    origin: Vec3,
    direction: Vec3,
}

impl Ray {
    /// `direction` is normalized here; it must be nonzero.
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self> {
        let norm = direction.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("ray direction norm", norm, "must be positive"));
        }
        Ok(Self {
            origin,
            direction: direction / norm,
        })
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn at(&self, s: f64) -> Vec3 {
        self.origin + self.direction * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v0: Vec3,
    pub v1: Vec3,
    pub v2: Vec3,
}

impl Triangle {
    pub fn new(v0: Vec3, v1: Vec3, v2: Vec3) -> Result<Self> {
        let t = Self { v0, v1, v2 };
        let area = t.area();
        if !(area > 0.0) {
            return Err(Error::domain("triangle area", area, "must be positive"));
        }
        Ok(t)
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.v1 - self.v0).cross(&(self.v2 - self.v0)).norm()
    }

    pub fn centroid(&self) -> Vec3 {
        (self.v0 + self.v1 + self.v2) / 3.0
    }
}

/// Distance along the ray and barycentric coordinates of a hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub s: f64,
    pub u: f64,
    pub v: f64,
}

/// Möller–Trumbore: solves `O + sD = V0 + u E1 + v E2` by Cramer's rule,
/// reusing `Q = E0 × E1` and `K = D × E2`.
pub fn ray_triangle_intersect(ray: &Ray, tri: &Triangle) -> Option<Hit> {
    let d = ray.direction;
    let e0 = ray.origin - tri.v0;
    let e1 = tri.v1 - tri.v0;
    let e2 = tri.v2 - tri.v0;
    let k = d.cross(&e2);
    let det = k.dot(&e1);
    if det.abs() <= DET_EPSILON {
        return None;
    }
    let inv = 1.0 / det;
    let u = k.dot(&e0) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = e0.cross(&e1);
    let v = q.dot(&d) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let s = q.dot(&e2) * inv;
    (s > 0.0).then_some(Hit { s, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tri() -> Triangle {
        Triangle::new(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(0.0, 3.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn centroid_hit() {
        let t = tri();
        let ray = Ray::new(t.centroid() + Vec3::new(0.0, 0.0, 5.0), Vec3::new(0.0, 0.0, -2.0)).unwrap();
        let h = ray_triangle_intersect(&ray, &t).unwrap();
        assert_relative_eq!(h.u, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(h.v, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(h.s, 5.0, max_relative = 1e-14);
        assert_relative_eq!((ray.at(h.s) - t.centroid()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parallel_and_behind_miss() {
        let t = tri();
        let parallel = Ray::new(Vec3::new(-1.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(ray_triangle_intersect(&parallel, &t), None);
        let away = Ray::new(Vec3::new(1.0, 1.0, 1.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(ray_triangle_intersect(&away, &t), None);
        let outside = Ray::new(Vec3::new(2.0, 2.0, 1.0), Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!(ray_triangle_intersect(&outside, &t), None);
    }

    #[test]
    fn both_faces_hit() {
        let t = tri();
        let below = Ray::new(Vec3::new(1.0, 1.0, -1.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(ray_triangle_intersect(&below, &t).is_some());
    }

    #[test]
    fn validation() {
        assert!(Ray::new(Vec3::zeros(), Vec3::zeros()).is_err());
        let r = Ray::new(Vec3::zeros(), Vec3::new(3.0, 4.0, 0.0)).unwrap();
        assert!((r.direction().norm() - 1.0).abs() < 1e-12);
        let p = Vec3::new(1.0, 1.0, 1.0);
        assert!(Triangle::new(p, p * 2.0, p * 3.0).is_err());
    }
}
