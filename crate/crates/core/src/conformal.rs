//! Conformal maps and circle-arc geometry: the Joukowski map of the slit
//! half-plane, the Cayley map, hyperbolic geodesics over gaps, and the
//! domain obtained from the disk by removing the caps between each gap and
//! its geodesic.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::circle_sets::ArcSet;
use crate::error::{arg, domain, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest admissible half-disk radius.
pub const MAX_JOUKOWSKI_L: f64 = 0.5;

/// `φ_L(z) = L/(1−L²)·(L/z + z/L)`, a conformal bijection from
/// `Ω_L = {Im z > 0, |z| > L}` onto the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JoukowskiMap {
    l: f64,
}

/// A preimage under [`JoukowskiMap`] of a point of the closed half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preimage {
    pub z: Complex64,
    /// Both roots have modulus `L`: the point lies on the half-circle.
    pub on_half_circle: bool,
}

impl JoukowskiMap {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0 && l <= MAX_JOUKOWSKI_L) {
            return Err(arg(format!("L = {l} is outside (0, {MAX_JOUKOWSKI_L}]")));
        }
        Ok(Self { l })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    fn scale(&self) -> f64 {
        self.l / (1.0 - self.l * self.l)
    }

    /// Whether `z ∈ Ω_L`.
    pub fn contains(&self, z: Complex64) -> bool {
        z.im > 0.0 && z.norm() > self.l
    }

    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(domain("φ_L is singular at 0"));
        }
        Ok(self.scale() * (self.l / z + z / self.l))
    }

    /// The root of `z² − w(1−L²)z + L² = 0` of larger modulus; the other root
    /// is `L²/z`.
    pub fn preimage(&self, w: Complex64) -> Result<Preimage> {
        if !(w.im >= 0.0) || !w.re.is_finite() || !w.im.is_finite() {
            return Err(domain(format!("{w} is not in the closed upper half-plane")));
        }
        let l2 = self.l * self.l;
        let b = w * (1.0 - l2);
        let s = (b * b - 4.0 * l2).sqrt();
        let (p, m) = (b + s, b - s);
        let big = if p.norm() >= m.norm() { p } else { m };
        let z = 0.5 * big;
        let on_half_circle = (z.norm() - self.l).abs() <= 1e-14 * self.l;
        Ok(Preimage { z, on_half_circle })
    }

    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        if !(w.im > 0.0) {
            return Err(domain(format!("{w} is not in the upper half-plane")));
        }
        Ok(self.preimage(w)?.z)
    }
}

/// `ψ(z) = i(1−z)/(1+z)`, mapping the disk onto the upper half-plane.
pub fn cayley(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(-1.0, 0.0) {
        return Err(domain("ψ has a pole at −1"));
    }
    Ok(I * (1.0 - z) / (1.0 + z))
}

/// `ψ⁻¹(w) = (i−w)/(i+w)`.
pub fn cayley_inverse(w: Complex64) -> Result<Complex64> {
    if w == -I {
        return Err(domain("ψ⁻¹ has a pole at −i"));
    }
    Ok((I - w) / (I + w))
}

/// `|ψ(z1) − ψ(z2)| / |z1 − z2|` for distinct points of the closed right
/// half-disk. It equals `2/|(1+z1)(1+z2)|` and lies in `[1/2, 2]`.
pub fn distortion_ratio(z1: Complex64, z2: Complex64) -> Result<f64> {
    if z1 == z2 {
        return Err(arg("distortion ratio needs distinct points"));
    }
    for z in [z1, z2] {
        if z.norm() > 1.0 + 1e-12 || z.re < 0.0 {
            return Err(arg(format!("{z} is outside the closed right half-disk")));
        }
    }
    Ok(2.0 / ((1.0 + z1) * (1.0 + z2)).norm())
}

/// Scale `L = tan(|ℓ|/4)` of the half-disk that a gap becomes after
/// rotating its midpoint to 1 and applying the Cayley map: the gap turns
/// into `[−L, L]`.
pub fn gap_half_plane_scale(a: f64, b: f64) -> Result<f64> {
    if !(b > a && b - a < TAU) {
        return Err(arg(format!("({a}, {b}) is not a proper gap")));
    }
    Ok(((b - a) / 4.0).tan())
}

/// Rotation that takes the midpoint of the gap `(a, b)` to angle 0.
pub fn rotate_to_gap_midpoint(a: f64, b: f64, z: Complex64) -> Complex64 {
    z * Complex64::from_polar(1.0, -0.5 * (a + b))
}

/// The hyperbolic geodesic joining `e^{ia}` and `e^{ib}`: the arc inside the
/// disk of the circle orthogonal to `𝕋` through both points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeodesicArc {
    pub a: f64,
    pub b: f64,
    pub center: Complex64,
    pub radius: f64,
    // Half the angle subtended at the center: π/2 − θ.
    #[serde(skip)]
    sweep: f64,
    // Unit vector from the center toward the origin.
    #[serde(skip)]
    inward: Complex64,
}

pub fn geodesic_for_gap(a: f64, b: f64) -> Result<GeodesicArc> {
    if !(b > a) {
        return Err(arg(format!("gap ({a}, {b}) is degenerate")));
    }
    let theta = 0.5 * (b - a);
    if theta >= FRAC_PI_2 {
        return Err(arg(format!("gap ({a}, {b}) is not shorter than π")));
    }
    let mid = Complex64::from_polar(1.0, 0.5 * (a + b));
    Ok(GeodesicArc {
        a,
        b,
        center: mid / theta.cos(),
        radius: theta.tan(),
        sweep: FRAC_PI_2 - theta,
        inward: -mid,
    })
}

impl GeodesicArc {
    /// `|center|² − radius² − 1`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.center.norm_sqr() - self.radius * self.radius - 1.0
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (Complex64::from_polar(1.0, self.a), Complex64::from_polar(1.0, self.b))
    }

    /// Point at parameter `s ∈ [0, 1]`, from `e^{ia}` (s = 0) to `e^{ib}`.
    pub fn point(&self, s: f64) -> Complex64 {
        let phi = self.sweep * (1.0 - 2.0 * s);
        self.center + self.radius * self.inward * Complex64::from_polar(1.0, phi)
    }

    /// Parameter of the point of the arc's circle closest to `p`.
    pub fn parameter(&self, p: Complex64) -> f64 {
        let phi = ((p - self.center) / self.inward).arg();
        0.5 * (1.0 - phi / self.sweep)
    }

    pub fn arc_length(&self) -> f64 {
        2.0 * self.sweep * self.radius
    }

    /// Whether `z` lies in the closed disk bounded by the arc's circle.
    pub fn circle_contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    /// Distance from `z` (outside the circle) to the arc, and the nearest
    /// arc point.
    fn nearest(&self, z: Complex64) -> (f64, Complex64) {
        let d = z - self.center;
        let dn = d.norm();
        if dn > 0.0 {
            let p = self.center + d * (self.radius / dn);
            if p.norm_sqr() <= 1.0 {
                return (dn - self.radius, p);
            }
        }
        let (ea, eb) = self.endpoints();
        let (da, db) = ((z - ea).norm(), (z - eb).norm());
        if da <= db {
            (da, ea)
        } else {
            (db, eb)
        }
    }
}

/// Location of a point relative to a [`PrivalovDomain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    InCap(usize),
    OutsideDisk,
}

/// Boundary component reached by a walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryHit {
    /// On `E`, at the given angle in `[0, 2π)`.
    OnE { angle: f64 },
    /// On the geodesic over gap `gap`, at `point`.
    OnGeodesic { gap: usize, point: Complex64 },
}

impl BoundaryHit {
    /// The boundary point itself.
    pub fn point(&self) -> Complex64 {
        match *self {
            BoundaryHit::OnE { angle } => Complex64::from_polar(1.0, angle),
            BoundaryHit::OnGeodesic { point, .. } => point,
        }
    }
}

/// Nearest boundary component of a point and its distance; negative
/// distances mean the point has left the domain.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Nearest {
    pub distance: f64,
    pub hit: BoundaryHit,
}

/// The disk minus the closed caps between each gap and its geodesic.
#[derive(Clone, Debug)]
pub struct PrivalovDomain {
    set: ArcSet,
    geodesics: Vec<GeodesicArc>,
    // Gap midpoint on 𝕋 and a radius around it containing the closed cap.
    hulls: Vec<(Complex64, f64)>,
}

impl PrivalovDomain {
    /// Requires every gap to be shorter than π.
    pub fn new(set: ArcSet) -> Result<Self> {
        let geodesics = set
            .gaps()
            .iter()
            .map(|&(a, b)| geodesic_for_gap(a, b))
            .collect::<Result<Vec<_>>>()?;
        let hulls = geodesics
            .iter()
            .map(|g| {
                let theta = 0.5 * (g.b - g.a);
                (Complex64::from_polar(1.0, 0.5 * (g.a + g.b)), 2.0 * (0.5 * theta).sin() * (1.0 + 1e-12))
            })
            .collect();
        let d = Self {
            set,
            geodesics,
            hulls,
        };
        if let Some(i) = d.geodesics.iter().position(|g| g.circle_contains(Complex64::new(0.0, 0.0))) {
            return Err(arg(format!("cap over gap {i} contains the origin")));
        }
        Ok(d)
    }

    /// As [`PrivalovDomain::new`], rejecting gaps longer than `max_gap`.
    pub fn with_max_gap(set: ArcSet, max_gap: f64) -> Result<Self> {
        if let Some(l) = set.gap_lengths().find(|&l| l > max_gap) {
            return Err(arg(format!("gap of length {l} exceeds max_gap {max_gap}")));
        }
        Self::new(set)
    }

    /// The domain `𝔻_{ℓᶜ}` for the single gap `(a, b)`.
    pub fn single_gap(a: f64, b: f64) -> Result<Self> {
        Self::new(ArcSet::from_gaps([(a, b)])?)
    }

    pub fn set(&self) -> &ArcSet {
        &self.set
    }

    pub fn geodesics(&self) -> &[GeodesicArc] {
        &self.geodesics
    }

    pub fn membership(&self, z: Complex64) -> Membership {
        if z.norm() >= 1.0 {
            return Membership::OutsideDisk;
        }
        match self.geodesics.iter().position(|g| g.circle_contains(z)) {
            Some(i) => Membership::InCap(i),
            None => Membership::Inside,
        }
    }

    pub(crate) fn nearest(&self, z: Complex64) -> Nearest {
        let to_circle = 1.0 - z.norm();
        let mut best: Option<(f64, usize, Complex64)> = None;
        for (i, g) in self.geodesics.iter().enumerate() {
            let (mid, reach) = self.hulls[i];
            let bound = (z - mid).norm() - reach;
            let current = best.map_or(to_circle, |b| b.0.min(to_circle));
            if bound > current {
                continue;
            }
            let d = z - g.center;
            let dn = d.norm();
            let (dist, p) = if dn <= g.radius {
                (dn - g.radius, if dn > 0.0 { g.center + d * (g.radius / dn) } else { g.center })
            } else {
                g.nearest(z)
            };
            if best.is_none_or(|b| dist < b.0) {
                best = Some((dist, i, p));
            }
        }
        match best {
            Some((dist, gap, point)) if dist + 1e-15 < to_circle => Nearest {
                distance: dist,
                hit: BoundaryHit::OnGeodesic { gap, point },
            },
            _ => Nearest {
                distance: to_circle,
                hit: BoundaryHit::OnE {
                    angle: z.arg().rem_euclid(TAU),
                },
            },
        }
    }

    pub fn distance_to_boundary(&self, z: Complex64) -> Result<f64> {
        if self.membership(z) != Membership::Inside {
            return Err(Error::Contract(format!("{z} is not inside the domain")));
        }
        Ok(self.nearest(z).distance)
    }

    /// Nearest boundary component of a point within `shell` of the boundary;
    /// ties within 1e-15 go to `E`.
    pub fn classify_boundary_hit(&self, z: Complex64, shell: f64) -> Result<BoundaryHit> {
        let n = self.nearest(z);
        if n.distance > shell {
            return Err(Error::Contract(format!(
                "{z} is {} from the boundary, beyond the shell {shell}",
                n.distance
            )));
        }
        Ok(n.hit)
    }

    /// SVG drawing of the disk with `E` in black, the caps shaded and the
    /// geodesics in red.
    pub fn to_svg(&self, size: u32) -> String {
        let mut s = String::new();
        let half = size as f64 / 2.0;
        let scale = half * 0.95;
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(
            s,
            r#"<g transform="translate({half} {half}) scale({scale} {neg})">"#,
            neg = -scale
        );
        let stroke = 1.5 / scale;
        let _ = writeln!(
            s,
            r##"<circle cx="0" cy="0" r="1" fill="#f4f4ff" stroke="#888" stroke-width="{stroke:.6}"/>"##
        );
        for (start, len) in self.set.arcs() {
            if len <= 0.0 {
                continue;
            }
            if len >= TAU {
                let _ = writeln!(
                    s,
                    r#"<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="{:.6}"/>"#,
                    3.0 * stroke
                );
                continue;
            }
            let p = Complex64::from_polar(1.0, start);
            let q = Complex64::from_polar(1.0, start + len);
            let large = u8::from(len > PI);
            let _ = writeln!(
                s,
                r#"<path d="M {:.9} {:.9} A 1 1 0 {large} 1 {:.9} {:.9}" fill="none" stroke="black" stroke-width="{:.6}"/>"#,
                p.re, p.im, q.re, q.im, 3.0 * stroke
            );
        }
        for g in &self.geodesics {
            let (ea, eb) = g.endpoints();
            let _ = writeln!(
                s,
                r##"<path d="M {:.9} {:.9} A 1 1 0 0 1 {:.9} {:.9} A {r:.9} {r:.9} 0 0 1 {:.9} {:.9} Z" fill="#d0d0d0" stroke="#c00" stroke-width="{stroke:.6}"/>"##,
                ea.re,
                ea.im,
                eb.re,
                eb.im,
                ea.re,
                ea.im,
                r = g.radius
            );
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

/// SVG of the slit half-plane `Ω_L` with the arc `{L e^{iτ}: 0 ≤ τ ≤ t}`
/// and its image segment under `φ_L` on the real axis.
pub fn joukowski_svg(map: &JoukowskiMap, t: f64, size: u32) -> String {
    let l = map.l();
    let w = size as f64;
    let h = w / 2.0;
    let scale = w / (8.0 * l);
    let x = |v: f64| w / 2.0 + v * scale;
    let y = |v: f64| h * 0.9 - v * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {w} {h}">"#,
        h as u32
    );
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{y0}" x2="{w}" y2="{y0}" stroke="#888"/>"##,
        y0 = y(0.0)
    );
    let _ = writeln!(
        s,
        r##"<path d="M {} {} A {r} {r} 0 0 0 {} {}" fill="#e0e0e0" stroke="black"/>"##,
        x(l),
        y(0.0),
        x(-l),
        y(0.0),
        r = l * scale
    );
    let tip = Complex64::from_polar(l, t);
    let _ = writeln!(
        s,
        r##"<path d="M {} {} A {r} {r} 0 0 0 {} {}" fill="none" stroke="#c00" stroke-width="3"/>"##,
        x(l),
        y(0.0),
        x(tip.re),
        y(tip.im),
        r = l * scale
    );
    let u = 2.0 * l / (1.0 - l * l);
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{y0}" x2="{}" y2="{y0}" stroke="#06c" stroke-width="3"/>"##,
        x(u * t.cos()),
        x(u),
        y0 = y(0.0) + 6.0
    );
    s.push_str("</svg>\n");
    s
}
