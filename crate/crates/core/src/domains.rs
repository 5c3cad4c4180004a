//! Circular domains, their products, seeded samplers and the Möbius
//! transports between stability classes.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{ci, cone, creal, czero, Real, C};

/// Default boundary tolerance for membership tests.
pub const EPS_BD: f64 = 1e-10;

static BOUNDARY_TOL: AtomicU64 = AtomicU64::new(0x3DDB_7CDF_D9D7_BDBB);

/// Current library-wide boundary tolerance (initially [`EPS_BD`]).
pub fn boundary_tolerance() -> f64 {
    f64::from_bits(BOUNDARY_TOL.load(Ordering::Relaxed))
}

/// Replaces the boundary tolerance used by [`CircularDomain::contains`].
pub fn set_boundary_tolerance(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("boundary tolerance {eps} must be finite and non-negative")));
    }
    BOUNDARY_TOL.store(eps.to_bits(), Ordering::Relaxed);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Open,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainKind<T: Real> {
    /// `{z : Im(e^{iθ} z) > offset}`; `offset = 0` is `H_θ`.
    HalfPlane { theta: T, offset: T },
    Disk { center: C<T>, radius: T },
    Exterior { center: C<T>, radius: T },
}

/// Open or closed disk, disk exterior or half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircularDomain<T: Real> {
    pub kind: DomainKind<T>,
    pub closure: Closure,
}

fn normalize_angle<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let t = theta % tau;
    if t < T::zero() {
        t + tau
    } else {
        t
    }
}

impl<T: Real> CircularDomain<T> {
    pub fn half_plane(theta: T) -> Self {
        Self::half_plane_offset(theta, T::zero())
    }

    pub fn half_plane_offset(theta: T, offset: T) -> Self {
        CircularDomain {
            kind: DomainKind::HalfPlane {
                theta: normalize_angle(theta),
                offset,
            },
            closure: Closure::Open,
        }
    }

    /// Open upper half-plane `H₀`.
    pub fn upper_half_plane() -> Self {
        Self::half_plane(T::zero())
    }

    pub fn disk(center: C<T>, radius: T) -> Result<Self> {
        check_radius(radius)?;
        Ok(CircularDomain {
            kind: DomainKind::Disk { center, radius },
            closure: Closure::Open,
        })
    }

    pub fn exterior(center: C<T>, radius: T) -> Result<Self> {
        check_radius(radius)?;
        Ok(CircularDomain {
            kind: DomainKind::Exterior { center, radius },
            closure: Closure::Open,
        })
    }

    /// Open unit disk `𝔻`.
    pub fn unit_disk() -> Self {
        Self::disk(czero(), T::one()).expect("unit radius")
    }

    /// Open exterior of the unit disk, `ℂ ∖ 𝔻̄`.
    pub fn unit_exterior() -> Self {
        Self::exterior(czero(), T::one()).expect("unit radius")
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    pub fn closed(self) -> Self {
        self.with_closure(Closure::Closed)
    }

    pub fn open(self) -> Self {
        self.with_closure(Closure::Open)
    }

    pub fn is_open(&self) -> bool {
        self.closure == Closure::Open
    }

    /// Only the disk exterior is non-convex.
    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, DomainKind::Exterior { .. })
    }

    pub fn is_half_plane(&self) -> bool {
        matches!(self.kind, DomainKind::HalfPlane { .. })
    }

    /// `ℂ ∖ D`: same boundary, opposite side, flipped closure.
    pub fn complement(&self) -> Self {
        let kind = match self.kind {
            DomainKind::HalfPlane { theta, offset } => DomainKind::HalfPlane {
                theta: normalize_angle(theta + T::PI()),
                offset: -offset,
            },
            DomainKind::Disk { center, radius } => DomainKind::Exterior { center, radius },
            DomainKind::Exterior { center, radius } => DomainKind::Disk { center, radius },
        };
        let closure = match self.closure {
            Closure::Open => Closure::Closed,
            Closure::Closed => Closure::Open,
        };
        CircularDomain { kind, closure }
    }

    /// Signed distance to the boundary, positive inside.
    pub fn signed_distance(&self, z: C<T>) -> T {
        match self.kind {
            DomainKind::HalfPlane { theta, offset } => {
                (Complex::from_polar(T::one(), theta) * z).im - offset
            }
            DomainKind::Disk { center, radius } => radius - (z - center).norm(),
            DomainKind::Exterior { center, radius } => (z - center).norm() - radius,
        }
    }

    pub fn contains(&self, z: C<T>) -> bool {
        self.contains_with(z, T::lit(boundary_tolerance()))
    }

    /// Membership with an explicit boundary tolerance: a closed domain
    /// accepts points within `eps` outside, an open one rejects points within
    /// `eps` inside.
    pub fn contains_with(&self, z: C<T>, eps: T) -> bool {
        let d = self.signed_distance(z);
        if !d.is_finite() {
            return false;
        }
        match self.closure {
            Closure::Open => d > eps,
            Closure::Closed => d >= -eps,
        }
    }

    /// Seeded interior sample: disks uniform on radius `r(1−1e-6)`,
    /// half-planes Cauchy along the boundary plus `Exp(1) + 1e-6` depth,
    /// exteriors by inversion of the disk sampler.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> C<T> {
        match self.kind {
            DomainKind::Disk { center, radius } => center + sample_disk(rng, radius),
            DomainKind::Exterior { center, radius } => {
                let q = sample_disk(rng, radius);
                let floor = T::lit(1e-12) * radius;
                let q = if q.norm() < floor { creal(floor) } else { q };
                center + (q.conj().inv()).scale(radius * radius)
            }
            DomainKind::HalfPlane { theta, offset } => {
                let u: f64 = rng.gen();
                let along = (std::f64::consts::PI * (u - 0.5)).tan();
                let v: f64 = rng.gen();
                let depth = -(1.0 - v).ln() + 1e-6;
                let w = Complex::new(T::lit(along), offset + T::lit(depth));
                Complex::from_polar(T::one(), -theta) * w
            }
        }
    }

    /// The Möbius map sending the open unit disk onto (the open kernel of)
    /// this domain.
    pub fn from_unit_disk(&self) -> MoebiusMap<T> {
        let one = cone::<T>();
        match self.kind {
            DomainKind::Disk { center, radius } => {
                MoebiusMap::new(creal(radius), center, czero(), one).expect("radius > 0")
            }
            DomainKind::Exterior { center, radius } => {
                MoebiusMap::new(center, creal(radius), one, czero()).expect("radius > 0")
            }
            DomainKind::HalfPlane { theta, offset } => {
                let rot = Complex::from_polar(T::one(), -theta);
                let i = ci::<T>();
                MoebiusMap::new(
                    rot * i * (T::one() - offset),
                    rot * i * (T::one() + offset),
                    -one,
                    one,
                )
                .expect("nondegenerate")
            }
        }
    }

    /// The Möbius map sending this domain onto the unit disk.
    pub fn to_unit_disk(&self) -> MoebiusMap<T> {
        self.from_unit_disk().inverse()
    }

    /// A fixed point well inside the domain.
    pub fn interior_point(&self) -> C<T> {
        match self.kind {
            DomainKind::Exterior { center, radius } => center + creal(radius + radius),
            _ => self.from_unit_disk().apply(czero()).unwrap_or_else(czero),
        }
    }
}

fn check_radius<T: Real>(radius: T) -> Result<()> {
    if radius > T::zero() && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")))
    }
}

fn sample_disk<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: T) -> C<T> {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    let rho = radius.f64() * (1.0 - 1e-6) * u.sqrt();
    let ang = std::f64::consts::TAU * v;
    Complex::new(T::lit(rho * ang.cos()), T::lit(rho * ang.sin()))
}

fn fmt_num<T: Real>(x: T) -> String {
    format!("{x}")
}

impl<T: Real> fmt::Display for CircularDomain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::HalfPlane { theta, offset } => {
                write!(f, "halfplane:{}", fmt_num(theta))?;
                if offset != T::zero() {
                    write!(f, ",{}", fmt_num(offset))?;
                }
            }
            DomainKind::Disk { center, radius } => write!(
                f,
                "disk:{},{},{}",
                fmt_num(center.re),
                fmt_num(center.im),
                fmt_num(radius)
            )?,
            DomainKind::Exterior { center, radius } => write!(
                f,
                "exterior:{},{},{}",
                fmt_num(center.re),
                fmt_num(center.im),
                fmt_num(radius)
            )?,
        }
        match self.closure {
            Closure::Open => f.write_str(":open"),
            Closure::Closed => f.write_str(":closed"),
        }
    }
}

/// Parses a number, also accepting `pi`, `k*pi`, `pi/m`, `k*pi/m`.
fn parse_num<T: Real>(s: &str) -> Result<T> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("bad number '{s}'"));
    if !s.contains("pi") {
        return s.parse::<T>().map_err(|_| bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let k = match num.trim_end_matches("pi").trim_end_matches('*').trim() {
        "" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(T::lit(k * std::f64::consts::PI / den))
}

impl<T: Real> std::str::FromStr for CircularDomain<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidArgument(format!("domain '{s}': {msg}"));
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let args = parts.next().ok_or_else(|| bad("missing parameters"))?;
        let closure = match parts.next().map(|c| c.trim().to_ascii_lowercase()) {
            None => Closure::Open,
            Some(c) if c == "open" => Closure::Open,
            Some(c) if c == "closed" => Closure::Closed,
            Some(_) => return Err(bad("closure must be open or closed")),
        };
        if parts.next().is_some() {
            return Err(bad("too many ':' sections"));
        }
        let nums: Vec<T> = args
            .split(',')
            .map(parse_num::<T>)
            .collect::<Result<_>>()?;
        let d = match (kind.as_str(), nums.len()) {
            ("halfplane", 1) => Self::half_plane(nums[0]),
            ("halfplane", 2) => Self::half_plane_offset(nums[0], nums[1]),
            ("disk", 3) => Self::disk(Complex::new(nums[0], nums[1]), nums[2])?,
            ("exterior", 3) => Self::exterior(Complex::new(nums[0], nums[1]), nums[2])?,
            ("halfplane" | "disk" | "exterior", _) => return Err(bad("wrong parameter count")),
            _ => return Err(bad("unknown kind")),
        };
        Ok(d.with_closure(closure))
    }
}

/// `Ω = Ω₁ × ⋯ × Ω_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainProduct<T: Real>(pub Vec<CircularDomain<T>>);

impl<T: Real> DomainProduct<T> {
    pub fn broadcast(d: CircularDomain<T>, n: usize) -> Self {
        DomainProduct(vec![d; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[CircularDomain<T>] {
        &self.0
    }

    pub fn contains(&self, point: &[C<T>]) -> bool {
        point.len() == self.0.len() && self.0.iter().zip(point).all(|(d, z)| d.contains(*z))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C<T>> {
        self.0.iter().map(|d| d.sample(rng)).collect()
    }

    /// Every factor is a half-plane.
    pub fn all_half_planes(&self) -> bool {
        self.0.iter().all(|d| d.is_half_plane())
    }

    /// Parses a comma-separated list of domain literals (or `;`-separated),
    /// broadcasting a single literal to `nvars` factors.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let mut literals: Vec<String> = Vec::new();
        for chunk in s.split(';') {
            for tok in chunk.split(',') {
                let t = tok.trim();
                let starts = ["halfplane:", "disk:", "exterior:"]
                    .iter()
                    .any(|k| t.to_ascii_lowercase().starts_with(k));
                match literals.last_mut() {
                    Some(last) if !starts => {
                        last.push(',');
                        last.push_str(t);
                    }
                    _ => literals.push(t.to_string()),
                }
            }
        }
        let domains: Vec<CircularDomain<T>> = literals
            .iter()
            .map(|l| l.parse())
            .collect::<Result<_>>()?;
        match domains.len() {
            1 => Ok(Self::broadcast(domains[0], nvars)),
            k if k == nvars => Ok(DomainProduct(domains)),
            k => Err(Error::LengthMismatch {
                expected: nvars,
                got: k,
            }),
        }
    }
}

impl<T: Real> fmt::Display for DomainProduct<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `φ(ζ) = (aζ + b)/(cζ + d)`, normalized so that `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap<T: Real> {
    pub a: C<T>,
    pub b: C<T>,
    pub c: C<T>,
    pub d: C<T>,
}

impl<T: Real> MoebiusMap<T> {
    /// Rescales by `sqrt(ad − bc)`; errors when the determinant vanishes.
    pub fn new(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> Result<Self> {
        let det = a * d - b * c;
        let mag = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if det.norm() <= T::lit(1e-12) * mag * mag || !det.norm().is_finite() {
            return Err(Error::InvalidArgument("degenerate Möbius map (ad − bc = 0)".into()));
        }
        let s = det.sqrt();
        Ok(MoebiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: cone(),
            b: czero(),
            c: czero(),
            d: cone(),
        }
    }

    pub fn translation(b: C<T>) -> Self {
        MoebiusMap {
            a: cone(),
            b,
            c: czero(),
            d: cone(),
        }
    }

    pub fn det(&self) -> C<T> {
        self.a * self.d - self.b * self.c
    }

    /// `φ(ζ)`; `None` at the pole.
    pub fn apply(&self, z: C<T>) -> Option<C<T>> {
        let den = self.c * z + self.d;
        if den == czero() {
            None
        } else {
            Some((self.a * z + self.b) / den)
        }
    }

    /// `self ∘ other` (matrix product `self · other`).
    pub fn compose(&self, other: &Self) -> Self {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// `Φ_κ f = (c₁z₁+d₁)^{κ₁}⋯(c_nz_n+d_n)^{κ_n} f(φ₁(z₁),…,φ_n(z_n))`.
///
/// Applying `Φ_κ` for `M₁` and then for `M₂` equals `Φ_κ` for `M₁ ∘ M₂`.
pub fn phi_kappa_transform<T: Real>(
    f: &Polynomial<T>,
    maps: &[MoebiusMap<T>],
    kappa: &MultiIndex,
) -> Result<Polynomial<T>> {
    let n = f.nvars();
    if maps.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: maps.len(),
        });
    }
    f.require_degree_within(kappa)?;
    // per-variable dense expansions of (a z + b)^j (c z + d)^{κ-j}
    let tables: Vec<Vec<Vec<C<T>>>> = (0..n)
        .map(|i| {
            let m = &maps[i];
            let k = kappa[i];
            (0..=k)
                .map(|j| {
                    let num = dense_pow(&[m.b, m.a], j);
                    let den = dense_pow(&[m.d, m.c], k - j);
                    dense_mul(&num, &den)
                })
                .collect()
        })
        .collect();
    let mut acc: HashMap<MultiIndex, C<T>> = HashMap::new();
    for (alpha, coeff) in f.terms() {
        let factors: Vec<&Vec<C<T>>> = (0..n).map(|i| &tables[i][alpha[i] as usize]).collect();
        let mut partial: Vec<(Vec<u32>, C<T>)> = vec![(Vec::with_capacity(n), *coeff)];
        for fac in factors {
            let mut next = Vec::with_capacity(partial.len() * fac.len());
            for (e, c) in &partial {
                for (k, x) in fac.iter().enumerate() {
                    if *x == czero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2.push(k as u32);
                    next.push((e2, c * x));
                }
            }
            partial = next;
        }
        for (e, c) in partial {
            *acc.entry(MultiIndex::new(e)).or_insert_with(czero) += c;
        }
    }
    Polynomial::from_terms(n, acc)
}

fn dense_mul<T: Real>(p: &[C<T>], q: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![czero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn dense_pow<T: Real>(p: &[C<T>], k: u32) -> Vec<C<T>> {
    let mut acc = vec![cone()];
    for _ in 0..k {
        acc = dense_mul(&acc, p);
    }
    acc
}

/// `I_κ(z^α) = z^{κ−α}`.
pub fn invert_i_kappa<T: Real>(f: &Polynomial<T>, kappa: &MultiIndex) -> Result<Polynomial<T>> {
    f.require_degree_within(kappa)?;
    Ok(f.map_exponents(f.nvars(), |a| kappa.checked_sub(a)))
}

/// Transports a polynomial nonvanishing on `𝔻ⁿ` with degree `κ` into one
/// nonvanishing on `Ω` via `Φ_κ` with the maps `Ω_i → 𝔻`.
pub fn transport_from_unit_disk<T: Real>(
    f: &Polynomial<T>,
    omega: &DomainProduct<T>,
    kappa: &MultiIndex,
) -> Result<Polynomial<T>> {
    let maps: Vec<MoebiusMap<T>> = omega.factors().iter().map(|d| d.to_unit_disk()).collect();
    phi_kappa_transform(f, &maps, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type D = CircularDomain<f64>;
    type P = Polynomial<f64>;

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn contains_examples() {
        assert!(D::upper_half_plane().contains(c(0.0, 1.0)));
        assert!(!D::unit_disk().contains(c(1.0, 0.0)));
        assert!(D::unit_exterior().closed().contains(c(1.0, 0.0)));
        assert!(!D::upper_half_plane().contains(c(5.0, 1e-11)));
        assert!(D::upper_half_plane().closed().contains(c(5.0, -1e-11)));
    }

    #[test]
    fn samplers_stay_inside_and_are_seeded() {
        let doms = [
            D::unit_disk(),
            D::unit_exterior(),
            D::upper_half_plane(),
            D::half_plane(1.3),
            D::half_plane_offset(0.0, 1.0),
            D::disk(c(2.0, -1.0), 0.5).unwrap(),
            D::exterior(c(-1.0, 3.0), 2.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in doms {
            for _ in 0..10_000 {
                let z = d.sample(&mut rng);
                assert!(d.contains(z), "{d} {z}");
            }
        }
        let a = D::unit_disk().sample(&mut ChaCha8Rng::seed_from_u64(9));
        let b = D::unit_disk().sample(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mean: f64 = (0..1000).map(|_| D::upper_half_plane().sample(&mut rng).im).sum::<f64>() / 1000.0;
        assert!(mean > 0.5);
    }

    #[test]
    fn literal_parsing() {
        let d: D = "halfplane:0".parse().unwrap();
        assert_eq!(d, D::upper_half_plane());
        let d: D = "disk:0,0,1:closed".parse().unwrap();
        assert_eq!(d, D::unit_disk().closed());
        let d: D = "halfplane:pi/2".parse().unwrap();
        assert!(matches!(d.kind, DomainKind::HalfPlane { theta, .. } if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15));
        let p = DomainProduct::<f64>::parse("disk:0,0,1,exterior:0,0,2:closed", 2).unwrap();
        assert_eq!(p.0[1], D::exterior(c(0.0, 0.0), 2.0).unwrap().closed());
        let p = DomainProduct::<f64>::parse("halfplane:0", 3).unwrap();
        assert_eq!(p.len(), 3);
        assert!(DomainProduct::<f64>::parse("halfplane:0,halfplane:0", 3).is_err());
        assert!("disk:0,0,-1".parse::<D>().is_err());
        assert!("square:1".parse::<D>().is_err());
        let d = D::exterior(c(1.5, -2.0), 3.0).unwrap().closed();
        assert_eq!(d.to_string().parse::<D>().unwrap(), d);
    }

    #[test]
    fn moebius_normalization() {
        let m = MoebiusMap::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((m.det() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(MoebiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn standard_maps_hit_the_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [
            D::half_plane(0.7),
            D::half_plane_offset(2.0, 1.5),
            D::disk(c(1.0, 1.0), 2.0).unwrap(),
            D::exterior(c(0.0, -1.0), 0.5).unwrap(),
        ] {
            let m = d.from_unit_disk();
            for _ in 0..200 {
                let z = D::unit_disk().sample(&mut rng);
                if z.norm() > 0.999 {
                    continue;
                }
                assert!(d.contains(m.apply(z).unwrap()), "{d}");
            }
        }
    }

    #[test]
    fn phi_kappa_examples() {
        let b = c(0.3, -0.2);
        let f: P = "z".parse().unwrap();
        let g = phi_kappa_transform(&f, &[MoebiusMap::translation(b)], &MultiIndex::new(vec![1])).unwrap();
        assert!(g.max_distance(&(&f + &P::constant(1, b))) < 1e-15);

        let m = MoebiusMap::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let g = phi_kappa_transform(&"z+1".parse().unwrap(), &[m], &MultiIndex::new(vec![1])).unwrap();
        assert!(g.max_distance(&"z-1".parse().unwrap()) < 1e-15);

        let t = MoebiusMap::translation(c(0.0, 1.0));
        let g = phi_kappa_transform(&"z1*z2".parse().unwrap(), &[t, t], &MultiIndex::new(vec![1, 1])).unwrap();
        assert!(g.max_distance(&"(z1+i)*(z2+i)".parse().unwrap()) < 1e-15);

        assert!(phi_kappa_transform(&"z^3".parse().unwrap(), &[t], &MultiIndex::new(vec![2])).is_err());
    }

    #[test]
    fn phi_identity_inverse_and_composition() {
        let f: P = "1 + (2-1i)*z1*z2^2 - 3*z1 + 0.5*z2".parse().unwrap();
        let k = MultiIndex::new(vec![2, 3]);
        let id = MoebiusMap::identity();
        assert!(phi_kappa_transform(&f, &[id, id], &k).unwrap().max_distance(&f) < 1e-15);
        let m1 = MoebiusMap::new(c(1.0, 1.0), c(0.5, 0.0), c(-0.3, 0.2), c(2.0, 0.0)).unwrap();
        let m2 = MoebiusMap::new(c(0.0, 1.0), c(1.0, -0.5), c(0.7, 0.0), c(1.0, 1.0)).unwrap();
        let g = phi_kappa_transform(&f, &[m1, m2], &k).unwrap();
        let back = phi_kappa_transform(&g, &[m1.inverse(), m2.inverse()], &k).unwrap();
        assert!(back.max_distance(&f) < 1e-9);
        let h = phi_kappa_transform(&g, &[m2, m1], &k).unwrap();
        let direct = phi_kappa_transform(&f, &[m1.compose(&m2), m2.compose(&m1)], &k).unwrap();
        assert!(h.max_distance(&direct) < 1e-9);
    }

    #[test]
    fn i_kappa_examples() {
        let k = MultiIndex::new(vec![2]);
        let one: P = "1".parse().unwrap();
        assert_eq!(invert_i_kappa(&one, &k).unwrap(), "z^2".parse().unwrap());
        let f: P = "1+z^2".parse().unwrap();
        assert_eq!(invert_i_kappa(&f, &k).unwrap(), f);
        let k = MultiIndex::new(vec![1, 1]);
        let f = P::parse("z1", Some(2)).unwrap();
        assert_eq!(invert_i_kappa(&f, &k).unwrap(), P::parse("z2", Some(2)).unwrap());
        let g: P = "(1+2i)*z1 + z1*z2 - 4".parse().unwrap();
        assert_eq!(invert_i_kappa(&invert_i_kappa(&g, &k).unwrap(), &k).unwrap(), g);
    }
}
