//! The multivariate apolar pairing `{f, g}_κ` and Grace-type checks.

use serde_json::json;

use crate::domains::{phi_kappa_transform, CircularDomain, DomainKind, DomainProduct, MoebiusMap};
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{czero, Real, C};
use crate::stability::{check, Mode, Verdict};

/// Sign inside the pairing sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairingSign {
    /// `(−1)^{|α|}` per term (the canonical choice).
    #[default]
    Alpha,
    /// A single global `(−1)^{|κ|}`.
    Kappa,
}

fn require_pair<T: Real>(f: &Polynomial<T>, g: &Polynomial<T>, kappa: &MultiIndex) -> Result<()> {
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    f.require_degree_within(kappa)?;
    g.require_degree_within(kappa)
}

fn parity<T: Real>(k: u32) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// `Σ_{α≤κ} (−1)^{|α|} f^{(α)}(0) g^{(κ−α)}(0)`.
pub fn apolar_pairing<T: Real>(f: &Polynomial<T>, g: &Polynomial<T>, kappa: &MultiIndex) -> Result<C<T>> {
    apolar_pairing_with(f, g, kappa, PairingSign::Alpha)
}

pub fn apolar_pairing_with<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    sign: PairingSign,
) -> Result<C<T>> {
    require_pair(f, g, kappa)?;
    let mut acc = czero();
    for (alpha, a) in f.terms() {
        let beta = kappa.checked_sub(alpha).expect("degree checked");
        let b = g.coeff(&beta);
        if b == czero() {
            continue;
        }
        let s = match sign {
            PairingSign::Alpha => parity::<T>(alpha.total()),
            PairingSign::Kappa => parity::<T>(kappa.total()),
        };
        let w = alpha.factorial::<T>() * beta.factorial::<T>() * s;
        acc += a * b * w;
    }
    Ok(acc)
}

/// `Σ_{α≤κ} (−1)^{|α|} f^{(α)}(z) g^{(κ−α)}(z)`; constant in `z`.
pub fn pairing_field<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    z: &[C<T>],
) -> Result<C<T>> {
    require_pair(f, g, kappa)?;
    if z.len() != f.nvars() {
        return Err(Error::LengthMismatch {
            expected: f.nvars(),
            got: z.len(),
        });
    }
    let mut acc = czero();
    for alpha in kappa.box_below() {
        let fa = f.derivative(&alpha)?;
        if fa.is_zero() {
            continue;
        }
        let beta = kappa.checked_sub(&alpha).expect("α ≤ κ");
        let gb = g.derivative(&beta)?;
        if gb.is_zero() {
            continue;
        }
        acc += fa.evaluate(z)? * gb.evaluate(z)? * parity::<T>(alpha.total());
    }
    Ok(acc)
}

/// `|{f,g}_κ − {Φ_κ f, Φ_κ g}_κ|` for maps with `ad − bc = 1`.
pub fn moebius_invariance_check<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    maps: &[MoebiusMap<T>],
) -> Result<T> {
    for (i, m) in maps.iter().enumerate() {
        let off = (m.det() - C::new(T::one(), T::zero())).norm();
        if off > T::lit(1e-10) {
            return Err(Error::InvalidArgument(format!(
                "map {} is not normalized (|ad − bc − 1| = {off})",
                i + 1
            )));
        }
    }
    let before = apolar_pairing(f, g, kappa)?;
    let ff = phi_kappa_transform(f, maps, kappa)?;
    let gg = phi_kappa_transform(g, maps, kappa)?;
    let after = apolar_pairing(&ff, &gg, kappa)?;
    Ok((before - after).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraceVariant {
    /// Open disks and disk exteriors; `g` nonvanishing on the complements.
    DiskExt,
    /// `f` on an open half-plane `C₁`, `g` on an open half-plane `C₂`
    /// with `C₁ ∪ C₂ = ℂ`.
    HalfPlane,
    /// Classical Grace: one variable, both of degree exactly `κ ≥ 1`.
    Univariate,
}

impl std::str::FromStr for GraceVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk-ext" => Ok(Self::DiskExt),
            "halfplane" => Ok(Self::HalfPlane),
            "univariate" => Ok(Self::Univariate),
            _ => Err(Error::InvalidArgument(format!("unknown Grace variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct GraceReport<T: Real> {
    pub pairing: C<T>,
    pub audit: Vec<AuditItem>,
    pub hypotheses_hold: bool,
    pub nonzero: bool,
    pub pass: bool,
}

impl<T: Real> GraceReport<T> {
    pub fn failed_hypotheses(&self) -> Vec<&str> {
        self.audit.iter().filter(|a| !a.ok).map(|a| a.name.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "pairing": [self.pairing.re.f64(), self.pairing.im.f64()],
            "hypotheses_hold": self.hypotheses_hold,
            "nonzero": self.nonzero,
            "pass": self.pass,
            "audit": self.audit.iter().map(|a| json!({
                "hypothesis": a.name, "ok": a.ok, "detail": a.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Options for the stability part of the audit.
#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    pub budget: usize,
    pub seed: u64,
    /// Skip the (randomized) stability audits, e.g. for inputs that are
    /// stable by construction.
    pub assume_stable: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            budget: crate::stability::DEFAULT_BUDGET,
            seed: 0,
            assume_stable: false,
        }
    }
}

fn item(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> AuditItem {
    AuditItem {
        name: name.into(),
        ok,
        detail: detail.into(),
    }
}

fn stability_item<T: Real>(
    label: &str,
    p: &Polynomial<T>,
    omega: &DomainProduct<T>,
    opts: &AuditOptions,
) -> Result<AuditItem> {
    if opts.assume_stable {
        return Ok(item(label, true, "assumed"));
    }
    if p.is_zero() {
        return Ok(item(label, false, "identically zero"));
    }
    let v = check(p, omega, Mode::Auto, opts.budget, opts.seed)?;
    Ok(match v {
        Verdict::Falsified { witness, .. } => item(
            label,
            false,
            format!(
                "zero at {:?}",
                witness.iter().map(|z| (z.re.f64(), z.im.f64())).collect::<Vec<_>>()
            ),
        ),
        Verdict::Certified { .. } => item(label, true, format!("certified on {omega}")),
        Verdict::Unknown { trials, .. } => item(label, true, format!("no zero in {trials} trials on {omega}")),
    })
}

fn same_half_plane<T: Real>(omega: &DomainProduct<T>) -> Option<(T, T)> {
    let first = omega.factors().first()?;
    let DomainKind::HalfPlane { theta, offset } = first.kind else {
        return None;
    };
    omega
        .factors()
        .iter()
        .all(|d| d.is_open() && d.kind == first.kind)
        .then_some((theta, offset))
}

/// Evaluates `{f, g}_κ` and audits the hypotheses of the selected Grace-type
/// theorem. `domains` are the `Cᵢ` for `f`; for the half-plane variant
/// `g_domains` gives `C₂` (otherwise `g` is audited on `∏(ℂ ∖ Cᵢ)`).
/// Passes iff every hypothesis holds and `|{f,g}_κ| > 1e-9·scale(f)·scale(g)`.
pub fn grace_check<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    domains: &DomainProduct<T>,
    g_domains: Option<&DomainProduct<T>>,
    variant: GraceVariant,
    opts: &AuditOptions,
) -> Result<GraceReport<T>> {
    let pairing = apolar_pairing(f, g, kappa)?;
    let n = kappa.len();
    if domains.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: domains.len(),
        });
    }
    let complement = DomainProduct(domains.factors().iter().map(|d| d.complement()).collect());
    let g_omega = g_domains.cloned().unwrap_or(complement);
    if g_omega.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: g_omega.len(),
        });
    }
    let mut audit = Vec::new();
    match variant {
        GraceVariant::DiskExt => {
            let kinds_ok = domains
                .factors()
                .iter()
                .all(|d| d.is_open() && !d.is_half_plane());
            audit.push(item("domains are open disks or exteriors", kinds_ok, domains.to_string()));
            audit.push(stability_item("f is stable on the product of C_i", f, domains, opts)?);
            audit.push(stability_item("g is stable on the product of complements", g, &g_omega, opts)?);
            for (j, d) in domains.factors().iter().enumerate() {
                let exterior = matches!(d.kind, DomainKind::Exterior { .. });
                let (who, p) = if exterior { ("f", f) } else { ("g", g) };
                let deg = p.degree_in(j);
                audit.push(item(
                    format!("deg_z{}({who}) = kappa_{}", j + 1, j + 1),
                    deg == kappa[j],
                    format!("{deg} vs {}", kappa[j]),
                ));
            }
        }
        GraceVariant::HalfPlane => {
            let c1 = same_half_plane(domains);
            let c2 = same_half_plane(&g_omega);
            audit.push(item(
                "f domain is one open half-plane C1",
                c1.is_some(),
                domains.to_string(),
            ));
            audit.push(item(
                "g domain is one open half-plane C2",
                c2.is_some(),
                g_omega.to_string(),
            ));
            let cover = match (c1, c2) {
                (Some((t1, o1)), Some((t2, o2))) => {
                    let flip = (t2 - t1 - T::PI()).abs() <= T::lit(1e-12)
                        || (t1 - t2 - T::PI()).abs() <= T::lit(1e-12);
                    flip && o1 < -o2
                }
                _ => false,
            };
            audit.push(item("C1 and C2 cover the plane", cover, ""));
            audit.push(stability_item("f is C1-stable", f, domains, opts)?);
            audit.push(stability_item("g is C2-stable", g, &g_omega, opts)?);
            let witness = f
                .support()
                .into_iter()
                .flat_map(|a| g.support().into_iter().map(move |b| (a.clone(), b)))
                .find(|(a, b)| kappa.le(&a.add(b)));
            audit.push(item(
                "kappa <= alpha + beta for some alpha in supp f, beta in supp g",
                witness.is_some(),
                witness.map(|(a, b)| format!("{a:?} + {b:?}")).unwrap_or_default(),
            ));
        }
        GraceVariant::Univariate => {
            audit.push(item("one variable", n == 1, format!("{n} variables")));
            if n == 1 {
                let (df, dg) = (f.degree_in(0), g.degree_in(0));
                audit.push(item("kappa >= 1", kappa[0] >= 1, ""));
                audit.push(item("deg f = kappa", df == kappa[0], format!("{df}")));
                audit.push(item("deg g = kappa", dg == kappa[0], format!("{dg}")));
            }
            audit.push(stability_item("f is C-stable", f, domains, opts)?);
            audit.push(stability_item("g is (C \\ C)-stable", g, &g_omega, opts)?);
        }
    }
    let hypotheses_hold = audit.iter().all(|a| a.ok);
    let nonzero = pairing.norm() > T::lit(1e-9) * f.scale() * g.scale();
    Ok(GraceReport {
        pairing,
        audit,
        hypotheses_hold,
        nonzero,
        pass: hypotheses_hold && nonzero,
    })
}

/// The two-variable input that defeats the naive multivariate Grace
/// statement: `f = z₁ + z₂`, `g = 1`, `κ = (1,1)`, `A = B = {Im z ≥ 1}`.
/// Returns the half-plane audit (`C₁ = H₀`, `C₂ = {Im z < 1}`).
pub fn hinkkanen_counterexample<T: Real>() -> Result<GraceReport<T>> {
    let f = Polynomial::parse("z1 + z2", Some(2))?;
    let g = Polynomial::one(2);
    let kappa = MultiIndex::new(vec![1, 1]);
    let c1 = DomainProduct::broadcast(CircularDomain::upper_half_plane(), 2);
    let c2 = DomainProduct::broadcast(CircularDomain::half_plane_offset(T::PI(), -T::one()), 2);
    grace_check(
        &f,
        &g,
        &kappa,
        &c1,
        Some(&c2),
        GraceVariant::HalfPlane,
        &AuditOptions {
            budget: 2000,
            ..Default::default()
        },
    )
}
