use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::ParseError;

/// Stable id handed out by a [`Registry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VarId(pub u32);

/// Inert symbols that are never evaluated during exact work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Marker {
    Pi,
    /// Area of the unit 2-sphere.
    Omega3,
    /// Scalar curvature.
    ScalarCurvature,
    /// The boundary measure dx′.
    Dx,
    /// Boundary divergence of the normal field ∂xₙ.
    DivNormal,
}

impl Marker {
    pub const ALL: [Marker; 5] = [
        Marker::Pi,
        Marker::Omega3,
        Marker::ScalarCurvature,
        Marker::Dx,
        Marker::DivNormal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Marker::Pi => "pi",
            Marker::Omega3 => "Omega3",
            Marker::ScalarCurvature => "s",
            Marker::Dx => "dx",
            Marker::DivNormal => "div",
        }
    }
}

/// Indexed scalar families. Frame indices are 1-based over e₁..eₙ with
/// the leaf directions first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// `G[a;b,c]` = ⟨∇_{e_a} e_b, e_c⟩, antisymmetric in (b,c).
    Gamma,
    /// `dG[d;a;b,c]` = e_d(⟨∇_{e_a} e_b, e_c⟩), antisymmetric in (b,c).
    DGamma,
    /// `XdY[l]` = X(Y_l) = Σ_j X_j ∂_j Y_l.
    XdY,
    /// `YdX[l]` = Y(X_l).
    YdX,
    /// `R[a,b;c,d]` = ⟨R(e_a,e_b)e_c,e_d⟩, antisymmetric in both pairs.
    Riemann,
}

impl Family {
    pub fn arity(self) -> usize {
        match self {
            Family::Gamma => 3,
            Family::DGamma | Family::Riemann => 4,
            Family::XdY | Family::YdX => 1,
        }
    }

    fn antisymmetric_pairs(self) -> &'static [(usize, usize)] {
        match self {
            Family::Gamma => &[(1, 2)],
            Family::DGamma => &[(2, 3)],
            Family::Riemann => &[(0, 1), (2, 3)],
            Family::XdY | Family::YdX => &[],
        }
    }

    pub fn is_curvature(self) -> bool {
        matches!(self, Family::Riemann)
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::Gamma => "G",
            Family::DGamma => "dG",
            Family::XdY => "XdY",
            Family::YdX => "YdX",
            Family::Riemann => "R",
        }
    }

    // index separators, one per gap between indices
    fn separators(self) -> &'static [char] {
        match self {
            Family::Gamma => &[';', ','],
            Family::DGamma => &[';', ';', ','],
            Family::Riemann => &[',', ';', ','],
            Family::XdY | Family::YdX => &[],
        }
    }
}

pub type Indices = SmallVec<[u8; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Tangential covector component ξ_j, j < n.
    XiPrime(u8),
    X(u8),
    Y(u8),
    /// h′(0), the normal derivative of the boundary metric factor.
    HPrime,
    /// Extrinsic curvature K of the boundary.
    Extrinsic,
    /// Family member with indices already in canonical order.
    Family(Family, Indices),
    Marker(Marker),
}

impl Kind {
    pub fn is_marker(&self) -> bool {
        matches!(self, Kind::Marker(_))
    }

    /// Canonicalise a family member: returns the sign absorbed by the
    /// reordering, or `None` if antisymmetry forces the member to vanish.
    pub fn family(family: Family, idx: &[u8]) -> Option<(i8, Kind)> {
        assert_eq!(idx.len(), family.arity(), "{family:?} index arity");
        let mut idx: Indices = idx.iter().copied().collect();
        let mut sign = 1i8;
        for &(a, b) in family.antisymmetric_pairs() {
            match idx[a].cmp(&idx[b]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => {
                    idx.swap(a, b);
                    sign = -sign;
                }
                std::cmp::Ordering::Less => {}
            }
        }
        Some((sign, Kind::Family(family, idx)))
    }

    pub fn name(&self) -> String {
        match self {
            Kind::XiPrime(j) => format!("xi{j}"),
            Kind::X(j) => format!("X{j}"),
            Kind::Y(j) => format!("Y{j}"),
            Kind::HPrime => "hp".into(),
            Kind::Extrinsic => "K".into(),
            Kind::Marker(m) => m.name().into(),
            Kind::Family(f, idx) => {
                let mut s = format!("{}[", f.prefix());
                for (k, i) in idx.iter().enumerate() {
                    if k > 0 {
                        s.push(f.separators()[k - 1]);
                    }
                    s.push_str(&i.to_string());
                }
                s.push(']');
                s
            }
        }
    }

    /// Inverse of [`Kind::name`]. Only canonical family members parse.
    pub fn parse(name: &str) -> Result<Kind, ParseError> {
        let bad = || ParseError::Indeterminate(name.to_string());
        if let Some(m) = Marker::ALL.iter().find(|m| m.name() == name) {
            return Ok(Kind::Marker(*m));
        }
        if name == "hp" {
            return Ok(Kind::HPrime);
        }
        if name == "K" {
            return Ok(Kind::Extrinsic);
        }
        if let Some((head, rest)) = name.split_once('[') {
            let family = [
                Family::Gamma,
                Family::DGamma,
                Family::XdY,
                Family::YdX,
                Family::Riemann,
            ]
            .into_iter()
            .find(|f| f.prefix() == head)
            .ok_or_else(bad)?;
            let body = rest.strip_suffix(']').ok_or_else(bad)?;
            let idx: Vec<u8> = body
                .split([';', ','])
                .map(|t| t.parse::<u8>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            if idx.len() != family.arity() {
                return Err(bad());
            }
            let (sign, kind) = Kind::family(family, &idx).ok_or_else(bad)?;
            if sign != 1 || kind.name() != name {
                return Err(bad());
            }
            return Ok(kind);
        }
        let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (head, digits) = name.split_at(split);
        let j: u8 = digits.parse().map_err(|_| bad())?;
        match head {
            "xi" => Ok(Kind::XiPrime(j)),
            "X" => Ok(Kind::X(j)),
            "Y" => Ok(Kind::Y(j)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Default)]
struct Inner {
    kinds: Vec<Kind>,
    lookup: HashMap<Kind, VarId>,
}

/// Append-only table of indeterminates. Ids are handed out in
/// registration order and never change.
pub struct Registry {
    inner: RwLock<Inner>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("len", &self.len()).finish()
    }
}

impl Registry {
    /// Fresh registry with the standard n = 4 indeterminates pre-registered
    /// in a fixed order, so rendering is stable across processes.
    pub fn new() -> Arc<Self> {
        let reg = Registry {
            inner: RwLock::new(Inner::default()),
        };
        for j in 1..=3 {
            reg.intern(Kind::XiPrime(j));
        }
        for j in 1..=4 {
            reg.intern(Kind::X(j));
        }
        for j in 1..=4 {
            reg.intern(Kind::Y(j));
        }
        reg.intern(Kind::HPrime);
        reg.intern(Kind::Extrinsic);
        for m in Marker::ALL {
            reg.intern(Kind::Marker(m));
        }
        Arc::new(reg)
    }

    /// Process-wide shared registry.
    pub fn global() -> Arc<Registry> {
        static GLOBAL: OnceLock<Arc<Registry>> = OnceLock::new();
        GLOBAL.get_or_init(Registry::new).clone()
    }

    pub fn intern(&self, kind: Kind) -> VarId {
        if let Some(id) = self.inner.read().unwrap().lookup.get(&kind) {
            return *id;
        }
        let mut w = self.inner.write().unwrap();
        if let Some(id) = w.lookup.get(&kind) {
            return *id;
        }
        let id = VarId(w.kinds.len() as u32);
        w.kinds.push(kind.clone());
        w.lookup.insert(kind, id);
        id
    }

    pub fn lookup(&self, kind: &Kind) -> Option<VarId> {
        self.inner.read().unwrap().lookup.get(kind).copied()
    }

    pub fn kind(&self, id: VarId) -> Kind {
        self.inner.read().unwrap().kinds[id.0 as usize].clone()
    }

    pub fn name(&self, id: VarId) -> String {
        self.kind(id).name()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn marker(&self, m: Marker) -> VarId {
        self.intern(Kind::Marker(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_family_order() {
        let (s, k) = Kind::family(Family::Gamma, &[1, 4, 2]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(k.name(), "G[1;2,4]");
        assert!(Kind::family(Family::Gamma, &[3, 2, 2]).is_none());
        let (s, k) = Kind::family(Family::Riemann, &[2, 1, 4, 3]).unwrap();
        assert_eq!(s, 1);
        assert_eq!(k.name(), "R[1,2;3,4]");
    }

    #[test]
    fn names_round_trip() {
        let reg = Registry::new();
        for (f, idx) in [
            (Family::Gamma, vec![3, 1, 4]),
            (Family::DGamma, vec![2, 1, 3, 4]),
            (Family::XdY, vec![4]),
            (Family::Riemann, vec![1, 3, 2, 4]),
        ] {
            let (_, k) = Kind::family(f, &idx).unwrap();
            reg.intern(k.clone());
            assert_eq!(Kind::parse(&k.name()).unwrap(), k);
        }
        for id in 0..reg.len() as u32 {
            let k = reg.kind(VarId(id));
            assert_eq!(Kind::parse(&k.name()).unwrap(), k);
        }
        assert!(Kind::parse("G[1;4,2]").is_err());
        assert!(Kind::parse("zeta3").is_err());
    }

    #[test]
    fn ids_are_stable() {
        let reg = Registry::new();
        let a = reg.intern(Kind::X(2));
        let b = reg.intern(Kind::X(2));
        assert_eq!(a, b);
        let other = Registry::new();
        assert_eq!(other.intern(Kind::X(2)), a);
    }
}
