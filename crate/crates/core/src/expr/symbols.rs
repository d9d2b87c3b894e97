//! Generator and constant tables.  A `Symbols` value is owned by a theory,
//! is immutable after load, and is shared read-only by every operation.

use crate::scalar::{ConstInfo, ConstKind};
use std::collections::BTreeMap;

pub type GenId = u32;

/// Bidegree: spacetime form degree `p`, variational degree `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct Bidegree {
    pub p: i32,
    pub q: i32,
}

impl Bidegree {
    pub fn new(p: i32, q: i32) -> Self {
        Bidegree { p, q }
    }
    pub fn add(self, other: Bidegree) -> Bidegree {
        Bidegree { p: self.p + other.p, q: self.q + other.q }
    }
    /// Koszul sign for swapping two factors: (-1)^(p1 p2 + q1 q2).
    pub fn swap_sign(self, other: Bidegree) -> i8 {
        if (self.p * other.p + self.q * other.q) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Value kind of a generator.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GenKind {
    /// Lie-algebra valued (matrix).  `algebra` tags the sector; `commuting`
    /// marks scalar-valued algebras (u(1)) whose letters commute with
    /// everything modulo the Koszul sign.
    Lie { algebra: String, commuting: bool },
    /// Group valued (gamma, u, tetrad components).  Always bidegree (0,0).
    Group { group: String },
    /// Opaque scalar-valued letter: commutes with everything modulo Koszul.
    Scalar,
    /// Matrix-valued but not in the gauge Lie algebra (declared composite
    /// whose symmetric part may or may not vanish).
    Matrix { symmetric: bool },
}

impl GenKind {
    pub fn commutes(&self) -> bool {
        matches!(
            self,
            GenKind::Scalar | GenKind::Lie { commuting: true, .. }
        )
    }
    pub fn is_lie(&self) -> bool {
        matches!(self, GenKind::Lie { .. })
    }
    pub fn is_group(&self) -> bool {
        matches!(self, GenKind::Group { .. })
    }
}

/// What a letter is, relative to the declared fields: used by the exactness
/// peeler and the oracle (computed vs assigned).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Derived {
    /// A declared base field or parameter; assigned by the oracle.
    Base,
    /// `d` of another generator (e.g. `dg` of `g`, `dδA` of `δA`, `dchi` of
    /// `chi`).  Computed by the oracle as the mesh differential.
    D(GenId),
    /// Variational basis letter `δX` of a base generator X.
    Var(GenId),
    /// Formal inverse of a group generator.
    Inverse(GenId),
    /// Computed from other fields by an expression (curvatures, composites);
    /// the oracle evaluates the stored formula.
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GenInfo {
    pub name: String,
    pub deg: Bidegree,
    pub kind: GenKind,
    pub derived: Derived,
}

/// Interned generator + constant tables for one theory.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    pub gens: Vec<GenInfo>,
    pub by_name: BTreeMap<String, GenId>,
    pub consts: Vec<ConstInfo>,
    pub consts_by_name: BTreeMap<String, u32>,
    /// Spacetime dimension; fixes the Hodge degree shift p -> dim - p.
    pub dim: i32,
}

impl Symbols {
    pub fn new(dim: i32) -> Self {
        Symbols { dim, ..Default::default() }
    }

    pub fn add_gen(&mut self, name: &str, deg: Bidegree, kind: GenKind, derived: Derived) -> GenId {
        assert!(
            !self.by_name.contains_key(name),
            "duplicate generator `{name}`"
        );
        let id = self.gens.len() as GenId;
        self.gens.push(GenInfo { name: name.to_string(), deg, kind, derived });
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn add_const(&mut self, name: &str, kind: ConstKind) -> u32 {
        if let Some(&id) = self.consts_by_name.get(name) {
            return id;
        }
        let id = self.consts.len() as u32;
        self.consts.push(ConstInfo { name: name.to_string(), kind });
        self.consts_by_name.insert(name.to_string(), id);
        id
    }

    pub fn gen(&self, id: GenId) -> &GenInfo {
        &self.gens[id as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id as usize].name
    }

    /// The inverse letter of a group generator, if declared.
    pub fn inverse_of(&self, id: GenId) -> Option<GenId> {
        let name = format!("{}⁻¹", self.name(id));
        self.lookup(&name)
    }

    /// If `id` is an inverse letter, the group generator it inverts.
    pub fn inverts(&self, id: GenId) -> Option<GenId> {
        match self.gen(id).derived {
            Derived::Inverse(g) => Some(g),
            _ => None,
        }
    }

    /// Declare a group generator together with its derivative letters:
    /// `g⁻¹`, `dg`, `δg`, `dδg`.  Returns the base id.
    pub fn add_group(&mut self, name: &str, group: &str) -> GroupLetters {
        let kind = GenKind::Group { group: group.to_string() };
        let g = self.add_gen(name, Bidegree::new(0, 0), kind.clone(), Derived::Base);
        let ginv = self.add_gen(
            &format!("{name}⁻¹"),
            Bidegree::new(0, 0),
            kind,
            Derived::Inverse(g),
        );
        let mk = GenKind::Matrix { symmetric: false };
        let dg = self.add_gen(&format!("d{name}"), Bidegree::new(1, 0), mk.clone(), Derived::D(g));
        let vg = self.add_gen(&format!("δ{name}"), Bidegree::new(0, 1), mk.clone(), Derived::Var(g));
        let dvg =
            self.add_gen(&format!("dδ{name}"), Bidegree::new(1, 1), mk, Derived::D(vg));
        GroupLetters { g, ginv, dg, vg, dvg }
    }

    /// Declare the variational basis letters `δX` and `dδX` for a base
    /// generator.  Their kind mirrors the base (matrix-valued).
    pub fn add_var_basis(&mut self, base: GenId) -> (GenId, GenId) {
        let info = self.gen(base).clone();
        let vdeg = Bidegree::new(info.deg.p, info.deg.q + 1);
        let kind = info.kind.clone();
        let v = self.add_gen(&format!("δ{}", info.name), vdeg, kind.clone(), Derived::Var(base));
        let dv = self.add_gen(
            &format!("dδ{}", info.name),
            Bidegree::new(vdeg.p + 1, vdeg.q),
            kind,
            Derived::D(v),
        );
        (v, dv)
    }
}

/// The letter family of one group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GroupLetters {
    pub g: GenId,
    pub ginv: GenId,
    pub dg: GenId,
    pub vg: GenId,
    pub dvg: GenId,
}
